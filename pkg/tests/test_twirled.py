import math

import pytest

from adchain import (
    InvalidParameterError,
    NoiseParams,
    TwirledLink,
    twirl_probabilities,
    twirled_coefficients,
    twirled_concurrence,
    twirled_fidelity,
    twirled_swap,
)

M5 = NoiseParams.from_m_star(5.0)


def test_probabilities_noiseless_limit():
    assert twirl_probabilities(NoiseParams.from_gamma(0.0)) == (1.0, 0.0, 0.0, 0.0)


def test_probabilities_at_m_star_5():
    probs = twirl_probabilities(M5)
    assert probs.p_i == pytest.approx(0.9071013972874752, abs=1e-15)
    assert probs.p_x == pytest.approx(0.04531731173050454, abs=1e-15)
    assert probs.p_y == probs.p_x
    assert probs.p_z == pytest.approx(0.0022639792515157034, abs=1e-15)


def test_probabilities_normalized(rng):
    for _ in range(100):
        probs = twirl_probabilities(NoiseParams.from_m_star(rng.uniform(0.1, 100.0)))
        assert sum(probs) == pytest.approx(1.0, abs=1e-12)
        assert all(p >= 0.0 for p in probs)


def test_coefficients_fresh():
    assert twirled_coefficients(TwirledLink(0), M5) == (1.0, 0.0, 0.0, 0.0)


def test_coefficients_age_two():
    q1, q2, q3, q4 = twirled_coefficients(TwirledLink(2), M5)
    assert q1 == pytest.approx(0.6974922640471248, abs=1e-12)
    assert q3 == q4
    assert q1 + q2 + q3 + q4 == pytest.approx(1.0, abs=1e-12)


def test_coefficients_normalized(rng):
    for _ in range(100):
        params = NoiseParams.from_m_star(rng.uniform(0.2, 50.0))
        coeffs = twirled_coefficients(TwirledLink(rng.randint(0, 40)), params)
        assert sum(coeffs) == pytest.approx(1.0, abs=1e-12)


def test_fidelity_matches_first_coefficient(rng):
    for _ in range(50):
        link = TwirledLink(rng.randint(0, 30))
        assert twirled_fidelity(link, M5) == pytest.approx(
            twirled_coefficients(link, M5)[0], abs=1e-15
        )


def test_fidelity_limits():
    assert twirled_fidelity(TwirledLink(0), M5) == 1.0
    assert twirled_fidelity(TwirledLink(2), M5) == pytest.approx(0.6974922640471248, abs=1e-12)
    assert twirled_fidelity(TwirledLink(10**6), M5) == pytest.approx(0.25, abs=1e-12)


def test_concurrence_values():
    assert twirled_concurrence(TwirledLink(0), M5) == 1.0
    assert twirled_concurrence(TwirledLink(2), M5) == pytest.approx(
        0.39498452809424967, abs=1e-12
    )


def test_concurrence_first_zero_age():
    # fidelity crosses 1/2 between ages 4 and 5 at this coherence time
    values = [twirled_concurrence(TwirledLink(n), M5) for n in range(12)]
    assert twirled_fidelity(TwirledLink(4), M5) == pytest.approx(0.5251386115572746, abs=1e-12)
    assert twirled_fidelity(TwirledLink(5), M5) == pytest.approx(0.4677735413948743, abs=1e-12)
    assert values[4] > 0.0
    first_zero = next(n for n, c in enumerate(values) if c == 0.0)
    assert first_zero == 5
    assert all(c == 0.0 for c in values[5:])


def test_concurrence_zero_iff_fidelity_below_half(rng):
    for _ in range(200):
        params = NoiseParams.from_m_star(rng.uniform(0.3, 30.0))
        link = TwirledLink(rng.randint(0, 40))
        conc = twirled_concurrence(link, params)
        fid = twirled_fidelity(link, params)
        assert (conc == 0.0) == (fid <= 0.5)


def test_swap_adds_ages():
    assert twirled_swap(TwirledLink(0), TwirledLink(0)) == TwirledLink(0)
    assert twirled_swap(TwirledLink(3), TwirledLink(5)) == TwirledLink(8)


def test_swap_associative_commutative(rng):
    for _ in range(50):
        a, b, c = (TwirledLink(rng.randint(0, 20)) for _ in range(3))
        assert twirled_swap(a, b) == twirled_swap(b, a)
        assert twirled_swap(twirled_swap(a, b), c) == twirled_swap(a, twirled_swap(b, c))


def test_exact_model_dominates_at_equal_age():
    # elementary-link fidelity (1+a^2)/2 vs twirled (1+a)^2/4
    for k in range(101):
        a = k / 100.0
        exact = 0.5 * (1.0 + a * a)
        twirled = 0.25 * (1.0 + a) ** 2
        if a < 1.0:
            assert exact > twirled
        else:
            assert exact == twirled


def test_negative_age_rejected():
    with pytest.raises(InvalidParameterError):
        twirled_coefficients(TwirledLink(-1), M5)
