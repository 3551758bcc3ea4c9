import math
from random import Random

import pytest

from adchain import (
    InvalidParameterError,
    InvalidStateError,
    LinkState,
    NoiseParams,
    concurrence,
    fidelity,
    fresh_link,
    gamma_from_coherence_time,
    noise_update,
    swap_links,
    validate_physical,
)
from adchain.selfcheck import random_reachable_state

from conftest import random_family_state

GAMMA_HALF = NoiseParams.from_gamma(0.5)
DAMPED_ONE_STEP = LinkState(0.625, 0.125, 0.25, 0.0)


class TestNoiseParams:
    def test_gamma_from_coherence_time(self):
        assert gamma_from_coherence_time(1.0) == pytest.approx(1.0 - math.exp(-1.0), abs=1e-15)
        assert gamma_from_coherence_time(5.0) == pytest.approx(0.18126924692201815, abs=1e-15)

    def test_noiseless_limit(self):
        assert 0.0 < gamma_from_coherence_time(1e12) < 1e-11

    @pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
    def test_rejects_bad_coherence_time(self, bad):
        with pytest.raises(InvalidParameterError):
            gamma_from_coherence_time(bad)

    def test_factories_agree(self):
        params = NoiseParams.from_m_star(5.0)
        assert params.gamma == pytest.approx(0.18126924692201815, abs=1e-15)
        round_trip = NoiseParams.from_gamma(params.gamma)
        assert round_trip.m_star == pytest.approx(5.0, rel=1e-12)

    def test_degenerate_endpoints(self):
        assert NoiseParams.from_gamma(0.0).m_star == math.inf
        assert NoiseParams.from_gamma(1.0).m_star == 0.0

    def test_inconsistent_pair_rejected(self):
        with pytest.raises(InvalidParameterError):
            NoiseParams(gamma=0.5, m_star=5.0)

    def test_gamma_out_of_range(self):
        with pytest.raises(InvalidParameterError):
            NoiseParams.from_gamma(1.5)


class TestNoiseUpdate:
    def test_fresh_link_is_ideal(self):
        assert fresh_link() == (1.0, 0.0, 0.0, 0.0)
        assert fidelity(fresh_link()) == 1.0
        assert concurrence(fresh_link()) == 1.0

    def test_age_zero_is_exact_identity(self, rng):
        for _ in range(50):
            state = random_reachable_state(rng)
            assert noise_update(state, 0, GAMMA_HALF) == state

    def test_one_step_on_fresh(self):
        updated = noise_update(fresh_link(), 1, GAMMA_HALF)
        assert updated == pytest.approx(DAMPED_ONE_STEP, abs=1e-15)

    @pytest.mark.parametrize("gamma", [0.1, 0.5, 0.18126924692201815])
    def test_elementary_closed_form(self, gamma):
        # aging the ideal pair m steps must give ((1+a^2)/2, (1-a)^2/2, (1-a)/2, 0)
        params = NoiseParams.from_gamma(gamma)
        for age in range(51):
            a = (1.0 - gamma) ** age
            expected = (0.5 * (1 + a * a), 0.5 * (1 - a) ** 2, 0.5 * (1 - a), 0.0)
            assert noise_update(fresh_link(), age, params) == pytest.approx(expected, abs=1e-12)

    def test_semigroup_composition(self, rng):
        for _ in range(200):
            state = random_reachable_state(rng)
            params = NoiseParams.from_gamma(rng.uniform(0.05, 0.95))
            n1, n2 = rng.randint(0, 10), rng.randint(0, 10)
            two_step = noise_update(noise_update(state, n1, params), n2, params)
            one_step = noise_update(state, n1 + n2, params)
            assert two_step == pytest.approx(one_step, abs=1e-12)

    def test_psi_population_update_consistency(self, rng):
        # the derived Psi population must follow its own linear update rule
        for _ in range(200):
            state = random_reachable_state(rng)
            gamma = rng.uniform(0.05, 0.95)
            age = rng.randint(1, 10)
            t = (1.0 - gamma) ** age
            t_plus = (1 - t) ** 2 + t * t
            t_minus = (1 - t) ** 2 - t * t
            expected_h5 = 0.25 * (
                (state.h1 + state.h2) * (1 - t_plus)
                + 2.0 * state.h5 * (1 - t_minus)
                - 4.0 * state.h3 * t * (1 - t)
            )
            updated = noise_update(state, age, NoiseParams.from_gamma(gamma))
            assert updated.h5 == pytest.approx(expected_h5, abs=1e-12)

    def test_fidelity_monotone_under_noise(self):
        params = NoiseParams.from_m_star(5.0)
        fids = [fidelity(noise_update(fresh_link(), n, params)) for n in range(30)]
        assert all(a >= b for a, b in zip(fids, fids[1:]))

    def test_rejects_negative_age(self):
        with pytest.raises(InvalidParameterError):
            noise_update(fresh_link(), -1, GAMMA_HALF)

    def test_rejects_unphysical_state(self):
        with pytest.raises(InvalidStateError):
            noise_update(LinkState(0.5, 0.5, 0.6, 0.0), 1, GAMMA_HALF)


class TestSwap:
    def test_ideal_swap_preserves_ideal(self):
        assert swap_links(fresh_link(), fresh_link()) == pytest.approx(fresh_link(), abs=1e-15)

    def test_damped_pair_example(self):
        swapped = swap_links(DAMPED_ONE_STEP, DAMPED_ONE_STEP)
        assert swapped == pytest.approx((0.4375, 0.1875, 0.1875, 0.0625), abs=1e-15)

    @pytest.mark.parametrize("gamma", [0.1, 0.5, 0.18126924692201815])
    def test_first_swap_closed_form(self, gamma):
        params = NoiseParams.from_gamma(gamma)
        for m1 in range(0, 21, 4):
            a = (1.0 - gamma) ** m1
            aa = a * a + (1 - a) ** 2
            left = noise_update(fresh_link(), m1, params)
            for m2 in range(0, 21, 4):
                b = (1.0 - gamma) ** m2
                bb = b * b + (1 - b) ** 2
                expected = (
                    0.25 * (1 + 2 * a * b + aa * bb),
                    0.25 * (1 - 2 * a * b + aa * bb),
                    0.25 * (1 - a) * (1 + bb),
                    0.25 * (1 - a) * (1 - bb),
                )
                right = noise_update(fresh_link(), m2, params)
                assert swap_links(left, right) == pytest.approx(expected, abs=1e-12)

    def test_fidelity_symmetric_coherence_not(self, rng):
        h4_gap = 0.0
        for _ in range(1000):
            left = random_family_state(rng)
            right = random_family_state(rng)
            forward = swap_links(left, right)
            backward = swap_links(right, left)
            assert forward.h1 == pytest.approx(backward.h1, abs=1e-12)
            h4_gap = max(h4_gap, abs(forward.h4 - backward.h4))
        assert h4_gap > 1e-3  # the surviving coherence depends on the direction

    def test_swap_is_associative(self, rng):
        # order of an age-0 cascade cannot matter
        for _ in range(300):
            a, b, c = (random_family_state(rng) for _ in range(3))
            left_fold = swap_links(swap_links(a, b), c)
            right_fold = swap_links(a, swap_links(b, c))
            assert left_fold == pytest.approx(right_fold, abs=1e-12)

    def test_outputs_stay_physical(self, rng):
        for _ in range(500):
            out = swap_links(random_family_state(rng), random_family_state(rng))
            ok, why = validate_physical(out)
            assert ok, why
            assert out.h1 + out.h2 + 2 * out.h5 == pytest.approx(1.0, abs=1e-12)

    def test_rejects_unphysical_input(self):
        with pytest.raises(InvalidStateError):
            swap_links(LinkState(0.5, 0.5, 0.6, 0.0), fresh_link())


class TestConcurrence:
    def test_examples(self):
        assert concurrence(LinkState(0.5, 0.5, 0.0, 0.0)) == 0.0
        assert concurrence(LinkState(0.4375, 0.1875, 0.1875, 0.0625)) == 0.0
        assert fidelity(LinkState(0.4375, 0.1875, 0.1875, 0.0625)) == 0.4375

    def test_zero_onset(self):
        # |h1-h2| has to beat the Psi-block term
        state = LinkState(0.7, 0.1, 0.0, 0.05)
        expected = 0.6 - math.sqrt(0.2**2 - 4 * 0.05**2)
        assert concurrence(state) == pytest.approx(expected, abs=1e-15)

    def test_range(self, rng):
        for _ in range(500):
            value = concurrence(random_family_state(rng))
            assert 0.0 <= value <= 1.0

    def test_radicand_guard(self):
        with pytest.raises(InvalidStateError):
            concurrence(LinkState(0.1, 0.1, 0.0, 0.5))

    def test_tiny_negative_radicand_clamps(self):
        state = LinkState(0.5, 0.5, 0.0, 5e-13)
        assert concurrence(state) == 0.0


class TestValidatePhysical:
    def test_accepts_ideal(self):
        ok, detail = validate_physical(fresh_link())
        assert ok and detail == "physical"

    def test_phi_block_violation(self):
        ok, detail = validate_physical(LinkState(0.5, 0.5, 0.6, 0.0))
        assert not ok
        assert "Phi-block" in detail

    def test_psi_block_violation(self):
        ok, detail = validate_physical(LinkState(0.4, 0.4, 0.0, 0.2))
        assert not ok
        assert "Psi-block" in detail

    def test_population_bounds(self):
        assert not validate_physical(LinkState(1.2, 0.0, 0.0, 0.0))[0]
        assert not validate_physical(LinkState(0.0, -0.1, 0.0, 0.0))[0]
        assert not validate_physical(LinkState(0.7, 0.4, 0.0, 0.0))[0]

    def test_non_finite(self):
        assert not validate_physical(LinkState(math.nan, 0.0, 0.0, 0.0))[0]

    def test_tolerance_boundary(self):
        # violations within 1e-12 pass, beyond it fail
        assert validate_physical(LinkState(0.5, 0.5, 0.0, 5e-13))[0]
        assert not validate_physical(LinkState(0.5, 0.5, 0.0, 1e-11))[0]

    def test_rule_generated_states_pass(self):
        rng = Random(7)
        for _ in range(2000):
            ok, detail = validate_physical(random_reachable_state(rng))
            assert ok, detail
