"""Cross-checks between the closed-form rules and the density oracle.

Bundled behind the command line's ``validate`` mode so that CI has one
entry point for the whole oracle-equivalence battery; the pytest
acceptance module calls the same functions with the full sample sizes.
Each check returns (name, ok, detail).
"""

from __future__ import annotations

from random import Random

import numpy as np

from . import oracle
from .bell_algebra import (
    LinkState,
    NoiseParams,
    concurrence,
    fresh_link,
    gamma_from_coherence_time,
    noise_update,
    swap_links,
    validate_physical,
)
from .twirled import TwirledLink, twirl_probabilities, twirled_coefficients

CheckResult = tuple[str, bool, str]


def random_history(rng: Random, depth: int = 2, max_ops: int = 3) -> tuple[LinkState, np.ndarray]:
    """A random interleaving of noise and swap operations from fresh links.

    The closed-form state and its density-matrix mirror are built in
    lockstep through entirely separate code paths, starting from the ideal
    Bell pair; swaps recurse into an independently generated partner link.
    """
    state = fresh_link()
    rho = oracle.bell_density(0, 0)
    for _ in range(rng.randint(1, max_ops)):
        if depth > 0 and rng.random() < 0.45:
            other_state, other_rho = random_history(rng, depth - 1, max_ops)
            if rng.random() < 0.5:
                state, rho = swap_links(state, other_state), oracle.swap_oracle(rho, other_rho)
            else:
                state, rho = swap_links(other_state, state), oracle.swap_oracle(other_rho, rho)
        else:
            gamma = rng.uniform(0.02, 0.98)
            age = rng.randint(0, 6)
            state = noise_update(state, age, NoiseParams.from_gamma(gamma))
            for _ in range(age):
                rho = oracle.adc_step(rho, 0, gamma)
                rho = oracle.adc_step(rho, 1, gamma)
    return state, rho


def random_reachable_state(rng: Random, depth: int = 2) -> LinkState:
    """A random member of the family, generated by the rules alone."""
    state = fresh_link()
    for _ in range(rng.randint(1, 3)):
        if depth > 0 and rng.random() < 0.45:
            other = random_reachable_state(rng, depth - 1)
            if rng.random() < 0.5:
                state = swap_links(state, other)
            else:
                state = swap_links(other, state)
        else:
            state = noise_update(
                state, rng.randint(0, 6), NoiseParams.from_gamma(rng.uniform(0.02, 0.98))
            )
    return state


def _link_deviation(a: LinkState, b: LinkState) -> float:
    return max(abs(x - y) for x, y in zip(a, b))


def check_noise_rule(cases: int = 1000, seed: int = 101) -> CheckResult:
    """Closed-form noise update vs repeated Kraus application, entrywise."""
    rng = Random(seed)
    worst = 0.0
    for _ in range(cases):
        state = random_reachable_state(rng, depth=1)
        gamma = rng.uniform(0.01, 0.99)
        age = rng.randint(0, 20)
        updated = noise_update(state, age, NoiseParams.from_gamma(gamma))
        rho = oracle.link_to_density(state)
        for _ in range(age):
            rho = oracle.adc_step(rho, 0, gamma)
            rho = oracle.adc_step(rho, 1, gamma)
        dev = float(np.abs(oracle.link_to_density(updated) - rho).max())
        worst = max(worst, dev)
    ok = worst <= 1e-12
    return "noise rule vs density oracle", ok, f"max deviation {worst:.3e} over {cases} cases"


def check_swap_rule(cases: int = 1000, seed: int = 202) -> CheckResult:
    """Closed-form swap vs Bell measurement with forward corrections."""
    rng = Random(seed)
    worst = 0.0
    for _ in range(cases):
        left = random_reachable_state(rng, depth=1)
        right = random_reachable_state(rng, depth=1)
        swapped = swap_links(left, right)
        extracted = oracle.density_to_link(
            oracle.swap_oracle(oracle.link_to_density(left), oracle.link_to_density(right))
        )
        worst = max(worst, _link_deviation(swapped, extracted))
    ok = worst <= 1e-12
    return "swap rule vs density oracle", ok, f"max deviation {worst:.3e} over {cases} pairs"


def check_closed_forms(max_age: int = 20) -> CheckResult:
    """General rules reproduce the elementary-link and first-swap formulas."""
    worst = 0.0
    gammas = (0.1, 0.5, gamma_from_coherence_time(5.0))
    for gamma in gammas:
        params = NoiseParams.from_gamma(gamma)
        for m1 in range(max_age + 1):
            a = (1.0 - gamma) ** m1
            elementary = LinkState(0.5 * (1.0 + a * a), 0.5 * (1.0 - a) ** 2, 0.5 * (1.0 - a), 0.0)
            worst = max(worst, _link_deviation(noise_update(fresh_link(), m1, params), elementary))
        for m1 in range(max_age + 1):
            a = (1.0 - gamma) ** m1
            aa = a * a + (1.0 - a) ** 2
            left = noise_update(fresh_link(), m1, params)
            for m2 in range(max_age + 1):
                b = (1.0 - gamma) ** m2
                bb = b * b + (1.0 - b) ** 2
                expected = LinkState(
                    0.25 * (1.0 + 2.0 * a * b + aa * bb),
                    0.25 * (1.0 - 2.0 * a * b + aa * bb),
                    0.25 * (1.0 - a) * (1.0 + bb),
                    0.25 * (1.0 - a) * (1.0 - bb),
                )
                right = noise_update(fresh_link(), m2, params)
                worst = max(worst, _link_deviation(swap_links(left, right), expected))
    ok = worst <= 1e-12
    return "elementary and first-swap closed forms", ok, f"max deviation {worst:.3e}"


def check_concurrence(cases: int = 1000, seed: int = 303) -> CheckResult:
    """X-state closed form vs the spin-flip eigenvalue concurrence."""
    rng = Random(seed)
    worst = 0.0
    zeros = 0
    for _ in range(cases):
        state = random_reachable_state(rng)
        closed = concurrence(state)
        eig = oracle.wootters_concurrence(oracle.link_to_density(state))
        worst = max(worst, abs(closed - eig))
        if closed == 0.0:
            zeros += 1
    ok = worst <= 1e-10 and zeros > 0
    return (
        "concurrence closed form vs eigenvalue form",
        ok,
        f"max deviation {worst:.3e} over {cases} states ({zeros} with zero concurrence)",
    )


def check_twirl(max_age: int = 20, seed: int = 404) -> CheckResult:
    """Twirl probabilities, channel equivalence and additive-age swapping."""
    rng = Random(seed)
    worst = 0.0
    # probabilities: normalization and the X/Y symmetry
    for _ in range(100):
        probs = twirl_probabilities(NoiseParams.from_m_star(rng.uniform(0.1, 100.0)))
        worst = max(worst, abs(sum(probs) - 1.0), abs(probs.p_x - probs.p_y))
    # explicit four-term twirl equals the Pauli channel
    for m_star in (1.0, 5.0, 10.0):
        params = NoiseParams.from_m_star(m_star)
        probs = twirl_probabilities(params)
        for _ in range(25):
            state, _ = random_history(rng, depth=1)
            rho = oracle.link_to_density(state)
            for qubit in (0, 1):
                dev = np.abs(
                    oracle.twirled_step(rho, qubit, params)
                    - oracle.pauli_channel_step(rho, qubit, probs)
                ).max()
                worst = max(worst, float(dev))
    # Bell-diagonal coefficients and additive-age swaps vs the oracle
    params = NoiseParams.from_m_star(5.0)
    evolved = [oracle.bell_density(0, 0)]
    for age in range(1, max_age + 1):
        rho = oracle.twirled_step(evolved[-1], 0, params)
        evolved.append(oracle.twirled_step(rho, 1, params))
    for age, rho in enumerate(evolved):
        expected = np.diag(np.array(twirled_coefficients(TwirledLink(age), params), dtype=complex))
        bell_diag = oracle.BELL.conj().T @ rho @ oracle.BELL
        worst = max(worst, float(np.abs(bell_diag - expected).max()))
    for age_left, age_right in ((0, 0), (1, 2), (2, 3), (5, 5), (7, 13), (0, 20), (20, 0)):
        swapped = oracle.swap_oracle(evolved[age_left], evolved[age_right])
        worst = max(worst, float(np.abs(swapped - evolved[age_left + age_right]).max()))
    ok = worst <= 1e-12
    return "twirled channel and additive-age swap", ok, f"max deviation {worst:.3e}"


def check_closure(cases: int = 10_000, seed: int = 505) -> CheckResult:
    """Random interleavings stay in the family and match the oracle."""
    rng = Random(seed)
    worst = 0.0
    for _ in range(cases):
        state, rho = random_history(rng)
        ok, why = validate_physical(state)
        if not ok:
            return "closure of the four-parameter family", False, f"unphysical state: {why}"
        extracted = oracle.density_to_link(rho)  # raises if outside the family
        worst = max(worst, _link_deviation(state, extracted))
    ok = worst <= 1e-12
    return (
        "closure of the four-parameter family",
        ok,
        f"max deviation {worst:.3e} over {cases} histories",
    )


def run_all() -> list[CheckResult]:
    """Every oracle suite at its full sample size."""
    return [
        check_noise_rule(),
        check_swap_rule(),
        check_closed_forms(),
        check_concurrence(),
        check_twirl(),
        check_closure(),
    ]
