"""Closed-form algebra of repeater links under amplitude damping.

Every two-qubit link produced by per-step amplitude damping on both
memories and by deterministic entanglement swapping is block-diagonal in
the Bell basis {Phi+, Phi-, Psi+, Psi-} and fully described by four real
coefficients:

    h1, h2   populations of Phi+ and Phi-,
    h3       the (real) Phi+/Phi- coherence,
    h4       the (real) Psi+/Psi- coherence,

with both Psi populations equal to the derived h5 = (1 - h1 - h2) / 2.
The update and swap rules below keep states inside this family, so a
network simulation can track four floats per link instead of a dense 4x4
density matrix.  The brute-force cross-check lives in
:mod:`adchain.oracle`, which never calls into this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import InvalidParameterError, InvalidStateError

#: Absolute tolerance for physicality checks and oracle equivalence.
#: Double precision loses at most a few ulps per rule application, so
#: 1e-12 stays comfortable even after long noise/swap histories.
PHYS_ATOL = 1e-12


class LinkState(NamedTuple):
    """Bell-basis coefficients of one link (see module docstring)."""

    h1: float
    h2: float
    h3: float
    h4: float

    @property
    def h5(self) -> float:
        """Population of each of Psi+ and Psi- (derived)."""
        return 0.5 * (1.0 - self.h1 - self.h2)


@dataclass(frozen=True)
class NoiseParams:
    """Per-step amplitude damping strength of the quantum memories.

    ``gamma`` and the coherence time ``m_star`` are two views of the same
    quantity, tied by gamma = 1 - exp(-1/m_star); either may act as the
    source of truth via the factory classmethods.  gamma = 0 pairs with an
    infinite coherence time, gamma = 1 with a vanishing one.
    """

    gamma: float
    m_star: float

    def __post_init__(self) -> None:
        if not (isinstance(self.gamma, float) and 0.0 <= self.gamma <= 1.0):
            raise InvalidParameterError(f"gamma must be a float in [0, 1], got {self.gamma!r}")
        if not (isinstance(self.m_star, float) and self.m_star >= 0.0):
            raise InvalidParameterError(f"m_star must be a non-negative float, got {self.m_star!r}")
        if self.m_star == 0.0:
            expected = 1.0
        elif math.isinf(self.m_star):
            expected = 0.0
        else:
            expected = -math.expm1(-1.0 / self.m_star)
        if abs(self.gamma - expected) > 1e-9:
            raise InvalidParameterError(
                f"inconsistent parameters: gamma={self.gamma!r} but m_star={self.m_star!r} "
                f"implies gamma={expected!r}"
            )

    @classmethod
    def from_m_star(cls, m_star: float) -> "NoiseParams":
        return cls(gamma=gamma_from_coherence_time(m_star), m_star=float(m_star))

    @classmethod
    def from_gamma(cls, gamma: float) -> "NoiseParams":
        gamma = float(gamma)
        if not (math.isfinite(gamma) and 0.0 <= gamma <= 1.0):
            raise InvalidParameterError(f"gamma must be in [0, 1], got {gamma!r}")
        if gamma == 0.0:
            m_star = math.inf
        elif gamma == 1.0:
            m_star = 0.0
        else:
            m_star = -1.0 / math.log1p(-gamma)
        return cls(gamma=gamma, m_star=m_star)


def gamma_from_coherence_time(m_star: float) -> float:
    """Damping strength per time step of a memory with coherence time ``m_star``."""
    if not (isinstance(m_star, (int, float)) and math.isfinite(m_star) and m_star > 0):
        raise InvalidParameterError(f"m_star must be a finite positive number, got {m_star!r}")
    # expm1 keeps full precision in the long-coherence limit
    return -math.expm1(-1.0 / m_star)


def fresh_link() -> LinkState:
    """A newly generated elementary link: the ideal Phi+ pair."""
    return LinkState(1.0, 0.0, 0.0, 0.0)


def noise_update(state: LinkState, age: int, params: NoiseParams) -> LinkState:
    """Apply ``age`` time steps of amplitude damping to both memories of a link.

    With t = (1-gamma)**age, the Phi-block coherence relaxes towards 1/2 as
    (1-t)/2 + t*h3, the Psi-block coherence shrinks as t*h4, and the
    populations mix through the Z sector of the channel.  age = 0 is an
    exact identity (t = 1 exactly, no division involved).
    """
    _require_physical(state, "noise_update")
    if age < 0:
        raise InvalidParameterError(f"age must be non-negative, got {age!r}")
    if age == 0:
        return state
    h1, h2, h3, h4 = state
    t = (1.0 - params.gamma) ** age
    omt = 1.0 - t
    t_plus = omt * omt + t * t
    t_minus = omt * omt - t * t
    # population inflow shared by h1 and h2: 2*h5*(1 + t_minus) + 4*h3*t*(1 - t)
    mix = (1.0 - h1 - h2) * (1.0 + t_minus) + 4.0 * h3 * t * omt
    return LinkState(
        0.25 * (h1 * (1.0 + 2.0 * t + t_plus) + h2 * (1.0 - 2.0 * t + t_plus) + mix),
        0.25 * (h1 * (1.0 - 2.0 * t + t_plus) + h2 * (1.0 + 2.0 * t + t_plus) + mix),
        0.5 * omt + t * h3,
        t * h4,
    )


def swap_links(left: LinkState, right: LinkState) -> LinkState:
    """Deterministic entanglement swap of two adjacent links.

    ``left`` is the link whose coherences survive into the output: the
    Bell measurement happens between the two inner memories and the Pauli
    correction is applied at the right end (forward classical
    communication).  The fidelity h1 of the result is symmetric under
    exchanging the arguments; h4 in general is not.
    """
    _require_physical(left, "swap_links (left input)")
    _require_physical(right, "swap_links (right input)")
    f1, f2, f3, f4 = left
    g1, g2 = right.h1, right.h2
    zf = 2.0 * (f1 + f2) - 1.0  # 1 minus four times the Psi population
    zg = 2.0 * (g1 + g2) - 1.0
    diag = 0.0625 * (1.0 + zf * zg)
    cross = 0.0625 * (f1 - f2) * (g1 - g2)
    co_sum = 0.125 * (f3 + f4)
    co_diff = 0.125 * (f3 - f4) * zg
    return LinkState(
        4.0 * (diag + 2.0 * cross),
        4.0 * (diag - 2.0 * cross),
        4.0 * (co_sum + co_diff),
        4.0 * (co_sum - co_diff),
    )


def fidelity(state: LinkState) -> float:
    """Overlap with the target Phi+ Bell state; reads the first coefficient."""
    return state.h1


def concurrence(state: LinkState) -> float:
    """Wootters concurrence, in closed form for this X-shaped family."""
    h1, h2, _, h4 = state
    radicand = (1.0 - h1 - h2) ** 2 - 4.0 * h4 * h4
    if radicand < 0.0:
        if radicand < -PHYS_ATOL:
            raise InvalidStateError(
                "concurrence: Psi-block coherence exceeds its populations, "
                f"(1-h1-h2)^2 = {(1.0 - h1 - h2) ** 2!r} < 4*h4^2 = {4.0 * h4 * h4!r}"
            )
        radicand = 0.0
    return max(0.0, abs(h1 - h2) - math.sqrt(radicand))


def validate_physical(state: LinkState, atol: float = PHYS_ATOL) -> tuple[bool, str]:
    """Check every family invariant; returns (ok, first violated inequality)."""
    h1, h2, h3, h4 = state
    if not (math.isfinite(h1) and math.isfinite(h2) and math.isfinite(h3) and math.isfinite(h4)):
        return False, "non-finite coefficient"
    if h1 < -atol or h1 > 1.0 + atol:
        return False, f"h1 = {h1!r} outside [0, 1]"
    if h2 < -atol or h2 > 1.0 + atol:
        return False, f"h2 = {h2!r} outside [0, 1]"
    if h1 + h2 > 1.0 + atol:
        return False, f"normalization violation: h1 + h2 = {h1 + h2!r} > 1"
    h5 = 0.5 * (1.0 - h1 - h2)
    if h5 - abs(h4) < -atol:
        return False, f"Psi-block violation: h5 = {h5!r} < |h4| = {abs(h4)!r}"
    if h1 * h2 - h3 * h3 < -atol:
        return False, f"Phi-block violation: h1*h2 = {h1 * h2!r} < h3^2 = {h3 * h3!r}"
    return True, "physical"


def _require_physical(state: LinkState, where: str) -> None:
    ok, why = validate_physical(state)
    if not ok:
        raise InvalidStateError(f"{where}: {why}")
