"""Pauli-twirled amplitude damping baseline.

Averaging the per-step damping channel over Pauli conjugations yields a
Pauli channel.  Links in a chain of such memories stay Bell-diagonal, and
one integer, the total number of noise steps the link has absorbed
(including the ages inherited from consumed links), determines the whole
state: swapping simply adds ages.

All formulas are written in terms of gamma; with gamma = 1 - exp(-1/m*)
the per-step contractions sqrt(1-gamma) and (1-gamma) equal
exp(-1/(2 m*)) and exp(-1/m*), so (1-gamma)**n is the exp(-n/m*) decay of
an age-n link.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .bell_algebra import NoiseParams
from .errors import InvalidParameterError


class TwirledLink(NamedTuple):
    """A Bell-diagonal link; the accumulated age is its only parameter."""

    accumulated_age: int


class TwirlProbs(NamedTuple):
    """Pauli error probabilities of the twirled per-step channel."""

    p_i: float
    p_x: float
    p_y: float
    p_z: float


def twirl_probabilities(params: NoiseParams) -> TwirlProbs:
    """Error probabilities of one twirled damping step; they sum to one."""
    gamma = params.gamma
    if not (isinstance(gamma, float) and 0.0 <= gamma <= 1.0):
        raise InvalidParameterError(f"gamma must be in [0, 1], got {gamma!r}")
    contraction = math.sqrt(1.0 - gamma)  # X/Y Bloch contraction per step
    p_flip = 0.25 * gamma
    return TwirlProbs(
        0.5 * (1.0 + contraction) - p_flip,
        p_flip,
        p_flip,
        0.5 * (1.0 - contraction) - p_flip,
    )


def _decay(link: TwirledLink, params: NoiseParams) -> float:
    age = link.accumulated_age
    if age < 0:
        raise InvalidParameterError(f"accumulated_age must be non-negative, got {age!r}")
    return (1.0 - params.gamma) ** age


def twirled_coefficients(
    link: TwirledLink, params: NoiseParams
) -> tuple[float, float, float, float]:
    """Bell-diagonal populations (Phi+, Phi-, Psi+, Psi-) at the link's age."""
    d = _decay(link, params)
    d2 = d * d
    psi = 0.25 * (1.0 - d2)
    return (0.25 * (1.0 + d2 + 2.0 * d), 0.25 * (1.0 + d2 - 2.0 * d), psi, psi)


def twirled_fidelity(link: TwirledLink, params: NoiseParams) -> float:
    """Overlap with Phi+; equals the first Bell-diagonal coefficient."""
    d = _decay(link, params)
    return 0.25 * (1.0 + d) ** 2


def twirled_concurrence(link: TwirledLink, params: NoiseParams) -> float:
    """Concurrence of a Bell-diagonal link: zero once the fidelity drops to 1/2."""
    return max(0.0, 2.0 * twirled_fidelity(link, params) - 1.0)


def twirled_swap(left: TwirledLink, right: TwirledLink) -> TwirledLink:
    """Entanglement swap of twirled links: noise acts additively on the age."""
    return TwirledLink(left.accumulated_age + right.accumulated_age)
