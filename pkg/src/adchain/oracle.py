"""Brute-force density-matrix ground truth.

Dense complex matrices for two-qubit links (4x4) and for the transient
four-qubit system during a swap (16x16): explicit Kraus evolution of the
damping channel, the explicit four-term twirl, Bell measurement with
forward Pauli corrections, and the eigenvalue form of the concurrence.

This module is an independent implementation path: it never calls the
closed-form rules in :mod:`adchain.bell_algebra`, so tests can compare
the two routes entrywise.  It favors clarity over speed; the Monte Carlo
hot path does not go through here.
"""

from __future__ import annotations

import numpy as np

from .bell_algebra import LinkState, NoiseParams, validate_physical
from .errors import InvalidParameterError, InvalidStateError, NotInFamilyError
from .twirled import TwirlProbs

HERM_ATOL = 1e-12
TRACE_ATOL = 1e-12
#: Eigenvalues above this (tiny negative) floor count as numerical dust.
EIG_FLOOR = -1e-10
#: Tolerance on Bell-basis entries that must vanish for a state to belong
#: to the four-parameter family.
STRUCT_ATOL = 1e-10

ID2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

_PHI_PLUS = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / np.sqrt(2.0)


def bell_ket(x: int, z: int) -> np.ndarray:
    """The Bell vector (1 x X^x Z^z)|Phi+>."""
    op = np.linalg.matrix_power(PAULI_X, x) @ np.linalg.matrix_power(PAULI_Z, z)
    return np.kron(ID2, op) @ _PHI_PLUS


#: Columns are |Phi+>, |Phi->, |Psi+>, |Psi-> in that order.
BELL = np.column_stack([bell_ket(0, 0), bell_ket(0, 1), bell_ket(1, 0), bell_ket(1, 1)])


def bell_density(x: int, z: int) -> np.ndarray:
    """Projector onto one Bell state."""
    ket = bell_ket(x, z)
    return np.outer(ket, ket.conj())


def assert_density(rho: np.ndarray, where: str = "density matrix") -> np.ndarray:
    """Raise InvalidStateError unless rho is Hermitian, trace one and PSD."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidStateError(f"{where}: expected a square matrix, got shape {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > HERM_ATOL:
        raise InvalidStateError(f"{where}: not Hermitian within {HERM_ATOL}")
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_ATOL:
        raise InvalidStateError(f"{where}: trace {tr!r} != 1 within {TRACE_ATOL}")
    min_eig = float(np.linalg.eigvalsh(rho).min())
    if min_eig < EIG_FLOOR:
        raise InvalidStateError(f"{where}: negative eigenvalue {min_eig!r}")
    return rho


def _embed(op: np.ndarray, qubit: int) -> np.ndarray:
    if qubit == 0:
        return np.kron(op, ID2)
    if qubit == 1:
        return np.kron(ID2, op)
    raise InvalidParameterError(f"qubit index must be 0 or 1, got {qubit!r}")


def adc_step(rho: np.ndarray, qubit: int, gamma: float) -> np.ndarray:
    """One amplitude damping step on one qubit of a two-qubit state.

    Kraus pair: K0 = |0><0| + sqrt(1-gamma)|1><1| and K1 = sqrt(gamma)|0><1|,
    applied as sum_i K_i rho K_i^dagger.  Trace preserving.
    """
    if not 0.0 <= gamma <= 1.0:
        raise InvalidParameterError(f"gamma must be in [0, 1], got {gamma!r}")
    k0 = _embed(np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]], dtype=complex), qubit)
    k1 = _embed(np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]], dtype=complex), qubit)
    return k0 @ rho @ k0.conj().T + k1 @ rho @ k1.conj().T


def twirled_step(rho: np.ndarray, qubit: int, params: NoiseParams) -> np.ndarray:
    """One step of the Pauli-twirled damping channel on one qubit.

    Computed as the explicit four-term conjugation average
    (N(r) + X N(X r X) X + Y N(Y r Y) Y + Z N(Z r Z) Z) / 4, which must
    agree with the Pauli channel built from twirl_probabilities.
    """
    out = adc_step(rho, qubit, params.gamma)
    for pauli in (PAULI_X, PAULI_Y, PAULI_Z):
        full = _embed(pauli, qubit)
        out = out + full @ adc_step(full @ rho @ full, qubit, params.gamma) @ full
    return out / 4.0


def pauli_channel_step(rho: np.ndarray, qubit: int, probs: TwirlProbs) -> np.ndarray:
    """Apply a Pauli channel with the given error probabilities to one qubit."""
    out = probs.p_i * rho
    for prob, pauli in zip((probs.p_x, probs.p_y, probs.p_z), (PAULI_X, PAULI_Y, PAULI_Z)):
        full = _embed(pauli, qubit)
        out = out + prob * (full @ rho @ full)
    return out


def swap_branches(left: np.ndarray, right: np.ndarray) -> list[np.ndarray]:
    """The four unnormalized outcome branches of an entanglement swap.

    The two links form the four-qubit product state on (P, Q1) x (Q2, R);
    the inner pair (Q1, Q2) is projected onto each Bell state and the
    matching correction X^x Z^z is applied to the right end R.  The trace
    of each branch is the probability of that measurement outcome.

    Every operator involved is real, so sandwiching with the transpose of
    the correction coincides with the adjoint convention.
    """
    left = assert_density(left, "swap (left input)")
    right = assert_density(right, "swap (right input)")
    rho4 = np.kron(left, right)
    branches = []
    for x in (0, 1):
        for z in (0, 1):
            bra = bell_ket(x, z).conj().reshape(1, 4)
            project = np.kron(np.kron(ID2, bra), ID2)  # 4x16: drops (Q1, Q2)
            correction = np.linalg.matrix_power(PAULI_X, x) @ np.linalg.matrix_power(PAULI_Z, z)
            op = np.kron(ID2, correction) @ project
            branches.append(op @ rho4 @ op.T)
    return branches


def swap_oracle(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Average post-swap state on the outer qubits (P, R); trace one."""
    branches = swap_branches(left, right)
    return branches[0] + branches[1] + branches[2] + branches[3]


def wootters_concurrence(rho: np.ndarray) -> float:
    """Concurrence via the spin-flip eigenvalue construction.

    Eigenvalues of rho (Y x Y) rho* (Y x Y) are computed with a general
    dense solver (the product is not Hermitian); tiny negative dust above
    the floor is clamped to zero.
    """
    rho = assert_density(rho, "wootters_concurrence")
    yy = np.kron(PAULI_Y, PAULI_Y)
    flipped = rho @ yy @ rho.conj() @ yy
    lams = np.linalg.eigvals(flipped).real
    low = float(lams.min())
    if low < EIG_FLOOR:
        raise InvalidStateError(f"wootters_concurrence: eigenvalue {low!r} below {EIG_FLOOR}")
    roots = np.sqrt(np.sort(np.clip(lams, 0.0, None))[::-1])
    return float(max(0.0, roots[0] - roots[1] - roots[2] - roots[3]))


def link_to_density(state: LinkState) -> np.ndarray:
    """Computational-basis density matrix of a family state.

    Diagonal ((h1+h2)/2 + h3, h5 + h4, h5 - h4, (h1+h2)/2 - h3) with
    anti-diagonal corners (h1-h2)/2; Hermitian, trace one, PSD.
    """
    ok, why = validate_physical(state)
    if not ok:
        raise InvalidStateError(f"link_to_density: {why}")
    h1, h2, h3, h4 = state
    h5 = 0.5 * (1.0 - h1 - h2)
    corner = 0.5 * (h1 - h2)
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 0.5 * (h1 + h2) + h3
    rho[1, 1] = h5 + h4
    rho[2, 2] = h5 - h4
    rho[3, 3] = 0.5 * (h1 + h2) - h3
    rho[0, 3] = rho[3, 0] = corner
    return rho


def density_to_link(rho: np.ndarray) -> LinkState:
    """Extract the four family coefficients from a two-qubit state.

    Raises NotInFamilyError if any Bell-basis entry outside the two 2x2
    blocks, the imaginary part of a block coherence, or the difference of
    the two Psi populations exceeds the structural tolerance.
    """
    rho = assert_density(rho, "density_to_link")
    if rho.shape != (4, 4):
        raise InvalidStateError(f"density_to_link: expected a 4x4 matrix, got {rho.shape}")
    b = BELL.conj().T @ rho @ BELL
    cross = max(abs(b[0, 2]), abs(b[0, 3]), abs(b[1, 2]), abs(b[1, 3]))
    if cross > STRUCT_ATOL:
        raise NotInFamilyError(f"cross-block Bell-basis entry of magnitude {cross:.3e}")
    if abs(b[0, 1].imag) > STRUCT_ATOL or abs(b[2, 3].imag) > STRUCT_ATOL:
        raise NotInFamilyError("block coherence has a non-real part")
    if abs(b[2, 2] - b[3, 3]) > STRUCT_ATOL:
        raise NotInFamilyError(
            f"unequal Psi populations: {b[2, 2].real!r} vs {b[3, 3].real!r}"
        )
    return LinkState(float(b[0, 0].real), float(b[1, 1].real), float(b[0, 1].real), float(b[2, 3].real))
