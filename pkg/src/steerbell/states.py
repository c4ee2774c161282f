"""One- and two-qubit states, projective measurements and their statistics.

Conventions used throughout the package:

* the first tensor factor is Alice, basis order |00>, |01>, |10>, |11>;
* a measurement along unit vector ``n`` with outcome ``a`` in {0, 1} is the
  projector ``(I + (-1)**a n.sigma) / 2``, i.e. outcome ``a`` carries the
  eigenvalue ``(-1)**a``. The same projector is used for either party.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .errors import BlochNormExceeded, InvalidState, ParameterOutOfRange, StateFormatError
from .linalg import HERMITIAN_TOL, IDENTITY2, PAULI_VECTOR, hermitian_deviation, tensor

TRACE_TOL = 1e-12
PSD_TOL = 1e-10
UNIT_TOL = 1e-12
BLOCH_TOL = 1e-10
PROBABILITY_TOL = 1e-10

AXES = {
    "x": np.array([1.0, 0.0, 0.0]),
    "y": np.array([0.0, 1.0, 0.0]),
    "z": np.array([0.0, 0.0, 1.0]),
}


def validate_density_matrix(m: Any, dim: int) -> np.ndarray:
    """Check the density-matrix invariants and return a Hermitian-symmetrized copy.

    Raises ``InvalidState`` naming the first invariant that fails.
    """
    m = np.array(m, dtype=complex)
    if m.shape != (dim, dim):
        raise InvalidState("shape", f"expected a {dim}x{dim} matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidState("finite", "matrix has non-finite entries")
    dev = hermitian_deviation(m)
    if dev > HERMITIAN_TOL:
        raise InvalidState("hermitian", f"matrix is not Hermitian: max |m - m^dagger| = {dev:.3e}")
    m = (m + m.conj().T) / 2
    tr = float(np.trace(m).real)
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvalidState("unit trace", f"trace is {tr!r}, expected 1 (unit trace violated)")
    min_eig = float(np.linalg.eigvalsh(m)[0])
    if min_eig < -PSD_TOL:
        raise InvalidState(
            "positive semidefinite",
            f"matrix is not positive semidefinite: smallest eigenvalue {min_eig:.6g}",
        )
    return m


@dataclass(frozen=True, eq=False)
class _DensityMatrix:
    matrix: np.ndarray
    dim = 0

    def __post_init__(self) -> None:
        m = validate_density_matrix(self.matrix, self.dim)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def allclose(self, other: "_DensityMatrix | np.ndarray", atol: float = 1e-12) -> bool:
        other_m = other.matrix if isinstance(other, _DensityMatrix) else np.asarray(other)
        return bool(np.allclose(self.matrix, other_m, rtol=0.0, atol=atol))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)[::-1]


class QubitState(_DensityMatrix):
    """Validated 2x2 density matrix."""

    dim = 2

    @property
    def bloch(self) -> np.ndarray:
        return state_to_bloch(self)


class TwoQubitState(_DensityMatrix):
    """Validated 4x4 density matrix; Alice is the first factor."""

    dim = 4


def _matrix(state: _DensityMatrix | np.ndarray) -> np.ndarray:
    return state.matrix if isinstance(state, _DensityMatrix) else np.asarray(state, dtype=complex)


# -- measurement directions -------------------------------------------------


def unit(v: Sequence[float]) -> np.ndarray:
    """Normalize a nonzero 3-vector."""
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v)
    if v.shape != (3,) or not norm > 0:
        raise ParameterOutOfRange(f"cannot normalize {v!r}")
    return v / norm


def as_direction(n: str | Sequence[float]) -> np.ndarray:
    """Return ``n`` as a float array, checking it is a unit 3-vector.

    The strings "x", "y" and "z" name the coordinate axes.
    """
    if isinstance(n, str):
        try:
            return AXES[n].copy()
        except KeyError:
            raise ParameterOutOfRange(f"unknown axis {n!r}") from None
    n = np.asarray(n, dtype=float)
    if n.shape != (3,):
        raise ParameterOutOfRange(f"measurement direction must have 3 components, got {n.shape}")
    if abs(np.linalg.norm(n) - 1.0) > UNIT_TOL:
        raise ParameterOutOfRange(f"measurement direction {n!r} is not a unit vector")
    return n


def _outcome(a: int) -> int:
    if a not in (0, 1):
        raise ParameterOutOfRange(f"outcome must be 0 or 1, got {a!r}")
    return int(a)


def projector(n: str | Sequence[float], a: int) -> np.ndarray:
    """Projector ``(I + (-1)**a n.sigma)/2`` onto outcome ``a`` along ``n``."""
    n = as_direction(n)
    sign = 1 - 2 * _outcome(a)
    return (IDENTITY2 + sign * np.tensordot(n, PAULI_VECTOR, axes=1)) / 2


def _clamp_probability(p: float) -> float:
    if p < -PROBABILITY_TOL or p > 1 + PROBABILITY_TOL:
        raise ValueError(f"probability {p!r} outside [0, 1] beyond tolerance")
    return min(max(p, 0.0), 1.0)


# -- reductions -------------------------------------------------------------


def _ptrace_b(m: np.ndarray) -> np.ndarray:
    return np.einsum("ajbj->ab", m.reshape(2, 2, 2, 2))


def _ptrace_a(m: np.ndarray) -> np.ndarray:
    return np.einsum("iaib->ab", m.reshape(2, 2, 2, 2))


def partial_trace_B(rho: TwoQubitState | np.ndarray) -> QubitState:
    """Alice's reduced state ``tr_B rho``."""
    return QubitState(_ptrace_b(_matrix(rho)))


def partial_trace_A(rho: TwoQubitState | np.ndarray) -> QubitState:
    """Bob's reduced state ``tr_A rho``."""
    return QubitState(_ptrace_a(_matrix(rho)))


def conditional_state(rho: TwoQubitState, n: str | Sequence[float], a: int) -> np.ndarray:
    """Bob's unnormalized conditional state ``tr_A[(Pi^n_a ⊗ I) rho]``.

    Its trace is the probability that Alice obtains ``a`` along ``n``.
    """
    op = np.kron(projector(n, a), IDENTITY2)
    return _ptrace_a(op @ _matrix(rho))


def joint_probability(
    tau: TwoQubitState,
    n_a: str | Sequence[float],
    a: int,
    n_b: str | Sequence[float],
    b: int,
) -> float:
    """``tr[(Pi^{nA}_a ⊗ Pi^{nB}_b) tau]``, clamped to [0, 1]."""
    op = tensor(projector(n_a, a), projector(n_b, b))
    return _clamp_probability(float(np.trace(op @ _matrix(tau)).real))


def marginal_probability(tau: TwoQubitState, n_a: str | Sequence[float], a: int) -> float:
    """Alice's marginal ``tr[Pi^{nA}_a tau_A]``."""
    p = np.trace(projector(n_a, a) @ _ptrace_b(_matrix(tau))).real
    return _clamp_probability(float(p))


def correlation_matrix(rho: TwoQubitState | np.ndarray) -> np.ndarray:
    """3x3 real matrix ``T[i, j] = tr[rho (sigma_i ⊗ sigma_j)]``."""
    r = _matrix(rho).reshape(2, 2, 2, 2)
    # tr[rho (s_i ⊗ s_j)] = sum rho[a,b,c,d] s_i[c,a] s_j[d,b]
    return np.einsum("abcd,ica,jdb->ij", r, PAULI_VECTOR, PAULI_VECTOR).real


def local_bloch_vectors(rho: TwoQubitState | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Bloch vectors of Alice's and Bob's marginals."""
    m = _matrix(rho)
    return _bloch(_ptrace_b(m)), _bloch(_ptrace_a(m))


# -- Bloch representation ---------------------------------------------------


def _bloch(m: np.ndarray) -> np.ndarray:
    return np.einsum("kab,ba->k", PAULI_VECTOR, m).real


def bloch_to_state(r: Sequence[float]) -> QubitState:
    """Qubit state ``(I + r.sigma)/2``.

    Raises ``BlochNormExceeded`` when ``|r| > 1`` beyond tolerance.
    """
    r = np.asarray(r, dtype=float)
    if r.shape != (3,):
        raise ParameterOutOfRange(f"Bloch vector must have 3 components, got {r.shape}")
    norm = float(np.linalg.norm(r))
    if norm > 1 + BLOCH_TOL:
        raise BlochNormExceeded(f"Bloch vector norm {norm:.12g} exceeds 1")
    return QubitState((IDENTITY2 + np.tensordot(r, PAULI_VECTOR, axes=1)) / 2)


def state_to_bloch(rho: QubitState | np.ndarray) -> np.ndarray:
    """Bloch vector ``r_k = tr[rho sigma_k]`` of a qubit state."""
    if not isinstance(rho, QubitState):
        rho = QubitState(rho)
    return _bloch(rho.matrix)


# -- named states -----------------------------------------------------------

_PSI = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
_BELL = np.outer(_PSI, _PSI.conj())


def bell_state() -> TwoQubitState:
    """Projector onto (|00> + |11>)/sqrt(2)."""
    return TwoQubitState(_BELL)


def maximally_mixed() -> TwoQubitState:
    return TwoQubitState(np.eye(4, dtype=complex) / 4)


def werner(w: float) -> TwoQubitState:
    """Visibility-``w`` mixture ``w |Psi><Psi| + (1 - w) I/4``, ``0 <= w <= 1``."""
    w = float(w)
    if not 0.0 <= w <= 1.0:
        raise ParameterOutOfRange(f"Werner visibility must lie in [0, 1], got {w}")
    return TwoQubitState(w * _BELL + (1 - w) * np.eye(4) / 4)


def product_state(rho_a: QubitState | np.ndarray, rho_b: QubitState | np.ndarray) -> TwoQubitState:
    if not isinstance(rho_a, QubitState):
        rho_a = QubitState(rho_a)
    if not isinstance(rho_b, QubitState):
        rho_b = QubitState(rho_b)
    return TwoQubitState(tensor(rho_a.matrix, rho_b.matrix))


def pure_state(psi: Sequence[complex]) -> TwoQubitState | QubitState:
    """Projector onto a normalized copy of ``psi`` (length 2 or 4)."""
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    m = np.outer(psi, psi.conj())
    return QubitState(m) if psi.size == 2 else TwoQubitState(m)


# -- JSON -------------------------------------------------------------------


def state_to_json(state: _DensityMatrix | np.ndarray) -> str:
    """Serialize as ``{"dim": d, "entries": [[re, im], ...]}`` with 17 significant digits."""
    m = _matrix(state)
    entries = ", ".join(f"[{z.real:.17g}, {z.imag:.17g}]" for z in m.ravel())
    return f'{{"dim": {m.shape[0]}, "entries": [{entries}]}}\n'


def matrix_from_json(data: str | dict) -> np.ndarray:
    """Parse the state JSON format into a raw complex matrix (no physics checks)."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise StateFormatError(f"invalid JSON: {exc}") from None
    try:
        dim = data["dim"]
        entries = data["entries"]
    except (TypeError, KeyError):
        raise StateFormatError("state JSON needs 'dim' and 'entries' fields") from None
    if dim not in (2, 4):
        raise StateFormatError(f"dim must be 2 or 4, got {dim!r}")
    if not isinstance(entries, list) or len(entries) != dim * dim:
        raise StateFormatError(f"expected {dim * dim} entries for dim {dim}")
    try:
        flat = [complex(float(re), float(im)) for re, im in entries]
    except (TypeError, ValueError):
        raise StateFormatError("each entry must be a [re, im] pair of numbers") from None
    return np.array(flat, dtype=complex).reshape(dim, dim)


def state_from_json(data: str | dict) -> QubitState | TwoQubitState:
    """Parse and validate a state; raises ``StateFormatError`` or ``InvalidState``."""
    m = matrix_from_json(data)
    return QubitState(m) if m.shape[0] == 2 else TwoQubitState(m)
