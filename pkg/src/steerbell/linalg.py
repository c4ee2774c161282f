"""Small dense matrix helpers for one- and two-qubit operators.

Everything here works on plain numpy arrays of shape (2, 2), (4, 4) or
(3, 3). Decompositions are delegated to LAPACK through numpy; the
functions add the Hermiticity guard and the ordering conventions the rest
of the package relies on.
"""

from __future__ import annotations

import numpy as np

from .errors import NotHermitian

HERMITIAN_TOL = 1e-12

IDENTITY2 = np.eye(2, dtype=complex)
IDENTITY4 = np.eye(4, dtype=complex)

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
for _m in _PAULI.values():
    _m.setflags(write=False)
IDENTITY2.setflags(write=False)
IDENTITY4.setflags(write=False)

# sigma_x, sigma_y, sigma_z stacked along axis 0
PAULI_VECTOR = np.stack([_PAULI["x"], _PAULI["y"], _PAULI["z"]])
PAULI_VECTOR.setflags(write=False)


def pauli(axis: str) -> np.ndarray:
    """Return the Pauli matrix for ``axis`` in {"x", "y", "z"}."""
    try:
        return _PAULI[axis].copy()
    except KeyError:
        raise ValueError(f"unknown Pauli axis {axis!r}; expected 'x', 'y' or 'z'") from None


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product ``a ⊗ b`` of two 2x2 operators.

    The first factor acts on Alice's qubit, so the basis order of the result
    is |00>, |01>, |10>, |11>.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise ValueError(f"tensor expects two 2x2 matrices, got {a.shape} and {b.shape}")
    return np.kron(a, b)


def hermitian_deviation(m: np.ndarray) -> float:
    """Largest absolute entry of ``m - m^dagger``."""
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T)))


def symmetrize(m: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``(m + m^dagger)/2`` after checking ``m`` is Hermitian within ``tol``."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotHermitian(f"expected a square matrix, got shape {m.shape}")
    dev = hermitian_deviation(m)
    if not dev <= tol:
        raise NotHermitian(f"matrix is not Hermitian: max |m - m^dagger| = {dev:.3e} > {tol:g}")
    return (m + m.conj().T) / 2


def hermitian_eigenvalues(m: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, sorted in descending order.

    Raises
    ------
    NotHermitian
        If ``max |m - m^dagger| > tol``.
    """
    return np.linalg.eigvalsh(symmetrize(m, tol))[::-1]


def hermitian_eigh(m: np.ndarray, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition with eigenvalues descending and matching eigenvector columns."""
    w, v = np.linalg.eigh(symmetrize(m, tol))
    return w[::-1], v[:, ::-1]


def singular_values_3(t: np.ndarray) -> np.ndarray:
    """Singular values of a real 3x3 matrix, descending."""
    t = np.asarray(t, dtype=float)
    if t.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {t.shape}")
    return np.linalg.svd(t, compute_uv=False)


def svd_3(t: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Full SVD ``t = U diag(s) V^T`` of a real 3x3 matrix, ``s`` descending."""
    t = np.asarray(t, dtype=float)
    if t.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {t.shape}")
    u, s, vt = np.linalg.svd(t)
    return u, s, vt.T
