import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from steerbell.errors import NotHermitian
from steerbell.linalg import hermitian_eigenvalues, pauli, singular_values_3, tensor

from conftest import random_density, random_unitary

seeds = st.integers(0, 2**32 - 1)


def test_pauli_matrices():
    np.testing.assert_array_equal(pauli("x"), [[0, 1], [1, 0]])
    np.testing.assert_array_equal(pauli("y"), [[0, -1j], [1j, 0]])
    np.testing.assert_array_equal(pauli("z"), [[1, 0], [0, -1]])
    for ax in "xyz":
        p = pauli(ax)
        np.testing.assert_array_equal(p, p.conj().T)
        assert np.trace(p) == 0
        np.testing.assert_array_equal(p @ p, np.eye(2))


def test_pauli_rejects_unknown_axis():
    with pytest.raises(ValueError):
        pauli("w")


def test_tensor_examples():
    np.testing.assert_array_equal(tensor(np.eye(2), np.eye(2)), np.eye(4))
    np.testing.assert_array_equal(tensor(pauli("z"), np.eye(2)), np.diag([1, 1, -1, -1]))
    zero, one = np.diag([1, 0]), np.diag([0, 1])
    np.testing.assert_array_equal(tensor(zero, one), np.diag([0, 1, 0, 0]))


def _cmat(rng):
    return rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))


@given(seeds)
def test_tensor_bilinear_and_trace(seed):
    rng = np.random.default_rng(seed)
    a, b, c = _cmat(rng), _cmat(rng), _cmat(rng)
    alpha = complex(*rng.standard_normal(2))
    np.testing.assert_allclose(
        tensor(alpha * a + b, c), alpha * tensor(a, c) + tensor(b, c), atol=1e-12
    )
    assert abs(np.trace(tensor(a, b)) - np.trace(a) * np.trace(b)) <= 1e-12 * max(
        1, abs(np.trace(a) * np.trace(b))
    )


def test_eigenvalue_examples():
    np.testing.assert_allclose(hermitian_eigenvalues(np.diag([1, 0, 0, 0])), [1, 0, 0, 0])
    np.testing.assert_allclose(hermitian_eigenvalues(np.eye(4) / 4), [0.25] * 4)
    psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    np.testing.assert_allclose(hermitian_eigenvalues(np.outer(psi, psi)), [1, 0, 0, 0], atol=1e-14)


def test_eigenvalues_reject_non_hermitian():
    m = np.zeros((2, 2), dtype=complex)
    m[0, 1] = 1e-9
    with pytest.raises(NotHermitian):
        hermitian_eigenvalues(m)
    m[0, 1] = 1e-13  # within tolerance: symmetrized instead
    assert hermitian_eigenvalues(m).shape == (2,)


@given(seeds)
@settings(max_examples=50)
def test_eigenvalues_unitarily_invariant(seed):
    rng = np.random.default_rng(seed)
    m = random_density(rng) - 0.1 * np.eye(4)
    u = random_unitary(rng, 4)
    ev = hermitian_eigenvalues(m)
    assert np.all(np.diff(ev) <= 0)
    assert abs(ev.sum() - np.trace(m).real) <= 1e-10
    np.testing.assert_allclose(hermitian_eigenvalues(u @ m @ u.conj().T), ev, atol=1e-9)


def test_singular_value_examples():
    np.testing.assert_allclose(singular_values_3(np.diag([1, -1, 1])), [1, 1, 1])
    np.testing.assert_allclose(singular_values_3(np.zeros((3, 3))), [0, 0, 0])
    np.testing.assert_allclose(singular_values_3(np.diag([0.9, -0.9, 0.9])), [0.9] * 3)


@given(seeds)
def test_singular_values_match_gram_eigenvalues(seed):
    t = np.random.default_rng(seed).uniform(-1, 1, (3, 3))
    s = singular_values_3(t)
    assert np.all(s >= 0) and np.all(np.diff(s) <= 0)
    assert abs((s**2).sum() - (t**2).sum()) <= 1e-10
    gram = np.clip(hermitian_eigenvalues(t.T @ t), 0, None)
    np.testing.assert_allclose(s, np.sqrt(gram), atol=1e-9)
