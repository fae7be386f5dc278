import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qkgsec.errors import ConvergenceError, DomainError
from qkgsec.fock.linalg import block_eigvalsh, jacobi_eigh


def random_hermitian(rng, n, scale=1.0):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (a + a.conj().T) / 2


@pytest.mark.parametrize("n", [1, 2, 3, 7, 16, 33])
def test_matches_lapack(n):
    rng = np.random.default_rng(n)
    a = random_hermitian(rng, n)
    w, v = jacobi_eigh(a)
    assert w == pytest.approx(np.linalg.eigvalsh(a), abs=1e-10)
    assert np.abs(v @ np.diag(w) @ v.conj().T - a).max() <= 1e-10
    assert np.abs(v.conj().T @ v - np.eye(n)).max() <= 1e-10


def test_real_symmetric_and_diagonal():
    w, _ = jacobi_eigh(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert w == pytest.approx([1.0, 3.0], abs=1e-14)
    w, v = jacobi_eigh(np.diag([3.0, -1.0, 2.0]))
    assert w.tolist() == [-1.0, 2.0, 3.0]


def test_traceless_difference_sums_to_zero():
    rng = np.random.default_rng(4)
    for _ in range(20):
        a = random_hermitian(rng, 9)
        a -= np.trace(a) / 9 * np.eye(9)
        assert abs(jacobi_eigh(a, vectors=False)[0].sum()) <= 1e-12


def test_scale_invariant_tolerance():
    rng = np.random.default_rng(5)
    a = random_hermitian(rng, 6)
    for scale in (1e-30, 1.0, 1e30):
        w, _ = jacobi_eigh(a * scale, vectors=False)
        assert w / scale == pytest.approx(np.linalg.eigvalsh(a), abs=1e-10)


def test_rejects_bad_input():
    with pytest.raises(DomainError):
        jacobi_eigh(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(DomainError):
        jacobi_eigh(np.ones((2, 3)))


def test_sweep_cap():
    a = random_hermitian(np.random.default_rng(6), 10)
    with pytest.raises(ConvergenceError):
        jacobi_eigh(a, tol=0.0, max_sweeps=1)


def test_block_eigvalsh_decoupled_blocks():
    rng = np.random.default_rng(7)
    a = np.zeros((12, 12), dtype=complex)
    perm = rng.permutation(12)
    blocks = [perm[:1], perm[1:5], perm[5:12]]
    for idx in blocks:
        a[np.ix_(idx, idx)] = random_hermitian(rng, idx.size)
    assert block_eigvalsh(a) == pytest.approx(np.linalg.eigvalsh(a), abs=1e-10)
    assert block_eigvalsh(np.zeros((3, 3))).tolist() == [0.0, 0.0, 0.0]


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 12), st.integers(0, 2**32 - 1))
def test_eigenvalues_property(n, seed):
    a = random_hermitian(np.random.default_rng(seed), n)
    w, _ = jacobi_eigh(a, vectors=False)
    assert np.all(np.diff(w) >= 0)
    assert w.sum() == pytest.approx(np.trace(a).real, abs=1e-10)
    assert np.sum(w**2) == pytest.approx(np.linalg.norm(a) ** 2, rel=1e-10)
