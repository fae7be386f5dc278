"""Cyclic Jacobi eigensolver for complex Hermitian matrices.

Rotations are applied in round-robin order: each round pairs every index
with exactly one other, so all rotations of a round commute and are done
in a single vectorized update.  One sweep of ``m - 1`` rounds visits every
pair once.
"""

from __future__ import annotations

from typing import Optional

import numpy as np
from scipy.sparse.csgraph import connected_components

from qkgsec import config
from qkgsec.errors import ConvergenceError, DomainError


def _round_robin(m: int):
    """Pairings of ``range(m)`` (``m`` even) for each of ``m - 1`` rounds."""
    ring = list(range(1, m))
    for _ in range(m - 1):
        order = [0] + ring
        yield np.array(order[: m // 2]), np.array(order[::-1][: m // 2])
        ring = ring[-1:] + ring[:-1]


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def jacobi_eigh(
    a,
    tol: Optional[float] = None,
    max_sweeps: Optional[int] = None,
    vectors: bool = True,
):
    """Eigendecomposition ``a = V diag(w) V^H`` of a Hermitian matrix.

    Iterates until the Frobenius norm of the off-diagonal part is at most
    ``tol`` (default from config) times the Frobenius norm of ``a``.
    Eigenvalues come back in ascending order.

    Raises:
        DomainError: ``a`` is not square or not Hermitian.
        ConvergenceError: ``max_sweeps`` exhausted.
    """
    tol = config.settings.eig_tol if tol is None else tol
    max_sweeps = config.settings.eig_max_sweeps if max_sweeps is None else max_sweeps
    a = np.array(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    scale = max(1.0, float(np.max(np.abs(a)))) if n else 1.0
    if not np.allclose(a, a.conj().T, rtol=0, atol=1e-10 * scale):
        raise DomainError("matrix is not Hermitian")
    a = 0.5 * (a + a.conj().T)
    if n <= 1:
        return np.real(np.diag(a)).copy(), np.eye(n, dtype=complex)

    m = n + (n % 2)
    if m != n:  # pad with an isolated dummy index
        padded = np.zeros((m, m), dtype=complex)
        padded[:n, :n] = a
        a = padded
    v = np.eye(m, dtype=complex)
    rounds = list(_round_robin(m))
    threshold = tol * float(np.linalg.norm(a))

    for sweep in range(max_sweeps + 1):
        if _off_norm(a) <= threshold:
            break
        if sweep == max_sweeps:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps (off-norm {_off_norm(a):.3e})"
            )
        for p, q in rounds:
            apq = a[p, q]
            mag = np.abs(apq)
            active = mag > 0
            if not active.any():
                continue
            p, q, apq, mag = p[active], q[active], apq[active], mag[active]
            app = a[p, p].real
            aqq = a[q, q].real
            phase = apq / mag  # e^{i theta}
            # real rotation zeroing the phase-stripped 2x2 block
            tau = (aqq - app) / (2.0 * mag)
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
            c = 1.0 / np.hypot(1.0, t)
            s = t * c
            # columns: new_p = c*col_p - s*conj(phase)*col_q ; new_q = s*phase*col_p + c*col_q
            cp, cq = a[:, p].copy(), a[:, q].copy()
            a[:, p] = c * cp - s * np.conj(phase) * cq
            a[:, q] = s * phase * cp + c * cq
            rp, rq = a[p, :].copy(), a[q, :].copy()
            a[p, :] = c[:, None] * rp - (s * phase)[:, None] * rq
            a[q, :] = (s * np.conj(phase))[:, None] * rp + c[:, None] * rq
            a[p, q] = 0.0
            a[q, p] = 0.0
            a[p, p] = a[p, p].real
            a[q, q] = a[q, q].real
            if vectors:
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * np.conj(phase) * vq
                v[:, q] = s * phase * vp + c * vq

    w = np.real(np.diag(a))[:n]
    v = v[:n, :n]
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def block_eigvalsh(a, tol: Optional[float] = None, max_sweeps: Optional[int] = None) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, diagonalizing each decoupled block.

    Blocks are the connected components of the nonzero pattern, so sparse
    operators such as lossy Fock-space coherences stay cheap.
    """
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    labels_count, labels = connected_components(np.abs(a) > 0, directed=False)
    out = []
    for lab in range(labels_count):
        idx = np.flatnonzero(labels == lab)
        if idx.size == 1:
            out.append(np.real(a[idx, idx]))
            continue
        w, _ = jacobi_eigh(a[np.ix_(idx, idx)], tol=tol, max_sweeps=max_sweeps, vectors=False)
        out.append(w)
    w = np.concatenate(out) if out else np.zeros(0)
    assert w.size == n
    return np.sort(w)
