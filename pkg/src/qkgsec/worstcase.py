"""Extremal error profiles at a given level of leaked information.

For fixed Shannon entropy the spike profile maximizes ``p1``: any profile
with top probability ``delta`` has entropy at most that of the spike with
the same ``delta``.  :func:`maximize_p1_oracle` checks this empirically by
exhaustive search over a grid of small ordered simplices.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from qkgsec.errors import DomainError
from qkgsec.profile import (
    DenseProfile,
    ProductBernoulli,
    SpikeUniform,
    UniformSubset,
    analyze,
)

BISECT_MAX_ITER = 200
ORACLE_MAX_BITS = 3
ORACLE_MAX_STEPS = 200
IE_SLACK = 1e-12  # rounding in the grid entropy sum


def spike_profile(n: int, delta: float) -> SpikeUniform:
    return SpikeUniform(n, delta)


def uniform_subset_profile(n: int, k: int) -> UniformSubset:
    return UniformSubset(n, k)


def product_bernoulli_profile(n: int, q) -> ProductBernoulli:
    return ProductBernoulli(n, q)


def spike_mutual_info(n: int, delta: float) -> float:
    return analyze(SpikeUniform(n, delta)).mutual_info


def solve_spike_for_mutual_info(n: int, ie_target: float, rtol: float = 1e-6) -> float:
    """Return ``delta`` such that ``SpikeUniform(n, delta)`` leaks ``ie_target`` bits.

    Bisects on ``log2(delta)`` over ``[-n, 0]``; the leaked information is
    strictly increasing in ``delta`` on this range.

    >>> solve_spike_for_mutual_info(2, 2.0)
    1.0
    """
    if not (0.0 <= ie_target <= n):
        raise DomainError(f"ie_target must lie in [0, n={n}], got {ie_target!r}")
    if ie_target == 0.0:
        return 2.0**-n
    if ie_target == n:
        return 1.0
    lo, hi = -float(n), 0.0
    scale = max(ie_target, 1e-12)
    best = None
    for _ in range(BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        delta = min(1.0, max(2.0**-n, 2.0**mid))
        err = spike_mutual_info(n, delta) - ie_target
        if best is None or abs(err) < abs(best[1]):
            best = (delta, err)
        if abs(err) <= rtol * scale:
            return delta
        if err < 0:
            lo = mid
        else:
            hi = mid
    return best[0]


def _ordered_compositions(total: int, parts: int, first: int) -> np.ndarray:
    """All non-increasing integer vectors of length ``parts`` summing to
    ``total`` whose leading entry is ``first``."""
    rows = np.array([[first]], dtype=np.int64)
    remaining = np.array([total - first], dtype=np.int64)
    for j in range(1, parts):
        slots = parts - j
        prev = rows[:, -1]
        low = -(-remaining // slots)  # ceil: the rest cannot exceed this entry
        high = np.minimum(prev, remaining)
        if j == parts - 1:
            low = remaining
        counts = np.maximum(high - low + 1, 0)
        idx = np.repeat(np.arange(rows.shape[0]), counts)
        offsets = np.arange(idx.size) - np.repeat(np.cumsum(counts) - counts, counts)
        values = low[idx] + offsets
        rows = np.column_stack([rows[idx], values])
        remaining = remaining[idx] - values
    return rows


def maximize_p1_oracle(
    n: int, ie_target: float, grid_steps: int = 100, tol: Optional[float] = None
):
    """Brute-force the largest ``p1`` among grid profiles leaking ``ie_target`` bits.

    Enumerates every ordered profile with entries in multiples of
    ``1/grid_steps`` and keeps those with
    ``ie_target - tol <= I_E <= ie_target`` (``tol`` defaults to
    ``n * log2(grid_steps) / grid_steps``, a bound on the information
    change of one grid move).  Ties in ``p1`` go to the lexicographically
    largest probability vector.

    Returns ``(profile, p1_max)``, or ``(None, nan)`` when nothing on the
    grid lies in the window.
    """
    if not 1 <= n <= ORACLE_MAX_BITS:
        raise DomainError(f"exhaustive search supports 1 <= n <= {ORACLE_MAX_BITS}, got {n}")
    if not 1 <= grid_steps <= ORACLE_MAX_STEPS:
        raise DomainError(f"grid_steps must lie in [1, {ORACLE_MAX_STEPS}], got {grid_steps}")
    if tol is None:
        tol = n * math.log2(max(grid_steps, 2)) / grid_steps
    size = 2**n
    best_row = None
    for first in range(grid_steps, -(-grid_steps // size) - 1, -1):
        counts = _ordered_compositions(grid_steps, size, first)
        p = counts / grid_steps
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(p > 0, -p * np.log2(p), 0.0)
        ie = n - terms.sum(axis=1)
        ok = (ie <= ie_target + IE_SLACK) & (ie >= ie_target - tol)
        if ok.any():
            cand = counts[ok]
            # lexicographic max among rows sharing the largest first entry
            order = np.lexsort(cand.T[::-1])
            best_row = cand[order[-1]]
            break
    if best_row is None:
        return None, float("nan")
    probs = best_row / grid_steps
    return DenseProfile(n, probs), float(probs[0])
