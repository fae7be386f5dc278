"""Adversary error profiles and their one-number security measures.

An error profile is the distribution Eve assigns to the ``N = 2**n``
possible keys, ordered so that ``p1 >= p2 >= ... >= pN``.  Four
representations are supported: an explicit dense vector and three
parametric families whose measures have closed forms valid for very
large ``n``.

All entropies are in bits, with ``0 * log 0 = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from qkgsec import config
from qkgsec.errors import (
    CapExceededError,
    DomainError,
    LengthError,
    NegativeWeightError,
    NormalizationError,
    ZeroMassError,
)

SUM_TOL = 1e-9
MAX_PARAMETRIC_BITS = 10**6
LN2 = math.log(2.0)


def binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def _log2_one_minus_pow2(n: int) -> float:
    """log2(1 - 2**-n), accurate for large n."""
    return math.log1p(-(2.0**-n)) / LN2


def _cap(dense_cap: Optional[int]) -> int:
    return config.settings.dense_cap if dense_cap is None else dense_cap


def _check_bits(n: int, limit: int = MAX_PARAMETRIC_BITS) -> None:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise DomainError(f"n must be an integer, got {n!r}")
    if n < 1 or n > limit:
        raise DomainError(f"n must lie in [1, {limit}], got {n}")


class ErrorProfile:
    """Base class for the four profile representations."""

    n: int

    def materialize(self, dense_cap: Optional[int] = None) -> "DenseProfile":
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class DenseProfile(ErrorProfile):
    """Explicit sorted probability vector of length ``2**n``.

    ``keys[i]`` is the key index (bit ``j`` of the key is ``(idx >> j) & 1``)
    carrying the i-th largest probability.  It matters only when the key
    labelling is used, e.g. by hashing.
    """

    n: int
    probabilities: np.ndarray
    keys: np.ndarray = field(default=None)

    def __post_init__(self):
        _check_bits(self.n, limit=64)
        p = np.asarray(self.probabilities, dtype=float)
        if p.ndim != 1 or p.size != 2**self.n:
            raise LengthError(f"expected {2**self.n} probabilities for n={self.n}, got {p.size}")
        if not np.all(np.isfinite(p)):
            raise DomainError("probabilities must be finite numbers")
        if np.any(p < 0):
            raise NegativeWeightError("probabilities must be non-negative")
        total = float(p.sum())
        if not abs(total - 1.0) <= SUM_TOL:
            raise NormalizationError(f"probabilities sum to {total!r}, not 1 (tolerance {SUM_TOL})")
        if np.any(np.diff(p) > 0):
            raise DomainError("dense probabilities must be sorted in non-increasing order")
        keys = self.keys
        if keys is None:
            keys = np.arange(p.size, dtype=np.int64)
        else:
            keys = np.asarray(keys, dtype=np.int64)
            if keys.shape != p.shape or not np.array_equal(np.sort(keys), np.arange(p.size)):
                raise DomainError("keys must be a permutation of range(2**n)")
        p.setflags(write=False)
        keys.setflags(write=False)
        object.__setattr__(self, "probabilities", p)
        object.__setattr__(self, "keys", keys)

    def materialize(self, dense_cap=None):
        return self

    def by_key(self) -> np.ndarray:
        """Probabilities indexed by key rather than by rank."""
        out = np.empty_like(self.probabilities)
        out[self.keys] = self.probabilities
        return out

    def to_dict(self):
        return {
            "n": self.n,
            "type": "dense",
            "probabilities": self.probabilities.tolist(),
            "keys": self.keys.tolist(),
        }


@dataclass(frozen=True)
class SpikeUniform(ErrorProfile):
    """Mass ``delta`` on key 0, the rest spread evenly over the other keys."""

    n: int
    delta: float

    def __post_init__(self):
        _check_bits(self.n)
        d = float(self.delta)
        if not (2.0**-self.n <= d <= 1.0):
            raise DomainError(f"delta must lie in [2**-n, 1], got {d!r}")
        object.__setattr__(self, "delta", d)

    def materialize(self, dense_cap=None):
        _require_dense(self.n, dense_cap)
        size = 2**self.n
        p = np.full(size, (1.0 - self.delta) / (size - 1))
        p[0] = self.delta
        return DenseProfile(self.n, p)

    def to_dict(self):
        return {"n": self.n, "type": "spike", "delta": self.delta}


@dataclass(frozen=True)
class UniformSubset(ErrorProfile):
    """Uniform over ``2**k`` keys: Eve knows ``n - k`` bits deterministically."""

    n: int
    k: int

    def __post_init__(self):
        _check_bits(self.n)
        if not isinstance(self.k, (int, np.integer)) or not 0 <= self.k <= self.n:
            raise DomainError(f"k must be an integer in [0, n], got {self.k!r}")

    def materialize(self, dense_cap=None):
        _require_dense(self.n, dense_cap)
        p = np.zeros(2**self.n)
        p[: 2**self.k] = 2.0**-self.k
        return DenseProfile(self.n, p)

    def to_dict(self):
        return {"n": self.n, "type": "uniform_subset", "k": int(self.k)}


@dataclass(frozen=True)
class ProductBernoulli(ErrorProfile):
    """Independent bits; Eve guesses bit ``i`` correctly with probability ``q[i]``.

    Eve's guess for every bit is 0, so key 0 is the most likely key.
    """

    n: int
    q: tuple

    def __post_init__(self):
        _check_bits(self.n)
        try:
            arr = np.asarray(self.q, dtype=float)
        except (TypeError, ValueError):
            raise DomainError("q must be a number or a list of numbers") from None
        if arr.ndim > 1 or (arr.ndim == 1 and arr.size != self.n):
            raise LengthError(f"expected {self.n} bit probabilities, got shape {arr.shape}")
        q = tuple(float(v) for v in np.broadcast_to(arr, (self.n,)))
        if any(not (0.5 <= v <= 1.0) for v in q):
            raise DomainError("each q_i must lie in [1/2, 1]")
        object.__setattr__(self, "q", q)

    def by_key(self, dense_cap=None) -> np.ndarray:
        _require_dense(self.n, dense_cap)
        p = np.ones(1)
        for qi in self.q:
            p = np.concatenate([p * qi, p * (1.0 - qi)])
        return p

    def materialize(self, dense_cap=None):
        p = self.by_key(dense_cap)
        order = np.argsort(-p, kind="stable")
        return DenseProfile(self.n, p[order], order)

    def to_dict(self):
        return {"n": self.n, "type": "product_bernoulli", "q": list(self.q)}


def _require_dense(n: int, dense_cap: Optional[int]) -> None:
    cap = _cap(dense_cap)
    if n > cap:
        raise CapExceededError(f"n={n} exceeds the dense materialization cap of {cap} bits")


def normalize_and_sort(weights, n: int, dense_cap: Optional[int] = None) -> DenseProfile:
    """Normalize non-negative key weights and sort them into a dense profile.

    ``weights[i]`` belongs to key ``i``.  Ties keep key-index order.

    >>> normalize_and_sort([0.2, 0.5, 0.1, 0.2], 2).probabilities.tolist()
    [0.5, 0.2, 0.2, 0.1]
    """
    _check_bits(n, limit=64)
    _require_dense(n, dense_cap)
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size != 2**n:
        raise LengthError(f"expected {2**n} weights for n={n}, got {w.size}")
    if not np.all(np.isfinite(w)):
        raise DomainError("weights must be finite numbers")
    if np.any(w < 0):
        raise NegativeWeightError("weights must be non-negative")
    total = w.sum()
    if total <= 0:
        raise ZeroMassError("weights are all zero")
    order = np.argsort(-w, kind="stable")
    p = w[order] / total
    return DenseProfile(n, p, order)


@dataclass(frozen=True)
class SecurityReport:
    n: int
    p1: float
    min_entropy: float
    shannon_entropy: float
    mutual_info: float
    trial_complexity: Optional[float]
    kolmogorov_distance: Optional[float]
    renyi2_entropy: float
    log2_trial_complexity: Optional[float] = None
    unavailable: tuple = ()

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "p1": self.p1,
            "min_entropy": self.min_entropy,
            "shannon_entropy": self.shannon_entropy,
            "mutual_info": self.mutual_info,
            "trial_complexity": self.trial_complexity,
            "kolmogorov_distance": self.kolmogorov_distance,
            "renyi2_entropy": self.renyi2_entropy,
            "log2_trial_complexity": self.log2_trial_complexity,
            "unavailable": list(self.unavailable),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SecurityReport":
        d = dict(d)
        d["unavailable"] = tuple(d.get("unavailable", ()))
        return cls(**d)


def _dense_report(p: DenseProfile) -> SecurityReport:
    probs = p.probabilities
    n = p.n
    nz = probs[probs > 0]
    h = float(-(nz * np.log2(nz)).sum())
    p1 = float(probs[0])
    ct = float((np.arange(1, probs.size + 1) * probs).sum())
    return SecurityReport(
        n=n,
        p1=p1,
        min_entropy=-math.log2(p1),
        shannon_entropy=h,
        mutual_info=n - h,
        trial_complexity=ct,
        kolmogorov_distance=0.5 * float(np.abs(probs - 2.0**-n).sum()),
        renyi2_entropy=-math.log2(float((probs * probs).sum())),
        log2_trial_complexity=math.log2(ct),
    )


def _spike_report(p: SpikeUniform) -> SecurityReport:
    n, d = p.n, p.delta
    log2_rest = n + _log2_one_minus_pow2(n)  # log2(2**n - 1)
    hd = binary_entropy(d)
    h = hd + (1.0 - d) * log2_rest
    ie = d * n - hd - (1.0 - d) * _log2_one_minus_pow2(n)
    if d == 1.0:
        r2 = 0.0
    else:
        r2 = -float(np.logaddexp2(2 * math.log2(d), 2 * math.log2(1.0 - d) - log2_rest))
    # sum_{i=2}^{N} i / (N - 1) = (N + 2) / 2
    if d == 1.0:
        log2_ct = 0.0
    else:
        log2_half_n_plus_2 = n - 1 + math.log1p(2.0 ** (1 - n)) / LN2
        log2_ct = float(np.logaddexp2(math.log2(d), math.log2(1.0 - d) + log2_half_n_plus_2))
    ct = d + (1.0 - d) * (2.0**n + 2.0) / 2.0 if n <= 1000 else None
    return SecurityReport(
        n=n,
        p1=d,
        min_entropy=-math.log2(d),
        shannon_entropy=h,
        mutual_info=ie,
        trial_complexity=ct,
        kolmogorov_distance=d - 2.0**-n,
        renyi2_entropy=r2,
        log2_trial_complexity=log2_ct,
        unavailable=() if ct is not None else ("trial_complexity",),
    )


def _subset_report(p: UniformSubset) -> SecurityReport:
    n, k = p.n, int(p.k)
    ct = (2.0**k + 1.0) / 2.0 if k <= 1000 else None
    return SecurityReport(
        n=n,
        p1=2.0**-k,
        min_entropy=float(k),
        shannon_entropy=float(k),
        mutual_info=float(n - k),
        trial_complexity=ct,
        kolmogorov_distance=1.0 - 2.0 ** (k - n),
        renyi2_entropy=float(k),
        log2_trial_complexity=k - 1 + math.log1p(2.0**-k) / LN2,
        unavailable=() if ct is not None else ("trial_complexity",),
    )


def _product_report(p: ProductBernoulli, dense_cap: Optional[int]) -> SecurityReport:
    q = np.asarray(p.q)
    h = float(sum(binary_entropy(v) for v in p.q))
    hmin = float(-np.log2(q).sum())
    r2 = float(-np.log2(q * q + (1.0 - q) ** 2).sum())
    if p.n <= _cap(dense_cap):
        dense = _dense_report(p.materialize(dense_cap))
        ct, dk, log2_ct, missing = (
            dense.trial_complexity,
            dense.kolmogorov_distance,
            dense.log2_trial_complexity,
            (),
        )
    else:
        ct = dk = log2_ct = None
        missing = ("trial_complexity", "kolmogorov_distance", "log2_trial_complexity")
    return SecurityReport(
        n=p.n,
        p1=2.0**-hmin,
        min_entropy=hmin,
        shannon_entropy=h,
        mutual_info=p.n - h,
        trial_complexity=ct,
        kolmogorov_distance=dk,
        renyi2_entropy=r2,
        log2_trial_complexity=log2_ct,
        unavailable=missing,
    )


def analyze(profile: ErrorProfile, dense_cap: Optional[int] = None) -> SecurityReport:
    """Compute every one-number measure of ``profile``.

    Dense profiles are summed directly; parametric ones use closed forms.
    Measures of a product profile that need the full vector are computed
    only below the dense cap and are otherwise listed in
    ``report.unavailable`` with value ``None``.
    """
    if isinstance(profile, DenseProfile):
        return _dense_report(profile)
    if isinstance(profile, SpikeUniform):
        return _spike_report(profile)
    if isinstance(profile, UniformSubset):
        return _subset_report(profile)
    if isinstance(profile, ProductBernoulli):
        return _product_report(profile, dense_cap)
    raise TypeError(f"not an error profile: {profile!r}")


@dataclass(frozen=True)
class BoundCheck:
    l: float
    applicable: bool
    trial_bound: Optional[float]
    trial_slack: Optional[float]
    trial_ok: Optional[bool]
    info_bound: float
    info_slack: Optional[float]
    info_ok: Optional[bool]
    fresh_key_bits: float  # -log2 p1

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def check_bounds(report: SecurityReport, l: float, rtol: float = 1e-12) -> BoundCheck:
    """Check ``C_t >= (2**l + 1)/2`` and ``I_E <= n - l`` given ``p1 <= 2**-l``.

    When the premise fails the check is marked not applicable rather than
    failed.  ``rtol`` absorbs floating-point rounding in the measures.
    """
    if l < 0:
        raise DomainError(f"l must be non-negative, got {l!r}")
    applicable = report.min_entropy >= l
    info_bound = report.n - l
    trial_bound = (2.0**l + 1.0) / 2.0 if l <= 1000 else None
    if not applicable:
        return BoundCheck(l, False, trial_bound, None, None, info_bound, None, None, report.min_entropy)
    trial_slack = trial_ok = None
    if report.trial_complexity is not None and trial_bound is not None:
        trial_slack = report.trial_complexity - trial_bound
        trial_ok = trial_slack >= -rtol * trial_bound
    info_slack = info_bound - report.mutual_info
    info_ok = info_slack >= -rtol * max(1.0, report.n)
    return BoundCheck(
        l, True, trial_bound, trial_slack, trial_ok, info_bound, info_slack, info_ok, report.min_entropy
    )


def profile_from_dict(d: dict) -> ErrorProfile:
    """Build a profile from its JSON form.

    A dense entry without ``keys`` lists probabilities by key index and is
    sorted here; no renormalization is applied.
    """
    try:
        kind = d["type"]
        n = d["n"]
        if kind == "dense":
            probs = np.asarray(d["probabilities"], dtype=float)
            keys = d.get("keys")
            if keys is None:
                _require_dense(n, None)
                if probs.size != 2**n:
                    raise LengthError(f"expected {2**n} probabilities for n={n}, got {probs.size}")
                order = np.argsort(-probs, kind="stable")
                return DenseProfile(n, probs[order], order)
            return DenseProfile(n, probs, np.asarray(keys))
        if kind == "spike":
            return SpikeUniform(n, d["delta"])
        if kind == "uniform_subset":
            return UniformSubset(n, d["k"])
        if kind == "product_bernoulli":
            return ProductBernoulli(n, d["q"])
    except KeyError as exc:
        raise DomainError(f"profile is missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"malformed profile field: {exc}") from None
    raise DomainError(f"unknown profile type {d.get('type')!r}")
