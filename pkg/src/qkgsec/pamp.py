"""Privacy amplification with binary Toeplitz hashing on small keys.

Keys are integers; bit ``j`` of key ``x`` is ``(x >> j) & 1``.  Hash
outputs use the same convention over ``r`` bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from qkgsec import config
from qkgsec.errors import CapExceededError, DomainError, LengthError
from qkgsec.profile import DenseProfile, ErrorProfile, analyze, normalize_and_sort

PAMP_MAX_BITS = 20


@dataclass(frozen=True, eq=False)
class ToeplitzHash:
    """Binary Toeplitz matrix ``M[i, j] = seed[i - j + n - 1]`` of shape ``(r, n)``."""

    n: int
    r: int
    seed: np.ndarray

    def __post_init__(self):
        if self.n < 1 or not 1 <= self.r <= self.n:
            raise DomainError(f"need 1 <= r <= n, got n={self.n}, r={self.r}")
        seed = np.asarray(self.seed, dtype=np.uint8)
        if seed.shape != (self.n + self.r - 1,):
            raise LengthError(f"seed must have n + r - 1 = {self.n + self.r - 1} bits, got {seed.size}")
        if np.any(seed > 1):
            raise DomainError("seed entries must be 0 or 1")
        seed.setflags(write=False)
        object.__setattr__(self, "seed", seed)

    @property
    def matrix(self) -> np.ndarray:
        i = np.arange(self.r)[:, None]
        j = np.arange(self.n)[None, :]
        return self.seed[i - j + self.n - 1]

    def __call__(self, x) -> np.ndarray:
        return toeplitz_hash(self, x)

    def column_images(self) -> np.ndarray:
        """Integer hash value of each unit key ``1 << j``."""
        weights = 1 << np.arange(self.r, dtype=np.int64)
        return (self.matrix.astype(np.int64) * weights[:, None]).sum(axis=0)

    def hash_all(self) -> np.ndarray:
        """Integer hash of every key ``0 .. 2**n - 1``, built by linearity."""
        cols = self.column_images()
        out = np.zeros(1, dtype=np.int64)
        for c in cols:
            out = np.concatenate([out, out ^ c])
        return out


def toeplitz_hash(hash: ToeplitzHash, x) -> np.ndarray:
    """Hash a bit vector ``x`` of length ``n`` to ``r`` bits over GF(2)."""
    bits = np.asarray(x, dtype=np.int64)
    if bits.shape != (hash.n,):
        raise LengthError(f"input must have {hash.n} bits, got shape {bits.shape}")
    return (hash.matrix.astype(np.int64) @ bits) % 2


def _dense_input(profile: ErrorProfile, n_max: int = PAMP_MAX_BITS) -> DenseProfile:
    if not isinstance(profile, DenseProfile):
        raise DomainError("hashing needs a dense profile; materialize it first")
    if profile.n > min(n_max, config.settings.dense_cap):
        raise CapExceededError(f"n={profile.n} exceeds the hashing limit of {n_max} bits")
    return profile


def output_distribution(profile: DenseProfile, hash: ToeplitzHash) -> np.ndarray:
    """Probability of each ``r``-bit hash value, indexed by value."""
    if hash.n != profile.n:
        raise DomainError(f"hash takes {hash.n} bits but the profile has n={profile.n}")
    images = hash.hash_all()[profile.keys]
    return np.bincount(images, weights=profile.probabilities, minlength=2**hash.r)


def hashed_adversary_profile(profile: ErrorProfile, hash: ToeplitzHash) -> DenseProfile:
    """Eve's profile on the hashed key, by exact summation over preimages."""
    dense = _dense_input(profile)
    return normalize_and_sort(output_distribution(dense, hash), hash.r)


def renyi_bound(renyi2_input: float, r: int) -> float:
    """Expected leakage bound ``2**(r - R2) / ln 2`` in bits."""
    if renyi2_input < 0:
        raise DomainError("Renyi-2 entropy must be non-negative")
    return 2.0 ** (r - renyi2_input) / math.log(2.0)


@dataclass(frozen=True)
class ExperimentRecord:
    n: int
    r: int
    seeds_tested: int
    rng_seed: int
    avg_mutual_info: float
    avg_p1: float
    max_mutual_info: float
    renyi2_input: float
    bound_value: float
    bound_holds: bool
    seeds_above_bound: int
    achieved_exponent: Optional[float]  # -log2(avg_p1 - 2**-r)
    bound_exponent: float  # R2 - r
    exponent_gap: Optional[float]  # achieved_exponent / bound_exponent

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def random_hashes(n: int, r: int, count: int, rng_seed: int):
    rng = np.random.default_rng(rng_seed)
    seeds = rng.integers(0, 2, size=(count, n + r - 1), dtype=np.uint8)
    return [ToeplitzHash(n, r, s) for s in seeds]


def pa_experiment(profile: ErrorProfile, r: int, seed_count: int, rng_seed: int) -> ExperimentRecord:
    """Hash a fixed profile with ``seed_count`` random Toeplitz seeds.

    The input profile stays fixed; only the hash seed is averaged over.
    Leakage of each output is measured against the uniform distribution
    on ``r`` bits.
    """
    dense = _dense_input(profile)
    if not 1 <= r <= dense.n:
        raise DomainError(f"need 1 <= r <= n={dense.n}, got r={r}")
    if seed_count < 1:
        raise DomainError("seed_count must be positive")
    r2 = analyze(dense).renyi2_entropy
    bound = renyi_bound(r2, r)
    ies = np.empty(seed_count)
    p1s = np.empty(seed_count)
    for i, h in enumerate(random_hashes(dense.n, r, seed_count, rng_seed)):
        out = output_distribution(dense, h)
        nz = out[out > 0]
        ies[i] = max(0.0, r + float((nz * np.log2(nz)).sum()))
        p1s[i] = out.max()
    avg_ie = float(ies.mean())
    avg_p1 = float(p1s.mean())
    excess = avg_p1 - 2.0**-r
    achieved = -math.log2(excess) if excess > 0 else None
    bound_exp = r2 - r
    gap = achieved / bound_exp if achieved is not None and bound_exp != 0 else None
    return ExperimentRecord(
        n=dense.n,
        r=r,
        seeds_tested=seed_count,
        rng_seed=rng_seed,
        avg_mutual_info=avg_ie,
        avg_p1=avg_p1,
        max_mutual_info=float(ies.max()),
        renyi2_input=r2,
        bound_value=bound,
        bound_holds=avg_ie <= bound,
        seeds_above_bound=int((ies > bound).sum()),
        achieved_exponent=achieved,
        bound_exponent=bound_exp,
        exponent_gap=gap,
    )


def collision_counts(n: int, r: int) -> np.ndarray:
    """Seeds (out of all ``2**(n+r-1)``) under which each key pair collides."""
    if n > 8:
        raise CapExceededError("full seed enumeration is limited to n <= 8")
    size = 2**n
    counts = np.zeros((size, size), dtype=np.int64)
    m = n + r - 1
    for s in range(2**m):
        seed = (s >> np.arange(m)) & 1
        h = ToeplitzHash(n, r, seed).hash_all()
        counts += h[:, None] == h[None, :]
    return counts
