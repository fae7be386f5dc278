"""Truncated two-mode Fock-space states.

The joint basis index of ``|m1, m2>`` is ``m1 * (cutoff2 + 1) + m2``.
Single-mode states live in mode 1 with mode 2 in vacuum (``cutoff2 = 0``).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.special import gammaln

from qkgsec import config
from qkgsec.errors import CapExceededError, CutoffError, DomainError

NORM_TOL = 1e-10


def _check_dims(cutoff1: int, cutoff2: int) -> int:
    if cutoff1 < 0 or cutoff2 < 0:
        raise DomainError("cutoffs must be non-negative")
    dim = (cutoff1 + 1) * (cutoff2 + 1)
    if dim > config.settings.joint_dim_cap:
        raise CapExceededError(
            f"joint dimension {dim} exceeds the cap of {config.settings.joint_dim_cap}"
        )
    return dim


@dataclass(frozen=True, eq=False)
class PureState:
    cutoff1: int
    cutoff2: int
    amplitudes: np.ndarray  # shape (cutoff1 + 1, cutoff2 + 1)

    def __post_init__(self):
        _check_dims(self.cutoff1, self.cutoff2)
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (self.cutoff1 + 1, self.cutoff2 + 1):
            raise DomainError(f"amplitude shape {amps.shape} does not match cutoffs")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise DomainError(f"state norm is {norm!r}, not 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return (self.cutoff1 + 1) * (self.cutoff2 + 1)

    def vector(self) -> np.ndarray:
        return self.amplitudes.reshape(-1)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True, eq=False)
class DensityOp:
    cutoff1: int
    cutoff2: int
    matrix: np.ndarray

    def __post_init__(self):
        dim = _check_dims(self.cutoff1, self.cutoff2)
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (dim, dim):
            raise DomainError(f"matrix shape {m.shape} does not match cutoffs (dim {dim})")
        if np.max(np.abs(m - m.conj().T), initial=0.0) > NORM_TOL:
            raise DomainError("density operator is not Hermitian")
        tr = np.trace(m)
        if abs(tr - 1.0) > NORM_TOL:
            raise DomainError(f"density operator trace is {tr!r}, not 1")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def tensor(self) -> np.ndarray:
        d1, d2 = self.cutoff1 + 1, self.cutoff2 + 1
        return self.matrix.reshape(d1, d2, d1, d2)


@dataclass(frozen=True)
class NumberSuperposition:
    """``(|n1, n2> + |n2, n1>) / sqrt(2)``; ``(N, 0)`` is the NOON state."""

    n1: int
    n2: int
    cutoff1: Optional[int] = None
    cutoff2: Optional[int] = None


@dataclass(frozen=True)
class Coherent:
    alpha: complex
    cutoff: Optional[int] = None


@dataclass(frozen=True)
class SqueezedVacuum:
    squeeze_r: float
    cutoff: Optional[int] = None


@dataclass(frozen=True)
class Cat:
    """``|alpha> + parity * |-alpha>``, normalized."""

    alpha: complex
    parity: int = 1
    cutoff: Optional[int] = None


def coherent_amplitudes(alpha: complex, size: int) -> np.ndarray:
    m = np.arange(size)
    a = abs(alpha)
    if a == 0:
        out = np.zeros(size, dtype=complex)
        out[0] = 1.0
        return out
    log_mag = -0.5 * a * a + m * math.log(a) - 0.5 * gammaln(m + 1)
    return np.exp(log_mag) * np.exp(1j * cmath.phase(alpha) * m)


def _squeezed_amplitudes(r: float, size: int) -> np.ndarray:
    out = np.zeros(size, dtype=complex)
    if r == 0:
        out[0] = 1.0
        return out
    t = math.tanh(abs(r))
    k = np.arange((size + 1) // 2)
    # |2k> amplitude: sqrt(sech r) (-tanh r)^k sqrt((2k)!) / (2^k k!)
    log_mag = 0.5 * math.log(1.0 / math.cosh(r)) + k * math.log(t) + 0.5 * gammaln(2 * k + 1) - k * math.log(2.0) - gammaln(k + 1)
    out[2 * k] = np.exp(log_mag) * (-1.0) ** k
    return out


def _cat_amplitudes(alpha: complex, parity: int, size: int) -> np.ndarray:
    coh = coherent_amplitudes(alpha, size)
    m = np.arange(size)
    norm2 = 2.0 * (1.0 + parity * math.exp(-2.0 * abs(alpha) ** 2))
    return coh * (1.0 + parity * (-1.0) ** m) / math.sqrt(norm2)


def _search_size(kind: str, param: float) -> int:
    """Generous number of Fock levels beyond which mass is below 1e-30."""
    if kind == "squeezed":
        t = math.tanh(abs(param))
        if t == 0:
            return 1
        return int(2 * (70.0 / -math.log(t)) + 200) if t < 1 else 10**6
    a2 = abs(param) ** 2
    return int(a2 + 15.0 * math.sqrt(a2) + 80)


def _truncate(full: np.ndarray, cutoff: Optional[int], deficit: float, auto_deficit: float) -> np.ndarray:
    probs = np.abs(full) ** 2
    tail = np.concatenate([np.cumsum(probs[::-1])[::-1][1:], [0.0]])  # mass above each level
    if cutoff is None:
        cutoff = int(np.argmax(tail <= min(deficit, auto_deficit)))
    elif cutoff >= full.size:
        pass
    elif tail[cutoff] > deficit:
        raise CutoffError(
            f"cutoff {cutoff} drops probability {tail[cutoff]:.3e} > allowed {deficit:.1e}"
        )
    amps = np.zeros(cutoff + 1, dtype=complex)
    keep = min(cutoff + 1, full.size)
    amps[:keep] = full[:keep]
    return amps / np.linalg.norm(amps)


def make_state(spec, norm_deficit: Optional[float] = None) -> PureState:
    """Build a normalized :class:`PureState` from a state spec.

    Continuous-variable states are truncated and then renormalized.  The
    automatic cutoff drops at most ``config.settings.auto_norm_deficit``
    of probability, well inside the ``norm_deficit`` rule; an explicit
    cutoff that drops more than ``norm_deficit`` raises CutoffError.
    """
    deficit = config.settings.norm_deficit if norm_deficit is None else norm_deficit
    if isinstance(spec, NumberSuperposition):
        n1, n2 = int(spec.n1), int(spec.n2)
        if n1 == n2:
            raise DomainError("number superposition needs n1 != n2")
        if min(n1, n2) < 0:
            raise DomainError("photon numbers must be non-negative")
        top = max(n1, n2)
        c1 = top if spec.cutoff1 is None else spec.cutoff1
        c2 = top if spec.cutoff2 is None else spec.cutoff2
        if c1 < top or c2 < top:
            raise CutoffError(f"cutoffs must be at least {top}")
        _check_dims(c1, c2)
        amps = np.zeros((c1 + 1, c2 + 1), dtype=complex)
        amps[n1, n2] = amps[n2, n1] = 1.0 / math.sqrt(2.0)
        return PureState(c1, c2, amps)
    if isinstance(spec, Coherent):
        full = coherent_amplitudes(spec.alpha, _search_size("coherent", spec.alpha))
    elif isinstance(spec, SqueezedVacuum):
        full = _squeezed_amplitudes(spec.squeeze_r, _search_size("squeezed", spec.squeeze_r))
    elif isinstance(spec, Cat):
        if spec.parity not in (1, -1):
            raise DomainError("cat parity must be +1 or -1")
        if spec.parity == -1 and spec.alpha == 0:
            raise DomainError("odd cat state with alpha = 0 is the zero vector")
        full = _cat_amplitudes(spec.alpha, spec.parity, _search_size("coherent", spec.alpha))
    else:
        raise TypeError(f"unknown state spec {spec!r}")
    amps = _truncate(full, spec.cutoff, deficit, config.settings.auto_norm_deficit)
    cutoff = amps.size - 1
    _check_dims(cutoff, 0)
    return PureState(cutoff, 0, amps[:, None])


def pad(state: PureState, cutoff1: int, cutoff2: int) -> PureState:
    """Embed ``state`` into larger cutoffs."""
    if cutoff1 < state.cutoff1 or cutoff2 < state.cutoff2:
        raise DomainError("padding cannot shrink a state")
    amps = np.zeros((cutoff1 + 1, cutoff2 + 1), dtype=complex)
    amps[: state.cutoff1 + 1, : state.cutoff2 + 1] = state.amplitudes
    return PureState(cutoff1, cutoff2, amps)


def to_density(components: Sequence[Tuple[PureState, float]], coherent: bool = False) -> DensityOp:
    """Projector of a single state, or the incoherent mixture of several.

    With ``coherent=True`` exactly one unit-weight component is allowed and
    its projector is returned.
    """
    if not components:
        raise DomainError("need at least one component")
    weights = np.array([w for _, w in components], dtype=float)
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > NORM_TOL:
        raise DomainError("weights must be non-negative and sum to 1")
    c1, c2 = components[0][0].cutoff1, components[0][0].cutoff2
    if any((s.cutoff1, s.cutoff2) != (c1, c2) for s, _ in components):
        raise DomainError("all components must share cutoffs")
    if coherent and (len(components) != 1):
        raise DomainError("a coherent projector takes exactly one unit-weight state")
    m = np.zeros((components[0][0].dim,) * 2, dtype=complex)
    for state, w in components:
        v = state.vector()
        m += w * np.outer(v, v.conj())
    return DensityOp(c1, c2, m)
