"""Linear photon loss (beamsplitter with vacuum input) as a Kraus channel."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from qkgsec.errors import DomainError
from qkgsec.fock.states import DensityOp


@dataclass(frozen=True)
class LossChannel:
    eta: float  # transmittance
    mode: Union[int, str] = "both"  # 1, 2 or "both"

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise DomainError(f"transmittance must lie in [0, 1], got {self.eta!r}")
        if self.mode not in (1, 2, "both"):
            raise DomainError(f"mode must be 1, 2 or 'both', got {self.mode!r}")


def kraus_operators(eta: float, cutoff: int) -> np.ndarray:
    """``A[k]`` with ``<m-k|A_k|m> = sqrt(C(m, k) eta**(m-k) (1-eta)**k)``.

    Shape ``(cutoff + 1, cutoff + 1, cutoff + 1)``.  Loss never raises the
    photon number, so ``sum_k A_k^H A_k`` is exactly the identity on the
    truncated space.
    """
    size = cutoff + 1
    ops = np.zeros((size, size, size))
    for m in range(size):
        for k in range(m + 1):
            ops[k, m - k, m] = math.sqrt(math.comb(m, k) * eta ** (m - k) * (1.0 - eta) ** k)
    return ops


def _lose_mode1(t: np.ndarray, eta: float) -> np.ndarray:
    a = kraus_operators(eta, t.shape[0] - 1)
    return np.einsum("kai,ijml,kbm->ajbl", a, t, a, optimize=True)


def _lose_mode2(t: np.ndarray, eta: float) -> np.ndarray:
    a = kraus_operators(eta, t.shape[1] - 1)
    return np.einsum("kaj,ijml,kbl->iamb", a, t, a, optimize=True)


def lose(matrix: np.ndarray, cutoff1: int, cutoff2: int, channel: LossChannel) -> np.ndarray:
    """Apply the channel to any operator on the joint space (it is linear)."""
    d1, d2 = cutoff1 + 1, cutoff2 + 1
    t = np.asarray(matrix, dtype=complex).reshape(d1, d2, d1, d2)
    if channel.mode in (1, "both"):
        t = _lose_mode1(t, channel.eta)
    if channel.mode in (2, "both"):
        t = _lose_mode2(t, channel.eta)
    return t.reshape(d1 * d2, d1 * d2)


def apply_loss(rho: DensityOp, channel: LossChannel) -> DensityOp:
    """``rho -> sum_k A_k rho A_k^H`` on the chosen mode(s); mode 1 first for ``both``."""
    m = lose(rho.matrix, rho.cutoff1, rho.cutoff2, channel)
    m = 0.5 * (m + m.conj().T)
    return DensityOp(rho.cutoff1, rho.cutoff2, m)
