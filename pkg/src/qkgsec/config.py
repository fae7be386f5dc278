"""Process-wide numerical caps and tolerances.

The CLI ``--config`` file overrides these through :func:`update`.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass


@dataclass
class Settings:
    dense_cap: int = 24  # max n for materializing 2**n probabilities
    joint_dim_cap: int = 4096  # max (c1 + 1) * (c2 + 1) in Fock space
    norm_deficit: float = 1e-10  # max truncated probability mass
    auto_norm_deficit: float = 1e-14  # target when the cutoff is chosen automatically
    eig_tol: float = 1e-12  # off-diagonal residual for Jacobi
    eig_max_sweeps: int = 100


settings = Settings()


def update(**overrides) -> Settings:
    names = {f.name for f in dataclasses.fields(Settings)}
    unknown = set(overrides) - names
    if unknown:
        raise KeyError(f"unknown config keys: {sorted(unknown)}")
    for key, value in overrides.items():
        setattr(settings, key, type(getattr(settings, key))(value))
    return settings


def reset() -> Settings:
    for f in dataclasses.fields(Settings):
        setattr(settings, f.name, f.default)
    return settings
