"""Security measures for adversary error profiles and lossy Fock-space decoherence."""

from qkgsec.errors import DomainError
from qkgsec.profile import (
    BoundCheck,
    DenseProfile,
    ErrorProfile,
    ProductBernoulli,
    SecurityReport,
    SpikeUniform,
    UniformSubset,
    analyze,
    check_bounds,
    normalize_and_sort,
)

__version__ = "0.1.0"

__all__ = [
    "BoundCheck",
    "DenseProfile",
    "DomainError",
    "ErrorProfile",
    "ProductBernoulli",
    "SecurityReport",
    "SpikeUniform",
    "UniformSubset",
    "analyze",
    "check_bounds",
    "normalize_and_sort",
]
