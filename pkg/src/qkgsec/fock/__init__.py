"""Two-mode Fock-space simulation of loss, decoherence and phase resolution."""

from qkgsec.fock.channels import LossChannel, apply_loss, kraus_operators
from qkgsec.fock.linalg import block_eigvalsh, jacobi_eigh
from qkgsec.fock.metrology import (
    Generator,
    cat_decoherence,
    decoherence_curve,
    qfi,
    trace_distance,
)
from qkgsec.fock.states import (
    Cat,
    Coherent,
    DensityOp,
    NumberSuperposition,
    PureState,
    SqueezedVacuum,
    make_state,
    to_density,
)

__all__ = [
    "Cat",
    "Coherent",
    "DensityOp",
    "Generator",
    "LossChannel",
    "NumberSuperposition",
    "PureState",
    "SqueezedVacuum",
    "apply_loss",
    "block_eigvalsh",
    "cat_decoherence",
    "decoherence_curve",
    "jacobi_eigh",
    "kraus_operators",
    "make_state",
    "qfi",
    "to_density",
    "trace_distance",
]
