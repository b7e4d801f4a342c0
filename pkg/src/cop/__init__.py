"""Coherence of purification and related quantumness measures."""
from .coherence import (
    coherence_of_formation,
    generalized_cnot,
    make_dephasing_channel,
    make_gio_channel,
    make_incoherent_channel,
    make_randomizing_channel,
    pure_coherence,
    qubit_coherence_of_formation,
    relative_entropy_coherence,
)
from .entanglement import (
    BipartiteCut,
    concurrence,
    entanglement_entropy,
    entanglement_of_purification,
    eof_two_qubit,
)
from .manifold_opt import OptimizerConfig, grid_oracle, minimize_over_unitaries
from .purification import (
    CopResult,
    OptimizerFailure,
    canonical_purification,
    coherence_of_purification,
    cop_adapted,
    cop_fixed_basis,
    cop_of_dephased,
    cop_sweep,
    residual_quantumness,
)
from .qcore import (
    DensityOperator,
    KrausChannel,
    PureState,
    StructureError,
    UnsupportedError,
    ValidationError,
    apply_channel,
    dephase,
    partial_trace,
    random_state,
    shannon_entropy,
    tensor,
    von_neumann_entropy,
)

__all__ = [
    "OptimizerConfig",
    "grid_oracle",
    "minimize_over_unitaries",
    "BipartiteCut",
    "CopResult",
    "DensityOperator",
    "KrausChannel",
    "OptimizerFailure",
    "PureState",
    "StructureError",
    "UnsupportedError",
    "ValidationError",
    "apply_channel",
    "canonical_purification",
    "coherence_of_formation",
    "coherence_of_purification",
    "concurrence",
    "cop_adapted",
    "cop_fixed_basis",
    "cop_of_dephased",
    "cop_sweep",
    "dephase",
    "entanglement_entropy",
    "entanglement_of_purification",
    "eof_two_qubit",
    "generalized_cnot",
    "make_dephasing_channel",
    "make_gio_channel",
    "make_incoherent_channel",
    "make_randomizing_channel",
    "partial_trace",
    "pure_coherence",
    "qubit_coherence_of_formation",
    "random_state",
    "relative_entropy_coherence",
    "residual_quantumness",
    "shannon_entropy",
    "tensor",
    "von_neumann_entropy",
]
