"""Qubit layouts, the coupling law and logical coupling strengths."""
from .coupling import (  # noqa
    coupling_matrix,
    logical_coupling,
    pairwise_coupling,
    self_phase,
)
from .layouts import (  # noqa
    CouplingLaw,
    ModuleLayout,
    ModulePair,
    as_logical_vector,
    as_positions,
    grid_layout_appendix_c,
    grid_layout_appendix_d,
    linear_chain,
)
