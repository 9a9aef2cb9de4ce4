"""Fully quantised lattice of trapped particles with a three-level mechanical basis."""
from .channel import (  # noqa
    LatticeEvolution,
    MechanicalState,
    block_channel,
    evolve_channel,
    lattice_curve,
    lattice_fidelity,
    maximally_mixed_state,
)
from .operators import (  # noqa
    DIMENSION_CAP,
    LEVELS,
    LOGICAL_SIGNS,
    LatticeConfig,
    build_hamiltonian,
    coupling_operator,
    embed_pair,
    interaction_operators,
    mechanical_hamiltonian,
    pair_operator,
)
