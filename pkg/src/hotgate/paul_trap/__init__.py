"""Quantised ion chains in linear Paul traps: modes, thermal states and couplings."""
from .coupling import (  # noqa
    VARIANTS,
    ModeQuadrature,
    TrapPairConfig,
    check_scale_separation,
    diagonal_mode_coupling,
    exact_mode_fidelity,
    fock_operators,
    mode_coupling_ensemble,
    mode_quadrature,
    nondegenerate_fidelity,
    self_mode_couplings,
    state_coupling_matrices,
)
from .hermite import (  # noqa
    hermite_functions,
    level_quadrature,
    normalized_hermite,
    oscillator_wavefunction,
)
from .modes import (  # noqa
    ModeDecomposition,
    TrapSpec,
    equilibrium_positions,
    mode_decomposition,
)
from .thermal import STATE_CAP, ThermalTruncation, partition_function, thermal_truncation  # noqa
