"""Search for logical encodings that maximise the gate fidelity."""
from .curve import (  # noqa
    CurvePoint,
    InfidelityCurve,
    fidelity_objective,
    infidelity_curve,
    log_grid,
    scale_encoding,
)
from .nelder_mead import OptimizationConfig, optimize_at  # noqa
