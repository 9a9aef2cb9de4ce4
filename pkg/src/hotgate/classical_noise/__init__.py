"""Classical position-noise models and the distributions of μ̄ they induce."""
from .distributions import (  # noqa
    DOUBLING_TOLERANCE,
    ENUMERATION_CAP,
    SINGULAR_GUARD,
    build_ensemble,
    cold_mediator_ensemble,
    collective_ensemble,
    converged_order,
    distribution_cold_mediator,
    distribution_collective,
    distribution_independent,
    independent_ensemble,
)
from .models import (  # noqa
    ColdMediatorModel,
    CollectiveGaussianModel,
    CouplingDistribution,
    CouplingEnsemble,
    Ensemble,
    IndependentDiscreteModel,
    IndependentEnsemble,
    NoiseModel,
    cold_mediator_chain,
    cold_mediator_grid,
    collective_chains,
    collective_grids,
    independent_chains,
)
from .sampling import monte_carlo_estimate, sample_coupling  # noqa
