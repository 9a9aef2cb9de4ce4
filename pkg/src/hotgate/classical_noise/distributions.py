"""Discretise p(μ̄) for the three classical noise models.

Gaussian models use tensor Gauss–Hermite grids; the discrete model is
enumerated exhaustively. Gaussian ensembles keep the per-node coupling
matrices, the discrete ensemble a per-qubit table of pair couplings, so
every logical encoding can be evaluated on the same nodes.
"""
from typing import Optional, Union

import numpy as np
from wasabi import msg

from hotgate.classical_noise.models import (
    ColdMediatorModel,
    CollectiveGaussianModel,
    CouplingDistribution,
    CouplingEnsemble,
    Ensemble,
    IndependentDiscreteModel,
    IndependentEnsemble,
    NoiseModel,
)
from hotgate.classical_noise.quadrature import default_order, gaussian_grid, max_order
from hotgate.errors import ConfigError, DomainError, SizeError
from hotgate.geometry.coupling import coupling_matrix
from hotgate.geometry.layouts import ArrayLike, CouplingLaw

SINGULAR_GUARD = 1e-9
ENUMERATION_CAP = 10**7
CHUNK_SIZE = 2**16
DOUBLING_TOLERANCE = 1e-8


def _resolve_order(order: Optional[int], n_axes: int) -> int:
    return default_order(n_axes) if order is None else order


def cold_mediator_ensemble(
    model: ColdMediatorModel,
    law: CouplingLaw,
    order: Optional[int] = None,
) -> CouplingEnsemble:
    """Quadrature ensemble over the mediator position; matrices have shape (N_A, 1)."""
    axes = list(model.noisy_axes)
    nodes, weights = gaussian_grid(
        _resolve_order(order, len(axes)),
        means=model.mean,
        stds=np.full(len(axes), model.sigma),
    )
    positions = np.tile(model.center, (len(weights), 1))
    positions[:, axes] = nodes
    matrices = coupling_matrix(
        law,
        model.chain.positions,
        positions[:, None, :],
        min_distance=SINGULAR_GUARD,
    )
    return CouplingEnsemble(weights, matrices)


def collective_ensemble(
    model: CollectiveGaussianModel,
    law: CouplingLaw,
    order: Optional[int] = None,
) -> CouplingEnsemble:
    """Quadrature ensemble over the relative displacement r - q.

    μ̄ only depends on r - q, which is Gaussian with variance 2σ² per noisy
    axis, so a single grid over the difference replaces the two independent
    displacements.
    """
    axes = list(model.noisy_axes)
    nodes, weights = gaussian_grid(
        _resolve_order(order, len(axes)),
        means=np.zeros(len(axes)),
        stds=np.full(len(axes), np.sqrt(2.0) * model.sigma),
    )
    shifts = np.zeros((len(weights), model.layoutA.dim))
    shifts[:, axes] = nodes
    matrices = coupling_matrix(
        law,
        model.layoutA.positions[None, :, :] + shifts[:, None, :],
        model.layoutB.positions[None, :, :],
        min_distance=SINGULAR_GUARD,
    )
    return CouplingEnsemble(weights, matrices)


def _configuration_couplings(model: IndependentDiscreteModel, law: CouplingLaw) -> np.ndarray:
    """P[i, j, c, d] = μ(r_i + δ_c, q_j + δ_d)."""
    posA = model.layoutA.positions[:, None, :] + model.offsets[None, :, :]
    posB = model.layoutB.positions[:, None, :] + model.offsets[None, :, :]
    diffs = posA[:, None, :, None, :] - posB[None, :, None, :, :]
    dist = np.linalg.norm(diffs, axis=-1)
    if np.min(dist) < SINGULAR_GUARD:
        raise DomainError(
            "a displacement configuration places two qubits on top of each other; "
            "increase the module separation or reduce the displacements",
        )
    return law(dist)


def _check_enumeration(model: IndependentDiscreteModel, enumeration_cap: int):
    if model.n_configurations > enumeration_cap:
        raise SizeError(
            f"{model.kappa}^{len(model.layoutA) + len(model.layoutB)} = "
            f"{model.n_configurations} configurations exceed the enumeration cap "
            f"{enumeration_cap}; reduce N_A, N_B or the number of displacements",
        )


def independent_ensemble(
    model: IndependentDiscreteModel,
    law: CouplingLaw,
    enumeration_cap: int = ENUMERATION_CAP,
) -> IndependentEnsemble:
    """Exact ensemble over all κ^(N_A + N_B) configurations.

    Only the (N_A, N_B, κ, κ) table of pair couplings and one weight per
    configuration are stored; encodings are evaluated chunk by chunk.
    """
    _check_enumeration(model, enumeration_cap)
    return IndependentEnsemble(model, _configuration_couplings(model, law), chunk_size=CHUNK_SIZE)


def distribution_cold_mediator(
    model: ColdMediatorModel,
    a: ArrayLike,
    b1: float,
    law: CouplingLaw,
    order: Optional[int] = None,
) -> CouplingDistribution:
    """p(μ̄) for μ̄ = b₁ Σ_i a_i μ(r_i, q₁) with q₁ Gaussian.

    Args:
        model (ColdMediatorModel): Chain and mediator statistics.
        a (ArrayLike): Logical vector of the chain.
        b1 (float): Logical weight of the mediator.
        law (CouplingLaw): Coupling law.
        order (int, optional): Nodes per noisy axis. Defaults to 64 (one axis) or 32.

    Returns:
        CouplingDistribution: One node per quadrature point.
    """
    return cold_mediator_ensemble(model, law, order).distribution(a, [b1])


def distribution_collective(
    model: CollectiveGaussianModel,
    a: ArrayLike,
    b: ArrayLike,
    law: CouplingLaw,
    order: Optional[int] = None,
) -> CouplingDistribution:
    """p(μ̄) under collective Gaussian noise of both modules."""
    return collective_ensemble(model, law, order).distribution(a, b)


def distribution_independent(
    model: IndependentDiscreteModel,
    a: ArrayLike,
    b: ArrayLike,
    law: CouplingLaw,
    enumeration_cap: int = ENUMERATION_CAP,
) -> CouplingDistribution:
    """p(μ̄) by enumerating every configuration of the independent model.

    Configurations are processed in chunks so the coupling matrices of all
    κ^(N_A + N_B) configurations are never held at once.

    Args:
        model (IndependentDiscreteModel): Layouts and displacement distribution.
        a (ArrayLike): Logical vector of A.
        b (ArrayLike): Logical vector of B.
        law (CouplingLaw): Coupling law.
        enumeration_cap (int): Maximum number of configurations. Defaults to 10^7.

    Raises:
        SizeError: If κ^(N_A + N_B) exceeds enumeration_cap.

    Returns:
        CouplingDistribution: Exact distribution (``exact=True``).
    """
    return independent_ensemble(model, law, enumeration_cap).distribution(a, b)


def build_ensemble(
    model: NoiseModel,
    law: CouplingLaw,
    order: Optional[int] = None,
    enumeration_cap: int = ENUMERATION_CAP,
) -> Ensemble:
    """Ensemble for any classical noise model."""
    if isinstance(model, ColdMediatorModel):
        return cold_mediator_ensemble(model, law, order)
    if isinstance(model, CollectiveGaussianModel):
        return collective_ensemble(model, law, order)
    if isinstance(model, IndependentDiscreteModel):
        if order is not None:
            msg.warn("quadrature order is ignored for the discrete model, which is enumerated")
        return independent_ensemble(model, law, enumeration_cap)
    raise ConfigError(f"unknown noise model {type(model).__name__}")


def _trivial_fidelities(ensemble: CouplingEnsemble, dt_grid: np.ndarray) -> np.ndarray:
    mu = ensemble.node_couplings(np.ones(ensemble.n_a), np.ones(ensemble.n_b))
    return np.array([np.dot(ensemble.weights, np.cos(np.pi / 4 - mu * t) ** 2) for t in dt_grid])


def converged_order(
    model: Union[ColdMediatorModel, CollectiveGaussianModel],
    law: CouplingLaw,
    dt_grid: ArrayLike,
    tolerance: float = DOUBLING_TOLERANCE,
    order: Optional[int] = None,
) -> int:
    """Smallest doubling of the quadrature order that passes the doubling test.

    Starting from ``order`` (or the default), the order is doubled until
    going from k to 2k moves the trivial-encoding fidelity by less than
    ``tolerance`` at every Δt of the grid. The trivial encoding gives the
    largest |μ̄| and hence the fastest oscillating integrand. Couplings with
    poles close to the real axis (σ large against the module separation)
    and late Δt need orders far above the default.

    Args:
        model (ColdMediatorModel | CollectiveGaussianModel): Gaussian noise model.
        law (CouplingLaw): Coupling law.
        dt_grid (ArrayLike): Interaction times the ensemble will be used at.
        tolerance (float): Largest fidelity change accepted on doubling. Defaults to 1e-8.
        order (int, optional): First order tried. Defaults to 64 (one axis) or 32.

    Raises:
        ConfigError: For the discrete model, which is enumerated exactly.

    Returns:
        int: Nodes per noisy axis. If the cap is reached first, the cap is
            returned with a warning naming the remaining drift.
    """
    if isinstance(model, CollectiveGaussianModel):
        build = collective_ensemble
    elif isinstance(model, ColdMediatorModel):
        build = cold_mediator_ensemble
    else:
        raise ConfigError(f"{type(model).__name__} has no quadrature order to converge", key="order")
    n_axes = len(model.noisy_axes)
    order = _resolve_order(order, n_axes)
    cap = max_order(n_axes)
    dt_grid = np.asarray(dt_grid, dtype=float)

    drift = float("nan")
    current = _trivial_fidelities(build(model, law, order), dt_grid)
    while 2 * order <= cap:
        finer = _trivial_fidelities(build(model, law, 2 * order), dt_grid)
        drift = float(np.max(np.abs(finer - current)))
        if drift < tolerance:
            return order
        order, current = 2 * order, finer
    msg.warn(
        f"quadrature order {order} is the cap for {n_axes} noisy axes; the doubling "
        f"test still moved the fidelity by {drift:.1e} (tolerance {tolerance:.0e})",
    )
    return order
