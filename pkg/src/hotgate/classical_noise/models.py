"""Position-noise models and the discretised coupling distributions they induce."""
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from hotgate.errors import ConfigError, NumericError
from hotgate.geometry.layouts import (
    ArrayLike,
    ModuleLayout,
    as_logical_vector,
    grid_layout_appendix_c,
    grid_layout_appendix_d,
    linear_chain,
)
from hotgate.utils import chunker

Scalars = Union[float, Sequence[float]]


def _check_sigma(sigma: float):
    if not np.isfinite(sigma) or sigma < 0:
        raise ConfigError(f"sigma must be a finite non-negative number, got {sigma}", key="sigma")


def _check_axes(axes: Sequence[int], dim: int) -> tuple[int, ...]:
    axes = tuple(int(ax) for ax in axes)
    if not axes:
        raise ConfigError("at least one noisy axis is required", key="noisy_axes")
    if len(set(axes)) != len(axes) or any(not 0 <= ax < dim for ax in axes):
        raise ConfigError(
            f"noisy axes {axes} are not distinct axes of a {dim}D layout",
            key="noisy_axes",
        )
    return axes


@dataclass(frozen=True)
class ColdMediatorModel:
    """Fixed module A and a single mediator qubit with Gaussian position.

    The mediator sits at ``center`` on average: its noisy coordinates have
    means ``mean`` and standard deviation ``sigma``, its remaining coordinates
    are fixed to ``offset`` (Δy for a 1D chain in the plane).
    """

    chain: ModuleLayout
    offset: Scalars
    mean: Scalars
    sigma: float
    noisy_axes: tuple[int, ...] = (0,)

    def __post_init__(self):
        _check_sigma(self.sigma)
        axes = _check_axes(self.noisy_axes, self.chain.dim)
        object.__setattr__(self, "noisy_axes", axes)
        mean = np.atleast_1d(np.asarray(self.mean, dtype=float))
        offset = np.atleast_1d(np.asarray(self.offset, dtype=float))
        if mean.shape != (len(axes),):
            raise ConfigError("one mean per noisy axis is required", key="mean")
        if offset.shape != (self.chain.dim - len(axes),):
            raise ConfigError("one offset per fixed axis is required", key="offset")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "offset", offset)

    @property
    def fixed_axes(self) -> tuple[int, ...]:
        return tuple(ax for ax in range(self.chain.dim) if ax not in self.noisy_axes)

    @property
    def center(self) -> np.ndarray:
        """Mean position of the mediator qubit."""
        center = np.zeros(self.chain.dim)
        center[list(self.noisy_axes)] = self.mean
        center[list(self.fixed_axes)] = self.offset
        return center


@dataclass(frozen=True)
class CollectiveGaussianModel:
    """Two rigid modules whose centres of mass fluctuate independently.

    Every qubit of A moves with one common Gaussian displacement r, every
    qubit of B with an independent q; both have standard deviation ``sigma``
    along ``noisy_axes``.
    """

    layoutA: ModuleLayout
    layoutB: ModuleLayout
    sigma: float
    noisy_axes: tuple[int, ...] = (0,)

    def __post_init__(self):
        _check_sigma(self.sigma)
        if self.layoutA.dim != self.layoutB.dim:
            raise ConfigError("both modules must use the same spatial dimension")
        object.__setattr__(self, "noisy_axes", _check_axes(self.noisy_axes, self.layoutA.dim))


@dataclass(frozen=True)
class IndependentDiscreteModel:
    """Every qubit is displaced i.i.d. by one of κ offset vectors."""

    layoutA: ModuleLayout
    layoutB: ModuleLayout
    displacements: tuple[tuple[ArrayLike, float], ...]
    offsets: np.ndarray = field(init=False, repr=False)
    probabilities: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.layoutA.dim != self.layoutB.dim:
            raise ConfigError("both modules must use the same spatial dimension")
        if len(self.displacements) < 1:
            raise ConfigError("at least one displacement is required", key="displacements")
        offsets = np.array([np.asarray(vec, dtype=float) for vec, _ in self.displacements])
        probabilities = np.array([float(p) for _, p in self.displacements])
        if offsets.shape != (len(self.displacements), self.layoutA.dim):
            raise ConfigError(
                f"displacements must be {self.layoutA.dim}D vectors",
                key="displacements",
            )
        if np.any(probabilities <= 0) or abs(probabilities.sum() - 1.0) > 1e-12:
            raise ConfigError(
                "displacement probabilities must be positive and sum to 1",
                key="probabilities",
            )
        object.__setattr__(self, "offsets", offsets)
        object.__setattr__(self, "probabilities", probabilities)

    @property
    def kappa(self) -> int:
        return len(self.probabilities)

    @property
    def n_configurations(self) -> int:
        return self.kappa ** (len(self.layoutA) + len(self.layoutB))

    def configurations(self, index: np.ndarray) -> np.ndarray:
        """Displacement choice per qubit for flat configuration indices, shape (n, N_A + N_B)."""
        n_qubits = len(self.layoutA) + len(self.layoutB)
        return np.stack(np.unravel_index(index, (self.kappa,) * n_qubits), axis=-1)


NoiseModel = Union[ColdMediatorModel, CollectiveGaussianModel, IndependentDiscreteModel]


@dataclass(frozen=True)
class CouplingDistribution:
    """Discrete distribution of the logical coupling strength μ̄."""

    mu_bar: np.ndarray
    weights: np.ndarray
    exact: bool = False

    def __post_init__(self):
        mu_bar = np.atleast_1d(np.asarray(self.mu_bar, dtype=float))
        weights = np.atleast_1d(np.asarray(self.weights, dtype=float))
        if mu_bar.ndim != 1 or mu_bar.shape != weights.shape or mu_bar.size == 0:
            raise ConfigError("mu_bar and weights must be matching non-empty 1D arrays")
        if not np.all(np.isfinite(mu_bar)):
            raise NumericError("non-finite coupling in distribution")
        tolerance = 1e-12 if self.exact else 1e-10
        if np.any(weights <= 0) or abs(weights.sum() - 1.0) > tolerance:
            raise NumericError(
                f"weights must be positive and sum to 1, got sum {weights.sum():.15f}",
            )
        object.__setattr__(self, "mu_bar", mu_bar)
        object.__setattr__(self, "weights", weights)

    def __len__(self) -> int:
        return self.mu_bar.shape[0]

    @property
    def nodes(self) -> list[tuple[float, float]]:
        return list(zip(self.mu_bar.tolist(), self.weights.tolist()))

    def expectation(self, func: Callable[[np.ndarray], np.ndarray]) -> float:
        """Weighted average of func(μ̄) over the nodes."""
        return float(np.dot(self.weights, func(self.mu_bar)))

    def mean(self) -> float:
        return float(np.dot(self.weights, self.mu_bar))

    def variance(self) -> float:
        return float(np.dot(self.weights, (self.mu_bar - self.mean()) ** 2))

    @classmethod
    def delta(cls, mu_bar: float) -> "CouplingDistribution":
        """Single node carrying all the weight."""
        return cls(np.array([mu_bar]), np.array([1.0]), exact=True)


@dataclass(frozen=True)
class CouplingEnsemble:
    """Weighted set of coupling matrices M_k with μ̄_k = aᵀ M_k b.

    Built once per noise model; any pair of logical vectors can then be
    evaluated without integrating again.
    """

    weights: np.ndarray
    matrices: np.ndarray
    exact: bool = False

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=float)
        matrices = np.asarray(self.matrices, dtype=float)
        if matrices.ndim != 3 or matrices.shape[0] != weights.shape[0]:
            raise ConfigError("matrices must have shape (nodes, N_A, N_B)")
        keep = weights > 0
        object.__setattr__(self, "weights", weights[keep])
        object.__setattr__(self, "matrices", matrices[keep])

    def __len__(self) -> int:
        return self.weights.shape[0]

    @property
    def n_a(self) -> int:
        return self.matrices.shape[1]

    @property
    def n_b(self) -> int:
        return self.matrices.shape[2]

    def node_couplings(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """μ̄_k for already validated vectors."""
        return np.einsum("i,kij,j->k", a, self.matrices, b)

    def mu_bar(self, a: ArrayLike, b: ArrayLike) -> np.ndarray:
        """μ̄_k for every node."""
        return self.node_couplings(as_logical_vector(a, size=self.n_a), as_logical_vector(b, size=self.n_b))

    def distribution(self, a: ArrayLike, b: ArrayLike) -> CouplingDistribution:
        return CouplingDistribution(self.mu_bar(a, b), self.weights, exact=self.exact)

    def mean_matrix(self) -> np.ndarray:
        return np.einsum("k,kij->ij", self.weights, self.matrices)


@dataclass(frozen=True)
class IndependentEnsemble:
    """Exact ensemble of the independent model kept as a per-qubit node table.

    ``table[i, j, c, d]`` is μ(r_i + δ_c, q_j + δ_d). Configurations are
    expanded chunk by chunk whenever an encoding is evaluated, so only one
    weight per configuration is stored, never its N_A x N_B matrix.
    """

    model: IndependentDiscreteModel
    table: np.ndarray
    chunk_size: int = 2**16
    weights: np.ndarray = field(init=False, repr=False)
    exact: bool = field(default=True, init=False)

    def __post_init__(self):
        table = np.asarray(self.table, dtype=float)
        kappa = self.model.kappa
        if table.shape != (len(self.model.layoutA), len(self.model.layoutB), kappa, kappa):
            raise ConfigError("table must have shape (N_A, N_B, κ, κ)")
        weights = np.empty(self.model.n_configurations)
        for index in self._chunks():
            weights[index] = np.prod(self.model.probabilities[self.model.configurations(index)], axis=1)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "weights", weights)

    def _chunks(self):
        return chunker(np.arange(self.model.n_configurations), self.chunk_size)

    def __len__(self) -> int:
        return self.weights.shape[0]

    @property
    def n_a(self) -> int:
        return self.table.shape[0]

    @property
    def n_b(self) -> int:
        return self.table.shape[1]

    def node_couplings(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """μ̄ per configuration for already validated vectors."""
        weighted = a[:, None, None, None] * b[None, :, None, None] * self.table
        mu_bar = np.empty(len(self))
        for index in self._chunks():
            config = self.model.configurations(index)
            cA, cB = config[:, : self.n_a], config[:, self.n_a :]
            total = np.zeros(len(index))
            for i in range(self.n_a):
                for j in range(self.n_b):
                    total += weighted[i, j, cA[:, i], cB[:, j]]
            mu_bar[index] = total
        return mu_bar

    def mu_bar(self, a: ArrayLike, b: ArrayLike) -> np.ndarray:
        return self.node_couplings(as_logical_vector(a, size=self.n_a), as_logical_vector(b, size=self.n_b))

    def distribution(self, a: ArrayLike, b: ArrayLike) -> CouplingDistribution:
        return CouplingDistribution(self.mu_bar(a, b), self.weights, exact=True)

    def mean_matrix(self) -> np.ndarray:
        """Displacements are independent per qubit, so the mean factorises."""
        p = self.model.probabilities
        return np.einsum("ijcd,c,d->ij", self.table, p, p)


Ensemble = Union[CouplingEnsemble, IndependentEnsemble]


def cold_mediator_chain(
    n_a: int,
    dx: float = 1.0,
    dy: float = 1.0,
    sigma: float = 3.0,
) -> ColdMediatorModel:
    """1D chain r_i = ((i - 1)dx, 0) with the mediator at y = dy.

    The mediator's x coordinate is centred on the chain.
    """
    return ColdMediatorModel(
        chain=linear_chain(n_a, spacing=dx),
        offset=dy,
        mean=(n_a - 1) * dx / 2,
        sigma=sigma,
        noisy_axes=(0,),
    )


def cold_mediator_grid(
    n_a: int,
    dx: float = 1.0,
    dy: float = 1.0,
    dz: float = 1.0,
    sigma: float = 1.0,
) -> ColdMediatorModel:
    """3x3 grid in the z = 0 plane; the mediator hovers at z = dz over its centre."""
    return ColdMediatorModel(
        chain=grid_layout_appendix_c(n_a, dx=dx, dy=dy),
        offset=dz,
        mean=(dx, dy),
        sigma=sigma,
        noisy_axes=(0, 1),
    )


def collective_chains(
    n_a: int,
    n_b: int,
    dx: float = 1.0,
    dy: float = 1.0,
    sigma: float = 3.0,
) -> CollectiveGaussianModel:
    """Two parallel chains along x, B displaced by dy, noise along x."""
    return CollectiveGaussianModel(
        layoutA=linear_chain(n_a, spacing=dx),
        layoutB=linear_chain(n_b, spacing=dx, offset=(0.0, dy)),
        sigma=sigma,
        noisy_axes=(0,),
    )


def collective_grids(
    n_a: int,
    n_b: int,
    dx: float = 1.0,
    dy: float = 1.0,
    dz: float = 1.0,
    sigma: float = 2.0,
) -> CollectiveGaussianModel:
    """Two stacked planar grids, A at height dz, with in-plane noise."""
    return CollectiveGaussianModel(
        layoutA=grid_layout_appendix_d(n_a, dx=dx, dy=dy, z=dz),
        layoutB=grid_layout_appendix_d(n_b, dx=dx, dy=dy, z=0.0),
        sigma=sigma,
        noisy_axes=(0, 1),
    )


def independent_chains(
    n_a: int,
    n_b: int,
    dx: float = 2.0,
    dy: float = 4.0,
    delta_y: float = 1.0,
    probabilities: Sequence[float] = (0.25, 0.5, 0.25),
) -> IndependentDiscreteModel:
    """Chains at y = dy (A) and y = 0 (B), each qubit jumping by -δy, 0 or δy along y."""
    if len(probabilities) != 3:
        raise ConfigError("three probabilities are needed for (-δy, 0, δy)", key="probabilities")
    steps = (-delta_y, 0.0, delta_y)
    return IndependentDiscreteModel(
        layoutA=linear_chain(n_a, spacing=dx, offset=(0.0, dy)),
        layoutB=linear_chain(n_b, spacing=dx),
        displacements=tuple(((0.0, step), p) for step, p in zip(steps, probabilities)),
    )
