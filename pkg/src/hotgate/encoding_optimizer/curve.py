"""Optimal infidelity curve over a grid of interaction times."""
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import pandas as pd
from tqdm import tqdm

from hotgate.channel_fidelity.damping import TARGET_ANGLE, as_gate_time
from hotgate.classical_noise.models import Ensemble
from hotgate.encoding_optimizer.nelder_mead import OptimizationConfig, optimize_at
from hotgate.errors import ConfigError
from hotgate.geometry.layouts import ArrayLike, as_logical_vector
from hotgate.utils import ordered_map


@dataclass(frozen=True)
class CurvePoint:
    delta_t: float
    fidelity: float
    a: np.ndarray
    b: np.ndarray


@dataclass
class InfidelityCurve:
    """Optimised and trivial-encoding fidelities along a Δt grid."""

    points: list[CurvePoint]
    trivial_fidelity: np.ndarray
    metadata: dict = field(default_factory=dict)

    @property
    def delta_t(self) -> np.ndarray:
        return np.array([p.delta_t for p in self.points])

    @property
    def fidelity(self) -> np.ndarray:
        return np.array([p.fidelity for p in self.points])

    def to_frame(self) -> pd.DataFrame:
        """One row per grid point; encodings joined with semicolons."""
        return pd.DataFrame(
            {
                "delta_t": self.delta_t,
                "infidelity_trivial": 1.0 - np.asarray(self.trivial_fidelity),
                "infidelity_optimized": 1.0 - self.fidelity,
                "encoding_a": [";".join(repr(float(x)) for x in p.a) for p in self.points],
                "encoding_b": [";".join(repr(float(x)) for x in p.b) for p in self.points],
            },
        )


def fidelity_objective(ensemble: Ensemble, t: float) -> Callable[[np.ndarray], float]:
    """F(a, b) at fixed Δt as a function of the concatenated vector (a, b)."""
    t = as_gate_time(t)
    n_a = ensemble.n_a

    def objective(x: np.ndarray) -> float:
        mu = ensemble.node_couplings(x[:n_a], x[n_a:])
        return float(np.dot(ensemble.weights, np.cos(TARGET_ANGLE - mu * t) ** 2))

    return objective


def scale_encoding(a: ArrayLike, b: ArrayLike, c: float) -> tuple[np.ndarray, np.ndarray]:
    """Slow an encoding down: F^{(ca)b}(Δt) = F^{ab}(cΔt).

    Args:
        a (ArrayLike): Logical vector of A.
        b (ArrayLike): Logical vector of B.
        c (float): Scale factor in (0, 1].

    Returns:
        tuple[np.ndarray, np.ndarray]: (c·a, b).
    """
    if not 0 < c <= 1:
        raise ConfigError(f"scale factor must lie in (0, 1], got {c}", key="c")
    return c * as_logical_vector(a), as_logical_vector(b)


def log_grid(dt_min: float, dt_max: float, points: int = 200) -> tuple[float, ...]:
    """Logarithmically spaced Δt values including both end points."""
    if not 0 < dt_min < dt_max or points < 2:
        raise ConfigError(
            f"need 0 < dt_min < dt_max and at least 2 points, got ({dt_min}, {dt_max}, {points})",
            key="dt_grid",
        )
    return tuple(np.geomspace(dt_min, dt_max, int(points)).tolist())


def _saturate(
    points: list[CurvePoint],
    ensemble: Ensemble,
) -> list[CurvePoint]:
    """Replace points that lose to an earlier optimum by that optimum slowed down."""
    saturated = [points[0]]
    best = points[0]
    for point in points[1:]:
        if best.fidelity > point.fidelity and best.delta_t > 0:
            a, b = scale_encoding(best.a, best.b, best.delta_t / point.delta_t)
            value = fidelity_objective(ensemble, point.delta_t)(np.concatenate([a, b]))
            point = CurvePoint(point.delta_t, max(value, point.fidelity), a, b)
        else:
            best = point
        saturated.append(point)
    return saturated


def infidelity_curve(
    ensemble: Ensemble,
    config: OptimizationConfig,
    progress: bool = True,
    threads: Optional[int] = None,
) -> InfidelityCurve:
    """Optimal fidelity F*(Δt) and its encoding at every grid point.

    The ensemble carries the noise model, the coupling law and the layouts.
    With ``warm_start`` each point starts from the previous optimum and the
    grid is walked in order; otherwise points run independently, in
    parallel. The trivial encoding is always an extra start, and a final
    pass enforces saturation through ``scale_encoding``.

    Args:
        ensemble (Ensemble): Coupling matrices or table of the noise model.
        config (OptimizationConfig): Grid and optimiser settings.
        progress (bool): Show a progress bar. Defaults to True.
        threads (int, optional): Worker threads for independent points.

    Returns:
        InfidelityCurve: Optimised and trivial fidelities.
    """
    n_a, n_b = ensemble.n_a, ensemble.n_b
    trivial = np.ones(n_a + n_b)
    grid = config.dt_grid
    seeds = np.random.SeedSequence(config.seed).spawn(len(grid))

    def solve(k: int, init: np.ndarray) -> CurvePoint:
        objective = fidelity_objective(ensemble, grid[k])
        x, value = optimize_at(
            objective,
            init,
            config,
            sizes=(n_a, n_b),
            seed=seeds[k],
            extra_starts=[trivial],
        )
        trivial_value = objective(trivial)
        if trivial_value > value:
            x, value = trivial, trivial_value
        return CurvePoint(grid[k], value, x[:n_a].copy(), x[n_a:].copy())

    if config.warm_start:
        points = []
        init = trivial
        for k in tqdm(range(len(grid)), disable=not progress):
            point = solve(k, init)
            points.append(point)
            init = np.concatenate([point.a, point.b])
    else:
        points = ordered_map(lambda k: solve(k, trivial), range(len(grid)), threads=threads)

    trivial_fidelity = np.array([fidelity_objective(ensemble, t)(trivial) for t in grid])
    return InfidelityCurve(_saturate(points, ensemble), trivial_fidelity)
