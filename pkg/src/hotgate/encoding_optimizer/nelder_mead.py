"""Multi-start Nelder–Mead maximisation over the box [-1, 1]^n."""
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.optimize import minimize

from hotgate.errors import ConfigError, OptimizationError
from hotgate.utils import ordered_map

SIMPLEX_STEP = 0.1
ITERATIONS_PER_PARAMETER = 5000

Seed = Union[int, np.random.SeedSequence]


@dataclass(frozen=True)
class OptimizationConfig:
    """Settings for the encoding search along a Δt grid.

    ``max_iters = None`` means 5000 iterations per optimised parameter.
    """

    dt_grid: tuple[float, ...]
    restarts: int = 4
    tolerance: float = 1e-9
    max_iters: Optional[int] = None
    warm_start: bool = True
    seed: int = 0
    xatol: float = 1e-6

    def __post_init__(self):
        grid = np.asarray(self.dt_grid, dtype=float)
        if grid.ndim != 1 or grid.size == 0:
            raise ConfigError("dt_grid must be a non-empty list of times", key="dt_grid")
        if not np.all(np.isfinite(grid)) or np.any(grid < 0):
            raise ConfigError("dt_grid entries must be finite and non-negative", key="dt_grid")
        if np.any(np.diff(grid) <= 0):
            raise ConfigError("dt_grid must be strictly ascending", key="dt_grid")
        if int(self.restarts) != self.restarts or self.restarts < 1:
            raise ConfigError(f"restarts must be >= 1, got {self.restarts}", key="restarts")
        if not self.tolerance > 0:
            raise ConfigError(f"tolerance must be positive, got {self.tolerance}", key="tolerance")
        if self.max_iters is not None and self.max_iters < 1:
            raise ConfigError(f"max_iters must be >= 1, got {self.max_iters}", key="max_iters")
        object.__setattr__(self, "dt_grid", tuple(grid.tolist()))

    def iterations(self, n_parameters: int) -> int:
        if self.max_iters is None:
            return ITERATIONS_PER_PARAMETER * n_parameters
        return int(self.max_iters)


def initial_simplex(x0: np.ndarray, step: float = SIMPLEX_STEP) -> np.ndarray:
    """Axis-aligned simplex around x0, stepping inwards at the box faces."""
    simplex = np.tile(x0, (len(x0) + 1, 1))
    for i, value in enumerate(x0):
        simplex[i + 1, i] = value + step if value + step <= 1.0 else value - step
    return simplex


def mirrored(x: np.ndarray, sizes: Optional[Sequence[int]] = None) -> np.ndarray:
    """Reverse each logical vector in the flat parameter vector."""
    if sizes is None:
        return x[::-1].copy()
    parts = np.split(x, np.cumsum(sizes)[:-1])
    return np.concatenate([part[::-1] for part in parts])


def restart_points(
    init: np.ndarray,
    restarts: int,
    sizes: Optional[Sequence[int]],
    rng: np.random.Generator,
    extra_starts: Sequence[np.ndarray] = (),
) -> list[np.ndarray]:
    """Start points: init, trivial encoding, mirrored init, then seeded random ones."""
    candidates = [init, np.ones_like(init), mirrored(init, sizes)]
    candidates = candidates[:restarts]
    while len(candidates) < restarts:
        candidates.append(rng.uniform(-1.0, 1.0, size=init.shape))
    candidates += [np.clip(np.asarray(x, dtype=float), -1.0, 1.0) for x in extra_starts]

    starts: list[np.ndarray] = []
    for x in candidates:
        if not any(np.array_equal(x, seen) for seen in starts):
            starts.append(x)
    return starts


def optimize_at(
    objective: Callable[[np.ndarray], float],
    init: Sequence[float],
    config: OptimizationConfig,
    sizes: Optional[Sequence[int]] = None,
    seed: Optional[Seed] = None,
    extra_starts: Sequence[np.ndarray] = (),
    threads: Optional[int] = 1,
) -> tuple[np.ndarray, float]:
    """Maximise objective over [-1, 1]^n from several starts.

    Each start runs scipy's bounded Nelder–Mead on -objective. The returned
    point is never worse than init or than any restart. Ties keep init;
    among restarts they go to the larger L1 norm.

    Args:
        objective (Callable): Function of the flat parameter vector, values in [0, 1].
        init (Sequence[float]): Initial point (concatenated logical vectors).
        config (OptimizationConfig): Restarts, tolerance and iteration budget.
        sizes (Sequence[int], optional): Lengths of the logical vectors in init,
            used to mirror each of them. Defaults to mirroring the whole vector.
        seed (int | SeedSequence, optional): Seed for random restarts. Defaults to config.seed.
        extra_starts (Sequence[np.ndarray]): Additional start points.
        threads (int, optional): Threads for running starts concurrently. Defaults to 1.

    Raises:
        OptimizationError: If the objective is not finite at an evaluated point.

    Returns:
        tuple[np.ndarray, float]: Best point and its objective value.
    """
    init = np.clip(np.asarray(init, dtype=float), -1.0, 1.0)
    n = init.shape[0]

    def evaluate(x: np.ndarray) -> float:
        value = float(objective(np.clip(x, -1.0, 1.0)))
        if not np.isfinite(value):
            raise OptimizationError(f"objective returned {value} at {np.array2string(x)}")
        return value

    rng = np.random.Generator(np.random.Philox(config.seed if seed is None else seed))
    starts = restart_points(init, config.restarts, sizes, rng, extra_starts)

    def run(x0: np.ndarray) -> tuple[np.ndarray, float]:
        result = minimize(
            lambda x: -evaluate(x),
            x0,
            method="Nelder-Mead",
            bounds=[(-1.0, 1.0)] * n,
            options={
                "initial_simplex": initial_simplex(x0),
                "fatol": config.tolerance,
                "xatol": config.xatol,
                "maxiter": config.iterations(n),
                "maxfev": 2 * config.iterations(n),
                "adaptive": True,
            },
        )
        x = np.clip(result.x, -1.0, 1.0)
        return x, evaluate(x)

    best_x, best_value = init, evaluate(init)
    best_is_init = True
    for x, value in ordered_map(run, starts, threads=threads):
        if value > best_value or (
            value == best_value
            and not best_is_init
            and np.abs(x).sum() > np.abs(best_x).sum()
        ):
            best_x, best_value, best_is_init = x, value, False
    return best_x, best_value
