"""Scenario runners: from a validated ScenarioConfig to a result record."""
import time
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any, Union

import numpy as np
from wasabi import msg

from hotgate.about import __version__
from hotgate.channel_fidelity.echo import EchoSpec, echo_residual
from hotgate.classical_noise import (
    build_ensemble,
    cold_mediator_chain,
    cold_mediator_grid,
    collective_chains,
    collective_grids,
    converged_order,
    independent_chains,
)
from hotgate.classical_noise.models import Ensemble
from hotgate.cli.config import ScenarioConfig
from hotgate.encoding_optimizer import (
    CurvePoint,
    InfidelityCurve,
    OptimizationConfig,
    fidelity_objective,
    infidelity_curve,
    log_grid,
)
from hotgate.errors import ConfigError, NumericError
from hotgate.geometry.layouts import CouplingLaw
from hotgate.lattice_quantized import LatticeConfig, lattice_curve, maximally_mixed_state
from hotgate.paul_trap import (
    TrapPairConfig,
    check_scale_separation,
    mode_coupling_ensemble,
    thermal_truncation,
)

ECHO_TOLERANCE = 1e-10
ECHO_INSTANCES = 20

COUNT_KEYS = ("N_A", "N_B", "N", "K", "levels", "instances")
POSITIVE_KEYS = ("dx", "dy", "dz", "omega", "omega_A", "omega_B", "L", "T", "tau")
NON_NEGATIVE_KEYS = ("J", "sigma", "delta_y")


@dataclass
class CurveRecord:
    """A computed curve with the metadata needed to reproduce it."""

    curve: InfidelityCurve
    metadata: dict[str, Any] = field(default_factory=dict)

    def to_frame(self):
        return self.curve.to_frame()


@dataclass
class EchoRecord:
    """Largest echo residual over random instances."""

    max_residual: float
    residuals: list[float]
    metadata: dict[str, Any] = field(default_factory=dict)


Record = Union[CurveRecord, EchoRecord]


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    defaults: dict[str, Any]
    runner: Callable[[ScenarioConfig, dict[str, Any], bool], Record]


SCENARIOS: dict[str, Scenario] = {}


def scenario(name: str, description: str, **defaults):
    """Register a scenario runner with its default parameters."""

    def decorator(func):
        SCENARIOS[name] = Scenario(name, description, defaults, func)
        return func

    return decorator


def validate_parameters(config: ScenarioConfig) -> dict[str, Any]:
    """Merge defaults with the configured parameters and check their ranges.

    Raises:
        ConfigError: On unknown scenarios, unknown keys or values out of range,
            naming the key and its line when known.
    """
    if config.scenario not in SCENARIOS:
        raise ConfigError(
            f"unknown scenario {config.scenario!r}, expected one of {sorted(SCENARIOS)}",
            key="scenario",
            line=config.line_of("scenario", "run"),
        )
    spec = SCENARIOS[config.scenario]
    params = dict(spec.defaults)
    for key, value in config.parameters.items():
        if key not in spec.defaults:
            raise config.error(f"unknown parameter {key!r} for scenario {spec.name}", key)
        params[key] = value

    for key, value in params.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise config.error(f"{key} must be a number, got {value!r}", key)
        if not np.isfinite(value):
            raise config.error(f"{key} must be finite, got {value}", key)
        if key in COUNT_KEYS and (int(value) != value or value < 1):
            raise config.error(f"{key} must be a positive integer, got {value}", key)
        if key in POSITIVE_KEYS and value <= 0:
            raise config.error(f"{key} must be positive, got {value}", key)
        if key in NON_NEGATIVE_KEYS and value < 0:
            raise config.error(f"{key} must be non-negative, got {value}", key)
        if key == "epsilon" and not 0 < value < 1:
            raise config.error(f"epsilon must lie in (0, 1), got {value}", key)
        if key == "gamma" and (int(value) != value or value < 1):
            raise config.error(f"gamma must be a positive integer, got {value}", key)
        if key == "order" and (int(value) != value or value < 0):
            raise config.error(f"order must be a non-negative integer, got {value}", key)
    for key in COUNT_KEYS + ("order",):
        if key in params:
            params[key] = int(params[key])
    return params


def dt_grid(config: ScenarioConfig) -> tuple[float, ...]:
    grid = config.grid
    if "values" in grid:
        values = grid["values"]
        if not isinstance(values, list) or not values:
            raise config.error("values must be a non-empty list of times", "values", "grid")
        return tuple(float(v) for v in values)
    try:
        return log_grid(float(grid.get("dt_min", 0.01)), float(grid.get("dt_max", 10.0)), int(grid.get("points", 200)))
    except ConfigError as e:
        raise config.error(str(e), "dt_min", "grid") from e


def optimization_config(config: ScenarioConfig) -> OptimizationConfig:
    settings = {k: v for k, v in config.optimizer.items() if k != "optimize"}
    try:
        return OptimizationConfig(dt_grid=dt_grid(config), seed=config.seed, **settings)
    except ConfigError as e:
        raise config.error(str(e), e.key or "optimizer", "optimizer") from e


def _law(params: dict[str, Any]) -> CouplingLaw:
    return CouplingLaw(J=float(params["J"]), gamma=int(params["gamma"]))


def _trivial_curve(grid: tuple[float, ...], fidelities: np.ndarray, n_a: int, n_b: int) -> InfidelityCurve:
    points = [CurvePoint(t, float(f), np.ones(n_a), np.ones(n_b)) for t, f in zip(grid, fidelities)]
    return InfidelityCurve(points, np.asarray(fidelities, dtype=float))


def _ensemble_curve(
    config: ScenarioConfig,
    ensemble: Ensemble,
    progress: bool,
) -> InfidelityCurve:
    opt = optimization_config(config)
    if not config.optimizer.get("optimize", True):
        ones = np.ones(ensemble.n_a + ensemble.n_b)
        values = np.array([fidelity_objective(ensemble, t)(ones) for t in opt.dt_grid])
        return _trivial_curve(opt.dt_grid, values, ensemble.n_a, ensemble.n_b)
    return infidelity_curve(ensemble, opt, progress=progress)


def _gaussian_ensemble(config: ScenarioConfig, model, params: dict[str, Any]) -> Ensemble:
    """order = 0 picks the order that passes the doubling test on the run's Δt grid."""
    law = _law(params)
    order = params.get("order") or converged_order(model, law, dt_grid(config))
    return build_ensemble(model, law, order)


@scenario("cold_mediator_1d", "1D chain A, single Gaussian mediator B", N_A=4, dx=1.0, dy=1.0, sigma=3.0, J=1.0, gamma=1, order=0)
def run_cold_mediator_1d(config, params, progress):
    model = cold_mediator_chain(params["N_A"], params["dx"], params["dy"], params["sigma"])
    return _ensemble_curve(config, _gaussian_ensemble(config, model, params), progress)


@scenario("cold_mediator_2d", "3x3 grid A, mediator above with in-plane noise", N_A=9, dx=1.0, dy=1.0, dz=1.0, sigma=1.0, J=1.0, gamma=1, order=0)
def run_cold_mediator_2d(config, params, progress):
    model = cold_mediator_grid(params["N_A"], params["dx"], params["dy"], params["dz"], params["sigma"])
    return _ensemble_curve(config, _gaussian_ensemble(config, model, params), progress)


@scenario("collective_1d", "two chains with a common Gaussian shift each", N_A=4, N_B=4, dx=1.0, dy=1.0, sigma=3.0, J=1.0, gamma=1, order=0)
def run_collective_1d(config, params, progress):
    model = collective_chains(params["N_A"], params["N_B"], params["dx"], params["dy"], params["sigma"])
    return _ensemble_curve(config, _gaussian_ensemble(config, model, params), progress)


@scenario("collective_2d", "two stacked grids with in-plane collective noise", N_A=4, N_B=4, dx=1.0, dy=1.0, dz=1.0, sigma=2.0, J=1.0, gamma=1, order=0)
def run_collective_2d(config, params, progress):
    model = collective_grids(params["N_A"], params["N_B"], params["dx"], params["dy"], params["dz"], params["sigma"])
    return _ensemble_curve(config, _gaussian_ensemble(config, model, params), progress)


@scenario("independent_discrete", "two chains, each qubit jumping by -δy, 0, δy", N_A=2, N_B=2, dx=2.0, dy=4.0, delta_y=1.0, J=1.0, gamma=1)
def run_independent(config, params, progress):
    model = independent_chains(params["N_A"], params["N_B"], params["dx"], params["dy"], params["delta_y"])
    return _ensemble_curve(config, build_ensemble(model, _law(params)), progress)


def _paul_curve(config, trap: TrapPairConfig, params, progress) -> InfidelityCurve:
    truncation = thermal_truncation(trap.modes(), params["T"], params["epsilon"])
    msg.info(f"{len(truncation)} thermal states retain {truncation.retained_mass:.4f} of the mass")
    ensemble = mode_coupling_ensemble(trap, truncation, params["order"])
    check_scale_separation(truncation, ensemble.distribution(trap.a, trap.b).mu_bar)
    return _ensemble_curve(config, ensemble, progress)


_PAUL_DEFAULTS = dict(J=1.0, gamma=3, order=20)


@scenario("paul_single", "one Paul trap split into two modules", K=4, omega=1.0, L=4.78, T=1.3, epsilon=0.07, **_PAUL_DEFAULTS)
def run_paul_single(config, params, progress):
    trap = TrapPairConfig.single_trap(params["K"], params["omega"], params["L"], law=_law(params))
    return _paul_curve(config, trap, params, progress)


@scenario(
    "paul_cold",
    "ion chain A and a single mediator ion in a second trap",
    N_A=2, omega_A=1.0, omega_B=0.01, L=15.97, dy=20.0, T=0.1, epsilon=0.05, **_PAUL_DEFAULTS,
)
def run_paul_cold(config, params, progress):
    trap = TrapPairConfig.cold_mediator(
        params["N_A"], params["omega_A"], params["omega_B"], params["L"], params["dy"], law=_law(params),
    )
    return _paul_curve(config, trap, params, progress)


@scenario(
    "paul_twin",
    "two parallel Paul traps with matched equilibria",
    N_A=2, N_B=2, omega_A=1.0, omega_B=1 / 3, L=8.31, dy=2.0, T=0.2, epsilon=0.01, **_PAUL_DEFAULTS,
)
def run_paul_twin(config, params, progress):
    trap = TrapPairConfig.twin_traps(
        params["N_A"], params["N_B"], params["omega_A"], params["omega_B"], params["L"], params["dy"], law=_law(params),
    )
    return _paul_curve(config, trap, params, progress)


@scenario("lattice_2d", "quantised lattice, trivial encoding, maximally mixed mechanics", N=1, omega=30.0, dx=2.0, dy=2.0, J=5.0, gamma=3)
def run_lattice(config, params, progress):
    lattice = LatticeConfig(params["N"], params["omega"], params["dx"], params["dy"], law=_law(params))
    grid = dt_grid(config)
    fidelities = lattice_curve(lattice, maximally_mixed_state(lattice), grid)
    return _trivial_curve(grid, fidelities, lattice.n_per_module, lattice.n_per_module)


@scenario("echo_check", "spin echo cancels background fields on random instances", K=4, tau=1.0, instances=ECHO_INSTANCES)
def run_echo_check(config, params, progress):
    rng = np.random.Generator(np.random.Philox(config.seed))
    K = params["K"]
    residuals = []
    for _ in range(params["instances"]):
        hzz = rng.normal(size=(K, K))
        hzz = np.triu(hzz, k=1) + np.triu(hzz, k=1).T
        spec = EchoSpec(tuple(rng.normal(size=K)), params["tau"])
        residuals.append(echo_residual(spec, hzz, K))
    worst = float(max(residuals))
    if worst >= ECHO_TOLERANCE:
        raise NumericError(f"echo residual {worst:.3e} exceeds {ECHO_TOLERANCE}")
    return EchoRecord(worst, residuals)


def run_scenario(config: ScenarioConfig, progress: bool = True) -> Record:
    """Validate and run one scenario, attaching provenance metadata.

    Args:
        config (ScenarioConfig): The run description.
        progress (bool): Show progress bars. Defaults to True.

    Returns:
        CurveRecord | EchoRecord: The result.
    """
    params = validate_parameters(config)
    start = time.perf_counter()
    result = SCENARIOS[config.scenario].runner(config, params, progress)
    record = CurveRecord(result) if isinstance(result, InfidelityCurve) else result
    record.metadata = {
        **config.to_dict(),
        "parameters": params,
        "version": __version__,
        "wall_time": time.perf_counter() - start,
    }
    return record
