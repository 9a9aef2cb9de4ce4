"""Named runs reproducing the published settings.

Each preset is registered in ``hotgate.utils.presets`` and returns the
sections of a run file. Parameters follow the figure captions; Δt ranges
are chosen to cover the plotted curves.
"""
from typing import Any

from wasabi import msg

from hotgate.cli.config import ScenarioConfig, from_dict
from hotgate.errors import ConfigError
from hotgate.utils import presets

DEFAULT_POINTS = 200


def _preset(name: str, scenario: str, parameters: dict, dt_min: float, dt_max: float, **optimizer) -> dict[str, Any]:
    return {
        "run": {"scenario": scenario, "preset": name, "seed": 0},
        "parameters": parameters,
        "grid": {"dt_min": dt_min, "dt_max": dt_max, "points": DEFAULT_POINTS},
        "optimizer": optimizer,
    }


@presets.register("fig2c")
def fig2c() -> dict[str, Any]:
    """1D chain with a cold mediator; J = 1, γ = 1, Δx = Δy = 1, σ = 3, N_A = 4."""
    params = {"N_A": 4, "dx": 1.0, "dy": 1.0, "sigma": 3.0, "J": 1.0, "gamma": 1}
    return _preset("fig2c", "cold_mediator_1d", params, 0.01, 10.0)


@presets.register("fig2f")
def fig2f() -> dict[str, Any]:
    """Two 1D chains with collective noise; J = 1, γ = 1, Δx = Δy = 1, σ = 3, N_A = N_B = 4."""
    params = {"N_A": 4, "N_B": 4, "dx": 1.0, "dy": 1.0, "sigma": 3.0, "J": 1.0, "gamma": 1}
    return _preset("fig2f", "collective_1d", params, 0.01, 10.0)


@presets.register("fig4b")
def fig4b() -> dict[str, Any]:
    """Independent discrete jumps; Δx = 2, Δy = 4, δy = 1, p = (1/4, 1/2, 1/4), N_A = N_B = 2."""
    params = {"N_A": 2, "N_B": 2, "dx": 2.0, "dy": 4.0, "delta_y": 1.0, "J": 1.0, "gamma": 1}
    return _preset("fig4b", "independent_discrete", params, 0.01, 10.0)


@presets.register("fig6a")
def fig6a() -> dict[str, Any]:
    """Single Paul trap split in two; ω = 1, L = 4.78, T = 1.3, ε = 0.07, γ = 3, K = 4."""
    params = {"K": 4, "omega": 1.0, "L": 4.78, "T": 1.3, "epsilon": 0.07, "J": 1.0, "gamma": 3}
    return _preset("fig6a", "paul_single", params, 1.0, 1e4)


@presets.register("fig6b")
def fig6b() -> dict[str, Any]:
    """Cold mediator ion; ω_A = 100 ω_B = 1, Δy = 20, L = 15.97, T = 0.1, ε = 0.05, N_A = 2."""
    params = {
        "N_A": 2,
        "omega_A": 1.0,
        "omega_B": 0.01,
        "L": 15.97,
        "dy": 20.0,
        "T": 0.1,
        "epsilon": 0.05,
        "J": 1.0,
        "gamma": 3,
    }
    return _preset("fig6b", "paul_cold", params, 10.0, 1e5)


@presets.register("fig6c")
def fig6c() -> dict[str, Any]:
    """Twin traps; ω_A = 3 ω_B = 1, Δy = 2, L = 8.31, T = 0.2, ε = 0.01, N_A = N_B = 2."""
    params = {
        "N_A": 2,
        "N_B": 2,
        "omega_A": 1.0,
        "omega_B": 1 / 3,
        "L": 8.31,
        "dy": 2.0,
        "T": 0.2,
        "epsilon": 0.01,
        "J": 1.0,
        "gamma": 3,
    }
    return _preset("fig6c", "paul_twin", params, 0.1, 1e3)


@presets.register("fig7")
def fig7() -> dict[str, Any]:
    """Quantised lattice; ω = 30, Δx = Δy = 2, γ = 3, J = 5, N = 1, ρ_m maximally mixed."""
    params = {"N": 1, "omega": 30.0, "dx": 2.0, "dy": 2.0, "J": 5.0, "gamma": 3}
    return _preset("fig7", "lattice_2d", params, 0.01, 100.0)


@presets.register("appC")
def appC() -> dict[str, Any]:
    """3x3 grid with a mediator above; γ = 1, Δx = Δy = Δz = 1, σ = 1, N_B = 1."""
    params = {"N_A": 9, "dx": 1.0, "dy": 1.0, "dz": 1.0, "sigma": 1.0, "J": 1.0, "gamma": 1}
    return _preset("appC", "cold_mediator_2d", params, 0.01, 10.0)


@presets.register("appD")
def appD() -> dict[str, Any]:
    """Stacked grids with collective noise; γ = 1, Δx = Δz = 1, Δy = 1, σ = 2."""
    params = {"N_A": 4, "N_B": 4, "dx": 1.0, "dy": 1.0, "dz": 1.0, "sigma": 2.0, "J": 1.0, "gamma": 1}
    return _preset("appD", "collective_2d", params, 0.01, 10.0)


@presets.register("echo_check")
def echo_check() -> dict[str, Any]:
    """Spin echo on 20 random K = 4 instances; residual must stay below 1e-10."""
    return {
        "run": {"scenario": "echo_check", "preset": "echo_check", "seed": 0},
        "parameters": {"K": 4, "tau": 1.0, "instances": 20},
        "grid": {},
        "optimizer": {},
    }


def load_preset(name: str) -> ScenarioConfig:
    """Resolve a preset by name."""
    registered = presets.get_all()
    if name not in registered:
        raise ConfigError(f"unknown preset {name!r}, expected one of {sorted(registered)}", key="preset")
    return from_dict(registered[name]())


def list_presets() -> str:
    """Table of preset names with their descriptions; also printed."""
    rows = [(name, func.__doc__.strip()) for name, func in sorted(presets.get_all().items())]
    msg.table(rows, header=("preset", "description"), divider=True)
    return "\n".join(f"{name}: {description}" for name, description in rows)
