"""Run configuration: INI-style files parsed with confection, plus overrides."""
import re
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

import srsly
from confection import Config

from hotgate.errors import ConfigError

SECTIONS = ("run", "parameters", "grid", "optimizer")
RUN_KEYS = ("scenario", "preset", "seed", "out")
GRID_KEYS = ("dt_min", "dt_max", "points", "values")
OPTIMIZER_KEYS = ("restarts", "tolerance", "max_iters", "warm_start", "xatol", "optimize")

_SECTION_RE = re.compile(r"^\s*\[([^\]]+)\]\s*$")
_KEY_RE = re.compile(r"^\s*([A-Za-z_][\w.]*)\s*=")


@dataclass
class ScenarioConfig:
    """One run: a scenario, its parameters, the Δt grid and optimiser settings.

    ``lines`` maps (section, key) to the line of the source file, so that
    validation errors can point at the offending entry.
    """

    scenario: str
    parameters: dict[str, Any] = field(default_factory=dict)
    grid: dict[str, Any] = field(default_factory=dict)
    optimizer: dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    out: Optional[str] = None
    preset: Optional[str] = None
    lines: dict[tuple[str, str], int] = field(default_factory=dict)

    def line_of(self, key: str, section: str = "parameters") -> Optional[int]:
        return self.lines.get((section, key))

    def error(self, message: str, key: str, section: str = "parameters") -> ConfigError:
        return ConfigError(message, key=key, line=self.line_of(key, section))

    def to_dict(self) -> dict[str, Any]:
        """Sections as plain dicts; enough to reproduce the run."""
        run = {"scenario": self.scenario, "seed": self.seed}
        if self.preset is not None:
            run["preset"] = self.preset
        return {
            "run": run,
            "parameters": dict(self.parameters),
            "grid": dict(self.grid),
            "optimizer": dict(self.optimizer),
        }


def key_lines(text: str) -> dict[tuple[str, str], int]:
    """Line numbers (1-based) of every key, by section."""
    lines = {}
    section = ""
    for number, line in enumerate(text.splitlines(), start=1):
        if match := _SECTION_RE.match(line):
            section = match.group(1).strip()
        elif match := _KEY_RE.match(line):
            lines[(section, match.group(1))] = number
    return lines


def from_dict(data: Mapping[str, Any], lines: Optional[dict] = None) -> ScenarioConfig:
    """Build a ScenarioConfig from nested section dicts."""
    lines = lines or {}
    unknown = [name for name in data if name not in SECTIONS]
    if unknown:
        raise ConfigError(f"unknown section [{unknown[0]}], expected one of {SECTIONS}", key=unknown[0])
    run = dict(data.get("run", {}))
    for key in run:
        if key not in RUN_KEYS:
            raise ConfigError(f"unknown key {key!r} in [run]", key=key, line=lines.get(("run", key)))
    if "scenario" not in run:
        raise ConfigError("[run] must name a scenario", key="scenario")
    seed = run.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError(f"seed must be a non-negative integer, got {seed!r}", key="seed", line=lines.get(("run", "seed")))
    for section, allowed in (("grid", GRID_KEYS), ("optimizer", OPTIMIZER_KEYS)):
        for key in data.get(section, {}):
            if key not in allowed:
                raise ConfigError(f"unknown key {key!r} in [{section}]", key=key, line=lines.get((section, key)))
    return ScenarioConfig(
        scenario=str(run["scenario"]),
        parameters=dict(data.get("parameters", {})),
        grid=dict(data.get("grid", {})),
        optimizer=dict(data.get("optimizer", {})),
        seed=seed,
        out=None if run.get("out") is None else str(run["out"]),
        preset=run.get("preset"),
        lines=lines,
    )


def parse_config(text: str) -> ScenarioConfig:
    """Parse the text of a run file."""
    try:
        data = Config().from_str(text, interpolate=False)
    except Exception as e:  # confection surfaces configparser and JSON errors unchanged
        raise ConfigError(f"could not parse configuration: {e}") from e
    return from_dict(data, key_lines(text))


def load_config(path: Union[str, Path]) -> ScenarioConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"configuration file {path} does not exist", key="config")
    return parse_config(path.read_text(encoding="utf-8"))


def parse_value(raw: str) -> Any:
    """JSON scalar or list if possible, else the raw string."""
    try:
        return srsly.json_loads(raw)
    except ValueError:
        return raw


def apply_overrides(config: ScenarioConfig, overrides: Sequence[str]) -> ScenarioConfig:
    """Apply ``key=value`` or ``section.key=value`` overrides in place.

    Bare keys go to the section that owns them; anything unknown is a
    scenario parameter.
    """
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value", key=item)
        key, raw = (part.strip() for part in item.split("=", 1))
        value = parse_value(raw)
        section, _, name = key.rpartition(".")
        if not section:
            if name in RUN_KEYS:
                section = "run"
            elif name in GRID_KEYS:
                section = "grid"
            elif name in OPTIMIZER_KEYS:
                section = "optimizer"
            else:
                section = "parameters"
        if section == "run":
            if name not in RUN_KEYS:
                raise ConfigError(f"unknown key {name!r} in [run]", key=name)
            setattr(config, name, value)
        elif section in ("parameters", "grid", "optimizer"):
            getattr(config, section)[name] = value
        else:
            raise ConfigError(f"unknown section {section!r} in override {item!r}", key=key)
        config.lines.pop((section, name), None)
    return config
