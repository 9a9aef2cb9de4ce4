"""Configuration-driven batch runner."""
from .config import ScenarioConfig, apply_overrides, load_config, parse_config  # noqa
from .exit_codes import EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, exit_on_exception  # noqa
from .presets import list_presets, load_preset  # noqa
from .scenarios import SCENARIOS, CurveRecord, EchoRecord, run_scenario  # noqa
from .writer import write_record  # noqa
