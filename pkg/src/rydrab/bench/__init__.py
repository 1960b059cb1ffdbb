"""Figure-reproduction scenarios, sweeps and CSV output."""

from .results import ResultTable, read_csv
from .runners import (
    run_distance_sweep,
    run_fidelity_curve,
    run_lifetime_sweep,
    run_phase_curve,
    run_rabi_compare,
    run_scenario,
    window_width,
)
from .scenarios import (
    BUILTIN,
    ConfigError,
    Experiment,
    Regime,
    Scenario,
    SweepSpec,
    builtin,
    emit_config,
    load_scenario,
    parse_scenario,
)

__all__ = [
    "BUILTIN",
    "ConfigError",
    "Experiment",
    "Regime",
    "ResultTable",
    "Scenario",
    "SweepSpec",
    "builtin",
    "emit_config",
    "load_scenario",
    "parse_scenario",
    "read_csv",
    "run_distance_sweep",
    "run_fidelity_curve",
    "run_lifetime_sweep",
    "run_phase_curve",
    "run_rabi_compare",
    "run_scenario",
    "window_width",
]
