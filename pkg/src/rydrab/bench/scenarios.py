"""Scenario definitions and their INI-style configuration files.

A scenario file has a single ``[scenario]`` section. Frequencies are given
as linear frequencies in MHz and are multiplied by 2 pi on load, so
``omega0_mhz_times_2pi = 10`` means Omega0 = 2 pi x 10 MHz.
"""

from __future__ import annotations

import configparser
import enum
import hashlib
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import model
from ..model import PulseShape, SystemParams, mhz


class ConfigError(ValueError):
    """Malformed or inconsistent scenario configuration."""


class Regime(enum.Enum):
    RAB = "RAB"
    BROKEN = "Broken"


class Experiment(enum.Enum):
    RABI_COMPARE = "RabiCompare"
    FIDELITY_CURVE = "FidelityCurve"
    PHASE_CURVE = "PhaseCurve"
    DISTANCE_SWEEP = "DistanceSweep"
    LIFETIME_SWEEP = "LifetimeSweep"

    @property
    def is_sweep(self) -> bool:
        return self in (Experiment.DISTANCE_SWEEP, Experiment.LIFETIME_SWEEP)


@dataclass(frozen=True)
class SweepSpec:
    """Sweep grid: ``count`` points from ``start`` to ``stop``, plus ``extra``."""

    start: float | None = None
    stop: float | None = None
    count: int = 0
    extra: tuple[float, ...] = ()

    def __post_init__(self):
        if self.count and self.count < 2:
            raise ConfigError("sweep_count must be at least 2")
        if self.count and (self.start is None or self.stop is None):
            raise ConfigError("sweep_count needs sweep_start and sweep_stop")
        if not self.count and not self.extra:
            raise ConfigError("empty sweep")

    def values(self) -> np.ndarray:
        grid = np.linspace(self.start, self.stop, self.count) if self.count else np.array([])
        return np.unique(np.concatenate([grid, np.asarray(self.extra, dtype=float)]))


DEFAULT_LIFETIMES = (10.0, 20.0, 40.0, 60.0, 80.0, 100.0, 150.0, 200.0)
DEFAULT_DRIVE = {"omega0": 10.0, "mod_freq": 35.0, "delta": 8.0, "c6": 56.2e6, "tau": 100.0}


@dataclass(frozen=True)
class Scenario:
    name: str
    regime: Regime
    experiment: Experiment
    omega0: float = mhz(DEFAULT_DRIVE["omega0"])
    mod_freq: float = mhz(DEFAULT_DRIVE["mod_freq"])
    delta: float = mhz(DEFAULT_DRIVE["delta"])
    c6: float = mhz(DEFAULT_DRIVE["c6"])
    tau: float = DEFAULT_DRIVE["tau"]
    distance: float | None = None
    vdw_override: float | None = None
    gate_duration: float | None = None
    pulse_shape: PulseShape | None = None
    sweep: SweepSpec | None = None
    output_path: str = "out.csv"
    steps_per_period: int = 400
    snapshots: int = 2000
    nodes: int = 16
    threads: int | None = None
    source: str = field(default="", compare=False)

    def __post_init__(self):
        if self.experiment.is_sweep != (self.sweep is not None):
            raise ConfigError(f"experiment {self.experiment.value} "
                              f"{'requires' if self.experiment.is_sweep else 'does not take'} a sweep")
        if self.steps_per_period < 1 or self.snapshots < 2 or self.nodes < 9:
            raise ConfigError("steps_per_period >= 1, snapshots >= 2 and quadrature_nodes >= 9 required")

    def params_for(self, regime: Regime | None = None) -> SystemParams:
        """System parameters for ``regime`` (default: the scenario's own).

        Distance, gate-duration, shape and interaction overrides only apply to
        the scenario's own regime; otherwise nominal values are derived.
        """
        own = regime is None or regime is self.regime
        regime = self.regime if regime is None else regime
        try:
            if regime is Regime.RAB:
                p = SystemParams.rab(self.omega0, self.mod_freq, self.c6, self.tau)
            else:
                p = SystemParams.broken(self.omega0, self.mod_freq, self.delta, self.c6, self.tau)
            if own:
                changes = {}
                if self.distance is not None:
                    changes["distance"] = self.distance
                if self.vdw_override is not None:
                    changes["vdw_override"] = self.vdw_override
                if self.pulse_shape is not None:
                    changes["pulse_shape"] = self.pulse_shape
                if self.gate_duration is not None:
                    changes["gate_duration"] = self.gate_duration
                if changes:
                    p = p.replace(**changes)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return p

    @property
    def params(self) -> SystemParams:
        return self.params_for()

    def digest(self) -> str:
        return hashlib.sha256(emit_config(self, comments=False).encode()).hexdigest()[:12]


# ---------------------------------------------------------------------------
# file format

_FREQ_KEYS = {
    "omega0_mhz_times_2pi": "omega0",
    "mod_freq_mhz_times_2pi": "mod_freq",
    "delta_mhz_times_2pi": "delta",
    "c6_mhz_um6_times_2pi": "c6",
    "vdw_override_mhz_times_2pi": "vdw_override",
}
_FLOAT_KEYS = {"tau_us": "tau", "distance_um": "distance", "gate_duration_us": "gate_duration"}
_INT_KEYS = {"steps_per_period": "steps_per_period", "snapshots": "snapshots",
             "quadrature_nodes": "nodes", "threads": "threads"}
_SWEEP_KEYS = ("sweep_start", "sweep_stop", "sweep_count", "sweep_values")
KNOWN_KEYS = frozenset(
    {"name", "regime", "experiment", "pulse_shape", "output_path"}
    | set(_FREQ_KEYS) | set(_FLOAT_KEYS) | set(_INT_KEYS) | set(_SWEEP_KEYS)
)


def _number(key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{key}: {raw!r} is not a number") from None


def _enum(cls, key: str, raw: str):
    try:
        return cls(raw)
    except ValueError:
        options = ", ".join(m.value for m in cls)
        raise ConfigError(f"{key}: {raw!r} is not one of {options}") from None


def parse_scenario(text: str, source: str = "<string>") -> Scenario:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    if cp.sections() != ["scenario"]:
        raise ConfigError(f"{source}: expected exactly one [scenario] section, found {cp.sections()}")
    sec = cp["scenario"]
    unknown = sorted(set(sec) - KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"{source}: unknown scenario field {unknown[0]!r}")
    for key in ("name", "regime", "experiment"):
        if key not in sec:
            raise ConfigError(f"{source}: missing required field {key!r}")

    kw: dict = {
        "name": sec["name"],
        "regime": _enum(Regime, "regime", sec["regime"]),
        "experiment": _enum(Experiment, "experiment", sec["experiment"]),
        "source": source,
    }
    for key, attr in _FREQ_KEYS.items():
        if key in sec:
            kw[attr] = mhz(_number(key, sec[key]))
    for key, attr in _FLOAT_KEYS.items():
        if key in sec:
            kw[attr] = _number(key, sec[key])
    for key, attr in _INT_KEYS.items():
        if key in sec:
            val = _number(key, sec[key])
            if val != int(val):
                raise ConfigError(f"{key}: expected an integer")
            kw[attr] = int(val)
    if "pulse_shape" in sec:
        kw["pulse_shape"] = _enum(PulseShape, "pulse_shape", sec["pulse_shape"])
    if "output_path" in sec:
        kw["output_path"] = sec["output_path"]
    if any(k in sec for k in _SWEEP_KEYS):
        extra = ()
        if sec.get("sweep_values", "").strip():
            extra = tuple(_number("sweep_values", v) for v in sec["sweep_values"].split(","))
        count = int(_number("sweep_count", sec["sweep_count"])) if "sweep_count" in sec else 0
        start = _number("sweep_start", sec["sweep_start"]) if "sweep_start" in sec else None
        stop = _number("sweep_stop", sec["sweep_stop"]) if "sweep_stop" in sec else None
        kw["sweep"] = SweepSpec(start, stop, count, extra)
    scenario = Scenario(**kw)
    scenario.params_for()  # surfaces SystemParams errors as ConfigError
    return scenario


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file {path}: {exc}") from exc
    return parse_scenario(text, str(path))


def _fmt(x: float) -> str:
    return repr(float(x))


def emit_config(s: Scenario, comments: bool = True) -> str:
    """Render a scenario as a config file that parses back to ``s``."""
    lines = ["[scenario]"]

    def put(key, value, note=None):
        if comments and note:
            lines.append(f"# {note}")
        lines.append(f"{key} = {value}")

    put("name", s.name)
    put("regime", s.regime.value)
    put("experiment", s.experiment.value)
    put("omega0_mhz_times_2pi", _fmt(s.omega0 / model.TWO_PI),
        "Omega0 (constant drive) or Omega_m (cosine envelope peak)")
    put("mod_freq_mhz_times_2pi", _fmt(s.mod_freq / model.TWO_PI), "modulation frequency omega")
    put("delta_mhz_times_2pi", _fmt(s.delta / model.TWO_PI), "detuning delta = V_vdw - 2 omega (Broken regime)")
    put("c6_mhz_um6_times_2pi", _fmt(s.c6 / model.TWO_PI), "van der Waals C6; 56.2e6 MHz um^6 = 56.2 THz um^6")
    if not math.isinf(s.tau):
        put("tau_us", _fmt(s.tau), "Rydberg lifetime")
    if s.distance is not None:
        note = {
            Regime.RAB: "(C6 / (2 omega - Omega0^2 / 6 omega))^(1/6)",
            Regime.BROKEN: "(C6 / (2 omega + delta))^(1/6)",
        }[s.regime]
        put("distance_um", _fmt(s.distance), f"nominal distance {note}")
    if s.vdw_override is not None:
        put("vdw_override_mhz_times_2pi", _fmt(s.vdw_override / model.TWO_PI))
    if s.pulse_shape is not None:
        put("pulse_shape", s.pulse_shape.value)
    if s.gate_duration is not None:
        put("gate_duration_us", _fmt(s.gate_duration))
    if s.sweep is not None:
        unit = "um" if s.experiment is Experiment.DISTANCE_SWEEP else "us"
        if s.sweep.count:
            put("sweep_start", _fmt(s.sweep.start), f"sweep grid in {unit}")
            put("sweep_stop", _fmt(s.sweep.stop))
            put("sweep_count", s.sweep.count)
        if s.sweep.extra:
            put("sweep_values", ", ".join(_fmt(v) for v in s.sweep.extra),
                None if s.sweep.count else f"sweep points in {unit}")
    put("output_path", s.output_path)
    put("steps_per_period", s.steps_per_period, "RK4 steps per fastest period")
    put("snapshots", s.snapshots)
    put("quadrature_nodes", s.nodes)
    if s.threads is not None:
        put("threads", s.threads)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# built-in scenarios reproducing each figure

def _nominal(regime: Regime) -> float:
    w, om, d, c6 = (mhz(DEFAULT_DRIVE[k]) for k in ("mod_freq", "omega0", "delta", "c6"))
    if regime is Regime.RAB:
        return (c6 / model.rab_vdw(om, w)) ** (1 / 6)
    return (c6 / model.broken_vdw(w, d)) ** (1 / 6)


def _distance_sweep(regime: Regime, half_width: float, count: int = 201) -> SweepSpec:
    d0 = _nominal(regime)
    return SweepSpec(d0 - half_width, d0 + half_width, count)


def _builtins() -> dict[str, tuple[str, Scenario]]:
    rab_d, br_d = _nominal(Regime.RAB), _nominal(Regime.BROKEN)
    mk = Scenario
    E, R = Experiment, Regime
    return {
        "fig2a": ("Rabi oscillation |11> <-> |rr>, full vs effective model",
                  mk("fig2a", R.RAB, E.RABI_COMPARE, distance=rab_d, output_path="fig2a.csv")),
        "fig2b": ("RAB CZ gate: average and |Psi'> fidelity over one Rabi cycle",
                  mk("fig2b", R.RAB, E.FIDELITY_CURVE, distance=rab_d, output_path="fig2b.csv")),
        "fig2c": ("Broken-RAB gate: phase of |11> vs Stark-shift prediction",
                  mk("fig2c", R.BROKEN, E.PHASE_CURVE, distance=br_d, output_path="fig2c.csv")),
        "fig2d": ("Broken-RAB CZ gate: average and |Psi'> fidelity",
                  mk("fig2d", R.BROKEN, E.FIDELITY_CURVE, distance=br_d, output_path="fig2d.csv")),
        "fig3a": ("RAB CZ fidelity vs interatomic distance (+-5 nm)",
                  mk("fig3a", R.RAB, E.DISTANCE_SWEEP, distance=rab_d,
                     sweep=_distance_sweep(R.RAB, 0.005), output_path="fig3a.csv")),
        "fig3b": ("Broken-RAB CZ fidelity vs interatomic distance (+-50 nm)",
                  mk("fig3b", R.BROKEN, E.DISTANCE_SWEEP, distance=br_d,
                     sweep=_distance_sweep(R.BROKEN, 0.05), output_path="fig3b.csv")),
        "fig4": ("Final CZ fidelity vs Rydberg lifetime, both gates",
                 mk("fig4", R.BROKEN, E.LIFETIME_SWEEP,
                    sweep=SweepSpec(extra=DEFAULT_LIFETIMES), output_path="fig4.csv")),
    }


BUILTIN = _builtins()


def builtin(name: str) -> Scenario:
    try:
        return BUILTIN[name][1]
    except KeyError:
        raise ConfigError(f"no built-in scenario {name!r}; choose from {', '.join(BUILTIN)}") from None
