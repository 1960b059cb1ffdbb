"""Experiment runners reproducing the gate-dynamics figures."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable

import numpy as np

from .. import __version__, metrics, model, qalg
from ..dynamics import (
    IntegratorConfig,
    JumpOperators,
    propagate_basis,
    propagate_lindblad,
    propagate_pure,
)
from ..metrics import GateTarget
from ..model import PulseShape, SystemParams
from .results import ResultTable
from .scenarios import ConfigError, Experiment, Regime, Scenario


def _config(s: Scenario, p: SystemParams) -> IntegratorConfig:
    return IntegratorConfig.for_params(p, s.steps_per_period, s.snapshots)


def _provenance(s: Scenario, cfg: IntegratorConfig) -> dict:
    return {"hash": s.digest(), "step": f"{cfg.step:.6g}", "nodes": s.nodes, "version": __version__}


def _require(s: Scenario, experiment: Experiment, regime: Regime | None = None):
    if s.experiment is not experiment:
        raise ConfigError(f"scenario {s.name!r} is a {s.experiment.value}, not {experiment.value}")
    if regime is not None and s.regime is not regime:
        raise ConfigError(f"{experiment.value} needs the {regime.value} regime")


def _pool_map(fn: Callable, items: Iterable, threads: int | None) -> list:
    items = list(items)
    threads = threads or os.cpu_count() or 1
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def run_rabi_compare(s: Scenario) -> ResultTable:
    """|11> and |rr> populations over one Rabi cycle, full vs effective model."""
    _require(s, Experiment.RABI_COMPARE, Regime.RAB)
    p = s.params
    if p.pulse_shape is not PulseShape.CONSTANT:
        raise ConfigError("RabiCompare needs a ConstantAmplitude pulse")
    cfg = _config(s, p)
    i11, irr = qalg.index("11"), qalg.index("rr")
    full = propagate_pure(model.full_hamiltonian(p), qalg.ket("11"), cfg)
    heff = model.effective_hamiltonian(p)
    start = np.array([1.0, 0.0], dtype=complex)
    eff = propagate_pure(heff, start, cfg)
    half = propagate_pure(heff, start, cfg, T=p.gate_duration / 2)

    p11, prr = full.population(i11), full.population(irr)
    e11, err = eff.population(0), eff.population(1)
    rows = np.column_stack([full.times, p11, prr, e11, err])
    summary = {
        "peak_Prr_full": float(prr.max()),
        "max_abs_dPrr": float(np.abs(prr - err).max()),
        "max_abs_dP11": float(np.abs(p11 - e11).max()),
        "Prr_eff_half_cycle": float(half.population(1)[-1]),
        "T0_us": p.gate_duration,
    }
    return ResultTable(("t", "P11_full", "Prr_full", "P11_eff", "Prr_eff"),
                       ("us", "1", "1", "1", "1"), rows, _provenance(s, cfg), summary)


def run_fidelity_curve(s: Scenario, target: GateTarget | None = None) -> ResultTable:
    """Average (product-input) and |Psi'> fidelity of the CZ gate over time."""
    _require(s, Experiment.FIDELITY_CURVE)
    target = target or GateTarget.cz()
    p = s.params
    cfg = _config(s, p)
    basis = propagate_basis(model.full_hamiltonian(p), cfg)
    f_avg = metrics.average_fidelity(basis.overlaps, target, s.nodes)
    psi_t = basis.states @ metrics.PSI_PRIME_AMPLITUDES
    f_ref = metrics.state_fidelity_pure(psi_t, metrics.reference_state(), target)
    leak = 1.0 - np.sum(np.abs(basis.overlaps) ** 2, axis=1).min(axis=1)
    rows = np.column_stack([basis.times, f_avg, f_ref, leak])
    summary = {
        "F_avg_final": float(f_avg[-1]),
        "F_psi_prime_final": float(f_ref[-1]),
        "F_psi_prime_initial": float(f_ref[0]),
        "gate_duration_us": p.gate_duration,
    }
    return ResultTable(("t", "F_avg", "F_psi_prime", "max_leakage"), ("us", "1", "1", "1"),
                       rows, _provenance(s, cfg), summary)


#: Value written in place of an undefined phase.
PHASE_SENTINEL = float("nan")


def run_phase_curve(s: Scenario) -> ResultTable:
    """Unwrapped phase of |11> under the full model vs the Stark-shift integral."""
    _require(s, Experiment.PHASE_CURVE, Regime.BROKEN)
    p = s.params
    cfg = _config(s, p)
    traj = propagate_pure(model.full_hamiltonian(p), qalg.ket("11"), cfg)
    phase = metrics.phase_of_11(traj.states[:, qalg.index("11")])
    pred = model.accumulated_phase(traj.times, p)
    defined = np.isfinite(phase)
    dev = np.abs(phase - pred)[defined]
    rows = np.column_stack([traj.times, np.where(defined, phase, PHASE_SENTINEL), pred,
                            defined.astype(float)])
    summary = {
        "phase_final_rad": float(phase[-1]),
        "phase_prediction_final_rad": float(pred[-1]),
        "max_abs_deviation_rad": float(dev.max()) if dev.size else math.nan,
        "undefined_points": int((~defined).sum()),
    }
    return ResultTable(("t", "phase_full", "phase_effective_prediction", "phase_defined"),
                       ("us", "rad", "rad", "1"), rows, _provenance(s, cfg), summary)


def window_width(x: np.ndarray, f: np.ndarray, threshold: float) -> tuple[float, bool]:
    """Width of the contiguous region around max(f) where f > threshold.

    Crossings are located by linear interpolation. The flag is True when the
    region reaches the end of the grid, so the width is only a lower bound.
    """
    x, f = np.asarray(x, dtype=float), np.asarray(f, dtype=float)
    k = int(np.argmax(f))
    if f[k] <= threshold:
        return 0.0, False
    open_ = False

    def crossing(i_in, i_out):
        t = (f[i_in] - threshold) / (f[i_in] - f[i_out])
        return x[i_in] + t * (x[i_out] - x[i_in])

    i = k
    while i > 0 and f[i - 1] > threshold:
        i -= 1
    if i == 0:
        lo, open_ = x[0], True
    else:
        lo = crossing(i, i - 1)
    j = k
    while j < len(f) - 1 and f[j + 1] > threshold:
        j += 1
    if j == len(f) - 1:
        hi, open_ = x[-1], True
    else:
        hi = crossing(j, j + 1)
    return float(hi - lo), open_


def _final_fidelity_at(p: SystemParams, s: Scenario) -> float:
    cfg = _config(s, p)
    traj = propagate_pure(model.full_hamiltonian(p), metrics.reference_state(), cfg)
    return float(metrics.state_fidelity_pure(traj.final, metrics.reference_state(), GateTarget.cz()))


def run_distance_sweep(s: Scenario, threads: int | None = None) -> ResultTable:
    """Final |Psi'> CZ fidelity with V_vdw = C6/d^6 recomputed at each distance."""
    _require(s, Experiment.DISTANCE_SWEEP)
    base = s.params.replace(vdw_override=None)
    ds = s.sweep.values()
    points = [base.replace(distance=float(d)) for d in ds]
    fid = np.array(_pool_map(lambda q: _final_fidelity_at(q, s), points, threads or s.threads))
    summary = {
        "nominal_distance_um": base.distance,
        "F_nominal": float(fid[np.argmin(np.abs(ds - base.distance))]),
    }
    for thr in (0.99, 0.999):
        width, open_ = window_width(ds, fid, thr)
        summary[f"window_nm_F>{thr:g}"] = width * 1e3
        summary[f"window_open_F>{thr:g}"] = open_
    return ResultTable(("d", "F_final"), ("um", "1"), np.column_stack([ds, fid]),
                       _provenance(s, _config(s, base)), summary)


def _decayed_fidelity(p: SystemParams, s: Scenario) -> float:
    cfg = _config(s, p)
    rho0 = qalg.density(metrics.reference_state())
    traj = propagate_lindblad(model.full_hamiltonian(p), rho0, JumpOperators.for_params(p), cfg)
    return float(metrics.state_fidelity_mixed(traj.final, metrics.reference_state(), GateTarget.cz()))


def run_lifetime_sweep(s: Scenario, threads: int | None = None) -> ResultTable:
    """Final |Psi'> CZ fidelity of both gates under Rydberg decay, vs lifetime."""
    _require(s, Experiment.LIFETIME_SWEEP)
    taus = s.sweep.values()
    if np.any(taus <= 0):
        raise ConfigError("lifetimes must be positive")
    jobs = [(regime, float(tau)) for tau in taus for regime in (Regime.RAB, Regime.BROKEN)]

    def run(job):
        regime, tau = job
        return _decayed_fidelity(s.params_for(regime).replace(tau=tau), s)

    fid = np.array(_pool_map(run, jobs, threads or s.threads)).reshape(len(taus), 2)
    summary = {}
    for tau, (f_rab, f_br) in zip(taus, fid):
        summary[f"F_RAB(tau={tau:g}us)"] = float(f_rab)
        summary[f"F_Broken(tau={tau:g}us)"] = float(f_br)
    cfg = _config(s, s.params_for(Regime.BROKEN))
    return ResultTable(("tau", "F_final_RAB", "F_final_Broken"), ("us", "1", "1"),
                       np.column_stack([taus, fid]), _provenance(s, cfg), summary)


RUNNERS = {
    Experiment.RABI_COMPARE: run_rabi_compare,
    Experiment.FIDELITY_CURVE: run_fidelity_curve,
    Experiment.PHASE_CURVE: run_phase_curve,
    Experiment.DISTANCE_SWEEP: run_distance_sweep,
    Experiment.LIFETIME_SWEEP: run_lifetime_sweep,
}


def run_scenario(s: Scenario, threads: int | None = None) -> ResultTable:
    fn = RUNNERS[s.experiment]
    if s.experiment.is_sweep:
        return fn(s, threads=threads)
    return fn(s)
