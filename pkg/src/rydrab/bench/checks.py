"""Fast invariant and oracle checks behind ``rydrab check``."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np
from scipy import integrate

from .. import metrics, model, qalg
from ..dynamics import (
    IntegratorConfig,
    JumpOperators,
    propagate_lindblad,
    propagate_pure,
    single_atom_closed_form,
    single_atom_hamiltonian,
)
from ..model import SystemParams


def single_atom() -> float:
    p = SystemParams.rab()
    cfg = IntegratorConfig.for_params(p)
    traj = propagate_pure(single_atom_hamiltonian(p), qalg.ket("1"), cfg)
    return float(np.abs(traj.states - single_atom_closed_form(traj.times, p)).max())


def effective_rabi() -> float:
    p = SystemParams.rab()
    traj = propagate_pure(model.effective_hamiltonian(p), np.array([1, 0], dtype=complex),
                          IntegratorConfig.for_params(p))
    omega = model.effective_rabi(p.omega0_max, p.mod_freq)
    return float(np.abs(traj.population(1) - np.sin(omega * traj.times / 2) ** 2).max())


def quadrature_nodes() -> float:
    rng = np.random.default_rng(7)
    M = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    M /= np.linalg.norm(M, 2)
    vals = [metrics.average_fidelity(M, metrics.GateTarget.cz(), n) for n in (9, 16, 64)]
    return float(np.ptp(vals))


def closed_system_lindblad() -> float:
    p = SystemParams.rab()
    cfg = IntegratorConfig.for_params(p, snapshots=200)
    H = model.full_hamiltonian(p)
    psi0 = metrics.reference_state()
    pure = propagate_pure(H, psi0, cfg)
    mixed = propagate_lindblad(H, qalg.density(psi0), JumpOperators.for_rate(0.0), cfg)
    pops_pure = np.abs(pure.states) ** 2
    pops_mixed = np.einsum("tii->ti", mixed.states).real
    return float(np.abs(pops_pure - pops_mixed).max())


def gate_duration() -> float:
    p = SystemParams.broken()
    T = model.gate_duration_for_phase(math.pi, p)

    def rate(t):
        return model.effective_rabi(model.pulse_amplitude(t, p), p.mod_freq) ** 2 / (4 * p.delta)

    phi, _ = integrate.quad(rate, 0.0, T, limit=200, epsabs=1e-13, epsrel=1e-13)
    return abs(phi - math.pi)


def jump_sum_rule() -> float:
    gamma = 0.01
    jumps = JumpOperators.for_rate(gamma)
    pr = qalg.outer("r")
    expected = gamma * (qalg.on_atom(pr, 1) + qalg.on_atom(pr, 2))
    return float(np.abs(jumps.rate_operator() - expected).max())


CHECKS: dict[str, tuple[Callable[[], float], float]] = {
    "single-atom RK4 vs closed form": (single_atom, 1e-6),
    "effective Rabi vs sin^2": (effective_rabi, 1e-6),
    "quadrature 9/16/64 nodes": (quadrature_nodes, 1e-12),
    "Lindblad gamma=0 vs pure": (closed_system_lindblad, 1e-7),
    "gate duration vs quadrature phase": (gate_duration, 1e-6),
    "jump-operator sum rule": (jump_sum_rule, 1e-12),
}


def run_checks(echo=print) -> bool:
    ok = True
    for name, (fn, tol) in CHECKS.items():
        err = fn()
        passed = err < tol
        ok &= passed
        echo(f"{'PASS' if passed else 'FAIL'}  {name}: {err:.3e} (tol {tol:g})")
    return ok
