"""Schrodinger and Lindblad propagation with a fixed-step RK4 integrator."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import qalg
from ._rk4 import rk4_block
from .model import (
    PulseShape,
    SystemParams,
    TimeOperator,
    Frame,
    TWO_PI,
    pulse_amplitude,
    vdw_strength,
)

#: Step = fastest period / STEPS_PER_PERIOD.
STEPS_PER_PERIOD = 400
DEFAULT_SNAPSHOTS = 2000

#: Bound on RK4 steps per compiled call, limiting coefficient-table memory.
MAX_BLOCK_STEPS = 1 << 15

NORM_FAIL = 1e-6
POSITIVITY_FAIL = 1e-6


class IntegratorError(RuntimeError):
    """Norm, trace or positivity drift beyond the failure threshold."""


@dataclass(frozen=True)
class IntegratorConfig:
    """RK4 settings. ``step`` is an upper bound; the actual step divides the
    run evenly into ``snapshots - 1`` strides."""

    step: float
    snapshots: int = DEFAULT_SNAPSHOTS
    method: str = "rk4"

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("step must be positive")
        if self.snapshots < 2:
            raise ValueError("need at least two snapshots")
        if self.method != "rk4":
            raise ValueError(f"unsupported method {self.method!r}")

    @classmethod
    def for_params(cls, p: SystemParams, steps_per_period: int = STEPS_PER_PERIOD,
                   snapshots: int = DEFAULT_SNAPSHOTS) -> "IntegratorConfig":
        """Resolve the fastest of the modulation and interaction periods."""
        periods = [TWO_PI / p.mod_freq]
        v = abs(vdw_strength(p))
        if v > 0:
            periods.append(TWO_PI / v)
        return cls(min(periods) / steps_per_period, snapshots)

    def grid(self, duration: float) -> tuple[int, int]:
        """Return ``(n_steps, stride)`` for a run of the given duration."""
        strides = self.snapshots - 1
        stride = max(1, math.ceil(duration / self.step / strides))
        return stride * strides, stride


@dataclass
class Trajectory:
    """Snapshot series of a propagation.

    ``states`` has shape ``(n, dim)`` for a ket, ``(n, dim, k)`` for a batch of
    kets (one per column) and ``(n, dim, dim)`` for density matrices; see
    ``kind``.
    """

    times: np.ndarray
    states: np.ndarray
    kind: str
    step: float
    observables: dict[str, np.ndarray] = field(default_factory=dict)

    def population(self, i: int) -> np.ndarray:
        if self.kind == "density":
            return self.states[:, i, i].real
        if self.kind == "ket":
            return np.abs(self.states[:, i]) ** 2
        raise ValueError("population() is defined for single kets and densities")

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    @property
    def overlaps(self) -> np.ndarray:
        """Computational block M_ab(t) = <a|psi_b(t)> of a basis run."""
        if self.kind != "basis":
            raise ValueError("overlaps are only defined for propagate_basis output")
        return self.states[:, qalg.COMPUTATIONAL, :]


def _sparse(generators: np.ndarray):
    term, rows, cols = np.nonzero(generators)
    vals = generators[term, rows, cols].astype(np.complex128)
    return rows.astype(np.int64), cols.astype(np.int64), vals, term.astype(np.int64)


def _integrate(coeff_fn, generators, y0, duration, cfg, herm_dim=0):
    n_steps, stride = cfg.grid(duration)
    h = duration / n_steps
    rows, cols, vals, term = _sparse(generators)
    y = np.array(y0, dtype=np.complex128, order="C")
    snaps = np.empty((cfg.snapshots,) + y.shape, dtype=np.complex128)
    snaps[0] = y
    for s in range(cfg.snapshots - 1):
        first = s * stride
        while first < (s + 1) * stride:
            count = min(MAX_BLOCK_STEPS, (s + 1) * stride - first)
            half = 2 * first + np.arange(2 * count + 1)
            coeff = np.ascontiguousarray(coeff_fn(duration * half / (2 * n_steps)), dtype=np.complex128)
            rk4_block(rows, cols, vals, term, coeff, y, h, herm_dim)
            first += count
        snaps[s + 1] = y
    times = duration * np.arange(cfg.snapshots) / (cfg.snapshots - 1)
    return times, snaps, h


def _duration(H: TimeOperator, T: float | None) -> float:
    T = H.t_max if T is None else T
    if not 0 < T <= H.t_max * (1 + 1e-12):
        raise ValueError(f"run duration {T} outside (0, {H.t_max}]")
    return T


def propagate_pure(H: TimeOperator, psi0: np.ndarray, cfg: IntegratorConfig,
                   T: float | None = None) -> Trajectory:
    """Integrate i dpsi/dt = H(t) psi without renormalisation.

    ``psi0`` may be a ket of shape ``(dim,)`` or a batch ``(dim, k)`` of kets.
    Raises :class:`IntegratorError` if any norm drifts by more than 1e-6.
    """
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape[0] != H.dim:
        raise ValueError(f"state dimension {psi0.shape[0]} does not match H ({H.dim})")
    batch = psi0.ndim == 2
    y0 = psi0 if batch else psi0[:, None]
    norms0 = np.linalg.norm(y0, axis=0)
    if np.any(np.abs(norms0 - 1.0) > 1e-10):
        raise ValueError("initial state is not normalised")
    T = _duration(H, T)
    times, snaps, h = _integrate(H.coefficients, -1j * H.matrices(), y0, T, cfg)
    drift = np.abs(np.linalg.norm(snaps, axis=1) - 1.0).max()
    if drift > NORM_FAIL:
        raise IntegratorError(f"norm drift {drift:.3e} exceeds {NORM_FAIL:g} (step {h:.3e} us)")
    states = snaps if batch else snaps[:, :, 0]
    return Trajectory(times, states, "batch" if batch else "ket", h)


def propagate_basis(H: TimeOperator, cfg: IntegratorConfig, T: float | None = None) -> Trajectory:
    """Propagate |00>, |01>, |10>, |11> together under a 9-dim Hamiltonian."""
    if H.dim != 9:
        raise ValueError("propagate_basis needs the two-atom lab Hamiltonian")
    traj = propagate_pure(H, qalg.I9[:, qalg.COMPUTATIONAL], cfg, T)
    traj.kind = "basis"
    return traj


# ---------------------------------------------------------------------------
# open-system dynamics

@dataclass(frozen=True)
class JumpOperators:
    """Decay |r> -> |0> and |r> -> |1> on each atom, each at rate gamma/2."""

    gamma: float
    ops: tuple[np.ndarray, ...]

    @classmethod
    def for_rate(cls, gamma: float) -> "JumpOperators":
        if gamma < 0:
            raise ValueError("decay rate must be non-negative")
        amp = math.sqrt(gamma / 2.0)
        ops = tuple(
            amp * qalg.on_atom(qalg.outer(g, "r"), atom)
            for atom in (1, 2)
            for g in ("0", "1")
        )
        return cls(gamma, ops)

    @classmethod
    def for_params(cls, p: SystemParams) -> "JumpOperators":
        return cls.for_rate(p.decay_rate)

    def rate_operator(self) -> np.ndarray:
        return sum(qalg.dagger(L) @ L for L in self.ops)


def _commutator_super(a: np.ndarray) -> np.ndarray:
    eye = np.eye(a.shape[0])
    return -1j * (np.kron(a, eye) - np.kron(eye, a.T))


def _dissipator_super(jumps: JumpOperators, n: int) -> np.ndarray:
    eye = np.eye(n)
    out = np.zeros((n * n, n * n), dtype=complex)
    for L in jumps.ops:
        ldl = qalg.dagger(L) @ L
        out += np.kron(L, L.conj()) - 0.5 * (np.kron(ldl, eye) + np.kron(eye, ldl.T))
    return out


def propagate_lindblad(H: TimeOperator, rho0: np.ndarray, jumps: JumpOperators,
                       cfg: IntegratorConfig, T: float | None = None) -> Trajectory:
    """Integrate drho/dt = -i[H, rho] + sum_k (L rho L^+ - {L^+ L, rho}/2).

    Hermiticity is restored after every step. Trace drift or negative
    eigenvalues beyond 1e-6 at any snapshot raise :class:`IntegratorError`.
    """
    n = H.dim
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (n, n):
        raise ValueError(f"density matrix shape {rho0.shape} does not match H ({n})")
    qalg.check_density(rho0)
    T = _duration(H, T)
    gens = [_commutator_super(a) for a in H.matrices()]

    if jumps.gamma > 0:
        gens.append(_dissipator_super(jumps, n))

        def coeff_fn(t):
            c = H.coefficients(t)
            return np.concatenate([c, np.ones(c.shape[:-1] + (1,), dtype=complex)], axis=-1)
    else:
        coeff_fn = H.coefficients

    times, snaps, h = _integrate(coeff_fn, np.array(gens), rho0.reshape(n * n, 1), T, cfg, herm_dim=n)
    rhos = snaps.reshape(-1, n, n)
    trace_drift = np.abs(np.trace(rhos, axis1=1, axis2=2) - 1.0).max()
    if trace_drift > NORM_FAIL:
        raise IntegratorError(f"trace drift {trace_drift:.3e} exceeds {NORM_FAIL:g}")
    lowest = np.linalg.eigvalsh(rhos).min()
    if lowest < -POSITIVITY_FAIL:
        raise IntegratorError(f"density matrix eigenvalue {lowest:.3e} below {-POSITIVITY_FAIL:g}")
    return Trajectory(times, rhos, "density", h)


# ---------------------------------------------------------------------------
# single-atom reference

def single_atom_hamiltonian(p: SystemParams) -> TimeOperator:
    """H0(t) = Omega(t)/2 (|1><r| + h.c.) for one atom on (|0>, |1>, |r>)."""
    w = p.mod_freq

    def drive(t):
        return pulse_amplitude(t, p) * np.cos(w * t) / 2.0

    flip = qalg.outer("1", "r") + qalg.outer("r", "1")
    return TimeOperator(((drive, flip),), 3, Frame.LAB, p.gate_duration, qalg.LABELS)


def single_atom_angle(t, p: SystemParams):
    """Rotation angle theta(t) = (1/2) int_0^t Omega(s) ds.

    For a constant envelope this is sin(omega t) Omega0 / (2 omega). The
    single-atom Hamiltonian commutes with itself at all times, so
    cos(theta)|1> - i sin(theta)|r> is exact.
    """
    t = np.asarray(t, dtype=float)
    w, om = p.mod_freq, p.omega0_max
    if p.pulse_shape is PulseShape.CONSTANT:
        return np.sin(w * t) * om / (2.0 * w)
    a = TWO_PI / p.gate_duration
    return 0.25 * om * (
        np.sin(w * t) / w
        - 0.5 * (np.sin((w - a) * t) / (w - a) + np.sin((w + a) * t) / (w + a))
    )


def single_atom_closed_form(t, p: SystemParams) -> np.ndarray:
    """Exact single-atom state from |1>, shape ``t.shape + (3,)``."""
    theta = single_atom_angle(t, p)
    out = np.zeros(np.shape(theta) + (3,), dtype=complex)
    out[..., 1] = np.cos(theta)
    out[..., 2] = -1j * np.sin(theta)
    return out
