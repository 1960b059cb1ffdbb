"""Drive envelopes, regime conditions and Hamiltonian builders.

All frequencies are angular, in rad/us; times are in us and lengths in um.
Configuration values quoted as "2 pi x f MHz" are converted with :func:`mhz`.
"""

from __future__ import annotations

import dataclasses
import enum
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import qalg

TWO_PI = 2.0 * math.pi

#: Largest Omega0/omega for which the effective model is trusted.
MAX_DRIVE_RATIO = 0.5
#: Largest |Omega_eff/delta| for which the Stark-shift model is trusted.
MAX_STARK_RATIO = 0.2

#: Ratio of the CosineEnvelope gate time to pi*omega^2*delta/Omega_m^4 for phi = pi.
COSINE_DURATION_COEFF = 8192.0 / 35.0


def mhz(f):
    """Angular frequency (rad/us) of a linear frequency given in MHz."""
    return TWO_PI * f


class PulseShape(enum.Enum):
    CONSTANT = "ConstantAmplitude"
    COSINE = "CosineEnvelope"


class Frame(enum.Enum):
    LAB = "Lab"
    ROTATED = "Rotated"
    EFFECTIVE = "Effective"
    FINAL_EFFECTIVE = "FinalEffective"


class EffectiveModelWarning(UserWarning):
    """Raised (as a warning) when perturbative conditions are violated."""


@dataclass(frozen=True)
class SystemParams:
    """Physical constants and drive settings for one two-atom scenario.

    ``omega0_max`` is Omega0 for constant drives and the envelope peak
    Omega_m for cosine-shaped drives. ``vdw_override`` bypasses C6/d^6.
    """

    omega0_max: float
    mod_freq: float
    gate_duration: float
    delta: float = 0.0
    c6: float = mhz(56.2e6)
    distance: float = 10.0
    tau: float = math.inf
    pulse_shape: PulseShape = PulseShape.CONSTANT
    vdw_override: float | None = None

    def __post_init__(self):
        for name in ("omega0_max", "mod_freq", "distance", "tau", "gate_duration"):
            if not getattr(self, name) > 0:
                raise ValueError(f"SystemParams.{name} must be positive")
        if not isinstance(self.pulse_shape, PulseShape):
            object.__setattr__(self, "pulse_shape", PulseShape(self.pulse_shape))

    @property
    def decay_rate(self) -> float:
        return 0.0 if math.isinf(self.tau) else 1.0 / self.tau

    @property
    def effective_model_valid(self) -> bool:
        return self.omega0_max / self.mod_freq <= MAX_DRIVE_RATIO

    @property
    def stark_model_valid(self) -> bool:
        if self.delta == 0:
            return False
        return abs(effective_rabi(self.omega0_max, self.mod_freq) / self.delta) <= MAX_STARK_RATIO

    def replace(self, **changes) -> "SystemParams":
        return dataclasses.replace(self, **changes)

    @classmethod
    def rab(
        cls,
        omega0: float = mhz(10.0),
        mod_freq: float = mhz(35.0),
        c6: float = mhz(56.2e6),
        tau: float = math.inf,
        distance: float | None = None,
    ) -> "SystemParams":
        """Constant-amplitude antiblockade gate at the resonance distance.

        The gate duration is one effective Rabi cycle, 2 pi / Omega_eff.
        """
        t0 = TWO_PI / effective_rabi(omega0, mod_freq)
        if distance is None:
            distance = (c6 / rab_vdw(omega0, mod_freq)) ** (1 / 6)
        return cls(omega0, mod_freq, t0, c6=c6, distance=distance, tau=tau)

    @classmethod
    def broken(
        cls,
        omega_m: float = mhz(10.0),
        mod_freq: float = mhz(35.0),
        delta: float = mhz(8.0),
        c6: float = mhz(56.2e6),
        tau: float = math.inf,
        distance: float | None = None,
        phi: float = math.pi,
    ) -> "SystemParams":
        """Cosine-shaped Stark-shift phase gate accumulating ``phi`` on |11>."""
        if distance is None:
            distance = (c6 / broken_vdw(mod_freq, delta)) ** (1 / 6)
        t = cosine_duration(phi, omega_m, mod_freq, delta)
        return cls(
            omega_m, mod_freq, t, delta=delta, c6=c6, distance=distance,
            tau=tau, pulse_shape=PulseShape.COSINE,
        )


# ---------------------------------------------------------------------------
# scalar relations

def effective_rabi(omega0, mod_freq):
    """Second-order |11> <-> |rr> coupling Omega0^2 / (4 omega)."""
    return omega0**2 / (4.0 * mod_freq)


def rab_vdw(omega0: float, mod_freq: float) -> float:
    """Interaction strength 2 omega - Omega0^2/(6 omega) making |11> <-> |rr> resonant."""
    return 2.0 * mod_freq - omega0**2 / (6.0 * mod_freq)


def broken_vdw(mod_freq: float, delta: float) -> float:
    return 2.0 * mod_freq + delta


def _distance_for(c6: float, v: float) -> float:
    if not v > 0:
        raise ValueError(f"target interaction {v!r} rad/us is not positive; regime is unphysical")
    return (c6 / v) ** (1.0 / 6.0)


def vdw_strength(p: SystemParams) -> float:
    if p.vdw_override is not None:
        return p.vdw_override
    return p.c6 / p.distance**6


def rab_distance(p: SystemParams) -> float:
    """Distance at which C6/d^6 satisfies the antiblockade condition."""
    return _distance_for(p.c6, rab_vdw(p.omega0_max, p.mod_freq))


def broken_distance(p: SystemParams) -> float:
    """Distance at which C6/d^6 = 2 omega + delta."""
    return _distance_for(p.c6, broken_vdw(p.mod_freq, p.delta))


def cosine_duration(phi: float, omega_m: float, mod_freq: float, delta: float) -> float:
    if not phi / delta > 0:
        raise ValueError("phi and delta must have the same sign and be non-zero")
    return 8192.0 * phi * mod_freq**2 * delta / (35.0 * omega_m**4)


def gate_duration_for_phase(phi: float, p: SystemParams) -> float:
    """Cosine-envelope period that accumulates a Stark phase ``phi`` on |11>.

    Uses the closed-form mean 35/8 of (1 - cos x)^4 over one period.
    """
    if p.pulse_shape is not PulseShape.COSINE:
        raise ValueError("gate_duration_for_phase needs a CosineEnvelope pulse")
    if not phi > 0:
        raise ValueError("phi must be positive")
    return cosine_duration(phi, p.omega0_max, p.mod_freq, p.delta)


# ---------------------------------------------------------------------------
# envelopes

def _as_times(t, p: SystemParams) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    slack = 1e-12 * p.gate_duration
    if np.any(t < -slack) or np.any(t > p.gate_duration + slack):
        raise ValueError(f"time outside the gate window [0, {p.gate_duration}] us")
    return t


def pulse_amplitude(t, p: SystemParams):
    """Envelope Omega0(t); the physical drive is this times cos(omega t)."""
    t = _as_times(t, p)
    if p.pulse_shape is PulseShape.CONSTANT:
        out = np.full_like(t, p.omega0_max)
    else:
        out = 0.5 * p.omega0_max * (1.0 - np.cos(TWO_PI * t / p.gate_duration))
    return out if out.ndim else float(out)


def rabi_frequency(t, p: SystemParams):
    """Instantaneous drive Omega(t) = Omega0(t) cos(omega t)."""
    return pulse_amplitude(t, p) * np.cos(p.mod_freq * np.asarray(t, dtype=float))


def accumulated_phase(t, p: SystemParams):
    """Closed-form Stark phase int_0^t Omega_eff(s)^2 / (4 delta) ds on |11>."""
    t = _as_times(t, p)
    w, d, om = p.mod_freq, p.delta, p.omega0_max
    if p.pulse_shape is PulseShape.CONSTANT:
        out = om**4 * t / (64.0 * w**2 * d)
    else:
        x = TWO_PI * t / p.gate_duration
        prim = (35.0 / 8.0 * x - 7.0 * np.sin(x) + 1.75 * np.sin(2 * x)
                - np.sin(3 * x) / 3.0 + np.sin(4 * x) / 32.0)
        out = om**4 / (1024.0 * w**2 * d) * prim * p.gate_duration / TWO_PI
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# time-dependent operators

Coefficient = Callable[[np.ndarray], np.ndarray]


def _const(value: complex) -> Coefficient:
    def coeff(t):
        return np.full(np.shape(t), value, dtype=complex)
    return coeff


@dataclass(frozen=True)
class TimeOperator:
    """H(t) = sum_k f_k(t) A_k with vectorised scalar coefficients f_k.

    ``valid`` is False when the builder's perturbative condition failed.
    """

    terms: tuple[tuple[Coefficient, np.ndarray], ...]
    dim: int
    frame: Frame
    t_max: float
    labels: tuple[str, ...] = ()
    valid: bool = True

    def coefficients(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.stack([np.asarray(f(t), dtype=complex) * np.ones(t.shape) for f, _ in self.terms], axis=-1)

    def matrices(self) -> np.ndarray:
        return np.array([a for _, a in self.terms], dtype=complex)

    def __call__(self, t: float) -> np.ndarray:
        c = self.coefficients(np.asarray([t]))[0]
        return np.tensordot(c, self.matrices(), axes=1)


def _coupling(labels: Sequence[str], a: str, b: str) -> np.ndarray:
    n = len(labels)
    m = np.zeros((n, n), dtype=complex)
    i, j = labels.index(a), labels.index(b)
    m[i, j] = m[j, i] = 1.0
    return m


def _drive_operator() -> np.ndarray:
    flip = (qalg.outer("1", "r") + qalg.outer("r", "1")) / 2.0
    return qalg.on_atom(flip, 1) + qalg.on_atom(flip, 2)


def full_hamiltonian(p: SystemParams) -> TimeOperator:
    """Two-atom lab-frame Hamiltonian on all nine basis states."""
    w = p.mod_freq

    def drive(t):
        return pulse_amplitude(t, p) * np.cos(w * t)

    terms = ((drive, _drive_operator()), (_const(1.0), vdw_strength(p) * qalg.outer("rr")))
    return TimeOperator(terms, 9, Frame.LAB, p.gate_duration, qalg.BASIS_LABELS)


#: Basis of the doubly-driven block of the lab Hamiltonian.
PAIR_BASIS = ("11", "1r", "r1", "rr")
#: Symmetric basis used in the rotating frame; "m" is (|r1> + |1r>)/sqrt 2.
SECTOR_BASIS = ("11", "m", "rr")
EFFECTIVE_BASIS = ("11", "rr")


def pair_hamiltonian(p: SystemParams) -> TimeOperator:
    """Lab Hamiltonian restricted to {|11>, |1r>, |r1>, |rr>}."""
    full = full_hamiltonian(p)
    idx = [qalg.index(s) for s in PAIR_BASIS]
    terms = tuple((f, a[np.ix_(idx, idx)]) for f, a in full.terms)
    return TimeOperator(terms, 4, Frame.LAB, p.gate_duration, PAIR_BASIS)


def sector_hamiltonian(p: SystemParams) -> TimeOperator:
    """Symmetric three-state block after rotating |rr> at omega0 = 2 omega.

    A lab state is recovered by multiplying the |rr> amplitude by
    exp(-i omega0 t).
    """
    w = p.mod_freq
    w0 = 2.0 * w
    lab = SECTOR_BASIS

    def g(t):
        return pulse_amplitude(t, p) / (2.0 * math.sqrt(2.0))

    def upper(t):
        return g(t) * 2.0 * np.cos(w * t)

    def lower(t):
        return g(t) * (np.exp(1j * (w - w0) * t) + np.exp(-1j * (w + w0) * t))

    def lower_conj(t):
        return np.conj(lower(t))

    m_rr = np.zeros((3, 3), dtype=complex)
    m_rr[1, 2] = 1.0
    rr = np.zeros((3, 3), dtype=complex)
    rr[2, 2] = vdw_strength(p) - w0
    terms = (
        (upper, _coupling(lab, "11", "m")),
        (lower, m_rr),
        (lower_conj, m_rr.T.copy()),
        (_const(1.0), rr),
    )
    return TimeOperator(terms, 3, Frame.ROTATED, p.gate_duration, lab)


def _warn_drive(p: SystemParams) -> bool:
    ok = p.effective_model_valid
    if not ok:
        warnings.warn(
            f"Omega0/omega = {p.omega0_max / p.mod_freq:.3f} exceeds {MAX_DRIVE_RATIO}; "
            "effective model may be inaccurate",
            EffectiveModelWarning,
            stacklevel=3,
        )
    return ok


def effective_hamiltonian(p: SystemParams) -> TimeOperator:
    """Two-level |11> <-> |rr> model with coupling Omega_eff and shift V'."""
    ok = _warn_drive(p)
    w = p.mod_freq
    v = vdw_strength(p)

    def half_rabi(t):
        return effective_rabi(pulse_amplitude(t, p), w) / 2.0

    def shift(t):
        return v - 2.0 * w + pulse_amplitude(t, p) ** 2 / (6.0 * w)

    rr = np.diag([0.0, 1.0]).astype(complex)
    terms = ((half_rabi, _coupling(EFFECTIVE_BASIS, "11", "rr")), (shift, rr))
    return TimeOperator(terms, 2, Frame.EFFECTIVE, p.gate_duration, EFFECTIVE_BASIS, ok)


def final_effective_hamiltonian(p: SystemParams) -> TimeOperator:
    """Stark shift -Omega_eff(t)^2/(4 delta) on |11>, with |rr> eliminated."""
    ok = _warn_drive(p)
    if not p.stark_model_valid:
        ok = False
        warnings.warn(
            "|Omega_eff/delta| exceeds the Stark-shift validity bound",
            EffectiveModelWarning,
            stacklevel=2,
        )
    w, d = p.mod_freq, p.delta

    def stark(t):
        return -effective_rabi(pulse_amplitude(t, p), w) ** 2 / (4.0 * d) if d else 0.0 * t

    terms = ((stark, np.diag([1.0, 0.0]).astype(complex)),)
    return TimeOperator(terms, 2, Frame.FINAL_EFFECTIVE, p.gate_duration, EFFECTIVE_BASIS, ok)
