"""Gate targets, fidelities and |11> phase extraction."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import qalg

#: Number of quadrature nodes per angle in :func:`average_fidelity`.
DEFAULT_NODES = 16
#: Below this |<11|psi>| the phase of |11> is reported as undefined.
PHASE_NODE_THRESHOLD = 1e-3


@dataclass(frozen=True)
class GateTarget:
    """Diagonal phase gate on |00>, |01>, |10>, |11>."""

    phases: tuple[float, float, float, float]

    @classmethod
    def cz(cls) -> "GateTarget":
        return cls((0.0, 0.0, 0.0, math.pi))

    @classmethod
    def controlled_phase(cls, phi: float) -> "GateTarget":
        return cls((0.0, 0.0, 0.0, phi))

    @property
    def diagonal(self) -> np.ndarray:
        return np.exp(1j * np.asarray(self.phases, dtype=float))

    def apply(self, psi: np.ndarray) -> np.ndarray:
        """Act on a dim-9 state supported on the computational subspace."""
        out = np.zeros(9, dtype=complex)
        out[qalg.COMPUTATIONAL] = self.diagonal * np.asarray(psi)[qalg.COMPUTATIONAL]
        return out


@dataclass(frozen=True)
class ProductStateAngles:
    alpha1: float
    alpha2: float

    def __post_init__(self):
        for a in (self.alpha1, self.alpha2):
            if not -math.pi <= a < math.pi:
                raise ValueError("product-state angles must lie in [-pi, pi)")


#: Specified input 0.5|00> + 0.5|01> + sqrt(0.05)|10> + sqrt(0.45)|11>.
PSI_PRIME_AMPLITUDES = np.array([0.5, 0.5, math.sqrt(0.05), math.sqrt(0.45)])


def reference_state() -> np.ndarray:
    return qalg.embed_computational(PSI_PRIME_AMPLITUDES)


def product_coefficients(alpha1, alpha2) -> np.ndarray:
    """Amplitudes on (|00>, |01>, |10>, |11>); broadcasts over the angles."""
    c1, s1 = np.cos(alpha1), np.sin(alpha1)
    c2, s2 = np.cos(alpha2), np.sin(alpha2)
    return np.stack(np.broadcast_arrays(c1 * c2, c1 * s2, s1 * c2, s1 * s2), axis=-1)


def product_state(a: ProductStateAngles) -> np.ndarray:
    return qalg.embed_computational(product_coefficients(a.alpha1, a.alpha2))


def average_fidelity(M: np.ndarray, target: GateTarget, nodes: int = DEFAULT_NODES) -> float | np.ndarray:
    """Mean of |<U psi0|M psi0>|^2 over product inputs with uniform angles.

    ``M`` is the computational block of the evolution (shape ``(4, 4)`` or a
    stack ``(n, 4, 4)``). The integrand is a trigonometric polynomial of
    degree 4 per angle, so a uniform grid of ``nodes >= 9`` points per
    axis is exact. Leaked amplitude simply lowers the overlap.
    """
    if nodes < 9:
        raise ValueError("average_fidelity needs at least 9 nodes per axis")
    alphas = -math.pi + 2.0 * math.pi * np.arange(nodes) / nodes
    c = product_coefficients(alphas[:, None], alphas[None, :]).reshape(-1, 4)
    ideal = c * target.diagonal
    M = np.asarray(M)
    amp = np.einsum("qa,...ab,qb->...q", ideal.conj(), M, c)
    return np.mean(np.abs(amp) ** 2, axis=-1)


def state_fidelity_pure(psi: np.ndarray, psi0: np.ndarray, target: GateTarget):
    """|<U psi0|psi>|^2; ``psi`` may carry leading snapshot axes."""
    ideal = target.apply(psi0)
    return np.abs(np.asarray(psi) @ ideal.conj()) ** 2


def state_fidelity_mixed(rho: np.ndarray, psi0: np.ndarray, target: GateTarget):
    """<U psi0| rho |U psi0>; ``rho`` may carry leading snapshot axes."""
    ideal = target.apply(psi0)
    val = np.einsum("i,...ij,j->...", ideal.conj(), np.asarray(rho), ideal)
    return val.real


def phase_of_11(amplitudes: np.ndarray) -> np.ndarray:
    """Unwrapped arg <11|psi(t)> from a series of |11> amplitudes.

    Points where the amplitude is below 1e-3 are NaN and are skipped when
    unwrapping. The first defined point is kept in (-pi, pi].
    """
    amplitudes = np.asarray(amplitudes)
    out = np.full(amplitudes.shape, np.nan)
    ok = np.abs(amplitudes) >= PHASE_NODE_THRESHOLD
    out[ok] = np.unwrap(np.angle(amplitudes[ok]))
    return out


def wrap_phase(phi):
    """Reduce a phase to [0, 2 pi) for display."""
    return np.mod(phi, 2.0 * math.pi)
