"""Dense linear algebra on the two-atom, three-level Hilbert space.

Single-atom levels are ordered ``(|0>, |1>, |r>)`` and two-atom states are
stored row-major over ``(atom1, atom2)``::

    index  0    1    2    3    4    5    6    7    8
    state  00   01   0r   10   11   1r   r0   r1   rr

Inner products are conjugate-linear in the *first* argument, matching
``np.vdot``.
"""

from __future__ import annotations

import enum

import numpy as np

HERMITIAN_ATOL = 1e-10


class Level(enum.IntEnum):
    """Single-atom level labels, valued by their position in the basis."""

    G0 = 0
    G1 = 1
    RYD = 2


LABELS = ("0", "1", "r")
BASIS_LABELS = tuple(a + b for a in LABELS for b in LABELS)

#: Index of each computational basis state |00>, |01>, |10>, |11> in dim 9.
COMPUTATIONAL = np.array([0, 1, 3, 4])

I3 = np.eye(3, dtype=complex)
I9 = np.eye(9, dtype=complex)


def index(label: str) -> int:
    """Return the dim-9 index of a two-letter label such as ``"1r"``."""
    try:
        return BASIS_LABELS.index(label)
    except ValueError:
        raise ValueError(f"unknown two-atom basis label {label!r}") from None


def ket(label: str) -> np.ndarray:
    """Basis vector for a one-letter (dim 3) or two-letter (dim 9) label."""
    if len(label) == 1:
        v = np.zeros(3, dtype=complex)
        v[LABELS.index(label)] = 1.0
        return v
    v = np.zeros(9, dtype=complex)
    v[index(label)] = 1.0
    return v


def outer(bra_label: str, ket_label: str | None = None) -> np.ndarray:
    """``|a><b|`` from labels; with one label, the projector ``|a><a|``."""
    a = ket(bra_label)
    b = a if ket_label is None else ket(ket_label)
    return np.outer(a, b.conj())


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two single-atom operators (atom 1 first)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != (3, 3) or b.shape != (3, 3):
        raise ValueError("tensor expects two 3x3 single-atom operators")
    return np.kron(a, b)


def on_atom(op: np.ndarray, atom: int) -> np.ndarray:
    """Embed a single-atom operator acting on ``atom`` (1 or 2)."""
    if atom == 1:
        return tensor(op, I3)
    if atom == 2:
        return tensor(I3, op)
    raise ValueError("atom must be 1 or 2")


def inner(a: np.ndarray, b: np.ndarray) -> complex:
    """``<a|b>``, conjugating the first argument."""
    return complex(np.vdot(a, b))


def dagger(op: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(op, -1, -2))


def is_hermitian(op: np.ndarray, atol: float = HERMITIAN_ATOL) -> bool:
    return bool(np.allclose(op, dagger(op), rtol=0.0, atol=atol))


def expect(op: np.ndarray, state: np.ndarray) -> float:
    """Expectation value of a Hermitian operator in a ket or density matrix.

    Raises ``ValueError`` if ``op`` is not Hermitian, and ``ArithmeticError``
    if the result carries an imaginary part above ``1e-10``.
    """
    op = np.asarray(op)
    if not is_hermitian(op):
        raise ValueError("expect() requires a Hermitian operator")
    state = np.asarray(state)
    if state.ndim == 1:
        val = np.vdot(state, op @ state)
    else:
        val = np.trace(op @ state)
    if abs(val.imag) > HERMITIAN_ATOL:
        raise ArithmeticError(f"expectation value has imaginary part {val.imag:.3e}")
    return float(val.real)


def density(psi: np.ndarray) -> np.ndarray:
    """Pure-state density matrix ``|psi><psi|``."""
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def check_density(rho: np.ndarray, atol: float = 1e-8) -> None:
    """Raise ``ValueError`` unless ``rho`` is Hermitian, unit trace and PSD."""
    if not is_hermitian(rho):
        raise ValueError("density matrix is not Hermitian")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > atol:
        raise ValueError(f"density matrix trace {tr!r} differs from 1")
    lo = np.linalg.eigvalsh(rho).min()
    if lo < -atol:
        raise ValueError(f"density matrix has negative eigenvalue {lo:.3e}")


def embed_computational(amplitudes: np.ndarray) -> np.ndarray:
    """Place four amplitudes on |00>, |01>, |10>, |11> of the dim-9 space."""
    amplitudes = np.asarray(amplitudes, dtype=complex)
    if amplitudes.shape != (4,):
        raise ValueError("expected four computational amplitudes")
    psi = np.zeros(9, dtype=complex)
    psi[COMPUTATIONAL] = amplitudes
    return psi
