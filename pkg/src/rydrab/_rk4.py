"""Compiled fixed-step RK4 for dy/dt = sum_k c_k(t) G_k y with sparse G_k."""

import numba
import numpy as np


@numba.njit(cache=True, nogil=True)
def _hermitize(y, n):
    for i in range(n):
        for j in range(i, n):
            a = y[i * n + j]
            b = y[j * n + i]
            avg = 0.5 * (a + np.conj(b))
            y[i * n + j] = avg
            y[j * n + i] = np.conj(avg)


@numba.njit(cache=True, nogil=True)
def _column(rows, cols, vals, term, coeff, y, h, herm_dim):
    nsteps = (coeff.shape[0] - 1) // 2
    d = y.shape[0]
    ne = vals.shape[0]
    k = np.empty(d, dtype=np.complex128)
    acc = np.empty(d, dtype=np.complex128)
    tmp = np.empty(d, dtype=np.complex128)
    w0 = np.empty(ne, dtype=np.complex128)
    wm = np.empty(ne, dtype=np.complex128)
    w1 = np.empty(ne, dtype=np.complex128)
    for s in range(nsteps):
        for e in range(ne):
            w0[e] = coeff[2 * s, term[e]] * vals[e]
            wm[e] = coeff[2 * s + 1, term[e]] * vals[e]
            w1[e] = coeff[2 * s + 2, term[e]] * vals[e]
        k[:] = 0.0
        for e in range(ne):
            k[rows[e]] += w0[e] * y[cols[e]]
        for i in range(d):
            acc[i] = k[i]
            tmp[i] = y[i] + 0.5 * h * k[i]
        k[:] = 0.0
        for e in range(ne):
            k[rows[e]] += wm[e] * tmp[cols[e]]
        for i in range(d):
            acc[i] += 2.0 * k[i]
            tmp[i] = y[i] + 0.5 * h * k[i]
        k[:] = 0.0
        for e in range(ne):
            k[rows[e]] += wm[e] * tmp[cols[e]]
        for i in range(d):
            acc[i] += 2.0 * k[i]
            tmp[i] = y[i] + h * k[i]
        k[:] = 0.0
        for e in range(ne):
            k[rows[e]] += w1[e] * tmp[cols[e]]
        for i in range(d):
            y[i] += (h / 6.0) * (acc[i] + k[i])
        if herm_dim > 0:
            _hermitize(y, herm_dim)


@numba.njit(cache=True, nogil=True)
def rk4_block(rows, cols, vals, term, coeff, y, h, herm_dim):
    """Advance each column of ``y`` in place by ``(len(coeff) - 1) // 2`` steps.

    ``coeff[2k]`` holds the term coefficients at the start of step k and
    ``coeff[2k + 1]`` those at its midpoint. If ``herm_dim`` is positive, the
    columns are row-major vectorised density matrices re-symmetrised after
    every step.
    """
    for j in range(y.shape[1]):
        col = y[:, j].copy()
        _column(rows, cols, vals, term, coeff, col, h, herm_dim)
        y[:, j] = col
