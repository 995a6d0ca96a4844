# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: counter-based Gaussian entry generation and the
fused ReLU pair trial. Mirrors reludist.rng / reludist._pykernels."""

import numpy as np

cimport numpy as cnp
from libc.math cimport log, sqrt
from libc.stdint cimport uint64_t

cnp.import_array()

BACKEND_NAME = "compiled"

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15u
cdef uint64_t K1 = 0xBF58476D1CE4E5B9u
cdef uint64_t K2 = 0x94D049BB133111EBu
cdef uint64_t LAYER_SALT = 0x243F6A8885A308D3u
cdef double TO_UNIT = 2.0 ** -53


cdef inline uint64_t mix64(uint64_t x) nogil:
    cdef uint64_t z = x + GOLDEN
    z = (z ^ (z >> 30)) * K1
    z = (z ^ (z >> 27)) * K2
    return z ^ (z >> 31)


# AS241 PPND7 coefficients (Wichura 1988), identical to reludist.rng.
cdef double A0 = 3.3871327179e0, A1 = 5.0434271938e1
cdef double A2 = 1.5929113202e2, A3 = 5.9109374720e1
cdef double B1 = 1.7895169469e1, B2 = 7.8757757664e1, B3 = 6.7187563600e1
cdef double C0 = 1.4234372777e0, C1 = 2.7568153900e0
cdef double C2 = 1.3067284816e0, C3 = 1.7023821103e-1
cdef double D1 = 7.3700164250e-1, D2 = 1.2021132975e-1
cdef double E0 = 6.6579051150e0, E1 = 3.0812263860e0
cdef double E2 = 4.2868294337e-1, E3 = 1.7337203997e-2
cdef double F1 = 2.4197894225e-1, F2 = 1.2258202635e-2


cdef inline double inv_phi(double p) nogil:
    cdef double q = p - 0.5
    cdef double r, val
    if -0.425 <= q <= 0.425:
        r = 0.180625 - q * q
        return q * (((A3 * r + A2) * r + A1) * r + A0) / (((B3 * r + B2) * r + B1) * r + 1.0)
    if q < 0.0:
        r = p
    else:
        r = 1.0 - p
    r = sqrt(-log(r))
    if r <= 5.0:
        r = r - 1.6
        val = (((C3 * r + C2) * r + C1) * r + C0) / ((D2 * r + D1) * r + 1.0)
    else:
        r = r - 5.0
        val = (((E3 * r + E2) * r + E1) * r + E0) / ((F2 * r + F1) * r + 1.0)
    if q < 0.0:
        return -val
    return val


cdef inline double entry(uint64_t key, uint64_t i, uint64_t j, double scale) nogil:
    cdef uint64_t w = mix64(key ^ ((i << 32) | j))
    cdef double u = (<double> (w >> 11) + 0.5) * TO_UNIT
    return inv_phi(u) * scale


def gaussian_entries(seed, Py_ssize_t m, Py_ssize_t n):
    """m x n matrix with i.i.d. N(0, 1/m) entries, counter-based on (seed, i, j)."""
    cdef uint64_t key = mix64((<uint64_t> seed) ^ LAYER_SALT)
    cdef double scale = 1.0 / sqrt(<double> m)
    out = np.empty((m, n), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(m):
            for j in range(n):
                o[i, j] = entry(key, <uint64_t> i, <uint64_t> j, scale)
    return out


def pair_trial(seed, Py_ssize_t m, double[::1] x, double[::1] y):
    """Fused realization of the layer applied to (x, y).

    Returns (||rho(Mx) - rho(My)||^2, rho(Mx).rho(My), ||rho(Mx)||^2,
    ||rho(My)||^2). Row dot products and the row sum run strictly left to
    right; columns where both inputs vanish are skipped (identical result,
    entries are generated per (i, j) counter).
    """
    cdef uint64_t key = mix64((<uint64_t> seed) ^ LAYER_SALT)
    cdef double scale = 1.0 / sqrt(<double> m)
    cdef Py_ssize_t n = x.shape[0]
    cdef cnp.intp_t[::1] cols
    cdef Py_ssize_t i, k, nact
    cdef double a, b, ra, rb, d, e
    cdef double sq = 0.0, dot = 0.0, nx2 = 0.0, ny2 = 0.0

    active = np.flatnonzero((np.asarray(x) != 0.0) | (np.asarray(y) != 0.0))
    cols = active
    nact = cols.shape[0]
    if nact == 0:
        return 0.0, 0.0, 0.0, 0.0
    with nogil:
        for i in range(m):
            a = 0.0
            b = 0.0
            for k in range(nact):
                e = entry(key, <uint64_t> i, <uint64_t> cols[k], scale)
                a += e * x[cols[k]]
                b += e * y[cols[k]]
            ra = a if a > 0.0 else 0.0
            rb = b if b > 0.0 else 0.0
            d = ra - rb
            sq += d * d
            dot += ra * rb
            nx2 += ra * ra
            ny2 += rb * rb
    return sq, dot, nx2, ny2
