# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops.  ``_kernels_py`` holds the numpy twin of every function
here; both must produce bit-identical results."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint32_t, uint64_t, int64_t

cnp.import_array()

cdef uint32_t PHILOX_M0 = 0xD2511F53U
cdef uint32_t PHILOX_M1 = 0xCD9E8D57U
cdef uint32_t PHILOX_W0 = 0x9E3779B9U
cdef uint32_t PHILOX_W1 = 0xBB67AE85U
cdef double TWO_PI = 6.283185307179586
cdef double INV_2_53 = 1.0 / 9007199254740992.0

BACKEND = "cython"


cdef inline void _philox(uint32_t* c, uint32_t k0, uint32_t k1) noexcept nogil:
    cdef uint64_t p0, p1
    cdef uint32_t c0, c1, c2, c3
    cdef int r
    c0 = c[0]; c1 = c[1]; c2 = c[2]; c3 = c[3]
    for r in range(10):
        if r:
            k0 = k0 + PHILOX_W0
            k1 = k1 + PHILOX_W1
        p0 = <uint64_t>PHILOX_M0 * c0
        p1 = <uint64_t>PHILOX_M1 * c2
        c0 = <uint32_t>(p1 >> 32) ^ c1 ^ k0
        c1 = <uint32_t>p1
        c2 = <uint32_t>(p0 >> 32) ^ c3 ^ k1
        c3 = <uint32_t>p0
    c[0] = c0; c[1] = c1; c[2] = c2; c[3] = c3


cdef inline double _uniform(uint32_t k0, uint32_t k1, uint64_t stream,
                            uint64_t index) noexcept nogil:
    cdef uint32_t c[4]
    cdef uint64_t block = index >> 1
    c[0] = <uint32_t>block
    c[1] = <uint32_t>(block >> 32)
    c[2] = <uint32_t>stream
    c[3] = <uint32_t>(stream >> 32)
    _philox(c, k0, k1)
    if index & 1:
        return ((c[2] >> 5) * 67108864.0 + (c[3] >> 6)) * INV_2_53
    return ((c[0] >> 5) * 67108864.0 + (c[1] >> 6)) * INV_2_53


def philox4x32(cnp.uint32_t[:, ::1] counters, uint32_t k0, uint32_t k1):
    cdef Py_ssize_t i, n = counters.shape[0]
    out = np.array(counters, dtype=np.uint32, copy=True)
    cdef cnp.uint32_t[:, ::1] o = out
    with nogil:
        for i in range(n):
            _philox(&o[i, 0], k0, k1)
    return out


def uniforms(uint32_t k0, uint32_t k1, uint64_t stream, uint64_t start, Py_ssize_t n):
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            o[i] = _uniform(k0, k1, stream, start + i)
    return out


def count_phase_window(uint32_t k0, uint32_t k1, uint64_t stream, uint64_t start,
                       Py_ssize_t n, double threshold):
    cdef Py_ssize_t i
    cdef int64_t count = 0
    cdef double theta
    with nogil:
        for i in range(n):
            theta = _uniform(k0, k1, stream, start + i) * TWO_PI
            if theta / TWO_PI < threshold:
                count += 1
    return count


def leapfrog(u, u_prev, double a, double b, Py_ssize_t steps):
    """Advance u'' = a*D2 u - b*u (dimensionless, periodic); returns (u, u_prev)."""
    cdef double[::1] cur = np.array(u, dtype=np.float64)
    cdef double[::1] prev = np.array(u_prev, dtype=np.float64)
    cdef Py_ssize_t n = cur.shape[0], i, s
    cdef double[::1] nxt = np.empty(n, dtype=np.float64)
    cdef double[::1] tmp
    cdef double lap
    with nogil:
        for s in range(steps):
            for i in range(n):
                lap = (cur[(i + 1) % n] - 2.0 * cur[i]) + cur[(i - 1 + n) % n]
                nxt[i] = (2.0 * cur[i] - prev[i]) + (a * lap - b * cur[i])
            tmp = prev
            prev = cur
            cur = nxt
            nxt = tmp
    return np.asarray(cur), np.asarray(prev)


def leapfrog_probe(u, u_prev, double a, double b, Py_ssize_t steps, Py_ssize_t probe):
    """As ``leapfrog`` but also returns u[probe] after every step."""
    cdef double[::1] cur = np.array(u, dtype=np.float64)
    cdef double[::1] prev = np.array(u_prev, dtype=np.float64)
    cdef Py_ssize_t n = cur.shape[0], i, s
    cdef double[::1] nxt = np.empty(n, dtype=np.float64)
    cdef double[::1] tmp
    series = np.empty(steps, dtype=np.float64)
    cdef double[::1] rec = series
    cdef double lap
    with nogil:
        for s in range(steps):
            for i in range(n):
                lap = (cur[(i + 1) % n] - 2.0 * cur[i]) + cur[(i - 1 + n) % n]
                nxt[i] = (2.0 * cur[i] - prev[i]) + (a * lap - b * cur[i])
            rec[s] = nxt[probe]
            tmp = prev
            prev = cur
            cur = nxt
            nxt = tmp
    return np.asarray(cur), np.asarray(prev), series


cdef extern from "math.h" nogil:
    double sin(double)
    double cos(double)


def phase_rotate(double complex[::1] u, double[::1] offset, double coef):
    """In place: u *= exp(i (offset + coef |u|^2))."""
    cdef Py_ssize_t i, n = u.shape[0]
    cdef double re, im, ph, c, s
    with nogil:
        for i in range(n):
            re = u[i].real
            im = u[i].imag
            ph = offset[i] + coef * (re * re + im * im)
            c = cos(ph)
            s = sin(ph)
            u[i] = (re * c - im * s) + 1j * (re * s + im * c)
