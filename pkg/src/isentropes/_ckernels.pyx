# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_pykernels.py`` for the reference versions."""
import numpy as np
cimport numpy as cnp
from libc.math cimport log, fabs

cnp.import_array()

cdef double RESCALE_ABOVE = 1e200
cdef double RESCALE_BY = 1e-200
cdef double NEGATIVE_SLACK = 1e-9
cdef double CRIT_TOL = 1e-12

cdef enum:
    CONVERGED = 0
    EXHAUSTED = 1
    INCONSISTENT = 2
    TENT = 0
    LOGISTIC = 1

cdef double LOG_RESCALE = 200.0 * log(10.0)


def lap_log_sequence(bad, double epsilon, Py_ssize_t n_min=2):
    cdef const unsigned char[:, :, ::1] b = np.ascontiguousarray(bad, dtype=np.uint8)
    cdef Py_ssize_t n_steps = b.shape[0], l = b.shape[1]
    cdef double[:, ::1] s = np.zeros((n_steps + 1, l))
    cdef double[::1] big_s = np.zeros(l)
    cdef double[::1] logs = np.zeros(n_steps + 1)
    cdef double cum = 1.0 + l, log_scale = 0.0, acc, s_tot, big_tot, v
    cdef Py_ssize_t n, i, j, k, m
    cdef int status = EXHAUSTED
    cdef Py_ssize_t done = n_steps

    for k in range(l):
        s[0, k] = 1.0
    for n in range(1, n_steps + 1):
        s_tot = 0.0
        big_tot = 0.0
        for i in range(l):
            acc = 0.0
            for j in range(1, n + 1):
                for k in range(l):
                    if b[j - 1, i, k]:
                        acc += s[n - j, k]
            big_s[i] = 2.0 * acc
        for i in range(l):
            v = cum - big_s[i]
            if v < -NEGATIVE_SLACK * cum:
                return np.asarray(logs[:n]), INCONSISTENT
            if v < 0.0:
                v = 0.0
            s[n, i] = v
            s_tot += v
            big_tot += big_s[i]
        if fabs((s_tot + big_tot) / l - cum) > NEGATIVE_SLACK * cum:
            return np.asarray(logs[:n]), INCONSISTENT
        logs[n] = log(cum) + log_scale
        if n >= n_min and n >= 2 and fabs(logs[n] / n - logs[n - 1] / (n - 1)) < epsilon:
            status = CONVERGED
            done = n
            break
        cum += s_tot
        if cum > RESCALE_ABOVE:
            for m in range(n + 1):
                for k in range(l):
                    s[m, k] *= RESCALE_BY
            cum *= RESCALE_BY
            log_scale += LOG_RESCALE
    return np.asarray(logs[:done + 1]), status


cdef inline double _apply(int kind, double p, double x) nogil:
    cdef double y
    if kind == TENT:
        y = p * (0.5 - fabs(x - 0.5))
    else:
        y = p * x * (1.0 - x)
    if y < 0.0:
        return 0.0
    if y > 1.0:
        return 1.0
    return y


def ditinerary_codes(int kind1, double p1, int kind2, double p2, double x0,
                     int start_track, Py_ssize_t n_sym):
    out = np.empty(n_sym, dtype=np.int8)
    cdef signed char[::1] codes = out
    cdef double x = x0
    cdef int track = start_track
    cdef Py_ssize_t j
    for j in range(n_sym):
        if fabs(x - 0.5) < CRIT_TOL:
            codes[j] = 1
        elif x < 0.5:
            codes[j] = 0
        else:
            codes[j] = 2
        if track == 1:
            x = _apply(kind1, p1, x)
            track = 2
        else:
            x = _apply(kind2, p2, x)
            track = 1
    return out


def compare_codes(const signed char[::1] s, const signed char[::1] t):
    cdef int sign = 1
    cdef Py_ssize_t j, n = min(s.shape[0], t.shape[0])
    for j in range(n):
        if s[j] != t[j]:
            return sign if s[j] > t[j] else -sign
        if s[j] == 1:
            return 0
        if s[j] == 2:
            sign = -sign
    return 0
