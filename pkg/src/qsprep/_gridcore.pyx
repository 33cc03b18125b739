# cython: language_level=3, boundscheck=False, cdivision=True
"""Cython grid kernel: 1D two-interval lattice enumeration in Z[sqrt2].

Same interface and semantics as _gridcore_py (the pure-Python twin); see
that module for the algorithm description.
"""
from libc.math cimport ceil, exp, floor, log, sqrt

BACKEND = "cython"

cdef double _SQRT2 = sqrt(2.0)
cdef double _LOG_LAMBDA = log(1.0 + sqrt(2.0))


def scaled_solutions(double l1, double u1, double l2, double u2,
                     long limit=2_000_000):
    """Return (j, [(a, b), ...]) in lambda^j-scaled coordinates."""
    cdef double w1 = u1 - l1
    cdef double w2 = u2 - l2
    cdef long j = 0
    cdef double s1, s2, a1, b1, a2, b2, tmp, pad1, pad2, r
    cdef double tsq = 2.0 * _SQRT2
    cdef long b_lo, b_hi, b, alo, ahi, a

    if w1 < 0.0 or w2 < 0.0:
        return 0, []
    if w1 > 0.0 and w2 > 0.0:
        j = <long>floor(log(w2 / w1) / (2.0 * _LOG_LAMBDA) + 0.5)
    s1 = exp(j * _LOG_LAMBDA)
    s2 = exp(-j * _LOG_LAMBDA)
    if j & 1:
        s2 = -s2
    a1 = l1 * s1
    b1 = u1 * s1
    a2 = l2 * s2
    b2 = u2 * s2
    if a2 > b2:
        tmp = a2
        a2 = b2
        b2 = tmp
    pad1 = 1e-10 * ((a1 if a1 >= 0 else -a1) + (b1 if b1 >= 0 else -b1) + 1.0)
    pad2 = 1e-10 * ((a2 if a2 >= 0 else -a2) + (b2 if b2 >= 0 else -b2) + 1.0)
    a1 -= pad1
    b1 += pad1
    a2 -= pad2
    b2 += pad2

    b_lo = <long>ceil((a1 - b2) / tsq)
    b_hi = <long>floor((b1 - a2) / tsq)
    if b_hi - b_lo > limit:
        raise RuntimeError("grid enumeration too large")
    out = []
    for b in range(b_lo, b_hi + 1):
        r = b * _SQRT2
        alo = <long>ceil(max2(a1 - r, a2 + r))
        ahi = <long>floor(min2(b1 - r, b2 + r))
        for a in range(alo, ahi + 1):
            out.append((a, b))
    return j, out


cdef inline double max2(double x, double y):
    return x if x > y else y


cdef inline double min2(double x, double y):
    return x if x < y else y
