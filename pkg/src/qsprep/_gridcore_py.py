"""Pure-Python grid kernel: 1D two-interval lattice enumeration in Z[sqrt2].

Hot inner loop of Ross-Selinger synthesis.  A Cython twin (_gridcore.pyx)
provides the same interface; gridsynth selects whichever imports.

Solutions x = a + b*sqrt2 with x in [l1, u1] and x.conj = a - b*sqrt2 in
[l2, u2] are found after rebalancing by the unit lambda = 1 + sqrt2 so the
two intervals have comparable width (keeps the b-range short).  The caller
receives the rebalancing exponent j and solutions in *scaled* coordinates;
mapping back by lambda^{-j} must be done exactly in integer arithmetic.
"""
import math

BACKEND = "python"

_SQRT2 = math.sqrt(2.0)
_LOG_LAMBDA = math.log(1.0 + _SQRT2)


def scaled_solutions(l1, u1, l2, u2, limit=2_000_000):
    """Return (j, [(a, b), ...]) in lambda^j-scaled coordinates.

    Scaled problem: a + b*sqrt2 in [l1, u1]*lambda^j and a - b*sqrt2 in
    [l2, u2]*(-1/lambda)^j (endpoints sorted).  Intervals are padded a hair
    outward; callers must verify candidates exactly.
    """
    w1 = u1 - l1
    w2 = u2 - l2
    if w1 < 0.0 or w2 < 0.0:
        return 0, []
    if w1 > 0.0 and w2 > 0.0:
        j = int(round(math.log(w2 / w1) / (2.0 * _LOG_LAMBDA)))
    else:
        j = 0
    s1 = math.exp(j * _LOG_LAMBDA)
    s2 = (-1.0) ** (j & 1) * math.exp(-j * _LOG_LAMBDA)
    a1, b1 = l1 * s1, u1 * s1
    a2, b2 = l2 * s2, u2 * s2
    if a2 > b2:
        a2, b2 = b2, a2
    pad1 = 1e-10 * (abs(a1) + abs(b1) + 1.0)
    pad2 = 1e-10 * (abs(a2) + abs(b2) + 1.0)
    a1 -= pad1
    b1 += pad1
    a2 -= pad2
    b2 += pad2

    tsq = 2.0 * _SQRT2
    b_lo = math.ceil((a1 - b2) / tsq)
    b_hi = math.floor((b1 - a2) / tsq)
    if b_hi - b_lo > limit:
        raise RuntimeError(f"grid enumeration too large: {b_hi - b_lo} rows")
    out = []
    for b in range(b_lo, b_hi + 1):
        r = b * _SQRT2
        alo = math.ceil(max(a1 - r, a2 + r))
        ahi = math.floor(min(b1 - r, b2 + r))
        for a in range(alo, ahi + 1):
            out.append((a, b))
    return j, out
