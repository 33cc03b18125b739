"""Ross-Selinger style Clifford+T synthesis of Rz rotations.

Pipeline per precision eps = 2^-b:
  1. octant reduction: theta = m*(pi/4) + theta', |theta'| <= pi/8; the
     m-part is an exact S/T word, theta' goes through grid search.
  2. for increasing denominator exponent k, enumerate ring candidates
     u in Z[omega] with |u| <= sqrt2^k, |u_galois| <= sqrt2^k and
     Re(conj(z) u) >= sqrt2^k (1 - eps^2/2) for z = e^{-i theta'/2}
     via two nested 1D lattice problems (grid kernel).
  3. for each candidate solve the Diophantine equation t.conj t = xi with
     xi = 2^k - u.conj u over Z[sqrt2] by factoring its integer norm and
     splitting primes in Z[omega] / Z[i] / Z[sqrt-2].
  4. exactly synthesize the resulting ring unitary into H/T/S/X gates.

The candidate constraint guarantees the phase-invariant operator distance
||U - e^{i phi} Rz(theta)|| <= eps.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import mpmath as mp
from sympy import factorint
from sympy.ntheory.residue_ntheory import sqrt_mod

from .rings import (
    RingError, ZI, ZOmega, ZRootM2, ZSqrt2,
    ZO_DELTA, ZO_ONE, ZO_SQRT2, ZO_ZERO, ZS_ONE,
    zi_gcd, zi_to_zomega, zm2_gcd, zm2_to_zomega,
    zo_div_exact, zo_div_sqrt2, zo_gcd, zo_sqrt2_divisible, zo_from_zsqrt2,
    zs_div_exact, zs_divides, zs_gcd, zs_lambda_power, zs_sqrt2_valuation,
)

try:  # compiled kernel if the extension built; pure-Python twin otherwise
    from . import _gridcore as _core
except ImportError:  # pragma: no cover - depends on build environment
    from . import _gridcore_py as _core

GRID_BACKEND = _core.BACKEND

SQRT2 = math.sqrt(2.0)


class SynthesisError(RuntimeError):
    pass


def set_grid_backend(name: str) -> None:
    """Force 'python' or 'cython' kernel (benchmark/testing hook)."""
    global _core, GRID_BACKEND
    if name == "python":
        from . import _gridcore_py as core
    elif name == "cython":
        from . import _gridcore as core
    else:
        raise ValueError(f"unknown grid backend {name!r}")
    _core = core
    GRID_BACKEND = core.BACKEND


def solve_grid_1d(l1: float, u1: float, l2: float, u2: float) -> List[ZSqrt2]:
    """All x in Z[sqrt2] with value in [l1,u1] and conjugate in [l2,u2].

    Intervals are padded slightly outward by the kernel, so callers must
    verify candidates exactly; no valid solution is missed at float scale.
    """
    j, sols = _core.scaled_solutions(l1, u1, l2, u2)
    if not sols:
        return []
    back = zs_lambda_power(-j)
    return [ZSqrt2(a, b) * back for a, b in sols]


# ---------------------------------------------------------------------------
# Diophantine: t.conj * t = xi over Z[omega], xi in Z[sqrt2] totally >= 0


def _zo_pow(u: ZOmega, e: int) -> ZOmega:
    out = ZO_ONE
    while e:
        if e & 1:
            out = out * u
        u = u * u
        e >>= 1
    return out


def _zs_valuation(x: ZSqrt2, p: ZSqrt2) -> Tuple[int, ZSqrt2]:
    v = 0
    while zs_divides(p, x):
        x = zs_div_exact(x, p)
        v += 1
    return v, x


def _split_prime_1mod8(pi: ZSqrt2, p: int) -> Optional[ZOmega]:
    """t with t.conj*t an associate of pi, for p = 1 (mod 8)."""
    y4 = sqrt_mod(p - 1, p)          # order-4 element
    if y4 is None:
        return None
    pio = zo_from_zsqrt2(pi)
    for y2 in (y4, p - y4):
        y0 = sqrt_mod(y2, p)
        if y0 is None:
            continue
        for y in (y0, p - y0):
            cand = zo_gcd(pio, ZOmega(-y, 1, 0, 0))   # gcd(pi, w - y)
            if cand.is_zero():
                continue
            try:
                q = cand.abs_sq()
            except RingError:
                continue
            if abs(q.norm()) != abs(pi.norm()):
                continue
            if zs_divides(pi, q) and zs_divides(q, pi):
                return cand
    return None


def solve_diophantine(xi: ZSqrt2) -> Optional[ZOmega]:
    if xi.is_zero():
        return ZO_ZERO
    if not xi.totally_positive():
        return None
    m, xi0 = zs_sqrt2_valuation(xi)
    t = _zo_pow(ZO_DELTA, m)
    # norm can be negative (odd sqrt2 valuation); sign lands in the unit fix
    N = abs(xi0.norm())
    for p, f in factorint(N).items():
        r = p % 8
        if r in (1, 7):
            x0 = sqrt_mod(2, p)
            if x0 is None:
                return None
            pi = zs_gcd(ZSqrt2(p, 0), ZSqrt2(x0, -1))
            if abs(pi.norm()) != p:
                return None
            v1, _ = _zs_valuation(xi0, pi)
            v2, _ = _zs_valuation(xi0, pi.conj())
            if v1 + v2 != f:
                return None
            if r == 1:
                tp = _split_prime_1mod8(pi, p)
                if tp is None:
                    return None
                t = t * _zo_pow(tp, v1) * _zo_pow(tp.galois(), v2)
            else:  # r == 7: pi contributes only in even powers
                if v1 % 2 or v2 % 2:
                    return None
                t = t * _zo_pow(zo_from_zsqrt2(pi), v1 // 2)
                t = t * _zo_pow(zo_from_zsqrt2(pi.conj()), v2 // 2)
        else:  # p inert in Z[sqrt2]
            if f % 2:
                return None
            v = f // 2
            if r == 5:
                c0 = sqrt_mod(p - 1, p)
                if c0 is None:
                    return None
                eta = zi_gcd(ZI(p, 0), ZI(c0, -1))
                if eta.norm() != p:
                    return None
                t = t * _zo_pow(zi_to_zomega(eta), v)
            else:  # r == 3
                c0 = sqrt_mod(p - 2, p)
                if c0 is None:
                    return None
                eta = zm2_gcd(ZRootM2(p, 0), ZRootM2(c0, -1))
                if eta.norm() != p:
                    return None
                t = t * _zo_pow(zm2_to_zomega(eta), v)
    # fix the remaining totally positive unit lambda^{2m'}
    try:
        s = zs_div_exact(xi, t.abs_sq())
    except RingError:
        return None
    if abs(s.norm()) != 1 or not s.totally_positive():
        return None
    mm = round(math.log(max(s.value(), 1e-300)) / (2 * math.log(1 + SQRT2)))
    for cand in (mm, mm - 1, mm + 1, mm - 2, mm + 2):
        if zs_lambda_power(2 * cand) == s:
            t = t * zo_from_zsqrt2(zs_lambda_power(cand))
            break
    else:
        return None
    if t.abs_sq() != xi:
        return None
    return t


# ---------------------------------------------------------------------------
# Exact synthesis of ring unitaries into gate tags (temporal order)

_T_WORD = {
    0: [], 1: ["T"], 2: ["S"], 3: ["S", "T"],
    4: ["S", "S"], 5: ["Sdg", "Tdg"], 6: ["Sdg"], 7: ["Tdg"],
}


@dataclass(frozen=True)
class RingMatrix:
    """(1/sqrt2^k) [[m00, m01], [m10, m11]] with Z[omega] entries."""
    m00: ZOmega
    m01: ZOmega
    m10: ZOmega
    m11: ZOmega
    k: int

    def value(self):
        import numpy as np
        s = SQRT2 ** self.k
        return np.array([[self.m00.value(), self.m01.value()],
                         [self.m10.value(), self.m11.value()]], dtype=complex) / s


def _strip_matrix(m: RingMatrix) -> RingMatrix:
    while m.k > 0 and all(zo_sqrt2_divisible(x)
                          for x in (m.m00, m.m01, m.m10, m.m11)):
        m = RingMatrix(zo_div_sqrt2(m.m00), zo_div_sqrt2(m.m01),
                       zo_div_sqrt2(m.m10), zo_div_sqrt2(m.m11), m.k - 1)
    return m


def _reduce_column(u: ZOmega, t: ZOmega, k: int) -> List[int]:
    """j-sequence of H T^{-j} steps taking the unit column (u,t)/sqrt2^k
    down to denominator exponent 0.

    A single step does not always shrink k (small-k plateaus exist), so this
    runs best-first search over the four residue choices with a visited set;
    termination is guaranteed because the reachable states at bounded
    exponent are finite and a Clifford+T word for any ring unitary exists.
    """
    stack = [(u, t, k, [])]
    seen = set()
    while stack:
        u, t, k, seq = stack.pop()
        if k == 0:
            return seq
        key = (u, t, k)
        if key in seen:
            continue
        seen.add(key)
        opts = []
        for j in range(4):
            s = u + t.mul_omega(8 - j)
            if not zo_sqrt2_divisible(s):
                continue
            d = u - t.mul_omega(8 - j)
            # divisibility of the sum implies it for the difference (= 2u - s)
            u2, t2, k2 = zo_div_sqrt2(s), zo_div_sqrt2(d), k
            while k2 > 0 and zo_sqrt2_divisible(u2) and zo_sqrt2_divisible(t2):
                u2, t2, k2 = zo_div_sqrt2(u2), zo_div_sqrt2(t2), k2 - 1
            opts.append((k2, j, u2, t2))
        # push worst option first so the lowest exponent is explored next
        for k2, j, u2, t2 in sorted(opts, reverse=True):
            stack.append((u2, t2, k2, seq + [j]))
    raise SynthesisError("column reduction failed (input not unitary?)")


def exact_synthesize(mat: RingMatrix) -> List[str]:
    """Gate tags (temporal order) realizing mat up to global phase."""
    # reduce the first column by H T^{-j} steps, accumulating G exactly
    u, t, k = mat.m00, mat.m10, mat.k
    while k > 0 and zo_sqrt2_divisible(u) and zo_sqrt2_divisible(t):
        u, t, k = zo_div_sqrt2(u), zo_div_sqrt2(t), k - 1
    seq = _reduce_column(u, t, k)
    # apply the recorded steps to the full matrix exactly to get the residual
    g = RingMatrix(ZO_ONE, ZO_ZERO, ZO_ZERO, ZO_ONE, 0)
    for j in seq:
        w = ZO_ONE.mul_omega(8 - j)
        r0 = (g.m00 + w * g.m10, g.m01 + w * g.m11)
        r1 = (g.m00 - w * g.m10, g.m01 - w * g.m11)
        g = RingMatrix(r0[0], r0[1], r1[0], r1[1], g.k + 1)
    res = RingMatrix(
        g.m00 * mat.m00 + g.m01 * mat.m10,
        g.m00 * mat.m01 + g.m01 * mat.m11,
        g.m10 * mat.m00 + g.m11 * mat.m10,
        g.m10 * mat.m01 + g.m11 * mat.m11,
        g.k + mat.k)
    res = _strip_matrix(res)
    if res.k != 0:
        raise SynthesisError("residual is not a Clifford phase matrix")
    gates: List[str] = []
    if res.m00.is_zero():
        a = res.m01.unit_log()
        c = res.m10.unit_log()
        gates += _T_WORD[(a - c) % 8]   # diag part of X * res
        gates.append("PauliX")
    else:
        a = res.m00.unit_log()
        c = res.m11.unit_log()
        gates += _T_WORD[(c - a) % 8]
    for j in reversed(seq):
        gates.append("Hadamard")
        gates += {0: [], 1: ["T"], 2: ["S"], 3: ["S", "T"]}[j]
    return gates


# ---------------------------------------------------------------------------
# Candidate enumeration and the top-level Rz synthesis


def _candidates(k: int, phi0: float, eps: float) -> List[ZOmega]:
    R = SQRT2 ** k
    c0, s0 = math.cos(phi0), math.sin(phi0)
    slo = R * (1 - eps * eps / 2)
    delta = math.acos(max(-1.0, 1 - eps * eps / 2))
    ys = (R * math.sin(phi0 - delta), R * math.sin(phi0 + delta))
    y_lo, y_hi = min(ys), max(ys)
    out: List[Tuple[float, ZOmega]] = []
    for Y in solve_grid_1d(SQRT2 * y_lo, SQRT2 * y_hi, -SQRT2 * R, SQRT2 * R):
        yv = Y.value() / SQRT2
        ycv = Y.conj().value() / SQRT2        # = -Im(u_galois)
        rem = R * R - yv * yv
        if rem < 0:
            continue
        x_hi = math.sqrt(rem)
        x_lo = (slo - yv * s0) / c0
        if x_lo > x_hi:
            continue
        remc = R * R - ycv * ycv
        if remc < 0:
            continue
        bx = math.sqrt(remc)
        p = Y.a & 1
        g_lo = x_lo - p / SQRT2
        g_hi = x_hi - p / SQRT2
        gc = (p / SQRT2 + bx, p / SQRT2 - bx)
        for gam in solve_grid_1d(g_lo, g_hi, min(gc), max(gc)):
            e = p + 2 * gam.b
            aa = gam.a
            f, cc = Y.a, Y.b
            if (e - f) % 2:
                continue
            u = ZOmega(aa, (e + f) // 2, cc, (f - e) // 2)
            # cheap float prefilter on the quality constraint (margin for
            # float error; survivors are re-verified in high precision)
            half = SQRT2 / 2
            ur = aa + (u.b - u.d) * half
            ui = cc + (u.b + u.d) * half
            q = (ur * c0 + ui * s0) / R
            if q < (1 - eps * eps / 2) - 1e-11 * (1 + abs(q)):
                continue
            out.append((q, u))
    # exact feasibility and high-precision quality check
    verified: List[Tuple[float, ZOmega]] = []
    with mp.workdps(30 + 2 * k):
        zc = mp.exp(mp.mpc(0, -1) * mp.mpf(phi0))
        Rm = mp.sqrt(2) ** k
        thr = 1 - mp.mpf(eps) ** 2 / 2
        for _, u in out:
            xi = ZSqrt2(1 << k, 0) - u.abs_sq()
            if xi.sign() < 0 or xi.conj().sign() < 0:
                continue
            q = mp.re(zc * u.mpvalue(mp)) / Rm
            if q >= thr:
                verified.append((float(q), u))
    verified.sort(key=lambda t: -t[0])
    return [u for _, u in verified]


def synthesize_rz_tags(theta: float, eps: float,
                       max_attempts_per_k: int = 16) -> List[str]:
    """Clifford+T tag sequence U with min_phi ||U - e^{i phi} Rz(theta)|| <= eps.

    Exact pi/4 multiples return the minimal S/T word with zero error.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    eps = min(eps, 1.0)
    theta = math.remainder(theta, 4 * math.pi)
    mth = round(theta / (math.pi / 4))
    if abs(theta - mth * (math.pi / 4)) <= 1e-12:
        return list(_T_WORD[mth % 8])
    theta_p = theta - mth * (math.pi / 4)
    phi0 = -theta_p / 2
    k = max(0, int(1.5 * math.log2(1 / eps)) - 2)
    k_cap = int(3 * math.log2(1 / eps)) + 40
    while k <= k_cap:
        for u in _candidates(k, phi0, eps)[:max_attempts_per_k]:
            xi = ZSqrt2(1 << k, 0) - u.abs_sq()
            t = solve_diophantine(xi)
            if t is None:
                continue
            matu = RingMatrix(u, -t.conj(), t, u.conj(), k)
            gates = exact_synthesize(matu)
            return gates + _T_WORD[mth % 8]
        k += 1
    raise SynthesisError(f"no candidate found up to k={k_cap}")


# ---------------------------------------------------------------------------
# Exact preparability of real single-qubit states (ring membership test)

K_MAX = 32


def _identify_zsqrt2(value: float, conj_bound: float, tol: float) -> List[ZSqrt2]:
    return [x for x in solve_grid_1d(value - tol, value + tol,
                                     -conj_bound, conj_bound)
            if abs(x.value() - value) <= tol]


def exactly_preparable(alpha0: float, alpha1: float,
                       k_max: int = K_MAX) -> Tuple[bool, Optional[int]]:
    """Is (alpha0, alpha1) (real, unit norm) a Clifford+T-reachable state?

    Searches phases w = e^{i j pi/8}, j = 0..15, and denominator exponents
    k <= k_max for exact ring members u0, u1 in Z[omega] with
    u0/sqrt2^k = w*alpha0, u1/sqrt2^k = w*alpha1 and |u0|^2 + |u1|^2 = 2^k
    (checked in exact integer arithmetic).  Returns (found, phase index).

    The phase class e^{i j pi/8} is exhaustive for real pairs: any ring
    member pair that is real up to a phase has (w alpha0)^2 + (w alpha1)^2 =
    w^2 a unit-modulus ring element, hence an 8th root of unity.
    """
    if abs(alpha0 * alpha0 + alpha1 * alpha1 - 1.0) > 1e-9:
        raise ValueError("state must be normalized")
    for j in range(16):
        ph = complex(math.cos(j * math.pi / 8), math.sin(j * math.pi / 8))
        w0, w1 = ph * alpha0, ph * alpha1
        for k in range(k_max + 1):
            scale = SQRT2 ** (k + 1)           # X = sqrt2 * component * sqrt2^k
            bound = 2.0 * SQRT2 * SQRT2 ** k   # generous conjugate bound
            tol = 1e-12 * (1.0 + scale)
            comps = [w0.real, w0.imag, w1.real, w1.imag]
            cands: List[List[ZSqrt2]] = []
            ok = True
            for v in comps:
                found = _identify_zsqrt2(v * scale, bound, tol)
                if not found:
                    ok = False
                    break
                cands.append(found)
            if not ok:
                continue
            for X0 in cands[0]:
                for Y0 in cands[1]:
                    if (X0.a - Y0.a) % 2:
                        continue
                    u0 = ZOmega(X0.b, (X0.a + Y0.a) // 2,
                                Y0.b, (Y0.a - X0.a) // 2)
                    for X1 in cands[2]:
                        for Y1 in cands[3]:
                            if (X1.a - Y1.a) % 2:
                                continue
                            u1 = ZOmega(X1.b, (X1.a + Y1.a) // 2,
                                        Y1.b, (Y1.a - X1.a) // 2)
                            if u0.abs_sq() + u1.abs_sq() != ZSqrt2(1 << k, 0):
                                continue
                            with mp.workdps(40 + k):
                                s = mp.sqrt(2) ** k
                                d0 = abs(u0.mpvalue(mp) / s - mp.mpc(w0))
                                d1 = abs(u1.mpvalue(mp) / s - mp.mpc(w1))
                                if d0 < 1e-12 and d1 < 1e-12:
                                    return True, j
    return False, None
