"""Dense and sparse rotation-based state preparation.

Dense: qubit-reduction loop.  Pick the pivot minimizing occupied-branch
imbalance, build the angle table theta_y = 2*atan2(a1(y), a0(y)) over the
other varying qubits, prune controls the table is constant on, merge branch
pairs into sqrt(a0^2 + a1^2), and finally emit the recorded uniformly
controlled Ry gates (demultiplexed to Ry/CNOT) in reverse order.

Sparse: cardinality-reduction loop.  Greedily fix informative bits until one
occupied index remains, pick a compatible partner, align the pair with CNOTs
so it differs on a single qubit, and merge with a multi-controlled Ry whose
polarity mask encodes negative controls.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .circuit_core import Circuit, Gate

_NORM_TOL = 1e-12
_ANGLE_TOL = 1e-12


class StateValidationError(ValueError):
    pass


@dataclass(frozen=True)
class TargetState:
    n: int
    amplitudes: Dict[int, float]   # sparse: only nonzero entries

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", dict(self.amplitudes))
        if any(j < 0 or j >= (1 << self.n) for j in self.amplitudes):
            raise StateValidationError("basis index out of range")
        if any(a == 0 for a in self.amplitudes.values()):
            raise StateValidationError("stored support must be nonzero entries")
        norm = sum(a * a for a in self.amplitudes.values())
        if abs(norm - 1.0) > 1e-10:
            raise StateValidationError(f"state norm^2 = {norm}, not 1")

    @property
    def support(self) -> List[int]:
        return sorted(self.amplitudes)

    def to_vector(self) -> np.ndarray:
        v = np.zeros(1 << self.n)
        for j, a in self.amplitudes.items():
            v[j] = a
        return v

    def probabilities(self) -> np.ndarray:
        return self.to_vector() ** 2

    @staticmethod
    def from_vector(vec: Sequence[float], tol: float = 1e-14) -> "TargetState":
        vec = np.asarray(vec, dtype=float)
        n = int(round(math.log2(len(vec))))
        if 1 << n != len(vec):
            raise StateValidationError("vector length must be a power of two")
        amps = {int(j): float(vec[j]) for j in np.nonzero(np.abs(vec) > tol)[0]}
        return TargetState(n, amps)


def _bit(j: int, q: int, n: int) -> int:
    return (j >> (n - 1 - q)) & 1


def choose_pivot(support: Sequence[int], n: int,
                 qubits: Optional[Sequence[int]] = None) -> Optional[int]:
    """Qubit minimizing |#(bit=0) - #(bit=1)| over occupied indices.

    Ties break toward the lowest index.  Returns None when the support is
    constant on every candidate qubit (singleton support).
    """
    support = list(support)
    if not support:
        raise StateValidationError("empty support")
    cand = list(qubits) if qubits is not None else list(range(n))
    best, best_imb = None, None
    varying = False
    for q in cand:
        ones = sum(_bit(j, q, n) for j in support)
        zeros = len(support) - ones
        if ones and zeros:
            varying = True
        imb = abs(zeros - ones)
        if best_imb is None or imb < best_imb:
            best, best_imb = q, imb
    if not varying:
        return None
    return best


@dataclass(frozen=True)
class AngleTable:
    pivot: int
    controls: Tuple[int, ...]     # controls[0] is the MSB of the pattern y
    thetas: Tuple[float, ...]     # length 2^len(controls); theta_y in (-2pi, 2pi]


def build_angle_table(state: TargetState, pivot: int,
                      controls: Optional[Sequence[int]] = None) -> AngleTable:
    """theta_y = 2*atan2(a1(y), a0(y)); absent branches give theta = 0."""
    n = state.n
    if controls is None:
        varying = _varying_qubits(state.amplitudes, n)
        controls = [q for q in varying if q != pivot]
    return _table_from_dict(state.amplitudes, n, pivot, controls)


def prune_constant_controls(table: AngleTable, tol: float = _ANGLE_TOL) -> AngleTable:
    controls, thetas = list(table.controls), list(table.thetas)
    changed = True
    while changed and controls:
        changed = False
        c = len(controls)
        for i in range(c):
            stride = 1 << (c - 1 - i)
            const = all(
                abs(thetas[y] - thetas[y | stride]) <= tol
                for y in range(1 << c) if not y & stride)
            if const:
                thetas = [thetas[y] for y in range(1 << c) if not y & stride]
                controls.pop(i)
                changed = True
                break
    return AngleTable(table.pivot, tuple(controls), tuple(thetas))


def demux_ucry(table: AngleTable) -> List[Gate]:
    """Gray-code demultiplexing: 2^c Ry + 2^c CNOT implementing the table."""
    def rec(thetas: Sequence[float], ctrls: Sequence[int]) -> List[Gate]:
        if not ctrls:
            return [Gate("Ry", (table.pivot,), angle=thetas[0])]
        half = len(thetas) // 2
        t0, t1 = thetas[:half], thetas[half:]
        left = [(x + y) / 2 for x, y in zip(t0, t1)]
        right = [(x - y) / 2 for x, y in zip(t0, t1)]
        q = ctrls[0]
        out = rec(left, ctrls[1:])
        out.append(Gate("CNOT", (q, table.pivot)))
        out += rec(right, ctrls[1:])
        out.append(Gate("CNOT", (q, table.pivot)))
        return out

    if not table.controls and abs(table.thetas[0]) <= 1e-15:
        return []
    return rec(list(table.thetas), list(table.controls))


def _varying_qubits(amps: Dict[int, float], n: int) -> List[int]:
    support = list(amps)
    return [q for q in range(n)
            if 0 < sum(_bit(j, q, n) for j in support) < len(support)]


def synthesize_dense(state: TargetState, prune: bool = True) -> Circuit:
    """Algorithm: qubit-reduction loop; recorded gates replayed in reverse."""
    n = state.n
    s: Dict[int, float] = dict(state.amplitudes)
    tables: List[AngleTable] = []

    while len(s) > 1:
        varying = _varying_qubits(s, n)
        pivot = choose_pivot(list(s), n, varying)
        if pivot is None:
            # defensive: cannot happen for |s| > 1, fall back to sparse
            return _dense_with_residual(state, tables, s)
        table = _table_from_dict(s, n, pivot, [q for q in varying if q != pivot])
        emitted = prune_constant_controls(table) if prune else table
        tables.append(emitted)
        s = _merge_pivot(s, n, pivot, table)

    gates: List[Gate] = []
    (final_idx,) = s
    for q in range(n):
        if _bit(final_idx, q, n):
            gates.append(Gate("PauliX", (q,)))
    for table in reversed(tables):
        gates.extend(demux_ucry(table))
    return Circuit(n, gates)


def _table_from_dict(s: Dict[int, float], n: int, pivot: int,
                     controls: Sequence[int]) -> AngleTable:
    controls = tuple(controls)
    c = len(controls)
    a0 = [0.0] * (1 << c)
    a1 = [0.0] * (1 << c)
    for j, amp in s.items():
        y = 0
        for q in controls:
            y = (y << 1) | _bit(j, q, n)
        if _bit(j, pivot, n):
            a1[y] = amp
        else:
            a0[y] = amp
    thetas = tuple(2 * math.atan2(x1, x0) if (x0 or x1) else 0.0
                   for x0, x1 in zip(a0, a1))
    return AngleTable(pivot, controls, thetas)


def _merge_pivot(s: Dict[int, float], n: int, pivot: int,
                 table: AngleTable) -> Dict[int, float]:
    mask = 1 << (n - 1 - pivot)
    out: Dict[int, float] = {}
    for j, amp in s.items():
        base = j & ~mask
        if base in out:
            continue
        a0 = s.get(base, 0.0)
        a1 = s.get(base | mask, 0.0)
        out[base] = math.hypot(a0, a1)
    return out


def _dense_with_residual(state: TargetState, tables: List[AngleTable],
                         s: Dict[int, float]) -> Circuit:
    resid = synthesize_sparse(TargetState(state.n, s))
    gates = list(resid.gates)
    for table in reversed(tables):
        gates.extend(demux_ucry(table))
    return Circuit(state.n, gates)


# ---------------------------------------------------------------------------
# Sparse routine


def _greedy_isolate(support: List[int], n: int) -> Tuple[int, List[Tuple[int, int]]]:
    """Fix informative bits until one index remains; return (i0, fixed)."""
    T = list(support)
    fixed: List[Tuple[int, int]] = []
    while len(T) > 1:
        best = None  # (minority_size, bit, val)
        for q in range(n):
            ones = sum(_bit(j, q, n) for j in T)
            zeros = len(T) - ones
            if not ones or not zeros:
                continue
            if zeros <= ones:
                size, val = zeros, 0
            else:
                size, val = ones, 1
            if best is None or size > best[0]:
                best = (size, q, val)
        _, q, val = best
        fixed.append((q, val))
        T = [j for j in T if _bit(j, q, n) == val]
    return T[0], fixed


def synthesize_sparse(state: TargetState) -> Circuit:
    """Algorithm: support-reduction loop, one merge per iteration."""
    n = state.n
    s: Dict[int, float] = dict(state.amplitudes)
    # each record: (cnots, (controls, mask, q, theta) or None for plain Ry)
    records: List[Tuple[List[Tuple[int, int]], Tuple[Tuple[int, ...], Tuple[int, ...], int, float]]] = []

    while len(s) > 1:
        support = sorted(s)
        i0, fixed = _greedy_isolate(support, n)
        q, _v = fixed[-1]
        prefix = fixed[:-1]
        compat = [j for j in support
                  if j != i0 and all(_bit(j, fb, n) == fv for fb, fv in prefix)]
        i1 = min(compat)

        qmask = 1 << (n - 1 - q)
        flip = (i0 ^ i1) & ~qmask
        cnots = [(q, d) for d in range(n) if flip & (1 << (n - 1 - d))]
        if flip:
            s = {(j ^ flip) if j & qmask else j: a for j, a in s.items()}
        j0 = (i0 ^ flip) if i0 & qmask else i0
        j1 = (i1 ^ flip) if i1 & qmask else i1
        assert (j0 ^ j1) == qmask

        # control set: the remaining fixed-bit conditions, extended until the
        # pair is isolated from the rest of the (relabeled) support
        ctrl: Dict[int, int] = {fb: fv for fb, fv in prefix}
        others = [j for j in s if j not in (j0, j1)]
        while True:
            clash = [o for o in others
                     if all(_bit(o, cb, n) == cv for cb, cv in ctrl.items())]
            if not clash:
                break
            for d in range(n):
                if d == q or d in ctrl:
                    continue
                if any(_bit(o, d, n) != _bit(j0, d, n) for o in clash):
                    ctrl[d] = _bit(j0, d, n)
                    break

        idx0, idx1 = (j0, j1) if not j0 & qmask else (j1, j0)
        a0, a1 = s.get(idx0, 0.0), s.get(idx1, 0.0)
        theta = 2 * math.atan2(a1, a0)
        controls = tuple(sorted(ctrl))
        mask = tuple(ctrl[c] for c in controls)
        records.append((cnots, (controls, mask, q, theta)))

        s.pop(idx1, None)
        s.pop(idx0, None)
        s[idx0] = math.hypot(a0, a1)

    gates: List[Gate] = []
    (final_idx,) = s
    for qq in range(n):
        if _bit(final_idx, qq, n):
            gates.append(Gate("PauliX", (qq,)))
    for cnots, (controls, mask, q, theta) in reversed(records):
        if controls:
            gates.append(Gate("MultiControlledRy", controls + (q,),
                              angle=theta, mask=mask))
        else:
            gates.append(Gate("Ry", (q,), angle=theta))
        for c, d in reversed(cnots):
            gates.append(Gate("CNOT", (c, d)))
    return Circuit(n, gates)
