"""Lowering of logical circuits to explicit Clifford+T gate streams.

Rotations route through exact synthesis when the angle is a multiple of
pi/4 (minimal S/T word, zero error) and through grid-based approximate
synthesis otherwise.  Ry rewrites to an Rz conjugated by the Clifford
S.H basis change; controlled rotations use the standard two-rotation
split; Toffolis and multi-controlled gates lower through temporary-AND
ancilla chains (4 T each in the measured-uncompute model, 7 in the
textbook decomposition).

A documented fallback ("cost-model") keeps large resource sweeps cheap:
instead of synthesizing, each residual Rz stays in the output as a
placeholder and is charged ceil(3*log2(1/eps)) + 11 T gates.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .circuit_core import (
    Circuit, CircuitError, Gate, ResourceReport, count_resources,
    is_pi4_multiple,
)
from .gridsynth import exactly_preparable as _exactly_preparable_floats
from .gridsynth import synthesize_rz_tags
from .rings import ZOmega
from .rotation_synthesis import AngleTable, demux_ucry


class CompileError(ValueError):
    """Bad parameter or unloweable gate tag."""


TOFFOLI_MODES = ("gidney_and_measured", "textbook_7T")
RZ_MODES = ("gridsynth", "cost-model")


@dataclass(frozen=True)
class SynthesisConfig:
    b: int = 10                                  # eps = 2^-b
    toffoli_mode: str = "gidney_and_measured"
    rz_mode: str = "gridsynth"

    def __post_init__(self):
        if self.b < 1:
            raise CompileError("precision bits b must be >= 1")
        if self.toffoli_mode not in TOFFOLI_MODES:
            raise CompileError(f"unknown toffoli mode {self.toffoli_mode!r}")
        if self.rz_mode not in RZ_MODES:
            raise CompileError(f"unknown rz mode {self.rz_mode!r}")

    @property
    def eps(self) -> float:
        return 2.0 ** (-self.b)


def cost_model_t_count(eps: float) -> int:
    """Placeholder T-count charged per rotation in cost-model mode."""
    return math.ceil(3 * math.log2(1 / eps)) + 11


# ---------------------------------------------------------------------------
# Ring elements of Z[i, 1/sqrt2]


def _gcd_pow2_sqrt2(a: int, b: int, c: int, d: int, k: int) -> Tuple[int, ...]:
    # divide (a + b sqrt2 + i c + i d sqrt2)/sqrt2^k by sqrt2/sqrt2 while k>0:
    # needs a, c even; quotient coefficients (b, a/2, d, c/2)
    while k > 0 and a % 2 == 0 and c % 2 == 0:
        a, b, c, d, k = b, a // 2, d, c // 2, k - 1
    return a, b, c, d, k


@dataclass(frozen=True)
class RingElement:
    """(a + b*sqrt2 + i*c + i*d*sqrt2) / sqrt2^k, canonicalized."""
    a: int
    b: int
    c: int
    d: int
    k: int = 0

    def __post_init__(self):
        if self.k < 0:
            raise CompileError("denominator exponent must be >= 0")
        a, b, c, d, k = _gcd_pow2_sqrt2(self.a, self.b, self.c, self.d, self.k)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "k", k)

    @property
    def is_real(self) -> bool:
        return self.c == 0 and self.d == 0

    def value(self) -> complex:
        s = math.sqrt(2.0)
        num = complex(self.a + self.b * s, self.c + self.d * s)
        return num / s ** self.k

    def numerator_zomega(self) -> ZOmega:
        return ZOmega(self.a, self.b + self.d, self.c, self.d - self.b)

    @staticmethod
    def from_zomega(u: ZOmega, k: int = 0) -> "RingElement":
        # u = a' + (b'-d')/sqrt2 + i c' + i (b'+d')/sqrt2; rescale by sqrt2
        # when the omega/omega^3 parts do not split over integer sqrt2 coeffs
        if (u.b - u.d) % 2:
            from .rings import ZO_SQRT2
            u = u * ZO_SQRT2
            k += 1
        return RingElement(u.a, (u.b - u.d) // 2, u.c, (u.b + u.d) // 2, k)


def exactly_preparable(alpha0: Union[float, RingElement],
                       alpha1: Union[float, RingElement],
                       k_max: int = 32) -> Tuple[bool, Optional[int]]:
    """Ancilla-free Clifford+T preparability of a real two-amplitude pair.

    Ring-form inputs are members by construction (phase class 0); float
    inputs are matched against ring candidates at denominator exponent
    <= k_max under phases e^{i j pi/8}.
    """
    if isinstance(alpha0, RingElement) and isinstance(alpha1, RingElement):
        if not (alpha0.is_real and alpha1.is_real):
            raise CompileError("ring inputs must be real")
        v0, v1 = alpha0.value().real, alpha1.value().real
        if abs(v0 * v0 + v1 * v1 - 1.0) > 1e-9:
            raise CompileError("state must be normalized")
        return True, 0
    return _exactly_preparable_floats(float(alpha0), float(alpha1), k_max)


# ---------------------------------------------------------------------------
# Single-rotation synthesis

# memo shared across compile calls; guarded for concurrent use
_MEMO: Dict[Tuple[float, float], Tuple[str, ...]] = {}
_MEMO_LOCK = threading.Lock()


def _rz_tags(theta: float, eps: float) -> Tuple[str, ...]:
    key = (theta, eps)
    with _MEMO_LOCK:
        hit = _MEMO.get(key)
    if hit is not None:
        return hit
    tags = tuple(synthesize_rz_tags(theta, eps))
    with _MEMO_LOCK:
        _MEMO[key] = tags
    return tags


def synthesize_rz(theta: float, eps: float, mode: str = "gridsynth") -> Circuit:
    """Single-qubit Clifford+T circuit within eps of Rz(theta) (up to phase).

    Exact pi/4 multiples emit the minimal S/T word with zero error.  In
    "cost-model" mode non-exact angles stay as an Rz placeholder gate.
    """
    if not (0 < eps <= 1):
        raise CompileError("eps must be in (0, 1]")
    if mode not in RZ_MODES:
        raise CompileError(f"unknown rz mode {mode!r}")
    if mode == "cost-model" and not is_pi4_multiple(theta):
        return Circuit(1, [Gate("Rz", (0,), angle=theta)])
    gates = [Gate(tag, (0,)) for tag in _rz_tags(theta, eps)]
    return Circuit(1, gates)


def rewrite_ry(theta: float, eps: float, mode: str = "gridsynth") -> Circuit:
    """Ry(theta) as the Clifford conjugation S.H * Rz(theta) * H.Sdg."""
    rz = synthesize_rz(theta, eps, mode)
    gates = [Gate("Sdg", (0,)), Gate("Hadamard", (0,))]
    gates += rz.gates
    gates += [Gate("Hadamard", (0,)), Gate("S", (0,))]
    return Circuit(1, gates)


# ---------------------------------------------------------------------------
# Toffoli / temporary-AND lowering

def _and_compute(a: int, b: int, anc: int) -> List[Gate]:
    # temporary AND: |a,b,0> -> |a,b,ab> exactly, 4 T gates
    g = Gate
    return [
        g("Hadamard", (anc,)), g("T", (anc,)),
        g("CNOT", (a, anc)), g("CNOT", (b, anc)),
        g("CNOT", (anc, a)), g("CNOT", (anc, b)),
        g("Tdg", (a,)), g("Tdg", (b,)), g("T", (anc,)),
        g("CNOT", (anc, a)), g("CNOT", (anc, b)),
        g("Hadamard", (anc,)), g("S", (anc,)),
    ]


def _toffoli_7t(a: int, b: int, t: int) -> List[Gate]:
    g = Gate
    return [
        g("Hadamard", (t,)), g("CNOT", (b, t)), g("Tdg", (t,)),
        g("CNOT", (a, t)), g("T", (t,)), g("CNOT", (b, t)),
        g("Tdg", (t,)), g("CNOT", (a, t)), g("T", (b,)), g("T", (t,)),
        g("Hadamard", (t,)), g("CNOT", (a, b)), g("T", (a,)),
        g("Tdg", (b,)), g("CNOT", (a, b)),
    ]


def lower_toffoli(a: int, b: int, t: int, anc: int,
                  mode: str = "gidney_and_measured") -> List[Gate]:
    """One Toffoli as explicit gates; gidney mode borrows ancilla `anc`."""
    if mode == "textbook_7T":
        return _toffoli_7t(a, b, t)
    if mode == "gidney_and_measured":
        return (_and_compute(a, b, anc)
                + [Gate("CNOT", (anc, t)), Gate("ANDU", (a, b, anc))])
    raise CompileError(f"unknown toffoli mode {mode!r}")


def lower_mcx(controls: Sequence[int], target: int, ancillas: Sequence[int],
              mode: str = "gidney_and_measured") -> List[Gate]:
    """Multi-controlled X via a V-chain of len(controls)-1 temporary ANDs."""
    c = len(controls)
    if c == 0:
        return [Gate("PauliX", (target,))]
    if c == 1:
        return [Gate("CNOT", (controls[0], target))]
    if len(ancillas) < c - 1:
        raise CompileError("V-chain needs len(controls)-1 ancillas")
    gates: List[Gate] = []
    pairs = []                       # (a, b, anc) in compute order
    top = controls[0]
    for i in range(c - 1):
        anc = ancillas[i]
        pairs.append((top, controls[i + 1], anc))
        top = anc
    for a, b, anc in pairs[:-1]:
        gates += _chain_and(a, b, anc, mode)
    a, b, anc = pairs[-1]
    if mode == "gidney_and_measured":
        gates += _and_compute(a, b, anc)
        gates.append(Gate("CNOT", (anc, target)))
        gates.append(Gate("ANDU", (a, b, anc)))
    else:
        gates += _toffoli_7t(a, b, anc)
        gates.append(Gate("CNOT", (anc, target)))
        gates += _toffoli_7t(a, b, anc)
    for a, b, anc in reversed(pairs[:-1]):
        gates += _chain_unand(a, b, anc, mode)
    return gates


def _chain_and(a: int, b: int, anc: int, mode: str) -> List[Gate]:
    if mode == "gidney_and_measured":
        return _and_compute(a, b, anc)
    return _toffoli_7t(a, b, anc)


def _chain_unand(a: int, b: int, anc: int, mode: str) -> List[Gate]:
    if mode == "gidney_and_measured":
        return [Gate("ANDU", (a, b, anc))]
    return _toffoli_7t(a, b, anc)


# ---------------------------------------------------------------------------
# Full-circuit compilation

_PASSTHROUGH = {"PauliX", "Hadamard", "S", "Sdg", "T", "Tdg", "CNOT", "ANDU"}


class _Lowerer:
    def __init__(self, n_logical: int, cfg: SynthesisConfig):
        self.n = n_logical
        self.cfg = cfg
        self.gates: List[Gate] = []
        self.max_anc = 0
        self.n_rz_synth = 0
        self.n_placeholders = 0

    def ancillas(self, count: int) -> List[int]:
        self.max_anc = max(self.max_anc, count)
        return [self.n + i for i in range(count)]

    def emit_rz(self, q: int, theta: float) -> None:
        if is_pi4_multiple(theta):
            for tag in _rz_tags(theta, 1.0):
                self.gates.append(Gate(tag, (q,)))
            return
        self.n_rz_synth += 1
        if self.cfg.rz_mode == "cost-model":
            self.n_placeholders += 1
            self.gates.append(Gate("Rz", (q,), angle=theta))
            return
        for tag in _rz_tags(theta, self.cfg.eps):
            self.gates.append(Gate(tag, (q,)))

    def emit_ry(self, q: int, theta: float) -> None:
        self.gates.append(Gate("Sdg", (q,)))
        self.gates.append(Gate("Hadamard", (q,)))
        self.emit_rz(q, theta)
        self.gates.append(Gate("Hadamard", (q,)))
        self.gates.append(Gate("S", (q,)))

    def emit_cry(self, c: int, t: int, theta: float) -> None:
        # Ry(theta/2) . CNOT . Ry(-theta/2) . CNOT as a matrix product
        self.gates.append(Gate("CNOT", (c, t)))
        self.emit_ry(t, -theta / 2)
        self.gates.append(Gate("CNOT", (c, t)))
        self.emit_ry(t, theta / 2)

    def emit_toffoli(self, a: int, b: int, t: int) -> None:
        if self.cfg.toffoli_mode == "gidney_and_measured":
            anc = self.ancillas(1)[0]
            self.gates += lower_toffoli(a, b, t, anc, self.cfg.toffoli_mode)
        else:
            self.gates += _toffoli_7t(a, b, t)

    def emit_mcry(self, controls: Sequence[int], target: int,
                  mask: Sequence[int], theta: float) -> None:
        flips = [q for q, m in zip(controls, mask) if m == 0]
        for q in flips:
            self.gates.append(Gate("PauliX", (q,)))
        c = len(controls)
        if c == 1:
            self.emit_cry(controls[0], target, theta)
        else:
            ancs = self.ancillas(c - 1)
            pairs = []
            top = controls[0]
            for i in range(c - 1):
                pairs.append((top, controls[i + 1], ancs[i]))
                top = ancs[i]
            for a, b, anc in pairs:
                self.gates += _chain_and(a, b, anc, self.cfg.toffoli_mode)
            self.emit_cry(top, target, theta)
            for a, b, anc in reversed(pairs):
                self.gates += _chain_unand(a, b, anc, self.cfg.toffoli_mode)
        for q in flips:
            self.gates.append(Gate("PauliX", (q,)))

    def lower(self, g: Gate) -> None:
        tag = g.tag
        if tag in _PASSTHROUGH:
            self.gates.append(g)
        elif tag == "Swap":
            a, b = g.qubits
            self.gates += [Gate("CNOT", (a, b)), Gate("CNOT", (b, a)),
                           Gate("CNOT", (a, b))]
        elif tag == "Toffoli":
            self.emit_toffoli(*g.qubits)
        elif tag == "ControlledSwap":
            c, x, y = g.qubits
            self.gates.append(Gate("CNOT", (y, x)))
            self.emit_toffoli(c, x, y)
            self.gates.append(Gate("CNOT", (y, x)))
        elif tag == "Rz":
            self.emit_rz(g.qubits[0], g.angle)
        elif tag == "Ry":
            self.emit_ry(g.qubits[0], g.angle)
        elif tag == "MultiControlledRy":
            self.emit_mcry(g.qubits[:-1], g.qubits[-1], g.mask, g.angle)
        elif tag == "UniformlyControlledRy":
            table = AngleTable(g.qubits[-1], tuple(g.qubits[:-1]), g.angles)
            for sub in demux_ucry(table):
                self.lower(sub)
        else:
            raise CompileError(f"cannot lower gate tag {tag!r}")


def compile_circuit(circuit: Circuit,
                    cfg: SynthesisConfig) -> Tuple[Circuit, ResourceReport]:
    """Lower a logical circuit to {X, H, S, Sdg, T, Tdg, CNOT, ANDU}.

    Returns the compiled circuit and its resource report; in cost-model
    mode each Rz placeholder is charged ceil(3b)+11 toward compiled_T.
    """
    low = _Lowerer(circuit.n_qubits, cfg)
    for g in circuit.gates:
        low.lower(g)
    registers = dict(circuit.registers)
    if low.max_anc and "ancilla" not in registers:
        registers["ancilla"] = (circuit.n_qubits,
                                circuit.n_qubits + low.max_anc)
    out = Circuit(circuit.n_qubits + low.max_anc, low.gates, registers)
    report = count_resources(out)
    extra = low.n_placeholders * cost_model_t_count(cfg.eps)
    report = replace(report,
                     n_rz_synth=low.n_rz_synth,
                     compiled_T=report.compiled_T + extra,
                     t_proxy=report.t_proxy + extra)
    return out, report
