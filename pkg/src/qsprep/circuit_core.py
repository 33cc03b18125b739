"""Gate-level IR, register bookkeeping, and resource accounting.

Circuits are immutable gate lists over a flat qubit index space, with named
register ranges carried as metadata so downstream passes (simulator, alias
pipeline) can find e.g. the address register without re-parsing anything.

The proxy T-count charges each Toffoli-equivalent as 4 T gates (clean-ancilla
model):  t_proxy = n_T + n_Tdg + 4 * n_CCX.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

# Gate tags. Rz/Ry carry an angle; MultiControlledRy additionally carries a
# control-polarity mask; UniformlyControlledRy carries an angle table.
# AND / ANDU are the compute / measured-uncompute halves of a temporary-AND
# (appear only in compiled circuits; AND compute is emitted as explicit
# Clifford+T gates, ANDU is a measurement-fixup marker).
TAGS = (
    "PauliX", "Hadamard", "S", "Sdg", "T", "Tdg",
    "CNOT", "Toffoli", "Swap", "ControlledSwap",
    "Rz", "Ry", "MultiControlledRy", "UniformlyControlledRy",
    "ANDU",
)

_ANGLED = {"Rz", "Ry", "MultiControlledRy"}

# arity by tag; None means variable
_ARITY = {
    "PauliX": 1, "Hadamard": 1, "S": 1, "Sdg": 1, "T": 1, "Tdg": 1,
    "CNOT": 2, "Toffoli": 3, "Swap": 2, "ControlledSwap": 3,
    "Rz": 1, "Ry": 1,
    "MultiControlledRy": None, "UniformlyControlledRy": None,
    "ANDU": 3,
}


class CircuitError(ValueError):
    """Structural error in a circuit or gate."""


@dataclass(frozen=True)
class Gate:
    tag: str
    qubits: Tuple[int, ...]
    angle: Optional[float] = None
    mask: Optional[Tuple[int, ...]] = None       # control polarities, MultiControlledRy
    angles: Optional[Tuple[float, ...]] = None   # table, UniformlyControlledRy

    def __post_init__(self):
        if self.tag not in _ARITY:
            raise CircuitError(f"unknown gate tag {self.tag!r}")
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"{self.tag} repeats a qubit: {self.qubits}")
        arity = _ARITY[self.tag]
        if arity is not None and len(self.qubits) != arity:
            raise CircuitError(f"{self.tag} expects {arity} qubits, got {len(self.qubits)}")
        if self.tag in _ANGLED:
            if self.angle is None or not math.isfinite(self.angle):
                raise CircuitError(f"{self.tag} needs a finite angle")
        if self.tag == "MultiControlledRy":
            # operands are (controls..., target); mask covers the controls
            if len(self.qubits) < 2:
                raise CircuitError("MultiControlledRy needs >= 1 control")
            if self.mask is None or len(self.mask) != len(self.qubits) - 1:
                raise CircuitError("mask length must equal control count")
            if any(b not in (0, 1) for b in self.mask):
                raise CircuitError("mask entries must be 0/1")
        if self.tag == "UniformlyControlledRy":
            c = len(self.qubits) - 1
            if self.angles is None or len(self.angles) != 1 << c:
                raise CircuitError("angle table must have length 2^controls")
            if any(not math.isfinite(a) for a in self.angles):
                raise CircuitError("angle table entries must be finite")


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: Tuple[Gate, ...] = ()
    # role -> (start, stop) half-open ranges; disjoint, within [0, n_qubits)
    registers: Mapping[str, Tuple[int, int]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "registers", dict(self.registers))
        for g in self.gates:
            if any(q < 0 or q >= self.n_qubits for q in g.qubits):
                raise CircuitError(f"gate {g.tag} operand out of range for {self.n_qubits} qubits")
        spans: List[Tuple[int, int]] = []
        for name, (a, b) in self.registers.items():
            if not (0 <= a <= b <= self.n_qubits):
                raise CircuitError(f"register {name} range {(a, b)} invalid")
            spans.append((a, b))
        spans.sort()
        for (a1, b1), (a2, b2) in zip(spans, spans[1:]):
            if a2 < b1:
                raise CircuitError("register ranges overlap")

    def __len__(self) -> int:
        return len(self.gates)

    def register(self, role: str) -> range:
        a, b = self.registers[role]
        return range(a, b)


@dataclass(frozen=True)
class ResourceReport:
    n_T: int
    n_Tdg: int
    n_CCX: int
    t_proxy: int
    compiled_T: int
    total_gates: int
    qubits: int
    histogram: Mapping[str, int]
    # rotations routed through approximate synthesis (filled by the compiler;
    # 0 for raw logical circuits)
    n_rz_synth: int = 0


def count_resources(circuit: Circuit) -> ResourceReport:
    """Tally gate counts and the proxy T-count t_proxy = n_T + n_Tdg + 4*n_CCX.

    Toffoli and ControlledSwap (one Toffoli plus CNOT conjugation) each count
    as one CCX.  compiled_T counts only literal T/Tdg gates.
    """
    hist: Dict[str, int] = {}
    n_t = n_tdg = n_ccx = 0
    for g in circuit.gates:
        hist[g.tag] = hist.get(g.tag, 0) + 1
        if g.tag == "T":
            n_t += 1
        elif g.tag == "Tdg":
            n_tdg += 1
        elif g.tag in ("Toffoli", "ControlledSwap"):
            n_ccx += 1
    return ResourceReport(
        n_T=n_t, n_Tdg=n_tdg, n_CCX=n_ccx,
        t_proxy=n_t + n_tdg + 4 * n_ccx,
        compiled_T=n_t + n_tdg,
        total_gates=len(circuit.gates),
        qubits=circuit.n_qubits,
        histogram=hist,
    )


def remap_gate(g: Gate, mapping: Mapping[int, int]) -> Gate:
    return Gate(g.tag, tuple(mapping[q] for q in g.qubits),
                angle=g.angle, mask=g.mask, angles=g.angles)


def compose(a: Circuit, b: Circuit, mapping: Optional[Mapping[int, int]] = None) -> Circuit:
    """Append b's gates (remapped into a's qubit space) after a's gates.

    mapping must be injective from b's qubits; identity by default.  The
    result's qubit count extends a's if the mapping lands above it.
    """
    if mapping is None:
        mapping = {q: q for q in range(b.n_qubits)}
    vals = [mapping[q] for q in range(b.n_qubits)]
    if len(set(vals)) != len(vals):
        raise CircuitError("compose mapping is not injective")
    if any(v < 0 for v in vals):
        raise CircuitError("compose mapping has negative targets")
    n = max([a.n_qubits] + [v + 1 for v in vals])
    gates = list(a.gates) + [remap_gate(g, mapping) for g in b.gates]
    return Circuit(n, gates, a.registers)


def _fmt_angle(x: float) -> str:
    return repr(float(x))


def serialize(circuit: Circuit) -> str:
    """Line-oriented text form; bit-exact round trip (angles via repr)."""
    lines = [f"qubits {circuit.n_qubits}"]
    for name in sorted(circuit.registers):
        a, b = circuit.registers[name]
        lines.append(f"register {name} {a} {b}")
    for g in circuit.gates:
        parts = [g.tag] + [str(q) for q in g.qubits]
        if g.angle is not None:
            parts.append(f"angle={_fmt_angle(g.angle)}")
        if g.mask is not None:
            parts.append("mask=" + "".join(str(b) for b in g.mask))
        if g.angles is not None:
            parts.append("angles=" + ",".join(_fmt_angle(x) for x in g.angles))
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def deserialize(text: str) -> Circuit:
    n_qubits = None
    registers: Dict[str, Tuple[int, int]] = {}
    gates: List[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        try:
            if toks[0] == "qubits":
                n_qubits = int(toks[1])
            elif toks[0] == "register":
                registers[toks[1]] = (int(toks[2]), int(toks[3]))
            else:
                tag = toks[0]
                qubits: List[int] = []
                angle = mask = angles = None
                for t in toks[1:]:
                    if t.startswith("angle="):
                        angle = float(t[6:])
                    elif t.startswith("mask="):
                        mask = tuple(int(c) for c in t[5:])
                    elif t.startswith("angles="):
                        angles = tuple(float(x) for x in t[7:].split(","))
                    else:
                        qubits.append(int(t))
                gates.append(Gate(tag, tuple(qubits), angle=angle, mask=mask, angles=angles))
        except (ValueError, IndexError, CircuitError) as e:
            raise CircuitError(f"line {lineno}: {e}") from e
    if n_qubits is None:
        raise CircuitError("missing qubits header")
    return Circuit(n_qubits, gates, registers)


def is_pi4_multiple(theta: float, tol: float = 1e-12) -> bool:
    """True when theta is an exact multiple of pi/4 (Clifford+T angle)."""
    r = theta / (math.pi / 4)
    return abs(r - round(r)) <= tol
