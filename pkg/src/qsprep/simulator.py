"""Exact statevector simulation and the two fidelity metrics.

Convention: qubit 0 is the most significant bit of the basis index, so the
amplitude vector reads off |q0 q1 ... q_{n-1}> in the usual string order.

Measured temporary-AND uncomputes (ANDU markers) are simulated coherently via
deferred measurement: H on the ancilla, CCZ with the two AND inputs, H again.
This returns the ancilla to |0> exactly and applies the same fixup the
classically controlled CZ would, while keeping the simulator measurement-free.
"""
from __future__ import annotations

import math
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from .circuit_core import Circuit, Gate

DEFAULT_QUBIT_BUDGET = 26


class CapacityError(RuntimeError):
    """Circuit exceeds the statevector qubit budget."""


def _ry(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rz(theta: float) -> np.ndarray:
    return np.array([[np.exp(-0.5j * theta), 0], [0, np.exp(0.5j * theta)]], dtype=complex)


_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_FIXED_1Q = {
    "PauliX": np.array([[0, 1], [1, 0]], dtype=complex),
    "Hadamard": _H,
    "S": np.diag([1, 1j]).astype(complex),
    "Sdg": np.diag([1, -1j]).astype(complex),
    "T": np.diag([1, np.exp(1j * math.pi / 4)]),
    "Tdg": np.diag([1, np.exp(-1j * math.pi / 4)]),
}

_CNOT = np.eye(4, dtype=complex)[[0, 1, 3, 2]]
_SWAP = np.eye(4, dtype=complex)[[0, 2, 1, 3]]
_TOFFOLI = np.eye(8, dtype=complex)[[0, 1, 2, 3, 4, 5, 7, 6]]
# ControlledSwap operands (flag, x, y)
_CSWAP = np.eye(8, dtype=complex)[[0, 1, 2, 3, 4, 6, 5, 7]]
_CCZ = np.diag([1, 1, 1, 1, 1, 1, 1, -1]).astype(complex)
# ANDU operands (a, b, anc): H_anc . CCZ . H_anc
_I4 = np.eye(4, dtype=complex)
_HA = np.kron(_I4, _H)
_ANDU = _HA @ _CCZ @ _HA


def _mcry_matrix(n_ctrl: int, mask: Sequence[int], theta: float) -> np.ndarray:
    """Matrix on (controls..., target) applying Ry(theta) when controls == mask."""
    dim = 1 << (n_ctrl + 1)
    u = np.eye(dim, dtype=complex)
    pat = 0
    for b in mask:
        pat = (pat << 1) | b
    base = pat << 1
    blk = _ry(theta)
    u[base:base + 2, base:base + 2] = blk
    return u


def _ucry_matrix(n_ctrl: int, angles: Sequence[float]) -> np.ndarray:
    dim = 1 << (n_ctrl + 1)
    u = np.zeros((dim, dim), dtype=complex)
    for y, th in enumerate(angles):
        u[2 * y:2 * y + 2, 2 * y:2 * y + 2] = _ry(th)
    return u


def gate_matrix(g: Gate) -> np.ndarray:
    if g.tag in _FIXED_1Q:
        return _FIXED_1Q[g.tag]
    if g.tag == "Rz":
        return _rz(g.angle)
    if g.tag == "Ry":
        return _ry(g.angle)
    if g.tag == "CNOT":
        return _CNOT
    if g.tag == "Swap":
        return _SWAP
    if g.tag == "Toffoli":
        return _TOFFOLI
    if g.tag == "ControlledSwap":
        return _CSWAP
    if g.tag == "ANDU":
        return _ANDU
    if g.tag == "MultiControlledRy":
        return _mcry_matrix(len(g.qubits) - 1, g.mask, g.angle)
    if g.tag == "UniformlyControlledRy":
        return _ucry_matrix(len(g.qubits) - 1, g.angles)
    raise ValueError(f"cannot simulate gate tag {g.tag!r}")


def apply_gate(state: np.ndarray, g: Gate, n: int) -> np.ndarray:
    k = len(g.qubits)
    u = gate_matrix(g).reshape([2] * (2 * k))
    psi = state.reshape([2] * n)
    psi = np.tensordot(u, psi, axes=(list(range(k, 2 * k)), list(g.qubits)))
    psi = np.moveaxis(psi, list(range(k)), list(g.qubits))
    return psi.reshape(-1)


def simulate(circuit: Circuit, initial: Optional[np.ndarray] = None,
             budget: int = DEFAULT_QUBIT_BUDGET) -> np.ndarray:
    if circuit.n_qubits > budget:
        raise CapacityError(
            f"{circuit.n_qubits} qubits exceeds budget {budget}; "
            "use the analytic marginal path for sampling circuits")
    n = circuit.n_qubits
    if initial is None:
        state = np.zeros(1 << n, dtype=complex)
        state[0] = 1.0
    else:
        state = np.asarray(initial, dtype=complex).reshape(-1).copy()
        if state.size != 1 << n:
            raise ValueError("initial state dimension mismatch")
    for g in circuit.gates:
        state = apply_gate(state, g, n)
    return state


_CLASSICAL_TAGS = ("PauliX", "CNOT", "Toffoli", "Swap", "ControlledSwap")


def classical_simulate(circuit: Circuit, bits: int) -> int:
    """Basis-state propagation for reversible-classical circuits.

    `bits` is the basis index (qubit 0 = MSB).  Works at any qubit count;
    rejects non-classical gates.
    """
    n = circuit.n_qubits
    v = [(bits >> (n - 1 - q)) & 1 for q in range(n)]
    for g in circuit.gates:
        if g.tag == "PauliX":
            (q,) = g.qubits
            v[q] ^= 1
        elif g.tag == "CNOT":
            c, t = g.qubits
            v[t] ^= v[c]
        elif g.tag == "Toffoli":
            a, b, t = g.qubits
            v[t] ^= v[a] & v[b]
        elif g.tag == "Swap":
            a, b = g.qubits
            v[a], v[b] = v[b], v[a]
        elif g.tag == "ControlledSwap":
            f, a, b = g.qubits
            if v[f]:
                v[a], v[b] = v[b], v[a]
        else:
            raise ValueError(f"non-classical gate {g.tag!r} in classical_simulate")
    out = 0
    for q in range(n):
        out = (out << 1) | v[q]
    return out


def fidelity_state(psi: np.ndarray, phi: np.ndarray) -> float:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    phi = np.asarray(phi, dtype=complex).reshape(-1)
    if psi.shape != phi.shape:
        raise ValueError("state dimension mismatch")
    return float(abs(np.vdot(psi, phi)) ** 2)


def fidelity_prob(p: Sequence[float], q: Sequence[float]) -> float:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError("distribution dimension mismatch")
    if (p < -1e-15).any() or (q < -1e-15).any():
        raise ValueError("negative probability entry")
    return float(np.sum(np.sqrt(np.clip(p, 0, None) * np.clip(q, 0, None))) ** 2)


def address_marginal(psi: np.ndarray, address: Iterable[int], n: int) -> np.ndarray:
    """Probability distribution over the address-register value.

    `address` lists qubit indices (MSB of the address value first).
    """
    addr = list(address)
    probs = np.abs(np.asarray(psi).reshape([2] * n)) ** 2
    other = [q for q in range(n) if q not in addr]
    marg = probs.sum(axis=tuple(other)) if other else probs
    # axes currently ordered by qubit index; reorder to address order
    order = [sorted(addr).index(q) for q in addr]
    marg = np.transpose(marg, order)
    return marg.reshape(-1)


def dump_amplitudes(psi: np.ndarray) -> str:
    return "\n".join(f"{i} {a.real!r} {a.imag!r}" for i, a in enumerate(psi)) + "\n"
