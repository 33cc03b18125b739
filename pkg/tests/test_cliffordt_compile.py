import math
import random

import numpy as np
import pytest

from qsprep.circuit_core import Circuit, Gate, count_resources
from qsprep.cliffordt_compile import (
    CompileError, RingElement, SynthesisConfig, compile_circuit,
    cost_model_t_count, exactly_preparable, lower_mcx, lower_toffoli,
    rewrite_ry, synthesize_rz,
)
from qsprep.rings import ZOmega
from qsprep.simulator import simulate
from util import circuit_unitary, phase_dist, ry_matrix, rz_matrix, tags_to_unitary

TOFFOLI = np.eye(8, dtype=complex)
TOFFOLI[6:, 6:] = [[0, 1], [1, 0]]

_ALLOWED = {"PauliX", "Hadamard", "S", "Sdg", "T", "Tdg", "CNOT", "ANDU"}


def _anc_zero_block(u, n_data, n_anc):
    """Action on the subspace where trailing ancillas are |0>."""
    idx = [b << n_anc for b in range(1 << n_data)]
    return u[np.ix_(idx, idx)]


# ---------------------------------------------------------------------------
# Config and single rotations


def test_config_validation():
    with pytest.raises(CompileError):
        SynthesisConfig(b=0)
    with pytest.raises(CompileError):
        SynthesisConfig(b=4, toffoli_mode="nope")
    with pytest.raises(CompileError):
        SynthesisConfig(b=4, rz_mode="nope")
    assert SynthesisConfig(b=7).eps == 2.0 ** -7


def test_synthesize_rz_identity_and_t():
    assert len(synthesize_rz(0.0, 0.5)) == 0
    c = synthesize_rz(math.pi / 4, 0.5)
    assert [g.tag for g in c.gates] == ["T"]
    with pytest.raises(CompileError):
        synthesize_rz(0.1, 0.0)
    with pytest.raises(CompileError):
        synthesize_rz(0.1, 1.5)


def test_synthesize_rz_budget_and_distance():
    c = synthesize_rz(0.1, 2.0 ** -10)
    u = circuit_unitary(c)
    assert phase_dist(u, rz_matrix(0.1)) <= 2.0 ** -10
    assert count_resources(c).compiled_T <= 4 * 10 + 20


def test_rewrite_ry_matrix_checks():
    # theta = 0: pure Clifford identity
    c = rewrite_ry(0.0, 0.5)
    assert [g.tag for g in c.gates] == ["Sdg", "Hadamard", "Hadamard", "S"]
    assert phase_dist(circuit_unitary(c), np.eye(2, dtype=complex)) < 1e-12
    # theta = pi: exact up to phase
    c = rewrite_ry(math.pi, 2.0 ** -10)
    assert phase_dist(circuit_unitary(c), ry_matrix(math.pi)) < 1e-12
    # theta = pi/2: Rz(pi/2) routes to the exact S word, zero T
    c = rewrite_ry(math.pi / 2, 2.0 ** -10)
    assert count_resources(c).compiled_T == 0
    assert phase_dist(circuit_unitary(c), ry_matrix(math.pi / 2)) < 1e-12
    # generic angle within synthesis error
    c = rewrite_ry(1.2345, 2.0 ** -12)
    assert phase_dist(circuit_unitary(c), ry_matrix(1.2345)) <= 2.0 ** -12 + 1e-14


# ---------------------------------------------------------------------------
# Toffoli lowering


def test_gidney_toffoli_counts_and_action():
    gates = lower_toffoli(0, 1, 2, 3, "gidney_and_measured")
    rep = count_resources(Circuit(4, gates))
    assert rep.compiled_T == 4
    u = circuit_unitary(Circuit(4, gates))
    assert np.allclose(_anc_zero_block(u, 3, 1), TOFFOLI, atol=1e-12)


def test_textbook_toffoli_counts_and_action():
    gates = lower_toffoli(0, 1, 2, 3, "textbook_7T")
    rep = count_resources(Circuit(3, gates))
    assert rep.compiled_T == 7
    assert np.allclose(circuit_unitary(Circuit(3, gates)), TOFFOLI, atol=1e-12)


# gidney: 2 ANDs at 4T each; textbook: 4 full Toffolis (uncompute costs T too)
@pytest.mark.parametrize("mode,want_t", [("gidney_and_measured", 8),
                                         ("textbook_7T", 28)])
def test_three_controlled_x_v_chain(mode, want_t):
    gates = lower_mcx([0, 1, 2], 3, [4, 5], mode=mode)
    rep = count_resources(Circuit(6, gates))
    assert rep.compiled_T == want_t
    u = circuit_unitary(Circuit(6, gates))
    blk = _anc_zero_block(u, 4, 2)
    want = np.eye(16)
    want[14:, 14:] = [[0, 1], [1, 0]]
    assert np.allclose(blk, want, atol=1e-12)


def test_lower_mcx_requires_enough_ancillas():
    with pytest.raises(CompileError):
        lower_mcx([0, 1, 2], 3, [4])


# ---------------------------------------------------------------------------
# Whole-circuit compilation


def test_all_clifford_input_passes_through():
    circ = Circuit(2, [Gate("Hadamard", (0,)), Gate("CNOT", (0, 1)),
                       Gate("S", (1,))])
    out, rep = compile_circuit(circ, SynthesisConfig(b=10))
    assert out.gates == circ.gates
    assert rep.compiled_T == 0 and rep.n_rz_synth == 0


def test_output_alphabet_is_clifford_t():
    circ = Circuit(3, [
        Gate("Ry", (0,), angle=0.3),
        Gate("Toffoli", (0, 1, 2)),
        Gate("Swap", (0, 2)),
        Gate("ControlledSwap", (0, 1, 2)),
        Gate("MultiControlledRy", (0, 1, 2), angle=0.5, mask=(1, 0)),
        Gate("UniformlyControlledRy", (0, 1), angles=(0.1, 0.2)),
        Gate("Rz", (1,), angle=-1.0),
    ])
    out, rep = compile_circuit(circ, SynthesisConfig(b=6))
    assert {g.tag for g in out.gates} <= _ALLOWED
    assert rep.n_rz_synth >= 5          # 0.3, +-0.25, demux pair, -1.0


def test_compile_preserves_unitary_within_budget():
    rng = random.Random(7)
    b = 12
    for _ in range(4):
        gates = []
        for _ in range(5):
            kind = rng.choice(["Ry", "Rz", "CNOT", "Hadamard", "Toffoli"])
            if kind in ("Ry", "Rz"):
                gates.append(Gate(kind, (rng.randrange(3),),
                                  angle=rng.uniform(-3, 3)))
            elif kind == "CNOT":
                q = rng.sample(range(3), 2)
                gates.append(Gate("CNOT", tuple(q)))
            elif kind == "Toffoli":
                gates.append(Gate("Toffoli", tuple(rng.sample(range(3), 3))))
            else:
                gates.append(Gate("Hadamard", (rng.randrange(3),)))
        circ = Circuit(3, gates)
        out, rep = compile_circuit(circ, SynthesisConfig(b=b))
        anc = out.n_qubits - 3
        got = _anc_zero_block(circuit_unitary(out), 3, anc)
        want = circuit_unitary(circ)
        assert phase_dist(got, want) <= rep.n_rz_synth * 2.0 ** -b + 1e-9


def test_ucry_lowering_compiles_each_demuxed_rotation():
    tbl = (0.3, -0.5, 1.1, 0.2)
    circ = Circuit(3, [Gate("UniformlyControlledRy", (0, 1, 2), angles=tbl)])
    out, rep = compile_circuit(circ, SynthesisConfig(b=14))
    d = phase_dist(circuit_unitary(out), circuit_unitary(circ))
    assert d <= 4 * 2.0 ** -14 + 1e-9


def test_memoization_shares_repeated_angles():
    circ = Circuit(1, [Gate("Rz", (0,), angle=0.77)] * 5)
    out, rep = compile_circuit(circ, SynthesisConfig(b=10))
    assert rep.n_rz_synth == 5
    # identical synthesized words: length divisible into 5 equal blocks
    per = len(out.gates) // 5
    blocks = [tuple(g.tag for g in out.gates[i * per:(i + 1) * per])
              for i in range(5)]
    assert len(set(blocks)) == 1


def test_unknown_tag_is_compile_error():
    class Fake:
        tag = "Mystery"
        qubits = (0,)
    circ = Circuit(1, [])
    from qsprep.cliffordt_compile import _Lowerer
    low = _Lowerer(1, SynthesisConfig(b=4))
    with pytest.raises(CompileError):
        low.lower(Fake())


def test_cost_model_fallback():
    circ = Circuit(1, [Gate("Ry", (0,), angle=0.3),
                       Gate("Ry", (0,), angle=math.pi / 2)])
    out, rep = compile_circuit(circ, SynthesisConfig(b=10, rz_mode="cost-model"))
    placeholders = [g for g in out.gates if g.tag == "Rz"]
    assert len(placeholders) == 1                 # pi/2 routes exactly
    assert rep.compiled_T == cost_model_t_count(2.0 ** -10)
    assert cost_model_t_count(2.0 ** -10) == math.ceil(3 * 10) + 11


# ---------------------------------------------------------------------------
# Ring elements + preparability


def test_ring_element_canonical_form():
    r = RingElement(2, 0, 2, 0, 2)            # (2 + 2i)/2
    assert (r.a, r.b, r.c, r.d, r.k) == (1, 0, 1, 0, 0)
    assert abs(r.value() - (1 + 1j)) < 1e-12
    r = RingElement(1, 0, 1, 0, 1)            # (1+i)/sqrt2 = omega: minimal
    assert r.k == 1
    with pytest.raises(CompileError):
        RingElement(1, 0, 0, 0, -1)


def test_ring_element_zomega_round_trip():
    rng = random.Random(3)
    for _ in range(50):
        u = ZOmega(*(rng.randrange(-9, 10) for _ in range(4)))
        k = rng.randrange(0, 5)
        r = RingElement.from_zomega(u, k)
        assert abs(r.value() - u.value() / math.sqrt(2) ** k) < 1e-9
        # numerator maps back to an associate scaling of u
        assert abs(r.numerator_zomega().value() / math.sqrt(2) ** r.k
                   - u.value() / math.sqrt(2) ** k) < 1e-9


def test_exactly_preparable_ring_inputs():
    half = RingElement(1, 0, 0, 0, 1)          # 1/sqrt2
    ok, j = exactly_preparable(half, half)
    assert ok and j == 0
    with pytest.raises(CompileError):
        exactly_preparable(RingElement(1, 0, 0, 0), RingElement(1, 0, 0, 0))
    with pytest.raises(CompileError):
        exactly_preparable(RingElement(0, 0, 1, 0), RingElement(1, 0, 0, 0))


def test_exactly_preparable_agrees_with_word_search():
    # every real-amplitude state reachable by a word with <= 6 T gates must
    # be accepted by the ring-membership test
    rng = random.Random(11)
    gates = ["Hadamard", "S", "T", "PauliX"]
    seen = 0
    tried = 0
    while seen < 25 and tried < 4000:
        tried += 1
        word = []
        t_used = 0
        for _ in range(rng.randrange(0, 14)):
            g = rng.choice(gates)
            if g == "T":
                if t_used == 6:
                    continue
                t_used += 1
            word.append(g)
        psi = tags_to_unitary(word)[:, 0]
        k = int(np.argmax(np.abs(psi)))
        phase = psi[k] / abs(psi[k])
        real = psi / phase
        if np.max(np.abs(real.imag)) > 1e-9:
            continue
        seen += 1
        ok, _ = exactly_preparable(float(real[0].real), float(real[1].real))
        assert ok, word
    assert seen == 25
