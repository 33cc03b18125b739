import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qsprep.alias_prepare import (
    AliasTable, LookupSpec, ValidationError, build_alias_table,
    build_comparator, build_qrom, build_selectswap, deserialize_alias_table,
    optimal_lambda, prepare_alias_state, realized_marginal,
    reproduced_distribution, serialize_alias_table,
)
from qsprep.circuit_core import count_resources
from qsprep.simulator import address_marginal, classical_simulate, fidelity_prob, simulate


def _rand_dist(L, rng, zeros=0):
    v = [rng.uniform(0.05, 1.0) for _ in range(L)]
    for j in rng.sample(range(L), zeros):
        v[j] = 0.0
    s = sum(v)
    return [x / s for x in v]


# ---------------------------------------------------------------------------
# Classical table


def test_uniform_distribution_needs_no_aliasing():
    t = build_alias_table([0.25] * 4, b=6)
    assert all(tau == 1 for tau in t.tau)
    assert t.alias == (0, 1, 2, 3)
    assert realized_marginal(t) == tuple(Fraction(1, 4) for _ in range(4)) or \
        list(realized_marginal(t)) == [Fraction(1, 4)] * 4


def test_hand_worked_two_bin_table():
    t = build_alias_table([0.75, 0.25], b=2)
    assert t.tau == (Fraction(1), Fraction(1, 2))
    assert t.alias == (0, 0)
    assert t.keep == (4, 2)
    assert list(realized_marginal(t)) == [Fraction(3, 4), Fraction(1, 4)]


def test_reproduction_identity():
    p = [0.4, 0.3, 0.2, 0.1]
    t = build_alias_table(p, b=8)
    rec = reproduced_distribution(t)
    assert max(abs(float(r) - x) for r, x in zip(rec, p)) < 1e-12


def test_validation_errors():
    with pytest.raises(ValidationError):
        build_alias_table([0.5, -0.1, 0.6], b=4)
    with pytest.raises(ValidationError):
        build_alias_table([0.5, 0.4], b=4)        # sums to 0.9
    with pytest.raises(ValidationError):
        build_alias_table([0.5, 0.5], b=0)


def test_non_power_of_two_pads():
    t = build_alias_table([0.5, 0.3, 0.2], b=6)
    assert t.L == 4
    marg = realized_marginal(t)
    assert sum(marg) == 1


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 12), st.integers(1, 4), st.integers(0, 10 ** 9))
def test_quantization_error_bound(b, log_l, seed):
    rng = random.Random(seed)
    p = _rand_dist(1 << log_l, rng)
    t = build_alias_table(p, b)
    marg = [float(x) for x in realized_marginal(t)]
    assert max(abs(a - c) for a, c in zip(marg, p)) <= 2.0 ** -b + 1e-12
    assert sum(realized_marginal(t)) == 1          # exact rational total


def test_serialization_round_trip():
    t = build_alias_table([0.4, 0.3, 0.2, 0.1], b=7)
    back = deserialize_alias_table(serialize_alias_table(t))
    assert back == t


# ---------------------------------------------------------------------------
# Lookup circuits


def _lookup_outputs(circ, L, w):
    """Classical output word per address (out register XORed onto zeros)."""
    n_addr = (L - 1).bit_length() if L > 1 else 0
    n = circ.n_qubits
    outs = []
    o0, o1 = circ.registers["output"]
    for j in range(L):
        bits_in = 0
        a0, a1 = circ.registers.get("address", (0, 0))
        for i, q in enumerate(range(a0, a1)):
            if (j >> (a1 - a0 - 1 - i)) & 1:
                bits_in |= 1 << (n - 1 - q)
        res = classical_simulate(circ, bits_in)
        word = 0
        for q in range(o0, o1):
            word = (word << 1) | ((res >> (n - 1 - q)) & 1)
        outs.append(word)
    return outs


def test_qrom_xor_semantics_small():
    spec = LookupSpec(4, 2, (0, 1, 2, 3))
    circ = build_qrom(spec)
    assert _lookup_outputs(circ, 4, 2) == [0, 1, 2, 3]


def test_qrom_l2_uses_no_toffolis():
    circ = build_qrom(LookupSpec(2, 3, (5, 2)))
    assert count_resources(circ).n_CCX == 0
    assert _lookup_outputs(circ, 2, 3) == [5, 2]


def test_qrom_l1_direct_loads():
    circ = build_qrom(LookupSpec(1, 3, (6,)))
    assert all(g.tag == "PauliX" for g in circ.gates)
    assert _lookup_outputs(circ, 1, 3) == [6]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 4), st.integers(1, 4), st.integers(0, 10 ** 9))
def test_selectswap_matches_qrom_all_lambdas(log_l, w, seed):
    L = 1 << log_l
    rng = random.Random(seed)
    data = tuple(rng.randrange(1 << w) for _ in range(L))
    want = _lookup_outputs(build_qrom(LookupSpec(L, w, data)), L, w)
    assert want == list(data)
    lam = 1
    while lam <= L:
        circ = build_selectswap(LookupSpec(L, w, data, "selectswap", lam))
        assert _lookup_outputs(circ, L, w) == list(data), lam
        lam <<= 1


def test_optimal_lambda_examples_and_brute_force():
    assert optimal_lambda(256, 8) == 4
    assert optimal_lambda(2, 3) == 1
    assert optimal_lambda(1, 5) == 1
    for L in (2, 8, 64, 1024, 4096):
        for w in (1, 3, 16, 32):
            lams = []
            lam = 1
            while lam <= L:
                lams.append(lam)
                lam <<= 1
            best = min(lams, key=lambda l: (4 * math.ceil(L / l) + 8 * l * w, l))
            assert optimal_lambda(L, w) == best


# ---------------------------------------------------------------------------
# Comparator


def test_comparator_exhaustive_b3():
    circ = build_comparator(3)
    x0, x1 = circ.registers["x"]
    y0, y1 = circ.registers["y"]
    (f0, _) = circ.registers["flag"]
    n = circ.n_qubits
    assert count_resources(circ).n_CCX == 3        # b Toffolis exactly
    for x in range(8):
        for y in range(8):
            bits = 0
            for i, q in enumerate(range(x0, x1)):
                if (x >> (2 - i)) & 1:
                    bits |= 1 << (n - 1 - q)
            for i, q in enumerate(range(y0, y1)):
                if (y >> (2 - i)) & 1:
                    bits |= 1 << (n - 1 - q)
            out = classical_simulate(circ, bits)
            flag = (out >> (n - 1 - f0)) & 1
            assert flag == (1 if y >= x else 0), (x, y)


# ---------------------------------------------------------------------------
# Full pipeline


def test_pipeline_uniform_p_gives_uniform_marginal():
    pipe = prepare_alias_state([0.25] * 4, b=3, backend="qrom")
    psi = simulate(pipe.circuit)
    marg = address_marginal(psi, pipe.circuit.register("address"),
                            pipe.circuit.n_qubits)
    assert np.allclose(marg, 0.25, atol=1e-12)


@pytest.mark.parametrize("backend", ["qrom", "selectswap"])
def test_pipeline_marginal_matches_analytic(backend):
    rng = random.Random(2024)
    p = _rand_dist(4, rng)
    pipe = prepare_alias_state(p, b=4, backend=backend)
    psi = simulate(pipe.circuit)
    marg = address_marginal(psi, pipe.circuit.register("address"),
                            pipe.circuit.n_qubits)
    want = [float(x) for x in realized_marginal(pipe.table)]
    assert np.max(np.abs(marg - want)) < 1e-9
    assert fidelity_prob(p, marg) >= (1 - 2.0 ** -4) ** 2


def test_pipeline_stage_reports_present():
    pipe = prepare_alias_state([0.6, 0.4], b=4)
    assert set(pipe.stages) >= {"superposition", "lookup_alias", "lookup_keep",
                                "random", "comparator", "swap"}
    # comparator + swap at n = 1: 4b + 4
    t = pipe.stages["comparator"].t_proxy + pipe.stages["swap"].t_proxy
    assert t == 4 * 4 + 4
