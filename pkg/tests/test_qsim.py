"""Simulator semantics: oracles as permutations, exact algorithms, closed forms."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import oracle_matrix, total_variation
from sablab.boolfn import BitString
from sablab.sabotage import SabString, StrongInput
from sablab.qsim import (
    QUERY,
    QUERY_INV,
    Gate,
    Measurement,
    QueryAlgorithm,
    RegisterLayout,
    SimulationError,
    algorithm_from_json,
    algorithm_to_json,
    amplitude_amplify,
    deutsch_parity,
    diffusion_block,
    grover_find_mark,
    grover_or,
    hybrid_sum,
    index_block_mass,
    initial_state,
    oracle_bit,
    oracle_strong,
    oracle_weak,
    random_query_algorithm,
    run,
    uniform_prep_block,
)


def test_layout_dims_and_caps():
    weak = RegisterLayout(n=3, symbol="weak", workspace=2)
    assert weak.dims == (3, 4, 2) and weak.total_dim == 24
    strong = RegisterLayout(n=2, symbol="strong", workspace=1)
    assert strong.dims == (2, 2, 2, 4)
    assert strong.register_names == ("index", "bx", "by", "bz")
    with pytest.raises(SimulationError):
        RegisterLayout(n=3, symbol="weak", workspace=3)
    with pytest.raises(SimulationError):
        RegisterLayout(n=2**18, symbol="strong", workspace=2)


def test_gate_validation():
    with pytest.raises(SimulationError):
        Gate.block(np.array([[1.0, 0.0], [1.0, 1.0]]), (0,))  # not unitary
    with pytest.raises(SimulationError):
        Gate.block(np.eye(32), (0, 1))  # too large
    with pytest.raises(SimulationError):
        Gate.named("FOO", (0,))
    g = Gate.named("CPHASE", (1, 2), param=math.pi)
    assert abs(g.matrix[3, 3] + 1.0) < 1e-15


def test_weak_oracle_example_and_order():
    z = SabString.from_text("0*")
    o = oracle_weak(z)
    m = oracle_matrix(o, 8)
    # permutation matrix: entries 0/1, single 1 per row and column
    assert set(np.unique(m.real)) <= {0.0, 1.0} and np.abs(m.imag).max() == 0.0
    assert (m.sum(axis=0) == 1).all() and (m.sum(axis=1) == 1).all()
    # |j=2>|b=1> -> |j=2>|(1 + 2) mod 4>
    src = np.zeros(8, dtype=complex)
    src[4 * 1 + 1] = 1.0
    assert abs(o.apply(src)[4 * 1 + 3] - 1.0) == 0.0
    # fourth power is the identity
    assert np.abs(np.linalg.matrix_power(m, 4) - np.eye(8)).max() < 1e-12


def test_weak_oracle_zero_symbols_fix_b():
    z = SabString.from_text("0*0")
    o = oracle_weak(z)
    rng = np.random.default_rng(0)
    state = rng.standard_normal(12) + 1j * rng.standard_normal(12)
    out = o.apply(state)
    view_in = state.reshape(3, 4)
    view_out = out.reshape(3, 4)
    for j in (0, 2):  # z_j = 0: symbol register untouched
        assert np.abs(view_out[j] - view_in[j]).max() == 0.0


def test_strong_oracle_example_and_inverse():
    w = StrongInput.from_pair(BitString.from_text("0"), BitString.from_text("1"), "*")
    o = oracle_strong(w)
    src = np.zeros(16, dtype=complex)
    src[0] = 1.0
    out = o.apply(src)
    assert abs(out[((0 * 2 + 0) * 2 + 1) * 4 + 2] - 1.0) == 0.0  # |bx=0, by=1, bz=2>
    m = oracle_matrix(o, 16)
    assert np.abs(np.linalg.matrix_power(m, 4) - np.eye(16)).max() < 1e-12
    assert np.abs(m @ m @ m - np.linalg.inv(m)).max() < 1e-12  # cube = inverse
    rng = np.random.default_rng(3)
    state = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    assert np.abs(o.apply(o.apply(state), adjoint=True) - state).max() < 1e-12


def test_strong_oracle_x_slot_is_xor_oracle():
    """Tracing out b_y, b_z, the b_x slot acts as the plain oracle for x."""
    w = StrongInput.from_pair(BitString.from_text("01"), BitString.from_text("11"), "+")
    o = oracle_strong(w)
    ob = oracle_bit(w.x)
    rng = np.random.default_rng(9)
    amp = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    state = np.zeros((2, 2, 2, 4), dtype=complex)
    state[:, :, 0, 0] = amp / np.linalg.norm(amp)
    out = o.apply(state.reshape(-1)).reshape(2, 2, 2, 4)
    want = ob.apply(state[:, :, 0, 0].reshape(-1)).reshape(2, 2)
    got = out.sum(axis=(2, 3))  # by/bz hold a single basis state, sum collapses it
    assert np.abs(got - want).max() < 1e-12


def test_deutsch_exact_all_inputs():
    alg = deutsch_parity()
    for x, want in [("00", 0), ("01", 1), ("10", 1), ("11", 0)]:
        d = run(alg, oracle_bit(x)).distribution
        assert abs(d[want] - 1.0) < 1e-12


def test_zero_query_algorithm_measures_initial_state():
    layout = RegisterLayout(n=2, symbol="bit", workspace=1)
    alg = QueryAlgorithm(
        layout=layout,
        steps=((Gate.block(uniform_prep_block(2), (0,)),),),
        measure=Measurement(registers=("index",)),
    )
    d = run(alg).distribution
    assert abs(d["1"] - 0.5) < 1e-12 and abs(d["2"] - 0.5) < 1e-12


def test_grover_or4_single_iteration_exact():
    d = run(grover_or(4, 1), oracle_bit("0010")).distribution
    assert abs(d[3] - 1.0) < 1e-12


def test_run_rejects_mismatched_oracle():
    with pytest.raises(SimulationError):
        run(deutsch_parity(), oracle_weak(SabString.from_text("0*")))
    with pytest.raises(SimulationError):
        run(deutsch_parity())  # queries but no oracle


def test_algorithm_validation():
    layout = RegisterLayout(n=2, symbol="bit", workspace=1)
    with pytest.raises(SimulationError):
        QueryAlgorithm(layout=layout, steps=(QUERY, ()))  # starts with a query
    with pytest.raises(SimulationError):
        QueryAlgorithm(layout=layout, steps=((), QUERY))  # ends with a query
    with pytest.raises(SimulationError):
        QueryAlgorithm(layout=layout, steps=((), QUERY, QUERY, ()))  # adjacent
    with pytest.raises(SimulationError):
        QueryAlgorithm(
            layout=layout, steps=((Gate.named("H", (5,)),),)
        )  # bad wire
    with pytest.raises(SimulationError):
        QueryAlgorithm(
            layout=layout, steps=((Gate.block(np.eye(3), (1,)),),)
        )  # dim mismatch


@pytest.mark.parametrize("n,m,k", [(4, 1, 1), (2, 1, 1), (1, 1, 0), (2, 2, 0), (9, 4, 2)])
def test_grover_closed_form_spot(n, m, k):
    z = SabString(tuple([2] * m + [0] * (n - m)))
    res = grover_find_mark(z, k)
    theta = math.asin(math.sqrt(m / n))
    assert abs(res.success_mass - math.sin((2 * k + 1) * theta) ** 2) < 1e-12
    assert abs(sum(res.position_probs) - 1.0) < 1e-12


def test_grover_single_mark_position():
    res = grover_find_mark(SabString.from_text("00*0"), 1)
    assert abs(res.position_probs[2] - 1.0) < 1e-12
    assert res.queries_used == 2


def test_amplitude_amplify_closed_form():
    prep = np.zeros(4, dtype=complex)
    prep[0], prep[1] = math.sqrt(3) / 2, 0.5
    mask = np.array([False, True, False, False])
    assert abs(amplitude_amplify(prep, mask, 0).good_mass - 0.25) < 1e-14
    assert abs(amplitude_amplify(prep, mask, 1).good_mass - 1.0) < 1e-12
    half = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2)
    assert abs(amplitude_amplify(half, np.array([False, True]), 1).good_mass - 0.5) < 1e-12


def test_amplitude_amplify_sine_law_random():
    rng = np.random.default_rng(11)
    state = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    state /= np.linalg.norm(state)
    mask = np.zeros(8, dtype=bool)
    mask[[1, 4]] = True
    p = float(np.sum(np.abs(state[mask]) ** 2))
    theta = math.asin(math.sqrt(p))
    for rounds in range(4):
        got = amplitude_amplify(state, mask, rounds).good_mass
        assert abs(got - math.sin((2 * rounds + 1) * theta) ** 2) < 1e-12


def test_hybrid_deutsch_instance():
    rep = hybrid_sum(deutsch_parity(), "00", (1, 2))
    assert abs(rep.p_x[0] - 1.0) < 1e-12 and abs(rep.p_y[0] - 1.0) < 1e-12
    # the two runs differ only by a global phase, so the finals overlap fully
    assert abs(rep.overlap - 1.0) < 1e-12
    assert rep.sum_x + rep.sum_y >= 1 - rep.overlap - 1e-9


def test_hybrid_untouched_block_cannot_distinguish():
    """An algorithm that never queries position 3 keeps overlap 1."""
    layout = RegisterLayout(n=3, symbol="bit", workspace=1)
    alg = QueryAlgorithm(
        layout=layout,
        steps=(
            (Gate.block(uniform_prep_block(2), (1,)),),
            QUERY,
            (Gate.block(uniform_prep_block(2), (1,)),),
        ),
        measure=Measurement(registers=("symbol",)),
    )
    rep = hybrid_sum(alg, "000", (3,))
    assert rep.sum_x == 0.0 and rep.sum_y == 0.0
    assert abs(rep.overlap - 1.0) < 1e-12


@given(st.integers(0, 2**31 - 1))
@settings(max_examples=40, deadline=None)
def test_hybrid_inequality_random_circuits(seed):
    rng = np.random.default_rng(seed)
    alg = random_query_algorithm(3, 2, rng)
    x = BitString(tuple(int(b) for b in rng.integers(0, 2, size=3)))
    size = int(rng.integers(1, 4))
    block = tuple(sorted(int(j) + 1 for j in rng.choice(3, size=size, replace=False)))
    rep = hybrid_sum(alg, x, block)
    assert rep.sum_x + rep.sum_y >= 1 - rep.overlap - 1e-9
    for t in range(len(rep.step_overlaps) - 1):
        drop = rep.step_overlaps[t] - rep.step_overlaps[t + 1]
        assert drop <= rep.p_x[t] + rep.p_y[t] + 1e-9


def test_norm_preserved_along_runs():
    rng = np.random.default_rng(21)
    alg = random_query_algorithm(4, 3, rng)
    trace = run(alg, oracle_bit("0110"), block=(2,))
    for state in trace.pre_query_states + (trace.final_state,):
        assert abs(np.linalg.norm(state) - 1.0) < 1e-10
    assert all(0.0 <= p <= 1.0 + 1e-12 for p in trace.p_t)


def test_index_block_mass():
    layout = RegisterLayout(n=2, symbol="bit", workspace=1)
    state = initial_state(layout)
    assert index_block_mass(state, layout, [1]) == 1.0
    assert index_block_mass(state, layout, [2]) == 0.0


def test_algorithm_json_roundtrip():
    for alg in (deutsch_parity(), grover_or(3, 2)):
        text = algorithm_to_json(alg)
        again = algorithm_from_json(text)
        assert algorithm_to_json(again) == text
        for x in ("000", "011"):
            want = run(alg, oracle_bit(x[: alg.layout.n])).distribution
            got = run(again, oracle_bit(x[: alg.layout.n])).distribution
            assert total_variation(want, got) < 1e-12


def test_query_inv_steps_roundtrip_and_run():
    layout = RegisterLayout(n=2, symbol="weak", workspace=1)
    alg = QueryAlgorithm(
        layout=layout,
        steps=((), QUERY, (), QUERY_INV, ()),
        measure=Measurement(registers=("symbol",)),
    )
    assert alg.query_count == 2
    d = run(alg, oracle_weak(SabString.from_text("*0"))).distribution
    assert abs(d["0"] - 1.0) < 1e-12  # query then inverse leaves |b=0>
    assert algorithm_from_json(algorithm_to_json(alg)).query_count == 2


def test_diffusion_and_prep_blocks_are_unitary():
    for dim in (1, 2, 3, 5, 16):
        for m in (uniform_prep_block(dim), diffusion_block(dim)):
            assert np.abs(m @ m.conj().T - np.eye(dim)).max() < 1e-12
