"""End-to-end procedures over the strong oracle.

* ``convert_strong``: wrap a standard-oracle algorithm so every query is a
  two-strong-query gadget (query, resolve the effective bit by symbol,
  uncompute).  On a star input the wrapped run reproduces the source run on
  x exactly; on a dagger input, the run on y.
* ``sample_interrupt`` / ``find_index_repeat``: stop a distinguisher at a
  random time, measure the query register, verify the position with one
  extra query.
* ``find_index_amplified``: the coherent version with a branch qubit and a
  clock register, boosted by amplitude amplification.
* ``grover_baseline``: weak-model mark search with a doubling schedule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .sabotage import SabString, StrongInput, valid_index_answers
from .qsim import (
    QUERY,
    QUERY_INV,
    Gate,
    Measurement,
    QueryAlgorithm,
    RegisterLayout,
    amplitude_amplify,
    grover_find_mark,
    oracle_strong,
    run,
    xor_controlled_block,
)
from .qsim import DIM_CAP

_MAX_BASELINE_PHASES = 32


class ProtocolError(ValueError):
    """Unusable source algorithm or an oversized coherent dilation."""


@dataclass(frozen=True)
class IndexFinderReport:
    """Outcome of one index-finding procedure.

    A position is flagged valid only after the one-query check that its
    symbol is a star or dagger.
    """

    protocol: str
    queries_used: int
    position: int | None
    valid: bool
    exact_success: float
    empirical_success: float
    seed: int
    trials: int = 0
    rounds: int | None = None

    def to_json_dict(self) -> dict:
        out = {
            "protocol": self.protocol,
            "queries_used": self.queries_used,
            "position": self.position,
            "valid": self.valid,
            "exact_success": self.exact_success,
            "empirical_success": self.empirical_success,
            "seed": self.seed,
            "trials": self.trials,
        }
        if self.rounds is not None:
            out["rounds"] = self.rounds
        return out


# ---------------------------------------------------------------------------
# Strong-oracle conversion


def _wrapped_layout(source: RegisterLayout) -> RegisterLayout:
    # The source target bit moves to a fresh first workspace qubit.
    return RegisterLayout(n=source.n, symbol="strong", workspace=2 * source.workspace)


def _remap_wire(wire: int) -> int:
    # source wires: 0 index, 1 target, 2.. workspace
    # wrapped wires: 0 index, 1 bx, 2 by, 3 bz, 4 answer, 5.. workspace
    return 0 if wire == 0 else wire + 3


def _remap_gate(gate: Gate) -> Gate:
    wires = tuple(_remap_wire(w) for w in gate.wires)
    if gate.name == "BLOCK":
        return Gate.block(gate.matrix, wires)
    return Gate.named(gate.name, wires, gate.param)


def _remap_measure(measure: Measurement | None) -> Measurement | None:
    if measure is None:
        return None
    renames = {"symbol": "work0"}
    regs = []
    for reg in measure.registers:
        if reg in renames:
            regs.append(renames[reg])
        elif reg.startswith("work"):
            regs.append(f"work{int(reg[4:]) + 1}")
        else:
            regs.append(reg)
    return Measurement(registers=tuple(regs), outcome_map=measure.outcome_map)


def _resolve_gates() -> tuple[Gate, ...]:
    """XOR the effective bit into the answer qubit, keyed by the z symbol.

    z in {0,1}: the bit is z itself; z = star: take x; z = dagger: take y.
    """
    flip_on_z1 = Gate.block(xor_controlled_block(4, [1]), (3, 4))
    flip_on_star_x = Gate.block(xor_controlled_block(8, [2 * 2 + 1]), (3, 1, 4))
    flip_on_dagger_y = Gate.block(xor_controlled_block(8, [3 * 2 + 1]), (3, 2, 4))
    return (flip_on_z1, flip_on_star_x, flip_on_dagger_y)


@dataclass(frozen=True)
class ConvertedAlgorithm:
    """Source algorithm plus its strong-oracle wrapping (2x the queries)."""

    source: QueryAlgorithm
    wrapped: QueryAlgorithm

    def decide(self, w: StrongInput) -> dict:
        """Distribution over sabotage guesses: source answer 0 means star."""
        trace = run(self.wrapped, oracle_strong(w))
        assert trace.distribution is not None
        out: dict = {}
        for answer, p in trace.distribution.items():
            guess = {0: "*", 1: "+"}.get(answer, answer)
            out[guess] = out.get(guess, 0.0) + p
        return out


def convert_strong(alg: QueryAlgorithm) -> ConvertedAlgorithm:
    """Replace every standard query by the two-strong-query gadget."""
    if alg.layout.symbol != "bit":
        raise ProtocolError("conversion expects an algorithm over the standard bit oracle")
    steps: list = []
    for step in alg.steps:
        if step == QUERY_INV:
            raise ProtocolError("source algorithms must use forward queries only")
        if step == QUERY:
            steps.extend([QUERY, _resolve_gates(), QUERY_INV])
        else:
            steps.append(tuple(_remap_gate(g) for g in step))
    wrapped = QueryAlgorithm(
        layout=_wrapped_layout(alg.layout),
        steps=tuple(steps),
        measure=_remap_measure(alg.measure),
    )
    return ConvertedAlgorithm(source=alg, wrapped=wrapped)


def run_converted(conv: ConvertedAlgorithm, w: StrongInput) -> dict:
    """Output distribution of the wrapped algorithm on a strong input."""
    trace = run(conv.wrapped, oracle_strong(w))
    assert trace.distribution is not None
    return trace.distribution


# ---------------------------------------------------------------------------
# Random-time interruption


def _branch_algorithm(alg: QueryAlgorithm, branch: int) -> QueryAlgorithm:
    """Run the source on x (branch 0) or y (branch 1) via the strong oracle.

    Same gadget as the conversion with the symbol test removed: the answer
    qubit is XORed from the bx (or by) slot, and everything acts as the
    identity on the bz register.
    """
    source_wire = 1 if branch == 0 else 2
    fetch = Gate.block(xor_controlled_block(2, [1]), (source_wire, 4))
    steps: list = []
    for step in alg.steps:
        if step == QUERY_INV:
            raise ProtocolError("source algorithms must use forward queries only")
        if step == QUERY:
            steps.extend([QUERY, (fetch,), QUERY_INV])
        else:
            steps.append(tuple(_remap_gate(g) for g in step))
    return QueryAlgorithm(
        layout=_wrapped_layout(alg.layout),
        steps=tuple(steps),
        measure=_remap_measure(alg.measure),
    )


@dataclass(frozen=True)
class _BranchTraces:
    block: tuple[int, ...]
    t_count: int
    p_x: tuple[float, ...]
    p_y: tuple[float, ...]
    index_probs_x: tuple[np.ndarray, ...]
    index_probs_y: tuple[np.ndarray, ...]
    states_x: tuple[np.ndarray, ...]
    states_y: tuple[np.ndarray, ...]
    layout: RegisterLayout

    @property
    def per_trial_success(self) -> float:
        return (sum(self.p_x) + sum(self.p_y)) / (2.0 * self.t_count)


def _interrupt_traces(alg: QueryAlgorithm, w: StrongInput) -> _BranchTraces:
    if alg.query_count == 0:
        raise ProtocolError("distinguisher makes no queries")
    if alg.layout.n != len(w):
        raise ProtocolError("input length does not match the algorithm arity")
    block = tuple(sorted(valid_index_answers(w)))
    oracle = oracle_strong(w)
    per_branch: list[tuple[tuple[float, ...], tuple[np.ndarray, ...], tuple[np.ndarray, ...]]] = []
    layout = _wrapped_layout(alg.layout)
    for branch in (0, 1):
        trace = run(_branch_algorithm(alg, branch), oracle, block=block)
        # Each source query turns into QUERY + QUERY_INV; interrupts happen
        # before the forward queries only.
        states = trace.pre_query_states[0::2]
        assert trace.p_t is not None
        p_t = trace.p_t[0::2]
        probs = tuple(
            (np.abs(state.reshape(layout.n, -1)) ** 2).sum(axis=1) for state in states
        )
        per_branch.append((p_t, probs, states))
    return _BranchTraces(
        block=block,
        t_count=alg.query_count,
        p_x=per_branch[0][0],
        p_y=per_branch[1][0],
        index_probs_x=per_branch[0][1],
        index_probs_y=per_branch[1][1],
        states_x=per_branch[0][2],
        states_y=per_branch[1][2],
        layout=layout,
    )


def _one_trial(traces: _BranchTraces, rng: np.random.Generator) -> tuple[int, bool, int]:
    branch = int(rng.integers(2))
    t = int(rng.integers(1, traces.t_count + 1))
    probs = (traces.index_probs_x if branch == 0 else traces.index_probs_y)[t - 1]
    probs = probs / probs.sum()
    position = int(rng.choice(len(probs), p=probs)) + 1
    valid = position in traces.block  # the one-query verification
    queries = 2 * (t - 1) + 1
    return position, valid, queries


def sample_interrupt(alg: QueryAlgorithm, w: StrongInput, seed: int = 0) -> IndexFinderReport:
    """One classical trial: random branch, random time, measure, verify."""
    traces = _interrupt_traces(alg, w)
    rng = np.random.default_rng([seed])
    position, valid, queries = _one_trial(traces, rng)
    return IndexFinderReport(
        protocol="sample-interrupt",
        queries_used=queries,
        position=position,
        valid=valid,
        exact_success=traces.per_trial_success,
        empirical_success=1.0 if valid else 0.0,
        seed=seed,
        trials=1,
    )


def find_index_repeat(
    alg: QueryAlgorithm, w: StrongInput, budget: int, seed: int = 0
) -> IndexFinderReport:
    """Repeat interruption trials until a verified position or the budget ends.

    Budget exhaustion is reported as a failure value, not an exception.
    """
    traces = _interrupt_traces(alg, w)
    p = traces.per_trial_success
    # A-priori success probability of the whole budgeted procedure.
    success = 1.0 - (1.0 - p) ** budget
    queries = 0
    for trial in range(budget):
        rng = np.random.default_rng([seed, trial])
        position, valid, used = _one_trial(traces, rng)
        queries += used
        if valid:
            return IndexFinderReport(
                protocol="find-index-repeat",
                queries_used=queries,
                position=position,
                valid=True,
                exact_success=success,
                empirical_success=1.0,
                seed=seed,
                trials=trial + 1,
            )
    return IndexFinderReport(
        protocol="find-index-repeat",
        queries_used=queries,
        position=None,
        valid=False,
        exact_success=success,
        empirical_success=0.0,
        seed=seed,
        trials=budget,
    )


def find_index_amplified(
    alg: QueryAlgorithm, w: StrongInput, rounds: int, seed: int = 0
) -> IndexFinderReport:
    """Amplitude-amplified interruption.

    The dilation holds a branch qubit, a clock of T+1 states in uniform
    superposition over 1..T, the wrapped registers, and a flag qubit set by
    one strong query checking for a star/dagger at the measured index.
    Reported query cost is (2 rounds + 1) * (2 T + 1) strong queries.
    """
    traces = _interrupt_traces(alg, w)
    t_count = traces.t_count
    source_dim = traces.layout.total_dim
    dims = (2, t_count + 1, source_dim, 2)
    total = int(np.prod(dims))
    if total > DIM_CAP:
        raise ProtocolError(
            f"coherent dilation needs dimension {total} > {DIM_CAP}; use find_index_repeat"
        )

    n = traces.layout.n
    row = source_dim // n
    flat_block = np.zeros(source_dim, dtype=bool)
    for j in traces.block:
        flat_block[(j - 1) * row : j * row] = True

    amp = 1.0 / math.sqrt(2.0 * t_count)
    prep = np.zeros(dims, dtype=np.complex128)
    for c, states in ((0, traces.states_x), (1, traces.states_y)):
        for t, state in enumerate(states, start=1):
            prep[c, t, :, 1] = amp * np.where(flat_block, state, 0.0)
            prep[c, t, :, 0] = amp * np.where(flat_block, 0.0, state)
    prep = prep.reshape(-1)

    good = np.zeros(dims, dtype=bool)
    good[:, :, :, 1] = True
    good = good.reshape(-1)

    result = amplitude_amplify(prep, good, rounds)
    probs = np.abs(result.state) ** 2
    probs = probs / probs.sum()
    rng = np.random.default_rng([seed])
    outcome = int(rng.choice(total, p=probs))
    _, _, source_idx, _flag = np.unravel_index(outcome, dims)
    position = int(source_idx // row) + 1
    valid = position in traces.block  # the one-query verification
    return IndexFinderReport(
        protocol="find-index-amplified",
        queries_used=(2 * rounds + 1) * (2 * t_count + 1),
        position=position,
        valid=valid,
        exact_success=result.good_mass,
        empirical_success=1.0 if valid else 0.0,
        seed=seed,
        rounds=rounds,
    )


# ---------------------------------------------------------------------------
# Weak-model Grover baseline


def grover_baseline(z: SabString, seed: int = 0) -> IndexFinderReport:
    """Mark search with iteration counts 1, 2, 4, ... capped at ceil(pi/4 sqrt n).

    Every measured position is verified with one extra query before being
    reported.  A length-1 input is its own answer.
    """
    n = len(z)
    if n == 1:
        return IndexFinderReport(
            protocol="grover-baseline",
            queries_used=1,
            position=1,
            valid=True,
            exact_success=1.0,
            empirical_success=1.0,
            seed=seed,
        )
    cap = max(1, math.ceil(math.pi / 4.0 * math.sqrt(n)))
    queries = 0
    k = 1
    miss_mass = 1.0
    for phase in range(_MAX_BASELINE_PHASES):
        result = grover_find_mark(z, k)
        queries += result.queries_used + 1
        miss_mass *= 1.0 - result.success_mass
        rng = np.random.default_rng([seed, phase])
        probs = np.array(result.position_probs)
        probs = probs / probs.sum()
        position = int(rng.choice(n, p=probs)) + 1
        if position in z.mark_positions:  # the one-query verification
            return IndexFinderReport(
                protocol="grover-baseline",
                queries_used=queries,
                position=position,
                valid=True,
                exact_success=1.0 - miss_mass,
                empirical_success=1.0,
                seed=seed,
                trials=phase + 1,
            )
        k = min(2 * k, cap)
    return IndexFinderReport(
        protocol="grover-baseline",
        queries_used=queries,
        position=None,
        valid=False,
        exact_success=1.0 - miss_mass,
        empirical_success=0.0,
        seed=seed,
        trials=_MAX_BASELINE_PHASES,
    )
