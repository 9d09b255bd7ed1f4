"""Exact dense statevector simulation of query algorithms.

An algorithm alternates unitary gate lists with query steps against an
oracle supplied at run time.  Three oracle kinds are supported on matching
register layouts:

* ``bit``: |j>|b>      -> |j>|b xor x_j>            (standard Boolean oracle)
* ``weak``: |j>|b>     -> |j>|(b + z_j) mod 4>       (sabotaged input)
* ``strong``: |j>|bx>|by>|bz> -> |j>|bx xor x_j>|by xor y_j>|(bz + z_j) mod 4>

Wire 0 is always the index register (dimension n, positions 1..n); symbol
wires follow; workspace qubits come last.  All distributions are exact;
sampling, where offered, takes an explicit seed.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .boolfn import BitString
from .sabotage import SabString, StrongInput

DIM_CAP = 2**21
BLOCK_CAP = 16
UNITARY_TOL = 1e-12
NORM_TOL = 1e-10

QUERY = "QUERY"
QUERY_INV = "QUERY_INV"

_SQRT2 = math.sqrt(2.0)
_NAMED_1Q = {
    "H": np.array([[1, 1], [1, -1]], dtype=np.complex128) / _SQRT2,
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}
_NAMED_2Q = {
    "CNOT": np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
    ),
    "CZ": np.diag([1, 1, 1, -1]).astype(np.complex128),
    "SWAP": np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128
    ),
}


class SimulationError(ValueError):
    """Layout mismatch, non-unitary gate, dimension overflow, or norm drift."""


@dataclass(frozen=True)
class RegisterLayout:
    """Register shape of a query algorithm: index, symbol register(s), workspace."""

    n: int
    symbol: str  # "bit" | "weak" | "strong"
    workspace: int = 1  # workspace dimension, a power of two (1 = none)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise SimulationError("index register needs at least one position")
        if self.symbol not in ("bit", "weak", "strong"):
            raise SimulationError(f"unknown symbol register kind {self.symbol!r}")
        if self.workspace < 1 or self.workspace & (self.workspace - 1):
            raise SimulationError("workspace dimension must be a power of two")
        if self.total_dim > DIM_CAP:
            raise SimulationError(
                f"state dimension {self.total_dim} exceeds the cap {DIM_CAP}"
            )

    @property
    def symbol_dims(self) -> tuple[int, ...]:
        return {"bit": (2,), "weak": (4,), "strong": (2, 2, 4)}[self.symbol]

    @property
    def dims(self) -> tuple[int, ...]:
        work = (2,) * (self.workspace.bit_length() - 1)
        return (self.n,) + self.symbol_dims + work

    @property
    def total_dim(self) -> int:
        return self.n * math.prod(self.symbol_dims) * self.workspace

    @property
    def register_names(self) -> tuple[str, ...]:
        symbols = {"bit": ("symbol",), "weak": ("symbol",), "strong": ("bx", "by", "bz")}
        work = tuple(f"work{i}" for i in range(self.workspace.bit_length() - 1))
        return ("index",) + symbols[self.symbol] + work

    def wire(self, register: str) -> int:
        try:
            return self.register_names.index(register)
        except ValueError:
            raise SimulationError(f"unknown register {register!r}") from None


@dataclass(frozen=True)
class Gate:
    """Named gate or explicit unitary block on a tuple of wires."""

    name: str
    wires: tuple[int, ...]
    matrix: np.ndarray = field(repr=False)
    param: float | None = None

    @classmethod
    def named(cls, name: str, wires: Sequence[int], param: float | None = None) -> "Gate":
        name = name.upper()
        if name in _NAMED_1Q:
            matrix = _NAMED_1Q[name]
        elif name in _NAMED_2Q:
            matrix = _NAMED_2Q[name]
        elif name == "CPHASE":
            if param is None:
                raise SimulationError("CPHASE needs a phase parameter")
            matrix = np.diag([1, 1, 1, cmath.exp(1j * param)]).astype(np.complex128)
        else:
            raise SimulationError(f"unknown gate {name!r}")
        return cls(name=name, wires=tuple(wires), matrix=matrix, param=param)

    @classmethod
    def block(cls, matrix: np.ndarray, wires: Sequence[int]) -> "Gate":
        matrix = np.asarray(matrix, dtype=np.complex128)
        return cls(name="BLOCK", wires=tuple(wires), matrix=matrix)

    def __post_init__(self) -> None:
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise SimulationError("gate matrix must be square")
        if m.shape[0] > BLOCK_CAP:
            raise SimulationError(f"gate dimension {m.shape[0]} exceeds {BLOCK_CAP}")
        if len(set(self.wires)) != len(self.wires):
            raise SimulationError("gate wires must be distinct")
        err = np.abs(m.conj().T @ m - np.eye(m.shape[0])).max()
        if err > UNITARY_TOL:
            raise SimulationError(f"gate is not unitary (defect {err:.2e})")


def uniform_prep_block(dim: int) -> np.ndarray:
    """Real orthogonal involution sending basis state 0 to the uniform vector."""
    if dim == 1:
        return np.ones((1, 1), dtype=np.complex128)
    u = np.full(dim, 1.0 / math.sqrt(dim))
    v = np.zeros(dim)
    v[0] = 1.0
    v -= u
    h = np.eye(dim) - 2.0 * np.outer(v, v) / (v @ v)
    return h.astype(np.complex128)


def diffusion_block(dim: int) -> np.ndarray:
    """Reflection about the uniform vector, 2|u><u| - I."""
    u = np.full(dim, 1.0 / math.sqrt(dim))
    return (2.0 * np.outer(u, u) - np.eye(dim)).astype(np.complex128)


def phase_marks_block() -> np.ndarray:
    """Phase flip on the weak symbol values 2 and 3 (star and dagger)."""
    return np.diag([1.0, 1.0, -1.0, -1.0]).astype(np.complex128)


def xor_controlled_block(control_dim: int, control_values: Iterable[int]) -> np.ndarray:
    """Unitary on (control, qubit) flipping the qubit when control is listed."""
    flips = set(control_values)
    dim = 2 * control_dim
    m = np.zeros((dim, dim), dtype=np.complex128)
    for c in range(control_dim):
        for b in range(2):
            target = b ^ 1 if c in flips else b
            m[2 * c + target, 2 * c + b] = 1.0
    return m


@dataclass(frozen=True)
class Measurement:
    """Registers to observe plus an outcome-to-answer map.

    Outcome keys join the measured register values with commas; the index
    register reports positions 1..n.  Unmapped outcomes answer as their key.
    """

    registers: tuple[str, ...]
    outcome_map: Mapping[str, object] = field(default_factory=dict)


Step = object  # tuple[Gate, ...] | "QUERY" | "QUERY_INV"


@dataclass(frozen=True)
class QueryAlgorithm:
    """Alternating unitary and query steps over a fixed register layout."""

    layout: RegisterLayout
    steps: tuple[Step, ...]
    measure: Measurement | None = None

    def __post_init__(self) -> None:
        if not self.steps:
            raise SimulationError("algorithm needs at least one step")
        if self.steps[0] in (QUERY, QUERY_INV) or self.steps[-1] in (QUERY, QUERY_INV):
            raise SimulationError("algorithm must begin and end with a unitary step")
        dims = self.layout.dims
        previous_query = False
        for step in self.steps:
            if step in (QUERY, QUERY_INV):
                if previous_query:
                    raise SimulationError("query steps must alternate with unitary steps")
                previous_query = True
                continue
            previous_query = False
            for gate in step:  # type: ignore[union-attr]
                if any(not 0 <= w < len(dims) for w in gate.wires):
                    raise SimulationError(f"gate {gate.name} wires {gate.wires} out of range")
                need = math.prod(dims[w] for w in gate.wires)
                if need != gate.matrix.shape[0]:
                    raise SimulationError(
                        f"gate {gate.name} on wires {gate.wires} needs dimension {need}"
                    )
        if self.measure is not None:
            for reg in self.measure.registers:
                self.layout.wire(reg)

    @property
    def query_count(self) -> int:
        return sum(1 for s in self.steps if s in (QUERY, QUERY_INV))


class Oracle:
    """Input-dependent permutation acting on the (index, symbols) registers."""

    def __init__(self, kind: str, n: int, forward_rows: np.ndarray, label: str):
        self.kind = kind
        self.n = n
        self.rows = len(forward_rows)
        self.label = label
        self._gather = np.empty(self.rows, dtype=np.int64)
        self._gather[forward_rows] = np.arange(self.rows, dtype=np.int64)
        self._gather_inv = np.asarray(forward_rows, dtype=np.int64)

    def apply(self, state: np.ndarray, adjoint: bool = False) -> np.ndarray:
        if state.size % self.rows:
            raise SimulationError("state size incompatible with oracle registers")
        perm = self._gather_inv if adjoint else self._gather
        return _kernels.permute_rows(state, perm, state.size // self.rows)

    def __repr__(self) -> str:
        return f"Oracle({self.kind}, {self.label})"


def oracle_bit(x: BitString | str) -> Oracle:
    """Standard Boolean oracle: the target bit is XORed with x_j."""
    xb = BitString.coerce(x)
    n = len(xb)
    forward = np.empty(2 * n, dtype=np.int64)
    for j in range(n):
        for b in range(2):
            forward[2 * j + b] = 2 * j + (b ^ xb[j])
    return Oracle("bit", n, forward, str(xb))


def oracle_weak(z: SabString) -> Oracle:
    """Weak sabotage oracle: cyclic mod-4 addition of the symbol z_j."""
    n = len(z)
    forward = np.empty(4 * n, dtype=np.int64)
    for j in range(n):
        for b in range(4):
            forward[4 * j + b] = 4 * j + ((b + z[j]) % 4)
    return Oracle("weak", n, forward, str(z))


def oracle_strong(w: StrongInput) -> Oracle:
    """Strong sabotage oracle returning the whole tuple (x_j, y_j, z_j)."""
    n = len(w)
    forward = np.empty(16 * n, dtype=np.int64)
    for j in range(n):
        xj, yj, zj = w[j]
        for bx in range(2):
            for by in range(2):
                for bz in range(4):
                    src = ((j * 2 + bx) * 2 + by) * 4 + bz
                    dst = ((j * 2 + (bx ^ xj)) * 2 + (by ^ yj)) * 4 + ((bz + zj) % 4)
                    forward[src] = dst
    return Oracle("strong", n, forward, str(w))


@dataclass(frozen=True)
class SimTrace:
    """States right before each query, the final state, and block masses."""

    pre_query_states: tuple[np.ndarray, ...]
    final_state: np.ndarray
    p_t: tuple[float, ...] | None
    distribution: dict | None


def initial_state(layout: RegisterLayout) -> np.ndarray:
    state = np.zeros(layout.total_dim, dtype=np.complex128)
    state[0] = 1.0
    return state


def apply_gates(state: np.ndarray, layout: RegisterLayout, gates: Iterable[Gate]) -> np.ndarray:
    for gate in gates:
        state = _kernels.apply_block(state, layout.dims, gate.wires, gate.matrix)
    return state


def index_block_mass(state: np.ndarray, layout: RegisterLayout, positions: Iterable[int]) -> float:
    """Squared mass of the index register on the given 1-based positions."""
    probs = np.abs(state.reshape(layout.n, -1)) ** 2
    return float(sum(probs[j - 1].sum() for j in set(positions)))


def measure_distribution(
    state: np.ndarray, layout: RegisterLayout, measure: Measurement
) -> dict:
    probs = np.abs(state.reshape(layout.dims)) ** 2
    wires = [layout.wire(reg) for reg in measure.registers]
    keep = sorted(set(wires))
    drop = tuple(a for a in range(len(layout.dims)) if a not in keep)
    marg = probs.sum(axis=drop) if drop else probs
    marg = np.moveaxis(marg, [keep.index(w) for w in wires], range(len(wires)))
    out: dict = {}
    for outcome in np.ndindex(marg.shape):
        p = float(marg[outcome])
        if p == 0.0:
            continue
        parts = []
        for reg, v in zip(measure.registers, outcome):
            parts.append(str(v + 1) if reg == "index" else str(v))
        key = ",".join(parts)
        answer = measure.outcome_map.get(key, key)
        out[answer] = out.get(answer, 0.0) + p
    return out


def run(alg: QueryAlgorithm, oracle: Oracle | None = None, block: Iterable[int] | None = None) -> SimTrace:
    """Execute the algorithm exactly, recording every pre-query state.

    ``block`` (1-based positions) asks for the index-register mass on that
    set right before each query, the p_t instrumentation of the hybrid
    argument.
    """
    layout = alg.layout
    if alg.query_count and oracle is None:
        raise SimulationError("algorithm contains queries but no oracle was given")
    if oracle is not None and (oracle.kind != layout.symbol or oracle.n != layout.n):
        raise SimulationError(
            f"oracle ({oracle.kind}, n={oracle.n}) does not fit layout "
            f"({layout.symbol}, n={layout.n})"
        )
    block_set = sorted(set(block)) if block is not None else None
    if block_set is not None and not block_set:
        raise SimulationError("block must be non-empty")

    state = initial_state(layout)
    pre_query: list[np.ndarray] = []
    p_t: list[float] = []
    for step in alg.steps:
        if step in (QUERY, QUERY_INV):
            pre_query.append(state.copy())
            if block_set is not None:
                p_t.append(index_block_mass(state, layout, block_set))
            state = oracle.apply(state, adjoint=step == QUERY_INV)  # type: ignore[union-attr]
        else:
            state = apply_gates(state, layout, step)  # type: ignore[arg-type]
        norm = float(np.linalg.norm(state))
        if abs(norm - 1.0) > NORM_TOL:
            raise SimulationError(f"state norm drifted to {norm}")
    distribution = (
        measure_distribution(state, layout, alg.measure) if alg.measure is not None else None
    )
    return SimTrace(
        pre_query_states=tuple(pre_query),
        final_state=state,
        p_t=tuple(p_t) if block_set is not None else None,
        distribution=distribution,
    )


# ---------------------------------------------------------------------------
# Catalog circuits


def deutsch_parity() -> QueryAlgorithm:
    """One-query exact parity of two bits via phase kickback.

    Outputs 0 on inputs 00 and 11, and 1 on 01 and 10, with certainty.
    """
    layout = RegisterLayout(n=2, symbol="bit", workspace=1)
    w2 = uniform_prep_block(2)
    prep = (
        Gate.named("X", (1,)),
        Gate.named("H", (1,)),
        Gate.block(w2, (0,)),
    )
    unprep = (
        Gate.block(w2, (0,)),
        Gate.named("H", (1,)),
        Gate.named("X", (1,)),
    )
    measure = Measurement(registers=("index",), outcome_map={"1": 0, "2": 1})
    return QueryAlgorithm(layout=layout, steps=(prep, QUERY, unprep), measure=measure)


def grover_or(n: int, iterations: int) -> QueryAlgorithm:
    """Grover search for a set bit of x; measures the index register.

    Marked positions are phase-flipped through a target qubit held in |->.
    """
    if not 1 <= n <= BLOCK_CAP:
        raise SimulationError(f"index dimension {n} outside 1..{BLOCK_CAP}")
    layout = RegisterLayout(n=n, symbol="bit", workspace=1)
    steps: list[Step] = [
        (Gate.named("X", (1,)), Gate.named("H", (1,)), Gate.block(uniform_prep_block(n), (0,)))
    ]
    for _ in range(iterations):
        steps.append(QUERY)
        steps.append((Gate.block(diffusion_block(n), (0,)),))
    if iterations == 0:
        steps.append(())
    measure = Measurement(registers=("index",), outcome_map={str(j): j for j in range(1, n + 1)})
    return QueryAlgorithm(layout=layout, steps=tuple(steps), measure=measure)


def grover_marks(n: int, iterations: int) -> QueryAlgorithm:
    """Grover search for star/dagger symbols through the weak oracle.

    Each iteration queries, phase-flips symbol values 2 and 3, then
    uncomputes with an inverse query before the diffusion step.
    """
    if not 1 <= n <= BLOCK_CAP:
        raise SimulationError(f"index dimension {n} outside 1..{BLOCK_CAP}")
    layout = RegisterLayout(n=n, symbol="weak", workspace=1)
    steps: list[Step] = [(Gate.block(uniform_prep_block(n), (0,)),)]
    for _ in range(iterations):
        steps.append(QUERY)
        steps.append((Gate.block(phase_marks_block(), (1,)),))
        steps.append(QUERY_INV)
        steps.append((Gate.block(diffusion_block(n), (0,)),))
    if iterations == 0:
        steps.append(())
    measure = Measurement(registers=("index",), outcome_map={str(j): j for j in range(1, n + 1)})
    return QueryAlgorithm(layout=layout, steps=tuple(steps), measure=measure)


def random_query_algorithm(
    n: int, queries: int, rng: np.random.Generator, workspace: int = 2
) -> QueryAlgorithm:
    """Haar-random interleaving circuit over the bit-oracle layout."""
    layout = RegisterLayout(n=n, symbol="bit", workspace=workspace)

    def haar(dim: int) -> np.ndarray:
        z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        q, r = np.linalg.qr(z)
        return q * (np.diagonal(r) / np.abs(np.diagonal(r)))

    def layer() -> tuple[Gate, ...]:
        gates = [Gate.block(haar(2 * n), (0, 1))]
        if workspace > 1:
            gates.append(Gate.block(haar(4), (1, 2)))
        return tuple(gates)

    steps: list[Step] = [layer()]
    for _ in range(queries):
        steps.append(QUERY)
        steps.append(layer())
    measure = Measurement(registers=("index",))
    return QueryAlgorithm(layout=layout, steps=tuple(steps), measure=measure)


# ---------------------------------------------------------------------------
# Grover closed form, amplitude amplification, hybrid instrumentation


@dataclass(frozen=True)
class GroverResult:
    """Exact outcome distribution over positions and the marked-set mass."""

    position_probs: tuple[float, ...]
    success_mass: float
    iterations: int
    queries_used: int


def grover_find_mark(z: SabString, iterations: int) -> GroverResult:
    """Run mark search on a sabotaged input; distribution is exact."""
    n = len(z)
    trace = run(grover_marks(n, iterations), oracle_weak(z))
    assert trace.distribution is not None
    probs = tuple(float(trace.distribution.get(j, 0.0)) for j in range(1, n + 1))
    success = sum(probs[j - 1] for j in z.mark_positions)
    return GroverResult(
        position_probs=probs,
        success_mass=float(success),
        iterations=iterations,
        queries_used=2 * iterations,
    )


@dataclass(frozen=True)
class AmplifyResult:
    """Post-amplification state and the exact good-subspace mass."""

    state: np.ndarray
    good_mass: float
    rounds: int


def amplitude_amplify(
    prep: QueryAlgorithm | np.ndarray,
    good_mask: np.ndarray,
    rounds: int,
    oracle: Oracle | None = None,
) -> AmplifyResult:
    """Reflect alternately about the good subspace and the prepared state.

    With initial good mass p, the amplified mass is exactly
    sin^2((2 rounds + 1) asin sqrt(p)).
    """
    if rounds < 0:
        raise SimulationError("rounds must be non-negative")
    psi = run(prep, oracle).final_state if isinstance(prep, QueryAlgorithm) else np.asarray(prep)
    mask = np.asarray(good_mask, dtype=bool)
    if mask.shape != psi.shape:
        raise SimulationError("good mask must match the state dimension")
    state = psi.copy()
    for _ in range(rounds):
        state = np.where(mask, -state, state)
        state = 2.0 * np.vdot(psi, state) * psi - state
    good_mass = float(np.sum(np.abs(state[mask]) ** 2))
    return AmplifyResult(state=state, good_mass=good_mass, rounds=rounds)


@dataclass(frozen=True)
class HybridReport:
    """Per-query block masses for both runs and the overlap telescope."""

    block: tuple[int, ...]
    p_x: tuple[float, ...]
    p_y: tuple[float, ...]
    step_overlaps: tuple[float, ...]  # |<psi_x^t|psi_y^t>| for t = 1..T, then finals

    @property
    def sum_x(self) -> float:
        return float(sum(self.p_x))

    @property
    def sum_y(self) -> float:
        return float(sum(self.p_y))

    @property
    def overlap(self) -> float:
        return self.step_overlaps[-1]


def hybrid_sum(
    alg: QueryAlgorithm,
    x: BitString | str,
    block: Iterable[int],
    oracle_family=oracle_bit,
) -> HybridReport:
    """Run the algorithm on x and on x with ``block`` flipped, instrumented.

    Guarantees sum(p_x) + sum(p_y) >= 1 - |<psi_x|psi_y>| up to float error:
    each query can shrink the overlap by at most p_{x,t} + p_{y,t}.
    """
    xb = BitString.coerce(x)
    block_t = tuple(sorted(set(block)))
    if not block_t:
        raise SimulationError("block must be non-empty")
    yb = xb.flip(block_t)
    trace_x = run(alg, oracle_family(xb), block=block_t)
    trace_y = run(alg, oracle_family(yb), block=block_t)
    overlaps = [
        float(abs(np.vdot(sx, sy)))
        for sx, sy in zip(trace_x.pre_query_states, trace_y.pre_query_states)
    ]
    overlaps.append(float(abs(np.vdot(trace_x.final_state, trace_y.final_state))))
    assert trace_x.p_t is not None and trace_y.p_t is not None
    return HybridReport(
        block=block_t,
        p_x=trace_x.p_t,
        p_y=trace_y.p_t,
        step_overlaps=tuple(overlaps),
    )


# ---------------------------------------------------------------------------
# JSON algorithm files


def _complex_to_pair(v: complex) -> list[float]:
    return [float(v.real), float(v.imag)]


def algorithm_to_json(alg: QueryAlgorithm) -> str:
    steps_payload: list = []
    for step in alg.steps:
        if step in (QUERY, QUERY_INV):
            steps_payload.append(step)
            continue
        gates = []
        for gate in step:  # type: ignore[union-attr]
            entry: dict = {"gate": gate.name, "wires": list(gate.wires)}
            if gate.name == "BLOCK":
                entry["matrix"] = [[_complex_to_pair(v) for v in row] for row in gate.matrix]
            if gate.param is not None:
                entry["param"] = gate.param
            gates.append(entry)
        steps_payload.append({"gates": gates})
    payload = {
        "layout": {
            "n": alg.layout.n,
            "symbol": alg.layout.symbol,
            "workspace": alg.layout.workspace,
        },
        "steps": steps_payload,
        "measure": None
        if alg.measure is None
        else {
            "registers": list(alg.measure.registers),
            "map": {k: v for k, v in alg.measure.outcome_map.items()},
        },
    }
    return json.dumps(payload, sort_keys=True)


def algorithm_from_json(text: str) -> QueryAlgorithm:
    payload = json.loads(text)
    lay = payload["layout"]
    layout = RegisterLayout(n=lay["n"], symbol=lay["symbol"], workspace=lay.get("workspace", 1))
    steps: list[Step] = []
    for step in payload["steps"]:
        if step in (QUERY, QUERY_INV):
            steps.append(step)
            continue
        gates = []
        for entry in step["gates"]:
            name = entry["gate"].upper()
            wires = tuple(entry["wires"])
            if name == "BLOCK":
                matrix = np.array(
                    [[complex(re, im) for re, im in row] for row in entry["matrix"]],
                    dtype=np.complex128,
                )
                gates.append(Gate.block(matrix, wires))
            else:
                gates.append(Gate.named(name, wires, entry.get("param")))
        steps.append(tuple(gates))
    measure = None
    if payload.get("measure") is not None:
        m = payload["measure"]
        measure = Measurement(registers=tuple(m["registers"]), outcome_map=dict(m.get("map", {})))
    return QueryAlgorithm(layout=layout, steps=tuple(steps), measure=measure)
