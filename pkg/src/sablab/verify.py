"""Named verification checks: every headline claim at desk scale.

Each check computes its numbers fresh and compares them against the stated
bound.  The canonical JSON report is a pure function of (seed, code);
wall-clock timings stay out of it so two runs with the same seed serialize
to identical bytes.
"""

from __future__ import annotations

import itertools
import json
import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import adversary, measures, protocols, qsim
from .boolfn import BitString, PartialFunction, catalog, make_indexing, make_named
from .sabotage import SabString, make_strong

HYBRID_SLACK = 1e-9


@dataclass
class CheckResult:
    name: str
    claim: str
    computed: dict
    expected: str
    passed: bool
    seconds: float

    def to_json_dict(self, with_timing: bool = False) -> dict:
        out = {
            "name": self.name,
            "claim": self.claim,
            "computed": self.computed,
            "expected": self.expected,
            "passed": self.passed,
        }
        if with_timing:
            out["seconds"] = self.seconds
        return out


# ---------------------------------------------------------------------------
# Independent rational LP oracle (vertex enumeration, no simplex pivoting)


def fbs_vertex_exact(f: PartialFunction, x: BitString | str) -> Fraction:
    """Optimal fbs value by enumerating basic points of the feasible polytope.

    Solves every m-subset of the m + n tight-constraint candidates with
    Fraction Gaussian elimination; independent of the simplex route.
    """
    xb = BitString.coerce(x)
    ys = f.opposite_inputs(xb)
    if not ys:
        return Fraction(0)
    m, n = len(ys), f.n
    rows = []  # (normal vector over weights, right-hand side)
    for j in range(1, n + 1):
        rows.append(([Fraction(int(y[j - 1] != xb[j - 1])) for y in ys], Fraction(1)))
    for i in range(m):
        rows.append(([Fraction(int(k == i)) for k in range(m)], Fraction(0)))

    def solve(system):
        mat = [list(lhs) + [rhs] for lhs, rhs in system]
        cols = m
        pivot_row = 0
        where = [-1] * cols
        for col in range(cols):
            sel = next((r for r in range(pivot_row, len(mat)) if mat[r][col] != 0), None)
            if sel is None:
                continue
            mat[pivot_row], mat[sel] = mat[sel], mat[pivot_row]
            inv = mat[pivot_row][col]
            mat[pivot_row] = [v / inv for v in mat[pivot_row]]
            for r in range(len(mat)):
                if r != pivot_row and mat[r][col] != 0:
                    factor = mat[r][col]
                    mat[r] = [a - factor * b for a, b in zip(mat[r], mat[pivot_row])]
            where[col] = pivot_row
            pivot_row += 1
            if pivot_row == len(mat):
                break
        if any(w == -1 for w in where):
            return None  # singular: not a vertex
        return [mat[where[c]][-1] for c in range(cols)]

    best = Fraction(0)
    for subset in itertools.combinations(range(len(rows)), m):
        point = solve([rows[i] for i in subset])
        if point is None:
            continue
        if any(w < 0 for w in point):
            continue
        if all(sum(c * w for c, w in zip(lhs, point)) <= rhs for lhs, rhs in rows[:n]):
            best = max(best, sum(point, Fraction(0)))
    return best


# ---------------------------------------------------------------------------
# Individual checks


def _check_fbs_indexing(seed: int) -> tuple[dict, bool]:
    computed = {}
    ok = True
    for n in (2, 3):
        value, _ = measures.fbs_global(make_indexing(n))
        computed[f"fbs_ind_{n}"] = float(value)
        ok = ok and abs(value - (n + 1)) <= 1e-6
    return computed, ok


def _check_measures_catalog(seed: int) -> tuple[dict, bool]:
    ok = True
    points = 0
    max_gap = 0.0
    max_float_vs_exact = 0.0
    for f in catalog(max_arity=6):
        for x in f.domain():
            points += 1
            bs = measures.block_sensitivity(f, x)
            sol = measures.fbs(f, x)
            if not (bs <= sol.value + 1e-9 and sol.value <= f.n + 1e-9):
                ok = False
            try:
                sol.check_certificate(f)
            except measures.MeasureError:
                ok = False
            max_gap = max(max_gap, abs(sum(sol.dual) - sol.value))
            if f.n <= 3:
                exact = fbs_vertex_exact(f, x)
                diff = abs(sol.value - float(exact))
                max_float_vs_exact = max(max_float_vs_exact, diff)
                if diff > 1e-9:
                    ok = False
                if measures.fbs(f, x, exact=True).value != exact:
                    ok = False
    computed = {
        "points": points,
        "max_duality_gap": max_gap,
        "max_float_vs_exact": max_float_vs_exact,
    }
    return computed, ok


_CERT_CATALOG = (
    [("OR", n) for n in range(2, 7)]
    + [("AND", n) for n in range(2, 7)]
    + [("PARITY", n) for n in range(2, 7)]
    + [("MAJ", 3), ("MAJ", 5)]
)


def _cert_functions():
    for name, n in _CERT_CATALOG:
        yield make_named(name, n)
    yield make_indexing(2)


def _check_fbs_certificates(seed: int) -> tuple[dict, bool]:
    ok = True
    worst_norm_err = 0.0
    worst_col = 0.0
    for f in _cert_functions():
        value, x = measures.fbs_global(f)
        cert = adversary.build_fbs_adversary(f, measures.fbs(f, x))
        err = abs(cert.norm_gamma**2 - float(value))
        worst_norm_err = max(worst_norm_err, err)
        worst_col = max(worst_col, max(cert.column_norms))
        if err > 1e-7 or max(cert.column_norms) > 1 + 1e-9:
            ok = False
    return {"max_norm_sq_error": worst_norm_err, "max_column_norm": worst_col}, ok


def _check_sabotage_certificates(seed: int) -> tuple[dict, bool]:
    ok = True
    worst_norm_err = 0.0
    worst_col_slack = -float("inf")
    min_value_margin = float("inf")
    for f in _cert_functions():
        value, x = measures.fbs_global(f)
        value = float(value)
        cert = adversary.build_sabotage_adversary(f, measures.fbs(f, x))
        err = abs(cert.norm_gamma - value)
        worst_norm_err = max(worst_norm_err, err)
        bound = 1 + math.sqrt(value) + 1e-9
        worst_col_slack = max(worst_col_slack, max(cert.column_norms) - bound)
        margin = cert.value - value / (1 + math.sqrt(value))
        min_value_margin = min(min_value_margin, margin)
        if err > 1e-7 or max(cert.column_norms) > bound or margin < -1e-9:
            ok = False
    computed = {
        "max_norm_error": worst_norm_err,
        "max_column_slack": worst_col_slack,
        "min_value_margin": min_value_margin,
    }
    return computed, ok


def _recount_relation(rel: adversary.Relation) -> dict[int, int]:
    """Exhaustive per-position recount of the worst load product.

    Works over integer coordinate codes and a flat pair list, independent of
    the neighbor-map computation in :func:`adversary.relation_bound`.
    """
    labels = list(rel.x_side) + list(rel.y_side)
    ids = {label: i for i, label in enumerate(labels)}
    codes: dict[tuple[int, int], int] = {}
    coord_ids: dict = {}
    for label, i in ((lab, i) for lab in labels for i in range(rel.arity)):
        value = label[i]
        code = coord_ids.setdefault(value, len(coord_ids))
        codes[(ids[label], i)] = code
    pairs = [(ids[u], ids[v]) for u, v in rel.pairs]
    out: dict[int, int] = {}
    for u, v in pairs:
        for i in range(rel.arity):
            if codes[(u, i)] == codes[(v, i)]:
                continue
            lu = sum(1 for a, b in pairs if a == u and codes[(a, i)] != codes[(b, i)])
            lv = sum(1 for a, b in pairs if b == v and codes[(a, i)] != codes[(b, i)])
            out[i + 1] = max(out.get(i + 1, 0), lu * lv)
    return out


def _check_indexing_relation(seed: int) -> tuple[dict, bool]:
    ok = True
    computed = {}
    for n in (2, 3, 4):
        for strong in (False, True):
            rel = adversary.build_indexing_relation(n, strong=strong)
            rb = adversary.relation_bound(rel)
            want_m = math.comb(n, 2)
            addr = {rb.per_position.get(j) for j in range(1, n + 1)}
            data = {rb.per_position[j] for j in rb.per_position if j > n}
            label = f"n{n}_{'strong' if strong else 'weak'}"
            computed[label] = {
                "m_x": rb.m_x,
                "m_y": rb.m_y,
                "l_max": rb.l_max,
                "bound": rb.bound,
                "min_aggregate": min(max(addr), max(data)),
                "max_aggregate": max(max(addr), max(data)),
            }
            if not (rb.m_x == rb.m_y == want_m):
                ok = False
            if addr != {(n - 1) ** 2} or data != {want_m}:
                ok = False
            if _recount_relation(rel) != dict(rb.per_position):
                ok = False
    return computed, ok


def _hybrid_instances(seed: int):
    yield qsim.deutsch_parity(), BitString.from_text("00"), (1, 2)
    yield qsim.grover_or(4, 1), BitString.from_text("0000"), (3,)
    rng = np.random.default_rng([seed, 6])
    for _ in range(200):
        alg = qsim.random_query_algorithm(3, 2, rng)
        x = BitString(tuple(int(b) for b in rng.integers(0, 2, size=3)))
        size = int(rng.integers(1, 4))
        block = tuple(sorted(int(j) + 1 for j in rng.choice(3, size=size, replace=False)))
        yield alg, x, block


def _check_hybrid(seed: int) -> tuple[dict, bool]:
    ok = True
    count = 0
    min_slack = float("inf")
    worst_step = -float("inf")
    for alg, x, block in _hybrid_instances(seed):
        rep = qsim.hybrid_sum(alg, x, block)
        count += 1
        slack = rep.sum_x + rep.sum_y - (1 - rep.overlap)
        min_slack = min(min_slack, slack)
        if slack < -HYBRID_SLACK:
            ok = False
        for t in range(len(rep.step_overlaps) - 1):
            drop = rep.step_overlaps[t] - rep.step_overlaps[t + 1]
            excess = drop - (rep.p_x[t] + rep.p_y[t])
            worst_step = max(worst_step, excess)
            if excess > HYBRID_SLACK:
                ok = False
    return {"instances": count, "min_slack": min_slack, "max_step_excess": worst_step}, ok


def _tv(p: dict, q: dict) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def _check_conversion(seed: int) -> tuple[dict, bool]:
    ok = True
    xor2 = make_named("XOR2", 2)
    conv = protocols.convert_strong(qsim.deutsch_parity())
    worst_decide = 0.0
    for x in xor2.d0:
        for y in xor2.d1:
            for marker in ("*", "+"):
                w = make_strong(xor2, x, y, marker)
                d = conv.decide(w)
                worst_decide = max(worst_decide, abs(d.get(marker, 0.0) - 1.0))
    if worst_decide > 1e-12:
        ok = False

    or4 = make_named("OR", 4)
    source = qsim.grover_or(4, 1)
    cg = protocols.convert_strong(source)
    worst_tv = 0.0
    for x in or4.d0:
        for y in or4.d1:
            for marker in ("*", "+"):
                w = make_strong(or4, x, y, marker)
                got = protocols.run_converted(cg, w)
                base = x if marker == "*" else y
                want = qsim.run(source, qsim.oracle_bit(base)).distribution
                assert want is not None
                worst_tv = max(worst_tv, _tv(got, want))
    if worst_tv > 1e-10:
        ok = False
    if cg.wrapped.query_count != 2 * source.query_count:
        ok = False
    return {"max_decision_error": worst_decide, "max_tv": worst_tv}, ok


def _check_grover_closed_form(seed: int) -> tuple[dict, bool]:
    ok = True
    worst = 0.0
    cases = 0
    for n in range(1, 17):
        for m in range(1, n + 1):
            z = SabString(tuple([2] * m + [0] * (n - m)))
            for k in range(0, 6):
                cases += 1
                res = qsim.grover_find_mark(z, k)
                theta = math.asin(math.sqrt(m / n))
                want = math.sin((2 * k + 1) * theta) ** 2
                worst = max(worst, abs(res.success_mass - want))
                if abs(res.success_mass - want) > 1e-10:
                    ok = False
    single = qsim.grover_find_mark(SabString.from_text("00*0"), 1)
    if abs(single.success_mass - 1.0) > 1e-10 or abs(single.position_probs[2] - 1.0) > 1e-10:
        ok = False
    computed = {"cases": cases, "max_error": worst, "n4_single_mark_k1": single.success_mass}
    return computed, ok


def _check_index_finder(seed: int) -> tuple[dict, bool]:
    ok = True
    xor2 = make_named("XOR2", 2)
    or4 = make_named("OR", 4)
    worst_identity = 0.0
    worst_aa0 = 0.0
    instances = [
        (qsim.deutsch_parity(), make_strong(xor2, "00", "01", "*")),
        (qsim.grover_or(4, 1), make_strong(or4, "0000", "0010", "*")),
    ]
    for alg, w in instances:
        rep = protocols.sample_interrupt(alg, w, seed=seed)
        hb = qsim.hybrid_sum(alg, w.x, sorted(w.z.mark_positions))
        identity = (hb.sum_x + hb.sum_y) / (2.0 * alg.query_count)
        worst_identity = max(worst_identity, abs(rep.exact_success - identity))
        if abs(rep.exact_success - identity) > 1e-10:
            ok = False
        amp0 = protocols.find_index_amplified(alg, w, rounds=0, seed=seed)
        worst_aa0 = max(worst_aa0, abs(amp0.exact_success - rep.exact_success))
        if abs(amp0.exact_success - rep.exact_success) > 1e-10:
            ok = False

    # 1-query preparation with exactly 1/4 of the index mass on the block.
    layout = qsim.RegisterLayout(n=2, symbol="bit", workspace=1)
    rot = np.array([[math.sqrt(3) / 2, -0.5], [0.5, math.sqrt(3) / 2]], dtype=np.complex128)
    base_alg = qsim.QueryAlgorithm(
        layout=layout,
        steps=((qsim.Gate.block(rot, (0,)),), qsim.QUERY, ()),
        measure=qsim.Measurement(registers=("index",)),
    )
    w_base = make_strong(xor2, "00", "01", "*")
    base = protocols.sample_interrupt(base_alg, w_base, seed=seed)
    amp1 = protocols.find_index_amplified(base_alg, w_base, rounds=1, seed=seed)
    if abs(base.exact_success - 0.25) > 1e-12 or abs(amp1.exact_success - 1.0) > 1e-9:
        ok = False
    computed = {
        "max_identity_error": worst_identity,
        "max_aa0_error": worst_aa0,
        "base_p": base.exact_success,
        "amplified_once": amp1.exact_success,
    }
    return computed, ok


_CHECKS: dict[str, tuple[str, str, object]] = {
    "01-fbs-indexing": (
        "fbs(indexing_n) = n + 1 for n in {2, 3}",
        "values 3 and 4 within 1e-6",
        _check_fbs_indexing,
    ),
    "02-measures-catalog": (
        "bs <= fbs <= n at every domain point; LP value certified by its dual; float LP agrees with the rational vertex oracle for n <= 3",
        "duality gap <= 1e-7; float-vs-exact <= 1e-9",
        _check_measures_catalog,
    ),
    "03-fbs-certificate": (
        "star certificate norm squares to fbs(f, x) with unit per-position norms",
        "norm^2 error <= 1e-7; column norms <= 1 + 1e-9",
        _check_fbs_certificates,
    ),
    "04-sabotage-certificate": (
        "sabotage certificate norm equals fbs(f); per-position norms at most 1 + sqrt(fbs); value at least fbs / (1 + sqrt(fbs))",
        "norm error <= 1e-7; column slack <= 0; value margin >= -1e-9",
        _check_sabotage_certificates,
    ),
    "05-indexing-relation": (
        "indexing relation: m_X = m_Y = C(n, 2); address load products (n-1)^2; data load products C(n, 2)",
        "exact integers, recounted exhaustively, n in {2, 3, 4}, weak and strong",
        _check_indexing_relation,
    ),
    "06-hybrid-argument": (
        "sum_t(p_t + p_t^B) >= 1 - |<psi_x|psi_{x_B}>| and each overlap drop is at most p_{x,t} + p_{y,t}",
        "slack >= -1e-9 on 202 instances",
        _check_hybrid,
    ),
    "07-strong-conversion": (
        "wrapped run equals the source run on x for star inputs and on y for dagger inputs; wrapped queries = 2x source",
        "decision exact to 1e-12 on all 8 strong inputs; TV <= 1e-10 on all pairs",
        _check_conversion,
    ),
    "08-grover-closed-form": (
        "mark-search success mass equals sin^2((2k+1) asin sqrt(m/n))",
        "error <= 1e-10 for n <= 16, m <= n, k <= 5; single mark n=4, k=1 hits 1",
        _check_grover_closed_form,
    ),
    "09-index-finder": (
        "per-trial success = (sum p_t + sum p_t^B) / (2T); zero-round amplification reproduces it; one round lifts 1/4 to 1",
        "identity and zero-round error <= 1e-10; amplified mass 1 within 1e-9",
        _check_index_finder,
    ),
}

DETERMINISM_CHECK = "10-determinism"


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    return value


def _run_base_checks(seed: int, only: str | None = None) -> list[CheckResult]:
    results = []
    for name in sorted(_CHECKS):
        if only is not None and only not in name:
            continue
        claim, expected, fn = _CHECKS[name]
        start = time.perf_counter()
        computed, passed = fn(seed)
        elapsed = time.perf_counter() - start
        results.append(
            CheckResult(
                name=name,
                claim=claim,
                computed=_jsonable(computed),
                expected=expected,
                passed=bool(passed),
                seconds=elapsed,
            )
        )
    return results


def canonical_report(results: list[CheckResult], seed: int) -> str:
    """Deterministic JSON report: no timings, sorted keys, name-fixed order."""
    payload = {
        "seed": seed,
        "passed": all(r.passed for r in results),
        "checks": [r.to_json_dict() for r in sorted(results, key=lambda r: r.name)],
    }
    return json.dumps(payload, sort_keys=True, indent=2)


def run_checks(seed: int = 0, only: str | None = None, determinism: bool = True) -> list[CheckResult]:
    """Run the verification suite; optionally append the byte-determinism check.

    The determinism check re-runs the whole base suite and compares the two
    canonical reports byte for byte, so it only runs without a filter.
    """
    results = _run_base_checks(seed, only)
    if determinism and only is None:
        start = time.perf_counter()
        again = _run_base_checks(seed, only)
        first = canonical_report(results, seed)
        second = canonical_report(again, seed)
        elapsed = time.perf_counter() - start
        results.append(
            CheckResult(
                name=DETERMINISM_CHECK,
                claim="re-running the suite with the same seed reproduces the report byte for byte",
                computed={"bytes": len(first), "identical": first == second},
                expected="byte-identical canonical reports",
                passed=first == second,
                seconds=elapsed,
            )
        )
    return results
