"""Command-line front end.

Subcommands: fbs, bs, adv, sab-enum, protocol {convert-strong | hybrid |
grover-find | index-find}, verify-all.  Reports are JSON on stdout (or
--out); trace tables can be CSV.  Exit codes: 0 pass, 1 check failure,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import adversary, measures, protocols, qsim, verify
from .boolfn import BitString, BoolFnError, load_function, make_indexing, make_named
from .sabotage import SabString, SabotageError, StrongInput, enumerate_sabotaged

_USAGE_ERROR = 2


class CliError(Exception):
    """Unresolvable function, algorithm, or argument combination."""


def _default_seed() -> int:
    try:
        return int(os.environ.get("SABLAB_SEED", "0"))
    except ValueError:
        return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--fn", help="named catalog function (AND, OR, PARITY, MAJ, XOR2, IND)")
    parser.add_argument("--file", help="path to a function file (JSON)")
    parser.add_argument("--n", type=int, help="arity for --fn")
    parser.add_argument("--x", help="base point as a bit string")
    parser.add_argument("--seed", type=int, default=_default_seed(), help="64-bit seed")
    parser.add_argument("--tol", type=float, help="numeric tolerance override")
    parser.add_argument("--out", help="write the report to this path instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"), default="json")


def _resolve_function(args):
    if args.file:
        with open(args.file, "r", encoding="utf-8") as handle:
            return load_function(handle.read())
    if not args.fn:
        raise CliError("need --fn NAME or --file PATH")
    name = args.fn.upper()
    if args.n is None:
        raise CliError("--fn needs --n")
    if name == "IND":
        return make_indexing(args.n)
    return make_named(name, args.n)


def _resolve_algorithm(spec: str | None, path: str | None) -> qsim.QueryAlgorithm:
    if path:
        with open(path, "r", encoding="utf-8") as handle:
            return qsim.algorithm_from_json(handle.read())
    if spec is None:
        raise CliError("need --alg NAME or --alg-file PATH")
    name = spec.lower()
    if name == "deutsch":
        return qsim.deutsch_parity()
    if name.startswith("grover-or"):
        parts = name.split("-")
        try:
            n, k = int(parts[2]), int(parts[3])
        except (IndexError, ValueError):
            raise CliError("grover-or algorithms are named grover-or-N-K") from None
        return qsim.grover_or(n, k)
    raise CliError(f"unknown algorithm {spec!r}; use deutsch or grover-or-N-K")


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _emit_json(args, payload) -> None:
    _emit(args, json.dumps(payload, sort_keys=True, indent=2))


def _cmd_fbs(args) -> int:
    f = _resolve_function(args)
    tol = args.tol if args.tol is not None else measures.simplex.PIVOT_TOL
    if args.x is not None:
        sol = measures.fbs(f, args.x, tol=tol)
        sol.check_certificate(f)
        value, x = sol.value, BitString.coerce(args.x)
    else:
        value, x = measures.fbs_global(f)
        sol = measures.fbs(f, x, tol=tol)
        sol.check_certificate(f)
    _emit_json(
        args,
        {
            "function": f.name,
            "value": float(value),
            "x": str(x),
            "weights": [{"y": str(y), "w": float(w)} for y, w in sorted(sol.weights.items())],
            "dual": [float(u) for u in sol.dual],
        },
    )
    return 0


def _cmd_bs(args) -> int:
    f = _resolve_function(args)
    if args.x is not None:
        value, x = measures.block_sensitivity(f, args.x), BitString.coerce(args.x)
    else:
        best = max(((measures.block_sensitivity(f, p), p) for p in f.domain()), key=lambda t: (t[0], [-b for b in t[1].bits]))
        value, x = best
    _emit_json(args, {"function": f.name, "value": int(value), "x": str(x)})
    return 0


def _cmd_adv(args) -> int:
    if args.construction == "indexing-relation":
        if args.n is None:
            raise CliError("indexing-relation needs --n")
        rel = adversary.build_indexing_relation(args.n, strong=args.model == "strong")
        bound = adversary.relation_bound(rel)
        payload = bound.to_json_dict()
        payload["model"] = args.model
        products = sorted(set(payload["per_position"].values()))
        payload["aggregates"] = {"max": max(products), "min": min(products)}
        _emit_json(args, payload)
        return 0
    f = _resolve_function(args)
    value, x = measures.fbs_global(f)
    if args.x is not None:
        x = BitString.coerce(args.x)
    sol = measures.fbs(f, x)
    tol = args.tol if args.tol is not None else adversary.RESIDUAL_TOL
    if args.construction == "fbs":
        cert = adversary.build_fbs_adversary(f, sol, tol=tol)
    else:
        cert = adversary.build_sabotage_adversary(f, sol, tol=tol)
    if args.format == "csv":
        lines = [",".join(f"{v!r}" for v in row) for row in cert.gamma]
        _emit(args, "\n".join(lines) + "\n")
        return 0
    payload = cert.to_json_dict()
    payload["function"] = f.name
    payload["x"] = str(x)
    _emit_json(args, payload)
    return 0


def _cmd_sab_enum(args) -> int:
    f = _resolve_function(args)
    stars, daggers = enumerate_sabotaged(f)
    _emit_json(
        args,
        {
            "function": f.name,
            "count": len(stars),
            "stars": sorted(str(z) for z in stars),
            "daggers": sorted(str(z) for z in daggers),
        },
    )
    return 0


def _strong_from_args(args) -> StrongInput:
    try:
        x_text, y_text = args.pair.split(",")
    except ValueError:
        raise CliError("--pair expects x,y") from None
    return StrongInput.from_pair(
        BitString.from_text(x_text), BitString.from_text(y_text), args.marker
    )


def _cmd_protocol_convert(args) -> int:
    alg = _resolve_algorithm(args.alg, args.alg_file)
    w = _strong_from_args(args)
    conv = protocols.convert_strong(alg)
    decided = conv.decide(w)
    raw = protocols.run_converted(conv, w)
    _emit_json(
        args,
        {
            "protocol": "convert-strong",
            "input": json.loads(w.to_json()),
            "queries_source": alg.query_count,
            "queries_wrapped": conv.wrapped.query_count,
            "output": {str(k): float(v) for k, v in sorted(raw.items(), key=lambda kv: str(kv[0]))},
            "decision": {str(k): float(v) for k, v in sorted(decided.items(), key=lambda kv: str(kv[0]))},
        },
    )
    return 0


def _cmd_protocol_hybrid(args) -> int:
    alg = _resolve_algorithm(args.alg, args.alg_file)
    if args.x is None or not args.block:
        raise CliError("hybrid needs --x and --block")
    block = tuple(int(j) for j in args.block.split(","))
    rep = qsim.hybrid_sum(alg, args.x, block)
    if args.format == "csv":
        lines = ["t,p_x_t,p_y_t"]
        for t, (px, py) in enumerate(zip(rep.p_x, rep.p_y), start=1):
            lines.append(f"{t},{px!r},{py!r}")
        _emit(args, "\n".join(lines) + "\n")
        return 0
    _emit_json(
        args,
        {
            "protocol": "hybrid",
            "x": args.x,
            "block": list(rep.block),
            "p_x": list(rep.p_x),
            "p_y": list(rep.p_y),
            "sum_x": rep.sum_x,
            "sum_y": rep.sum_y,
            "overlap": rep.overlap,
            "lower_bound": 1.0 - rep.overlap,
        },
    )
    return 0


def _cmd_protocol_grover_find(args) -> int:
    if not args.z:
        raise CliError("grover-find needs --z")
    report = protocols.grover_baseline(SabString.from_text(args.z), seed=args.seed)
    _emit_json(args, report.to_json_dict())
    return 0


def _cmd_protocol_index_find(args) -> int:
    alg = _resolve_algorithm(args.alg, args.alg_file)
    w = _strong_from_args(args)
    if args.mode == "repeat":
        report = protocols.find_index_repeat(alg, w, budget=args.budget, seed=args.seed)
    else:
        try:
            report = protocols.find_index_amplified(alg, w, rounds=args.rounds, seed=args.seed)
        except protocols.ProtocolError as exc:
            raise CliError(str(exc)) from exc
    _emit_json(args, report.to_json_dict())
    return 0


def _cmd_verify_all(args) -> int:
    results = verify.run_checks(seed=args.seed, only=args.only)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.name}  ({r.seconds:.2f}s)", file=sys.stderr)
    _emit(args, verify.canonical_report(results, args.seed))
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sablab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_fbs = sub.add_parser("fbs", help="fractional block sensitivity with certificate")
    _add_common(p_fbs)
    p_fbs.set_defaults(handler=_cmd_fbs)

    p_bs = sub.add_parser("bs", help="block sensitivity")
    _add_common(p_bs)
    p_bs.set_defaults(handler=_cmd_bs)

    p_adv = sub.add_parser("adv", help="adversary certificates and relation bounds")
    _add_common(p_adv)
    p_adv.add_argument(
        "--construction",
        choices=("fbs", "sabotage", "indexing-relation"),
        required=True,
    )
    p_adv.add_argument("--model", choices=("weak", "strong"), default="weak")
    p_adv.set_defaults(handler=_cmd_adv)

    p_enum = sub.add_parser("sab-enum", help="enumerate sabotaged inputs")
    _add_common(p_enum)
    p_enum.set_defaults(handler=_cmd_sab_enum)

    p_proto = sub.add_parser("protocol", help="run a quantum procedure")
    proto_sub = p_proto.add_subparsers(dest="protocol", required=True)

    def protocol_parser(name: str, handler) -> argparse.ArgumentParser:
        p = proto_sub.add_parser(name)
        _add_common(p)
        p.add_argument("--alg", help="catalog algorithm: deutsch, grover-or-N-K")
        p.add_argument("--alg-file", help="algorithm file (JSON)")
        p.set_defaults(handler=handler)
        return p

    p_conv = protocol_parser("convert-strong", _cmd_protocol_convert)
    p_conv.add_argument("--pair", required=True, help="x,y bit strings")
    p_conv.add_argument("--marker", default="*", choices=("*", "+"))

    p_hyb = protocol_parser("hybrid", _cmd_protocol_hybrid)
    p_hyb.add_argument("--block", help="comma-separated 1-based positions")

    p_gf = protocol_parser("grover-find", _cmd_protocol_grover_find)
    p_gf.add_argument("--z", help="sabotaged string over 0, 1, *, +")

    p_if = protocol_parser("index-find", _cmd_protocol_index_find)
    p_if.add_argument("--pair", required=True, help="x,y bit strings")
    p_if.add_argument("--marker", default="*", choices=("*", "+"))
    p_if.add_argument("--mode", choices=("repeat", "amplified"), default="repeat")
    p_if.add_argument("--budget", type=int, default=16)
    p_if.add_argument("--rounds", type=int, default=0)

    p_ver = sub.add_parser("verify-all", help="run the full verification suite")
    _add_common(p_ver)
    p_ver.add_argument("--only", help="run only checks whose name contains this string")
    p_ver.set_defaults(handler=_cmd_verify_all)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (CliError, BoolFnError, SabotageError, measures.MeasureError,
            adversary.AdversaryError, qsim.SimulationError, OSError) as exc:
        print(f"sablab: {exc}", file=sys.stderr)
        return _USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
