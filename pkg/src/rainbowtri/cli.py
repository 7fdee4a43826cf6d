"""Command-line front end.

Exit codes: 0 when the command succeeds and every check passes, 1 when a
check fails, 2 on input or usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Sequence

from .counting import ORACLE_MAX_N, count_rainbow_triangles_fast, count_rainbow_triangles_oracle, verify_bound
from .entropy import DEFAULT_SUPPORT_CAP, audit_proof
from .errors import RainbowError
from .graph import UNIFORM_BIAS, parse_bias, random_colored_graph, read_graph, serialize_edge_list
from .injection import injection_mapping, verify_injection
from .search import exhaustive_search, hill_climb, tightness_report

PROG = "rainbowtri"
EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {raw!r}") from None


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _text(pairs) -> str:
    return "".join(f"{k}: {v}\n" for k, v in pairs)


# --- commands --------------------------------------------------------------


def cmd_count(args) -> tuple[str, int]:
    g = read_graph(args.input)
    T = count_rainbow_triangles_fast(g)
    out = {"n": g.n, "T": T}
    ok = True
    if args.oracle:
        oracle = count_rainbow_triangles_oracle(g, max_n=args.n_cap)
        ok = oracle == T
        out.update(oracle=oracle, match=ok)
    text = _dump_json(out) if args.format == "json" else _text(out.items())
    return text, EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_bound(args) -> tuple[str, int]:
    report = verify_bound(read_graph(args.input))
    d = report.to_dict()
    text = _dump_json(d) if args.format == "json" else _text(d.items())
    return text, EXIT_OK if report.holds else EXIT_CHECK_FAILED


def cmd_inject_verify(args) -> tuple[str, int]:
    g = read_graph(args.input)
    if args.vertex is not None:
        g.check_vertex(args.vertex)
        vertices = [args.vertex]
    else:
        vertices = list(range(g.n))
    with ThreadPoolExecutor(max_workers=max(1, args.threads)) as pool:
        reports = list(pool.map(lambda x: verify_injection(g, x), vertices))
    ok = all(r.ok and r.s_size <= r.t_size for r in reports)

    if args.dump_mapping:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["x", "x1", "x2", "y", "z", "z1", "z2", "a", "b1", "b2", "ell_u", "ell_v"])
        for x in vertices:
            for s, t in injection_mapping(g, x):
                writer.writerow([x, *s, t.a, t.b1, t.b2, *t.ell])
        if args.dump_mapping == "-":
            return buf.getvalue(), EXIT_OK if ok else EXIT_CHECK_FAILED
        with open(args.dump_mapping, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())

    if args.format == "json":
        text = _dump_json({"ok": ok, "reports": [r.to_dict() for r in reports]})
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["x", "s_size", "t_size", "well_defined", "injective", "roundtrip_ok"])
        for r in reports:
            writer.writerow(r.to_dict().values())
        text = buf.getvalue()
    else:
        text = "".join(
            f"x={r.x} |S|={r.s_size} |T|={r.t_size} "
            f"well_defined={r.well_defined} injective={r.injective} roundtrip={r.roundtrip_ok}\n"
            for r in reports
        ) + f"ok: {ok}\n"
    return text, EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_entropy_audit(args) -> tuple[str, int]:
    ledger = audit_proof(read_graph(args.input), support_cap=args.support_cap)
    code = EXIT_OK if ledger.overall else EXIT_CHECK_FAILED
    if args.ledger_csv or args.format == "csv":
        return ledger.to_csv(), code
    if args.format == "json":
        return _dump_json(ledger.to_dict()), code
    lines = [f"n={ledger.n} R={ledger.R} G={ledger.G} B={ledger.B} T={ledger.T}\n"]
    for s in ledger.steps:
        mark = "ok  " if s.passed else "FAIL"
        lines.append(f"{mark} {s.id:<5} {s.description}  [{s.lhs_bits:.9f} vs {s.rhs_bits:.9f}]\n")
    lines.append(f"overall: {ledger.overall}\n")
    return "".join(lines), code


def cmd_search(args) -> tuple[str, int]:
    if args.exhaustive is not None:
        result = exhaustive_search(args.exhaustive, threads=args.threads)
    else:
        if args.seed is None:
            raise UsageError("--hill-climb requires --seed")
        if args.n is None:
            raise UsageError("--hill-climb requires --n")
        result = hill_climb(args.n, args.p, args.bias, args.steps, args.seed)
    d = result.to_dict()
    if args.format == "json":
        return _dump_json(d), EXIT_OK
    head = [(k, d[k]) for k in ("method", "seed", "instances_examined", "best_ratio_rational")]
    text = _text(head) + f"best_instances: {len(result.best_instances)}\n"
    return text, EXIT_OK


def cmd_gen(args) -> tuple[str, int]:
    g = random_colored_graph(args.n, args.p, seed=args.seed, bias=args.bias)
    return serialize_edge_list(g), EXIT_OK


def cmd_tightness(args) -> tuple[str, int]:
    rep = tightness_report(read_graph(args.input), support_cap=args.support_cap)
    code = EXIT_OK if rep.ledger.overall and rep.bound.holds else EXIT_CHECK_FAILED
    if args.format == "json":
        return _dump_json(rep.to_dict()), code
    if args.format == "csv":
        return rep.ledger.to_csv(), code
    lines = [f"T={rep.bound.T} ratio={rep.bound.to_dict()['ratio_rational']} total_slack={rep.total_slack:.9f}\n"]
    lines += [f"{k:<5} slack={v:.9f}\n" for k, v in rep.slacks.items()]
    return "".join(lines), code


# --- parser ----------------------------------------------------------------


def _bias(text: str):
    try:
        return parse_bias(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _probability(text: str) -> float:
    try:
        p = float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid probability {text!r}") from None
    if not 0 <= p <= 1:
        raise argparse.ArgumentTypeError(f"probability must lie in [0, 1], got {text}")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--threads", type=int, default=1, help="worker cap for parallel commands")
    common.add_argument("--support-cap", type=int, default=None, help="max joint-distribution outcomes")
    common.add_argument("--n-cap", type=int, default=None, help="max vertex count for the brute-force oracle")

    parser = argparse.ArgumentParser(prog=PROG, description="Rainbow-triangle bound toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="count rainbow triangles")
    p.add_argument("input", help="edge-list file or '-' for stdin")
    p.add_argument("--oracle", action="store_true", help="cross-check with brute force")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("bound", parents=[common], help="check T^2 <= 2RGB")
    p.add_argument("input")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("inject-verify", parents=[common], help="verify the injection at each vertex")
    p.add_argument("input")
    p.add_argument("--vertex", type=int, default=None)
    p.add_argument("--dump-mapping", metavar="PATH", default=None, help="write the s -> t table as CSV")
    p.set_defaults(func=cmd_inject_verify)

    p = sub.add_parser("entropy-audit", parents=[common], help="evaluate the entropy ledger")
    p.add_argument("input")
    p.add_argument("--ledger-csv", action="store_true")
    p.set_defaults(func=cmd_entropy_audit)

    p = sub.add_parser("search", parents=[common], help="search for extremal instances")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exhaustive", type=int, metavar="N")
    mode.add_argument("--hill-climb", action="store_true")
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=_probability, default=0.5)
    p.add_argument("--bias", type=_bias, default=UNIFORM_BIAS)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("gen", parents=[common], help="random colored G(n, p) as an edge list")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=_probability, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--bias", type=_bias, default=UNIFORM_BIAS)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("tightness", parents=[common], help="per-step slack of the entropy ledger")
    p.add_argument("input")
    p.set_defaults(func=cmd_tightness)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.support_cap is None:
            args.support_cap = _env_int("RAINBOWTRI_SUPPORT_CAP", DEFAULT_SUPPORT_CAP)
        if args.n_cap is None:
            args.n_cap = _env_int("RAINBOWTRI_N_CAP", ORACLE_MAX_N)
        text, code = args.func(args)
    except (RainbowError, UsageError, OSError, ValueError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(text)
    sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
