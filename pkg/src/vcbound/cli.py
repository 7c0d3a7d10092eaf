"""Command-line front end.

Exit codes: 0 ok, 1 usage, 2 parse or I/O error, 3 failed precondition
(including VC-dimension above d), 4 search budget exhausted.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

from . import __version__
from .extremal import CONSTRUCTIONS, audit_sweep, impossibility_audit, verify_structure
from .kk import cascade_rep, kk_bound
from .polycert import ShatteredError, extended_matrix, find_witnesses, triangular_certificate
from .search import DEFAULT_BUDGET, max_family_search
from .setsystem import (
    ParseError,
    SetSystemError,
    format_set,
    load_system,
    mask_of,
    serialize_system,
    vc_dimension,
)
from .suites import SUITES, dumps, run_suite

EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_BUDGET = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _set_arg(text: str) -> int:
    text = text.strip().strip("{}")
    if not text:
        return 0
    try:
        return mask_of(int(t) for t in text.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad set {text!r}") from None


def _read_system(path: str):
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return load_system(text)


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return buf.getvalue()


def _flat(d: dict) -> dict:
    return {k: v for k, v in d.items() if not isinstance(v, (list, dict))}


class _Output:
    def __init__(self, args):
        self.path = getattr(args, "out", None)

    def emit(self, text: str) -> None:
        if self.path:
            with open(self.path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def cmd_vcdim(args) -> int:
    F = _read_system(args.file)
    v = vc_dimension(F)
    k = F.uniformity()
    rec = {"version": __version__, "vcdim": v, "size": len(F), "n": F.n,
           "uniformity": k}
    if args.format == "json":
        _Output(args).emit(dumps(rec))
    elif args.format == "csv":
        _Output(args).emit(_csv([rec]))
    else:
        _Output(args).emit(f"vcdim={v} size={len(F)}\nuniformity={'none' if k is None else k}\n")
    return 0


def cmd_certify(args) -> int:
    F = _read_system(args.file)
    try:
        cert = triangular_certificate(F, args.d)
    except ShatteredError as exc:
        print(f"shattered: {format_set(exc.member)}", file=sys.stderr)
        raise
    data = cert.to_json(__version__)
    if args.format == "json":
        _Output(args).emit(dumps(data))
    else:
        if args.out:
            _Output(args).emit(dumps(data))
        lines = [cert.summary(),
                 f"triangular={'pass' if cert.triangular else 'FAIL'} "
                 f"rank={cert.matrix_rank} rows={cert.rows}",
                 f"count: {cert.count_lhs} <= {cert.count_rhs}"]
        for name, ok in cert.case_verdicts.items():
            lines.append(f"  [{'pass' if ok else 'FAIL'}] {name}")
        if cert.violation:
            r, c = cert.violation
            lines.append(f"first violation at point {format_set(cert.matrix.points[r])}, "
                         f"polynomial {cert.matrix.labels[c]}")
        sys.stdout.write("\n".join(lines) + "\n")
    return 0 if cert.passed else EXIT_PRECONDITION


def cmd_kk(args) -> int:
    if args.m < 1 or args.d < 1:
        raise SetSystemError("kk needs m >= 1 and d >= 1")
    b = kk_bound(args.m, args.d)
    rep = cascade_rep(args.m, args.d + 1)
    rec = {"version": __version__, **b.as_dict(), "cascade": str(rep),
           "cascade_bound": rep.shadow_bound()}
    if args.format == "json":
        _Output(args).emit(dumps(rec))
    elif args.format == "csv":
        _Output(args).emit(_csv([rec]))
    else:
        d = b.as_dict()
        _Output(args).emit(f"alpha={d['alpha']} bound={d['bound']}\n"
                           f"cascade={rep} cascade_bound={rep.shadow_bound()}\n")
    return 0


def cmd_search(args) -> int:
    res = max_family_search(args.n, args.d, mode=args.mode, budget=args.budget,
                            seed=args.seed, threads=args.threads)
    data = res.to_json(__version__, timing=args.timing)
    if args.format == "json":
        _Output(args).emit(dumps(data))
    elif args.format == "csv":
        _Output(args).emit(_csv([_flat(data)]))
    else:
        head = (f"# n={res.n} d={res.d} mode={res.mode} best={res.size} "
                f"status={res.status} nodes={res.nodes}\n")
        if args.timing:
            head += f"# wall_time={res.wall_time:.3f}s\n"
        _Output(args).emit(head + serialize_system(res.family))
    if res.budget_exhausted:
        print("search budget exhausted; result is a lower bound only", file=sys.stderr)
        return EXIT_BUDGET
    return 0


def cmd_audit(args) -> int:
    if args.sweep:
        dmax, nmax = args.sweep
        reports = audit_sweep(dmax, nmax)
    else:
        if args.n is None or args.d is None:
            raise UsageError("audit needs N D or --sweep DMAX NMAX")
        reports = [impossibility_audit(args.n, args.d)]
    if args.format == "json":
        body = {"version": __version__, "audits": [r.to_json() for r in reports]}
        _Output(args).emit(dumps(body))
    elif args.format == "csv":
        _Output(args).emit(_csv([r.to_json() for r in reports]))
    else:
        _Output(args).emit("".join(
            (f"n={r.n} d={r.d} " if args.sweep else "") + r.line() + "\n" for r in reports))
    if args.figure:
        from .plotting import audit_figure
        audit_figure(reports, args.figure)
    return 0 if all(r.confirmed for r in reports) else EXIT_PRECONDITION


def cmd_construct(args) -> int:
    F = CONSTRUCTIONS[args.name](args.n, args.d)
    if args.format == "json":
        from .setsystem import system_to_json
        _Output(args).emit(dumps({"version": __version__, **system_to_json(F)}))
    else:
        _Output(args).emit(serialize_system(F))
    return 0


def cmd_dmatrix(args) -> int:
    F = _read_system(args.file)
    try:
        wit = find_witnesses(F, args.d)
    except ShatteredError as exc:
        print(f"shattered: {format_set(exc.member)}", file=sys.stderr)
        raise
    if bin(args.Y).count("1") != args.d + 1:
        raise SetSystemError(f"Y must have d + 1 = {args.d + 1} elements")
    E = extended_matrix(wit, args.Y, args.Z)
    info = E.summary()
    verdict = "consistent" if info["consistent"] else "INCONSISTENT"
    if args.format == "json":
        info = {"version": __version__, **info,
                "T": E.T, "R": E.R, "layout_violations": E.layout_violations()}
        if args.matrix:
            info["D"] = [[str(v) for v in row] for row in E.D]
        _Output(args).emit(dumps(info))
    else:
        _Output(args).emit(
            f"order={info['order']} det={info['det']} m0={info['m0']} TR={info['TR']}\n"
            f"singular ⟺ m0=1: {verdict}\n")
    return 0 if info["consistent"] else EXIT_PRECONDITION


def cmd_structure(args) -> int:
    F = _read_system(args.file)
    try:
        wit = find_witnesses(F, args.d)
    except ShatteredError as exc:
        print(f"shattered: {format_set(exc.member)}", file=sys.stderr)
        raise
    rep = verify_structure(wit)
    data = {"version": __version__, **rep.to_json()}
    if args.format == "json":
        _Output(args).emit(dumps(data))
    else:
        _Output(args).emit(
            f"property1={'pass' if rep.property1 else 'fail'} "
            f"violations={rep.property1_violation_count}\n"
            f"property2={'pass' if rep.property2 else 'fail'}\n"
            f"|Y|={rep.complement_size} |shadow(Y)|={rep.complement_shadow_size} "
            f"size-d witnesses={rep.size_d_witnesses}\n")
    return 0


def cmd_suite(args) -> int:
    res = run_suite(args.name, seed=args.seed, count=args.count, threads=args.threads)
    if args.format == "json":
        _Output(args).emit(dumps(res))
    elif args.format == "csv":
        _Output(args).emit(_csv([_flat(r) for r in res["instances"]]))
    else:
        _Output(args).emit(
            f"suite={res['suite']} seed={res['seed']} count={res['count']} "
            f"failures={len(res['failures'])}\n")
    return 0 if res["passed"] else EXIT_PRECONDITION


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    common.add_argument("--out", default=None, help="write output to this file")

    p = _Parser(prog="vcbound", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"vcbound {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("vcdim", parents=[common], help="VC-dimension of a family")
    s.add_argument("file")
    s.set_defaults(func=cmd_vcdim)

    s = sub.add_parser("certify", parents=[common], help="shadow certificate")
    s.add_argument("file")
    s.add_argument("-d", type=int, required=True)
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("kk", parents=[common], help="Kruskal-Katona shadow bounds")
    s.add_argument("m", type=int)
    s.add_argument("d", type=int)
    s.set_defaults(func=cmd_kk)

    s = sub.add_parser("search", parents=[common], help="maximum family search")
    s.add_argument("n", type=int)
    s.add_argument("d", type=int)
    s.add_argument("--mode", choices=("exact", "greedy", "local"), default="exact")
    s.add_argument("--timing", action="store_true", help="include wall time")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("audit", parents=[common], help="impossibility arithmetic")
    s.add_argument("n", type=int, nargs="?")
    s.add_argument("d", type=int, nargs="?")
    s.add_argument("--sweep", type=int, nargs=2, metavar=("DMAX", "NMAX"))
    s.add_argument("--figure", default=None, help="write a PNG/PDF figure here")
    s.set_defaults(func=cmd_audit)

    s = sub.add_parser("construct", parents=[common], help="write a named construction")
    s.add_argument("name", choices=sorted(CONSTRUCTIONS))
    s.add_argument("n", type=int)
    s.add_argument("d", type=int)
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("dmatrix", parents=[common], help="extended matrix for (Y, Z)")
    s.add_argument("file")
    s.add_argument("-d", type=int, required=True)
    s.add_argument("--Y", type=_set_arg, required=True, help="e.g. 2,3,4")
    s.add_argument("--Z", type=_set_arg, required=True, help='e.g. 2 or "" for the empty set')
    s.add_argument("--matrix", action="store_true", help="include D in JSON output")
    s.set_defaults(func=cmd_dmatrix)

    s = sub.add_parser("structure", parents=[common], help="check the exactly-one and non-trace properties")
    s.add_argument("file")
    s.add_argument("-d", type=int, required=True)
    s.set_defaults(func=cmd_structure)

    s = sub.add_parser("suite", parents=[common], help="seeded randomized suites")
    s.add_argument("name", choices=sorted(SUITES))
    s.add_argument("--count", type=int, default=None)
    s.set_defaults(func=cmd_suite)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"vcbound: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"vcbound: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"vcbound: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (SetSystemError, ValueError) as exc:
        print(f"vcbound: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
