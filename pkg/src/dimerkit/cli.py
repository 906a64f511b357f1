"""The ``dimerkit`` command.

Exit codes: 0 success or the property holds, 1 the property fails, 2 invalid
input, 3 inconclusive at the current bounds, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .bounds import ENV_VAR, Bounds, default_bounds, parse_bounds
from .model import DimerQuiver, ParseError, format_model, validate, dumps_json

SCHEMA = "dimerkit/1"

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 3, 64


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def emit(data: dict, out) -> None:
    out.write(json.dumps(data, sort_keys=True, indent=2) + "\n")


def _report(command: str, **fields) -> dict:
    return {"schema": SCHEMA, "command": command, **fields}


def _load(ref: str, require: bool = True) -> DimerQuiver:
    from .corpus import load

    try:
        q = load(ref)
    except ParseError as exc:
        raise InputError(f"{ref}: {exc}") from exc
    except (OSError, KeyError, ValueError) as exc:
        raise InputError(f"{ref}: {exc}") from exc
    if require:
        report = validate(q)
        if not report.valid:
            raise InputError(f"{ref}: not a dimer quiver; failed checks: {', '.join(report.failed)}")
    return q


def _bounds(args) -> Bounds:
    try:
        b = parse_bounds(args.bounds) if args.bounds else default_bounds()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if getattr(args, "max_len", None) is not None:
        b = replace(b, max_len=args.max_len, pair_len=args.max_len)
    if getattr(args, "degree_bound", None) is not None:
        b = replace(b, degree=args.degree_bound)
    return b


def _contraction(q: DimerQuiver, path: str | None):
    from .contraction import ContractionError, contract

    if path is None:
        return None
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return contract(q, data["contracted"])
    except (OSError, ValueError, KeyError, ContractionError) as exc:
        raise InputError(f"{path}: bad contraction file: {exc}") from exc


def _require_nondegenerate(q: DimerQuiver) -> None:
    from .criteria import Degenerate, require_nondegenerate

    try:
        require_nondegenerate(q)
    except Degenerate as exc:
        raise InputError(str(exc)) from exc


# ----------------------------------------------------------------------------
# subcommands


def cmd_validate(args, out) -> int:
    from .corpus import load

    try:
        q = load(args.file)
    except ParseError as exc:
        if args.json:
            emit(_report("validate", valid=False, parse_error={"message": exc.message, "line": exc.line,
                                                                "column": exc.column}), out)
        else:
            out.write(f"parse error: {exc}\n")
        return EXIT_INVALID
    except (OSError, KeyError) as exc:
        raise InputError(str(exc)) from exc
    report = validate(q)
    if args.json:
        emit(_report("validate", **report.to_dict()), out)
    else:
        for c in report.checks:
            line = f"{'ok  ' if c.passed else 'FAIL'} {c.name}"
            if not c.passed:
                line += f": {c.witness}"
            out.write(line + "\n")
        for w in report.warnings:
            out.write(f"warning: {w}\n")
        out.write("valid\n" if report.valid else "invalid\n")
    return EXIT_OK if report.valid else EXIT_INVALID


def cmd_matchings(args, out) -> int:
    from .matchings import TooManyMatchings, enumerate_perfect_matchings

    q = _load(args.file)
    b = _bounds(args)
    try:
        pms = enumerate_perfect_matchings(q, b.matching_cap)
    except TooManyMatchings as exc:
        out.write(f"{exc}\n")
        return EXIT_INCONCLUSIVE
    shown = [d for d in pms if d.simple or not args.simple_only]
    if args.json:
        emit(_report("matchings", count=len(pms), simple=sum(d.simple for d in pms),
                     matchings=[{"id": d.id, "arrows": q.names(sorted(d.arrows)), "simple": d.simple}
                                for d in shown]), out)
    else:
        for d in shown:
            out.write(f"{d.id:4d}  {'simple ' if d.simple else '       '} {' '.join(q.names(sorted(d.arrows)))}\n")
        out.write(f"{len(pms)} perfect matchings, {sum(d.simple for d in pms)} simple\n")
    return EXIT_OK if pms else EXIT_FAIL


def cmd_paths(args, out) -> int:
    from .paths import enumerate_paths, eta_weight, tau_weight, PathWord

    q = _load(args.file)
    for v in (args.source, args.target):
        if not 0 <= v < q.num_vertices:
            raise UsageError(f"no vertex {v}")
    winding = None
    if args.winding is not None:
        try:
            winding = tuple(int(s) for s in args.winding.split(","))
            assert len(winding) == 2
        except (ValueError, AssertionError):
            raise UsageError("--winding expects u1,u2") from None
    found = []
    if args.source == args.target and winding in (None, (0, 0)):
        found.append(PathWord.trivial(args.source))
    for p in enumerate_paths(q, args.max_len, start=args.source):
        if p.head == args.target and (winding is None or p.winding == winding):
            found.append(p)
    found.sort(key=lambda p: (len(p), p.arrows))
    rows = [{"arrows": p.names(q), "winding": list(p.winding), "tau": list(tau_weight(q, p)),
             "eta": list(eta_weight(q, p))} for p in found]
    if args.json:
        emit(_report("paths", source=args.source, target=args.target, max_len=args.max_len, paths=rows), out)
    else:
        for p, row in zip(found, rows):
            out.write(f"{p.label(q):<24} winding={tuple(p.winding)} tau={tuple(row['tau'])} "
                      f"eta={tuple(row['eta'])}\n")
        out.write(f"{len(found)} paths\n")
    return EXIT_OK


def cmd_check(args, out) -> int:
    from .criteria import theorem_report

    q = _load(args.file)
    _require_nondegenerate(q)
    b = _bounds(args)
    psi = _contraction(q, args.contraction)
    report = theorem_report(q, psi, b)
    if args.json:
        emit(_report("check", **report.to_dict()), out)
    else:
        out.write("cancellative\n" if report.cancellative else "non-cancellative\n")
        for c in report.conditions:
            out.write(f"  ({c.number:2d}) {c.verdict:<15} {c.to_dict()['condition']}  [{c.method}]\n")
        for flag in report.flags:
            out.write(f"warning: {flag}\n")
        for name, w in report.witnesses.items():
            out.write(f"{name}: {json.dumps(w, sort_keys=True)}\n")
        if report.contraction is not None:
            out.write(f"contraction: {', '.join(report.contraction['contracted']) or '(identity)'}\n")
    return EXIT_OK if report.cancellative else EXIT_FAIL


def cmd_algebras(args, out) -> int:
    from .algebras import check_R_equals_S, compare_corner_rings
    from .contraction import find_cyclic_contraction, verify_cyclic
    from .criteria import check_cancellative

    q = _load(args.file)
    _require_nondegenerate(q)
    b = _bounds(args)
    psi = _contraction(q, args.contraction)
    if psi is None and not check_cancellative(q).cancellative:
        psi = find_cyclic_contraction(q, b)
        if psi is None:
            out.write("non-cancellative and no cyclic contraction found within bounds\n")
            return EXIT_INCONCLUSIVE
    elif psi is not None:
        verdict = verify_cyclic(psi, b)
        if not verdict.cyclic:
            out.write(f"contraction is not cyclic: {verdict.reason}\n")
            return EXIT_INCONCLUSIVE if verdict.status == "inconclusive" else EXIT_FAIL
    use = None if psi is None or psi.trivial else psi
    cmp = compare_corner_rings(q, use, b)
    rs = check_R_equals_S(q, use, b)
    if args.json:
        emit(_report(
            "algebras",
            contraction=None if use is None else use.to_dict(),
            corners={str(i): c.to_dict() for i, c in enumerate(cmp.semigroups)},
            corners_equal=cmp.all_equal,
            corner_differences=[{"in": i, "missing_from": j, "monomial": cmp.semigroups[i].monomial(w)}
                                for (i, j), w in sorted(cmp.witnesses.items())],
            R_equals_S=rs.to_dict(),
        ), out)
    else:
        if use is not None:
            out.write(f"weights through the contraction of {', '.join(q.names(sorted(use.contracted)))}\n")
        for i, c in enumerate(cmp.semigroups):
            out.write(f"corner {i}: {_gens(c)}\n")
        out.write(f"S: {_gens(rs.S)}\nR: {_gens(rs.R)}\n")
        out.write(f"R = S: {rs.status} (degree bound {rs.S.degree_bound})\n")
        if rs.witness is not None:
            out.write(f"  {rs.S.monomial(rs.witness)} is missing at vertex {rs.missing_vertex}\n")
    return {"equal-at-bound": EXIT_OK, "differ": EXIT_FAIL}.get(rs.status, EXIT_INCONCLUSIVE)


def _gens(sg) -> str:
    parts = []
    for g in sg.generators:
        mono = sg.monomial(g)
        parts.append("*".join(k if e == 1 else f"{k}^{e}" for k, e in mono.items()) or "1")
    return ", ".join(parts) or "(none)"


def cmd_contract(args, out) -> int:
    from .contraction import ContractionError, contract, find_cyclic_contraction, reduce_2cycles, verify_cyclic

    q = _load(args.file)
    b = _bounds(args)
    if args.find:
        _require_nondegenerate(q)
        psi = find_cyclic_contraction(q, b, args.max_candidates)
        if psi is None:
            out.write("no cyclic contraction found within bounds\n")
            return EXIT_INCONCLUSIVE
        verdict = verify_cyclic(psi, b)
    else:
        if not args.arrows:
            raise UsageError("contract needs --arrows or --find")
        names = [s for s in args.arrows.split(",") if s]
        try:
            psi = contract(q, names)
        except KeyError as exc:
            raise UsageError(f"unknown arrow {exc}") from None
        except ContractionError as exc:
            out.write(f"cannot contract: {exc}\n")
            return EXIT_FAIL
        verdict = verify_cyclic(psi, b) if not validate(psi.target).failed else None
    target = reduce_2cycles(psi.target) if args.reduce_2cycles else psi.target
    if args.output:
        Path(args.output).write_text(dumps_json(target) if args.output.endswith(".json") else format_model(target),
                                     encoding="utf-8")
    if args.map:
        Path(args.map).write_text(json.dumps(psi.to_dict(), sort_keys=True, indent=2) + "\n", encoding="utf-8")
    status = verdict.status if verdict else "target invalid"
    if args.json:
        emit(_report("contract", contraction=psi.to_dict(), verdict=status,
                     reason=verdict.reason if verdict else "", target=format_model(target)), out)
    else:
        out.write(f"contracted: {', '.join(q.names(sorted(psi.contracted))) or '(none)'}\n")
        out.write(f"verdict: {status}" + (f" ({verdict.reason})" if verdict and verdict.reason else "") + "\n")
        if not args.output:
            out.write(format_model(target))
    if verdict is None or verdict.status == "not-cyclic":
        return EXIT_FAIL
    return EXIT_OK if verdict.cyclic else EXIT_INCONCLUSIVE


def cmd_corpus(args, out) -> int:
    from . import corpus

    if args.name is None:
        if args.json:
            emit(_report("corpus", models=corpus.names()), out)
        else:
            out.write("\n".join(corpus.names()) + "\n")
        return EXIT_OK
    try:
        e = corpus.entry(args.name)
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from exc
    if args.json:
        emit(_report("corpus", name=e.name, source=e.source, expected=e.expected), out)
    else:
        out.write(e.source)
    return EXIT_OK


def cmd_draw(args, out) -> int:
    from .draw import MissingCoordinates, to_dot, to_svg
    from .matchings import enumerate_perfect_matchings

    q = _load(args.file)
    matched = ()
    if args.matching is not None:
        pms = enumerate_perfect_matchings(q)
        if not 0 <= args.matching < len(pms):
            raise UsageError(f"no perfect matching {args.matching} (there are {len(pms)})")
        matched = pms[args.matching].arrows
    fmt = args.format or ("dot" if args.output and args.output.endswith(".dot") else "svg")
    try:
        text = to_svg(q, matched) if fmt == "svg" else to_dot(q, matched)
    except MissingCoordinates as exc:
        raise InputError(str(exc)) from exc
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK


# ----------------------------------------------------------------------------


def build_parser() -> Parser:
    common = Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--bounds", help=f"bounds profile or overrides, e.g. quick,degree=6 (default from ${ENV_VAR})")
    common.add_argument("-v", "--verbose", action="count", default=0)

    p = Parser(prog="dimerkit", description="Dimer quivers on the torus.")
    p.add_argument("--version", action="version", version=f"dimerkit {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    s = sub.add_parser("validate", parents=[common], help="check the dimer-quiver invariants")
    s.add_argument("file", help="a .dimer or JSON file, or corpus:<name>")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("matchings", parents=[common], help="list perfect matchings")
    s.add_argument("file")
    s.add_argument("--simple-only", action="store_true")
    s.set_defaults(func=cmd_matchings)

    s = sub.add_parser("paths", parents=[common], help="list paths between two vertices")
    s.add_argument("file")
    s.add_argument("--from", dest="source", type=int, required=True)
    s.add_argument("--to", dest="target", type=int, required=True)
    s.add_argument("--max-len", type=int, required=True)
    s.add_argument("--winding", help="u1,u2")
    s.set_defaults(func=cmd_paths)

    s = sub.add_parser("check", parents=[common], help="decide cancellativity and report all conditions")
    s.add_argument("file")
    s.add_argument("--contraction", help="JSON file with a 'contracted' arrow list")
    s.add_argument("--max-len", type=int)
    s.add_argument("--degree-bound", type=int)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("algebras", parents=[common], help="corner semigroups, S and R")
    s.add_argument("file")
    s.add_argument("--contraction")
    s.add_argument("--degree-bound", type=int)
    s.set_defaults(func=cmd_algebras)

    s = sub.add_parser("contract", parents=[common], help="contract arrows or search for a cyclic contraction")
    s.add_argument("file")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--arrows", help="comma-separated arrow names")
    g.add_argument("--find", action="store_true")
    s.add_argument("--reduce-2cycles", action="store_true")
    s.add_argument("--max-candidates", type=int)
    s.add_argument("-o", "--output", help="write the target quiver (.dimer, or .json)")
    s.add_argument("--map", help="write the contraction maps as JSON")
    s.set_defaults(func=cmd_contract)

    s = sub.add_parser("corpus", parents=[common], help="list or print built-in models")
    s.add_argument("name", nargs="?")
    s.set_defaults(func=cmd_corpus)

    s = sub.add_parser("draw", parents=[common], help="SVG or DOT picture of the fundamental domain")
    s.add_argument("file")
    s.add_argument("--format", choices=("svg", "dot"))
    s.add_argument("--matching", type=int, help="highlight the perfect matching with this index")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_draw)
    return p


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), stream=err,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"dimerkit: error: {exc}\n")
        return EXIT_USAGE
    except InputError as exc:
        err.write(f"dimerkit: invalid input: {exc}\n")
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
