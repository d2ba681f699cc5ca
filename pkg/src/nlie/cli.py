"""Command-line check runner.

Inputs are ``catalog:NAME`` or a document path, optionally followed by
``#NAME`` to pick one object out of a multi-object document.

Exit codes: 0 all checks pass, 1 a check fails, 2 usage, 3 I/O (also an
unknown catalog name), 4 schema.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
from typing import Optional

from . import __version__
from . import catalog as cat
from .algebra import CheckReport, NLieAlgebra, Scan, check_algebra, check_filippov_jacobi
from .bialgebra import (
    CENTROID_READINGS,
    DEFAULT_CENTROID_READING,
    Cobracket,
    check_bialgebra,
    check_Cj_operad,
    check_cocycle_via_operad,
    check_double_construction,
    check_local_cocycle,
    check_Ri_operad,
    dual_bialgebra,
)
from .cohomology import (
    Cochain,
    adjoint_rep,
    check_representation,
    coadjoint_rep,
    coboundary,
    cohomology,
    tensor_power_rep,
    zero_rep,
)
from .double import ManinTriple, build_double, check_manin_triple, check_metric, theorem_equivalence
from .io import SchemaError, emit_document, parse_document

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_IO, EXIT_SCHEMA = 0, 1, 2, 3, 4


class InputError(Exception):
    """Unreadable input (exit 3)."""


class UsageError(Exception):
    """Well-formed input of the wrong kind (exit 2)."""


# ---------------------------------------------------------------- inputs


class Loaded:
    def __init__(self, uri: str, obj, digest: str):
        self.uri = uri
        self.obj = obj
        self.digest = digest


def _sha(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def load(uri: str) -> Loaded:
    if uri.startswith("catalog:"):
        name = uri[len("catalog:"):]
        try:
            obj = cat.catalog(name)
        except cat.UnknownName as exc:
            raise InputError(str(exc)) from None
        return Loaded(uri, obj, _sha(emit_document([obj])))
    path, _, name = uri.partition("#")
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    doc = parse_document(raw)
    if name:
        try:
            obj = doc.get(name)
        except KeyError:
            raise UsageError(f"{path} has no object named {name!r} (has: {', '.join(doc.names())})") from None
    else:
        # the most derived object wins: triple, then cobracket, then algebra
        for table in (doc.triples, doc.cobrackets, doc.algebras):
            if len(table) == 1:
                obj = next(iter(table.values()))
                break
            if len(table) > 1:
                raise UsageError(f"{path} holds several objects; pick one with #NAME")
        else:
            raise UsageError(f"{path} holds no objects")
    return Loaded(uri, obj, hashlib.sha256(raw).hexdigest())


def _as_algebra(obj) -> NLieAlgebra:
    if isinstance(obj, NLieAlgebra):
        return obj
    if isinstance(obj, Cobracket):
        return obj.algebra
    if isinstance(obj, ManinTriple):
        return obj.metric.algebra
    raise UsageError("expected an algebra")


def _as_cobracket(obj) -> Cobracket:
    if isinstance(obj, Cobracket):
        return obj
    raise UsageError("expected a cobracket")


def _as_triple(obj) -> ManinTriple:
    if isinstance(obj, ManinTriple):
        return obj
    raise UsageError("expected a Manin triple")


# ---------------------------------------------------------------- commands


def _rep(alg: NLieAlgebra, kind: str, power: Optional[int]):
    if kind == "adjoint":
        return adjoint_rep(alg)
    if kind == "coadjoint":
        return coadjoint_rep(alg)
    if kind == "tensor-power":
        return tensor_power_rep(alg, power or alg.arity)
    if kind == "trivial":
        return zero_rep(alg)
    raise UsageError(f"unknown representation {kind!r}")


def cmd_check_algebra(args, inputs):
    return check_algebra(_as_algebra(inputs[0].obj)), None


def cmd_check_rep(args, inputs):
    alg = _as_algebra(inputs[0].obj)
    rep = _rep(alg, args.rep, args.power)
    rng = random.Random(args.seed)
    scan_parts = {"representation": check_representation(rep)}
    if args.samples:
        scan = Scan("coboundary-squared")
        for degree in (1, 2):
            for s in range(args.samples):
                u = Cochain.random(rep, degree, rng)
                dd = coboundary(rep, coboundary(rep, u))
                scan.add({"degree": degree, "sample": s + 1}, dd.values)
        scan_parts["coboundary-squared"] = scan.report()
    return CheckReport.combine(f"representation:{rep.name or args.rep}", scan_parts), None


def cmd_check_bialgebra(args, inputs):
    return check_bialgebra(_as_cobracket(inputs[0].obj)), None


def cmd_check_operad(args, inputs):
    cb = _as_cobracket(inputs[0].obj)
    if args.row is not None and args.column is not None:
        raise UsageError("give at most one of --row and --column")
    try:
        if args.row is not None:
            return check_Ri_operad(cb, args.row), None
        if args.column is not None:
            return check_Cj_operad(cb, args.column), None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return check_cocycle_via_operad(cb), None


def cmd_check_local_cocycle(args, inputs):
    gammas = [_as_cobracket(x.obj) for x in inputs]
    alg = gammas[0].algebra
    if any(g.algebra != alg for g in gammas):
        raise UsageError("all components must live over the same algebra")
    try:
        return check_local_cocycle(alg, gammas), None
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_check_double_construction(args, inputs):
    return check_double_construction(_as_cobracket(inputs[0].obj), args.reading), None


def cmd_double(args, inputs):
    cb = _as_cobracket(inputs[0].obj)
    try:
        d = build_double(cb, args.reading)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    t = d.triple()
    t.name = f"double:{cb.name}" if cb.name else "double"
    rep = CheckReport.combine(
        "double",
        {
            "filippov-jacobi": check_filippov_jacobi(d.algebra),
            "metric": check_metric(d.metric),
            "manin-triple": check_manin_triple(t),
        },
        verified=d.verified,
    )
    return rep, emit_document([t])


def cmd_dual(args, inputs):
    cb = _as_cobracket(inputs[0].obj)
    report = check_bialgebra(cb)
    if not report.verdict:
        return report, None
    dual = dual_bialgebra(cb)
    dual.name = f"{cb.name}*" if cb.name else "dual"
    dual.algebra.name = f"{cb.algebra.name}*" if cb.algebra.name else "dual-algebra"
    return report, emit_document([dual])


def cmd_check_manin(args, inputs):
    return check_manin_triple(_as_triple(inputs[0].obj)), None


def cmd_theorem(args, inputs):
    return theorem_equivalence(_as_cobracket(inputs[0].obj), args.reading), None


def cmd_cohomology(args, inputs):
    alg = _as_algebra(inputs[0].obj)
    rep = _rep(alg, args.rep, args.power)
    if args.degree < 1:
        raise UsageError("degree must be at least 1")
    dims = cohomology(rep, args.degree)
    report = CheckReport(name="cohomology", verdict=True, details=dict(dims, representation=rep.name or args.rep))
    return report, None


COMMANDS = {
    "check-algebra": (cmd_check_algebra, "skew-symmetry, Filippov-Jacobi and pair identity"),
    "check-rep": (cmd_check_rep, "representation identities and seeded coboundary-squared samples"),
    "check-bialgebra": (cmd_check_bialgebra, "dual bracket and 1-cocycle conditions"),
    "check-operad": (cmd_check_operad, "operad-matrix form of the cocycle condition (or one row/column)"),
    "check-local-cocycle": (cmd_check_local_cocycle, "components satisfying their row conditions"),
    "check-double-construction": (cmd_check_double_construction, "row 1, centroid and local operad conditions"),
    "double": (cmd_double, "build the double and check it"),
    "dual": (cmd_dual, "dual bialgebra (emitted as a document)"),
    "check-manin": (cmd_check_manin, "Manin triple conditions"),
    "theorem": (cmd_theorem, "double construction versus Manin triple harness"),
    "cohomology": (cmd_cohomology, "cocycle, coboundary and cohomology dimensions"),
}


# ---------------------------------------------------------------- parser


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--report", metavar="PATH", default=d, help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "text"), default=d if suppress else "text")
    p.add_argument("--seed", type=_u64, default=d if suppress else 0, help="random seed (u64)")
    p.add_argument("--jobs", type=int, default=d if suppress else 1, help="accepted for compatibility; runs serially")


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nlie", description="Exact checks for n-Lie algebras and bialgebras.")
    parser.add_argument("--version", action="version", version=f"nlie {__version__}")
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text, description=help_text)
        _global_flags(sp, suppress=True)
        nargs = "+" if name == "check-local-cocycle" else None
        sp.add_argument("inputs" if nargs else "input", nargs=nargs, metavar="INPUT")
        if name in ("check-rep", "cohomology"):
            sp.add_argument("--rep", default="adjoint", choices=("adjoint", "coadjoint", "tensor-power", "trivial"))
            sp.add_argument("--power", type=int, default=None, help="tensor power (default: the arity)")
        if name == "check-rep":
            sp.add_argument("--samples", type=int, default=5, help="random cochains per degree")
        if name == "cohomology":
            sp.add_argument("--degree", type=int, default=1)
        if name == "check-operad":
            sp.add_argument("--row", type=int, default=None)
            sp.add_argument("--column", type=int, default=None)
        if name in ("check-double-construction", "double", "theorem"):
            sp.add_argument("--reading", choices=CENTROID_READINGS, default=DEFAULT_CENTROID_READING)
        if name in ("double", "dual"):
            sp.add_argument("--output", metavar="PATH", help="write the resulting document here")
    return parser


# ---------------------------------------------------------------- reports


def _text(doc: dict, report: CheckReport) -> str:
    lines = [f"nlie {doc['version']} {doc['command']}"]
    for item in doc["inputs"]:
        lines.append(f"input {item['uri']} sha256={item['sha256'][:16]}")
    lines.extend(report.lines())
    lines.append(f"result: {doc['result']}")
    if doc.get("output") is not None:
        lines.append("output document:")
        lines.append(doc["output"].rstrip("\n"))
    return "\n".join(lines) + "\n"


def make_report(args, inputs, report: CheckReport, output: Optional[str], elapsed: float, used_seed: bool) -> dict:
    doc = {
        "tool": "nlie",
        "version": __version__,
        "command": args.command,
        "inputs": [{"uri": x.uri, "sha256": x.digest} for x in inputs],
        "seed": args.seed if used_seed else None,
        "result": "pass" if report.verdict else "fail",
        "report": report.to_dict(),
        "timing": {"seconds": round(elapsed, 6)},
    }
    if output is not None:
        doc["output"] = output if args.output is None else {"path": args.output}
    return doc


def _write(path: Optional[str], text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not hasattr(args, "output"):
        args.output = None
    uris = args.inputs if hasattr(args, "inputs") else [args.input]
    func = COMMANDS[args.command][0]
    try:
        inputs = [load(u) for u in uris]
        start = time.perf_counter()
        report, output = func(args, inputs)
        elapsed = time.perf_counter() - start
        if output is not None and args.output is not None:
            _write(args.output, output)
        doc = make_report(args, inputs, report, output, elapsed, used_seed=args.command == "check-rep")
        if args.format == "json":
            text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
        else:
            if isinstance(doc.get("output"), dict):
                doc = dict(doc, output=None)
            text = _text(doc, report)
        _write(args.report, text)
    except SchemaError as exc:
        print(f"nlie: schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except InputError as exc:
        print(f"nlie: {exc}", file=sys.stderr)
        return EXIT_IO
    except UsageError as exc:
        print(f"nlie: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"nlie: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_PASS if report.verdict else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
