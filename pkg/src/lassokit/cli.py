"""Command-line front end.

Exit codes: 0 success, 1 a check ran and failed, 2 unreadable input or bad
arguments, 3 precondition or shape gate, 4 schema mismatch, 5 colimit
misalignment, 6 enumeration bound exceeded.  Machine output goes to stdout or
``--out``; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import serialize as ser
from .config import DEFAULT_SEED, BoundExceeded, set_max_carrier
from .cset import InstanceError
from .decomposition import DecompositionError, decomposition_colimit, pullback_decomposition_full
from .schema import SchemaError, builtin_schema

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_PRECONDITION, EXIT_SCHEMA, EXIT_MISALIGNED, EXIT_BOUND = range(7)


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _emit(doc, out: str | None) -> None:
    text = ser.dumps(doc)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_text(path: str | None, text: str) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load(path: str, reader, what: str):
    try:
        return reader(ser.load_json(path))
    except (OSError, json.JSONDecodeError, ser.FormatError, SchemaError) as exc:
        raise CliError(EXIT_PARSE, f"cannot read {what} from {path}: {exc}") from exc
    except (InstanceError, ValueError) as exc:
        raise CliError(EXIT_PARSE, f"invalid {what} in {path}: {exc}") from exc


def _lasso(name: str, schema=None):
    from .lasso import parse_lasso
    try:
        return parse_lasso(name, schema)
    except ValueError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from exc


def _same_schema(lasso, *schemas) -> None:
    for s in schemas:
        if s != lasso.schema:
            raise CliError(EXIT_SCHEMA, f"lasso {lasso.name} is defined on {lasso.schema.name}, "
                                        f"input uses {s.name or 'an inline schema'}")


# -- subcommands ---------------------------------------------------------------------

def cmd_contract(args) -> int:
    from .contraction import ContractionError, contract
    base = _load(args.base, ser.instance_from_dict, "instance")
    sub = _load(args.sub, ser.hom_from_dict, "hom")
    lasso = _lasso(args.lasso, base.schema)
    _same_schema(lasso, base.schema, sub.dom.schema)
    if sub.cod != base:
        raise CliError(EXIT_PRECONDITION, "sub-object codomain differs from the base instance")
    try:
        c = contract(base, sub, lasso)
    except ContractionError as exc:
        raise CliError(EXIT_PRECONDITION, str(exc)) from exc
    _emit({"contraction": ser.contraction_to_dict(c)}, args.out)
    _write_text(args.dot, ser.contraction_to_dot(c))
    return EXIT_OK


def cmd_pushforward(args) -> int:
    from .contraction import (ContractionError, ShapeGateError, equivalence_check, pushforward_images,
                              pushforward_span)
    d = _load(args.decomp, ser.decomposition_from_dict, "decomposition")
    sub = _load(args.sub, ser.hom_from_dict, "hom")
    lasso = _lasso(args.lasso, d.schema)
    _same_schema(lasso, d.schema, sub.dom.schema)
    doc = {}
    try:
        if args.method == "images":
            doc = ser.pushforward_to_dict(pushforward_images(d, sub, lasso))
        elif args.method == "span":
            doc = ser.pushforward_to_dict(pushforward_span(d, sub, lasso), args.intermediates)
        else:
            eq = equivalence_check(d, sub, lasso)
            doc = {"images": ser.pushforward_to_dict(eq.images),
                   "span": ser.pushforward_to_dict(eq.span, args.intermediates),
                   "equivalent": eq.equivalent}
    except ShapeGateError as exc:
        raise CliError(EXIT_PRECONDITION, str(exc)) from exc
    except DecompositionError as exc:
        raise CliError(EXIT_MISALIGNED, str(exc)) from exc
    except ContractionError as exc:
        raise CliError(EXIT_PRECONDITION, str(exc)) from exc
    _emit(doc, args.out)
    if args.dot:
        out = doc["decomposition"] if "decomposition" in doc else doc["images"]["decomposition"]
        _write_text(args.dot, ser.decomposition_to_dot(ser.decomposition_from_dict(out)))
    if args.method == "both" and not doc["equivalent"]:
        return EXIT_FAIL
    return EXIT_OK


def cmd_pullback(args) -> int:
    d = _load(args.decomp, ser.decomposition_from_dict, "decomposition")
    delta = _load(args.hom, ser.hom_from_dict, "hom")
    if delta.dom.schema != d.schema:
        raise CliError(EXIT_SCHEMA, "hom and decomposition use different schemas")
    try:
        pulled = pullback_decomposition_full(d, delta)
    except DecompositionError as exc:
        raise CliError(EXIT_MISALIGNED, str(exc)) from exc
    doc = {"decomposition": ser.decomposition_to_dict(pulled.decomposition),
           "to_domain": [ser.hom_to_dict(h) for h in pulled.to_domain],
           "bags_in_domain": [{s: sorted(set(c)) for s, c in h.components.items()}
                              for h in pulled.to_domain[:len(d.bags)]]}
    _emit(doc, args.out)
    _write_text(args.dot, ser.decomposition_to_dot(pulled.decomposition))
    return EXIT_OK


def cmd_colimit(args) -> int:
    d = _load(args.decomp, ser.decomposition_from_dict, "decomposition")
    apex, cocone = decomposition_colimit(d)
    _emit({"colimit": ser.instance_to_dict(apex), "legs": [ser.hom_to_dict(h) for h in cocone.legs]},
          args.out)
    _write_text(args.dot, ser.instance_to_dot(apex))
    return EXIT_OK


def _bounds(args, schema) -> dict[str, int]:
    bounds = {}
    for s in schema.objects:
        if s == "V":
            bounds[s] = args.max_vertices
        elif s.startswith("E"):
            bounds[s] = args.max_edges
    for item in args.bound or ():
        key, _, value = item.partition("=")
        if key not in schema.objects or not value.isdigit():
            raise CliError(EXIT_PARSE, f"bad --bound {item!r}")
        bounds[key] = int(value)
    return bounds


def _schema_for(args, lasso_name: str | None):
    if args.schema:
        try:
            return builtin_schema(args.schema)
        except ValueError as exc:
            raise CliError(EXIT_PARSE, str(exc)) from exc
    if lasso_name and (lasso_name.startswith("rgrph:") or lasso_name == "smoothing"):
        return builtin_schema("RGrph")
    if lasso_name and lasso_name.startswith("color:"):
        return _lasso(lasso_name).schema
    return builtin_schema("Grph")


def cmd_check(args) -> int:
    from .axioms import canonicity_probe, check_lasso_axioms, check_strong
    if args.probe:
        from .lasso import rgrph_lassos, lasso_cc, lasso_trivial
        schema = _schema_for(args, None)
        known = {"trivial": lasso_trivial(schema)}
        if schema.name == "Grph":
            known["cc"] = lasso_cc()
        elif schema.name == "RGrph":
            known = rgrph_lassos()
        report = canonicity_probe(schema, _bounds(args, schema), known)
        _emit(report.to_dict(), args.report)
        return EXIT_OK
    if not args.lasso:
        raise CliError(EXIT_PARSE, "--lasso is required unless --probe is given")
    schema = _schema_for(args, args.lasso)
    lasso = _lasso(args.lasso, schema)
    _same_schema(lasso, schema)
    bounds = _bounds(args, schema)
    report = check_lasso_axioms(lasso, bounds)
    doc = {"axioms": report.to_dict()}
    passed = report.passed
    if args.strong:
        strong = check_strong(lasso, bounds)
        doc["strong"] = strong.to_dict()
        passed = passed and strong.passed
    doc["passed"] = passed
    _emit(doc, args.report)
    for section, fails in report.failures.items():
        if fails:
            print(f"{section}: {len(fails)} failure(s); first: {fails[0].detail}", file=sys.stderr)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_explore(args) -> int:
    from .lasso import RGRPH_KINDS, rgrph_lassos, lasso_morphism_exists
    if args.what == "lassos":
        names = ["trivial", "cc", "smoothing", *(f"rgrph:{k}" for k in RGRPH_KINDS), "color:{i,...}"]
        _emit({"lassos": names, "schemas": ["Grph", "RGrph", "CGr_k", "Petri"]}, args.out)
        return EXIT_OK
    if args.what == "morphisms":
        lassos = rgrph_lassos()
        schema = builtin_schema("RGrph")
        bounds = _bounds(args, schema)
        table = {a: [b for b in lassos if lasso_morphism_exists(lassos[a], lassos[b], bounds)] for a in lassos}
        _emit({"bounds": bounds, "morphisms": table}, args.out)
        return EXIT_OK
    # composite contractions
    from .contraction import ContractionError, composite_contraction_probe
    if not (args.base and args.sub and args.sub2 and args.lasso):
        raise CliError(EXIT_PARSE, "composite search needs --base, --sub, --sub2 and --lasso")
    base = _load(args.base, ser.instance_from_dict, "instance")
    f1 = _load(args.sub, ser.hom_from_dict, "hom")
    f2 = _load(args.sub2, ser.hom_from_dict, "hom")
    lasso = _lasso(args.lasso, base.schema)
    _same_schema(lasso, base.schema)
    try:
        res = composite_contraction_probe(base, f1, f2, lasso)
    except ContractionError as exc:
        raise CliError(EXIT_PRECONDITION, str(exc)) from exc
    _emit({"found": res.found, "checked": res.checked,
           "witness": ser.hom_to_dict(res.witness) if res.witness else None}, args.out)
    return EXIT_OK


# -- parser ------------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CliError(EXIT_PARSE, message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lassokit", description="Lasso contractions and structured decompositions.")
    p.add_argument("--config", help="JSON file with optional keys max_carrier and seed")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("contract", help="contract an instance along a sub-object")
    c.add_argument("--base", required=True)
    c.add_argument("--sub", required=True)
    c.add_argument("--lasso", required=True)
    c.add_argument("--out")
    c.add_argument("--dot")
    c.set_defaults(func=cmd_contract)

    pf = sub.add_parser("pushforward", help="push a decomposition forward along a contraction")
    pf.add_argument("--decomp", required=True)
    pf.add_argument("--sub", required=True)
    pf.add_argument("--lasso", required=True)
    pf.add_argument("--method", choices=["images", "span", "both"], default="images")
    pf.add_argument("--intermediates", action="store_true")
    pf.add_argument("--out")
    pf.add_argument("--dot")
    pf.set_defaults(func=cmd_pushforward)

    pb = sub.add_parser("pullback", help="pull a decomposition back along a homomorphism")
    pb.add_argument("--decomp", required=True)
    pb.add_argument("--hom", required=True)
    pb.add_argument("--out")
    pb.add_argument("--dot")
    pb.set_defaults(func=cmd_pullback)

    co = sub.add_parser("colimit", help="glue a decomposition")
    co.add_argument("--decomp", required=True)
    co.add_argument("--out")
    co.add_argument("--dot")
    co.set_defaults(func=cmd_colimit)

    ch = sub.add_parser("check", help="exhaustive lasso axiom check or canonicity probe")
    ch.add_argument("--lasso")
    ch.add_argument("--schema")
    ch.add_argument("--max-vertices", type=int, default=2)
    ch.add_argument("--max-edges", type=int, default=3)
    ch.add_argument("--bound", action="append", help="extra per-sort bound SORT=N")
    ch.add_argument("--strong", action="store_true")
    ch.add_argument("--probe", action="store_true")
    ch.add_argument("--report")
    ch.set_defaults(func=cmd_check)

    ex = sub.add_parser("explore", help="list built-ins, tabulate lasso morphisms, compose contractions")
    ex.add_argument("what", choices=["lassos", "morphisms", "compose"])
    ex.add_argument("--max-vertices", type=int, default=2)
    ex.add_argument("--max-edges", type=int, default=3)
    ex.add_argument("--bound", action="append")
    ex.add_argument("--base")
    ex.add_argument("--sub")
    ex.add_argument("--sub2")
    ex.add_argument("--lasso")
    ex.add_argument("--out")
    ex.set_defaults(func=cmd_explore)
    return p


def _apply_config(path: str | None) -> int:
    if not path:
        return DEFAULT_SEED
    try:
        cfg = ser.load_json(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_PARSE, f"cannot read config {path}: {exc}") from exc
    if "max_carrier" in cfg:
        set_max_carrier(int(cfg["max_carrier"]))
    return int(cfg.get("seed", DEFAULT_SEED))


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        args.seed = _apply_config(args.config)
        return args.func(args)
    except CliError as exc:
        print(f"lassokit: {exc}", file=sys.stderr)
        return exc.code
    except BoundExceeded as exc:
        print(f"lassokit: {exc}", file=sys.stderr)
        return EXIT_BOUND


if __name__ == "__main__":
    sys.exit(main())
