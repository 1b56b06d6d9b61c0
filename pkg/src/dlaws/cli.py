"""Command-line front end.

    dlaws classify CASE [--format text|json]
    dlaws verify CASE --coeffs FILE [--format text|json]
    dlaws dims CASE [--format text|json]
    dlaws dump CASE [--stage R|RR|smith] [--sep SEP]
    dlaws list-cases

Exit status: 0 success, 1 the supplied coefficients are not a law, 2 usage or
input error, 3 a zero set that does not split over Q.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional, TextIO

from .classifier import (
    LawCoefficients,
    classify,
    expected_dim,
    required_rank,
    verify_law,
)
from .groebner import IrrationalBranch
from .relations import CASES, build_R, build_RR, get_case, layout
from .smithform import partial_smith

EXIT_OK, EXIT_NOT_LAW, EXIT_USAGE, EXIT_IRRATIONAL = 0, 1, 2, 3


class CoefficientsError(ValueError):
    pass


def parse_coefficients(path: str, case: Optional[str] = None) -> LawCoefficients:
    """Read ``{"case": ..., "values": {name: "p/q"}}`` into exact rationals."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CoefficientsError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CoefficientsError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON ({exc.msg})") from None
    if not isinstance(doc, dict):
        raise CoefficientsError(f"{path}: top level must be an object")
    file_case = doc.get("case")
    if file_case is None and case is None:
        raise CoefficientsError(f"{path}: field 'case' is missing")
    if file_case is not None and not isinstance(file_case, str):
        raise CoefficientsError(f"{path}: field 'case' must be a string")
    if case is not None and file_case is not None and file_case != case:
        raise CoefficientsError(f"{path}: field 'case' is {file_case!r} but {case!r} was requested")
    cid = file_case or case
    if cid not in CASES:
        raise CoefficientsError(f"{path}: field 'case': unknown case {cid!r}")
    values = doc.get("values", {})
    if not isinstance(values, dict):
        raise CoefficientsError(f"{path}: field 'values' must be an object")
    names = layout(cid).params.names
    unknown = sorted(set(values) - set(names))
    if unknown:
        raise CoefficientsError(f"{path}: field 'values': unknown variable(s) {', '.join(unknown)}")
    missing = [n for n in names if n not in values]
    if missing:
        raise CoefficientsError(f"{path}: field 'values': missing variable(s) {', '.join(missing)}")
    parsed = {}
    for n in names:
        raw = values[n]
        if isinstance(raw, bool) or not isinstance(raw, (str, int)):
            raise CoefficientsError(f"{path}: field 'values.{n}': expected a \"p/q\" string")
        try:
            parsed[n] = Fraction(str(raw).strip())
        except (ValueError, ZeroDivisionError):
            raise CoefficientsError(f"{path}: field 'values.{n}': {raw!r} is not a rational") from None
    return LawCoefficients(cid, parsed)


def _emit(out: TextIO, fmt: str, text: str, doc) -> None:
    if fmt == "json":
        out.write(json.dumps(doc, indent=2, ensure_ascii=False, sort_keys=False) + "\n")
    else:
        out.write(text)


def _cmd_classify(args, out) -> int:
    report = classify(args.case)
    _emit(out, args.format, report.to_text(), report.to_json())
    return EXIT_OK


def _cmd_verify(args, out) -> int:
    law = parse_coefficients(args.coeffs, args.case)
    v = verify_law(law)
    verdict = "is a distributive law" if v.ok else "is NOT a distributive law"
    text = (
        f"{law.case.id}: {verdict}\n"
        f"  rank of [RR] ({v.nrows}x{v.ncols}) = {v.rank}, required {v.required}"
        + ("" if v.ok else f", excess {v.excess}")
        + "\n"
        + "".join(f"  {r}\n" for r in law.rules())
    )
    doc = {"case": law.case.id, "law": v.ok, "rank": v.rank, "required_rank": v.required,
           "excess": v.excess, "rules": law.rules()}
    _emit(out, args.format, text, doc)
    return EXIT_OK if v.ok else EXIT_NOT_LAW


def _cmd_dims(args, out) -> int:
    case = get_case(args.case)
    lay = layout(case.id)
    rows = []
    for n, table in ((3, lay.t3), (4, lay.t4)):
        rows.append({"arity": n, "basis": len(table), "composite": expected_dim(case, n).value})
    text = f"{case.id}\n  arity  basis  composite\n" + "".join(
        f"  {r['arity']:>5}  {r['basis']:>5}  {r['composite']:>9}\n" for r in rows
    ) + f"  required rank of [RR]: {required_rank(case)}\n"
    _emit(out, args.format, text, {"case": case.id, "dims": rows, "required_rank": required_rank(case)})
    return EXIT_OK


def _cmd_dump(args, out) -> int:
    case = get_case(args.case)
    if args.stage == "R":
        m = build_R(case)
    elif args.stage == "RR":
        m = build_RR(case)
    else:
        ps = partial_smith(build_RR(case))
        out.write(f"# scalar rank {ps.scalar_rank}; residual {ps.residual_shape[0]}x{ps.residual_shape[1]}\n")
        m = ps.residual
    out.write(m.dump(sep=args.sep))
    return EXIT_OK


def _cmd_list(args, out) -> int:
    for cid, c in CASES.items():
        lay = layout(cid)
        out.write(f"{cid:<12} {c.label:<12} {len(lay.params)} parameter(s)\n")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dlaws", description="Classify and verify operadic distributive laws.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def case_arg(sp):
        sp.add_argument("case", choices=list(CASES), metavar="CASE", help="case id, see list-cases")

    def fmt_arg(sp):
        sp.add_argument("--format", choices=("text", "json"), default="text")

    sp = sub.add_parser("classify", help="run the full classification pipeline")
    case_arg(sp)
    fmt_arg(sp)
    sp.set_defaults(func=_cmd_classify)

    sp = sub.add_parser("verify", help="check one candidate law")
    case_arg(sp)
    sp.add_argument("--coeffs", required=True, help='JSON file {"case": ..., "values": {...}}')
    fmt_arg(sp)
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("dims", help="basis sizes and composite dimensions")
    case_arg(sp)
    fmt_arg(sp)
    sp.set_defaults(func=_cmd_dims)

    sp = sub.add_parser("dump", help="print a matrix with . + - for 0 1 -1")
    case_arg(sp)
    sp.add_argument("--stage", choices=("R", "RR", "smith"), default="RR")
    sp.add_argument("--sep", default=" ", help="entry separator (default: one space)")
    sp.set_defaults(func=_cmd_dump)

    sp = sub.add_parser("list-cases", help="list supported cases")
    sp.set_defaults(func=_cmd_list)
    return p


def run(argv: Optional[List[str]] = None, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args, out)
    except IrrationalBranch as exc:
        err.write(f"dlaws: {exc}\n")
        return EXIT_IRRATIONAL
    except (CoefficientsError, ValueError) as exc:
        err.write(f"dlaws: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
