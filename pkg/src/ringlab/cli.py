"""Command-line front end.

    ringlab analyze FILE [--format text|json] [--witnesses] [--seed N]
                         [--max-class N] [--width-bound N] [--extension C0,C1,...]
    ringlab malcev {mul,pow,comm,decompose} FILE [ARGS] [--max-class N]
    ringlab selftest {quick,full} [--format text|json]

Exit codes: 0 success, 1 validation/parse error, 2 pipeline error.
Reports are deterministic: identical input bytes give identical output
bytes.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .documents import InputDocument, load_document
from .domains import Extension, PrimeField, Rationals
from .errors import (
    ParseError,
    PipelineError,
    RinglabError,
    ValidationError,
)
from .lie import (
    GroupElement,
    group_commutator,
    group_mul,
    group_pow,
    verify_nilpotent_lie,
)
from .reports import AnalyzeOptions, analyze, render_json, render_text
from .selftest import run_selftest


def _read_document(path: str, extension: str | None) -> InputDocument:
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    doc = load_document(text)
    if extension:
        doc = _pre_extend(doc, extension)
    return doc


def _pre_extend(doc: InputDocument, minpoly_text: str) -> InputDocument:
    """Re-read a field-carrier document over EXTENSION(base, minpoly)."""
    base = doc.carrier.domain if doc.carrier.kind == "field" else None
    if not isinstance(base, (Rationals, PrimeField)):
        raise ValidationError(
            "--extension applies to documents over Q or GF(p) only"
        )
    coeffs = [base.parse(c.strip()) for c in minpoly_text.split(",")]
    ext = Extension(base, tuple(coeffs))

    def lift(value):
        return ext.from_base(value)

    from .bilinear import field_carrier

    carrier = field_carrier(ext, doc.carrier.dim)
    codomain = None
    if doc.codomain is not None:
        codomain = field_carrier(ext, doc.codomain.dim)
    tensor = None
    if doc.tensor is not None:
        tensor = tuple(
            tuple(tuple(lift(c) for c in cell) for cell in row) for row in doc.tensor
        )
    unit = tuple(lift(c) for c in doc.unit) if doc.unit is not None else None
    return InputDocument(
        kind=doc.kind,
        domain=ext,
        carrier=carrier,
        basis_names=doc.basis_names,
        tensor=tensor,
        codomain=codomain,
        codomain_basis=doc.codomain_basis,
        unit=unit,
        source=doc.source,
    )


def _parse_group_element(text: str, algebra) -> GroupElement:
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if len(parts) != algebra.dim:
        raise ValidationError(
            f"element needs {algebra.dim} coordinates, got {len(parts)}"
        )
    coords = tuple(algebra.domain.parse(p) for p in parts)
    return GroupElement(algebra, coords)


def _emit(tree, fmt: str) -> None:
    text = render_json(tree) if fmt == "json" else render_text(tree)
    sys.stdout.write(text)


def _cmd_analyze(args) -> int:
    doc = _read_document(args.file, args.extension)
    opts = AnalyzeOptions(
        seed=args.seed,
        max_class=args.max_class,
        width_bound=args.width_bound,
        witnesses=args.witnesses,
    )
    _emit(analyze(doc, opts), args.format)
    return 0


def _cmd_malcev(args) -> int:
    doc = _read_document(args.file, args.extension)
    if doc.kind != "lie":
        raise ValidationError("malcev commands need a 'lie' document")
    algebra = verify_nilpotent_lie(doc.ring())
    if algebra.nilpotency_class > args.max_class:
        from .errors import ClassTooLarge

        raise ClassTooLarge(
            f"class {algebra.nilpotency_class} exceeds --max-class {args.max_class}"
        )
    fmt_coords = lambda g: "(" + ", ".join(str(c) for c in g.log) + ")"
    if args.subcommand == "mul":
        g = _parse_group_element(args.args[0], algebra)
        h = _parse_group_element(args.args[1], algebra)
        result = {"operation": "mul", "result": fmt_coords(group_mul(g, h))}
    elif args.subcommand == "pow":
        g = _parse_group_element(args.args[0], algebra)
        exponent = Fraction(args.args[1])
        result = {"operation": "pow", "result": fmt_coords(group_pow(g, exponent))}
    elif args.subcommand == "comm":
        g = _parse_group_element(args.args[0], algebra)
        h = _parse_group_element(args.args[1], algebra)
        rep = group_commutator(g, h)
        result = {
            "operation": "comm",
            "result": fmt_coords(rep.commutator),
            "bracket": "(" + ", ".join(str(c) for c in rep.bracket) + ")",
            "identity_iff_bracket_zero": rep.identity_iff_bracket_zero,
        }
        if rep.class2_exact is not None:
            result["class2_exact"] = rep.class2_exact
    else:  # decompose
        from .lie import group_decompose

        deco = group_decompose(algebra, args.seed)
        result = {
            "operation": "decompose",
            "factors": [
                {
                    "dim": f.algebra.dim,
                    "class": f.algebra.nilpotency_class,
                    "abelian": f.abelian,
                }
                for f in deco.factors
            ],
            "abelian_factor_dim": len(deco.abelian_factor_rows),
            "cross_commutators_trivial": deco.cross_commutators_trivial,
        }
    _emit(result, args.format)
    return 0


def _cmd_selftest(args) -> int:
    report = run_selftest(args.level)
    if args.format == "json":
        _emit(report, "json")
    else:
        lines = [f"selftest level: {report['level']}"]
        for name, suite in report["suites"].items():
            status = "pass" if not suite["failures"] else "FAIL"
            lines.append(f"  {name}: {status} ({suite['checks']} checks)")
            for failure in suite["failures"]:
                lines.append(f"    failure: {failure}")
        lines.append(f"total checks: {report['total_checks']}")
        lines.append(f"status: {report['status']}")
        sys.stdout.write("\n".join(lines) + "\n")
    return 0 if report["status"] == "pass" else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringlab",
        description=(
            "exact-arithmetic workbench for bilinear maps, rings and "
            "nilpotent Lie algebras"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for idempotent probing")
        p.add_argument("--max-class", type=int, default=6)
        p.add_argument("--width-bound", type=int, default=16)
        p.add_argument("--extension", default=None, metavar="C0,C1,...",
                       help="pre-extend the base field by an irreducible "
                            "polynomial (constant term first)")

    p_analyze = sub.add_parser("analyze", help="run the analysis pipeline of the "
                                               "document's kind")
    p_analyze.add_argument("file")
    p_analyze.add_argument("--witnesses", action="store_true",
                           help="include basis-change witnesses")
    common(p_analyze)

    p_malcev = sub.add_parser("malcev", help="log-coordinate group arithmetic")
    p_malcev.add_argument("subcommand", choices=("mul", "pow", "comm", "decompose"))
    p_malcev.add_argument("file")
    p_malcev.add_argument("args", nargs="*")
    common(p_malcev)

    p_selftest = sub.add_parser("selftest", help="run the brute-force oracle suites")
    p_selftest.add_argument("level", choices=("quick", "full"), nargs="?",
                            default="quick")
    p_selftest.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "malcev":
            return _cmd_malcev(args)
        return _cmd_selftest(args)
    except (ParseError, ValidationError) as exc:
        sys.stderr.write(f"ringlab: invalid input: {exc}\n")
        return 1
    except PipelineError as exc:
        sys.stderr.write(f"ringlab: pipeline error at {exc}\n")
        return 2
    except RinglabError as exc:
        sys.stderr.write(f"ringlab: pipeline error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"ringlab: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
