"""Command-line front end with deterministic JSON/CSV/SVG emission.

Exit codes: 0 success, 1 reproduce failures, 2 usage or invalid input,
3 resource cap exceeded, 4 I/O failure.  Payloads are byte-identical across
runs for fixed inputs; the tool version sits in a header field.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction

from . import __version__
from .acceptance import CRITERIA, run_criteria
from .carpet import classify, load_digit_set, predicted_exponent
from .connectivity import (
    DEFAULT_CSC_KMAX,
    count_components,
    find_csc_certificate,
    infer_component_cardinality,
)
from .errors import CapExceededError, CarpetGapsError, DigitSetError
from .gaps import (
    DEFAULT_MAX_COMPONENTS,
    bracket_ladder,
    component_gap_sequence,
    fit_h_exponent,
    h_bracket,
)
from .grid import DEFAULT_MAX_CELLS, cells_csv, render_svg
from .theory import lipschitz_report

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_CAP = 3
EXIT_IO = 4


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    # Atomic write: full artifact or nothing.
    directory = os.path.dirname(os.path.abspath(output))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".carpetgaps-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, output)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit_json(schema: str, payload: dict, output: str | None) -> None:
    doc = {"schema": f"carpetgaps/{schema}/v1", "version": __version__}
    doc.update(payload)
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", output)


def _parse_delta(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise DigitSetError(f"bad rational {text!r}: {exc}") from exc
    if value <= 0:
        raise DigitSetError("delta must be positive")
    return value


def _cmd_classify(args) -> int:
    ds = load_digit_set(args.digitset)
    _emit_json("classify", {"digit_set": ds.to_json_obj(),
                            "classification": classify(ds).to_json_obj()},
               args.output)
    return EXIT_OK


def _cmd_components(args) -> int:
    ds = load_digit_set(args.digitset)
    summary = count_components(ds, args.k, tilde=args.tilde,
                               max_cells=args.max_cells)
    _emit_json("components", summary.to_json_obj(), args.output)
    return EXIT_OK


def _cmd_csc(args) -> int:
    ds = load_digit_set(args.digitset)
    cert = find_csc_certificate(ds, k_max=args.kmax,
                                max_cells=args.max_cells)
    payload = {"kmax": args.kmax, "found": cert is not None}
    if cert is not None:
        payload["certificate"] = cert.to_json_obj()
    _emit_json("csc", payload, args.output)
    return EXIT_OK


def _cmd_cardinality(args) -> int:
    ds = load_digit_set(args.digitset)
    verdict = infer_component_cardinality(ds, k_max=args.kmax,
                                          max_cells=args.max_cells)
    _emit_json("cardinality", verdict.to_json_obj(), args.output)
    return EXIT_OK


def _cmd_gaps(args) -> int:
    ds = load_digit_set(args.digitset)
    gs = component_gap_sequence(ds, args.k,
                                max_components=args.max_components,
                                max_cells=args.max_cells)
    _emit_json("gaps", gs.to_json_obj(), args.output)
    return EXIT_OK


def _cmd_hbracket(args) -> int:
    ds = load_digit_set(args.digitset)
    bracket = h_bracket(ds, args.level, _parse_delta(args.delta),
                        max_cells=args.max_cells)
    _emit_json("hbracket", bracket.to_json_obj(), args.output)
    return EXIT_OK


def _cmd_exponent(args) -> int:
    ds = load_digit_set(args.digitset)
    cls = classify(ds)
    card = infer_component_cardinality(ds, cls, max_cells=args.max_cells)
    pred = predicted_exponent(cls, ds, card.verdict)
    samples = bracket_ladder(ds, args.kmin, args.kmax,
                             max_cells=args.max_cells)
    if args.format == "csv":
        lines = ["delta_num,delta_den,h_low,h_high,L"]
        lines += [f"{s.delta.numerator},{s.delta.denominator},"
                  f"{s.h_low},{s.h_high},{s.level}" for s in samples]
        _emit("\n".join(lines) + "\n", args.output)
        return EXIT_OK
    report = fit_h_exponent(samples, pred)
    _emit_json("exponent", report.to_json_obj(), args.output)
    return EXIT_OK


def _cmd_compare(args) -> int:
    ds1 = load_digit_set(args.a)
    ds2 = load_digit_set(args.b)
    report = lipschitz_report(ds1, ds2, k_max=args.kmax,
                              max_cells=args.max_cells)
    _emit_json("compare", report, args.output)
    return EXIT_OK


def _cmd_render(args) -> int:
    ds = load_digit_set(args.digitset)
    if args.format == "csv":
        _emit(cells_csv(ds, args.k, max_cells=args.max_cells), args.output)
    else:
        _emit(render_svg(ds, args.k, max_cells=args.max_cells), args.output)
    return EXIT_OK


def _cmd_reproduce(args) -> int:
    numbers = None
    if args.criteria:
        numbers = sorted({int(c) for c in args.criteria.split(",")})
        unknown = [c for c in numbers if c not in CRITERIA]
        if unknown:
            raise DigitSetError(f"unknown criteria {unknown}")
    results = run_criteria(numbers)
    lines = []
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        lines.append(f"[{status}] criterion {result.number}: {result.title}")
        for check in result.checks:
            mark = "ok " if check.ok else "BAD"
            lines.append(f"    {mark} {check.label}: measured {check.measured}"
                         f" | expected {check.expected}"
                         f" | tolerance {check.tolerance}")
    total = sum(1 for r in results if r.passed)
    lines.append(f"{total}/{len(results)} criteria passed")
    _emit("\n".join(lines) + "\n", args.output)
    for result in results:
        print(f"criterion {result.number}: {result.seconds:.1f}s",
              file=sys.stderr)
    return EXIT_OK if total == len(results) else EXIT_FAIL


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output", default=None,
                        help="write to this path instead of stdout")
    parser.add_argument("--max-cells", type=int, default=DEFAULT_MAX_CELLS,
                        help="occupied-cell resource cap")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="carpetgaps",
        description="Connectivity and gap sequences of Bedford-McMullen "
                    "carpets with exact arithmetic.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="row statistics and structural flags")
    p.add_argument("--digitset", required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("components", help="component count of a level-k grid")
    p.add_argument("--digitset", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--tilde", action="store_true",
                   help="label the 3x3 tiled domain instead")
    _add_common(p)
    p.set_defaults(func=_cmd_components)

    p = sub.add_parser("csc", help="search for a separated component")
    p.add_argument("--digitset", required=True)
    p.add_argument("--kmax", type=int, default=DEFAULT_CSC_KMAX)
    _add_common(p)
    p.set_defaults(func=_cmd_csc)

    p = sub.add_parser("cardinality",
                       help="finite/infinite/unknown component verdict")
    p.add_argument("--digitset", required=True)
    p.add_argument("--kmax", type=int, default=DEFAULT_CSC_KMAX)
    _add_common(p)
    p.set_defaults(func=_cmd_cardinality)

    p = sub.add_parser("gaps", help="exact gap sequence of a level-k grid")
    p.add_argument("--digitset", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--max-components", type=int,
                   default=DEFAULT_MAX_COMPONENTS)
    _add_common(p)
    p.set_defaults(func=_cmd_gaps)

    p = sub.add_parser("hbracket",
                       help="rigorous two-sided bracket of h(delta)")
    p.add_argument("--digitset", required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--delta", required=True, help="exact rational, e.g. 1/27")
    _add_common(p)
    p.set_defaults(func=_cmd_hbracket)

    p = sub.add_parser("exponent",
                       help="fit the growth exponent from h brackets at "
                            "delta = m^-k, level k+2")
    p.add_argument("--digitset", required=True)
    p.add_argument("--kmin", type=int, required=True)
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json",
                   help="csv emits the raw sample table")
    _add_common(p)
    p.set_defaults(func=_cmd_exponent)

    p = sub.add_parser("compare",
                       help="pairwise dimensions/comparability report")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--kmax", type=int, default=DEFAULT_CSC_KMAX)
    _add_common(p)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("render", help="deterministic SVG or CSV cell dump")
    p.add_argument("--digitset", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--format", choices=("svg", "csv"), default="svg")
    _add_common(p)
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("reproduce",
                       help="run the acceptance criteria and print a "
                            "pass/fail table")
    p.add_argument("--criteria", default=None,
                   help="comma-separated criterion numbers (default: all)")
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapExceededError as exc:
        print(f"carpetgaps: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (DigitSetError, CarpetGapsError) as exc:
        print(f"carpetgaps: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"carpetgaps: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
