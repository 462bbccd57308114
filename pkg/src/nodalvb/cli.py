"""Command-line front end: validate, classify, bunch, enumerate, realize,
verify.  All output is deterministic given (input, flags, seed)."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import realize as realize_mod
from . import verify as verify_mod
from .bunches import DegreeWindow, build_bunch_almost, build_bunch_string, to_dot
from .curves import ShapeKind, curve_shape, spec_from_dict, validate
from .rep_type import classify
from .strings_bands import (
    Band,
    enumerate_objects,
    format_object,
    parse_object,
    rank,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="nodalvb",
        description="classification of vector bundles over noncommutative "
        "nodal curves",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, window=False, words=False, lam=False, seed=False):
        sp.add_argument("input", help="curve description (JSON)")
        sp.add_argument(
            "--format",
            choices=("table", "json", "dot"),
            default="table",
            dest="fmt",
        )
        sp.add_argument("--out", default=None, help="write output to a file")
        if window:
            sp.add_argument(
                "--window",
                default="0:1",
                metavar="DMIN:DMAX",
                help="degree window (default 0:1)",
            )
        if words:
            sp.add_argument("--max-word-len", type=int, default=16)
            sp.add_argument("--m-max", type=int, default=2)
        if lam:
            sp.add_argument(
                "--lambda",
                dest="lam",
                default=None,
                metavar="P/Q",
                help="band parameter, an exact rational",
            )
        if seed:
            sp.add_argument("--seed", type=int, default=0)

    common(sub.add_parser("validate", help="check the nodal axioms"))
    common(sub.add_parser("classify", help="representation type verdict"))
    common(sub.add_parser("bunch", help="build the bunch of chains"), window=True)
    common(
        sub.add_parser("enumerate", help="canonical strings and bands"),
        window=True,
        words=True,
    )
    sp = sub.add_parser("realize", help="matrix realization of one object")
    common(sp, lam=True)
    sp.add_argument("--object", required=True, help="object in word syntax")
    sp = sub.add_parser("verify", help="indecomposability / isomorphism oracle")
    common(sp, seed=True)
    sp.add_argument("realizations", nargs="+", help="realization JSON file(s)")
    return p


def _die(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return EXIT_USAGE


def _load_spec(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    return spec_from_dict(doc)


def _parse_window(text: str) -> DegreeWindow:
    try:
        lo, _, hi = text.partition(":")
        return DegreeWindow(int(lo), int(hi))
    except ValueError as exc:
        raise ValueError(f"bad window {text!r}: expected DMIN:DMAX") from exc


def _parse_lambda(text: str) -> Fraction:
    if any(ch in text for ch in ".eE") and not text.lstrip("+-").isdigit():
        raise ValueError(f"bad lambda {text!r}: floating literals are rejected")
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad lambda {text!r}: expected P/Q") from exc
    if value == 0:
        raise ValueError("lambda must be nonzero")
    return value


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(rows) -> str:
    if not rows:
        return "(empty)\n"
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
    lines = [
        "  ".join(str(cell).ljust(w) for cell, w in zip(row, widths)).rstrip()
        for row in rows
    ]
    return "\n".join(lines) + "\n"


def run(argv) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK

    if getattr(args, "fmt", None) == "dot" and args.command != "bunch":
        return _die("--format dot applies to the bunch command only")

    try:
        spec = _load_spec(args.input)
    except ValueError as exc:
        return _die(str(exc))

    try:
        if args.command == "validate":
            report = validate(spec)
            if args.fmt == "json":
                _emit(json.dumps(report.to_dict(), indent=2) + "\n", args.out)
            else:
                rows = [("ok", report.ok)] + [
                    (rule, locus) for rule, locus in report.violations
                ]
                _emit(_table(rows), args.out)
            return EXIT_OK if report.ok else EXIT_INVALID

        report = validate(spec)
        if not report.ok:
            for rule, locus in report.violations:
                print(f"invalid curve [{rule}]: {locus}", file=sys.stderr)
            return EXIT_INVALID

        if args.command == "classify":
            verdict = classify(spec)
            if args.fmt == "json":
                _emit(json.dumps(verdict.to_dict(), indent=2) + "\n", args.out)
            else:
                rows = [
                    ("verdict", verdict.verdict.value),
                    ("rule", verdict.rule),
                    ("witness", verdict.witness),
                ]
                _emit(_table(rows), args.out)
            return EXIT_OK

        if args.command == "bunch":
            window = _parse_window(args.window)
            bunch = _build_bunch(spec, window)
            if args.fmt == "dot":
                _emit(to_dot(bunch), args.out)
            elif args.fmt == "json":
                doc = {
                    y: {
                        "E": [str(e) for e in bunch.e_chain(y)],
                        "F": [str(e) for e in bunch.f_chain(y)],
                    }
                    for y in bunch.points
                }
                _emit(json.dumps(doc, indent=2) + "\n", args.out)
            else:
                rows = []
                for y in bunch.points:
                    rows.append((y, "E", " < ".join(map(str, bunch.e_chain(y)))))
                    rows.append((y, "F", " < ".join(map(str, bunch.f_chain(y)))))
                _emit(_table(rows), args.out)
            return EXIT_OK

        if args.command == "enumerate":
            window = _parse_window(args.window)
            if args.max_word_len < 4:
                return _die("--max-word-len must be >= 4")
            bunch = _build_bunch(spec, window)
            strings, bands = enumerate_objects(bunch, args.max_word_len, args.m_max)
            objects = strings + bands
            if args.fmt == "json":
                doc = [
                    {"object": format_object(o), "rank": rank(o)} for o in objects
                ]
                _emit(json.dumps(doc, indent=2) + "\n", args.out)
            else:
                rows = [(format_object(o), f"rank {rank(o)}") for o in objects]
                _emit(_table(rows), args.out)
            return EXIT_OK

        if args.command == "realize":
            window = DegreeWindow(0, 0)  # letters carry their own degrees
            bunch = build_bunch_string(spec, window)
            obj = parse_object(bunch, args.object)
            if isinstance(obj, Band):
                lam = _parse_lambda(args.lam) if args.lam else None
                real = realize_mod.realize_band(obj, spec, lam)
            else:
                real = realize_mod.realize_string(obj, spec)
            doc = real.to_dict()
            doc["invertible"] = all(
                realize_mod.check_invertible(m) for m in real.theta.values()
            )
            _emit(json.dumps(doc, indent=2) + "\n", args.out)
            return EXIT_OK

        if args.command == "verify":
            reals = []
            for path in args.realizations:
                with open(path, "r", encoding="utf-8") as fh:
                    reals.append(
                        realize_mod.TripleRealization.from_dict(json.load(fh))
                    )
            if len(reals) == 1:
                result = {
                    "indecomposable": verify_mod.is_indecomposable(reals[0], spec),
                    "end_quotient_dim": verify_mod.end_quotient_dim(reals[0], spec),
                }
            elif len(reals) == 2:
                report = verify_mod.isomorphism_report(
                    reals[0], reals[1], spec, seed=args.seed
                )
                report.pop("_vector", None)
                result = report
            else:
                return _die("verify takes one or two realization files")
            if args.fmt == "json":
                _emit(json.dumps(result, indent=2) + "\n", args.out)
            else:
                rows = [(k, v) for k, v in result.items() if k != "witness"]
                _emit(_table(rows), args.out)
            return EXIT_OK
    except (ValueError, NotImplementedError) as exc:
        return _die(str(exc))

    return _die(f"unknown command {args.command!r}")  # pragma: no cover


def _build_bunch(spec, window):
    shape = curve_shape(spec)
    if shape.kind is ShapeKind.ALMOST_STRING_TYPE:
        return build_bunch_almost(spec, window)
    return build_bunch_string(spec, window)


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
