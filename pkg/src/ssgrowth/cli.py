"""Command-line surface: ``ssgrowth <subcommand> <model> [options]``.

``<model>`` is a built-in name, a path to a model document, or ``-`` for stdin.
Exit codes: 0 every check passed, 1 a check failed (witnesses are printed),
2 input or usage error (including size caps).
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence, TextIO

import numpy as np

from . import __version__
from .graph import DEFAULT_DIAMETER_CAP
from .growth import (DEFAULT_MAX_CENTERS, estimate_dimensions, global_growth, growth_function, ladder,
                     safe_radii, check_growth_sandwich)
from .invariants import (check_bounded_geometry, check_cell_volume, check_cells_lemma, check_diameters,
                         check_edge_boundary, classify_geometry, deep_parameters)
from .io import EXPORT_FORMATS, ModelFormatError, dump_model, export_graph, parse_model, report_json, \
    write_growth_csv
from .model import BUILTIN_NAMES, CellModel, builtin, model_parameters, validate
from .reports import FAIL, TheoremReport
from .substitution import DEFAULT_EDGE_CAP, DEFAULT_K_MAX, CapExceeded, detect_origin, generate, \
    verify_reduction_isomorphism

THEOREMS = ("boundary", "volume", "diameter", "geometry", "origin", "selfsim", "sandwich", "cells")
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="ssgrowth", description="Self-similar graph generator and theorem checker.")
    parser.add_argument("--version", action="version", version=f"ssgrowth {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name: str, help: str) -> _Parser:
        p = sub.add_parser(name, help=help)
        p.add_argument("model", help=f"model file, '-' for stdin, or a built-in: {', '.join(BUILTIN_NAMES)}")
        p.add_argument("--edge-cap", type=int, default=DEFAULT_EDGE_CAP, help="refuse graphs with more edges")
        return p

    command("validate", "run the structural and hypothesis checks on a model")

    p = command("generate", "build G_n and write it as DOT, edge list or JSON")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--format", choices=EXPORT_FORMATS, default="edges")
    p.add_argument("--output", default="-")

    p = command("params", "report the scaling parameters of a model")
    p.add_argument("--depth", type=int, default=4, help="depth of the census for b, c, M")

    p = command("check", "verify theorems on finite approximations")
    p.add_argument("--level", type=int, default=6)
    p.add_argument("--theorem", choices=("all",) + THEOREMS, default="all")
    p.add_argument("--diameter-cap", type=int, default=DEFAULT_DIAMETER_CAP)
    p.add_argument("--k-max", type=int, default=DEFAULT_K_MAX)

    p = command("growth", "growth function of one center, or global lower/upper growth")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--center", default="auto", help="vertex id, or 'auto' for a vertex of maximal safe radius")
    p.add_argument("--global", dest="global_", action="store_true",
                   help="write r,lower,upper on the nu-ladder instead of a single curve")
    p.add_argument("--max-centers", type=int, default=DEFAULT_MAX_CENTERS)
    p.add_argument("--csv", default="-")

    p = command("dim", "estimate the growth dimension and compare with log mu / log nu")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--tol", type=float, default=0.10)
    p.add_argument("--max-centers", type=int, default=DEFAULT_MAX_CENTERS)

    p = command("export", "write the canonical model document")
    p.add_argument("--output", default="-")
    return parser


def load_model(spec: str, stdin: TextIO) -> CellModel:
    if spec == "-":
        return parse_model(stdin.read())
    if spec in BUILTIN_NAMES and not os.path.exists(spec):
        return builtin(spec)
    try:
        with open(spec, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read model {spec!r}: {exc.strerror}") from None
    return parse_model(text)


def _write(path: str, text: str, stdout: TextIO) -> None:
    if path == "-":
        stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _envelope(args, m: CellModel, **extra) -> dict:
    caps = {"edge_cap": args.edge_cap}
    for name in ("diameter_cap", "k_max", "max_centers"):
        if hasattr(args, name):
            caps[name] = getattr(args, name)
    return {"tool": "ssgrowth", "version": __version__, "command": args.command, "model": m.name,
            "caps": caps, **extra}


def _origin_report(m: CellModel, k_max: int) -> TheoremReport:
    info = detect_origin(m, K_max=k_max)
    report = TheoremReport("origin", m.name, [])
    report.measure(info.stabilizing_power or 0, "dichotomy resolved", True, info.resolved)
    report.facts["origin"] = info.to_dict()
    if not info.resolved:
        report.witnesses.append(info.evidence)
    return report.finish()


def _run_theorem(name: str, m: CellModel, args) -> list[TheoremReport]:
    n = args.level
    if name == "boundary":
        return [check_edge_boundary(m, n_max=n)]
    if name == "volume":
        return [check_cell_volume(m, n_max=n)]
    if name == "diameter":
        return [check_diameters(m, n_max=n, diameter_cap=args.diameter_cap)]
    if name == "geometry":
        cls = classify_geometry(m, depth=n)
        return [check_bounded_geometry(m, n_max=min(n, 5)), cls.report]
    if name == "origin":
        return [_origin_report(m, args.k_max)]
    if name == "selfsim":
        return [verify_reduction_isomorphism(m, n, args.edge_cap)]
    if name == "sandwich":
        return [check_growth_sandwich(m, n_values=range(1, n), depth=n)]
    if name == "cells":
        return [check_cells_lemma(m, n=n)]
    raise UsageError(f"unknown theorem {name!r}")


def _print_failures(reports, stderr: TextIO) -> None:
    for r in reports:
        if r.status != FAIL:
            continue
        for meas in r.measurements:
            if not meas.ok:
                print(f"FAIL {r.theorem} n={meas.n}: {meas.quantity}: predicted {meas.predicted}, "
                      f"measured {meas.measured}", file=stderr)
        for w in r.witnesses:
            print(f"witness {r.theorem}: {w}", file=stderr)


def _dispatch(args, stdin: TextIO, stdout: TextIO, stderr: TextIO) -> int:
    m = load_model(args.model, stdin)
    if args.command == "export":
        _write(args.output, dump_model(m), stdout)
        return EXIT_OK
    report = validate(m)
    if args.command == "validate":
        stdout.write(report_json(_envelope(args, m, validation=report, **{"pass": report.passed})))
        for name, check in report.failures().items():
            print(f"FAIL {name}: {check.detail} witness={check.witness}", file=stderr)
        return EXIT_OK if report.passed else EXIT_FAIL
    if not report.passed:
        raise UsageError(f"model {m.name!r} is not admissible: " +
                         "; ".join(f"{k}: {c.detail}" for k, c in report.failures().items()))

    if args.command == "params":
        stdout.write(report_json(_envelope(args, m, parameters=deep_parameters(m, args.depth))))
        return EXIT_OK
    if args.command == "generate":
        _write(args.output, export_graph(generate(m, args.level, args.edge_cap), args.format), stdout)
        return EXIT_OK
    if args.command == "check":
        if args.level < 2:
            raise UsageError("--level must be at least 2")
        names = THEOREMS if args.theorem == "all" else (args.theorem,)
        reports = [r for name in names for r in _run_theorem(name, m, args)]
        ok = all(r.status != FAIL for r in reports)
        extra = {"level": args.level, "reports": reports, "pass": ok}
        classes = [r.facts["classification"] for r in reports if "classification" in r.facts]
        if classes:
            extra["classification"] = classes[0]
        stdout.write(report_json(_envelope(args, m, **extra)))
        _print_failures(reports, stderr)
        return EXIT_OK if ok else EXIT_FAIL

    hg = generate(m, args.level, args.edge_cap)
    if args.command == "growth":
        safe = safe_radii(hg)
        if args.global_:
            radii = [0] + ladder(model_parameters(m).nu, int(safe.max())).tolist()
            _write(args.csv, write_growth_csv(global_growth(hg, r, args.max_centers) for r in radii), stdout)
            return EXIT_OK
        if args.center == "auto":
            x = int(np.argmax(safe))
        else:
            try:
                x = int(args.center)
            except ValueError:
                raise UsageError(f"--center must be 'auto' or a vertex id, got {args.center!r}") from None
            if not 0 <= x < hg.graph.vertex_count:
                raise UsageError(f"--center {x} is not a vertex of G_{args.level}")
        _write(args.csv, write_growth_csv(growth_function(hg, x)), stdout)
        return EXIT_OK
    if args.command == "dim":
        est = estimate_dimensions(hg, max_centers=args.max_centers)
        ok = est.deviation <= args.tol
        stdout.write(report_json(_envelope(args, m, level=args.level, tolerance=args.tol, estimate=est,
                                           **{"pass": ok})))
        if not ok:
            print(f"FAIL dim: deviation {est.deviation:.4f} > tolerance {args.tol}", file=stderr)
        return EXIT_OK if ok else EXIT_FAIL
    raise UsageError(f"unknown command {args.command!r}")


def run_cli(argv: Sequence[str] | None = None, stdin: TextIO | None = None, stdout: TextIO | None = None,
            stderr: TextIO | None = None) -> int:
    stdin = sys.stdin if stdin is None else stdin
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(list(sys.argv[1:] if argv is None else argv))
        return _dispatch(args, stdin, stdout, stderr)
    except SystemExit as exc:   # --help / --version
        return int(exc.code or 0)
    except (UsageError, ModelFormatError, CapExceeded, ValueError) as exc:
        print(parser.format_usage().rstrip(), file=stderr)
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_cli())
