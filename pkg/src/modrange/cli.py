"""Command-line front end.

Subcommands: ``norm``, ``radius``, ``range``, ``verify`` and ``cx``. Reports
are JSON (stdout or ``--output``); ``range`` can also emit CSV with the
header ``character,theta,re,im``. ``--figure PATH`` writes a PNG alongside.

Exit codes: 0 success, 1 a check failed, 2 bad input or an I/O problem.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import traceback

import numpy as np

from . import __version__
from .cx_model import (
    SPACE_KINDS,
    DiscretizedSpace,
    build_multiplication,
    check_cx_identities,
    check_refinement,
)
from .documents import InstanceDocument, ReportDocument, load_instance
from .exceptions import InputError, ModRangeError
from .norms import (
    DEFAULT_INTERIOR_SAMPLES,
    DEFAULT_THETA_STEPS,
    block_numerical_radius,
    block_operator_norm,
    module_norm,
    module_norm_bilinear,
    module_numerical_radius,
    monte_carlo_sup,
    sample_numerical_range,
)
from .operators import OPERATOR_CLASSES
from .verification import (
    DEFAULT_SET_TOL,
    DEFAULT_TOL,
    FuzzConfig,
    equivalence_ratios,
    fuzz_suite,
    kittaneh_positions,
    summarize,
    verify_instance,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
DEFAULT_SEED = 42
DEFAULT_MC_TRIALS = 10_000
DEFAULT_FUZZ_TRIALS = 1000
CSV_HEADER = ("character", "theta", "re", "im")


def _write(text: str, output: str | None) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {output}: {exc.strerror or exc}") from exc


def _load(args) -> tuple[InstanceDocument, str, object]:
    if not args.input:
        raise InputError("--input is required")
    doc = load_instance(args.input)
    if not doc.operators:
        raise InputError(f"{args.input}: operators: missing (the document only has a cx section)")
    name, T = doc.operator(args.operator)
    return doc, name, T


def _echo(doc: InstanceDocument, name: str) -> dict:
    return {"document": doc.to_dict(), "operator": name}


def _labelled(T, i: int) -> dict:
    return {"character": i, "label": T.shape.space.labels[i]}


# -- subcommands ----------------------------------------------------------------


def cmd_norm(args) -> tuple[ReportDocument, int]:
    doc, name, T = _load(args)
    w = module_norm(T)
    b = module_norm_bilinear(T)
    values = {
        "norm": w.value,
        "bilinear": b.value,
        "monte_carlo_norm": monte_carlo_sup(T, "norm", args.trials, args.seed),
        "monte_carlo_bilinear": monte_carlo_sup(T, "bilinear", args.trials, args.seed),
        "trials": args.trials,
        "per_character": [block_operator_norm(B) for B in T.blocks],
        "witness": {**w.to_dict(), **_labelled(T, w.character)},
        "bilinear_witness": b.to_dict(),
    }
    return ReportDocument("norm", __version__, args.seed, _echo(doc, name), values), EXIT_OK


def cmd_radius(args) -> tuple[ReportDocument, int]:
    doc, name, T = _load(args)
    w = module_numerical_radius(T, args.theta_steps)
    values = {
        "radius": w.value,
        **_labelled(T, w.character),
        "theta": w.theta,
        "witness": w.to_dict(),
        "monte_carlo_radius": monte_carlo_sup(T, "radius", args.trials, args.seed),
        "trials": args.trials,
        "theta_steps": args.theta_steps,
        "per_character": [block_numerical_radius(B, args.theta_steps) for B in T.blocks],
    }
    return ReportDocument("radius", __version__, args.seed, _echo(doc, name), values), EXIT_OK


def range_rows(sample) -> list[tuple]:
    rows = []
    for i, t, z in zip(sample.character.tolist(), sample.theta.tolist(), sample.value.tolist()):
        rows.append((int(i), None if np.isnan(t) else float(t), float(z.real), float(z.imag)))
    return rows


def format_range_csv(rows) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(CSV_HEADER)
    for i, t, re_, im_ in rows:
        wr.writerow([i, "" if t is None else repr(t), repr(re_), repr(im_)])
    return buf.getvalue()


def cmd_range(args) -> tuple[str, int]:
    doc, name, T = _load(args)
    sample = sample_numerical_range(T, args.theta_steps, args.samples, args.seed)
    rows = range_rows(sample)
    if args.format == "csv":
        text = format_range_csv(rows)
    else:
        payload = {
            "version": __version__,
            "seed": args.seed,
            "theta_steps": args.theta_steps,
            "samples": args.samples,
            "operator": name,
            "characters": list(T.shape.space.labels),
            "columns": list(CSV_HEADER),
            "rows": [list(r) for r in rows],
        }
        text = json.dumps(payload, sort_keys=True, allow_nan=False) + "\n"
    if args.figure:
        from .plotting import plot_range

        plot_range(sample.character, sample.theta, sample.value, args.figure,
                   labels=T.shape.space.labels,
                   radius=module_numerical_radius(T, args.theta_steps).value,
                   title=f"numerical range of {name}")
    return text, EXIT_OK


def cmd_verify(args) -> tuple[ReportDocument, int]:
    classes = tuple(c.strip() for c in args.classes.split(",") if c.strip())
    if args.fuzz:
        if args.input:
            raise InputError("give either --input or --fuzz, not both")
        trials = DEFAULT_FUZZ_TRIALS if args.trials is None else args.trials
        config = FuzzConfig(
            trials=trials, seed=args.seed, classes=classes, tol=args.tol,
            set_tol=args.set_tol, theta_steps=args.theta_steps,
            range_samples=args.range_samples or 64, mc_trials=args.mc_trials,
            workers=args.workers,
        )
        report = fuzz_suite(config)
        ratios = equivalence_ratios(report)
        positions = kittaneh_positions(report)
        values = {
            "instances": trials,
            "summary": summarize(report),
            "ratio_min": min(ratios) if ratios else None,
            "ratio_max": max(ratios) if ratios else None,
            "kittaneh_position_min": min(positions) if positions else None,
            "kittaneh_position_max": max(positions) if positions else None,
        }
        detail = args.checks or "failures"
        echo = report.descriptor
        if args.figure:
            from .plotting import plot_fuzz_summary

            plot_fuzz_summary(ratios, positions, args.figure,
                              title=f"{trials} instances, seed {args.seed}")
    else:
        doc, name, T = _load(args)
        report = verify_instance(
            T, seed=args.seed, tol=args.tol, set_tol=args.set_tol,
            theta_steps=args.theta_steps, range_samples=args.range_samples or 200,
            mc_trials=args.mc_trials,
        )
        eq = report.by_name("equivalence")[0]
        kt = report.by_name("kittaneh")[0]
        values = {
            "norm": eq.detail["norm"],
            "radius": eq.detail["radius"],
            "ratio": eq.detail["ratio"],
            "kittaneh_lower_margin": kt.detail["lower_margin"],
            "kittaneh_upper_margin": kt.detail["upper_margin"],
            "summary": summarize(report),
        }
        detail = args.checks or "all"
        echo = {**_echo(doc, name), "descriptor": report.descriptor}
        if args.figure:
            from .plotting import plot_range

            s = sample_numerical_range(T, args.theta_steps, DEFAULT_INTERIOR_SAMPLES, args.seed)
            plot_range(s.character, s.theta, s.value, args.figure, labels=T.shape.space.labels,
                       radius=values["radius"], title=f"numerical range of {name}")
    checks = [r.to_dict() for r in report.results if detail == "all" or not r.passed]
    doc_out = ReportDocument("verify", __version__, args.seed, echo, values, checks,
                             report.overall)
    failures = report.failures()
    for r in failures:
        where = "" if r.instance is None else f" (instance {r.instance})"
        print(f"FAIL {r.name}{where}: lhs={r.lhs!r} rhs={r.rhs!r} margin={r.margin!r} "
              f"tolerance={r.tolerance!r}", file=sys.stderr)
    print(f"verify: {len(report.results)} checks, {len(failures)} failed", file=sys.stderr)
    return doc_out, EXIT_OK if report.overall else EXIT_FAIL


def cmd_cx(args) -> tuple[ReportDocument, int]:
    if args.input:
        doc = load_instance(args.input)
        if doc.cx is None:
            raise InputError(f"{args.input}: cx: missing")
        setup = dict(doc.cx)
    else:
        setup = {"kind": args.kind, "symbol": args.symbol}
        if args.points:
            try:
                setup["points"] = [float(p) for p in args.points.split(",")]
            except ValueError as exc:
                raise InputError(f"--points: {exc}") from exc
        else:
            setup["m"] = args.m
    space = DiscretizedSpace.build(setup["kind"], setup.get("m"), setup.get("points"))
    M = build_multiplication(space, setup["symbol"])
    results = check_cx_identities(M, args.tol, args.theta_steps)
    refinable = args.refine > 0 and space.kind in ("interval", "circle") and not isinstance(
        setup["symbol"], (list, dict))
    if refinable:
        results.append(check_refinement(space.kind, setup["symbol"], args.refine, args.tol))
    norm = module_norm(M.operator).value
    omega = module_numerical_radius(M.operator, args.theta_steps).value
    values = {
        "m": space.m,
        "kind": space.kind,
        "norm": norm,
        "radius": omega,
        "sup_abs_symbol": float(np.max(np.abs(M.symbol))),
        "real_symbol": M.real_within(args.tol),
        "radius_equals_norm_asserted": any(r.name == "cx_radius_equals_norm" for r in results),
        "refinement_norms": results[-1].detail["norms"] if refinable else None,
    }
    if args.figure:
        from .plotting import plot_symbol

        plot_symbol(space.points, M.symbol, args.figure, norm=norm,
                    title=f"symbol values, {space.kind} m={space.m}")
    ok = all(r.passed for r in results)
    rep = ReportDocument("cx", __version__, None, {"cx": setup}, values,
                         [r.to_dict() for r in results], ok)
    return rep, EXIT_OK if ok else EXIT_FAIL


# -- parser ----------------------------------------------------------------------


def _positive_int(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {s!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _nonneg_float(s: str) -> float:
    try:
        v = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {s!r}")
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative number, got {s}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="modrange",
        description="Module norm, numerical radius and numerical range of block-diagonal operators.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="instance JSON file")
    common.add_argument("--operator", help="operator name inside the instance")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--tol", type=_nonneg_float, default=DEFAULT_TOL)
    common.add_argument("--theta-steps", type=_positive_int, default=DEFAULT_THETA_STEPS)
    common.add_argument("--output", help="write the report here instead of stdout")

    s = sub.add_parser("norm", parents=[common], help="module norm and its oracles")
    s.add_argument("--trials", type=_positive_int, default=DEFAULT_MC_TRIALS)
    s.set_defaults(func=cmd_norm)

    s = sub.add_parser("radius", parents=[common], help="module numerical radius")
    s.add_argument("--trials", type=_positive_int, default=DEFAULT_MC_TRIALS)
    s.set_defaults(func=cmd_radius)

    s = sub.add_parser("range", parents=[common], help="numerical range point cloud")
    s.add_argument("--samples", type=int, default=DEFAULT_INTERIOR_SAMPLES,
                   help="interior samples per character")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--figure", help="also write a PNG of the point cloud")
    s.set_defaults(func=cmd_range)

    s = sub.add_parser("verify", parents=[common], help="run the theorem checks")
    s.add_argument("--fuzz", action="store_true", help="run the randomized campaign")
    s.add_argument("--trials", type=_positive_int, default=None,
                   help=f"fuzz instances (default {DEFAULT_FUZZ_TRIALS})")
    s.add_argument("--mc-trials", type=_positive_int, default=1000,
                   help="Monte-Carlo trials per oracle check")
    s.add_argument("--classes", default=",".join(OPERATOR_CLASSES))
    s.add_argument("--workers", type=_positive_int, default=1)
    s.add_argument("--set-tol", type=_nonneg_float, default=DEFAULT_SET_TOL)
    s.add_argument("--range-samples", type=_positive_int, default=None)
    s.add_argument("--checks", choices=("all", "failures"), default=None,
                   help="which check results to list (default: all for one instance, "
                        "failures for --fuzz)")
    s.add_argument("--figure", help="also write a PNG summary")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("cx", parents=[common], help="multiplication operators on sampled X")
    s.add_argument("--kind", choices=SPACE_KINDS, default="interval")
    s.add_argument("--m", type=_positive_int, default=101)
    s.add_argument("--points", help="comma-separated sample points (overrides --m)")
    s.add_argument("--symbol", default="identity",
                   help="identity, identity-coordinate, exp-i-theta, zero, one or poly:c0,c1,...")
    s.add_argument("--refine", type=int, default=8,
                   help="dyadic refinement levels to check (0 disables)")
    s.add_argument("--figure", help="also write a PNG of the symbol values")
    s.set_defaults(func=cmd_cx)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # --help / --version exit 0, usage errors exit 2
        return int(exc.code or 0) if exc.code in (0, None) else EXIT_INPUT
    try:
        out, code = args.func(args)
        text = out if isinstance(out, str) else out.dumps()
        _write(text, args.output)
        return code
    except (ModRangeError, ValueError) as exc:
        print(f"modrange {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception:
        traceback.print_exc()
        print(f"modrange {args.command}: internal error", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
