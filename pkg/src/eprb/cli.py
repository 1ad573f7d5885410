"""Command-line front end for curve scans, model comparison, and CHSH analysis.

Subcommands::

    eprb scan       estimate one model's coincidence curve on an angle grid
    eprb compare    Furry vs HBT vs QM discrepancy report (minima, max gap)
    eprb chsh       CHSH correlations, S, and the deterministic local bound
    eprb decompose  conditional-probability decomposition + factorizability
    eprb converge   Monte Carlo error scaling across sample decades

Reports are CSV (curve files use exactly the columns
``phi_radians,probability,std_error,method``) or JSON
(``{schema, config, results[], summary{}}``); ``--plot PATH`` additionally
renders a matplotlib figure next to the data.  Angles are radians unless
``--degrees`` is given; grid and settings tokens may use a ``pi`` suffix
(``0.5pi``).  Exit codes: 0 success, 2 usage or model error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bell import (
    CANONICAL_SETTINGS,
    ChshSettings,
    chsh_S,
    decompose_conditional,
    factorizability_check,
    reconstruct_coincidence,
)
from .estimators import (
    ClosedForm,
    MonteCarloConfig,
    QuadratureConfig,
    scan_curve,
)
from .exceptions import (
    DataError,
    DomainError,
    EprbError,
    ModelError,
    UsageError,
)
from .models import (
    ChannelConvention,
    ContractionMode,
    ModelKind,
    SourceModel,
    closed_form,
    qm_reference,
)

SCHEMA_VERSION = 1

MODEL_TOKENS = {
    "furry": ModelKind.FURRY_LINEAR,
    "hbt": ModelKind.CIRCULAR_HBT,
    "qm": ModelKind.QM_REFERENCE,
}

CONTRACTION_TOKENS = {
    "eq6": ContractionMode.CROSS_AMPLITUDE,
    "bilinear": ContractionMode.BILINEAR_MAGNITUDE,
    "hermitian": ContractionMode.HERMITIAN_MAGNITUDE,
}

CONVENTION_TOKENS = {
    "orthogonal": ChannelConvention.ORTHOGONAL_PASS,
    "parallel": ChannelConvention.PARALLEL_PASS,
}

CONVERGE_DECADES = (1_000, 10_000, 100_000, 1_000_000)


# ---------------------------------------------------------------------------
# parsing helpers
# ---------------------------------------------------------------------------

def parse_angle(token: str, degrees: bool = False) -> float:
    """Parse an angle token: a float, or a multiple of pi ('pi', '0.5pi', '-2pi')."""
    t = token.strip().lower()
    try:
        if t.endswith("pi"):
            head = t[:-2]
            factor = 1.0 if head in ("", "+") else -1.0 if head == "-" else float(head)
            value = factor * math.pi
        else:
            value = float(t)
    except ValueError:
        raise UsageError(f"cannot parse angle {token!r}") from None
    if not math.isfinite(value):
        raise DomainError(f"angle must be finite, got {token!r}")
    return math.radians(value) if degrees else value


def parse_grid(spec: str, degrees: bool = False) -> np.ndarray:
    """Parse 'start:stop:count' into an inclusive, evenly spaced angle grid."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must be start:stop:count, got {spec!r}")
    start = parse_angle(parts[0], degrees)
    stop = parse_angle(parts[1], degrees)
    try:
        count = int(parts[2])
    except ValueError:
        raise UsageError(f"grid count must be an integer, got {parts[2]!r}") from None
    if count < 1:
        raise UsageError(f"grid count must be positive, got {count}")
    return np.linspace(start, stop, count)


def parse_settings(spec: str, degrees: bool = False) -> ChshSettings:
    """Parse 'a,a_prime,b,b_prime' into CHSH settings."""
    parts = spec.split(",")
    if len(parts) != 4:
        raise UsageError(f"settings must be four comma-separated angles, got {spec!r}")
    a, a_prime, b, b_prime = (parse_angle(p, degrees) for p in parts)
    return ChshSettings(a=a, a_prime=a_prime, b=b, b_prime=b_prime)


def _resolve_model(args) -> SourceModel:
    kind = MODEL_TOKENS[args.model]
    convention = getattr(args, "convention", None)
    if convention is not None and kind is not ModelKind.QM_REFERENCE:
        raise UsageError("--convention selects the QM reference channel; use it with --model qm")
    resolved = CONVENTION_TOKENS[convention] if convention else ChannelConvention.ORTHOGONAL_PASS
    return SourceModel(kind=kind, convention=resolved)


def _resolve_contraction(args, kind: ModelKind) -> ContractionMode:
    token = getattr(args, "contraction", None)
    if token is not None and kind is not ModelKind.CIRCULAR_HBT:
        raise UsageError("--contraction applies to the coherence ratio; use it with --model hbt")
    return CONTRACTION_TOKENS[token] if token else ContractionMode.CROSS_AMPLITUDE


# ---------------------------------------------------------------------------
# emission
# ---------------------------------------------------------------------------

def _csv_text(columns: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(row[c]) for c in columns])
    return buf.getvalue()


def _csv_cell(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    return value


def _json_text(config: dict, results: list[dict], summary: dict) -> str:
    report = {
        "schema": SCHEMA_VERSION,
        "config": config,
        "results": results,
        "summary": summary,
    }
    return json.dumps(report, indent=2) + "\n"


def _emit(args, config: dict, columns: list[str], rows: list[dict], summary: dict) -> None:
    if args.format == "csv":
        text = _csv_text(columns, rows)
    else:
        text = _json_text(config, rows, summary)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _render_plot(args, make_figure) -> None:
    if not getattr(args, "plot", None):
        return
    from . import plots  # deferred: pulls in matplotlib

    plots.save_figure(make_figure(plots), args.plot)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_scan(args) -> int:
    model = _resolve_model(args)
    mode = _resolve_contraction(args, model.kind)
    grid = parse_grid(args.grid, args.degrees)
    if args.estimator == "closed-form":
        spec = ClosedForm()
    elif args.estimator == "quadrature":
        spec = QuadratureConfig(nodes=args.nodes)
    else:
        spec = MonteCarloConfig(samples=args.samples, seed=args.seed)

    curve = scan_curve(model, grid, spec, mode)

    config = {
        "command": "scan",
        "model": args.model,
        "convention": model.convention.value,
        "estimator": args.estimator,
        "contraction": mode.value,
        "nodes": args.nodes,
        "samples": args.samples,
        "seed": args.seed,
        "grid": args.grid,
        "degrees": args.degrees,
        "format": args.format,
        "output": args.output,
        "plot": args.plot,
    }
    rows = [
        {
            "phi_radians": float(phi),
            "probability": est.mean,
            "std_error": est.std_error,
            "method": est.method.value,
        }
        for phi, est in zip(curve.phi, curve.estimates)
    ]
    summary = {
        "points": len(rows),
        "probability_min": min(r["probability"] for r in rows),
        "probability_max": max(r["probability"] for r in rows),
    }
    _emit(args, config, ["phi_radians", "probability", "std_error", "method"], rows, summary)
    _render_plot(
        args,
        lambda plots: plots.curve_figure(
            curve.phi, curve.means, curve.std_errors, f"{args.model} ({args.estimator})"
        ),
    )
    return 0


def cmd_compare(args) -> int:
    grid = parse_grid(args.grid, args.degrees)
    quad = QuadratureConfig(nodes=args.nodes)
    furry = scan_curve(SourceModel(ModelKind.FURRY_LINEAR), grid, quad).means
    hbt = scan_curve(SourceModel(ModelKind.CIRCULAR_HBT), grid, quad).means
    qm = np.asarray(qm_reference(grid, ChannelConvention.ORTHOGONAL_PASS), dtype=float)

    config = {
        "command": "compare",
        "grid": args.grid,
        "nodes": args.nodes,
        "degrees": args.degrees,
        "format": args.format,
        "output": args.output,
        "plot": args.plot,
    }
    rows = [
        {
            "phi_radians": float(p),
            "furry": float(f),
            "hbt": float(h),
            "qm": float(q),
        }
        for p, f, h, q in zip(grid, furry, hbt, qm)
    ]
    k_furry = int(np.argmin(furry))
    k_hbt = int(np.argmin(hbt))
    summary = {
        "furry_min": float(furry[k_furry]),
        "furry_min_phi": float(grid[k_furry]),
        "hbt_min": float(hbt[k_hbt]),
        "hbt_min_phi": float(grid[k_hbt]),
        "max_abs_diff_hbt_qm": float(np.max(np.abs(hbt - qm))),
    }
    _emit(args, config, ["phi_radians", "furry", "hbt", "qm"], rows, summary)
    _render_plot(args, lambda plots: plots.comparison_figure(grid, furry, hbt, qm))
    return 0


def cmd_chsh(args) -> int:
    model = _resolve_model(args)
    settings = parse_settings(args.settings, args.degrees) if args.settings else CANONICAL_SETTINGS
    result = chsh_S(model, settings)

    config = {
        "command": "chsh",
        "model": args.model,
        "convention": model.convention.value,
        "settings": {
            "a": settings.a,
            "a_prime": settings.a_prime,
            "b": settings.b,
            "b_prime": settings.b_prime,
        },
        "degrees": args.degrees,
        "format": args.format,
        "output": args.output,
        "plot": args.plot,
    }
    row = {
        "e_ab": result.e_ab,
        "e_ab_prime": result.e_ab_prime,
        "e_a_prime_b": result.e_a_prime_b,
        "e_a_prime_b_prime": result.e_a_prime_b_prime,
        "s_value": result.s_value,
        "abs_s": result.abs_s,
        "lhv_bound": result.lhv_bound,
        "violates_lhv": result.violates_lhv,
    }
    summary = {
        "s_value": result.s_value,
        "abs_s": result.abs_s,
        "lhv_bound": result.lhv_bound,
        "violates_lhv": result.violates_lhv,
    }
    _emit(args, config, list(row.keys()), [row], summary)
    _render_plot(args, lambda plots: plots.chsh_figure(result, settings))
    return 0


def cmd_decompose(args) -> int:
    model = _resolve_model(args)
    a = parse_angle(args.a, args.degrees)
    b = parse_angle(args.b, args.degrees)
    decomposition = decompose_conditional(model, a, b, lambda_nodes=args.nodes)
    report = factorizability_check(decomposition, tol=args.tol)
    reconstruction = reconstruct_coincidence(decomposition)
    target = float(closed_form(model, b - a))

    config = {
        "command": "decompose",
        "model": args.model,
        "a": a,
        "b": b,
        "nodes": args.nodes,
        "tol": args.tol,
        "degrees": args.degrees,
        "format": args.format,
        "output": args.output,
        "plot": args.plot,
    }
    rows = [
        {
            "lambda_radians": float(lam),
            "p_a_given_lambda": float(pa),
            "p_b_given_lambda": float(pb),
            "p_b_given_a_lambda": float(pba),
            "degenerate": bool(deg),
        }
        for lam, pa, pb, pba, deg in zip(
            decomposition.lambdas,
            decomposition.p_a_given_lambda,
            decomposition.p_b_given_lambda,
            decomposition.p_b_given_a_lambda,
            decomposition.degenerate,
        )
    ]
    summary = {
        "factorizable": report.factorizable,
        "max_deviation": report.max_deviation,
        "argmax_lambda": report.argmax_lambda,
        "degenerate_nodes": int(np.count_nonzero(decomposition.degenerate)),
        "reconstruction": reconstruction,
        "closed_form": target,
        "reconstruction_error": abs(reconstruction - target),
    }
    _emit(
        args,
        config,
        ["lambda_radians", "p_a_given_lambda", "p_b_given_lambda", "p_b_given_a_lambda", "degenerate"],
        rows,
        summary,
    )
    _render_plot(args, lambda plots: plots.decomposition_figure(decomposition))
    return 0


def cmd_converge(args) -> int:
    model = _resolve_model(args)
    mode = _resolve_contraction(args, model.kind)
    phi = parse_angle(args.phi, args.degrees) if args.phi else math.pi / 3
    if args.seeds < 1:
        raise UsageError(f"--seeds must be positive, got {args.seeds}")
    target = float(closed_form(model, phi))

    mean_abs_errors = []
    mean_std_errors = []
    for samples in CONVERGE_DECADES:
        abs_errors = []
        std_errors = []
        for seed in range(1, args.seeds + 1):
            curve = scan_curve(model, [phi], MonteCarloConfig(samples=samples, seed=seed), mode)
            est = curve.estimates[0]
            abs_errors.append(abs(est.mean - target))
            std_errors.append(est.std_error)
        mean_abs_errors.append(float(np.mean(abs_errors)))
        mean_std_errors.append(float(np.mean(std_errors)))
    slope = float(
        np.polyfit(np.log10(CONVERGE_DECADES), np.log10(mean_std_errors), deg=1)[0]
    )

    config = {
        "command": "converge",
        "model": args.model,
        "contraction": mode.value,
        "phi": phi,
        "seeds": args.seeds,
        "sample_decades": list(CONVERGE_DECADES),
        "degrees": args.degrees,
        "format": args.format,
        "output": args.output,
        "plot": args.plot,
    }
    rows = [
        {"samples": n, "mean_abs_error": ae, "mean_std_error": se}
        for n, ae, se in zip(CONVERGE_DECADES, mean_abs_errors, mean_std_errors)
    ]
    summary = {"closed_form": target, "phi": phi, "std_error_slope": slope}
    _emit(args, config, ["samples", "mean_abs_error", "mean_std_error"], rows, summary)
    _render_plot(
        args,
        lambda plots: plots.convergence_figure(
            CONVERGE_DECADES, mean_abs_errors, mean_std_errors, slope
        ),
    )
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser, default_format: str) -> None:
    p.add_argument("--output", metavar="PATH", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), default=default_format,
                   help=f"report format (default: {default_format})")
    p.add_argument("--degrees", action="store_true",
                   help="interpret all angle inputs as degrees")
    p.add_argument("--plot", metavar="PATH",
                   help="also render a figure to PATH (.png/.pdf/.svg)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eprb",
        description="Classical coincidence models for the two-polarizer EPRB experiment.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", help="estimate a coincidence curve on an angle grid")
    p.add_argument("--model", choices=sorted(MODEL_TOKENS), required=True)
    p.add_argument("--estimator", choices=("closed-form", "quadrature", "mc"),
                   default="closed-form")
    p.add_argument("--contraction", choices=sorted(CONTRACTION_TOKENS), default=None,
                   help="coherence-numerator contraction (hbt model only; default eq6)")
    p.add_argument("--convention", choices=sorted(CONVENTION_TOKENS), default=None,
                   help="detector-channel convention (qm model only; default orthogonal)")
    p.add_argument("--nodes", type=int, default=64, help="quadrature nodes (default 64)")
    p.add_argument("--samples", type=int, default=10_000, help="Monte Carlo samples")
    p.add_argument("--seed", type=int, default=0, help="Monte Carlo seed")
    p.add_argument("--grid", default="0:pi:9", help="angle grid start:stop:count (default 0:pi:9)")
    _add_common(p, default_format="csv")
    p.set_defaults(handler=cmd_scan)

    p = sub.add_parser("compare", help="Furry vs HBT vs QM discrepancy report")
    p.add_argument("--grid", default="0:pi:201", help="angle grid (default 0:pi:201)")
    p.add_argument("--nodes", type=int, default=64, help="quadrature nodes (default 64)")
    _add_common(p, default_format="json")
    p.set_defaults(handler=cmd_compare)

    p = sub.add_parser("chsh", help="CHSH correlations and the local deterministic bound")
    p.add_argument("--model", choices=sorted(MODEL_TOKENS), required=True)
    p.add_argument("--convention", choices=sorted(CONVENTION_TOKENS), default=None)
    p.add_argument("--settings", default=None,
                   help="a,a_prime,b,b_prime (default 0,pi/4,pi/8,3pi/8)")
    _add_common(p, default_format="json")
    p.set_defaults(handler=cmd_chsh)

    p = sub.add_parser("decompose", help="conditional decomposition and factorizability")
    p.add_argument("--model", choices=sorted(MODEL_TOKENS), required=True)
    p.add_argument("--a", default="0", help="polarizer angle at station A (default 0)")
    p.add_argument("--b", default="0.125pi", help="polarizer angle at station B (default pi/8)")
    p.add_argument("--nodes", type=int, default=360, help="hidden-variable grid nodes (default 360)")
    p.add_argument("--tol", type=float, default=1e-9, help="factorizability tolerance (default 1e-9)")
    _add_common(p, default_format="json")
    p.set_defaults(handler=cmd_decompose)

    p = sub.add_parser("converge", help="Monte Carlo error scaling across sample decades")
    p.add_argument("--model", choices=("furry", "hbt"), default="furry")
    p.add_argument("--contraction", choices=sorted(CONTRACTION_TOKENS), default=None)
    p.add_argument("--phi", default=None, help="coincidence angle (default pi/3)")
    p.add_argument("--seeds", type=int, default=20, help="number of seeded trials (default 20)")
    _add_common(p, default_format="json")
    p.set_defaults(handler=cmd_converge)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (UsageError, ModelError, DomainError, DataError) as exc:
        print(f"eprb: error: {exc}", file=sys.stderr)
        return 2
    except EprbError as exc:  # evaluation/consistency faults are still exit 2
        print(f"eprb: internal error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"eprb: i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
