"""Command-line front end.

Subcommands: ``expand`` (build and dump an expansion family),
``estimators`` (dump growth/error series), ``control`` (integrate the
control equation at one Reynolds number), ``critical`` (bisect for the
critical Reynolds number), and ``verify`` (self-check suite against
known closed forms).

Exit codes: 0 success (and Global for control runs), 2 BlowUp,
3 Inconclusive, 1 error.
"""

from __future__ import annotations

import argparse
import os
import sys

from .control import (
    Classification,
    ControlParams,
    find_critical,
    solve_control,
    solve_scaled_control,
)
from .data import load_datum
from .expansion import differential_error_closed, expand_terms
from .io import (
    classification_record,
    family_manifest,
    family_to_json,
    format_float,
    norm_series_to_dict,
    write_json,
    write_trajectory_csv,
)
from .norms import build_estimator_bundle

THREADS_ENV = "REYNEX_THREADS"


def _thread_count() -> int:
    """Requested worker count (informational; solves are sequential)."""
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        count = int(raw)
    except ValueError as exc:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc
    if count < 1:
        raise ValueError(f"{THREADS_ENV} must be >= 1, got {count}")
    return count


def _echo_params(args, extra: dict | None = None) -> None:
    fields = {"datum": args.datum, "order": args.order}
    if extra:
        fields.update(extra)
    fields["threads"] = _thread_count()
    print("parameters: " + ", ".join(f"{k}={v}" for k, v in fields.items()))


def _build_bundle(args):
    datum = load_datum(args.datum)
    family = expand_terms(datum, args.order)
    return build_estimator_bundle(
        family,
        sobolev_order=args.sobolev,
        mode=args.mode,
    )


def cmd_expand(args) -> int:
    _echo_params(args)
    datum = load_datum(args.datum)
    family = expand_terms(datum, args.order)
    manifest = family_manifest(family, args.datum)
    for grade in manifest["grades"]:
        counts = grade["component_terms"]
        print(
            f"u_{grade['order']}: component terms {counts}, "
            f"wave vectors {grade['wave_vectors']}"
        )
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        write_json(manifest, os.path.join(args.out, "manifest.json"))
        write_json(family_to_json(family, args.datum), os.path.join(args.out, "family.json"))
        print(f"wrote manifest.json, family.json to {args.out}")
    return 0


def cmd_estimators(args) -> int:
    _echo_params(args, {"sobolev": args.sobolev, "mode": args.mode})
    bundle = _build_bundle(args)
    series = {
        f"growth_n{bundle.sobolev_order}": bundle.growth_sq,
        f"growth_n{bundle.sobolev_order + 1}": bundle.growth_next_sq,
    }
    if bundle.mode == "tautological":
        series[f"error_n{bundle.sobolev_order}"] = bundle.error_sq
    for name, ser in series.items():
        print(f"{name}: {len(ser.terms)} triples")
    if bundle.mode == "rough":
        print("error: rough mode (product-of-norms bound, no closed series)")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for name, ser in series.items():
            write_json(norm_series_to_dict(ser), os.path.join(args.out, f"{name}.json"))
        print(f"wrote {len(series)} series to {args.out}")
    return 0


def _sample_times(solution, count: int = 11):
    t_end = float(solution.times[-1])
    times = [min(round(i * t_end / (count - 1), 6), t_end) for i in range(count)]
    times[-1] = t_end
    return times


def cmd_control(args) -> int:
    _echo_params(
        args,
        {
            "reynolds": args.reynolds,
            "mode": args.mode,
            "scaled": args.scaled,
            "t_max": args.t_max,
        },
    )
    bundle = _build_bundle(args)
    params = ControlParams(
        reynolds=args.reynolds,
        bundle=bundle,
        t_max=args.t_max,
        blowup_cap=args.cap,
        rel_tol=args.rel_tol,
        abs_tol=args.abs_tol,
    )
    solver = solve_scaled_control if args.scaled else solve_control
    solution = solver(params)

    scale = args.reynolds ** (args.order + 1) if args.scaled else 1.0
    print(f"classification: {solution.classification.value}")
    if solution.blowup_time is not None:
        print(
            f"Tc = {format_float(solution.blowup_time)} "
            f"(+/- {format_float(solution.blowup_uncertainty)})"
        )
    for t in _sample_times(solution):
        print(f"  Rr({format_float(t)}) = {format_float(scale * solution.at(t))}")

    if args.out:
        os.makedirs(args.out, exist_ok=True)
        frozen = bundle.frozen(args.reynolds)
        write_trajectory_csv(os.path.join(args.out, "trajectory.csv"), solution, frozen)
        write_json(classification_record(solution), os.path.join(args.out, "result.json"))
        print(f"wrote trajectory.csv, result.json to {args.out}")
    if args.plot:
        _plot_run(args.plot, solution, bundle, args.reynolds, scale)
        print(f"wrote plot to {args.plot}")
    return solution.classification.exit_code


def _plot_run(path: str, solution, bundle, reynolds: float, scale: float) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    frozen = bundle.frozen(reynolds)
    ts = solution.times
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.2))
    axes[0].plot(ts, [scale * v for v in solution.values])
    axes[0].set_title(f"control radius, R={reynolds}")
    axes[1].plot(ts, [frozen.norm_n(t) for t in ts])
    axes[1].set_title(f"growth estimator order {bundle.sobolev_order}")
    axes[2].plot(ts, [frozen.error(t) for t in ts])
    axes[2].set_title("error estimator")
    for ax in axes:
        ax.set_xlabel("t")
        ax.set_yscale("log")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def cmd_critical(args) -> int:
    _echo_params(
        args,
        {"lo": args.lo, "hi": args.hi, "resolution": args.resolution, "mode": args.mode},
    )
    bundle = _build_bundle(args)

    def make_params(reynolds: float) -> ControlParams:
        return ControlParams(
            reynolds=reynolds,
            bundle=bundle,
            t_max=args.t_max,
            blowup_cap=args.cap,
            rel_tol=args.rel_tol,
            abs_tol=args.abs_tol,
        )

    result = find_critical(make_params, args.lo, args.hi, args.resolution)
    for reynolds, outcome, horizon in result.evaluations:
        print(f"  R={reynolds:g}: {outcome.value} (horizon {horizon:g})")
    print(f"critical bracket: ({result.lower:g}, {result.upper:g})")
    if result.aborted:
        print(f"warning: narrowing aborted: {result.aborted}", file=sys.stderr)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        record = {
            "lower": result.lower,
            "upper": result.upper,
            "resolution": result.resolution,
            "aborted": result.aborted,
            "evaluations": [
                {"reynolds": r, "classification": c.value, "horizon": h}
                for r, c, h in result.evaluations
            ],
        }
        write_json(record, os.path.join(args.out, "critical.json"))
        print(f"wrote critical.json to {args.out}")
    return 0


def cmd_verify(args) -> int:
    if args.datum != "bnw":
        load_datum(args.datum)  # fail fast on a bad datum before the suite runs
    from .verify import run_suite

    ok, lines = run_suite(args.suite)
    for line in lines:
        print(line)
    print("verify: all checks passed" if ok else "verify: FAILURES above")
    return 0 if ok else 1


def _add_common(parser, with_order=True):
    parser.add_argument(
        "--datum",
        default="bnw",
        help="built-in datum name or path to a datum JSON file (default: bnw)",
    )
    if with_order:
        parser.add_argument(
            "--order", type=int, default=1, help="expansion order N (default: 1)"
        )


def _add_estimator_flags(parser):
    parser.add_argument(
        "--sobolev", type=int, default=3, help="Sobolev index n (default: 3)"
    )
    parser.add_argument(
        "--mode",
        choices=("tautological", "rough"),
        default="tautological",
        help="error estimator: exact residual norm or product-of-norms bound",
    )


def _add_solver_flags(parser):
    parser.add_argument("--t-max", type=float, default=50.0, help="horizon (default: 50)")
    parser.add_argument(
        "--cap", type=float, default=1e8, help="blow-up detection cap (default: 1e8)"
    )
    parser.add_argument("--rel-tol", type=float, default=1e-10)
    parser.add_argument("--abs-tol", type=float, default=1e-12)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reynex",
        description=(
            "Exact Reynolds-number expansions of Navier-Stokes flows on the "
            "torus, with certified growth/error estimators and a control "
            "equation for global-existence certificates."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="build an expansion family and dump it")
    _add_common(p)
    p.add_argument("--out", help="directory for manifest.json and family.json")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("estimators", help="build and dump the estimator series")
    _add_common(p)
    _add_estimator_flags(p)
    p.add_argument("--out", help="directory for the series JSON files")
    p.set_defaults(func=cmd_estimators)

    p = sub.add_parser("control", help="integrate the control equation at one R")
    _add_common(p)
    _add_estimator_flags(p)
    _add_solver_flags(p)
    p.add_argument("--reynolds", type=float, required=True)
    p.add_argument(
        "--scaled",
        action="store_true",
        help="integrate the R**-(N+1)-scaled variable instead",
    )
    p.add_argument("--out", help="directory for trajectory.csv and result.json")
    p.add_argument("--plot", help="write a PNG of the run (requires matplotlib)")
    p.set_defaults(func=cmd_control)

    p = sub.add_parser("critical", help="bisect for the critical Reynolds number")
    _add_common(p)
    _add_estimator_flags(p)
    _add_solver_flags(p)
    p.add_argument("--lo", type=float, required=True, help="Reynolds number expected Global")
    p.add_argument("--hi", type=float, required=True, help="Reynolds number expected BlowUp")
    p.add_argument("--resolution", type=float, default=0.01)
    p.add_argument("--out", help="directory for critical.json")
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("verify", help="run the self-check suite")
    p.add_argument(
        "--suite",
        choices=("fast", "full"),
        default="fast",
        help="fast: low-order closed forms; full: adds high-order counts and runs",
    )
    p.add_argument(
        "--datum",
        default="bnw",
        help="datum file to validate before the suite runs (default: bnw)",
    )
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
