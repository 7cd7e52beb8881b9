"""Command-line interface.

Subcommands: estimate (closed-form bounds for one (v_fill, L, R) triple),
verify (run a dataset through the bound checks), figures (emit the figure
series as CSV and SVG), tube-radius (word search over a group presentation),
surgery (cone-profile volume predictors), synthesize (generate a dataset).

Exit codes: 0 success, 1 input error, 2 domain error, 3 verification
failure.  Numeric output is printed with 12 significant digits.  A config
file of key=value lines may supply defaults; flags override it.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

from . import census, hypkernel, kleinian, surgery, svgplot, topobounds
from .errors import DomainError, IngestError, ParseError
from .hypkernel import Factor, TubeData

__all__ = ["main"]


def _fmt(x: float) -> str:
    return f"{x:.12g}"


# ---------------------------------------------------------------------------
# Config file


def _load_config(path: str) -> dict[str, str]:
    values = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ParseError(f"{path}: line {lineno}: expected key=value")
            key, _, value = line.partition("=")
            values[key.strip().replace("-", "_")] = value.strip()
    return values


_CONFIG_TYPES = {
    "factor": str,
    "bins": int,
    "max_word_length": int,
    "seed": int,
    "count": int,
    "noise_sigma": float,
    "r_min": float,
    "r_max": float,
    "curve_points": int,
    "radius": float,
    "report": str,
    "tol": float,
}


def _config_values(path: str) -> dict:
    values = {}
    for key, raw in _load_config(path).items():
        if key not in _CONFIG_TYPES:
            raise ParseError(f"{path}: unknown config key {key!r}")
        try:
            values[key] = _CONFIG_TYPES[key](raw)
        except ValueError as exc:
            raise ParseError(f"{path}: bad value for {key!r}: {exc}") from exc
    return values


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_estimate(args) -> int:
    tube = TubeData(args.length, args.radius)
    v_fill = args.v_fill
    if not (math.isfinite(v_fill) and v_fill > 0.0):
        raise DomainError("v_fill must be positive")
    rows = [
        ("tube_volume", hypkernel.tube_volume(tube)),
        ("tube_boundary_area", hypkernel.tube_boundary_area(tube)),
        ("mean_curvature", hypkernel.mean_curvature(tube.radius)),
        ("horocusp_volume", hypkernel.horocusp_volume(tube)),
        ("B", hypkernel.bound_base_B(v_fill, tube)),
        ("C_O", hypkernel.factor_co(tube.radius)),
        ("C_P", hypkernel.factor_cp(tube.radius)),
    ]
    if args.factor in ("old", "both"):
        rows.append(("V_est_old", hypkernel.drilled_volume_bound(v_fill, tube, Factor.OLD)))
    if args.factor in ("perelman", "both"):
        rows.append(
            ("V_est_perelman", hypkernel.drilled_volume_bound(v_fill, tube, Factor.PERELMAN))
        )
    if args.csv:
        print(",".join(name for name, _ in rows))
        print(",".join(_fmt(value) for _, value in rows))
    else:
        width = max(len(name) for name, _ in rows)
        for name, value in rows:
            print(f"{name:<{width}}  {_fmt(value)}")
    return 0


def _print_summary(stats: census.DatasetStats) -> None:
    print(f"records            {stats.count}")
    print(f"mean dv/(pi L)     {_fmt(stats.mean_ratio)}")
    print(f"std dv/(pi L)      {_fmt(stats.std_ratio)}")
    print(
        "violations         "
        + " ".join(f"{key}={stats.violations[key]}" for key in census.VIOLATION_KEYS)
    )
    print(
        f"length range       [{_fmt(stats.length_range[0])}, {_fmt(stats.length_range[1])}]"
    )
    print(
        f"radius range       [{_fmt(stats.radius_range[0])}, {_fmt(stats.radius_range[1])}]"
    )
    if stats.violations["b_le_vdrill"]:
        print(
            f"warning: B > v_drill on {stats.violations['b_le_vdrill']} record(s); "
            "this observation is not a theorem, so it never fails verification"
        )


def _cmd_verify(args) -> int:
    records = census.ingest(args.dataset)
    if not records:
        print("error: dataset contains no records", file=sys.stderr)
        return 1
    reports = census.evaluate(records, tol=args.tol)
    stats = census.statistics(reports, bins=args.bins)
    report_path = args.report or args.dataset + ".report.csv"
    census.write_report_csv(reports, report_path)
    print(f"report written to {report_path}")
    _print_summary(stats)
    if stats.violations["perelman"] > 0:
        print(
            f"FAIL: {stats.violations['perelman']} record(s) violate the sharp "
            "drilled-volume bound",
            file=sys.stderr,
        )
        return 3
    print("OK: all records satisfy the sharp drilled-volume bound")
    return 0


def _cmd_figures(args) -> int:
    records = census.ingest(args.dataset)
    if not records:
        print("error: dataset contains no records", file=sys.stderr)
        return 1
    reports = census.evaluate(records)
    series = census.figure_series(
        reports,
        r_range=(args.r_min, args.r_max),
        curve_points=args.curve_points,
        bins=args.bins,
    )
    os.makedirs(args.out_dir, exist_ok=True)
    written = []
    for fig in series.values():
        base = os.path.join(args.out_dir, fig.name)
        if fig.scatter_x:
            with open(base + ".csv", "w", encoding="utf-8", newline="\n") as handle:
                extra = list(fig.extra_columns)
                handle.write(",".join(["name", "x", "y"] + extra) + "\n")
                for i, (label, x, y) in enumerate(
                    zip(fig.scatter_labels, fig.scatter_x, fig.scatter_y)
                ):
                    cells = [label, _fmt(x), _fmt(y)]
                    cells += [_fmt(fig.extra_columns[col][i]) for col in extra]
                    handle.write(",".join(cells) + "\n")
        else:
            with open(base + ".csv", "w", encoding="utf-8", newline="\n") as handle:
                curve = fig.curves[0]
                handle.write(f"x,{curve.label}\n")
                for x, y in zip(curve.x, curve.y):
                    handle.write(f"{_fmt(x)},{_fmt(y)}\n")
        written.append(base + ".csv")
        if fig.scatter_x and fig.curves:
            with open(base + "_curves.csv", "w", encoding="utf-8", newline="\n") as handle:
                handle.write("x," + ",".join(c.label for c in fig.curves) + "\n")
                for i, x in enumerate(fig.curves[0].x):
                    handle.write(
                        ",".join([_fmt(x)] + [_fmt(c.y[i]) for c in fig.curves]) + "\n"
                    )
            written.append(base + "_curves.csv")
        if fig.hist_counts:
            with open(base + "_hist.csv", "w", encoding="utf-8", newline="\n") as handle:
                handle.write("bin_left,bin_right,count\n")
                for count, lo, hi in zip(
                    fig.hist_counts, fig.hist_edges, fig.hist_edges[1:]
                ):
                    handle.write(f"{_fmt(lo)},{_fmt(hi)},{count}\n")
            written.append(base + "_hist.csv")
        with open(base + ".svg", "w", encoding="utf-8", newline="\n") as handle:
            handle.write(svgplot.render_figure(fig))
        written.append(base + ".svg")
    for path in written:
        print(path)
    return 0


def _cmd_tube_radius(args) -> int:
    presentation = kleinian.read_presentation(args.presentation)
    result = kleinian.tube_radius_upper_bound(presentation, args.max_word_length)
    core_len = kleinian.complex_length(presentation.core())
    print(f"core word          {presentation.core_word}")
    print(f"core length        {_fmt(core_len.real)}")
    print(f"core rotation      {_fmt(core_len.imag)}")
    if result.witness is None:
        print("tube radius        infinite (no distinct lift found)")
    else:
        print(f"tube radius bound  {_fmt(result.radius)}")
        print(f"witness word       {result.witness}")
    return 0


def _cmd_surgery(args) -> int:
    profile = surgery.read_profile(args.profile)
    delta_trap = surgery.schlafli_delta_v(profile, "trapezoid")
    print(f"delta_v trapezoid  {_fmt(delta_trap)}")
    try:
        delta_simp = surgery.schlafli_delta_v(profile, "simpson")
        print(f"delta_v simpson    {_fmt(delta_simp)}")
    except DomainError:
        print("delta_v simpson    n/a (needs uniform spacing and odd sample count)")
    final_length = profile.lengths[-1]
    print(f"nz_estimate        {_fmt(surgery.neumann_zagier_estimate(final_length))}")
    result = surgery.bridgeman_check(profile)
    print(f"monotone           {'true' if result.monotone else 'false'}")
    print(f"bound delta_v<=piL {'true' if result.bound_holds else 'false'}")
    print(f"pi_l               {_fmt(result.pi_l)}")
    if args.radius is not None:
        flag = surgery.hodgson_kerckhoff_regime(final_length, args.radius)
        print(f"hk_regime          {'true' if flag else 'false'}")
    return 0


def _cmd_synthesize(args) -> int:
    records = census.synthesize(args.count, args.seed, noise_sigma=args.noise_sigma)
    census.write_dataset(records, args.out)
    print(f"wrote {len(records)} records to {args.out}")
    return 0


def _cmd_bounds(args) -> int:
    rows = []
    if args.chi is not None:
        if args.gromov_norm is not None:
            data = topobounds.GutsData(args.chi, args.gromov_norm)
            norm_tier, chi_tier = topobounds.guts_bound_tiers(data)
            rows.append(("guts_norm_tier", norm_tier))
            rows.append(("guts_chi_tier", chi_tier))
            rows.append(("guts_lower_bound", topobounds.guts_lower_bound(data)))
        else:
            rows.append(("miyamoto_lower_bound", topobounds.miyamoto_lower_bound(args.chi)))
    if args.twist is not None:
        lower, upper = topobounds.alternating_volume_window(
            topobounds.AlternatingDiagram(args.twist)
        )
        rows.append(("alternating_lower", lower))
        rows.append(("alternating_upper", upper))
    if args.double_norm is not None:
        rows.append(("haken_double_bound", topobounds.haken_double_bound(args.double_norm)))
    if args.min_scan is not None:
        v_cusped, radius, l_max = args.min_scan
        rows.append(
            ("min_volume_scan", topobounds.min_volume_scan(v_cusped, radius, l_max, args.steps))
        )
    if not rows:
        print("error: supply at least one invariant (see --help)", file=sys.stderr)
        return 1
    width = max(len(name) for name, _ in rows)
    for name, value in rows:
        print(f"{name:<{width}}  {_fmt(value)}")
    return 0


# ---------------------------------------------------------------------------
# Parser


def _build_parser() -> tuple[argparse.ArgumentParser, list[argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="tubevol",
        description="Volume bounds for drilling and filling geodesics in "
        "hyperbolic 3-manifolds",
    )
    parser.add_argument("--config", help="key=value file supplying defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="closed-form bounds for one record")
    est.add_argument("v_fill", type=float)
    est.add_argument("length", type=float)
    est.add_argument("radius", type=float)
    est.add_argument("--factor", choices=["perelman", "old", "both"], default="both")
    est.add_argument("--csv", action="store_true", help="machine-readable output")
    est.set_defaults(handler=_cmd_estimate)

    ver = sub.add_parser("verify", help="validate a dataset against every bound")
    ver.add_argument("dataset")
    ver.add_argument("--report", help="report CSV path (default: <dataset>.report.csv)")
    ver.add_argument("--bins", type=int, default=40)
    ver.add_argument(
        "--tol",
        type=float,
        default=0.0,
        help="relative slack for the inequality verdicts (default 0: exact)",
    )
    ver.set_defaults(handler=_cmd_verify)

    fig = sub.add_parser("figures", help="emit figure series CSVs and SVGs")
    fig.add_argument("dataset")
    fig.add_argument("out_dir")
    fig.add_argument("--bins", type=int, default=40)
    fig.add_argument("--r-min", type=float, default=0.05)
    fig.add_argument("--r-max", type=float, default=3.0)
    fig.add_argument("--curve-points", type=int, default=512)
    fig.set_defaults(handler=_cmd_figures)

    tr = sub.add_parser("tube-radius", help="search a presentation for close lifts")
    tr.add_argument("presentation")
    tr.add_argument("--max-word-length", type=int, default=3)
    tr.set_defaults(handler=_cmd_tube_radius)

    sur = sub.add_parser("surgery", help="cone-profile volume predictors")
    sur.add_argument("profile")
    sur.add_argument("--radius", type=float, help="tube radius for the regime check")
    sur.set_defaults(handler=_cmd_surgery)

    syn = sub.add_parser("synthesize", help="generate a synthetic dataset")
    syn.add_argument("count", type=int)
    syn.add_argument("seed", type=int)
    syn.add_argument("out")
    syn.add_argument("--noise-sigma", type=float, default=0.017)
    syn.set_defaults(handler=_cmd_synthesize)

    bnd = sub.add_parser("bounds", help="volume bounds from topological invariants")
    bnd.add_argument("--chi", type=int, help="Euler characteristic of guts (<= 0)")
    bnd.add_argument(
        "--gromov-norm", type=float, help="Gromov norm of the doubled cut-open manifold"
    )
    bnd.add_argument("--twist", type=int, help="twist number of an alternating diagram")
    bnd.add_argument(
        "--double-norm", type=float, help="doubled Gromov norm for the minimal-surface bound"
    )
    bnd.add_argument(
        "--min-scan",
        type=float,
        nargs=3,
        metavar=("V_CUSPED", "RADIUS", "L_MAX"),
        help="scan the filled-volume bound over lengths up to L_MAX",
    )
    bnd.add_argument("--steps", type=int, default=1000)
    bnd.set_defaults(handler=_cmd_bounds)
    return parser, [est, ver, fig, tr, sur, syn, bnd]


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subparsers = _build_parser()
    try:
        if "--config" in argv:
            config_path = argv[argv.index("--config") + 1]
            values = _config_values(config_path)
            # replace the matching defaults everywhere; explicit flags
            # still win over defaults
            for p in [parser, *subparsers]:
                p.set_defaults(**values)
        args = parser.parse_args(argv)
        return args.handler(args)
    except (ParseError, IngestError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
