"""Dataset pipeline: ingest drill records, evaluate every bound on each,
aggregate statistics, and emit the data series behind the standard figures.

A drill record is one (manifold, geodesic) pair: the filled and drilled
volumes plus the geodesic's length and tube radius.  Real census exports
use the CSV format documented at ``ingest``; a deterministic synthetic
generator is provided for testing and calibration.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, IngestError
from . import hypkernel
from .hypkernel import Factor, TubeData, VolumePair
from . import surgery

__all__ = [
    "BoundReport",
    "Curve",
    "DatasetStats",
    "DrillRecord",
    "FigureSeries",
    "REPORT_COLUMNS",
    "evaluate",
    "figure_series",
    "ingest",
    "statistics",
    "synthesize",
    "write_dataset",
    "write_report_csv",
]

_CSV_HEADER = "name,v_fill,v_drill,length,radius"


@dataclass(frozen=True)
class DrillRecord:
    """One census data point: a named (manifold, geodesic) pair."""

    name: str
    pair: VolumePair
    tube: TubeData

    def __post_init__(self):
        if not self.name:
            raise DomainError("DrillRecord: name must be nonempty")


@dataclass(frozen=True)
class BoundReport:
    """Every bound, ratio, and verdict evaluated on one drill record."""

    name: str
    v_fill: float
    v_drill: float
    length: float
    radius: float
    b: float
    c_o: float
    c_p: float
    v_est_old: float
    v_est_perelman: float
    overshoot_old: float
    overshoot_perelman: float
    delta_v: float
    dv_over_pi_l: float
    b_over_vdrill: float
    perelman_ok: bool
    old_ok: bool
    bridgeman_ok: bool
    b_le_vdrill: bool
    hk_regime: bool


# column order of the report CSV (a subset of the BoundReport fields)
REPORT_COLUMNS = (
    "name",
    "b",
    "c_o",
    "c_p",
    "v_est_old",
    "v_est_perelman",
    "overshoot_old",
    "overshoot_perelman",
    "delta_v",
    "dv_over_pi_l",
    "b_over_vdrill",
    "perelman_ok",
    "old_ok",
    "bridgeman_ok",
    "b_le_vdrill",
    "hk_regime",
)

VIOLATION_KEYS = ("perelman", "old", "bridgeman", "b_le_vdrill")

_FLAG_FOR_KEY = {
    "perelman": "perelman_ok",
    "old": "old_ok",
    "bridgeman": "bridgeman_ok",
    "b_le_vdrill": "b_le_vdrill",
}


@dataclass(frozen=True)
class DatasetStats:
    """Aggregate statistics over a list of bound reports."""

    count: int
    mean_ratio: float
    std_ratio: float
    hist_edges: tuple[float, ...]
    hist_counts: tuple[int, ...]
    violations: dict[str, int]
    length_range: tuple[float, float]
    radius_range: tuple[float, float]


# ---------------------------------------------------------------------------
# Ingest


def ingest(path) -> list[DrillRecord]:
    """Read drill records from a CSV file.

    Format: UTF-8, header ``name,v_fill,v_drill,length,radius``, one record
    per line, '#' lines ignored.  Raises IngestError carrying row-numbered
    diagnostics if any row fails validation (non-numeric fields, duplicate
    or empty names, nonpositive length/radius, or v_drill <= v_fill, which
    breaks the strict drilling inequality).
    """
    records: list[DrillRecord] = []
    diagnostics: list[str] = []
    seen_names: set[str] = set()
    header_seen = False
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if not header_seen:
                if line != _CSV_HEADER:
                    raise IngestError(
                        [f"line {lineno}: expected header {_CSV_HEADER!r}, got {line!r}"]
                    )
                header_seen = True
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 5:
                diagnostics.append(f"line {lineno}: expected 5 fields, got {len(parts)}")
                continue
            name = parts[0]
            try:
                v_fill, v_drill, length, radius = (float(p) for p in parts[1:])
            except ValueError:
                diagnostics.append(f"line {lineno}: non-numeric field in {line!r}")
                continue
            if not name:
                diagnostics.append(f"line {lineno}: empty name")
                continue
            if name in seen_names:
                diagnostics.append(f"line {lineno}: duplicate name {name!r}")
                continue
            row_problems = []
            if not (math.isfinite(v_fill) and v_fill > 0.0):
                row_problems.append(f"v_fill ({parts[1]}) must be positive")
            if not (math.isfinite(length) and length > 0.0):
                row_problems.append(f"length ({parts[3]}) must be positive")
            if not (math.isfinite(radius) and radius > 0.0):
                row_problems.append(f"radius ({parts[4]}) must be positive")
            if not row_problems and not (math.isfinite(v_drill) and v_drill > v_fill):
                row_problems.append(
                    f"v_drill ({parts[2]}) must strictly exceed v_fill ({parts[1]}): "
                    "drilling strictly increases volume"
                )
            if row_problems:
                diagnostics.append(f"line {lineno}: " + "; ".join(row_problems))
                continue
            seen_names.add(name)
            records.append(
                DrillRecord(name, VolumePair(v_fill, v_drill), TubeData(length, radius))
            )
    if not header_seen:
        raise IngestError(["file has no header line"])
    if diagnostics:
        raise IngestError(diagnostics)
    return records


def write_dataset(records, path) -> None:
    """Write records in the ingest CSV format.

    Floats are written with repr, so a written file re-ingests to
    bit-identical values.
    """
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(_CSV_HEADER + "\n")
        for rec in records:
            handle.write(
                f"{rec.name},{rec.pair.v_fill!r},{rec.pair.v_drill!r},"
                f"{rec.tube.length!r},{rec.tube.radius!r}\n"
            )


# ---------------------------------------------------------------------------
# Evaluation


def _evaluate_one(rec: DrillRecord, tol: float) -> BoundReport:
    pair, tube = rec.pair, rec.tube
    b = hypkernel.bound_base_B(pair.v_fill, tube)
    c_o = hypkernel.factor_co(tube.radius)
    c_p = hypkernel.factor_cp(tube.radius)
    v_est_old = c_o * b
    v_est_perelman = c_p * b
    delta_v = pair.v_drill - pair.v_fill
    pi_l = math.pi * tube.length
    return BoundReport(
        name=rec.name,
        v_fill=pair.v_fill,
        v_drill=pair.v_drill,
        length=tube.length,
        radius=tube.radius,
        b=b,
        c_o=c_o,
        c_p=c_p,
        v_est_old=v_est_old,
        v_est_perelman=v_est_perelman,
        overshoot_old=(v_est_old - pair.v_drill) / delta_v,
        overshoot_perelman=(v_est_perelman - pair.v_drill) / delta_v,
        delta_v=delta_v,
        dv_over_pi_l=delta_v / pi_l,
        b_over_vdrill=b / pair.v_drill,
        perelman_ok=pair.v_drill <= v_est_perelman * (1.0 + tol),
        old_ok=pair.v_drill <= v_est_old * (1.0 + tol),
        bridgeman_ok=delta_v <= pi_l * (1.0 + tol),
        b_le_vdrill=b <= pair.v_drill * (1.0 + tol),
        hk_regime=surgery.hodgson_kerckhoff_regime(tube.length, tube.radius),
    )


def _resolve_threads(threads: int | None) -> int:
    if threads is None:
        raw = os.environ.get("TUBEVOL_THREADS", "0")
        try:
            threads = int(raw)
        except ValueError:
            raise DomainError(f"TUBEVOL_THREADS must be an integer, got {raw!r}")
    if threads < 0:
        raise DomainError("thread count must be >= 0")
    return threads if threads > 0 else 1  # 0 = auto; serial is optimal here


def evaluate(records, threads: int | None = None, tol: float = 0.0) -> list[BoundReport]:
    """Evaluate every bound on each record, preserving order.

    ``threads`` caps worker parallelism (None reads TUBEVOL_THREADS, 0 means
    auto).  Evaluation is pure per record, so any split gives identical
    results.  ``tol`` is a relative slack applied to the inequality
    verdicts, for data whose volumes were computed at limited precision;
    the default demands the bounds exactly.
    """
    if not (math.isfinite(tol) and tol >= 0.0):
        raise DomainError("evaluate: tol must be >= 0")
    records = list(records)
    workers = _resolve_threads(threads)
    if workers <= 1 or len(records) < 2 * workers:
        return [_evaluate_one(rec, tol) for rec in records]
    chunk = (len(records) + workers - 1) // workers
    pieces = [records[i : i + chunk] for i in range(0, len(records), chunk)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(lambda rs: [_evaluate_one(r, tol) for r in rs], pieces)
    out: list[BoundReport] = []
    for part in parts:
        out.extend(part)
    return out


def statistics(reports, bins: int = 40) -> DatasetStats:
    """Sample mean and standard deviation (n-1 denominator) of the ratio
    delta_v / (pi L), its histogram over the observed range, violation
    tallies per inequality, and the (L, R) ranges seen."""
    reports = list(reports)
    if not reports:
        raise ValueError("statistics: empty report list")
    if bins < 1:
        raise DomainError("statistics: bins must be >= 1")
    ratios = np.array([r.dv_over_pi_l for r in reports])
    counts, edges = np.histogram(ratios, bins=bins)
    violations = {
        key: sum(1 for r in reports if not getattr(r, _FLAG_FOR_KEY[key]))
        for key in VIOLATION_KEYS
    }
    lengths = [r.length for r in reports]
    radii = [r.radius for r in reports]
    return DatasetStats(
        count=len(reports),
        mean_ratio=float(np.mean(ratios)),
        std_ratio=float(np.std(ratios, ddof=1)) if len(reports) > 1 else 0.0,
        hist_edges=tuple(edges.tolist()),
        hist_counts=tuple(int(c) for c in counts),
        violations=violations,
        length_range=(min(lengths), max(lengths)),
        radius_range=(min(radii), max(radii)),
    )


def write_report_csv(reports, path) -> None:
    """Write one row per record with the standard report columns; floats at
    12 significant digits, booleans as true/false."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(",".join(REPORT_COLUMNS) + "\n")
        for report in reports:
            cells = []
            for col in REPORT_COLUMNS:
                value = getattr(report, col)
                if isinstance(value, bool):
                    cells.append("true" if value else "false")
                elif isinstance(value, float):
                    cells.append(f"{value:.12g}")
                else:
                    cells.append(str(value))
            handle.write(",".join(cells) + "\n")


# ---------------------------------------------------------------------------
# Figure series


@dataclass(frozen=True)
class Curve:
    label: str
    x: tuple[float, ...]
    y: tuple[float, ...]


@dataclass
class FigureSeries:
    """Data behind one figure: labeled scatter points, overlay curves, and
    an optional marginal histogram of the y values.  ``extra_columns`` are
    additional per-point columns carried into the CSV."""

    name: str
    xlabel: str
    ylabel: str
    scatter_labels: list[str]
    scatter_x: list[float]
    scatter_y: list[float]
    curves: list[Curve]
    extra_columns: dict[str, list[float]]
    hist_edges: list[float] | None = None
    hist_counts: list[int] | None = None


def figure_series(
    reports,
    r_range: tuple[float, float] = (0.05, 3.0),
    curve_points: int = 512,
    bins: int = 40,
) -> dict[str, FigureSeries]:
    """Build the five standard figure series from evaluated reports.

    * fig_ratio_curve: the ratio of the two estimate factors against R.
    * fig_overshoot / fig_overshoot_zoom: estimate overshoot against R
      (the zoom restricts to R >= 0.6).
    * fig_b_over_vdrill: B / v_drill scatter with the reciprocal factor
      curves overlaid; bound-satisfying points lie on or above 1/C_P.
    * fig_dv_over_pil: delta_v / (pi L) against L with marginal histogram.
    """
    reports = list(reports)
    if not reports:
        raise ValueError("figure_series: empty report list")
    lo, hi = r_range
    if not (0.0 < lo < hi and math.isfinite(hi)):
        raise DomainError("figure_series: bad r_range")
    if curve_points < 2:
        raise DomainError("figure_series: curve_points must be >= 2")
    r_grid = np.linspace(lo, hi, curve_points)
    co = np.array([hypkernel.factor_co(r) for r in r_grid])
    cp = np.array([hypkernel.factor_cp(r) for r in r_grid])
    grid = tuple(r_grid.tolist())

    names = [r.name for r in reports]
    radii = [r.radius for r in reports]

    out: dict[str, FigureSeries] = {}
    out["fig_ratio_curve"] = FigureSeries(
        name="fig_ratio_curve",
        xlabel="tube radius R",
        ylabel="C_O / C_P",
        scatter_labels=[],
        scatter_x=[],
        scatter_y=[],
        curves=[Curve("co_over_cp", grid, tuple((co / cp).tolist()))],
        extra_columns={},
    )
    overshoot = FigureSeries(
        name="fig_overshoot",
        xlabel="tube radius R",
        ylabel="(V_est - V_drill) / (V_drill - V_fill)",
        scatter_labels=list(names),
        scatter_x=list(radii),
        scatter_y=[r.overshoot_perelman for r in reports],
        curves=[],
        extra_columns={"overshoot_old": [r.overshoot_old for r in reports]},
    )
    out["fig_overshoot"] = overshoot
    zoom_idx = [i for i, r in enumerate(reports) if r.radius >= 0.6]
    out["fig_overshoot_zoom"] = FigureSeries(
        name="fig_overshoot_zoom",
        xlabel="tube radius R",
        ylabel=overshoot.ylabel,
        scatter_labels=[names[i] for i in zoom_idx],
        scatter_x=[radii[i] for i in zoom_idx],
        scatter_y=[overshoot.scatter_y[i] for i in zoom_idx],
        curves=[],
        extra_columns={
            "overshoot_old": [overshoot.extra_columns["overshoot_old"][i] for i in zoom_idx]
        },
    )
    out["fig_b_over_vdrill"] = FigureSeries(
        name="fig_b_over_vdrill",
        xlabel="tube radius R",
        ylabel="B / V_drill",
        scatter_labels=list(names),
        scatter_x=list(radii),
        scatter_y=[r.b_over_vdrill for r in reports],
        curves=[
            Curve("inv_c_p", grid, tuple((1.0 / cp).tolist())),
            Curve("inv_c_o", grid, tuple((1.0 / co).tolist())),
        ],
        extra_columns={},
    )
    ratios = [r.dv_over_pi_l for r in reports]
    counts, edges = np.histogram(np.array(ratios), bins=bins)
    out["fig_dv_over_pil"] = FigureSeries(
        name="fig_dv_over_pil",
        xlabel="geodesic length L",
        ylabel="delta_V / (pi L)",
        scatter_labels=list(names),
        scatter_x=[r.length for r in reports],
        scatter_y=ratios,
        curves=[],
        extra_columns={},
        hist_edges=list(edges.tolist()),
        hist_counts=[int(c) for c in counts],
    )
    return out


# ---------------------------------------------------------------------------
# Synthetic data


def synthesize(
    n: int,
    seed: int,
    noise_sigma: float = 0.017,
    l_range: tuple[float, float] = (0.3, 2.5),
    r_range: tuple[float, float] = (0.4, 1.6),
) -> list[DrillRecord]:
    """Deterministically generate ``n`` drill records.

    Lengths and radii are uniform over their ranges and filled volumes
    uniform over [0.94, 6], rejecting geometry where the embedded tube
    could not fit (tube volume exceeding the filled volume).  The volume
    increase is pi*L*(1/2 + eps) with eps a 3-sigma-clipped normal; any
    candidate violating the sharp drilled-volume bound is resampled, so the
    output always verifies cleanly (violations are rare once the tube fits:
    for noise_sigma <= 0.02 virtually every draw passes).
    """
    if n < 1:
        raise DomainError("synthesize: n must be >= 1")
    if not (math.isfinite(noise_sigma) and noise_sigma >= 0.0):
        raise DomainError("synthesize: noise_sigma must be >= 0")
    for label, (lo, hi) in (("l_range", l_range), ("r_range", r_range)):
        if not (0.0 < lo < hi and math.isfinite(hi)):
            raise DomainError(f"synthesize: degenerate {label}")

    rng = np.random.default_rng(seed)
    records: list[DrillRecord] = []
    index = 0
    while len(records) < n:
        m = max(2 * (n - len(records)), 1024)
        length = rng.uniform(l_range[0], l_range[1], m)
        radius = rng.uniform(r_range[0], r_range[1], m)
        v_fill = rng.uniform(0.94, 6.0, m)
        if noise_sigma > 0.0:
            eps = np.clip(
                rng.normal(0.0, noise_sigma, m), -3.0 * noise_sigma, 3.0 * noise_sigma
            )
        else:
            eps = np.zeros(m)
        fits = np.pi * length * np.sinh(radius) ** 2 <= v_fill
        v_drill = v_fill + np.pi * length * (0.5 + eps)
        for i in np.flatnonzero(fits):
            tube = TubeData(float(length[i]), float(radius[i]))
            vf, vd = float(v_fill[i]), float(v_drill[i])
            # authoritative check through the same scalar kernel the
            # verification pipeline uses, so accepted records never flip
            if vd > hypkernel.drilled_volume_bound(vf, tube, Factor.PERELMAN):
                continue
            records.append(DrillRecord(f"synth{index:05d}", VolumePair(vf, vd), tube))
            index += 1
            if len(records) == n:
                break
    return records
