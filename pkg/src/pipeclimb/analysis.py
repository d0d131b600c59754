"""Validation against theoretical and reference speeds, and report rendering."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import ConfigError, UndefinedAPEError
from .kinematics import TrackSpeeds, bend_track_speeds, linear_track_speed


@dataclass(frozen=True)
class BendGeometry:
    R: float
    r: float


@dataclass(frozen=True)
class SpeedComparison:
    label: str
    mu: float
    theoretical: TrackSpeeds
    observed: TrackSpeeds
    per_track_ape: tuple[float, float, float]
    reported_ape: float | None = None

    @property
    def mean_ape(self) -> float:
        return math.fsum(self.per_track_ape) / 3

    @property
    def max_ape(self) -> float:
        return max(self.per_track_ape)


@dataclass(frozen=True)
class PaperReference:
    label: str
    mu: float
    observed: TrackSpeeds
    reported_ape: float | None
    tolerance: float
    gated: bool
    kind: str  # "straight" or "bend"


@dataclass(frozen=True)
class ReferenceSet:
    geometry: BendGeometry
    bend_speed: float
    straight_speed: float
    entries: tuple[PaperReference, ...]


def ape(theoretical: float, observed: float) -> float:
    """Absolute percentage error of ``observed`` against ``theoretical``."""
    if theoretical == 0:
        raise UndefinedAPEError("APE is undefined for a zero theoretical value")
    return 100 * abs(observed - theoretical) / abs(theoretical)


def compare_speeds(label: str, mu: float, theoretical, observed, reported_ape=None) -> SpeedComparison:
    theoretical = theoretical if isinstance(theoretical, TrackSpeeds) else TrackSpeeds(*theoretical)
    observed = observed if isinstance(observed, TrackSpeeds) else TrackSpeeds(*observed)
    per_track = tuple(ape(t, o) for t, o in zip(theoretical, observed))
    return SpeedComparison(label, mu, theoretical, observed, per_track, reported_ape)


def compare_orientation(mu: float, geometry, v: float, observed, label: str | None = None, reported_ape=None) -> SpeedComparison:
    """Compare observed bend track speeds with the no-slip speeds at ``mu``.

    ``geometry`` is a :class:`BendGeometry` or an ``(R, r)`` pair.
    """
    R, r = (geometry.R, geometry.r) if isinstance(geometry, BendGeometry) else geometry
    theoretical = bend_track_speeds(v, R, r, mu)
    return compare_speeds(label or f"bend mu={mu:g}", mu, theoretical, observed, reported_ape)


def load_reference(path=None) -> ReferenceSet:
    """Load the reference speed dataset (the bundled one by default)."""
    try:
        if path is None:
            text = resources.files("pipeclimb.data").joinpath("paper_reference.json").read_text()
            source = "paper_reference.json"
        else:
            text = Path(path).read_text()
            source = str(path)
    except OSError as exc:
        raise ConfigError(f"cannot read reference data: {exc}") from exc
    try:
        raw = json.loads(text)
        geo = raw["geometry"]
        drive = raw["drive"]
        geometry = BendGeometry(float(geo["bend_radius_R_mm"]), float(geo["pipe_radius_r_mm"]))
        straight_speed = linear_track_speed(
            float(drive["gear_j"]) * float(drive["input_rpm"]) / float(drive["gear_k"]),
            float(drive["sprocket_mm"]),
        )
        entries = []
        for kind, key in (("straight", "straight"), ("bend", "bends")):
            for item in raw[key]:
                observed = [float(x) for x in item["observed_mm_s"]]
                if len(observed) != 3:
                    raise ValueError(f"{item['label']}: expected three observed speeds")
                entries.append(PaperReference(
                    label=str(item["label"]),
                    mu=float(item["mu_deg"]),
                    observed=TrackSpeeds(*observed),
                    reported_ape=float(item["reported_ape_pct"]) if "reported_ape_pct" in item else None,
                    tolerance=float(item.get("tolerance_pct", item.get("ape_bound_pct", 0.0))),
                    gated=bool(item.get("gated", True)),
                    kind=kind,
                ))
        return ReferenceSet(geometry, float(geo["bend_speed_mm_s"]), straight_speed, tuple(entries))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed reference data: {exc}", path=source) from exc


@dataclass(frozen=True)
class ValidationRow:
    comparison: SpeedComparison
    reference: PaperReference
    passed: bool | None  # None when the row is informational only


def validate_reference(ref: ReferenceSet | None = None) -> list[ValidationRow]:
    """Straight rows pass under the APE bound; bend rows must reproduce the reported APE."""
    ref = ref or load_reference()
    rows = []
    for entry in ref.entries:
        if entry.kind == "straight":
            cmp = compare_speeds(entry.label, entry.mu, TrackSpeeds.uniform(ref.straight_speed), entry.observed)
            passed = cmp.max_ape < entry.tolerance
        else:
            cmp = compare_orientation(entry.mu, ref.geometry, ref.bend_speed, entry.observed,
                                      label=entry.label, reported_ape=entry.reported_ape)
            passed = abs(cmp.max_ape - entry.reported_ape) <= entry.tolerance + 1e-12
        rows.append(ValidationRow(cmp, entry, passed if entry.gated else None))
    return rows


def _fmt(x, width=9, digits=2) -> str:
    if x is None:
        return "-".rjust(width)
    return f"{x:{width}.{digits}f}"


def format_comparisons(comparisons) -> str:
    width = max([16, *(len(c.label) + 2 for c in comparisons)])
    head = (f"{'case':<{width}}{'thA':>9}{'thB':>9}{'thC':>9}{'obsA':>9}{'obsB':>9}{'obsC':>9}"
            f"{'apeA%':>9}{'apeB%':>9}{'apeC%':>9}{'mean%':>9}{'max%':>9}{'ref%':>9}")
    lines = [head, "-" * len(head)]
    for c in comparisons:
        lines.append(
            f"{c.label:<{width}}"
            + "".join(_fmt(x) for x in c.theoretical)
            + "".join(_fmt(x) for x in c.observed)
            + "".join(_fmt(x) for x in c.per_track_ape)
            + _fmt(c.mean_ape) + _fmt(c.max_ape) + _fmt(c.reported_ape)
        )
    return "\n".join(lines)


def format_reports(reports) -> str:
    width = max([16, *(len(r.name) + 2 for r in reports)])
    head = (f"{'scenario':<{width}}{'mode':>8}{'mu':>7}{'time_s':>10}{'dist_mm':>10}"
            f"{'vA':>9}{'vB':>9}{'vC':>9}{'maxslip':>9}")
    lines = [head, "-" * len(head)]
    for r in reports:
        s = r.summary
        lines.append(
            f"{r.name:<{width}}{r.mode.value:>8}{r.mu:>7.1f}{s['total_time_s']:>10.2f}{s['distance_mm']:>10.2f}"
            + "".join(_fmt(v) for v in s["mean_speeds_mm_s"])
            + _fmt(s["max_abs_slip_mm_s"])
        )
    return "\n".join(lines)


def format_segments(report) -> str:
    lines = [f"segments for {report.name}:"]
    for seg in report.segments:
        ms = seg.mean_speeds
        lines.append(
            f"  [{seg.index}] {seg.kind:<8} {seg.entry_t:8.2f} -> {seg.exit_t:8.2f} s"
            f" {seg.distance:9.2f} mm  v=({ms.v_tA:.2f}, {ms.v_tB:.2f}, {ms.v_tC:.2f})"
        )
    return "\n".join(lines)


def summary_csv(reports, comparisons) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["kind", "name", "mode", "mu_deg", "total_time_s", "distance_mm",
                "vA_mm_s", "vB_mm_s", "vC_mm_s", "max_abs_slip_mm_s",
                "thA_mm_s", "thB_mm_s", "thC_mm_s", "apeA_pct", "apeB_pct", "apeC_pct",
                "mean_ape_pct", "max_ape_pct", "reported_ape_pct"])
    f = "{:.4f}".format
    for r in reports:
        s = r.summary
        w.writerow(["run", r.name, r.mode.value, f(r.mu), f(s["total_time_s"]), f(s["distance_mm"]),
                    *(f(v) for v in s["mean_speeds_mm_s"]), f(s["max_abs_slip_mm_s"]),
                    "", "", "", "", "", "", "", "", ""])
    for c in comparisons:
        w.writerow(["comparison", c.label, "", f(c.mu), "", "",
                    *(f(v) for v in c.observed), "",
                    *(f(v) for v in c.theoretical), *(f(a) for a in c.per_track_ape),
                    f(c.mean_ape), f(c.max_ape), "" if c.reported_ape is None else f(c.reported_ape)])
    return buf.getvalue()


def plot_speeds(report, path) -> Path:
    """Write a speed-versus-time SVG for one traversal report."""
    import matplotlib
    from matplotlib.backends.backend_svg import FigureCanvasSVG
    from matplotlib.figure import Figure

    path = Path(path)
    with matplotlib.rc_context({"svg.hashsalt": "pipeclimb", "svg.fonttype": "none"}):
        fig = Figure(figsize=(8, 4.5))
        FigureCanvasSVG(fig)
        ax = fig.add_subplot()
        t = report.column("t_s")
        for key, label in (("vA_mm_s", "track A"), ("vB_mm_s", "track B"), ("vC_mm_s", "track C")):
            ax.step(t, report.column(key), where="pre", label=label)
        ax.set_xlabel("time [s]")
        ax.set_ylabel("track speed [mm/s]")
        ax.set_title(f"{report.name} ({report.mode.value}, mu={report.mu:g} deg)")
        ax.grid(True, alpha=0.3)
        ax.legend(loc="best")
        fig.savefig(path, format="svg", metadata={"Date": None})
    return path


def render_report(reports, comparisons, out_dir=None, plots: bool = True) -> str:
    """Build the summary table; when ``out_dir`` is given also write files.

    Files written: ``summary.txt``, ``summary.csv`` and, with ``plots``,
    ``<scenario>_speeds.svg`` per report. Output depends only on the inputs.
    """
    reports = list(reports)
    comparisons = list(comparisons)
    if not reports and not comparisons:
        raise ValueError("nothing to report: no runs and no comparisons")
    parts = []
    if reports:
        parts.append(format_reports(reports))
        parts.extend(format_segments(r) for r in reports if r.segments)
    if comparisons:
        parts.append(format_comparisons(comparisons))
    text = "\n\n".join(parts) + "\n"

    if out_dir is not None:
        out = Path(out_dir)
        try:
            out.mkdir(parents=True, exist_ok=True)
            (out / "summary.txt").write_text(text)
            (out / "summary.csv").write_text(summary_csv(reports, comparisons))
            if plots:
                for r in reports:
                    plot_speeds(r, out / f"{r.name}_speeds.svg")
        except OSError as exc:
            raise OSError(f"cannot write report to {out}: {exc}") from exc
    return text


def bend_segment_comparisons(report, network) -> list[SpeedComparison]:
    """Mean track speed in each bend the run visited versus the no-slip speeds."""
    out = []
    for seg in report.segments:
        segment = network.segments[seg.index]
        if not segment.is_bend or seg.duration <= 0:
            continue
        label = f"{report.name}[{seg.index}]"
        out.append(compare_orientation(
            report.mu, (segment.bend_radius_R, network.spec.inner_radius_r), report.speed,
            seg.mean_speeds, label=label,
        ))
    return out
