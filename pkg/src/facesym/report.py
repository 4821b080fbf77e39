"""Dataset-level evaluation and rendering of measure/metric tables."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from facesym.dataset_io import Dataset
from facesym.landmarks import LandmarkSet
from facesym.measures import (
    ANGLE_MEASURES,
    MEASURE_FUNCTIONS,
    MEASURE_NAMES,
    DegenerateMeasureError,
    compute_all,
)
from facesym.metrics import DEFAULT_BANDS, MeasureSeries, MetricBundle, RhoBands, evaluate_series

UNDEFINED = "undefined"


def adjust(name: str, value: float, relative: bool = False, absolute: bool = False) -> float:
    """Apply the display options: ``relative`` reports ga as deviation from 90,
    ``absolute`` drops the sign of every angle."""
    if relative and name == "ga":
        value -= 90.0
    if absolute and name in ANGLE_MEASURES:
        value = abs(value)
    return value


@dataclass
class ScatterSeries:
    measure_name: str
    points: list[tuple[float, float, str]] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)

    @property
    def gt(self) -> list[float]:
        return [p[0] for p in self.points]

    @property
    def pred(self) -> list[float]:
        return [p[1] for p in self.points]


def scatter_series(dataset: Dataset, measure_name: str, relative: bool = False,
                   absolute: bool = False) -> ScatterSeries:
    """Measure one quantity on every pair; pairs where it degenerates are noted
    and left out."""
    fn = MEASURE_FUNCTIONS[measure_name]
    series = ScatterSeries(measure_name)
    for pair in dataset:
        try:
            g = fn(pair.gt)
            p = fn(pair.pred)
        except DegenerateMeasureError as exc:
            series.errors.append(str(exc))
            continue
        series.points.append((adjust(measure_name, g, relative, absolute),
                              adjust(measure_name, p, relative, absolute), pair.image_id))
    return series


@dataclass
class EvalReport:
    metrics: dict[str, Optional[MetricBundle]]
    notes: dict[str, list[str]]
    n_pairs: int
    manifest: str = ""
    skipped: list[str] = field(default_factory=list)
    bands: RhoBands = DEFAULT_BANDS
    ga_relative: bool = False
    abs_angles: bool = False

    def to_dict(self) -> dict:
        measures = {}
        for name in MEASURE_NAMES:
            b = self.metrics.get(name)
            entry: dict = {"notes": list(self.notes.get(name, []))}
            if b is None:
                entry["error"] = "; ".join(self.notes.get(name, [])) or "not evaluated"
            else:
                entry.update(
                    n=b.n,
                    spearman_rho=b.spearman_rho,
                    rho_defined=b.rho_defined,
                    rho_band=b.rho_band,
                    bca=b.bca,
                    mae=b.mae,
                    rmse=b.rmse,
                )
            measures[name] = entry
        return {
            "dataset": {
                "manifest": self.manifest,
                "n_pairs": self.n_pairs,
                "skipped": list(self.skipped),
            },
            "options": {"ga_relative": self.ga_relative, "abs_angles": self.abs_angles},
            "bands": {"edges": list(self.bands.edges), "labels": list(self.bands.labels)},
            "measures": measures,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def evaluate_dataset(dataset: Dataset, bands: RhoBands = DEFAULT_BANDS, relative: bool = False,
                     absolute: bool = False, manifest: str = "") -> tuple[EvalReport, dict[str, ScatterSeries]]:
    if len(dataset) < 2:
        raise ValueError(f"evaluation needs at least 2 valid pairs, got {len(dataset)}")
    metrics: dict[str, Optional[MetricBundle]] = {}
    notes: dict[str, list[str]] = {}
    all_series = {}
    for name in MEASURE_NAMES:
        series = scatter_series(dataset, name, relative, absolute)
        all_series[name] = series
        notes[name] = list(series.errors)
        if len(series.points) < 2:
            notes[name].append(f"only {len(series.points)} measurable pair(s)")
            metrics[name] = None
            continue
        metrics[name] = evaluate_series(MeasureSeries(name, series.gt, series.pred), bands)
    report = EvalReport(
        metrics=metrics,
        notes=notes,
        n_pairs=len(dataset),
        manifest=manifest,
        skipped=[exc.image_id for exc in dataset.skipped],
        bands=bands,
        ga_relative=relative,
        abs_angles=absolute,
    )
    return report, all_series


def _fmt(value: Optional[float], precision: int) -> str:
    return UNDEFINED if value is None else f"{value:.{precision}f}"


def _align(rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = []
    for r in rows:
        cells = [r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


_EVAL_HEADER = ("measure", "rho", "band", "bca", "mae", "rmse", "n")


def _eval_rows(report: EvalReport, precision: int) -> list[list[str]]:
    rows = []
    for name in MEASURE_NAMES:
        b = report.metrics.get(name)
        if b is None:
            rows.append([name, "error", "", "", "", "", "0"])
            continue
        rows.append([name, _fmt(b.spearman_rho, precision), b.rho_band, _fmt(b.bca, precision),
                     _fmt(b.mae, precision), _fmt(b.rmse, precision), str(b.n)])
    return rows


def render_eval_text(report: EvalReport, precision: int = 2) -> str:
    out = _align([list(_EVAL_HEADER)] + _eval_rows(report, precision))
    for name in MEASURE_NAMES:
        for note in report.notes.get(name, []):
            out += f"note [{name}]: {note}\n"
    if report.skipped:
        out += "skipped: " + ", ".join(report.skipped) + "\n"
    return out


def render_eval_csv(report: EvalReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(_EVAL_HEADER)
    for name in MEASURE_NAMES:
        b = report.metrics.get(name)
        if b is None:
            w.writerow([name, "", "error", "", "", "", 0])
        else:
            w.writerow([name, "" if b.spearman_rho is None else repr(b.spearman_rho), b.rho_band,
                        repr(b.bca), repr(b.mae), repr(b.rmse), b.n])
    return buf.getvalue()


MeasureRow = tuple[str, Optional[dict[str, float]], Optional[str]]


def measure_rows(sets: Iterable[LandmarkSet], relative: bool = False, absolute: bool = False) -> list[MeasureRow]:
    """Six measures per set as ``(image_id, values, error)``; exactly one of
    ``values`` and ``error`` is set."""
    rows = []
    for ls in sets:
        try:
            m = compute_all(ls).as_dict()
        except (DegenerateMeasureError, ValueError) as exc:
            rows.append((ls.image_id, None, str(exc)))
            continue
        rows.append((ls.image_id, {k: adjust(k, v, relative, absolute) for k, v in m.items()}, None))
    return rows


def render_measures(rows: Sequence[MeasureRow], fmt: str = "text", precision: int = 4) -> str:
    good = [(i, v) for i, v, e in rows if v is not None]
    if fmt == "json":
        doc = [{"image_id": i, **v} for i, v in good]
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("image_id",) + MEASURE_NAMES)
        for i, v in good:
            w.writerow([i] + [repr(v[k]) for k in MEASURE_NAMES])
        return buf.getvalue()
    table = [["image_id", *MEASURE_NAMES]]
    table += [[i] + [f"{v[k]:.{precision}f}" for k in MEASURE_NAMES] for i, v in good]
    return _align(table)


def render_scatter_csv(series: ScatterSeries) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("gt", "pred", "image_id"))
    for g, p, i in series.points:
        w.writerow([repr(g), repr(p), i])
    return buf.getvalue()
