"""Benchmark artifacts: run records as JSON lines and CSV, profiles as CSV and SVG."""

from __future__ import annotations

import csv
import logging
import math
from collections import defaultdict
from collections.abc import Iterable, Sequence
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from pydantic import ValidationError  # noqa: E402

from ...core.error_handler import ReportError  # noqa: E402
from .profile import Metric, ProfileCurve, write_profile_csv  # noqa: E402
from .suite import RunRecord  # noqa: E402

log = logging.getLogger(__name__)

RECORDS_JSONL = "records.jsonl"
RECORDS_CSV = "records.csv"
RECORD_FIELDS = list(RunRecord.model_fields)


def profile_paths(out_dir: Path, metric: Metric) -> tuple[Path, Path]:
    return out_dir / f"profile_{metric.value}.csv", out_dir / f"profile_{metric.value}.svg"


def write_records(records: Iterable[RunRecord], out_dir: Path | str) -> tuple[Path, Path]:
    """Write ``records.jsonl`` and ``records.csv`` into ``out_dir``."""
    out_dir = Path(out_dir)
    jsonl_path, csv_path = out_dir / RECORDS_JSONL, out_dir / RECORDS_CSV
    records = list(records)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        with jsonl_path.open("w", encoding="utf-8") as fh:
            for record in records:
                fh.write(record.model_dump_json() + "\n")
        with csv_path.open("w", encoding="utf-8", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=RECORD_FIELDS, lineterminator="\n")
            w.writeheader()
            for record in records:
                w.writerow(record.model_dump(mode="json"))
    except OSError as exc:
        raise ReportError(f"cannot write records: {exc}", out_dir) from exc
    log.info("Wrote %d records to %s", len(records), out_dir)
    return jsonl_path, csv_path


def read_records(path: Path | str) -> list[RunRecord]:
    """Load records from a directory (its records.jsonl), a .jsonl or a .csv file."""
    path = Path(path)
    if path.is_dir():
        path = path / RECORDS_JSONL
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ReportError(f"cannot read records: {exc}", path) from exc
    try:
        if path.suffix == ".csv":
            return [RunRecord.model_validate(row) for row in csv.DictReader(text.splitlines())]
        return [RunRecord.model_validate_json(line) for line in text.splitlines() if line.strip()]
    except ValidationError as exc:
        raise ReportError(f"malformed record: {exc}", path) from exc


def plot_profile(curves: Sequence[ProfileCurve], path: Path) -> Path:
    """Step plot of P_s(tau) over a log tau axis, one line per solver.

    Each line carries the solver id as its SVG element id.
    """
    metric = curves[0].metric
    finite = [t for c in curves for t in c.taus if math.isfinite(t)]
    tau_max = max([2.0, *finite]) * 1.1

    fig, ax = plt.subplots(figsize=(7, 4.5))
    try:
        for curve in curves:
            xs = [1.0]
            ys = [0.0]
            for tau, value in zip(curve.taus, curve.values):
                x = tau if math.isfinite(tau) else tau_max
                xs.append(x)
                ys.append(value)
            xs.append(tau_max)
            ys.append(curve.fraction_solved)
            (line,) = ax.step(xs, ys, where="post", label=curve.solver_id)
            line.set_gid(curve.solver_id)
        ax.set_xscale("log")
        ax.set_xlim(1.0, tau_max)
        ax.set_ylim(0.0, 1.02)
        ax.set_xlabel(r"$\tau$")
        ax.set_ylabel(r"$P_s(\tau)$")
        ax.set_title(f"Performance profile ({metric.value})")
        ax.legend(loc="lower right", fontsize="small")
        ax.grid(True, which="both", alpha=0.3)
        fig.tight_layout()
        fig.savefig(path, format="svg")
    except OSError as exc:
        raise ReportError(f"cannot write plot: {exc}", path) from exc
    finally:
        plt.close(fig)
    return path


def emit_profiles(curves: Sequence[ProfileCurve], out_dir: Path | str) -> list[Path]:
    """Write ``profile_<metric>.csv`` and ``profile_<metric>.svg`` for every metric present."""
    if not curves:
        raise ReportError("no profile curves to render", out_dir)
    out_dir = Path(out_dir)
    by_metric: dict[Metric, list[ProfileCurve]] = defaultdict(list)
    for curve in curves:
        by_metric[curve.metric].append(curve)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ReportError(f"cannot create output directory: {exc}", out_dir) from exc

    written = []
    for metric, group in by_metric.items():
        csv_path, svg_path = profile_paths(out_dir, metric)
        written.append(write_profile_csv(group, csv_path))
        written.append(plot_profile(group, svg_path))
        log.info("Wrote %s profile for %d solvers", metric.value, len(group))
    return written


def emit_report(
    curves: Sequence[ProfileCurve], records: Sequence[RunRecord], out_dir: Path | str
) -> list[Path]:
    """Records (JSON lines, CSV) plus profile CSV and SVG per metric.

    Nothing is written when ``curves`` is empty.
    """
    if not curves:
        raise ReportError("no profile curves to render", out_dir)
    paths = list(write_records(records, out_dir))
    paths.extend(emit_profiles(curves, out_dir))
    return paths
