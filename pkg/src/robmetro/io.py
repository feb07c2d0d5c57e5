# this_file: src/robmetro/io.py

"""
CSV and JSON output.

Floats are written with 17 significant digits so that a file read back
reproduces the exact doubles, and every file is written atomically.
"""

import csv
import io
import json
import os
import tempfile
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

import numpy as np
from loguru import logger

from robmetro.errors import DataFileError
from robmetro.types import PrecisionCurve, Trajectory, TrajectorySource


def format_float(value: float) -> str:
    return f"{float(value):.17g}"


def atomic_write_text(path: Path, text: str) -> Path:
    """Write to a temporary file in the target directory, then move it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    logger.debug(f"Wrote {path}")
    return path


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def trajectory_csv(trajectory: Trajectory, analytic: Trajectory | None = None) -> str:
    """``t,p_plus,source`` plus ``p_analytic`` when a model trajectory is given."""
    header = ["t", "p_plus", "source"]
    source = trajectory.source.value
    if analytic is None:
        rows = (
            [format_float(t), format_float(p), source]
            for t, p in zip(trajectory.times, trajectory.probabilities, strict=True)
        )
        return _csv_text(header, rows)
    if len(analytic) != len(trajectory):
        msg = "Analytic column must match the trajectory length"
        raise ValueError(msg)
    rows = (
        [format_float(t), format_float(p), source, format_float(a)]
        for t, p, a in zip(trajectory.times, trajectory.probabilities, analytic.probabilities, strict=True)
    )
    return _csv_text([*header, "p_analytic"], rows)


def write_trajectory_csv(path: Path, trajectory: Trajectory, analytic: Trajectory | None = None) -> Path:
    return atomic_write_text(path, trajectory_csv(trajectory, analytic))


def precision_csv(curve: PrecisionCurve) -> str:
    """``t,delta_theta,reliable``; reliable is written as true/false."""
    rows = (
        [format_float(t), format_float(d), "true" if ok else "false"]
        for t, d, ok in zip(curve.times, curve.delta_theta, curve.reliable, strict=True)
    )
    return _csv_text(["t", "delta_theta", "reliable"], rows)


def write_precision_csv(path: Path, curve: PrecisionCurve) -> Path:
    return atomic_write_text(path, precision_csv(curve))


def sweep_csv(results: Sequence[tuple[float, Trajectory]]) -> str:
    """Long format ``theta,t,p_plus``, one block per theta."""
    rows = (
        [format_float(theta), format_float(t), format_float(p)]
        for theta, trajectory in results
        for t, p in zip(trajectory.times, trajectory.probabilities, strict=True)
    )
    return _csv_text(["theta", "t", "p_plus"], rows)


def write_sweep_csv(path: Path, results: Sequence[tuple[float, Trajectory]]) -> Path:
    return atomic_write_text(path, sweep_csv(results))


def write_json(path: Path, payload: Any) -> Path:
    return atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=False) + "\n")


def read_trajectory_csv(path: Path) -> Trajectory:
    """
    Read a ``t,p_plus`` CSV.

    The optional ``source`` column sets the provenance of the result; rows
    without it read as integrated. Other columns are ignored.

    Raises:
        DataFileError: Missing file or columns, a malformed row or an
            unknown source
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        msg = f"{path}: cannot read trajectory: {e}"
        raise DataFileError(msg) from e
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or not {"t", "p_plus"} <= set(reader.fieldnames):
        msg = f"{path}: expected columns 't' and 'p_plus', got {reader.fieldnames}"
        raise DataFileError(msg)
    times, probabilities = [], []
    sources: set[TrajectorySource] = set()
    for row in reader:
        try:
            times.append(float(row["t"]))
            probabilities.append(float(row["p_plus"]))
            sources.add(TrajectorySource(row.get("source") or TrajectorySource.INTEGRATED.value))
        except (TypeError, ValueError) as e:
            msg = f"{path}:{reader.line_num}: malformed row {row}"
            raise DataFileError(msg) from e
    if len(sources) > 1:
        msg = f"{path}: mixed sources {sorted(s.value for s in sources)}"
        raise DataFileError(msg)
    source = sources.pop() if sources else TrajectorySource.INTEGRATED
    try:
        return Trajectory(np.array(times), np.array(probabilities), source)
    except ValueError as e:
        msg = f"{path}: {e}"
        raise DataFileError(msg) from e
