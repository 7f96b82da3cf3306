"""
CSV import/export for traces, parameter vectors and learning curves

All reals are written with 17 significant digits so a value read back is
bit-identical to the value written.
"""

import csv
from pathlib import Path
from typing import Iterable, List, Sequence, Union

import numpy as np

from config import logger
from errors import TraceFormatError
from wtltl import Trace

_logger = logger(__name__)

PathLike = Union[str, Path]

LEARNING_CURVE_HEADER = ["update", "mean_cost", "min_cost", "mean_robustness"]
PARAMS_HEADER = ["theta"]

# Relative tolerance when checking that trace timestamps are evenly spaced
_DT_RTOL = 1e-6


def fmt(value: float) -> str:
    return f"{float(value):.17g}"


def _write_rows(path: PathLike, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    _logger.debug(f"Wrote {path}")
    return path


def _read_rows(path: PathLike) -> List[List[str]]:
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as f:
        rows = [row for row in csv.reader(f) if row]
    if not rows:
        raise TraceFormatError(f"{path}: file is empty")
    return rows


def _to_float(text: str, path: PathLike, line: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise TraceFormatError(f"{path}, line {line}: {text!r} is not a number") from None
    if not np.isfinite(value):
        raise TraceFormatError(f"{path}, line {line}: non-finite value {text!r}")
    return value


# ============================================================================
# TRACES
# ============================================================================

def write_trace_csv(path: PathLike, trace: Trace) -> Path:
    """Write `t,x0,x1,...` with one row per state"""
    header = ["t"] + [f"x{i}" for i in range(trace.dim)]
    rows = ([fmt(t)] + [fmt(v) for v in state] for t, state in zip(trace.times, trace.states))
    return _write_rows(path, header, rows)


def read_trace_csv(path: PathLike) -> Trace:
    """
    Read a trace written by write_trace_csv.

    The sampling period is taken from the first two timestamps; every other
    gap must match it.

    Raises:
        TraceFormatError: Bad header, ragged rows, non-numeric or uneven times
    """
    rows = _read_rows(path)
    header = [h.strip() for h in rows[0]]
    expected = ["t"] + [f"x{i}" for i in range(len(header) - 1)]
    if len(header) < 2 or header != expected:
        raise TraceFormatError(f"{path}: header must be t,x0,x1,..., got {','.join(header)}")

    data = []
    for line, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise TraceFormatError(f"{path}, line {line}: expected {len(header)} columns, got {len(row)}")
        data.append([_to_float(cell, path, line) for cell in row])
    if not data:
        raise TraceFormatError(f"{path}: no states")

    table = np.array(data)
    times, states = table[:, 0], table[:, 1:]
    dt = 1.0
    if len(times) > 1:
        gaps = np.diff(times)
        dt = float(gaps[0])
        if dt <= 0 or not np.allclose(gaps, dt, rtol=_DT_RTOL, atol=0.0):
            raise TraceFormatError(f"{path}: timestamps must increase in equal steps")
    return Trace(states, dt)


# ============================================================================
# PARAMETERS AND LEARNING CURVES
# ============================================================================

def write_params_csv(path: PathLike, theta) -> Path:
    return _write_rows(path, PARAMS_HEADER, ([fmt(v)] for v in np.asarray(theta, dtype=float).ravel()))


def read_params_csv(path: PathLike) -> np.ndarray:
    rows = _read_rows(path)
    if [h.strip() for h in rows[0]] != PARAMS_HEADER:
        raise TraceFormatError(f"{path}: header must be 'theta'")
    values = []
    for line, row in enumerate(rows[1:], start=2):
        if len(row) != 1:
            raise TraceFormatError(f"{path}, line {line}: expected one value, got {len(row)}")
        values.append(_to_float(row[0], path, line))
    if not values:
        raise TraceFormatError(f"{path}: no parameters")
    return np.array(values)


def write_learning_curve(path: PathLike, history) -> Path:
    """history: sequence of records with update, mean_cost, min_cost, mean_robustness"""
    rows = (
        [str(rec.update), fmt(rec.mean_cost), fmt(rec.min_cost), fmt(rec.mean_robustness)]
        for rec in history
    )
    return _write_rows(path, LEARNING_CURVE_HEADER, rows)


def write_table(path: PathLike, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    return _write_rows(path, header, rows)
