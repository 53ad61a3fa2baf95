"""
Serialization of engine results into CSV and JSON tables.

Floats are written with Python's shortest round-trip repr; non-finite values
become empty CSV cells or JSON nulls, so every table loads as plot input.
"""

import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

from .engine.benchmark import BenchReport
from .engine.models import Basis
from .engine.sweep import PiecewiseLinearApprox

SWEEP_COLUMNS = ('lambda', 'status', 'objective', 'min_x', 'min_rc', 'imag_resid')
SOLVE_COLUMNS = ('lambda', 'status', 'objective', 'basis', 'iterations')
BOUND_COLUMNS = ('lambda', 'direction', 'epsilon', 'delta_max', 'binding_term', 'excluded')
APPROX_COLUMNS = ('lambda', 'objective', 'status', 'basis', 'next_certified')
BENCH_COLUMNS = (
    'method', 'lambdas', 'preprocess_seconds', 'total_seconds',
    'median_per_lambda_seconds', 'max_objective_gap', 'agrees', 'error',
)


def clean(value: Any) -> Any:
    """Recursively convert numpy values and bases to JSON-safe Python values."""
    if isinstance(value, dict):
        return {str(key): clean(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [clean(item) for item in value]
    if isinstance(value, np.ndarray):
        return [clean(item) for item in value.tolist()]
    if isinstance(value, Basis):
        return list(value.indices)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, str):
        return str(value)
    return value


def cell(value: Any) -> str:
    value = clean(value)
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, list):
        return ' '.join(cell(item) for item in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def to_csv(rows: Iterable[Dict[str, Any]], columns: Sequence[str]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([cell(row.get(column)) for column in columns])
    return buffer.getvalue()


def to_json(payload: Any) -> str:
    return json.dumps(clean(payload), indent=2, allow_nan=False) + '\n'


def approx_rows(approx: PiecewiseLinearApprox) -> List[Dict[str, Any]]:
    """One row per breakpoint, flagged with the certification of the interval to its right."""
    certified = {interval.lo: interval.certified for interval in approx.intervals}
    rows = []
    for point in approx.breakpoints:
        row = point.to_dict()
        row['next_certified'] = certified.get(point.lam)
        rows.append(row)
    return rows


def bench_rows(report: BenchReport) -> List[Dict[str, Any]]:
    return report.to_rows()


def write_output(text: str, path: Optional[str] = None) -> Optional[str]:
    """Write ``text`` to ``path``; without a path the text is returned for stdout."""
    if path is None:
        return text
    Path(path).write_text(text, encoding='utf-8')
    return None
