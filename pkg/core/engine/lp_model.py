"""
Problem ingestion and basis-block extraction.

The interchange format is a JSON document with dense row-major matrices:

    {"c": [...], "A": [[...], ...], "D": [[...], ...], "b": [...],
     "senses": ["eq" | "le", ...],
     "lambda": {"values": [...]} | {"from": x, "to": y, "count": k}}

The "lambda" block is optional and read separately by ``parse_lambda_grid``.
"""

import json
import logging
from typing import Any, Dict, List, Optional

import numpy as np

from .exceptions import ProblemFormatError
from .models import ParametricLP, Basis, BasisPartition, Sense

logger = logging.getLogger(__name__)

REQUIRED_KEYS = ('c', 'A', 'D', 'b', 'senses')


def _load_document(text: str) -> Dict[str, Any]:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(exc.msg, location=f"line {exc.lineno} column {exc.colno}") from exc
    if not isinstance(document, dict):
        raise ProblemFormatError("top-level value must be an object", location='document')
    return document


def _check_vector(document, key):
    value = document[key]
    if not isinstance(value, list):
        raise ProblemFormatError("expected an array", location=key)
    for i, entry in enumerate(value):
        if key != 'senses' and (isinstance(entry, bool) or not isinstance(entry, (int, float))):
            raise ProblemFormatError(f"expected a number, got {entry!r}", location=f"{key}[{i}]")
    return value


def _check_matrix(document, key):
    rows = document[key]
    if not isinstance(rows, list) or not rows:
        raise ProblemFormatError("expected a non-empty array of rows", location=key)
    width = None
    for r, row in enumerate(rows):
        if not isinstance(row, list):
            raise ProblemFormatError("expected an array", location=f"{key}[{r}]")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ProblemFormatError(f"row has {len(row)} entries, row 0 has {width}", location=f"{key}[{r}]")
        for j, entry in enumerate(row):
            if isinstance(entry, bool) or not isinstance(entry, (int, float)):
                raise ProblemFormatError(f"expected a number, got {entry!r}", location=f"{key}[{r}][{j}]")
    return rows


def parse_problem(text: str) -> ParametricLP:
    """
    Parse a problem document into a ParametricLP.

    Raises ProblemFormatError naming the offending field (and row) for
    malformed documents, dimension mismatches and unknown sense tokens.
    """
    document = _load_document(text)
    missing = [key for key in REQUIRED_KEYS if key not in document]
    if missing:
        raise ProblemFormatError(f"missing keys {', '.join(missing)}", location='document')

    senses = _check_vector(document, 'senses')
    for row, sense in enumerate(senses):
        if sense not in Sense.values:
            raise ProblemFormatError(f"unknown sense token {sense!r}", location=f"senses[{row}]")

    lp = ParametricLP(
        c=_check_vector(document, 'c'),
        A=_check_matrix(document, 'A'),
        D=_check_matrix(document, 'D'),
        b=_check_vector(document, 'b'),
        senses=tuple(senses),
    )
    logger.debug(f"Parsed problem with m={lp.m}, n={lp.n}")
    return lp


def serialize_problem(lp: ParametricLP, lambdas: Optional[List[float]] = None) -> str:
    document = lp.to_dict()
    if lambdas is not None:
        document['lambda'] = {'values': [float(v) for v in lambdas]}
    return json.dumps(document)


def lambda_grid(start: float, stop: float, count: int) -> List[float]:
    """Inclusive grid of ``count`` points; count=1 gives [start]."""
    if count < 0:
        raise ProblemFormatError(f"count must be >= 0, got {count}", location='lambda.count')
    if count == 0:
        return []
    if count == 1:
        return [float(start)]
    return [float(v) for v in np.linspace(start, stop, count)]


def parse_lambda_spec(text: str) -> List[float]:
    """
    Command-line lambda syntax: ``from:to:count`` (inclusive), a comma
    separated list, or a single value.
    """
    text = text.strip()
    try:
        if ':' in text:
            parts = text.split(':')
            if len(parts) != 3:
                raise ValueError(f"expected from:to:count, got {text!r}")
            values = lambda_grid(float(parts[0]), float(parts[1]), int(parts[2]))
        else:
            values = [float(part) for part in text.split(',') if part.strip()]
    except ValueError as exc:
        raise ProblemFormatError(str(exc), location='lambda') from exc
    if not all(np.isfinite(values)):
        raise ProblemFormatError("values must be finite", location='lambda')
    return values


def parse_lambda_grid(text: str) -> Optional[List[float]]:
    """Read the optional "lambda" block of a problem document."""
    spec = _load_document(text).get('lambda')
    if spec is None:
        return None
    if not isinstance(spec, dict):
        raise ProblemFormatError("expected an object", location='lambda')
    if 'values' in spec:
        values = spec['values']
        if not isinstance(values, list):
            raise ProblemFormatError("expected an array", location='lambda.values')
        try:
            return [float(v) for v in values]
        except (TypeError, ValueError) as exc:
            raise ProblemFormatError(str(exc), location='lambda.values') from exc
    try:
        return lambda_grid(float(spec['from']), float(spec['to']), int(spec['count']))
    except KeyError as exc:
        raise ProblemFormatError(f"missing key {exc.args[0]}", location='lambda') from exc
    except (TypeError, ValueError) as exc:
        raise ProblemFormatError(str(exc), location='lambda') from exc


def to_standard_form(lp: ParametricLP) -> ParametricLP:
    """
    Add one slack column per 'le' row (A-coefficient 1, D-coefficient 0,
    cost 0). Slacks are appended after the original columns in row order,
    so the first n entries of any solution are the original variables.
    """
    if lp.standard_form:
        return lp
    le_rows = [row for row, sense in enumerate(lp.senses) if sense == Sense.LE]
    slack = np.zeros((lp.m, len(le_rows)))
    for column, row in enumerate(le_rows):
        slack[row, column] = 1.0
    standard = ParametricLP(
        c=np.concatenate([lp.c, np.zeros(len(le_rows))]),
        A=np.hstack([lp.A, slack]),
        D=np.hstack([lp.D, np.zeros_like(slack)]),
        b=lp.b,
        senses=(Sense.EQ.value,) * lp.m,
        standard_form=True,
    )
    if le_rows:
        logger.debug(f"Added {len(le_rows)} slack columns")
    return standard


def partition(lp: ParametricLP, basis: Basis) -> BasisPartition:
    """Extract the basic and nonbasic blocks, in basis order."""
    if not lp.standard_form:
        raise ProblemFormatError("partition requires a standard-form problem", location='standard_form')
    basis.validate(lp.n, lp.m)
    nonbasic = basis.nonbasic(lp.n)
    basic_cols = list(basis.indices)
    nonbasic_cols = list(nonbasic)
    return BasisPartition(
        A_B=lp.A[:, basic_cols],
        D_B=lp.D[:, basic_cols],
        A_N=lp.A[:, nonbasic_cols],
        D_N=lp.D[:, nonbasic_cols],
        c_B=lp.c[basic_cols],
        c_N=lp.c[nonbasic_cols],
        basis=basis,
        nonbasic=nonbasic,
    )
