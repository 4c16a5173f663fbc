"""JSON matrix files and report serialization.

A matrix file looks like::

    {"rows": 2, "cols": 2, "entries": [["1", "1"], ["0", "0"]], "backend": "exact"}

Entries use the scalar grammar of :mod:`epkit.parser`.  Reports render exact
scalars as fraction strings and residuals as decimal strings, and contain
no timestamps, so identical inputs give byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from .classes import Check, ClassReport, ClassVerdict
from .matrix import Matrix, Tolerance
from .parser import ParseError, parse_scalar
from .polynomial import Polynomial, render
from .scalar import BACKENDS, EXACT, FLOAT, Gaussian, format_scalar


class MatrixFileError(ValueError):
    """Malformed matrix file (bad JSON, shape, entries, or backend)."""


def load_matrix(path: str | Path, backend: Optional[str] = None) -> Matrix:
    """Read a matrix file; ``backend`` overrides the file's own hint.

    An exact file may be read into the float backend, never the reverse.
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise MatrixFileError(f"{path}: {exc}") from exc
    return matrix_from_dict(data, backend, source=str(path))


def matrix_from_dict(data: Any, backend: Optional[str] = None, source: str = "<matrix>") -> Matrix:
    if not isinstance(data, dict) or not {"rows", "cols", "entries"} <= data.keys():
        raise MatrixFileError(f"{source}: expected an object with rows, cols and entries")
    rows, cols, entries = data["rows"], data["cols"], data["entries"]
    if not (isinstance(rows, int) and isinstance(cols, int) and rows >= 1 and cols >= 1):
        raise MatrixFileError(f"{source}: rows and cols must be positive integers")
    if (not isinstance(entries, list) or len(entries) != rows
            or any(not isinstance(r, list) or len(r) != cols for r in entries)):
        raise MatrixFileError(f"{source}: entries do not match the declared {rows}x{cols} shape")
    hint = data.get("backend")
    if hint is not None and hint not in BACKENDS:
        raise MatrixFileError(f"{source}: unknown backend {hint!r}")
    try:
        values = [[parse_scalar(str(x)) for x in row] for row in entries]
    except ParseError as exc:
        raise MatrixFileError(f"{source}: {exc}") from exc
    has_float = any(isinstance(x, complex) for row in values for x in row)
    has_exact = any(isinstance(x, Gaussian) for row in values for x in row)
    if has_float and has_exact:
        # one backend per file; a decimal anywhere makes it a float file
        values = [[complex(x) for x in row] for row in values]
    native = FLOAT if has_float else EXACT
    if hint == EXACT and native == FLOAT:
        raise MatrixFileError(f"{source}: decimal entries in a file marked exact")
    wanted = backend or hint or native
    if wanted == EXACT and native == FLOAT:
        raise MatrixFileError(f"{source}: cannot read decimal entries into the exact backend")
    M = Matrix(values, native)
    return M.to_float() if wanted == FLOAT and native == EXACT else M


def matrix_to_dict(M: Matrix) -> dict:
    return {
        "rows": M.rows,
        "cols": M.cols,
        "backend": M.backend,
        "entries": [[format_scalar(x) for x in row] for row in M.tolist()],
    }


def decimal(x) -> str:
    """Residual rendering: ``"0"`` for an exact zero, else shortest round-trip decimal."""
    x = float(x)
    return "0" if x == 0 else repr(x)


def number(x) -> str:
    """A real constant: fraction string when exact, decimal otherwise."""
    if isinstance(x, (int, Fraction)):
        f = Fraction(x)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    return decimal(x)


def poly_to_str(p: Optional[Polynomial]) -> Optional[str]:
    return None if p is None else render(p)


def tol_to_dict(tol: Tolerance) -> dict:
    return {k: decimal(v) for k, v in asdict(tol).items()}


def check_to_dict(c: Check) -> dict:
    out = {"name": c.name, "holds": c.holds, "residual": decimal(c.residual)}
    if c.note:
        out["note"] = c.note
    return out


def verdict_to_dict(v: ClassVerdict) -> dict:
    return {
        "holds": v.holds,
        "consensus": v.consensus,
        "checks": [check_to_dict(c) for c in v.checks],
    }


def class_report_to_dict(r: ClassReport) -> dict:
    return {
        "backend": r.backend,
        "poly": poly_to_str(r.poly),
        "n": r.n,
        "consensus": r.consensus,
        "classes": {k: verdict_to_dict(v) for k, v in r.classes.items()},
    }


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
