"""
JSON forms of rationals, matrices and polynomials.

Rationals travel as base-10 "num" or "num/den" strings so no value ever passes through a float.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import TYPE_CHECKING, Any

from .exceptions import InputValidationError
from .matrix import RatMatrix
from .polynomial import DensePoly, FactoredPoly
from .rational import format_rational, to_rational

if TYPE_CHECKING:
    from fractions import Fraction

logger: logging.Logger = logging.getLogger(__name__)


def _require_mapping(data: Any, what: str, keys: tuple[str, ...]) -> dict[str, Any]:
    if not isinstance(data, dict):
        msg = f"{what} JSON must be an object, got {type(data).__name__}"
        raise InputValidationError(msg)
    missing = [k for k in keys if k not in data]
    if missing:
        msg = f"{what} JSON is missing keys: {', '.join(missing)}"
        raise InputValidationError(msg)
    return data  # pyright: ignore[reportUnknownVariableType]


def _entry(value: Any) -> Fraction:
    # JSON integers are exact; strings carry fractions. Floats never are.
    if isinstance(value, float):
        msg = f"Floating point value {value!r} is not allowed; use a 'num/den' string"
        raise InputValidationError(msg)
    return to_rational(value)


def matrix_to_json(m: RatMatrix) -> dict[str, Any]:
    return {
        "rows": m.rows,
        "cols": m.cols,
        "data": [[format_rational(v) for v in m.row(i)] for i in range(m.rows)],
    }


def matrix_from_json(data: Any) -> RatMatrix:
    obj = _require_mapping(data, "Matrix", ("rows", "cols", "data"))
    rows, cols, raw = obj["rows"], obj["cols"], obj["data"]
    if not isinstance(rows, int) or not isinstance(cols, int) or not isinstance(raw, list):
        msg = "Matrix JSON needs integer 'rows'/'cols' and a list 'data'"
        raise InputValidationError(msg)
    if len(raw) != rows or any(not isinstance(r, list) or len(r) != cols for r in raw):  # pyright: ignore[reportUnknownArgumentType]
        msg = f"Matrix JSON 'data' does not have shape {rows}x{cols}"
        raise InputValidationError(msg)
    entries = tuple(_entry(v) for r in raw for v in r)  # pyright: ignore[reportUnknownVariableType]
    return RatMatrix(rows, cols, entries)


def dense_poly_from_json(data: Any) -> DensePoly:
    obj = _require_mapping(data, "Polynomial", ("coeffs",))
    if not isinstance(obj["coeffs"], list):
        msg = "Polynomial JSON 'coeffs' must be a list"
        raise InputValidationError(msg)
    return DensePoly(tuple(_entry(c) for c in obj["coeffs"]))  # pyright: ignore[reportUnknownVariableType]


def factored_poly_to_json(f: FactoredPoly) -> dict[str, Any]:
    return {
        "lead": format_rational(f.lead),
        "roots": [{"root": format_rational(r), "mult": m} for r, m in f.roots],
    }


def factored_poly_from_json(data: Any) -> FactoredPoly:
    obj = _require_mapping(data, "Factored polynomial", ("lead", "roots"))
    roots_raw = obj["roots"]
    if not isinstance(roots_raw, list):
        msg = "Factored polynomial JSON 'roots' must be a list"
        raise InputValidationError(msg)
    roots: list[tuple[Fraction, int]] = []
    for item in roots_raw:  # pyright: ignore[reportUnknownVariableType]
        entry = _require_mapping(item, "Root", ("root", "mult"))
        mult = entry["mult"]
        if not isinstance(mult, int) or isinstance(mult, bool):
            msg = f"Root multiplicity must be an integer, got {mult!r}"
            raise InputValidationError(msg)
        roots.append((_entry(entry["root"]), mult))
    return FactoredPoly(_entry(obj["lead"]), tuple(roots))


def poly_from_json(data: Any) -> DensePoly | FactoredPoly:
    """Factored form when the object carries "roots", dense coefficients otherwise."""
    if isinstance(data, dict) and "roots" in data:
        return factored_poly_from_json(data)
    return dense_poly_from_json(data)


def rationals_from_json(data: Any) -> list[Fraction]:
    if not isinstance(data, list):
        msg = f"Expected a JSON list of rationals, got {type(data).__name__}"
        raise InputValidationError(msg)
    return [_entry(v) for v in data]  # pyright: ignore[reportUnknownVariableType]


def load_json(path: str | Path) -> Any:
    """Read and parse a JSON file, mapping I/O and syntax errors to InputValidationError."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        msg = f"Cannot read {path}: {e}"
        raise InputValidationError(msg) from e
    except UnicodeDecodeError as e:
        msg = f"{path} is not valid UTF-8: {e}"
        raise InputValidationError(msg) from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        msg = f"Invalid JSON in {path}: {e}"
        raise InputValidationError(msg) from e
    logger.debug(f"Loaded JSON from {path}")
    return data


def dump_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)
