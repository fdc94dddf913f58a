"""
Shared helper utilities used across helper modules.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Optional

__all__ = [
    "_fmt_float",
    "_normalize_bool_flag",
    "_normalize_lower",
    "_to_float_list",
    "_get_value_by_path",
    "_read_json",
    "_dump_json",
    "_validate_report",
]


def _fmt_float(value: float) -> str:
    """17 significant digits, round-trip safe."""
    return format(float(value), ".17g")


def _normalize_bool_flag(value: Any) -> Optional[bool]:
    """Coerce typical truthy/falsey representations into bool or None."""
    if value is None:
        return None
    if isinstance(value, bool):
        return value
    if isinstance(value, (int, float)):
        return bool(value)
    text = str(value).strip().lower()
    if text in {"1", "true", "yes", "y", "on"}:
        return True
    if text in {"0", "false", "no", "n", "off"}:
        return False
    raise ValueError(f"not a boolean flag: {value!r}")


def _normalize_lower(value: Any) -> Optional[str]:
    """Normalize string input to lowercase and trim whitespace."""
    if value is None:
        return None
    text = str(value).strip().lower()
    return text or None


def _to_float_list(value: str) -> list:
    """'0.5, 0.25' -> [0.5, 0.25]; empty entries are skipped."""
    return [float(part) for part in str(value).split(",") if part.strip()]


def _get_value_by_path(data: dict, path: str) -> Any:
    """Traverse nested dictionaries using a dot-separated path."""
    current = data
    for part in path.split("."):
        if current is None or not isinstance(current, dict):
            return None
        current = current.get(part)
    return current


def _read_json(path: Path) -> dict:
    """Load JSON helper data with consistent encoding."""
    with Path(path).open("r", encoding="utf-8") as fh:
        return json.load(fh)


def _sanitize(value: Any) -> Any:
    """Replace non-finite floats by None so the document stays strict JSON."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _sanitize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_sanitize(v) for v in value]
    return value


def _dump_json(payload: dict) -> str:
    return json.dumps(_sanitize(payload), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _validate_report(
    validator,
    payload: dict,
    schema_path: Optional[str] = None,
    expected_path: Optional[str] = None,
) -> None:
    """Run schema and expected subset checks if paths are provided."""
    if validator is None:
        return
    if schema_path:
        validator.assert_json_schema(payload, schema_path)
    if expected_path:
        validator.compare_with_expected(payload, expected_path)
