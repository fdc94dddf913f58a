"""Persistence of profiles (CSV ``r,u``) and machine-readable reports."""

from __future__ import annotations

import csv
import logging
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from helpers.radial_grid import RadialGrid
from helpers.radial_operators import FieldError, RadialField
from helpers.shared import _dump_json, _fmt_float

logger = logging.getLogger(__name__)

__all__ = [
    "ProfileError",
    "PROFILE_HEADER",
    "SWEEP_COLUMNS",
    "write_profile",
    "read_profile",
    "write_json",
    "write_sweep_csv",
]

PROFILE_HEADER = ("r", "u")
SWEEP_COLUMNS = ("N", "model", "inf_J_upper", "C_N_log_upper", "bound", "ok")


class ProfileError(ValueError):
    """Raised when a profile CSV is unreadable, truncated or sampled on another grid."""


def _ensure_parent(path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_profile(path, u: RadialField) -> Path:
    path = _ensure_parent(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(PROFILE_HEADER)
        for r, value in zip(u.grid.r, u.values):
            writer.writerow((_fmt_float(r), _fmt_float(value)))
    logger.debug("Wrote %d profile rows to %s", u.grid.size, path)
    return path


def read_profile(path, grid: RadialGrid) -> RadialField:
    """Load ``r,u`` rows and check them against the grid nodes."""
    path = Path(path)
    if not path.is_file():
        raise ProfileError(f"profile not found: {path}")
    try:
        with path.open("r", encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except (OSError, UnicodeDecodeError) as exc:
        raise ProfileError(f"cannot read profile {path}: {exc}") from None

    if not rows or tuple(cell.strip() for cell in rows[0]) != PROFILE_HEADER:
        raise ProfileError(f"{path}: expected header 'r,u'")
    body = [row for row in rows[1:] if row]
    if len(body) != grid.size:
        raise ProfileError(f"{path}: {len(body)} rows, grid has {grid.size} nodes")
    try:
        table = np.array([[float(row[0]), float(row[1])] for row in body])
    except (IndexError, ValueError) as exc:
        raise ProfileError(f"{path}: malformed row ({exc})") from None

    if not np.allclose(table[:, 0], grid.r, rtol=0.0, atol=1e-9 * grid.radius):
        worst = int(np.argmax(np.abs(table[:, 0] - grid.r)))
        raise ProfileError(
            f"{path}: r values do not match the grid (row {worst + 1}: {table[worst, 0]!r} vs {grid.r[worst]!r})"
        )
    try:
        return RadialField(grid, table[:, 1])
    except FieldError as exc:
        raise ProfileError(f"{path}: {exc}") from None


def write_json(path, payload: Mapping) -> Path:
    path = _ensure_parent(path)
    path.write_text(_dump_json(dict(payload)), encoding="utf-8")
    return path


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return _fmt_float(value)
    return str(value)


def write_sweep_csv(path, rows: Iterable[Mapping], columns: Sequence[str] = SWEEP_COLUMNS) -> Path:
    path = _ensure_parent(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row.get(column)) for column in columns])
    return path
