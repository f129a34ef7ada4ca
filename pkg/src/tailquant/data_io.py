"""CSV ingestion and emission.

Estimates mode: header ``theta_hat`` with optional ``unit_id``.
Panel mode: long format with headers ``unit,time,y,z`` plus optional
extra regressors ``x1..xk``.  Comma-separated, ``.`` decimal, UTF-8.
"""

from __future__ import annotations

import csv
import re
from collections import Counter

import numpy as np

from .exceptions import ValidationError
from .simulation import PanelData

_X_COLUMN = re.compile(r"^x(\d+)$")


def _parse_float(text: str, column: str, line: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ValidationError(f"non-numeric cell {text!r} in column {column!r} on line {line}") from None
    if not np.isfinite(value):
        raise ValidationError(f"non-finite cell in column {column!r} on line {line}")
    return value


def read_estimates_csv(path) -> tuple[np.ndarray, list[str] | None, dict]:
    """Read one estimate per row; returns (values, unit_ids, diagnostics)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "theta_hat" not in reader.fieldnames:
            raise ValidationError("estimates CSV must have a 'theta_hat' column")
        has_ids = "unit_id" in reader.fieldnames
        values, ids = [], []
        for line, row in enumerate(reader, start=2):
            values.append(_parse_float(row["theta_hat"], "theta_hat", line))
            if has_ids:
                ids.append(row["unit_id"])
    if len(values) < 2:
        raise ValidationError(f"need at least 2 estimates, got {len(values)}")
    diagnostics = {"n_rows": len(values)}
    return np.asarray(values), ids if has_ids else None, diagnostics


def write_estimates_csv(path, values, unit_ids=None) -> None:
    """Emit estimates with full float round-trip precision."""
    values = np.asarray(values, dtype=np.float64)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if unit_ids is None:
            writer.writerow(["theta_hat"])
            for v in values:
                writer.writerow([repr(float(v))])
        else:
            writer.writerow(["unit_id", "theta_hat"])
            for uid, v in zip(unit_ids, values):
                writer.writerow([uid, repr(float(v))])


def read_panel_csv(path) -> tuple[PanelData, dict]:
    """Read a long-format panel; units with missing periods are dropped.

    The common series length is taken to be the most frequent per-unit row
    count; units deviating from it are reported in the diagnostics.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ValidationError("panel CSV is empty")
        for needed in ("unit", "time", "y", "z"):
            if needed not in reader.fieldnames:
                raise ValidationError(f"panel CSV is missing the {needed!r} column")
        x_cols = sorted(
            (c for c in reader.fieldnames if _X_COLUMN.match(c)),
            key=lambda c: int(_X_COLUMN.match(c).group(1)),
        )
        per_unit: dict[str, list] = {}
        n_rows = 0
        for line, row in enumerate(reader, start=2):
            n_rows += 1
            record = (
                _parse_float(row["time"], "time", line),
                _parse_float(row["y"], "y", line),
                _parse_float(row["z"], "z", line),
                tuple(_parse_float(row[c], c, line) for c in x_cols),
            )
            per_unit.setdefault(row["unit"], []).append(record)
    if not per_unit:
        raise ValidationError("panel CSV has no data rows")

    t_common = Counter(len(rows) for rows in per_unit.values()).most_common(1)[0][0]
    dropped = [uid for uid, rows in per_unit.items() if len(rows) != t_common]
    kept = [uid for uid in per_unit if len(per_unit[uid]) == t_common]
    if len(kept) < 2:
        raise ValidationError("fewer than 2 units with a complete set of periods")

    n, t = len(kept), t_common
    y = np.empty((n, t))
    z = np.empty((n, t))
    x = np.empty((n, t, len(x_cols))) if x_cols else None
    for i, uid in enumerate(kept):
        rows = sorted(per_unit[uid], key=lambda r: r[0])
        y[i] = [r[1] for r in rows]
        z[i] = [r[2] for r in rows]
        if x is not None:
            x[i] = [r[3] for r in rows]
    panel = PanelData(y=y, z=z, x=x, unit_ids=np.asarray(kept))
    diagnostics = {
        "n_rows": n_rows,
        "n_units": n,
        "t": t,
        "dropped_units": dropped,
    }
    return panel, diagnostics


def write_panel_csv(path, panel: PanelData) -> None:
    """Emit a panel in the long format read back by :func:`read_panel_csv`."""
    x = panel.x
    if x is not None and x.ndim == 2:
        x = x[:, :, None]
    x_cols = [f"x{j + 1}" for j in range(x.shape[2])] if x is not None else []
    ids = panel.unit_ids if panel.unit_ids is not None else np.arange(panel.n)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["unit", "time", "y", "z", *x_cols])
        for i in range(panel.n):
            for s in range(panel.t):
                row = [ids[i], s + 1, repr(float(panel.y[i, s])), repr(float(panel.z[i, s]))]
                row.extend(repr(float(x[i, s, j])) for j in range(len(x_cols)))
                writer.writerow(row)
