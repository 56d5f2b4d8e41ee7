"""CSV loading for the simulator's time-series output.

The upstream schemas are flat comma-separated tables with a header row:
population traces (t, pop1..pop3, diagnostics), coherence series
(t, purity, entropy[, std_err_*]) and optionally a trailing ``label``
column in comparison runs.  Values are plotted exactly as read; nothing is
recomputed here.
"""

from __future__ import annotations

import csv

import numpy as np


class MissingColumnError(KeyError):
    """A required column is absent; the message names it."""


class EmptyCSVError(ValueError):
    """The file has no data rows."""


def read_timeseries(path: str) -> dict[str, np.ndarray]:
    """Columns of a CSV as float arrays (the ``label`` column stays str)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyCSVError(f"{path}: no header row") from None
        rows = [row for row in reader if row]
    if not rows:
        raise EmptyCSVError(f"{path}: no data rows")
    columns: dict[str, np.ndarray] = {}
    for j, name in enumerate(header):
        values = [row[j] for row in rows]
        if name == "label":
            columns[name] = np.array(values, dtype=object)
        else:
            columns[name] = np.array([float(v) for v in values])
    return columns


def require_columns(columns: dict, names: list[str], path: str) -> None:
    for name in names:
        if name not in columns:
            raise MissingColumnError(f"{path}: missing column {name!r} "
                                     f"(has: {', '.join(columns)})")


def split_by_label(columns: dict) -> dict[str, dict[str, np.ndarray]]:
    """Per-label sub-tables of a long-format comparison CSV, in order of
    first appearance.  Without a label column the whole table is returned
    under the label None."""
    if "label" not in columns:
        return {None: columns}
    labels = columns["label"]
    out: dict[str, dict[str, np.ndarray]] = {}
    for label in dict.fromkeys(labels):  # preserves appearance order
        mask = labels == label
        out[str(label)] = {k: v[mask] for k, v in columns.items() if k != "label"}
    return out
