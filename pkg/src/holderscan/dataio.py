"""CSV ingestion of curve and panel data, and histogram output."""

from __future__ import annotations

import csv
import logging
from collections import Counter
from pathlib import Path

import numpy as np

from .errors import FormatError
from .fts import FtsSample, Grid

log = logging.getLogger(__name__)

MIN_CURVES = 4


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def grid_from_points(points) -> Grid:
    """Grid on given coordinates with trapezoid-rule weights."""
    x = np.asarray(points, dtype=float)
    gaps = np.diff(x)
    w = np.zeros_like(x)
    w[:-1] += gaps / 2
    w[1:] += gaps / 2
    return Grid(x, w)


def _read_rows(path) -> list[tuple[int, list[str]]]:
    with open(path, newline="") as fh:
        rows = [(i, [c.strip() for c in row]) for i, row in enumerate(csv.reader(fh), start=1)]
    return [(i, r) for i, r in rows if r and any(r)]


def ingest_curves(path, labels: bool = False, header: bool | None = None):
    """Read one curve per CSV row.

    Parameters
    ----------
    path : str or Path
    labels : bool
        Treat the first column as an opaque row label (e.g. a date).
    header : bool, optional
        Whether the first row is a header.  By default a header is
        assumed when the first row has a non-numeric value cell or, with
        labels, an empty label cell.  A header whose
        value cells are increasing numbers becomes the grid; otherwise the
        grid is uniform on [0, 1].

    Returns
    -------
    sample : FtsSample
    row_labels : list of str
        The label column, or ``"1", "2", ...`` without one.
    """
    rows = _read_rows(path)
    if not rows:
        raise FormatError(f"{path}: no data rows")
    start = 1 if labels else 0
    if header is None:
        first = rows[0][1]
        # a data row always carries a label, so a blank label cell marks a header
        header = not all(_is_number(c) for c in first[start:]) or (labels and first[0] == "")
    head = rows[0][1][start:] if header else None
    body = rows[1:] if header else rows

    if len(body) < MIN_CURVES:
        raise FormatError(f"{path}: need at least {MIN_CURVES} curves, found {len(body)}")
    width = len(body[0][1])
    values, row_labels = [], []
    for line, row in body:
        if len(row) != width:
            raise FormatError(f"{path}: row at line {line} has {len(row)} fields, expected {width}")
        cells = row[start:]
        try:
            values.append([float(c) for c in cells])
        except ValueError:
            col = next(j for j, c in enumerate(cells) if not _is_number(c)) + start + 1
            raise FormatError(f"{path}: non-numeric value {row[col - 1]!r} at line {line}, column {col}") from None
        row_labels.append(row[0] if labels else str(len(row_labels) + 1))
    data = np.array(values)
    if not np.all(np.isfinite(data)):
        line, col = np.argwhere(~np.isfinite(data))[0]
        raise FormatError(f"{path}: non-finite value at data row {line + 1}, column {col + start + 1}")

    D = data.shape[1]
    grid = Grid.uniform(D) if D >= 2 else None
    if grid is None:
        raise FormatError(f"{path}: curves need at least 2 grid points")
    if head is not None and len(head) == D and all(_is_number(c) for c in head):
        pts = np.array([float(c) for c in head])
        if np.all(np.diff(pts) > 0):
            grid = grid_from_points(pts)
    return FtsSample(grid, data), row_labels


def ingest_panel(path) -> np.ndarray:
    """Read a long-format panel ``n, m, y`` into an ``N x M`` array.

    Time indices must run contiguously from 1 and every time point must have
    the same replicate indices ``1..M``.  A leading header row is skipped.
    """
    rows = _read_rows(path)
    if rows and not all(_is_number(c) for c in rows[0][1]):
        rows = rows[1:]
    cells: dict[tuple[int, int], float] = {}
    for line, row in rows:
        if len(row) != 3:
            raise FormatError(f"{path}: line {line} has {len(row)} fields, expected 3 (n, m, y)")
        try:
            n, m, y = int(row[0]), int(row[1]), float(row[2])
        except ValueError:
            raise FormatError(f"{path}: line {line} is not of the form integer, integer, number") from None
        if (n, m) in cells:
            raise FormatError(f"{path}: duplicate cell (n={n}, m={m}) at line {line}")
        if not np.isfinite(y):
            raise FormatError(f"{path}: non-finite value at line {line}")
        cells[(n, m)] = y
    if not cells:
        raise FormatError(f"{path}: no panel observations")

    times = sorted({n for n, _ in cells})
    N = times[-1]
    gaps = sorted(set(range(1, N + 1)) - set(times))
    if times[0] < 1 or gaps:
        raise FormatError(f"{path}: time index must run contiguously from 1; missing {gaps or [times[0]]}")
    M = max(m for _, m in cells)
    missing = [(n, m) for n in range(1, N + 1) for m in range(1, M + 1) if (n, m) not in cells]
    if missing or min(m for _, m in cells) < 1:
        raise FormatError(f"{path}: panel is not rectangular; missing cells {missing[:5]}")
    return np.array([[cells[(n, m)] for m in range(1, M + 1)] for n in range(1, N + 1)])


def histogram(locations) -> list[tuple[int, int]]:
    """Sorted ``(location, count)`` pairs."""
    return sorted(Counter(int(x) for x in locations).items())


def emit_histogram(locations, path) -> list[tuple[int, int]]:
    """Write detection frequencies as ``location,count`` CSV; header always written."""
    rows = histogram(locations)
    if not rows:
        log.warning("no detections to tabulate; writing header only to %s", path)
    with open(Path(path), "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["location", "count"])
        writer.writerows(rows)
    return rows
