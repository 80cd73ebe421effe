"""CSV state files and JSON manifests.

Floats are written with ``repr``, which round-trips every IEEE double
exactly, so states survive the external-process protocol bit for bit.
The junction is pinned at x = 0 in every file and each row carries its
side ('l' left of the junction, 'r' right of it, 'j' the junction node
itself) so there is no off-by-one ambiguity about where the interface
sits.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .cl_solver import CellField, Grid
from .errors import GridMismatchError
from .hj_solver import NodeField


def _fmt(v: float) -> str:
    return repr(float(v))


def write_cell_csv(path, state: CellField) -> None:
    """Write cells as rows (x center, density, side)."""
    xs = state.grid.cell_centers()
    nl = state.grid.n_left
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "rho", "side"])
        for i, (x, v) in enumerate(zip(xs, state.values)):
            w.writerow([_fmt(x), _fmt(v), "l" if i < nl else "r"])


def read_cell_csv(path, grid: Grid | None = None) -> CellField:
    """Read a cell CSV; infer the grid from the centers unless one is given."""
    xs, vals = _read_xy(path, "rho")
    if grid is None:
        grid = _grid_from_centers(xs)
    else:
        if len(xs) != grid.n_cells:
            raise GridMismatchError(f"{path}: {len(xs)} rows for a grid with {grid.n_cells} cells")
    return CellField(grid=grid, values=np.array(vals))


def write_node_csv(path, state: NodeField) -> None:
    """Write nodes as rows (x, u, side); the x = 0 node is tagged 'j'."""
    xs = state.grid.node_coords()
    nl = state.grid.n_left
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "u", "side"])
        for i, (x, v) in enumerate(zip(xs, state.values)):
            side = "j" if i == nl else ("l" if i < nl else "r")
            w.writerow([_fmt(x), _fmt(v), side])


def read_node_csv(path, grid: Grid | None = None) -> NodeField:
    xs, vals = _read_xy(path, "u")
    if grid is None:
        grid = _grid_from_nodes(xs)
    else:
        if len(xs) != grid.n_cells + 1:
            raise GridMismatchError(f"{path}: {len(xs)} rows for a grid with {grid.n_cells + 1} nodes")
    return NodeField(grid=grid, values=np.array(vals))


def _read_xy(path, value_col: str) -> tuple[list[float], list[float]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "x" not in reader.fieldnames or value_col not in reader.fieldnames:
            raise GridMismatchError(f"{path}: expected columns x,{value_col}")
        xs, vals = [], []
        for row in reader:
            xs.append(float(row["x"]))
            vals.append(float(row[value_col]))
    if len(xs) < 2:
        raise GridMismatchError(f"{path}: too few rows")
    return xs, vals


def _uniform_spacing(xs: list[float]) -> float:
    diffs = np.diff(xs)
    dx = float(np.median(diffs))
    if dx <= 0.0 or np.any(np.abs(diffs - dx) > 1e-9 * max(dx, 1.0)):
        raise GridMismatchError("x column is not uniformly spaced")
    return dx


def _grid_from_centers(xs: list[float]) -> Grid:
    dx = _uniform_spacing(xs)
    n_left = int(np.sum(np.asarray(xs) < 0.0))
    grid = Grid(n_left=n_left, n_right=len(xs) - n_left, dx=dx)
    if abs(grid.cell_centers()[0] - xs[0]) > 1e-9 * max(dx, 1.0):
        raise GridMismatchError("cell centers are not aligned with a junction at x = 0")
    return grid


def _grid_from_nodes(xs: list[float]) -> Grid:
    dx = _uniform_spacing(xs)
    n_left = int(np.sum(np.asarray(xs) < 0.0))
    if abs(xs[n_left]) > 1e-9 * max(dx, 1.0):
        raise GridMismatchError("no node sits at the junction x = 0")
    return Grid(n_left=n_left, n_right=len(xs) - 1 - n_left, dx=dx)


def write_manifest(path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_manifest(path) -> dict:
    return json.loads(Path(path).read_text())
