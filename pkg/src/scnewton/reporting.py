"""Tables and curve samples as CSV/JSON documents.

Floats are written with ``repr`` (shortest round-trip form), so parsing an
emitted file gives back the exact doubles. Missing values are empty cells.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "TableRow",
    "DEFAULT_TABLE_GRID",
    "bound_table",
    "table_csv",
    "critical_curve_rows",
    "sigma_rows",
    "synthesis1d_rows",
    "rows_to_csv",
    "to_json",
    "CURVES",
]

DEFAULT_TABLE_GRID = (
    0.02, 0.04, 0.05, 0.06, 0.08, 0.10, 0.12, 0.14, 0.15, 0.16, 0.18, 0.20,
    0.22, 0.24, 0.25, 0.26, 0.28, 0.30, 0.32, 0.34, 0.35, 0.36, 0.38, 0.40,
    0.42, 0.44, 0.45, 0.46, 0.48, 0.50, 0.52, 0.54, 0.55, 0.56, 0.58, 0.60,
    0.62, 0.64, 0.65, 0.66, 0.68, 0.70, 0.72, 0.74, 0.75, 0.76, 0.78, 0.80,
    0.82, 0.84, 0.85, 0.86, 0.88, 0.90, 0.92, 0.94, 0.95, 0.96, 0.98,
)


@dataclass(frozen=True)
class TableRow:
    """Bounds for one starting decrement.

    ``bound_full`` is ``None`` when the full-step boundary value problem has
    no converged solution.
    """

    lambda_bar: float
    bound_full: float | None
    bound_opt: float
    gamma_star: float

    FIELDS = ("lambda_bar", "bound_full", "bound_opt", "gamma_star")

    def as_tuple(self):
        return (self.lambda_bar, self.bound_full, self.bound_opt, self.gamma_star)


def _fmt(v):
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(float(v) + 0.0)
    return str(v)


def rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def to_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, allow_nan=False)


def bound_table(grid=DEFAULT_TABLE_GRID, tol: float = 1e-11):
    """One :class:`TableRow` per grid value.

    The full-step column is solved by continuation along the sorted grid; a
    failure there leaves that cell empty and does not affect other rows.
    """
    from .hamiltonian import sweep_bounds
    from .optimal_damping import optimal_step

    grid = [float(a) for a in grid]
    for a in grid:
        if not 0.0 < a < 1.0:
            raise DomainError(f"grid value {a} outside (0, 1)")
    order = sorted(range(len(grid)), key=grid.__getitem__)
    full = sweep_bounds([grid[i] for i in order], gamma=1.0, tol=tol)
    full_by_index = {i: r for i, r in zip(order, full)}
    rows = []
    for i, a in enumerate(grid):
        opt = optimal_step(a)
        res = full_by_index[i]
        rows.append(TableRow(a, None if res is None else res.lambda_out, opt.lambda_out, opt.gamma_star))
    return rows


def table_csv(rows) -> str:
    return rows_to_csv(TableRow.FIELDS, (r.as_tuple() for r in rows))


def critical_curve_rows(n: int = 200, c_min: float = -4.0, c_max: float = -0.02):
    """``(c, t_crit, y1)`` samples; the point at ``c = -1`` is always included."""
    from .critical_curve import focal_time, nominal_y1

    cs = set(np.round(np.linspace(c_min, c_max, n), 12).tolist())
    if c_min <= -1.0 <= c_max:
        cs.add(-1.0)
    rows = []
    for c in sorted(cs):
        t = focal_time(c)
        rows.append((c, t, float(nominal_y1(t, c))))
    return ("c", "t_crit", "y1"), rows


def sigma_rows(a: float = 0.4, n: int = 201):
    """Solution curve of the planar equation from ``(-a, 0)`` to the circle."""
    from .optimal_damping import optimal_step

    res = optimal_step(a, n_samples=n)
    rows = list(zip(res.sigma.y1.tolist(), res.sigma.y2.tolist(), res.t_profile.tolist()))
    return ("y1", "y2", "t"), rows


def synthesis1d_rows(n: int = 201):
    """Dispersion and switching curves of the one-dimensional problem."""
    from .onedim import dispersion_curve, switching_curve

    rows = []
    for t in np.linspace(-1.0, 0.0, n).tolist():
        rows.append((t, dispersion_curve(t), switching_curve(t)))
    return ("t", "dispersion", "switching"), rows


def bounds_rows(grid=None, tol: float = 1e-11):
    if grid is None:
        grid = np.round(np.arange(1, 99) * 0.01, 12).tolist()
    rows = bound_table(grid, tol=tol)
    return TableRow.FIELDS, [r.as_tuple() for r in rows]


CURVES = {
    "critical": critical_curve_rows,
    "sigma": sigma_rows,
    "bounds": bounds_rows,
    "synthesis1d": synthesis1d_rows,
}
