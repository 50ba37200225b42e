"""Exact rational linear programming (two-phase tableau simplex, Bland's rule)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from ..errors import Infeasible, Unbounded
from ..rational import to_fraction

Bound = tuple[Optional[Fraction], Optional[Fraction]]


@dataclass(frozen=True)
class RationalLP:
    """``objective · x`` subject to ``A_eq x = b_eq``, ``A_ub x <= b_ub`` and bounds.

    ``bounds`` holds one ``(lower, upper)`` pair per variable, ``None`` meaning
    unbounded on that side.  When omitted every variable is nonnegative.
    """

    objective: Sequence
    A_eq: Sequence[Sequence] = ()
    b_eq: Sequence = ()
    A_ub: Sequence[Sequence] = ()
    b_ub: Sequence = ()
    bounds: Optional[Sequence[Bound]] = None

    def __post_init__(self):
        n = len(self.objective)
        conv = lambda rows: tuple(tuple(to_fraction(a) for a in r) for r in rows)
        object.__setattr__(self, "objective", tuple(to_fraction(c) for c in self.objective))
        object.__setattr__(self, "A_eq", conv(self.A_eq))
        object.__setattr__(self, "A_ub", conv(self.A_ub))
        object.__setattr__(self, "b_eq", tuple(to_fraction(b) for b in self.b_eq))
        object.__setattr__(self, "b_ub", tuple(to_fraction(b) for b in self.b_ub))
        if self.bounds is None:
            bounds = ((Fraction(0), None),) * n
        else:
            bounds = tuple(
                (None if lo is None else to_fraction(lo), None if hi is None else to_fraction(hi))
                for lo, hi in self.bounds
            )
        object.__setattr__(self, "bounds", bounds)
        if len(self.A_eq) != len(self.b_eq) or len(self.A_ub) != len(self.b_ub):
            raise ValueError("constraint matrix and right-hand side lengths differ")
        if any(len(r) != n for r in self.A_eq + self.A_ub) or len(bounds) != n:
            raise ValueError(f"inconsistent dimensions: {n} variables expected")
        for lo, hi in bounds:
            if lo is not None and hi is not None and lo > hi:
                raise Infeasible(f"empty bound interval [{lo}, {hi}]")

    @property
    def n(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LPResult:
    value: Fraction
    x: tuple[Fraction, ...]
    pivots: int = field(default=0, compare=False)


class _Tableau:
    """Dense simplex tableau ``[A | b]`` with an explicit basis."""

    def __init__(self, rows, rhs, basis):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.pivots = 0

    def pivot(self, r, c, cost_rows):
        row = self.rows[r]
        piv = row[c]
        if piv != 1:
            inv = 1 / piv
            row[:] = [a * inv for a in row]
            self.rhs[r] *= inv
        nz = [j for j, a in enumerate(row) if a]
        b_r = self.rhs[r]
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[c]
            if f:
                for j in nz:
                    other[j] -= f * row[j]
                self.rhs[i] -= f * b_r
        for cost in cost_rows:
            f = cost[0][c]
            if f:
                vec = cost[0]
                for j in nz:
                    vec[j] -= f * row[j]
                cost[1] -= f * b_r
        self.basis[r] = c
        self.pivots += 1


def _run_simplex(tab: _Tableau, cost, allowed, extra_costs=()):
    """Maximize with Bland's rule.  ``cost = [reduced_costs, -value]``.

    Reduced costs are stored as ``c_j - z_j``; the entering column is the
    lowest index with a positive entry.
    """
    while True:
        red = cost[0]
        enter = next((j for j in allowed if red[j] > 0), None)
        if enter is None:
            return
        best = None
        for i, row in enumerate(tab.rows):
            a = row[enter]
            if a > 0:
                ratio = tab.rhs[i] / a
                key = (ratio, tab.basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            raise Unbounded("objective is unbounded on the feasible region")
        tab.pivot(best[1], enter, (cost,) + tuple(extra_costs))


def _standard_form(p: RationalLP):
    """Rewrite ``p`` as ``max c·y, M y = d, y >= 0``.

    Returns the data plus a recovery map ``x_j = offset_j + Σ coef·y_k``.
    """
    cols = []  # per original variable: list of (y index, coefficient)
    offsets = []
    ncols = 0
    upper_rows = []  # (y index, bound) rows y <= bound
    for lo, hi in p.bounds:
        if lo is not None:
            cols.append([(ncols, Fraction(1))])
            offsets.append(lo)
            if hi is not None:
                upper_rows.append((ncols, hi - lo))
            ncols += 1
        elif hi is not None:
            cols.append([(ncols, Fraction(-1))])
            offsets.append(hi)
            ncols += 1
        else:
            cols.append([(ncols, Fraction(1)), (ncols + 1, Fraction(-1))])
            offsets.append(Fraction(0))
            ncols += 2

    def transform(row, rhs):
        out = [Fraction(0)] * ncols
        for j, a in enumerate(row):
            if a:
                rhs -= a * offsets[j]
                for k, s in cols[j]:
                    out[k] += a * s
        return out, rhs

    eq_rows, eq_rhs, ub_rows, ub_rhs = [], [], [], []
    for row, b in zip(p.A_eq, p.b_eq):
        r, b2 = transform(row, b)
        eq_rows.append(r)
        eq_rhs.append(b2)
    for row, b in zip(p.A_ub, p.b_ub):
        r, b2 = transform(row, b)
        ub_rows.append(r)
        ub_rhs.append(b2)
    for k, bound in upper_rows:
        r = [Fraction(0)] * ncols
        r[k] = Fraction(1)
        ub_rows.append(r)
        ub_rhs.append(bound)

    c, c0 = transform(p.objective, Fraction(0))
    return ncols, eq_rows, eq_rhs, ub_rows, ub_rhs, c, -c0, cols, offsets


def lp_solve(p: RationalLP, sense: str = "max") -> LPResult:
    """Solve ``p`` exactly.

    Raises :class:`Infeasible` or :class:`Unbounded`.  The returned point is a
    basic feasible solution, i.e. a vertex of the feasible region whenever the
    region has vertices.
    """
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    ny, eq_rows, eq_rhs, ub_rows, ub_rhs, c, c0, cols, offsets = _standard_form(p)
    if sense == "min":
        c = [-a for a in c]
        c0 = -c0

    n_slack = len(ub_rows)
    rows, rhs, basis, artificial_rows = [], [], [], []
    width = ny + n_slack
    for i, (r, b) in enumerate(zip(ub_rows, ub_rhs)):
        row = r + [Fraction(0)] * n_slack
        row[ny + i] = Fraction(1)
        if b < 0:
            row = [-a for a in row]
            b = -b
            artificial_rows.append(len(rows))
            basis.append(None)
        else:
            basis.append(ny + i)
        rows.append(row)
        rhs.append(b)
    for r, b in zip(eq_rows, eq_rhs):
        row = r + [Fraction(0)] * n_slack
        if b < 0:
            row = [-a for a in row]
            b = -b
        artificial_rows.append(len(rows))
        basis.append(None)
        rows.append(row)
        rhs.append(b)

    n_art = len(artificial_rows)
    for row in rows:
        row.extend([Fraction(0)] * n_art)
    for k, i in enumerate(artificial_rows):
        rows[i][width + k] = Fraction(1)
        basis[i] = width + k
    total = width + n_art
    tab = _Tableau(rows, rhs, basis)

    # phase 2 cost row, kept reduced alongside phase 1
    cost2 = [list(c) + [Fraction(0)] * (total - ny), Fraction(0)]
    if n_art:
        red1 = [Fraction(0)] * total
        val1 = Fraction(0)
        for i in artificial_rows:
            for j in range(width):
                red1[j] += rows[i][j]
            val1 += rhs[i]
        cost1 = [red1, val1]  # second entry holds minus the objective value
        _run_simplex(tab, cost1, range(width), extra_costs=(cost2,))
        if cost1[1] != 0:
            raise Infeasible("no point satisfies the constraints")
        # drive remaining zero-level artificials out of the basis
        keep = []
        for i, bv in enumerate(tab.basis):
            if bv >= width:
                col = next((j for j in range(width) if tab.rows[i][j] != 0), None)
                if col is None:
                    continue  # redundant equality
                tab.pivot(i, col, (cost2,))
            keep.append(i)
        tab.rows = [tab.rows[i][:width] for i in keep]
        tab.rhs = [tab.rhs[i] for i in keep]
        tab.basis = [tab.basis[i] for i in keep]
        cost2[0] = cost2[0][:width]

    _run_simplex(tab, cost2, range(width))

    y = [Fraction(0)] * width
    for i, bv in enumerate(tab.basis):
        y[bv] = tab.rhs[i]
    x = tuple(offsets[j] + sum(s * y[k] for k, s in cols[j]) for j in range(p.n))
    value = sum((a * xi for a, xi in zip(p.objective, x)), Fraction(0))
    return LPResult(value=value, x=x, pivots=tab.pivots)


def lp_feasible_point(p: RationalLP) -> tuple[Fraction, ...]:
    """Return some point satisfying the constraints of ``p`` (objective ignored)."""
    zero = RationalLP(
        objective=(0,) * p.n,
        A_eq=p.A_eq,
        b_eq=p.b_eq,
        A_ub=p.A_ub,
        b_ub=p.b_ub,
        bounds=p.bounds,
    )
    return lp_solve(zero).x
