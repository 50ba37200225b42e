"""Exact vertex enumeration of H-polytopes by the double description method.

The polytope ``{x : A_eq x = b_eq, A_ub x <= b_ub}`` is first parametrized over
its affine hull, ``x = x0 + N z``, then homogenized to the pointed cone

    {(z, t) : t >= 0,  t·b' - A' z >= 0}

whose extreme rays with ``t > 0`` are exactly the vertices.  The cone's rays are
built incrementally (one constraint at a time) in exact integer arithmetic, with
the combinatorial adjacency test on zero sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from ..errors import TooLarge, Unbounded
from ..rational import to_fraction

MAX_DIMENSION = 32


@dataclass(frozen=True)
class HRepPolytope:
    """Equalities ``A_eq x = b_eq`` and inequalities ``A_ub x <= b_ub``."""

    n: int
    A_eq: Sequence[Sequence] = ()
    b_eq: Sequence = ()
    A_ub: Sequence[Sequence] = ()
    b_ub: Sequence = ()

    def __post_init__(self):
        conv = lambda rows: tuple(tuple(to_fraction(a) for a in r) for r in rows)
        object.__setattr__(self, "A_eq", conv(self.A_eq))
        object.__setattr__(self, "A_ub", conv(self.A_ub))
        object.__setattr__(self, "b_eq", tuple(to_fraction(b) for b in self.b_eq))
        object.__setattr__(self, "b_ub", tuple(to_fraction(b) for b in self.b_ub))
        if len(self.A_eq) != len(self.b_eq) or len(self.A_ub) != len(self.b_ub):
            raise ValueError("constraint matrix and right-hand side lengths differ")
        if any(len(r) != self.n for r in self.A_eq + self.A_ub):
            raise ValueError(f"every constraint row must have length {self.n}")

    @classmethod
    def box(cls, n: int, lo=0, hi=1, A_eq=(), b_eq=(), A_ub=(), b_ub=()) -> "HRepPolytope":
        """Constraints plus ``lo <= x_i <= hi`` for every coordinate."""
        rows, rhs = [list(r) for r in A_ub], list(b_ub)
        for i in range(n):
            e = [0] * n
            e[i] = -1
            rows.append(e)
            rhs.append(-to_fraction(lo))
            e = [0] * n
            e[i] = 1
            rows.append(e)
            rhs.append(to_fraction(hi))
        return cls(n, A_eq, b_eq, rows, rhs)

    def contains(self, x: Sequence) -> bool:
        x = [to_fraction(v) for v in x]
        dot = lambda r: sum((a * b for a, b in zip(r, x)), Fraction(0))
        return all(dot(r) == b for r, b in zip(self.A_eq, self.b_eq)) and all(
            dot(r) <= b for r, b in zip(self.A_ub, self.b_ub)
        )


def _affine_hull(A, b, n):
    """Return ``(x0, N)`` with ``{x : A x = b} = {x0 + N z}``, or ``None`` if empty.

    ``N`` is a list of ``n``-vectors (the nullspace basis, one per free column).
    """
    rows = [list(r) + [bi] for r, bi in zip(A, b)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [a * inv for a in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * p for a, p in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(row[n] != 0 for row in rows[r:]):
        return None
    x0 = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x0[c] = rows[i][n]
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -rows[i][f]
        basis.append(v)
    return x0, basis


def _integer_row(row):
    den = lcm(*(a.denominator for a in row)) if row else 1
    ints = [int(a * den) for a in row]
    g = 0
    for a in ints:
        g = gcd(g, a)
    return [a // g for a in ints] if g > 1 else ints


def _normalize(ray):
    g = 0
    for a in ray:
        g = gcd(g, a)
    return tuple(a // g for a in ray) if g > 1 else tuple(ray)


def _rank_select(H, dim):
    """Indices of ``dim`` linearly independent rows of ``H`` (greedy), or fewer."""
    chosen, echelon = [], []  # echelon: list of (pivot col, row as Fractions)
    for idx, row in enumerate(H):
        v = [Fraction(a) for a in row]
        for pc, er in echelon:
            if v[pc]:
                f = v[pc] / er[pc]
                v = [a - f * b for a, b in zip(v, er)]
        pc = next((j for j, a in enumerate(v) if a), None)
        if pc is None:
            continue
        echelon.append((pc, v))
        chosen.append(idx)
        if len(chosen) == dim:
            break
    return chosen


def _solve_columns(B):
    """Integer matrix whose columns ``r_j`` satisfy ``B r_j = c_j e_j`` with ``c_j > 0``."""
    m = len(B)
    aug = [[Fraction(a) for a in row] + [Fraction(int(i == j)) for j in range(m)] for i, row in enumerate(B)]
    for c in range(m):
        piv = next(i for i in range(c, m) if aug[i][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [a * inv for a in aug[c]]
        for i in range(m):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * p for a, p in zip(aug[i], aug[c])]
    inv = [row[m:] for row in aug]
    cols = []
    for j in range(m):
        col = [inv[i][j] for i in range(m)]
        cols.append(_normalize(_integer_row(col)))
    return cols


def _double_description(H, dim):
    """Extreme rays of the pointed cone ``{y in Z^dim : H y >= 0}``.

    Raises :class:`Unbounded` if the cone contains a line.
    """
    order = _rank_select(H, dim)
    if len(order) < dim:
        raise Unbounded("the constraint system has a nontrivial lineality space")
    rest = [i for i in range(len(H)) if i not in set(order)]
    rays = _solve_columns([H[i] for i in order])
    dot = lambda h, r: sum(a * b for a, b in zip(h, r))
    # zero set of each ray over the processed constraints, as a bitmask on row index
    zeros = []
    for r in rays:
        z = 0
        for i in order:
            if dot(H[i], r) == 0:
                z |= 1 << i
        zeros.append(z)

    for i in rest:
        h = H[i]
        vals = [dot(h, r) for r in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        zer = [k for k, v in enumerate(vals) if v == 0]
        new_rays = [rays[k] for k in pos] + [rays[k] for k in zer]
        new_zeros = [zeros[k] for k in pos] + [zeros[k] | (1 << i) for k in zer]
        if neg:
            for p in pos:
                for q in neg:
                    common = zeros[p] & zeros[q]
                    if common.bit_count() < dim - 2:
                        continue
                    adjacent = True
                    for k in range(len(rays)):
                        if k != p and k != q and zeros[k] & common == common:
                            adjacent = False
                            break
                    if not adjacent:
                        continue
                    vp, vq = vals[p], vals[q]
                    r = _normalize([vp * b - vq * a for a, b in zip(rays[p], rays[q])])
                    new_rays.append(r)
                    new_zeros.append(common | (1 << i))
        rays, zeros = new_rays, new_zeros
    return rays


def enumerate_vertices(p: HRepPolytope) -> list[tuple[Fraction, ...]]:
    """All vertices of ``p`` as exact rational tuples, sorted lexicographically.

    Returns ``[]`` for an empty polytope; raises :class:`Unbounded` when the
    polytope is nonempty but unbounded and :class:`TooLarge` above
    ``MAX_DIMENSION`` coordinates.
    """
    if p.n > MAX_DIMENSION:
        raise TooLarge(f"ambient dimension {p.n} exceeds the guard of {MAX_DIMENSION}")
    hull = _affine_hull(p.A_eq, p.b_eq, p.n)
    if hull is None:
        return []
    x0, N = hull
    d = len(N)
    # t·(b - A x0) - (A N) z >= 0 over (z, t); plus t >= 0 listed first.
    H = [[0] * d + [1]]
    for row, b in zip(p.A_ub, p.b_ub):
        coeffs = [-sum((a * v[j] for j, a in enumerate(row)), Fraction(0)) for v in N]
        slack = b - sum((a * xj for a, xj in zip(row, x0)), Fraction(0))
        ints = _integer_row(coeffs + [slack])
        if any(ints[:d]) or ints[d] < 0:
            H.append(ints)
        # rows with zero z-part and nonnegative slack are implied by t >= 0
    if any(not any(r[:d]) and r[d] < 0 for r in H):
        return []
    try:
        rays = _double_description(H, d + 1)
    except Unbounded:
        # a line in the homogenized cone: the polytope is unbounded or empty
        from .lp import RationalLP, lp_feasible_point
        from ..errors import Infeasible

        try:
            lp_feasible_point(
                RationalLP([0] * p.n, p.A_eq, p.b_eq, p.A_ub, p.b_ub, bounds=[(None, None)] * p.n)
            )
        except Infeasible:
            return []
        raise
    finite = [r for r in rays if r[d] > 0]
    if finite and len(finite) != len(rays):
        raise Unbounded("the polytope has a recession direction")
    out = set()
    for r in finite:
        t = r[d]
        out.add(
            tuple(
                x0[j] + sum((Fraction(r[k], t) * N[k][j] for k in range(d)), Fraction(0))
                for j in range(p.n)
            )
        )
    return sorted(out)
