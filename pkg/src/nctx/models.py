"""Probabilistic models on a scenario and the hierarchy C ⊆ CE¹ ⊆ G.

* G(Γ): nonnegative vertex probabilities summing to one on every hyperedge.
* CE¹(Γ): additionally, every clique of the orthogonality graph sums to at most one.
* C(Γ): convex hull of the deterministic (0/1) models.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, NamedTuple, Optional, Sequence

from .errors import (
    EmptyClass,
    Infeasible,
    NegativeProbability,
    NormalizationFailure,
    NotInCE1,
    TooLarge,
    UnknownVertex,
)
from .rational import to_fraction
from .scenario import (
    ContextualityScenario,
    maximal_cliques,
    nd_vertex_id,
    orthogonality_graph,
    specker_extension,
    uncovered_cliques,
)
from .solvers import HRepPolytope, RationalLP, enumerate_vertices, lp_feasible_point, lp_solve

Point = tuple[Fraction, ...]

MAX_DETERMINISTIC = 200_000


@dataclass(frozen=True)
class ProbModel:
    """Validated probabilities, stored in the scenario's vertex order."""

    scenario: ContextualityScenario
    values: Point

    def __getitem__(self, v: str) -> Fraction:
        return self.values[self.scenario.index[v]]

    def as_dict(self) -> dict[str, Fraction]:
        return dict(zip(self.scenario.vertices, self.values))

    @property
    def is_deterministic(self) -> bool:
        return all(x in (0, 1) for x in self.values)


@dataclass(frozen=True)
class ModelClass:
    deterministic_extremal: bool
    indeterministic_extremal: bool
    classical: bool
    consistent_exclusivity: bool
    general: bool = True

    def __post_init__(self):
        if self.classical and not self.consistent_exclusivity:
            raise AssertionError("a classical model must satisfy consistent exclusivity")
        if self.consistent_exclusivity and not self.general:
            raise AssertionError("a CE¹ model must be a probabilistic model")


def check_model(s: ContextualityScenario, raw: Mapping[str, object] | Sequence) -> ProbModel:
    """Validate nonnegativity and per-hyperedge normalization (exactly)."""
    if isinstance(raw, Mapping):
        unknown = set(raw) - set(s.vertices)
        if unknown:
            raise UnknownVertex(f"probabilities given for unknown vertices {sorted(unknown)}")
        missing = [v for v in s.vertices if v not in raw]
        if missing:
            raise UnknownVertex(f"no probability given for vertices {missing}")
        vals = tuple(to_fraction(raw[v]) for v in s.vertices)
    else:
        if len(raw) != s.n_vertices:
            raise UnknownVertex(f"expected {s.n_vertices} probabilities, got {len(raw)}")
        vals = tuple(to_fraction(x) for x in raw)
    for v, x in zip(s.vertices, vals):
        if x < 0:
            raise NegativeProbability(f"p({v}) = {x} is negative")
    for e in s.hyperedges:
        total = sum((vals[s.index[v]] for v in e), Fraction(0))
        if total != 1:
            raise NormalizationFailure(e, total)
    return ProbModel(s, vals)


# ---------------------------------------------------------------------------
# polytopes and extremal points
# ---------------------------------------------------------------------------


def _hyperedge_rows(s: ContextualityScenario):
    rows = []
    for e in s.hyperedges:
        r = [0] * s.n_vertices
        for v in e:
            r[s.index[v]] = 1
        rows.append(r)
    return rows


def _clique_rows(s: ContextualityScenario, cliques):
    rows = []
    for c in cliques:
        r = [0] * s.n_vertices
        for v in c:
            r[s.index[v]] = 1
        rows.append(r)
    return rows


def general_polytope(s: ContextualityScenario) -> HRepPolytope:
    """G(Γ) in H-representation.  Upper bounds ``p <= 1`` are implied by normalization."""
    n = s.n_vertices
    neg_identity = [[-int(i == j) for j in range(n)] for i in range(n)]
    return HRepPolytope(n, _hyperedge_rows(s), [1] * s.n_hyperedges, neg_identity, [0] * n)


def ce1_polytope(s: ContextualityScenario) -> HRepPolytope:
    """CE¹(Γ): G(Γ) plus ``Σ_{v∈c} p(v) <= 1`` for maximal cliques not already hyperedges."""
    g = general_polytope(s)
    extra = uncovered_cliques(s)
    return HRepPolytope(
        g.n, g.A_eq, g.b_eq, list(g.A_ub) + _clique_rows(s, extra), list(g.b_ub) + [1] * len(extra)
    )


def extremal_points(s: ContextualityScenario) -> list[Point]:
    """All vertices of G(Γ), sorted lexicographically."""
    return enumerate_vertices(general_polytope(s))


def ce1_extremal_points(s: ContextualityScenario) -> list[Point]:
    return enumerate_vertices(ce1_polytope(s))


class ExtremalPartition(NamedTuple):
    deterministic: list[Point]
    indeterministic: list[Point]


def classify_extremal(s: ContextualityScenario, vertices: Sequence[Point]) -> ExtremalPartition:
    """Split extremal points into 0/1 assignments and the rest."""
    det, ind = [], []
    for p in vertices:
        if len(p) != s.n_vertices:
            raise UnknownVertex(f"point of length {len(p)} does not match {s.n_vertices} vertices")
        (det if all(x in (0, 1) for x in p) else ind).append(tuple(p))
    return ExtremalPartition(det, ind)


def is_extremal(s: ContextualityScenario, p: Sequence) -> bool:
    """Vertex test for G(Γ): the hyperedge-incidence columns on the support are independent."""
    support = [i for i, x in enumerate(p) if x != 0]
    rows = _hyperedge_rows(s)
    cols = [[Fraction(rows[k][i]) for k in range(len(rows))] for i in support]
    basis = []  # echelon form of the support columns
    for col in cols:
        v = list(col)
        for pc, b in basis:
            if v[pc]:
                f = v[pc] / b[pc]
                v = [x - f * y for x, y in zip(v, b)]
        pc = next((k for k, x in enumerate(v) if x), None)
        if pc is None:
            return False
        basis.append((pc, v))
    return True


# ---------------------------------------------------------------------------
# deterministic models
# ---------------------------------------------------------------------------


def _exact_cover_search(s: ContextualityScenario, limit: Optional[int]):
    """Yield 0/1 assignments with exactly one 1 per hyperedge (backtracking)."""
    n = s.n_vertices
    edges = [[s.index[v] for v in e] for e in s.hyperedges]
    containing = [[] for _ in range(n)]
    for k, e in enumerate(edges):
        for i in e:
            containing[i].append(k)
    covered = [False] * len(edges)
    blocked = [0] * n  # > 0 when the vertex must be 0
    chosen: list[int] = []
    count = 0

    def select_edge():
        best, best_opts = None, None
        for k, e in enumerate(edges):
            if covered[k]:
                continue
            opts = [i for i in e if not blocked[i]]
            if best_opts is None or len(opts) < len(best_opts):
                best, best_opts = k, opts
                if not opts:
                    break
        return best, best_opts

    def rec():
        nonlocal count
        k, opts = select_edge()
        if k is None:
            count += 1
            yield tuple(chosen)
            return
        for i in opts:
            # choose vertex i: covers its edges, blocks all other members of them
            newly_covered = [kk for kk in containing[i] if not covered[kk]]
            if len(newly_covered) != len(containing[i]):
                continue  # would put two 1s in an already covered hyperedge
            for kk in newly_covered:
                covered[kk] = True
                for j in edges[kk]:
                    blocked[j] += 1
            chosen.append(i)
            yield from rec()
            chosen.pop()
            for kk in newly_covered:
                covered[kk] = False
                for j in edges[kk]:
                    blocked[j] -= 1
            if limit is not None and count >= limit:
                return

    yield from rec()


def deterministic_models(s: ContextualityScenario, limit: int = MAX_DETERMINISTIC) -> list[Point]:
    """All deterministic models, sorted lexicographically (raises TooLarge past ``limit``)."""
    out = []
    for sel in _exact_cover_search(s, limit + 1):
        p = [Fraction(0)] * s.n_vertices
        for i in sel:
            p[i] = Fraction(1)
        out.append(tuple(p))
        if len(out) > limit:
            raise TooLarge(f"more than {limit} deterministic models")
    return sorted(out)


class Colouring(NamedTuple):
    colourable: bool
    model: Optional[ProbModel]


def ks_colourable(s: ContextualityScenario) -> Colouring:
    """Search for a 0/1 assignment with exactly one 1 in every hyperedge."""
    for sel in _exact_cover_search(s, 1):
        p = [Fraction(0)] * s.n_vertices
        for i in sel:
            p[i] = Fraction(1)
        return Colouring(True, ProbModel(s, tuple(p)))
    return Colouring(False, None)


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------


class Membership(NamedTuple):
    member: bool
    weights: Optional[dict[int, Fraction]] = None  # index into the deterministic list → weight
    violating_clique: Optional[tuple[str, ...]] = None


def in_classical(
    s: ContextualityScenario, m: ProbModel, deterministic: Optional[Sequence[Point]] = None
) -> Membership:
    """Decide ``m ∈ C(Γ)`` by an LP over the convex weights of all deterministic models.

    On success ``weights`` maps positions in ``deterministic`` (sorted list from
    :func:`deterministic_models` if not given) to positive weights.
    """
    det = list(deterministic) if deterministic is not None else deterministic_models(s)
    if not det:
        return Membership(False)
    k = len(det)
    A = [[d[i] for d in det] for i in range(s.n_vertices)] + [[1] * k]
    b = list(m.values) + [1]
    try:
        lam = lp_feasible_point(RationalLP([0] * k, A_eq=A, b_eq=b))
    except Infeasible:
        return Membership(False)
    return Membership(True, {j: w for j, w in enumerate(lam) if w})


def in_ce1(s: ContextualityScenario, m: ProbModel) -> Membership:
    """Check every maximal clique of the orthogonality graph sums to at most one."""
    for c in maximal_cliques(orthogonality_graph(s)):
        if sum((m[v] for v in c), Fraction(0)) > 1:
            return Membership(False, violating_clique=c)
    return Membership(True)


def classify_model(
    s: ContextualityScenario, m: ProbModel, deterministic: Optional[Sequence[Point]] = None
) -> ModelClass:
    det = m.is_deterministic
    extremal = det or is_extremal(s, m.values)
    return ModelClass(
        deterministic_extremal=det,
        indeterministic_extremal=extremal and not det,
        classical=in_classical(s, m, deterministic).member,
        consistent_exclusivity=in_ce1(s, m).member,
    )


# ---------------------------------------------------------------------------
# CE¹(Γ) ↔ G(Γ′)
# ---------------------------------------------------------------------------


def ce1_bijection_forward(s: ContextualityScenario, m: ProbModel) -> ProbModel:
    """Extend ``m ∈ CE¹(Γ)`` to Γ′ by ``p(v_c) = 1 − Σ_{v∈c} p(v)``."""
    ext = specker_extension(s)
    if ext is s:
        return m
    vals = dict(m.as_dict())
    for c in uncovered_cliques(s):
        total = sum((m[v] for v in c), Fraction(0))
        if total > 1:
            raise NotInCE1(f"clique {list(c)} sums to {total} > 1")
        vals[nd_vertex_id(c)] = 1 - total
    return check_model(ext, vals)


def ce1_bijection_back(s: ContextualityScenario, m_ext: ProbModel) -> ProbModel:
    """Restrict a model on Γ′ to the vertices of Γ."""
    return check_model(s, {v: m_ext[v] for v in s.vertices})


# ---------------------------------------------------------------------------
# optimization of linear expressions
# ---------------------------------------------------------------------------

CLASSES = ("C", "CE1", "G")


def _weight_vector(s: ContextualityScenario, weights: Mapping[str, object]) -> list[Fraction]:
    unknown = set(weights) - set(s.vertices)
    if unknown:
        raise UnknownVertex(f"weights on unknown vertices {sorted(unknown)}")
    return [to_fraction(weights.get(v, 0)) for v in s.vertices]


def max_expression(
    s: ContextualityScenario,
    weights: Mapping[str, object],
    cls: str = "G",
    deterministic: Optional[Sequence[Point]] = None,
) -> Fraction:
    """Exact maximum of ``Σ w_v p(v)`` over C(Γ), CE¹(Γ) or G(Γ).

    Raises :class:`EmptyClass` for ``cls="C"`` when Γ is not KS-colourable.
    """
    w = _weight_vector(s, weights)
    cls = cls.upper().replace("¹", "1")
    if cls == "C":
        det = list(deterministic) if deterministic is not None else deterministic_models(s)
        if not det:
            raise EmptyClass("C(Γ) is empty: the scenario is not KS-colourable")
        return max(sum((a * b for a, b in zip(w, d)), Fraction(0)) for d in det)
    if cls == "G":
        poly = general_polytope(s)
    elif cls == "CE1":
        poly = ce1_polytope(s)
    else:
        raise ValueError(f"class must be one of {CLASSES}, got {cls!r}")
    lp = RationalLP(w, poly.A_eq, poly.b_eq, poly.A_ub, poly.b_ub, bounds=[(None, None)] * s.n_vertices)
    return lp_solve(lp).value


def random_mixture(points: Sequence[Point], rng: random.Random, terms: int = 4) -> Point:
    """A rational convex combination of ``terms`` randomly chosen points."""
    chosen = [rng.randrange(len(points)) for _ in range(terms)]
    raw = [rng.randint(1, 60) for _ in chosen]
    total = sum(raw)
    n = len(points[0])
    out = [Fraction(0)] * n
    for idx, r in zip(chosen, raw):
        for i in range(n):
            out[i] += Fraction(r, total) * points[idx][i]
    return tuple(out)


def cega_expression_weights(s: ContextualityScenario, triangle: Sequence[str] = ("1", "2", "3")) -> dict[str, dict[str, int]]:
    """Weights of the three Bell-KS expressions on the 27-vertex no-detection scenario.

    The 18-ray sum counts each ray once per basis it belongs to (i.e. it is the
    sum over the nine bases of the event probabilities), which makes the
    values come out as 8 / 9 / 9.  The second expression sums the three mutually
    orthogonal rays ``triangle`` — a clique of the orthogonality graph that is not a
    basis.  The third is the sum of the first two.
    """
    rays = [v for v in s.vertices if not v.startswith("nd:")]
    mult = {v: len(s.edges_containing(v)) for v in rays}
    expr1 = dict(mult)
    expr2 = {v: 1 for v in triangle}
    expr3 = {v: mult[v] + (1 if v in expr2 else 0) for v in rays}
    return {"Expr1": expr1, "Expr2": expr2, "Expr3": expr3}
