"""Graph and hypergraph invariants entering the noise-robust inequalities.

* α(G,w)  — maximum-weight independent set (exact branch and bound)
* θ(G,w)  — weighted Lovász theta (dense SDP)
* α*(G,w) — fractional packing number (exact LP over maximal cliques)
* β(Γ_G,q) — weighted max-predictability over indeterministic extremal models
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, NamedTuple, Optional, Sequence

import numpy as np

from .errors import NoIndeterministicVertices, TooLarge, UnknownVertex
from .models import Point, classify_extremal, extremal_points
from .rational import to_fraction
from .scenario import MAX_CLIQUE_VERTICES, ContextualityScenario, WeightedGraph, maximal_cliques
from .solvers import DenseSDP, RationalLP, lp_solve, sdp_solve

SDP_TOLERANCE = 1e-6
THETA_SOLVER_TOL = 1e-10


class Weighted(NamedTuple):
    value: Fraction
    witness: tuple


# ---------------------------------------------------------------------------
# α
# ---------------------------------------------------------------------------


def independence_number(g: WeightedGraph) -> Weighted:
    """Maximum total weight of a set of pairwise non-adjacent vertices.

    Branch and bound over vertices in decreasing weight order; the bound at each
    node is a greedy colouring of the candidate set into cliques, charging each
    colour class its heaviest member.  The witness is the lexicographically
    smallest (by vertex position) among the optimal sets found first.
    """
    verts = g.vertices
    n = len(verts)
    if n > MAX_CLIQUE_VERTICES:
        raise TooLarge(f"{n} vertices exceeds the guard of {MAX_CLIQUE_VERTICES}")
    pos = {v: i for i, v in enumerate(verts)}
    w = [g.weights[v] for v in verts]
    adj = [0] * n
    for e in g.graph.edges:
        a, b = (pos[v] for v in e)
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    order = sorted(range(n), key=lambda i: (-w[i], i))

    def colour_bound(cand: int) -> Fraction:
        # greedy partition into cliques of G (independent sets of the complement)
        total = Fraction(0)
        rest = [i for i in order if cand >> i & 1]
        while rest:
            clique = [rest[0]]
            remaining = []
            for i in rest[1:]:
                if all(adj[i] >> j & 1 for j in clique):
                    clique.append(i)
                else:
                    remaining.append(i)
            total += w[clique[0]]  # rest is in weight order, so the first is heaviest
            rest = remaining
        return total

    best_val = Fraction(-1)
    best_set = 0

    def search(chosen: int, value: Fraction, cand: int) -> None:
        nonlocal best_val, best_set
        if not cand:
            if value > best_val or (value == best_val and _lex_less(chosen, best_set, n)):
                best_val, best_set = value, chosen
            return
        if value + colour_bound(cand) < best_val:
            return
        i = next(j for j in order if cand >> j & 1)
        bit = 1 << i
        search(chosen | bit, value + w[i], cand & ~adj[i] & ~bit)
        search(chosen, value, cand & ~bit)

    search(0, Fraction(0), (1 << n) - 1 if n else 0)
    return Weighted(max(best_val, Fraction(0)), tuple(verts[i] for i in range(n) if best_set >> i & 1))


def _lex_less(a: int, b: int, n: int) -> bool:
    ia = [i for i in range(n) if a >> i & 1]
    ib = [i for i in range(n) if b >> i & 1]
    return ia < ib


# ---------------------------------------------------------------------------
# θ
# ---------------------------------------------------------------------------


def theta_program(g: WeightedGraph) -> DenseSDP:
    """max Σ √(w_i w_j) X_ij  s.t.  Tr X = 1,  X_ij = 0 on edges,  X ⪰ 0."""
    verts = g.vertices
    n = len(verts)
    pos = {v: i for i, v in enumerate(verts)}
    s = np.sqrt(np.array([float(g.weights[v]) for v in verts]))
    C = np.outer(s, s)
    cons = [(np.eye(n), 1.0)]
    for a, b in g.graph.sorted_edges():
        E = np.zeros((n, n))
        E[pos[a], pos[b]] = E[pos[b], pos[a]] = 0.5
        cons.append((E, 0.0))
    return DenseSDP(C, cons)


def lovasz_theta(g: WeightedGraph) -> float:
    """Weighted Lovász theta of ``g`` (primal and dual agree to about 1e-9)."""
    if len(g.vertices) > MAX_CLIQUE_VERTICES:
        raise TooLarge(f"{len(g.vertices)} vertices exceeds the guard of {MAX_CLIQUE_VERTICES}")
    if not g.vertices:
        return 0.0
    return sdp_solve(theta_program(g), tol=THETA_SOLVER_TOL).value


# ---------------------------------------------------------------------------
# α*
# ---------------------------------------------------------------------------


def fractional_packing(g: WeightedGraph) -> Weighted:
    """max Σ w_v p_v  s.t.  p ≥ 0 and Σ_{v∈c} p_v ≤ 1 for every maximal clique ``c``."""
    verts = g.vertices
    pos = {v: i for i, v in enumerate(verts)}
    rows = []
    for c in maximal_cliques(g.graph):
        r = [0] * len(verts)
        for v in c:
            r[pos[v]] = 1
        rows.append(r)
    res = lp_solve(RationalLP([g.weights[v] for v in verts], A_ub=rows, b_ub=[1] * len(rows)))
    return Weighted(res.value, res.x)


# ---------------------------------------------------------------------------
# β and the choice of q
# ---------------------------------------------------------------------------


def _q_vector(s: ContextualityScenario, q) -> list[Fraction]:
    if q is None:
        return [Fraction(1, s.n_hyperedges)] * s.n_hyperedges
    if isinstance(q, Mapping):
        vec = [Fraction(0)] * s.n_hyperedges
        for key, val in q.items():
            k = _hyperedge_index(s, key)
            vec[k] = to_fraction(val)
    else:
        vec = [to_fraction(x) for x in q]
    if len(vec) != s.n_hyperedges:
        raise ValueError(f"q needs {s.n_hyperedges} entries, got {len(vec)}")
    if any(x < 0 for x in vec) or sum(vec) != 1:
        raise ValueError("q must be a probability distribution over hyperedges")
    return vec


def _hyperedge_index(s: ContextualityScenario, key) -> int:
    if isinstance(key, int):
        return key
    if isinstance(key, str) and key.startswith("e") and key[1:].isdigit():
        return int(key[1:]) - 1
    members = frozenset(key)
    for k, e in enumerate(s.hyperedges):
        if frozenset(e) == members:
            return k
    raise UnknownVertex(f"no hyperedge {key!r}")


def predictabilities(s: ContextualityScenario, p: Sequence) -> list[Fraction]:
    """ζ(M_e, p) = max_{v∈e} p(v) for every hyperedge."""
    return [max(p[s.index[v]] for v in e) for e in s.hyperedges]


def indeterministic_points(gamma_g: ContextualityScenario) -> list[Point]:
    return classify_extremal(gamma_g, extremal_points(gamma_g)).indeterministic


def weighted_max_predictability(
    gamma_g: ContextualityScenario, q=None, indeterministic: Optional[Sequence[Point]] = None
) -> Weighted:
    """β(Γ_G,q) = max over indeterministic extremal models of Σ_e q_e ζ(M_e,p).

    ``q`` defaults to uniform.  Ties between maximizers are broken towards the
    lexicographically smallest point.
    """
    qv = _q_vector(gamma_g, q)
    ind = indeterministic_points(gamma_g) if indeterministic is None else list(indeterministic)
    if not ind:
        raise NoIndeterministicVertices("G(Γ_G) has no indeterministic extremal points; β is undefined")
    best = None
    for p in sorted(ind):
        val = sum((qe * z for qe, z in zip(qv, predictabilities(gamma_g, p))), Fraction(0))
        if best is None or val > best[0]:
            best = (val, tuple(p))
    return Weighted(*best)


def optimal_q(gamma_g: ContextualityScenario, indeterministic: Optional[Sequence[Point]] = None) -> Weighted:
    """Minimize β over q:  min t  s.t.  Σ_e q_e ζ_e(p) ≤ t for all p ∈ Λ_ind,  q a distribution.

    Returns the minimal value and the minimizing q as a tuple over hyperedges.
    """
    ind = indeterministic_points(gamma_g) if indeterministic is None else list(indeterministic)
    if not ind:
        raise NoIndeterministicVertices("G(Γ_G) has no indeterministic extremal points; β is undefined")
    m = gamma_g.n_hyperedges
    rows = [predictabilities(gamma_g, p) + [-1] for p in sorted(ind)]
    lp = RationalLP(
        [0] * m + [1],
        A_eq=[[1] * m + [0]],
        b_eq=[1],
        A_ub=rows,
        b_ub=[0] * len(rows),
        bounds=[(0, None)] * m + [(None, None)],
    )
    res = lp_solve(lp, sense="min")
    return Weighted(res.value, tuple(res.x[:m]))


# ---------------------------------------------------------------------------
# bundle
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InvariantBundle:
    alpha: Fraction
    theta: float
    alpha_star: Fraction
    beta: Optional[Fraction]
    q_used: tuple[Fraction, ...]
    theta_tolerance: float = SDP_TOLERANCE
    alpha_witness: tuple = ()
    beta_vertex: Optional[Point] = None
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if any(x < 0 for x in self.q_used) or sum(self.q_used) != 1:
            raise ValueError("q_used must be a probability distribution")
        eps = self.theta_tolerance
        if not (self.alpha <= self.theta + eps and self.theta <= self.alpha_star + eps):
            raise AssertionError(
                f"sandwich α ≤ θ ≤ α* violated: {self.alpha}, {self.theta}, {self.alpha_star}"
            )

    @property
    def beta_defined(self) -> bool:
        return self.beta is not None

    def to_dict(self) -> dict:
        from .rational import fmt_number

        return {
            "alpha": fmt_number(self.alpha),
            "theta": self.theta,
            "alpha_star": fmt_number(self.alpha_star),
            "beta": None if self.beta is None else fmt_number(self.beta),
            "q": [fmt_number(x) for x in self.q_used],
            "alpha_witness": list(self.alpha_witness),
            "notes": list(self.notes),
        }


def compute_invariants(
    gamma_g: ContextualityScenario,
    g: WeightedGraph,
    q=None,
    indeterministic: Optional[Sequence[Point]] = None,
) -> InvariantBundle:
    """α, θ, α* of ``g`` and β of ``gamma_g`` under ``q`` (uniform by default).

    When the polytope has no indeterministic extremal points, ``beta`` is
    ``None`` and a note records that no nontrivial bound exists.
    """
    missing = [v for v in g.vertices if v not in gamma_g.index]
    if missing:
        raise UnknownVertex(f"graph vertices {missing} are not vertices of the scenario")
    qv = tuple(_q_vector(gamma_g, q))
    a = independence_number(g)
    th = lovasz_theta(g)
    ast = fractional_packing(g)
    notes = []
    try:
        b = weighted_max_predictability(gamma_g, qv, indeterministic)
        beta, beta_vertex = b.value, b.witness
        if beta == 0:
            notes.append("beta = 0 (flagged: degenerate choice of q)")
    except NoIndeterministicVertices:
        beta, beta_vertex = None, None
        notes.append("no indeterministic extremal points: no nontrivial bound")
    return InvariantBundle(
        alpha=a.value,
        theta=th,
        alpha_star=ast.value,
        beta=beta,
        q_used=qv,
        alpha_witness=a.witness,
        beta_vertex=beta_vertex,
        notes=tuple(notes),
    )


def theta_odd_cycle(n: int) -> float:
    """Closed form θ(C_n) = n cos(π/n) / (1 + cos(π/n)) for odd n."""
    c = math.cos(math.pi / n)
    return n * c / (1 + c)
