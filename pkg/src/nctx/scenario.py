"""Contextuality scenarios (hypergraphs of measurement events) and derived objects.

A scenario is a Sperner family of hyperedges over an ordered vertex set.  From
it we build the orthogonality graph, its maximal cliques, the extension that
enforces the structural Specker property, the no-detection hypergraph attached
to a weighted subgraph, and the companion hypergraph of source events.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

from .errors import (
    DanglingVertex,
    DuplicateHyperedge,
    DuplicateVertexId,
    EmptyHyperedge,
    NonPositiveWeight,
    SpernerViolation,
    TooLarge,
    UnknownName,
    UnknownVertex,
)
from .rational import to_fraction

MAX_CLIQUE_VERTICES = 64
ND_PREFIX = "nd:"


# ---------------------------------------------------------------------------
# core types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ContextualityScenario:
    """Vertices in canonical (input) order; hyperedges as tuples in that order.

    Construct through :func:`validate_scenario`, which enforces the invariants.
    ``simple`` is ``False`` only for hypergraphs produced by
    :func:`specker_extension` in the rare case where an original hyperedge is a
    strict subset of a newly promoted clique.
    """

    vertices: tuple[str, ...]
    hyperedges: tuple[tuple[str, ...], ...]
    simple: bool = True
    index: Mapping[str, int] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.index is None:
            object.__setattr__(self, "index", {v: i for i, v in enumerate(self.vertices)})

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_hyperedges(self) -> int:
        return len(self.hyperedges)

    def edges_containing(self, v: str) -> list[int]:
        return [k for k, e in enumerate(self.hyperedges) if v in e]

    def to_dict(self) -> dict:
        return {"vertices": list(self.vertices), "hyperedges": [list(e) for e in self.hyperedges]}


@dataclass(frozen=True)
class OrthoGraph:
    """Simple undirected graph over ordered string vertices."""

    vertices: tuple[str, ...]
    edges: frozenset[frozenset[str]]

    def __post_init__(self):
        vs = set(self.vertices)
        for e in self.edges:
            if len(e) != 2 or not e <= vs:
                raise UnknownVertex(f"edge {sorted(e)} is not a pair of graph vertices")

    @classmethod
    def from_edges(cls, vertices: Sequence[str], edges: Iterable[Sequence[str]]) -> "OrthoGraph":
        return cls(tuple(vertices), frozenset(frozenset(e) for e in edges))

    def adjacent(self, u: str, v: str) -> bool:
        return frozenset((u, v)) in self.edges

    def neighbours(self, v: str) -> list[str]:
        return [u for u in self.vertices if u != v and self.adjacent(u, v)]

    def degree(self, v: str) -> int:
        return sum(1 for e in self.edges if v in e)

    def induced(self, subset: Iterable[str]) -> "OrthoGraph":
        keep = set(subset)
        missing = keep - set(self.vertices)
        if missing:
            raise UnknownVertex(f"vertices not in graph: {sorted(missing)}")
        return OrthoGraph(
            tuple(v for v in self.vertices if v in keep),
            frozenset(e for e in self.edges if e <= keep),
        )

    def sorted_edges(self) -> list[tuple[str, str]]:
        pos = {v: i for i, v in enumerate(self.vertices)}
        pairs = [tuple(sorted(e, key=pos.__getitem__)) for e in self.edges]
        return sorted(pairs, key=lambda p: (pos[p[0]], pos[p[1]]))


@dataclass(frozen=True)
class WeightedGraph:
    """A graph with strictly positive rational vertex weights."""

    graph: OrthoGraph
    weights: Mapping[str, Fraction]

    def __post_init__(self):
        w = {}
        for v in self.graph.vertices:
            if v not in self.weights:
                raise UnknownVertex(f"no weight given for vertex {v!r}")
            x = to_fraction(self.weights[v])
            if x <= 0:
                raise NonPositiveWeight(f"weight of {v!r} is {x}, must be > 0")
            w[v] = x
        extra = set(self.weights) - set(self.graph.vertices)
        if extra:
            raise UnknownVertex(f"weights given for unknown vertices {sorted(extra)}")
        object.__setattr__(self, "weights", w)

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.graph.vertices

    def scaled(self, factor) -> "WeightedGraph":
        f = to_fraction(factor)
        return WeightedGraph(self.graph, {v: f * w for v, w in self.weights.items()})


@dataclass(frozen=True)
class SourceScenario:
    """Source settings paired with the hyperedges of a no-detection hypergraph.

    ``hyperedges[k]`` lists the source events of setting ``S_{e_k}``: one event
    ``"<v>@e<k+1>"`` for every vertex ``v`` of the measurement hypergraph.  The
    events whose vertex lies in ``e_k`` are the *paired* ones (same outcome
    label as the measurement event); ``paired[k]`` maps each ``v in e_k`` to its
    source event.  ``star`` holds the two events of the distinguished setting.
    """

    hyperedges: tuple[tuple[str, ...], ...]
    paired: tuple[Mapping[str, str], ...]
    star: tuple[str, str] = ("s*=0", "s*=1")

    @property
    def n_events(self) -> int:
        return sum(len(e) for e in self.hyperedges) + len(self.star)

    @property
    def n_settings(self) -> int:
        return len(self.hyperedges) + 1


# ---------------------------------------------------------------------------
# validation and basic constructions
# ---------------------------------------------------------------------------


def validate_scenario(vertices: Sequence[str], hyperedges: Sequence[Iterable[str]]) -> ContextualityScenario:
    """Check the hypergraph axioms and return a canonical scenario.

    Hyperedge members are reordered to follow the vertex order; the order of
    hyperedges is kept.
    """
    return _build(vertices, hyperedges, require_sperner=True)


def _build(vertices, hyperedges, require_sperner=True) -> ContextualityScenario:
    vertices = tuple(str(v) for v in vertices)
    seen = set()
    for v in vertices:
        if v in seen:
            raise DuplicateVertexId(f"vertex id {v!r} appears more than once")
        seen.add(v)
    pos = {v: i for i, v in enumerate(vertices)}
    edges, edge_sets = [], []
    for raw in hyperedges:
        members = [str(v) for v in raw]
        if not members:
            raise EmptyHyperedge("hyperedges must be nonempty")
        unknown = [v for v in members if v not in pos]
        if unknown:
            raise UnknownVertex(f"hyperedge {members} uses undeclared vertices {unknown}")
        s = frozenset(members)
        if len(s) != len(members):
            raise DuplicateVertexId(f"hyperedge {members} repeats a vertex")
        if s in edge_sets:
            raise DuplicateHyperedge(f"hyperedge {sorted(s, key=pos.__getitem__)} is listed twice")
        edge_sets.append(s)
        edges.append(tuple(sorted(s, key=pos.__getitem__)))
    covered = set().union(*edge_sets) if edge_sets else set()
    dangling = [v for v in vertices if v not in covered]
    if dangling:
        raise DanglingVertex(f"vertices {dangling} belong to no hyperedge")
    simple = True
    for i, a in enumerate(edge_sets):
        for j, b in enumerate(edge_sets):
            if i != j and a < b:
                if require_sperner:
                    raise SpernerViolation(edges[i], edges[j])
                simple = False
    return ContextualityScenario(vertices, tuple(edges), simple)


def orthogonality_graph(s: ContextualityScenario) -> OrthoGraph:
    """Join every pair of vertices that share a hyperedge."""
    edges = set()
    for e in s.hyperedges:
        for i in range(len(e)):
            for j in range(i + 1, len(e)):
                edges.add(frozenset((e[i], e[j])))
    return OrthoGraph(s.vertices, frozenset(edges))


def maximal_cliques(g: OrthoGraph) -> list[tuple[str, ...]]:
    """All maximal cliques (Bron–Kerbosch with Tomita pivoting) in canonical order.

    Each clique lists its members in vertex order; the list is sorted by the
    members' vertex positions.
    """
    n = len(g.vertices)
    if n > MAX_CLIQUE_VERTICES:
        raise TooLarge(f"{n} vertices exceeds the clique-enumeration guard of {MAX_CLIQUE_VERTICES}")
    pos = {v: i for i, v in enumerate(g.vertices)}
    nbr = [0] * n
    for e in g.edges:
        a, b = (pos[v] for v in e)
        nbr[a] |= 1 << b
        nbr[b] |= 1 << a
    found: list[int] = []

    def expand(R: int, P: int, X: int) -> None:
        if not P and not X:
            found.append(R)
            return
        cand = P | X
        pivot, best = -1, -1
        while cand:
            low = cand & -cand
            u = low.bit_length() - 1
            cnt = (P & nbr[u]).bit_count()
            if cnt > best:
                pivot, best = u, cnt
            cand ^= low
        todo = P & ~nbr[pivot]
        while todo:
            low = todo & -todo
            v = low.bit_length() - 1
            expand(R | low, P & nbr[v], X & nbr[v])
            P &= ~low
            X |= low
            todo ^= low

    if n:
        expand(0, (1 << n) - 1, 0)
    cliques = [tuple(i for i in range(n) if m >> i & 1) for m in found]
    cliques.sort()
    return [tuple(g.vertices[i] for i in c) for c in cliques]


class SpeckerVerdict(NamedTuple):
    holds: bool
    witness: Optional[tuple[str, ...]]


def structural_specker_check(s: ContextualityScenario) -> SpeckerVerdict:
    """Is every maximal clique of the orthogonality graph inside some hyperedge?"""
    edge_sets = [frozenset(e) for e in s.hyperedges]
    for c in maximal_cliques(orthogonality_graph(s)):
        cs = frozenset(c)
        if not any(cs <= e for e in edge_sets):
            return SpeckerVerdict(False, c)
    return SpeckerVerdict(True, None)


def nd_vertex_id(clique: Sequence[str]) -> str:
    """Identifier of the no-detection vertex attached to ``clique``."""
    return ND_PREFIX + "+".join(clique)


def uncovered_cliques(s: ContextualityScenario) -> list[tuple[str, ...]]:
    """Maximal cliques of the orthogonality graph that are not hyperedges."""
    edge_sets = {frozenset(e) for e in s.hyperedges}
    return [c for c in maximal_cliques(orthogonality_graph(s)) if frozenset(c) not in edge_sets]


def specker_extension(s: ContextualityScenario) -> ContextualityScenario:
    """Promote each uncovered maximal clique ``c`` to a hyperedge ``c ∪ {v_c}``.

    The result satisfies the structural Specker property.  Returns ``s`` itself
    when every maximal clique is already a hyperedge.
    """
    extra = uncovered_cliques(s)
    if not extra:
        return s
    new_vertices = list(s.vertices) + [nd_vertex_id(c) for c in extra]
    new_edges = list(s.hyperedges) + [tuple(c) + (nd_vertex_id(c),) for c in extra]
    return _build(new_vertices, new_edges, require_sperner=False)


class GammaG(NamedTuple):
    """No-detection hypergraph of a weighted graph, with vertex roles."""

    scenario: ContextualityScenario
    roles: dict[str, str]
    graph: WeightedGraph


def build_gamma_g(g: WeightedGraph) -> GammaG:
    """Every maximal clique ``c`` of ``g`` becomes a hyperedge ``c ∪ {nd:c}``."""
    cliques = maximal_cliques(g.graph)
    nd = [nd_vertex_id(c) for c in cliques]
    scenario = validate_scenario(
        list(g.vertices) + nd, [tuple(c) + (v,) for c, v in zip(cliques, nd)]
    )
    roles = {v: "event" for v in g.vertices}
    roles.update({v: "no-detection" for v in nd})
    return GammaG(scenario, roles, g)


def build_sigma_g(gamma_g: ContextualityScenario) -> SourceScenario:
    """Source hypergraph paired with ``gamma_g`` (one setting per hyperedge plus a star setting)."""
    settings, paired = [], []
    for k, e in enumerate(gamma_g.hyperedges, start=1):
        events = tuple(f"{v}@e{k}" for v in gamma_g.vertices)
        settings.append(events)
        paired.append({v: f"{v}@e{k}" for v in e})
    return SourceScenario(tuple(settings), tuple(paired))


# ---------------------------------------------------------------------------
# graphs
# ---------------------------------------------------------------------------


def weighted_graph(
    vertices: Sequence[str], edges: Iterable[Sequence[str]], weights: Optional[Mapping[str, object]] = None
) -> WeightedGraph:
    """Standalone weighted graph (unit weights by default)."""
    g = OrthoGraph.from_edges(vertices, edges)
    w = {v: Fraction(1) for v in g.vertices} if weights is None else dict(weights)
    return WeightedGraph(g, w)


def weighted_subgraph(
    s: ContextualityScenario, vertices: Sequence[str], weights: Optional[Mapping[str, object]] = None
) -> WeightedGraph:
    """The induced subgraph of the orthogonality graph of ``s`` on ``vertices``."""
    g = orthogonality_graph(s).induced(vertices)
    w = {v: Fraction(1) for v in g.vertices} if weights is None else dict(weights)
    return WeightedGraph(g, w)


def cycle_graph(n: int, prefix: str = "v") -> WeightedGraph:
    vs = [f"{prefix}{i}" for i in range(1, n + 1)]
    return weighted_graph(vs, [(vs[i], vs[(i + 1) % n]) for i in range(n)])


def complete_graph(n: int, prefix: str = "v") -> WeightedGraph:
    vs = [f"{prefix}{i}" for i in range(1, n + 1)]
    return weighted_graph(vs, [(vs[i], vs[j]) for i in range(n) for j in range(i + 1, n)])


# ---------------------------------------------------------------------------
# library
# ---------------------------------------------------------------------------


class LibraryEntry(NamedTuple):
    scenario: ContextualityScenario
    graph: Optional[WeightedGraph]


def load_cega18_data() -> dict:
    text = resources.files("nctx.data").joinpath("cega18.json").read_text(encoding="utf-8")
    return json.loads(text)


def _kcbs_gamma() -> ContextualityScenario:
    """Five binary measurements; neighbours are jointly measurable with 4 outcomes.

    ``v_i`` is the event "outcome 1 of M_i", shared by the two joint
    measurements that contain ``M_i``.  Joint measurement ``i`` (of ``M_i`` and
    ``M_{i+1}``) has outcomes ``v_i`` (10), ``v_{i+1}`` (01), ``n_i`` (00) and
    the never-occurring ``z_i`` (11).  ``c_i`` is "outcome 0 of M_i".
    """
    v = [f"v{i}" for i in range(1, 6)]
    vertices = v + [f"n{i}" for i in range(1, 6)] + [f"z{i}" for i in range(1, 6)] + [f"c{i}" for i in range(1, 6)]
    edges = [(v[i], v[(i + 1) % 5], f"n{i + 1}", f"z{i + 1}") for i in range(5)]
    edges += [(v[i], f"c{i + 1}") for i in range(5)]
    return validate_scenario(vertices, edges)


def _n_cycle(n: int) -> LibraryEntry:
    if n < 3:
        raise UnknownName(f"n_cycle needs n >= 3, got {n}")
    g = cycle_graph(n)
    s = validate_scenario(g.vertices, g.graph.sorted_edges())
    return LibraryEntry(s, g)


def _chsh_4cycle() -> LibraryEntry:
    """Four binary observables A0, B0, A1, B1 in a 4-cycle of joint measurability.

    Vertex ``"ab|xy"`` is outcome ``(a, b)`` of the joint measurement of ``A_x``
    and ``B_y``.  Besides the four joint measurements, the hyperedges include
    the eight "adaptive" measurements in which the choice of one observable
    depends on the outcome of the other; together they encode that the marginal
    of each observable does not depend on its partner.  The graph is the set of
    eight events with ``a ⊕ b = x·y`` (the CHSH winning events), unit weights.
    """
    bits = (0, 1)
    name = lambda a, b, x, y: f"{a}{b}|{x}{y}"
    vertices = [name(a, b, x, y) for x in bits for y in bits for a in bits for b in bits]
    edges = [[name(a, b, x, y) for a in bits for b in bits] for x in bits for y in bits]
    for x in bits:
        for ys in ((0, 1), (1, 0)):
            edges.append([name(a, b, x, ys[a]) for a in bits for b in bits])
    for y in bits:
        for xs in ((0, 1), (1, 0)):
            edges.append([name(a, b, xs[b], y) for a in bits for b in bits])
    s = validate_scenario(vertices, edges)
    winning = [v for v in vertices if (int(v[0]) ^ int(v[1])) == int(v[3]) * int(v[4])]
    return LibraryEntry(s, weighted_subgraph(s, winning))


def _cega_18() -> ContextualityScenario:
    data = load_cega18_data()
    return validate_scenario(data["labels"], [list(b) for b in data["bases"]])


def _cega_27() -> ContextualityScenario:
    base = _cega_18()
    nd = [nd_vertex_id(e) for e in base.hyperedges]
    return validate_scenario(list(base.vertices) + nd, [e + (v,) for e, v in zip(base.hyperedges, nd)])


LIBRARY_NAMES = ("kcbs_gamma", "kcbs_g", "kcbs_gamma_g", "n_cycle(n)", "cega_18", "cega_27", "chsh_4cycle", "chsh_gamma_g")


def library_scenario(name: str) -> LibraryEntry:
    """Built-in scenarios.

    ``kcbs_g`` returns the 20-vertex KCBS hypergraph together with its 5-cycle
    of "outcome 1" events; ``kcbs_gamma_g`` the no-detection hypergraph of that
    5-cycle; ``n_cycle(n)`` (also ``n_cycle:n``) an ``n``-cycle drawn as a
    hypergraph of two-outcome measurements together with its cycle graph;
    ``chsh_4cycle`` the CHSH experiment viewed as a 4-cycle of jointly
    measurable observables, with the 8-event CHSH graph; ``chsh_gamma_g`` the
    no-detection hypergraph of that CHSH graph (home of the PR box).
    """
    key = name.strip()
    if key == "kcbs_gamma":
        return LibraryEntry(_kcbs_gamma(), None)
    if key == "kcbs_g":
        s = _kcbs_gamma()
        return LibraryEntry(s, weighted_subgraph(s, [f"v{i}" for i in range(1, 6)]))
    if key == "kcbs_gamma_g":
        gg = build_gamma_g(cycle_graph(5))
        return LibraryEntry(gg.scenario, gg.graph)
    if key == "chsh_4cycle":
        return _chsh_4cycle()
    if key == "chsh_gamma_g":
        gg = build_gamma_g(_chsh_4cycle().graph)
        return LibraryEntry(gg.scenario, gg.graph)
    if key == "cega_18":
        return LibraryEntry(_cega_18(), None)
    if key == "cega_27":
        return LibraryEntry(_cega_27(), None)
    for sep_open, sep_close in (("n_cycle(", ")"), ("n_cycle:", "")):
        if key.startswith(sep_open) and key.endswith(sep_close):
            inner = key[len(sep_open): len(key) - len(sep_close)]
            try:
                n = int(inner)
            except ValueError:
                break
            return _n_cycle(n)
    raise UnknownName(f"unknown library scenario {name!r}; known: {', '.join(LIBRARY_NAMES)}")


def event_vertices(s: ContextualityScenario) -> list[str]:
    """Vertices that are not no-detection vertices (by id prefix)."""
    return [v for v in s.vertices if not v.startswith(ND_PREFIX)]
