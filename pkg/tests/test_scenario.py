"""Hypergraph validation, orthogonality graphs, cliques, Γ_G / Σ_G and the library."""

import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nctx.errors import (
    DanglingVertex,
    DuplicateHyperedge,
    DuplicateVertexId,
    EmptyHyperedge,
    NonPositiveWeight,
    SpernerViolation,
    TooLarge,
    UnknownName,
    UnknownVertex,
    ValidationError,
)
from nctx.scenario import (
    LIBRARY_NAMES,
    OrthoGraph,
    build_gamma_g,
    build_sigma_g,
    complete_graph,
    cycle_graph,
    library_scenario,
    load_cega18_data,
    maximal_cliques,
    nd_vertex_id,
    orthogonality_graph,
    specker_extension,
    structural_specker_check,
    uncovered_cliques,
    validate_scenario,
    weighted_graph,
)

from oracles import brute_cliques, nx_graph


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def test_valid_scenario_is_canonicalized():
    s = validate_scenario(["a", "b", "c"], [["b", "a"], ["c", "b"]])
    assert s.hyperedges == (("a", "b"), ("b", "c"))
    assert s.n_vertices == 3 and s.n_hyperedges == 2 and s.simple
    assert s.edges_containing("b") == [0, 1]


@pytest.mark.parametrize(
    "vertices, edges, err",
    [
        (["a", "b"], [[]], EmptyHyperedge),
        (["a", "b", "c"], [["a", "b"]], DanglingVertex),
        (["a", "b", "c"], [["a", "b"], ["a", "b", "c"]], SpernerViolation),
        (["a", "a"], [["a"]], DuplicateVertexId),
        (["a", "b"], [["a", "b"], ["b", "a"]], DuplicateHyperedge),
        (["a", "b"], [["a", "z"]], UnknownVertex),
        (["a", "b"], [["a", "a", "b"]], DuplicateVertexId),
    ],
)
def test_validation_errors(vertices, edges, err):
    with pytest.raises(err):
        validate_scenario(vertices, edges)


def test_validation_errors_are_value_errors():
    with pytest.raises(ValueError):
        validate_scenario(["a"], [[]])


def test_sperner_violation_names_both_hyperedges():
    with pytest.raises(SpernerViolation) as info:
        validate_scenario(["a", "b", "c"], [["a", "b"], ["a", "b", "c"]])
    assert info.value.smaller == ("a", "b") and info.value.larger == ("a", "b", "c")


def test_weights_must_be_positive():
    with pytest.raises(NonPositiveWeight):
        weighted_graph(["a", "b"], [["a", "b"]], {"a": 1, "b": 0})
    with pytest.raises(UnknownVertex):
        weighted_graph(["a", "b"], [["a", "b"]], {"a": 1})


# ---------------------------------------------------------------------------
# orthogonality graph and cliques
# ---------------------------------------------------------------------------


def test_orthogonality_graph_joins_co_occurring_events():
    s = validate_scenario(["a", "b", "c", "d"], [["a", "b", "c"], ["c", "d"]])
    g = orthogonality_graph(s)
    assert g.adjacent("a", "b") and g.adjacent("c", "d") and not g.adjacent("a", "d")
    assert g.degree("c") == 3


def test_maximal_cliques_canonical_order():
    g = OrthoGraph.from_edges(["a", "b", "c", "d"], [["a", "b"], ["b", "c"], ["a", "c"], ["c", "d"]])
    assert maximal_cliques(g) == [("a", "b", "c"), ("c", "d")]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.floats(0.0, 1.0), st.integers(0, 10_000))
def test_maximal_cliques_match_networkx(n, density, seed):
    rng = random.Random(seed)
    verts = [f"x{i}" for i in range(n)]
    edges = [(a, b) for i, a in enumerate(verts) for b in verts[i + 1:] if rng.random() < density]
    g = OrthoGraph.from_edges(verts, edges)
    ours = maximal_cliques(g)
    assert {frozenset(c) for c in ours} == brute_cliques(g)
    assert len(ours) == len(set(ours))


def test_clique_guard():
    g = OrthoGraph.from_edges([f"x{i}" for i in range(70)], [])
    with pytest.raises(TooLarge):
        maximal_cliques(g)


# ---------------------------------------------------------------------------
# structural Specker principle and extensions
# ---------------------------------------------------------------------------


def test_cega18_fails_and_its_extension_passes():
    s = library_scenario("cega_18").scenario
    verdict = structural_specker_check(s)
    assert not verdict.holds
    witness = frozenset(verdict.witness)
    assert not any(witness <= frozenset(e) for e in s.hyperedges)
    ext = specker_extension(s)
    assert structural_specker_check(ext).holds
    assert ext.n_vertices == s.n_vertices + len(uncovered_cliques(s))


def test_extension_of_a_specker_scenario_is_identity():
    s = library_scenario("n_cycle(5)").scenario
    assert structural_specker_check(s).holds
    assert specker_extension(s) is s


def test_extension_may_be_non_sperner():
    # the triangle a-b-c is covered pairwise but not by a single hyperedge
    s = validate_scenario(["a", "b", "c"], [["a", "b"], ["b", "c"], ["a", "c"]])
    ext = specker_extension(s)
    assert ext.hyperedges[-1] == ("a", "b", "c", nd_vertex_id(("a", "b", "c")))
    assert structural_specker_check(ext).holds


def test_cega18_orthogonality_graph_is_six_regular():
    s = library_scenario("cega_18").scenario
    g = orthogonality_graph(s)
    assert {g.degree(v) for v in s.vertices} == {6}
    assert len(g.edges) == 54


def test_cega18_rays_are_orthogonal_within_bases():
    data = load_cega18_data()
    rays = dict(zip(data["labels"], data["rays"]))
    for basis in data["bases"]:
        for i, a in enumerate(basis):
            for b in basis[i + 1:]:
                assert sum(x * y for x, y in zip(rays[a], rays[b])) == 0


# ---------------------------------------------------------------------------
# Γ_G and Σ_G
# ---------------------------------------------------------------------------


def test_gamma_g_of_five_cycle():
    gg = build_gamma_g(cycle_graph(5))
    s = gg.scenario
    assert s.n_vertices == 10 and s.n_hyperedges == 5
    assert all(len(e) == 3 for e in s.hyperedges)
    assert sum(r == "no-detection" for r in gg.roles.values()) == 5
    assert structural_specker_check(s).holds


def test_gamma_g_hyperedges_are_cliques_plus_one():
    g = complete_graph(4)
    gg = build_gamma_g(g)
    assert gg.scenario.hyperedges == (("v1", "v2", "v3", "v4", "nd:v1+v2+v3+v4"),)


@pytest.mark.parametrize("n, events", [(5, 52), (4, 34)])
def test_sigma_g_size(n, events):
    gg = build_gamma_g(cycle_graph(n)).scenario
    sigma = build_sigma_g(gg)
    assert sigma.n_settings == gg.n_hyperedges + 1
    assert sigma.n_events == gg.n_vertices * gg.n_hyperedges + 2 == events
    for k, e in enumerate(gg.hyperedges):
        assert set(sigma.paired[k]) == set(e)
        assert set(sigma.paired[k].values()) <= set(sigma.hyperedges[k])


# ---------------------------------------------------------------------------
# library
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", [n for n in LIBRARY_NAMES if n != "n_cycle(n)"] + ["n_cycle(6)", "n_cycle:3"])
def test_library_entries_validate(name):
    entry = library_scenario(name)
    s = entry.scenario
    again = validate_scenario(s.vertices, s.hyperedges) if s.simple else s
    assert again.hyperedges == s.hyperedges
    if entry.graph is not None:
        og = orthogonality_graph(s)
        for e in entry.graph.graph.edges:
            assert og.adjacent(*e)


def test_library_unknown_name():
    with pytest.raises(UnknownName):
        library_scenario("petersen")
    with pytest.raises(ValidationError):
        library_scenario("n_cycle(2)")


def test_kcbs_library_shapes():
    g = library_scenario("kcbs_g").graph
    assert nx.is_isomorphic(nx_graph(g), nx.cycle_graph(5))
    gamma = library_scenario("kcbs_gamma").scenario
    assert gamma.n_vertices == 20
    assert sorted(len(e) for e in gamma.hyperedges) == [2] * 5 + [4] * 5


def test_chsh_library_shapes():
    entry = library_scenario("chsh_4cycle")
    assert entry.scenario.n_vertices == 16 and entry.scenario.n_hyperedges == 12
    assert len(entry.graph.vertices) == 8
    gg = library_scenario("chsh_gamma_g").scenario
    assert gg.n_vertices == 20 and gg.n_hyperedges == 12
