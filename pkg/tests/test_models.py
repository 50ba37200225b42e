"""Probabilistic models, their polytopes and the classes C ⊆ CE¹ ⊆ G."""

import itertools
import random
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nctx.errors import EmptyClass, NegativeProbability, NormalizationFailure, NotInCE1, UnknownVertex
from nctx.models import (
    CLASSES,
    ModelClass,
    ce1_bijection_back,
    ce1_bijection_forward,
    ce1_extremal_points,
    cega_expression_weights,
    check_model,
    classify_extremal,
    classify_model,
    deterministic_models,
    extremal_points,
    in_ce1,
    in_classical,
    is_extremal,
    ks_colourable,
    max_expression,
    random_mixture,
)
from nctx.scenario import build_gamma_g, cycle_graph, library_scenario, orthogonality_graph, specker_extension

from oracles import basic_feasible_solutions, nx_graph, scenario_equalities, scipy_linprog_max

F = Fraction
SMALL = ["kcbs_gamma_g", "n_cycle(4)", "n_cycle(5)", "n_cycle(7)"]


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


def test_check_model_accepts_mapping_and_sequence():
    s = library_scenario("n_cycle(4)").scenario
    m = check_model(s, {v: "1/2" for v in s.vertices})
    assert m["v1"] == F(1, 2) and not m.is_deterministic
    assert check_model(s, [F(1, 2)] * 4) == m


def test_check_model_errors():
    s = library_scenario("n_cycle(4)").scenario
    with pytest.raises(NegativeProbability):
        check_model(s, [F(3, 2), F(-1, 2), F(3, 2), F(-1, 2)])
    with pytest.raises(NormalizationFailure) as info:
        check_model(s, [F(1, 2), F(1, 2), F(1, 2), F(1, 3)])
    assert info.value.total != 1
    with pytest.raises(UnknownVertex):
        check_model(s, {"v1": 1})
    with pytest.raises(UnknownVertex):
        check_model(s, {**{v: F(1, 2) for v in s.vertices}, "zz": 0})


# ---------------------------------------------------------------------------
# deterministic models
# ---------------------------------------------------------------------------


def _brute_deterministic(s):
    out = []
    for bits in itertools.product((0, 1), repeat=s.n_vertices):
        if all(sum(bits[s.index[v]] for v in e) == 1 for e in s.hyperedges):
            out.append(tuple(F(b) for b in bits))
    return sorted(out)


@pytest.mark.parametrize("name", SMALL + ["chsh_4cycle"])
def test_deterministic_models_match_brute_force(name):
    s = library_scenario(name).scenario
    assert deterministic_models(s) == _brute_deterministic(s)


def test_cega27_deterministic_models_are_independent_sets_of_cega18():
    # a 0/1 model of the no-detection scenario picks at most one ray per basis,
    # i.e. an independent set of the 18-ray orthogonality graph
    s18 = library_scenario("cega_18").scenario
    complement = nx.complement(nx_graph(orthogonality_graph(s18)))
    n_independent = 1 + sum(1 for _ in nx.enumerate_all_cliques(complement))
    assert len(deterministic_models(library_scenario("cega_27").scenario)) == n_independent == 370


def test_ks_colourability():
    assert not ks_colourable(library_scenario("cega_18").scenario).colourable
    col = ks_colourable(library_scenario("cega_27").scenario)
    assert col.colourable and col.model.is_deterministic
    assert not ks_colourable(library_scenario("n_cycle(5)").scenario).colourable  # odd cycle of 2-outcome tests
    assert ks_colourable(library_scenario("n_cycle(4)").scenario).colourable


# ---------------------------------------------------------------------------
# extremal points
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", SMALL)
def test_extremal_points_match_basic_feasible_solutions(name):
    s = library_scenario(name).scenario
    A, b = scenario_equalities(s)
    assert set(extremal_points(s)) == basic_feasible_solutions(A, b, s.n_vertices)


def test_kcbs_gamma_g_polytope():
    s = build_gamma_g(cycle_graph(5)).scenario
    part = classify_extremal(s, extremal_points(s))
    assert len(part.deterministic) == 11
    assert part.indeterministic == [(F(1, 2),) * 5 + (F(0),) * 5]


def test_even_cycle_gamma_g_has_no_indeterministic_points():
    s = build_gamma_g(cycle_graph(4)).scenario
    assert classify_extremal(s, extremal_points(s)).indeterministic == []


@pytest.mark.parametrize("name", ["chsh_gamma_g", "cega_27"])
def test_extremal_points_are_complete(name, extremal_cache):
    """Every random linear objective attains its LP maximum at a listed vertex."""
    s = library_scenario(name).scenario
    pts, part = extremal_cache(name)
    assert len(part.deterministic) == len(deterministic_models(s))
    A, b = scenario_equalities(s)
    rng = np.random.default_rng(7)
    P = np.array([[float(x) for x in p] for p in pts])
    for _ in range(25):
        c = rng.normal(size=s.n_vertices)
        ref = scipy_linprog_max(c, A_eq=A, b_eq=b)
        assert (P @ c).max() == pytest.approx(-ref.fun, abs=1e-8)
    for p in pts[:: max(1, len(pts) // 60)]:
        assert is_extremal(s, p)


def test_cega27_vertex_counts(extremal_cache):
    pts, part = extremal_cache("cega_27")
    assert (len(pts), len(part.deterministic), len(part.indeterministic)) == (996, 370, 626)


def test_is_extremal():
    s = build_gamma_g(cycle_graph(5)).scenario
    half = (F(1, 2),) * 5 + (F(0),) * 5
    assert is_extremal(s, half)
    mix = tuple((a + b) / 2 for a, b in zip(half, deterministic_models(s)[0]))
    assert not is_extremal(s, mix)


# ---------------------------------------------------------------------------
# classes
# ---------------------------------------------------------------------------


def test_classical_membership_matches_scipy():
    s = build_gamma_g(cycle_graph(5)).scenario
    det = deterministic_models(s)
    rng = random.Random(3)
    ext = extremal_points(s)
    D = np.array([[float(x) for x in d] for d in det]).T
    for _ in range(15):
        m = check_model(s, random_mixture(ext, rng, terms=3))
        ours = in_classical(s, m, det)
        ref = scipy_linprog_max(
            np.zeros(len(det)), A_eq=np.vstack([D, np.ones(len(det))]), b_eq=[float(x) for x in m.values] + [1]
        )
        assert ours.member == (ref.status == 0)
        if ours.member:
            recon = [sum(w * det[j][i] for j, w in ours.weights.items()) for i in range(s.n_vertices)]
            assert tuple(recon) == m.values


def test_classify_model_flags():
    s = build_gamma_g(cycle_graph(5)).scenario
    half = check_model(s, (F(1, 2),) * 5 + (F(0),) * 5)
    flags = classify_model(s, half)
    assert flags == ModelClass(False, True, False, True, True)
    det = check_model(s, deterministic_models(s)[0])
    assert classify_model(s, det) == ModelClass(True, False, True, True, True)
    with pytest.raises(AssertionError):
        ModelClass(False, False, True, False)


def test_ce1_violation_is_reported_with_a_clique():
    s = library_scenario("cega_18").scenario
    w = {"1": 1, "2": 1, "3": 1}
    best = max(extremal_points(s), key=lambda p: sum(p[s.index[v]] for v in w))
    verdict = in_ce1(s, check_model(s, best))
    assert not verdict.member and sum(best[s.index[v]] for v in verdict.violating_clique) > 1


# ---------------------------------------------------------------------------
# CE¹(Γ) ↔ G(Γ′)
# ---------------------------------------------------------------------------


def test_ce1_bijection_on_vertices():
    s = library_scenario("cega_18").scenario
    ext = specker_extension(s)
    ce1 = ce1_extremal_points(s)
    images = set()
    for p in ce1:
        m = check_model(s, p)
        fwd = ce1_bijection_forward(s, m)
        assert fwd.scenario == ext
        assert ce1_bijection_back(s, fwd) == m
        images.add(fwd.values)
    assert images == set(extremal_points(ext))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_ce1_bijection_on_random_mixtures(seed):
    s = library_scenario("cega_18").scenario
    ce1 = ce1_extremal_points(s)
    m = check_model(s, random_mixture(ce1, random.Random(seed), terms=5))
    assert in_ce1(s, m).member
    assert ce1_bijection_back(s, ce1_bijection_forward(s, m)) == m


def test_forward_map_rejects_non_ce1_models():
    s = library_scenario("cega_18").scenario
    w = {"1": 1, "2": 1, "3": 1}
    best = max(extremal_points(s), key=lambda p: sum(p[s.index[v]] for v in w))
    with pytest.raises(NotInCE1):
        ce1_bijection_forward(s, check_model(s, best))


# ---------------------------------------------------------------------------
# linear expressions
# ---------------------------------------------------------------------------


def test_cega_expression_table():
    s = library_scenario("cega_27").scenario
    det = deterministic_models(s)
    table = {
        name: tuple(max_expression(s, w, c, deterministic=det) for c in CLASSES)
        for name, w in cega_expression_weights(s).items()
    }
    assert table == {
        "Expr1": (8, 9, 9),
        "Expr2": (1, 1, F(3, 2)),
        "Expr3": (9, 10, F(21, 2)),
    }


def test_empty_classical_class():
    s = library_scenario("cega_18").scenario
    with pytest.raises(EmptyClass):
        max_expression(s, {"1": 1}, "C")
    with pytest.raises(ValueError):
        max_expression(s, {"1": 1}, "Q")


@pytest.mark.parametrize("name", SMALL + ["cega_18"])
def test_max_expression_matches_vertex_scan(name):
    s = library_scenario(name).scenario
    rng = random.Random(name)
    pts = extremal_points(s)
    ce1 = ce1_extremal_points(s)
    for _ in range(5):
        w = {v: F(rng.randint(-3, 6), rng.randint(1, 3)) for v in s.vertices}
        vec = [w[v] for v in s.vertices]
        assert max_expression(s, w, "G") == max(sum(a * b for a, b in zip(vec, p)) for p in pts)
        assert max_expression(s, w, "CE1") == max(sum(a * b for a, b in zip(vec, p)) for p in ce1)


def test_chsh_scenario_is_the_no_signalling_polytope():
    # two-party, two-setting, two-outcome no-signalling polytope: 16 local
    # deterministic boxes and 8 PR boxes (entries 0 or 1/2)
    s = library_scenario("chsh_4cycle").scenario
    part = classify_extremal(s, extremal_points(s))
    assert len(part.deterministic) == 16
    assert len(part.indeterministic) == 8
    assert all(set(p) == {F(0), F(1, 2)} for p in part.indeterministic)
