"""Quantum realizations, depolarizing noise and Born tables."""

import csv
import io
import math
import random
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nctx.errors import BadParameter, InvariantViolation, MissingPairing, MissingStarSource
from nctx.models import check_model, deterministic_models, extremal_points, random_mixture
from nctx.quantum import (
    KCBS_PSI,
    born_table,
    compute_corr,
    compute_r,
    depolarize_effect,
    depolarize_state,
    fcf_mixture_residuals,
    fcf_realization,
    kcbs_realization,
    kcbs_vectors,
    povm_residual,
    random_source_assignment,
    source_residual,
    trivial_povm_realization,
)
from nctx.scenario import build_gamma_g, cycle_graph

F = Fraction
unit = st.floats(0.0, 1.0, allow_nan=False)


def _random_state(d, rng):
    A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = A @ A.conj().T
    return rho / np.trace(rho).real


# ---------------------------------------------------------------------------
# channels
# ---------------------------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(unit, st.integers(2, 4), st.integers(0, 10_000))
def test_depolarizing_channel_properties(r, d, seed):
    rng = np.random.default_rng(seed)
    rho, sigma = _random_state(d, rng), _random_state(d, rng)
    out = depolarize_state(rho, r)
    assert np.trace(out).real == pytest.approx(1, abs=1e-12)
    assert np.linalg.eigvalsh(out).min() > -1e-12
    # the effect map is the adjoint: Tr(D(ρ) E) = Tr(ρ D†(E))
    E = sigma / np.linalg.eigvalsh(sigma).max()
    lhs = np.trace(depolarize_state(rho, r) @ E)
    rhs = np.trace(rho @ depolarize_effect(E, r))
    assert lhs == pytest.approx(rhs, abs=1e-12)
    assert np.allclose(depolarize_effect(np.eye(d), r), np.eye(d))


def test_depolarizing_endpoints_and_errors():
    rho = np.diag([1.0, 0.0])
    assert np.allclose(depolarize_state(rho, 1), rho)
    assert np.allclose(depolarize_state(rho, 0), np.eye(2) / 2)
    for bad in (-0.1, 1.5, float("nan")):
        with pytest.raises(BadParameter):
            depolarize_state(rho, bad)


# ---------------------------------------------------------------------------
# KCBS
# ---------------------------------------------------------------------------


def test_kcbs_vectors_geometry():
    ls = kcbs_vectors()
    for i in range(5):
        assert abs(np.vdot(ls[i], ls[i])) == pytest.approx(1, abs=1e-12)
        assert abs(np.vdot(ls[i], ls[(i + 1) % 5])) < 1e-12
        assert abs(np.vdot(KCBS_PSI, ls[i])) ** 2 == pytest.approx(1 / math.sqrt(5), abs=1e-12)


def test_noiseless_kcbs_realization_is_consistent():
    r = kcbs_realization(1, 1)
    r.check()
    assert povm_residual(r) < 1e-12 and source_residual(r) < 1e-12
    t = born_table(r)
    assert t.p0 == F(1, 3)
    assert compute_corr(t) == pytest.approx(1, abs=1e-12)
    assert compute_r(t, cycle_graph(5)) == pytest.approx(math.sqrt(5), abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(unit, unit)
def test_kcbs_closed_forms(r1, r2):
    t = born_table(kcbs_realization(r1, r2))
    x = r1 * r2
    assert compute_corr(t) == pytest.approx(1 / 3 + 2 / 3 * x, abs=1e-12)
    assert compute_r(t, cycle_graph(5)) == pytest.approx(x * math.sqrt(5) + 5 / 3 * (1 - x), abs=1e-12)


def test_born_tables_are_normalized_per_setting():
    t = born_table(kcbs_realization(0.7, 0.4))
    for table in t.joint:
        assert sum(table.values()) == pytest.approx(1, abs=1e-12)
        assert min(table.values()) >= 0


# ---------------------------------------------------------------------------
# fair coin flip
# ---------------------------------------------------------------------------


def test_trine_realization():
    r = fcf_realization()
    r.check()
    assert compute_corr(born_table(r)) == pytest.approx(1, abs=1e-12)
    assert max(fcf_mixture_residuals(r).values()) < 1e-12
    with pytest.raises(MissingStarSource):
        compute_r(born_table(r), cycle_graph(3))


# ---------------------------------------------------------------------------
# trivial POVMs
# ---------------------------------------------------------------------------


def test_trivial_povm_tables_are_exact():
    gg = build_gamma_g(cycle_graph(5))
    m = check_model(gg.scenario, (F(1, 2),) * 5 + (F(0),) * 5)
    t = born_table(trivial_povm_realization(gg.scenario, m, p0=F(1, 4)))
    assert t.exact and t.p0 == F(1, 4)
    assert compute_corr(t) == F(1, 3)  # Σ_e q_e Σ_v p(v)/3 = (1/2 + 1/2 + 0)/3
    assert compute_r(t, gg.graph) == F(5, 2)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 3))
def test_trivial_povm_corr_depends_only_on_priors(seed, dim):
    gg = build_gamma_g(cycle_graph(5))
    s = gg.scenario
    rng = random.Random(seed)
    m = check_model(s, random_mixture(extremal_points(s), rng, terms=3))
    sources, star = random_source_assignment(s, dim, rng)
    real = trivial_povm_realization(s, m, sources=sources, star=star, dim=dim)
    real.check()
    t = born_table(real)
    expected = sum(
        float(F(1, 5)) * sum(float(m[v]) * float(sources[k][v][1]) for v in e) for k, e in enumerate(s.hyperedges)
    )
    assert compute_corr(t) == pytest.approx(expected, abs=1e-12)
    # R is blind to the star states: it is the expression value of the model
    assert compute_r(t, gg.graph) == pytest.approx(float(sum(m[v] for v in gg.graph.vertices)), abs=1e-12)


def test_trivial_povm_rejects_foreign_model():
    s5 = build_gamma_g(cycle_graph(5)).scenario
    s4 = build_gamma_g(cycle_graph(4)).scenario
    with pytest.raises(BadParameter):
        trivial_povm_realization(s5, check_model(s4, deterministic_models(s4)[0]))


# ---------------------------------------------------------------------------
# validation and export
# ---------------------------------------------------------------------------


def test_broken_realizations_name_the_failing_check():
    r = kcbs_realization(1, 1)
    bad_povm = dict(r.povm)
    bad_povm["v1"] = bad_povm["v1"] * 0.9
    with pytest.raises(InvariantViolation) as info:
        replace(r, povm=bad_povm).check()
    assert "completeness" in str(info.value) or "positivity" in str(info.value)
    assert info.value.residual > 0
    bad_sources = list(r.sources)
    first = dict(bad_sources[0])
    v = next(iter(first))
    first[v] = (np.diag([1, 0, 0]).astype(complex), first[v][1])
    bad_sources[0] = first
    with pytest.raises(InvariantViolation) as info:
        replace(r, sources=tuple(bad_sources)).check()
    assert "equivalence" in str(info.value)


def test_corr_pairing_errors():
    t = born_table(kcbs_realization(1, 1))
    with pytest.raises(MissingPairing):
        compute_corr(t, [F(1, 6)] * 6)


def test_data_table_csv():
    t = born_table(kcbs_realization(0.9, 0.8))
    rows = list(csv.reader(io.StringIO(t.to_csv())))
    assert rows[0] == ["hyperedge", "m", "s", "probability"]
    body = [r for r in rows[1:] if r[0] != "e*"]
    assert len(body) == 5 * 9
    star = [r for r in rows[1:] if r[0] == "e*"]
    assert star[0][:2] == ["e*", "p0"] and float(star[0][3]) == pytest.approx(1 / 3, abs=1e-12)
    for r in body:
        digits = r[3].replace("-", "").replace(".", "").split("e")[0].lstrip("0")
        assert len(digits) <= 12
    assert t.to_csv() == born_table(kcbs_realization(0.9, 0.8)).to_csv()
