"""Noise-robust noncontextuality inequalities and their worked examples.

With ``Δ = α* − α``, the three equivalent forms of the inequality are

    NCI1:  Corr ≤ 1 − p₀(1−β)(R−α)/Δ
    NCI2:  R    ≤ α + (Δ/p₀)(1−Corr)/(1−β)
    NCI3:  Corr + p₀(1−β)(R−α)/Δ ≤ 1

and a violation requires p₀ > 0, β < 1, R > α and Corr > 1 − p₀(1−β).
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DecompositionFailure, DegenerateInvariants, Infeasible
from .invariants import InvariantBundle, compute_invariants
from .models import Point, ProbModel, extremal_points
from .quantum import born_table, compute_corr, compute_r, kcbs_realization, trivial_povm_realization
from .rational import fmt_number
from .scenario import ContextualityScenario, WeightedGraph, build_gamma_g, cycle_graph
from .solvers import HRepPolytope, RationalLP, enumerate_vertices, lp_solve

Number = float | Fraction


class Verdict(str, Enum):
    VIOLATION = "Violation"
    NO_VIOLATION = "NoViolation"
    TRIVIAL_BOUND = "TrivialBound"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class NCIReport:
    corr: Number
    r_value: Number
    p0: Number
    invariants: InvariantBundle
    lhs_nci3: Optional[Number]
    bound_nci1: Optional[Number]
    bound_nci2: Optional[Number]
    witness: Verdict
    conditions: dict[str, bool] = field(default_factory=dict)

    def to_dict(self) -> dict:
        num = lambda x: None if x is None else (fmt_number(x) if isinstance(x, Fraction) else float(x))
        return {
            "corr": num(self.corr),
            "R": num(self.r_value),
            "p0": num(self.p0),
            "invariants": self.invariants.to_dict(),
            "lhs_nci3": num(self.lhs_nci3),
            "bound_nci1": num(self.bound_nci1),
            "bound_nci2": None if self.bound_nci2 is None or self.bound_nci2 == math.inf else num(self.bound_nci2),
            "witness": str(self.witness),
            "conditions": dict(self.conditions),
        }


def _is_exact(*xs) -> bool:
    return all(isinstance(x, (Fraction, int)) for x in xs)


def evaluate_nci(corr: Number, r_value: Number, p0: Number, inv: InvariantBundle) -> NCIReport:
    """Evaluate all three forms of the inequality and the violation conditions.

    Exact rational inputs give exact outputs.  ``LHS = 1`` is not a violation.
    When β is undefined (no indeterministic extremal points) or β ≥ 1 the
    verdict is ``TrivialBound``.
    """
    alpha, alpha_star, beta = inv.alpha, inv.alpha_star, inv.beta
    if alpha_star == alpha:
        raise DegenerateInvariants(f"α* = α = {alpha}: the inequality is undefined")
    exact = _is_exact(corr, r_value, p0) and beta is not None
    p0_given = p0
    if not exact:
        corr, r_value, p0 = float(corr), float(r_value), float(p0)
        alpha, alpha_star = float(alpha), float(alpha_star)
        beta = None if beta is None else float(beta)
    delta = alpha_star - alpha
    if beta is None:
        conditions = {"p0>0": p0 > 0, "beta<1": False, "R>alpha": r_value > alpha, "corr>1-p0(1-beta)": False}
        return NCIReport(corr, r_value, p0_given, inv, None, None, None, Verdict.TRIVIAL_BOUND, conditions)
    slack = p0 * (1 - beta) * (r_value - alpha) / delta
    lhs = corr + slack
    bound1 = 1 - slack
    if p0 > 0 and beta < 1:
        bound2 = alpha + delta / p0 * (1 - corr) / (1 - beta)
    else:
        bound2 = math.inf
    conditions = {
        "p0>0": p0 > 0,
        "beta<1": beta < 1,
        "R>alpha": r_value > alpha,
        "corr>1-p0(1-beta)": corr > 1 - p0 * (1 - beta),
    }
    if beta >= 1:
        verdict = Verdict.TRIVIAL_BOUND
    elif lhs > 1 and all(conditions.values()):
        verdict = Verdict.VIOLATION
    else:
        verdict = Verdict.NO_VIOLATION
    return NCIReport(corr, r_value, p0_given, inv, lhs, bound1, bound2, verdict, conditions)


def form_verdicts(report: NCIReport) -> dict[str, bool]:
    """Whether each of the three forms is violated (they must agree)."""
    if report.lhs_nci3 is None:
        return {"NCI1": False, "NCI2": False, "NCI3": False}
    return {
        "NCI1": report.corr > report.bound_nci1,
        "NCI2": report.r_value > report.bound_nci2,
        "NCI3": report.lhs_nci3 > 1,
    }


def saturation_ledger(report: NCIReport) -> Number:
    """``(α*−α)Corr + p₀(1−β)R − [(α*−α) + p₀α(1−β)]``; zero exactly on the boundary."""
    inv = report.invariants
    if inv.beta is None:
        raise DegenerateInvariants("β is undefined; there is no saturation identity")
    if _is_exact(report.corr, report.r_value, report.p0):
        a, ast, b = inv.alpha, inv.alpha_star, inv.beta
        c, r, p0 = report.corr, report.r_value, report.p0
    else:
        a, ast, b = float(inv.alpha), float(inv.alpha_star), float(inv.beta)
        c, r, p0 = float(report.corr), float(report.r_value), float(report.p0)
    return (ast - a) * c + p0 * (1 - b) * r - ((ast - a) + p0 * a * (1 - b))


# ---------------------------------------------------------------------------
# KCBS
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Threshold:
    product: float
    corr: float
    product_expression: str = "1 - (sqrt(5) - 2)/(sqrt(5) + 1/3)"
    corr_expression: str = "1/3 + (2/3)*(1 - (sqrt(5) - 2)/(sqrt(5) + 1/3))"

    def __str__(self) -> str:
        return f"r1*r2 > {self.product:.6g}  [{self.product_expression}];  Corr > {self.corr:.6g}"


def violation_threshold_kcbs() -> Threshold:
    """Noise threshold on ``r₁r₂`` (and on Corr) below which KCBS data cannot violate."""
    s5 = math.sqrt(5)
    t = 1 - (s5 - 2) / (s5 + 1 / 3)
    return Threshold(t, 1 / 3 + 2 / 3 * t)


_KCBS_CACHE: dict = {}


def kcbs_invariants() -> InvariantBundle:
    """Invariants of the KCBS 5-cycle with uniform q (cached)."""
    if "inv" not in _KCBS_CACHE:
        gg = build_gamma_g(cycle_graph(5))
        _KCBS_CACHE["inv"] = compute_invariants(gg.scenario, gg.graph)
    return _KCBS_CACHE["inv"]


def kcbs_report(r1: float, r2: float, inv: Optional[InvariantBundle] = None) -> NCIReport:
    """Born data of the depolarized KCBS realization, evaluated against the inequality."""
    real = kcbs_realization(r1, r2)
    table = born_table(real)
    inv = inv or kcbs_invariants()
    corr = compute_corr(table, inv.q_used)
    r_value = compute_r(table, cycle_graph(5))
    return evaluate_nci(corr, r_value, table.p0, inv)


@dataclass(frozen=True)
class SweepRow:
    r1: float
    r2: float
    report: NCIReport

    def csv_fields(self) -> list[str]:
        rep = self.report
        return [
            f"{self.r1:.12g}",
            f"{self.r2:.12g}",
            f"{float(rep.corr):.12g}",
            f"{float(rep.r_value):.12g}",
            f"{float(rep.lhs_nci3):.12g}",
            str(rep.witness),
        ]


SWEEP_HEADER = ["r1", "r2", "corr", "R", "lhs", "verdict"]


def kcbs_sweep(steps: int, lo: float = 0.0, hi: float = 1.0) -> list[SweepRow]:
    """Evenly spaced products ``t = r₁r₂`` in ``[lo, hi]`` with ``r₁ = r₂ = √t``."""
    if steps < 2:
        raise ValueError("a sweep needs at least 2 steps")
    inv = kcbs_invariants()

    def row(i: int) -> SweepRow:
        r = math.sqrt(lo + (hi - lo) * i / (steps - 1))
        return SweepRow(r, r, kcbs_report(r, r, inv))

    # rows are independent; map() keeps grid order so the output is deterministic
    with ThreadPoolExecutor() as pool:
        return list(pool.map(row, range(steps)))


# ---------------------------------------------------------------------------
# fair coin flip
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FcfBound:
    value: Fraction
    vertex: Point
    vertices: tuple[Point, ...]


def fcf_objective(xi: Sequence[Fraction]) -> Fraction:
    """``(1/3) Σ_i max(ξ_i, 1 − ξ_i)`` — the best predictability of each response."""
    return sum((max(x, 1 - x) for x in xi), Fraction(0)) / 3


def fcf_bound() -> FcfBound:
    """Maximize the response predictability over ``{ξ ∈ [0,1]³ : (1/3)Σ ξ_i = 1/2}``.

    The objective is convex, so its maximum is attained at a vertex; the
    polytope's vertices are enumerated exactly.  Among maximizers the
    lexicographically largest vertex is returned.
    """
    poly = HRepPolytope.box(3, A_eq=[[1, 1, 1]], b_eq=[Fraction(3, 2)])
    verts = enumerate_vertices(poly)
    best = max(fcf_objective(v) for v in verts)
    arg = max(v for v in verts if fcf_objective(v) == best)
    return FcfBound(best, arg, tuple(verts))


# ---------------------------------------------------------------------------
# trivial POVMs
# ---------------------------------------------------------------------------

P0_GRID = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1))


@dataclass(frozen=True)
class TrivialPovmCertificate:
    weight_deterministic: Fraction
    weight_indeterministic: Fraction
    decomposition: dict[int, Fraction]
    corr_bound: Fraction
    r_bound: Fraction
    reports: tuple[tuple[Fraction, Verdict], ...]
    observed: tuple[tuple[Fraction, Verdict], ...]
    verdict: Verdict
    method: str = "NCI3"


def decompose_model(
    s: ContextualityScenario, m: ProbModel, extremal: Optional[Sequence[Point]] = None
) -> tuple[Fraction, Fraction, dict[int, Fraction], list[Point]]:
    """Write ``m`` as a mixture of extremal points, maximizing the deterministic weight."""
    pts = list(extremal) if extremal is not None else extremal_points(s)
    det_flags = [all(x in (0, 1) for x in p) for p in pts]
    k = len(pts)
    A = [[p[i] for p in pts] for i in range(s.n_vertices)] + [[1] * k]
    b = list(m.values) + [1]
    try:
        res = lp_solve(RationalLP([int(f) for f in det_flags], A_eq=A, b_eq=b))
    except Infeasible as exc:
        raise DecompositionFailure(f"model is not a mixture of the given extremal points: {exc}") from exc
    w_det = sum((w for w, f in zip(res.x, det_flags) if f), Fraction(0))
    weights = {j: w for j, w in enumerate(res.x) if w}
    return w_det, 1 - w_det, weights, pts


def certify_trivial_povm(
    s: ContextualityScenario,
    m: ProbModel,
    inv: InvariantBundle,
    graph: Optional[WeightedGraph] = None,
    extremal: Optional[Sequence[Point]] = None,
    q=None,
) -> TrivialPovmCertificate:
    """Check that trivial POVMs built from ``m`` cannot violate the inequality.

    Decomposes ``m`` over deterministic and indeterministic extremal points and
    bounds ``Corr ≤ Pr_det + Pr_ind β`` and ``R ≤ Pr_det α + Pr_ind α*``; the
    inequality is then evaluated at those bounds for p₀ ∈ {0, 1/4, 1/2, 3/4, 1}.
    When ``graph`` is given, the data of the actual trivial-POVM realization
    (identity-proportional effects, uniform priors) is evaluated as well.

    When α* = α the inequality is undefined; the check then falls back to the
    form ``R ≤ α`` that remains meaningful.
    """
    w_det, w_ind, weights, _ = decompose_model(s, m, extremal)
    beta = inv.beta if inv.beta is not None else Fraction(1)
    if w_ind and inv.beta is None:
        raise DecompositionFailure("indeterministic weight found although β is undefined")
    corr_bound = w_det + w_ind * beta
    r_bound = w_det * inv.alpha + w_ind * inv.alpha_star

    degenerate = inv.alpha_star == inv.alpha

    def verdict_at(corr, r_value, p0) -> Verdict:
        if degenerate:
            return Verdict.VIOLATION if r_value > inv.alpha else Verdict.NO_VIOLATION
        rep = evaluate_nci(corr, r_value, p0, inv)
        return rep.witness

    reports = tuple((p0, verdict_at(corr_bound, r_bound, p0)) for p0 in P0_GRID)
    observed = ()
    if graph is not None:
        obs = []
        for p0 in P0_GRID:
            t = born_table(trivial_povm_realization(s, m, p0=p0))
            obs.append((p0, verdict_at(compute_corr(t, q if q is not None else inv.q_used), compute_r(t, graph), t.p0)))
        observed = tuple(obs)
    bad = [v for _, v in reports + observed if v == Verdict.VIOLATION]
    verdict = Verdict.VIOLATION if bad else Verdict.NO_VIOLATION
    return TrivialPovmCertificate(
        w_det, w_ind, weights, corr_bound, r_bound, reports, observed, verdict,
        "R<=alpha" if degenerate else "NCI3",
    )


def random_model(s: ContextualityScenario, extremal: Sequence[Point], rng: random.Random, terms: int = 5) -> ProbModel:
    """A seeded random rational mixture of extremal points, as a validated model."""
    from .models import check_model, random_mixture

    return check_model(s, random_mixture(extremal, rng, terms))
