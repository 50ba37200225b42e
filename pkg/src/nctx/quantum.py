"""Quantum realizations of measurement/source hypergraphs and their Born-rule data.

A realization assigns a positive operator to every measurement event and a
(state, prior) pair to every paired source event; the measurement for
hyperedge ``e_k`` is tested against the source setting with the same index.
"""

from __future__ import annotations

import csv
import io
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import BadParameter, InvariantViolation, MissingPairing, MissingStarSource
from .models import ProbModel
from .rational import to_fraction
from .scenario import (
    ContextualityScenario,
    WeightedGraph,
    build_gamma_g,
    cycle_graph,
    validate_scenario,
)

MAX_DIM = 16
HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-9
TRACE_TOL = 1e-10
EQUIV_TOL = 1e-9
CLAMP_TOL = 1e-12

Number = float | Fraction


# ---------------------------------------------------------------------------
# linear-algebra helpers
# ---------------------------------------------------------------------------


def ket(v: Sequence) -> np.ndarray:
    a = np.asarray(v, dtype=complex)
    return a / np.linalg.norm(a)


def projector(v: Sequence) -> np.ndarray:
    k = ket(v)
    return np.outer(k, k.conj())


def bloch_projector(n: Sequence[float]) -> np.ndarray:
    """Qubit projector ``(I + n·σ)/2`` for a unit Bloch vector ``n``."""
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    return (np.eye(2) + n[0] * sx + n[1] * sy + n[2] * sz) / 2


def hermiticity_residual(A: np.ndarray) -> float:
    return float(np.max(np.abs(A - A.conj().T))) if A.size else 0.0


def eigenvalues(A: np.ndarray) -> np.ndarray:
    """Eigenvalues of the Hermitian part of ``A`` (LAPACK tridiagonal reduction)."""
    return np.linalg.eigvalsh((A + A.conj().T) / 2)


def _check_r(r: float) -> float:
    r = float(r)
    if not (0.0 <= r <= 1.0) or math.isnan(r):
        raise BadParameter(f"noise parameter r = {r} must lie in [0, 1]")
    return r


def depolarize_state(rho: np.ndarray, r: float) -> np.ndarray:
    """``D_r(ρ) = r ρ + (1 − r) Tr(ρ) I/d``."""
    r = _check_r(r)
    d = rho.shape[0]
    return r * rho + (1 - r) * np.trace(rho) * np.eye(d) / d


def depolarize_effect(E: np.ndarray, r: float) -> np.ndarray:
    """Adjoint channel on effects: ``D_r†(E) = r E + (1 − r) Tr(E) I/d`` (identity-preserving)."""
    r = _check_r(r)
    d = E.shape[0]
    return r * E + (1 - r) * np.trace(E) * np.eye(d) / d


# ---------------------------------------------------------------------------
# realizations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuantumRealization:
    """Operators for a measurement hypergraph and its paired source settings.

    ``sources[k]`` maps each vertex of hyperedge ``k`` to the state and prior of
    the paired source event (events not listed have prior zero).  ``star`` is
    the pair ``((ρ_0, p_0), (ρ_1, p_1))`` of the distinguished source setting,
    or ``None``.  ``scalar_effects`` (trivial POVMs only) holds the exact
    coefficients ``E_v = c_v I`` so that Born probabilities can stay rational.
    """

    dim: int
    scenario: ContextualityScenario
    povm: Mapping[str, np.ndarray]
    sources: tuple[Mapping[str, tuple[np.ndarray, Number]], ...]
    star: Optional[tuple[tuple[np.ndarray, Number], tuple[np.ndarray, Number]]] = None
    scalar_effects: Optional[Mapping[str, Fraction]] = None
    label: str = ""

    def check(self) -> None:
        """Raise :class:`InvariantViolation` naming the first failing check."""
        d = self.dim
        if not 1 <= d <= MAX_DIM:
            raise InvariantViolation(f"dimension {d} outside [1, {MAX_DIM}]", float(d))
        eye = np.eye(d)
        for v in self.scenario.vertices:
            if v not in self.povm:
                raise InvariantViolation(f"no POVM element for vertex {v}", float("inf"))
            E = self.povm[v]
            if E.shape != (d, d):
                raise InvariantViolation(f"POVM element {v} has shape {E.shape}", float("inf"))
            h = hermiticity_residual(E)
            if h > HERMITIAN_TOL:
                raise InvariantViolation(f"hermiticity of POVM element {v}", h)
            w = eigenvalues(E)
            if w[0] < -PSD_TOL:
                raise InvariantViolation(f"positivity of POVM element {v}", float(-w[0]))
            if w[-1] > 1 + PSD_TOL:
                raise InvariantViolation(f"POVM element {v} below identity", float(w[-1] - 1))
        for k, e in enumerate(self.scenario.hyperedges, start=1):
            res = float(np.max(np.abs(sum(self.povm[v] for v in e) - eye)))
            if res > EQUIV_TOL:
                raise InvariantViolation(f"completeness of measurement e{k}", res)
        settings = list(self.sources)
        names = [f"S_e{k}" for k in range(1, len(settings) + 1)]
        if self.star is not None:
            settings.append({"s*=0": self.star[0], "s*=1": self.star[1]})
            names.append("S_e*")
        averages = []
        for name, setting in zip(names, settings):
            total_prior = 0.0
            avg = np.zeros((d, d), dtype=complex)
            for ev, (rho, prior) in setting.items():
                h = hermiticity_residual(rho)
                if h > HERMITIAN_TOL:
                    raise InvariantViolation(f"hermiticity of state {ev} in {name}", h)
                w = eigenvalues(rho)
                if w[0] < -PSD_TOL:
                    raise InvariantViolation(f"positivity of state {ev} in {name}", float(-w[0]))
                t = abs(np.trace(rho) - 1)
                if t > TRACE_TOL:
                    raise InvariantViolation(f"unit trace of state {ev} in {name}", float(t))
                if prior < 0:
                    raise InvariantViolation(f"nonnegative prior of {ev} in {name}", float(-prior))
                total_prior += float(prior)
                avg = avg + float(prior) * rho
            if abs(total_prior - 1) > CLAMP_TOL:
                raise InvariantViolation(f"priors of {name} sum to one", abs(total_prior - 1))
            averages.append(avg)
        for name, avg in zip(names[1:], averages[1:]):
            res = float(np.max(np.abs(avg - averages[0])))
            if res > EQUIV_TOL:
                raise InvariantViolation(f"operational equivalence of {names[0]} and {name}", res)


def povm_residual(r: QuantumRealization) -> float:
    """Largest deviation of ``Σ_{v∈e} E_v`` from the identity over all hyperedges."""
    eye = np.eye(r.dim)
    return max(float(np.max(np.abs(sum(r.povm[v] for v in e) - eye))) for e in r.scenario.hyperedges)


def source_averages(r: QuantumRealization) -> list[np.ndarray]:
    """Coarse-grained state ``Σ_s p(s|S) ρ_s`` of every source setting (star last)."""
    out = []
    settings = list(r.sources)
    if r.star is not None:
        settings.append({"0": r.star[0], "1": r.star[1]})
    for setting in settings:
        out.append(sum(float(p) * rho for rho, p in setting.values()))
    return out


def source_residual(r: QuantumRealization) -> float:
    avgs = source_averages(r)
    return max((float(np.max(np.abs(a - avgs[0]))) for a in avgs[1:]), default=0.0)


# ---------------------------------------------------------------------------
# data tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DataTable:
    """Operational joint probabilities ``p(m, s | M_e, S_e)``.

    ``joint[k][(m, s)]`` uses vertex ids of hyperedge ``k`` for both the
    measurement outcome ``m`` and the source outcome ``s``.  ``star[v]`` is
    ``p(v | S_{e*}, s_{e*}=0)`` and ``p0`` the prior of ``s_{e*}=0``.
    """

    hyperedges: tuple[tuple[str, ...], ...]
    joint: tuple[Mapping[tuple[str, str], Number], ...]
    star: Optional[Mapping[str, Number]] = None
    p0: Optional[Number] = None
    exact: bool = False

    def to_csv(self) -> str:
        """Rows ``(hyperedge, m, s, probability)``; the star section follows with
        ``m`` the vertex and ``s`` = ``s*=0`` (its first row carries ``p0``)."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["hyperedge", "m", "s", "probability"])
        for k, table in enumerate(self.joint, start=1):
            for (m, s), p in table.items():
                w.writerow([f"e{k}", m, s, _fmt12(p)])
        if self.star is not None:
            w.writerow(["e*", "p0", "s*=0", _fmt12(self.p0)])
            for v, p in self.star.items():
                w.writerow(["e*", v, "s*=0", _fmt12(p)])
        return buf.getvalue()


def _fmt12(x) -> str:
    return f"{float(x):.12g}"


def _clamp(x: float) -> float:
    if -CLAMP_TOL <= x < 0:
        return 0.0
    if 1 < x <= 1 + CLAMP_TOL:
        return 1.0
    return x


def _born(rho: np.ndarray, E: np.ndarray) -> float:
    val = np.trace(rho @ E)
    if abs(val.imag) > CLAMP_TOL:
        raise InvariantViolation("Born probability is real", float(abs(val.imag)))
    return float(val.real)


def born_table(r: QuantumRealization) -> DataTable:
    """``p(m, s | M_e, S_e) = Tr(ρ_s E_m) p(s | S_e)`` for every paired setting.

    Exact rationals are produced when the effects are scalar multiples of the
    identity with rational coefficients and all priors are rational.
    """
    r.check()
    exact = r.scalar_effects is not None and all(
        isinstance(p, (Fraction, int)) for setting in r.sources for _, p in setting.values()
    )
    if r.star is not None:
        exact = exact and all(isinstance(p, (Fraction, int)) for _, p in r.star)
    tables = []
    for k, e in enumerate(r.scenario.hyperedges):
        setting = r.sources[k]
        t = {}
        for m in e:
            for s in e:
                if s not in setting:
                    t[(m, s)] = Fraction(0) if exact else 0.0
                    continue
                rho, prior = setting[s]
                if exact:
                    t[(m, s)] = r.scalar_effects[m] * Fraction(prior)
                else:
                    t[(m, s)] = _clamp(_born(rho, r.povm[m]) * float(prior))
        tables.append(t)
    star = p0 = None
    if r.star is not None:
        rho0, p0 = r.star[0]
        if exact:
            star = {v: r.scalar_effects[v] for v in r.scenario.vertices}
            p0 = Fraction(p0)
        else:
            star = {v: _clamp(_born(rho0, r.povm[v])) for v in r.scenario.vertices}
            p0 = p0 if isinstance(p0, Fraction) else float(p0)
    return DataTable(r.scenario.hyperedges, tuple(tables), star, p0, exact)


def compute_corr(t: DataTable, q=None) -> Number:
    """``Corr = Σ_e q_e Σ_m p(m, m | M_e, S_e)`` (uniform ``q`` by default)."""
    n = len(t.hyperedges)
    if q is None:
        q = [Fraction(1, n)] * n
    q = list(q)
    if len(q) > n and any(q[n:]):
        raise MissingPairing(f"q has weight on hyperedges beyond the {n} paired settings")
    total = Fraction(0) if t.exact else 0.0
    for k, qk in enumerate(q):
        if not qk:
            continue
        if k >= n:
            raise MissingPairing(f"no paired data for hyperedge e{k + 1}")
        diag = sum((t.joint[k].get((m, m), 0) for m in t.hyperedges[k]), Fraction(0) if t.exact else 0.0)
        total += (to_fraction(qk) if t.exact else float(qk)) * diag
    return total


def compute_r(t: DataTable, g: WeightedGraph) -> Number:
    """``R = Σ_{v∈V(G)} w_v p(v | S_{e*}, s_{e*}=0)``."""
    if t.star is None:
        raise MissingStarSource("the data table has no star-source section")
    if t.exact:
        return sum((w * t.star[v] for v, w in g.weights.items()), Fraction(0))
    return sum(float(w) * t.star[v] for v, w in g.weights.items())


# ---------------------------------------------------------------------------
# worked constructions
# ---------------------------------------------------------------------------

KCBS_COS_THETA = 5 ** -0.25


def kcbs_vectors() -> list[np.ndarray]:
    """The five KCBS unit vectors ``l_i`` (``l_i ⊥ l_{i+1}``) in R^3."""
    c = KCBS_COS_THETA
    s = math.sqrt(1 - c * c)
    out = []
    for i in range(1, 6):
        phi = 4 * math.pi * i / 5
        out.append(np.array([s * math.cos(phi), s * math.sin(phi), c], dtype=complex))
    return out


KCBS_PSI = np.array([0, 0, 1], dtype=complex)


def kcbs_realization(r1: float, r2: float) -> QuantumRealization:
    """Qutrit KCBS realization with depolarized sources (``r1``) and effects (``r2``).

    Measurement ``e = {v_i, v_j, nd}`` has effects ``D†(P_i)``, ``D†(P_j)`` and
    ``D†(I − P_i − P_j)``; source setting ``S_e`` prepares the matching
    depolarized projectors with prior 1/3 each.  The star setting prepares
    ``D(|ψ⟩⟨ψ|)`` with prior 1/3 and ``D((I − |ψ⟩⟨ψ|)/2)`` with prior 2/3.
    """
    r1, r2 = _check_r(r1), _check_r(r2)
    gg = build_gamma_g(cycle_graph(5))
    s = gg.scenario
    P = {f"v{i}": projector(l) for i, l in enumerate(kcbs_vectors(), start=1)}
    eye = np.eye(3, dtype=complex)
    povm: dict[str, np.ndarray] = {}
    sources = []
    for e in s.hyperedges:
        events = [v for v in e if gg.roles[v] == "event"]
        nd = next(v for v in e if gg.roles[v] == "no-detection")
        proj = {v: P[v] for v in events}
        proj[nd] = eye - sum(P[v] for v in events)
        for v, Pv in proj.items():
            povm[v] = depolarize_effect(Pv, r2)
        sources.append({v: (depolarize_state(proj[v], r1), Fraction(1, 3)) for v in e})
    psi = np.outer(KCBS_PSI, KCBS_PSI.conj())
    star = (
        (depolarize_state(psi, r1), Fraction(1, 3)),
        (depolarize_state((eye - psi) / 2, r1), Fraction(2, 3)),
    )
    return QuantumRealization(3, s, povm, tuple(sources), star, label=f"kcbs(r1={r1}, r2={r2})")


TRINE_BLOCH = (
    (0.0, 0.0, 1.0),
    (math.sqrt(3) / 2, 0.0, -0.5),
    (-math.sqrt(3) / 2, 0.0, -0.5),
)


def fcf_scenario() -> ContextualityScenario:
    """Three binary measurements with disjoint outcome sets."""
    verts = [f"{b}|M{i}" for i in range(1, 4) for b in (0, 1)]
    return validate_scenario(verts, [(f"0|M{i}", f"1|M{i}") for i in range(1, 4)])


def fcf_realization() -> QuantumRealization:
    """Qubit trine construction: ``M_i = {Π⁰_i, Π¹_i}`` and ``S_i`` prepares ``Π^b_i`` with prior 1/2."""
    s = fcf_scenario()
    povm, sources = {}, []
    for i, n in enumerate(TRINE_BLOCH, start=1):
        p0 = bloch_projector(n)
        p1 = np.eye(2) - p0
        povm[f"0|M{i}"], povm[f"1|M{i}"] = p0, p1
        sources.append({f"0|M{i}": (p0, Fraction(1, 2)), f"1|M{i}": (p1, Fraction(1, 2))})
    return QuantumRealization(2, s, povm, tuple(sources), None, label="trine")


def fcf_mixture_residuals(r: QuantumRealization) -> dict[str, float]:
    """Residuals of the fair-coin-flip equivalences: ``(1/3)Σ Π⁰_i = I/2`` and ``ρ_{⊤|S_i} = I/2``."""
    half = np.eye(2) / 2
    mix = sum(r.povm[f"0|M{i}"] for i in range(1, 4)) / 3
    out = {"measurement_mixture": float(np.max(np.abs(mix - half)))}
    for i, avg in enumerate(source_averages(r), start=1):
        out[f"source_S{i}"] = float(np.max(np.abs(avg - half)))
    return out


def trivial_povm_realization(
    s: ContextualityScenario,
    m: ProbModel,
    sources: Optional[Sequence[Mapping[str, tuple[np.ndarray, Number]]]] = None,
    star: Optional[tuple] = None,
    dim: int = 2,
    p0: Number = Fraction(1, 2),
) -> QuantumRealization:
    """Effects ``E_v = p(v) I``; by default every source event prepares ``I/d``.

    Default priors are uniform over each hyperedge's events, and ``(p0, 1 − p0)``
    for the star setting.
    """
    if m.scenario != s:
        raise BadParameter("the model belongs to a different scenario")
    eye = np.eye(dim, dtype=complex)
    povm = {v: float(m[v]) * eye for v in s.vertices}
    coeffs = {v: m[v] for v in s.vertices}
    if sources is None:
        sources = tuple({v: (eye / dim, Fraction(1, len(e))) for v in e} for e in s.hyperedges)
    if star is None:
        p0 = to_fraction(p0)
        star = ((eye / dim, p0), (eye / dim, 1 - p0))
    return QuantumRealization(dim, s, povm, tuple(sources), star, coeffs, label="trivial-povm")


def _random_density(dim: int, rng: random.Random) -> np.ndarray:
    A = np.array(
        [[complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(dim)] for _ in range(dim)]
    )
    rho = A @ A.conj().T
    return rho / np.trace(rho).real


def _random_ensemble(labels: Sequence[str], dim: int, rng: random.Random, priors=None):
    """States with the given (or default) priors averaging exactly to ``I/d``.

    All but the last event get an arbitrary random state; the last absorbs the
    remainder, which is positive because the other priors are at most ``1/(d k)``.
    """
    k = len(labels)
    if priors is None:
        priors = [Fraction(1, dim * k)] * (k - 1)
    eye = np.eye(dim, dtype=complex)
    out = {}
    acc = np.zeros((dim, dim), dtype=complex)
    for lab, p in zip(labels[:-1], priors):
        rho = _random_density(dim, rng)
        out[lab] = (rho, p)
        acc += float(p) * rho
    last = 1 - sum(priors)
    rho_last = (eye / dim - acc) / float(last)
    rho_last = (rho_last + rho_last.conj().T) / 2
    out[labels[-1]] = (rho_last, last)
    return out


def random_source_assignment(s: ContextualityScenario, dim: int, rng: random.Random):
    """Random paired sources for every hyperedge plus a star setting, all averaging to ``I/d``."""
    sources = tuple(_random_ensemble(list(e), dim, rng) for e in s.hyperedges)
    st = _random_ensemble(["s*=0", "s*=1"], dim, rng)
    return sources, (st["s*=0"], st["s*=1"])
