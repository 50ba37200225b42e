"""``nctx`` command line.

Subcommands::

    nctx analyze <scenario>
    nctx invariants <scenario> [--subgraph g.json] [--q 1/5,... | --q optimal | --q random]
    nctx kcbs [--r1 R1 --r2 R2]
    nctx kcbs sweep --steps N [--min T0 --max T1]
    nctx fcf
    nctx cega
    nctx certify <scenario> <model.json> [--subgraph g.json]

``<scenario>`` is a library name (``kcbs_gamma_g``, ``cega_27``, ``n_cycle(5)``,
...) or a scenario JSON file.  Every command accepts ``--format json|csv|text``,
``--output PATH`` and ``--seed N`` (overridden by the ``NCTX_SEED`` environment
variable).  Exit status: 0 on success, 1 on invalid input, 2 on solver failure.
"""

from __future__ import annotations

import argparse
import math
import os
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional, Sequence

from . import io as nio
from .errors import BadParameter, NctxError, SolverError, TooLarge, ValidationError
from .invariants import compute_invariants, optimal_q
from .models import (
    CLASSES,
    cega_expression_weights,
    classify_extremal,
    classify_model,
    deterministic_models,
    extremal_points,
    ks_colourable,
    max_expression,
)
from .noncontextuality import (
    SWEEP_HEADER,
    certify_trivial_povm,
    fcf_bound,
    kcbs_report,
    kcbs_sweep,
    saturation_ledger,
    violation_threshold_kcbs,
)
from .quantum import born_table, compute_corr, fcf_mixture_residuals, fcf_realization
from .scenario import (
    build_gamma_g,
    library_scenario,
    maximal_cliques,
    orthogonality_graph,
    structural_specker_check,
)

DEFAULT_SEED = 20240101
FORMATS = ("json", "csv", "text")


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: tuple[str, ...] = ()
    subgraph: Optional[str] = None
    q: Optional[str] = None
    r1: float = 1.0
    r2: float = 1.0
    sweep: bool = False
    steps: int = 20
    t_min: float = 0.0
    t_max: float = 1.0
    seed: int = DEFAULT_SEED
    fmt: str = "text"
    output: Optional[str] = None

    def __post_init__(self):
        if self.fmt not in FORMATS:
            raise BadParameter(f"--format must be one of {FORMATS}")
        if self.sweep and self.steps < 2:
            raise BadParameter("--steps must be at least 2")
        if not (0 <= self.t_min <= self.t_max <= 1):
            raise BadParameter("sweep range must satisfy 0 <= min <= max <= 1")


@dataclass
class Output:
    """A command's result: a JSON-able payload and, optionally, a table."""

    payload: Any
    header: Optional[Sequence[str]] = None
    rows: Optional[list[Sequence[Any]]] = None

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return nio.dumps_json(self.payload)
        if fmt == "csv":
            if self.header is not None:
                return nio.dumps_csv(self.header, self.rows or [])
            return nio.dumps_csv(["key", "value"], [(k, _csv_value(v)) for k, v in nio.flatten(self.payload)])
        if self.header is not None:
            return _text_table(self.header, self.rows or [])
        return nio.dumps_text(self.payload)


def _csv_value(v: Any) -> str:
    if isinstance(v, list):
        return " ".join(str(x) for x in v)
    return "" if v is None else str(v)


def _text_cell(c: Any) -> str:
    if isinstance(c, float):
        return f"{c:.6g}"
    if isinstance(c, Fraction):
        return nio.fmt_number(c)
    return str(c)


def _text_table(header: Sequence[str], rows: list[Sequence[Any]]) -> str:
    cells = [list(header)] + [[_text_cell(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() for r in cells) + "\n"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _entry_with_graph(cfg: RunConfig, ref: str):
    entry = nio.load_scenario(ref)
    graph = entry.graph
    if cfg.subgraph is not None:
        graph = nio.load_graph(cfg.subgraph, entry.scenario)
    return entry.scenario, graph


def cmd_analyze(cfg: RunConfig) -> Output:
    s, graph = _entry_with_graph(cfg, cfg.inputs[0])
    og = orthogonality_graph(s)
    cliques = maximal_cliques(og)
    spec = structural_specker_check(s)
    col = ks_colourable(s)
    out: dict[str, Any] = {
        "vertices": s.n_vertices,
        "hyperedges": s.n_hyperedges,
        "orthogonality_edges": len(og.edges),
        "maximal_cliques": [list(c) for c in cliques],
        "structural_specker": spec.holds,
        "uncovered_clique": None if spec.witness is None else list(spec.witness),
        "ks_colourable": col.colourable,
        "deterministic_models": len(deterministic_models(s)),
    }
    try:
        ext = extremal_points(s)
        part = classify_extremal(s, ext)
        out["extremal_points"] = {
            "total": len(ext),
            "deterministic": len(part.deterministic),
            "indeterministic": len(part.indeterministic),
        }
    except TooLarge as exc:
        out["extremal_points"] = None
        out["note"] = f"vertex enumeration skipped: {exc}"
    if graph is not None:
        out["graph"] = nio.graph_to_dict(graph)
    return Output(out)


def _resolve_q(cfg: RunConfig, s):
    if cfg.q is None:
        return None
    key = cfg.q.strip().lower()
    if key == "optimal":
        return optimal_q(s).witness
    if key == "random":
        rng = random.Random(cfg.seed)
        raw = [rng.randint(1, 100) for _ in range(s.n_hyperedges)]
        return [Fraction(x, sum(raw)) for x in raw]
    return nio.parse_q(cfg.q)


def _gamma_g_for(s, graph):
    """``s`` itself when it already is the no-detection scenario of ``graph``, else Γ_G built from it."""
    cliques = {frozenset(c) for c in maximal_cliques(graph.graph)}
    gverts = set(graph.vertices)
    shaped = len(cliques) == s.n_hyperedges and all(
        frozenset(v for v in e if v in gverts) in cliques and sum(v not in gverts for v in e) == 1
        for e in s.hyperedges
    )
    return s if shaped else build_gamma_g(graph).scenario


def cmd_invariants(cfg: RunConfig) -> Output:
    s, graph = _entry_with_graph(cfg, cfg.inputs[0])
    if graph is None:
        raise ValidationError(f"scenario {cfg.inputs[0]!r} has no associated graph; pass --subgraph")
    s = _gamma_g_for(s, graph)
    try:
        q = _resolve_q(cfg, s)
        inv = compute_invariants(s, graph, q)
    except ValueError as exc:
        if isinstance(exc, NctxError):
            raise
        raise BadParameter(str(exc)) from exc
    return Output(inv.to_dict())


def _report_row(r1: float, r2: float, rep) -> list:
    return [r1, r2, float(rep.corr), float(rep.r_value), float(rep.lhs_nci3), str(rep.witness)]


def cmd_kcbs(cfg: RunConfig) -> Output:
    th = violation_threshold_kcbs()
    threshold = {
        "product": th.product,
        "corr": th.corr,
        "product_expression": th.product_expression,
        "corr_expression": th.corr_expression,
    }
    if cfg.sweep:
        rows = kcbs_sweep(cfg.steps, cfg.t_min, cfg.t_max)
        table = [_report_row(r.r1, r.r2, r.report) for r in rows]
        payload = {"threshold": threshold, "rows": [dict(zip(SWEEP_HEADER, t)) for t in table]}
        return Output(payload, SWEEP_HEADER, table)
    for name, r in (("--r1", cfg.r1), ("--r2", cfg.r2)):
        if not (0 <= r <= 1) or math.isnan(r):
            raise BadParameter(f"{name} must lie in [0, 1], got {r}")
    rep = kcbs_report(cfg.r1, cfg.r2)
    payload = rep.to_dict()
    payload["r1"], payload["r2"] = cfg.r1, cfg.r2
    payload["saturation_residual"] = float(saturation_ledger(rep))
    payload["threshold"] = threshold
    return Output(payload, SWEEP_HEADER if cfg.fmt == "csv" else None, [_report_row(cfg.r1, cfg.r2, rep)])


def cmd_fcf(cfg: RunConfig) -> Output:
    b = fcf_bound()
    real = fcf_realization()
    table = born_table(real)
    corr = compute_corr(table)
    res = fcf_mixture_residuals(real)
    return Output(
        {
            "bound": b.value,
            "achieving_vertex": list(b.vertex),
            "vertices": [list(v) for v in b.vertices],
            "quantum_corr": corr,
            "violation": corr > b.value,
            "mixture_residuals": res,
        }
    )


def cmd_cega(cfg: RunConfig) -> Output:
    s = library_scenario("cega_27").scenario
    det = deterministic_models(s)
    rows = []
    for name, w in cega_expression_weights(s).items():
        rows.append([name] + [max_expression(s, w, c, deterministic=det) for c in CLASSES])
    header = ["expression"] + list(CLASSES)
    payload = {"scenario": "cega_27", "rows": [dict(zip(header, r)) for r in rows]}
    return Output(payload, header, rows)


def cmd_certify(cfg: RunConfig) -> Output:
    entry = nio.load_scenario(cfg.inputs[0])
    _, m = nio.load_model(cfg.inputs[1], entry)
    s = entry.scenario
    graph = entry.graph
    if cfg.subgraph is not None:
        graph = nio.load_graph(cfg.subgraph, s)
    cls = classify_model(s, m)
    out: dict[str, Any] = {
        "classes": {
            "deterministic_extremal": cls.deterministic_extremal,
            "indeterministic_extremal": cls.indeterministic_extremal,
            "classical": cls.classical,
            "consistent_exclusivity": cls.consistent_exclusivity,
            "general": cls.general,
        }
    }
    if graph is None:
        out["certificate"] = None
        out["note"] = "no graph for this scenario: pass --subgraph to certify trivial POVMs"
        return Output(out)
    if _gamma_g_for(s, graph) is not s:
        out["certificate"] = None
        out["note"] = "the scenario is not the no-detection scenario of the graph: no certificate"
        return Output(out)
    inv = compute_invariants(s, graph, _resolve_q(cfg, s))
    cert = certify_trivial_povm(s, m, inv, graph=graph)
    out["invariants"] = inv.to_dict()
    out["certificate"] = {
        "verdict": str(cert.verdict),
        "method": cert.method,
        "weight_deterministic": cert.weight_deterministic,
        "weight_indeterministic": cert.weight_indeterministic,
        "corr_bound": cert.corr_bound,
        "r_bound": cert.r_bound,
        "bound_verdicts": {nio.fmt_number(p0): str(v) for p0, v in cert.reports},
        "observed_verdicts": {nio.fmt_number(p0): str(v) for p0, v in cert.observed},
    }
    return Output(out)


COMMANDS = {
    "analyze": cmd_analyze,
    "invariants": cmd_invariants,
    "kcbs": cmd_kcbs,
    "fcf": cmd_fcf,
    "cega": cmd_cega,
    "certify": cmd_certify,
}


def run(cfg: RunConfig) -> str:
    """Execute ``cfg`` and return the rendered artifact (also written to ``cfg.output``)."""
    text = COMMANDS[cfg.command](cfg).render(cfg.fmt)
    if cfg.output:
        try:
            with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise ValidationError(f"cannot write {cfg.output}: {exc.strerror or exc}") from exc
    return text


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text", dest="fmt")
    common.add_argument("--output", "-o", default=None, help="write the artifact to this file")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized choices (env NCTX_SEED wins)")

    p = argparse.ArgumentParser(prog="nctx", description="Contextuality scenarios and noise-robust noncontextuality inequalities.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="validate a scenario and report its structure")
    a.add_argument("scenario")
    a.add_argument("--subgraph", default=None)

    i = sub.add_parser("invariants", parents=[common], help="alpha, theta, alpha*, beta")
    i.add_argument("scenario")
    i.add_argument("--subgraph", default=None, help="weighted-graph JSON (induced subgraph of O(Γ))")
    i.add_argument("--q", default=None, help="comma-separated rationals, 'optimal' or 'random'")

    k = sub.add_parser("kcbs", parents=[common], help="depolarized KCBS realization")
    k.add_argument("mode", nargs="?", choices=["sweep"], help="sweep over the product r1*r2")
    k.add_argument("--r1", type=float, default=1.0)
    k.add_argument("--r2", type=float, default=1.0)
    k.add_argument("--steps", type=int, default=20)
    k.add_argument("--min", type=float, default=0.0, dest="t_min")
    k.add_argument("--max", type=float, default=1.0, dest="t_max")

    sub.add_parser("fcf", parents=[common], help="fair-coin-flip bound and trine realization")
    sub.add_parser("cega", parents=[common], help="Bell-KS expressions on the 27-vertex scenario")

    c = sub.add_parser("certify", parents=[common], help="classify a model and certify trivial POVMs")
    c.add_argument("scenario")
    c.add_argument("model")
    c.add_argument("--subgraph", default=None)
    c.add_argument("--q", default=None)
    return p


def config_from_args(ns: argparse.Namespace, env: Optional[dict] = None) -> RunConfig:
    env = os.environ if env is None else env
    seed = ns.seed
    if env.get("NCTX_SEED"):
        try:
            seed = int(env["NCTX_SEED"])
        except ValueError:
            raise BadParameter(f"NCTX_SEED must be an integer, got {env['NCTX_SEED']!r}") from None
    inputs = tuple(getattr(ns, k) for k in ("scenario", "model") if getattr(ns, k, None) is not None)
    return RunConfig(
        command=ns.command,
        inputs=inputs,
        subgraph=getattr(ns, "subgraph", None),
        q=getattr(ns, "q", None),
        r1=getattr(ns, "r1", 1.0),
        r2=getattr(ns, "r2", 1.0),
        sweep=getattr(ns, "mode", None) == "sweep",
        steps=getattr(ns, "steps", 20),
        t_min=getattr(ns, "t_min", 0.0),
        t_max=getattr(ns, "t_max", 1.0),
        seed=seed,
        fmt=ns.fmt,
        output=ns.output,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        text = run(cfg)
    except ValidationError as exc:
        print(f"nctx {ns.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (SolverError, NctxError) as exc:
        print(f"nctx {ns.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if not cfg.output:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
