"""Kochen–Specker contextuality scenarios and noise-robust noncontextuality inequalities.

The main entry points are re-exported here; see the submodules for the rest:

* :mod:`nctx.scenario`          hypergraphs, orthogonality graphs, Γ_G / Σ_G, library
* :mod:`nctx.models`            probabilistic models, polytopes, classes C ⊆ CE¹ ⊆ G
* :mod:`nctx.invariants`        α, θ, α*, β
* :mod:`nctx.quantum`           realizations, depolarizing noise, Born tables
* :mod:`nctx.noncontextuality`  inequality evaluation and worked examples
* :mod:`nctx.solvers`           exact LP, exact vertex enumeration, dense SDP
"""

from .errors import NctxError, SolverError, ValidationError
from .invariants import (
    InvariantBundle,
    compute_invariants,
    fractional_packing,
    independence_number,
    lovasz_theta,
    optimal_q,
    weighted_max_predictability,
)
from .models import (
    ProbModel,
    ce1_bijection_back,
    ce1_bijection_forward,
    check_model,
    classify_extremal,
    classify_model,
    deterministic_models,
    extremal_points,
    ks_colourable,
    max_expression,
)
from .noncontextuality import (
    NCIReport,
    Verdict,
    certify_trivial_povm,
    evaluate_nci,
    fcf_bound,
    kcbs_report,
    kcbs_sweep,
    saturation_ledger,
    violation_threshold_kcbs,
)
from .quantum import (
    DataTable,
    QuantumRealization,
    born_table,
    compute_corr,
    compute_r,
    depolarize_effect,
    depolarize_state,
    fcf_realization,
    kcbs_realization,
    trivial_povm_realization,
)
from .scenario import (
    ContextualityScenario,
    OrthoGraph,
    WeightedGraph,
    build_gamma_g,
    build_sigma_g,
    cycle_graph,
    library_scenario,
    maximal_cliques,
    orthogonality_graph,
    specker_extension,
    structural_specker_check,
    validate_scenario,
    weighted_graph,
    weighted_subgraph,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
