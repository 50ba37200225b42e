"""File formats: scenario / weighted-graph / model JSON, report JSON, sweep CSV.

Scenario JSON::

    {"vertices": ["a", ...], "hyperedges": [["a", "b"], ...]}

Weighted-graph JSON lists the chosen vertices and their weights (decimal or
``"p/q"`` strings); optional ``"edges"`` must agree with the orthogonality
graph of the scenario it is read against::

    {"vertices": ["a", ...], "weights": {"a": "1", ...}}

Model JSON names its scenario (a library name or a path relative to the model
file)::

    {"scenario": "kcbs_gamma_g", "probabilities": {"v1": "1/2", ...}}
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional, Sequence

from .errors import BadParameter, UnknownName, ValidationError
from .models import ProbModel, check_model
from .rational import fmt_number, to_fraction
from .scenario import (
    ContextualityScenario,
    LibraryEntry,
    WeightedGraph,
    library_scenario,
    validate_scenario,
    weighted_graph,
    weighted_subgraph,
)


def _read_json(path: str | Path) -> Any:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {p}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{p}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def _require(obj: Any, key: str, kind: type, where: str) -> Any:
    if not isinstance(obj, dict) or key not in obj:
        raise ValidationError(f"{where}: missing field {key!r}")
    val = obj[key]
    if not isinstance(val, kind):
        raise ValidationError(f"{where}: field {key!r} must be a {kind.__name__}")
    return val


def scenario_from_dict(data: Mapping, where: str = "scenario") -> ContextualityScenario:
    vertices = _require(data, "vertices", list, where)
    hyperedges = _require(data, "hyperedges", list, where)
    if not all(isinstance(v, str) for v in vertices):
        raise ValidationError(f"{where}: vertex ids must be strings")
    if not all(isinstance(e, list) and all(isinstance(v, str) for v in e) for e in hyperedges):
        raise ValidationError(f"{where}: hyperedges must be lists of vertex ids")
    return validate_scenario(vertices, hyperedges)


def scenario_to_dict(s: ContextualityScenario) -> dict:
    return {"vertices": list(s.vertices), "hyperedges": [list(e) for e in s.hyperedges]}


def load_scenario(ref: str) -> LibraryEntry:
    """A library name (see :data:`nctx.scenario.LIBRARY_NAMES`) or a scenario JSON path."""
    p = Path(ref)
    if p.suffix.lower() == ".json" or p.exists():
        data = _read_json(p)
        s = scenario_from_dict(data, where=str(p))
        graph = None
        if "graph" in data:
            graph = graph_from_dict(s, data["graph"], where=f"{p}: graph")
        return LibraryEntry(s, graph)
    try:
        return library_scenario(ref)
    except UnknownName:
        raise UnknownName(f"{ref!r} is neither a library scenario nor an existing file") from None


def graph_from_dict(s: Optional[ContextualityScenario], data: Mapping, where: str = "graph") -> WeightedGraph:
    """Read a weighted graph; as an induced subgraph of O(Γ) when ``s`` is given."""
    vertices = _require(data, "vertices", list, where)
    weights = data.get("weights")
    if weights is not None and not isinstance(weights, dict):
        raise ValidationError(f"{where}: 'weights' must be an object")
    w = None if weights is None else {k: _fraction(v, f"{where}: weight of {k!r}") for k, v in weights.items()}
    edges = data.get("edges")
    if s is None:
        if edges is None:
            raise ValidationError(f"{where}: a standalone graph needs 'edges'")
        return weighted_graph(vertices, edges, w)
    g = weighted_subgraph(s, vertices, w)
    if edges is not None:
        given = {frozenset(e) for e in edges}
        if given != set(g.graph.edges):
            raise ValidationError(f"{where}: 'edges' disagree with the orthogonality graph of the scenario")
    return g


def graph_to_dict(g: WeightedGraph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [list(e) for e in g.graph.sorted_edges()],
        "weights": {v: fmt_number(w) for v, w in g.weights.items()},
    }


def load_graph(path: str | Path, s: Optional[ContextualityScenario]) -> WeightedGraph:
    return graph_from_dict(s, _read_json(path), where=str(path))


def _fraction(x: Any, where: str) -> Fraction:
    try:
        return to_fraction(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"{where}: not a rational number: {x!r}") from exc


def load_model(path: str | Path, entry: Optional[LibraryEntry] = None) -> tuple[LibraryEntry, ProbModel]:
    """Read a model file; its ``"scenario"`` field is resolved unless ``entry`` is given."""
    p = Path(path)
    data = _read_json(p)
    probs = _require(data, "probabilities", dict, str(p))
    if entry is None:
        ref = _require(data, "scenario", str, str(p))
        rel = p.parent / ref
        entry = load_scenario(str(rel) if rel.exists() else ref)
    values = {k: _fraction(v, f"{p}: probability of {k!r}") for k, v in probs.items()}
    return entry, check_model(entry.scenario, values)


def model_to_dict(m: ProbModel, scenario_ref: str) -> dict:
    return {"scenario": scenario_ref, "probabilities": {v: fmt_number(x) for v, x in m.as_dict().items()}}


def parse_q(text: str) -> list[Fraction]:
    """Comma-separated rationals, e.g. ``"1/5,1/5,1/5,1/5,1/5"``."""
    parts = [t.strip() for t in text.split(",") if t.strip()]
    if not parts:
        raise BadParameter("empty q distribution")
    return [_fraction(t, "q") for t in parts]


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def jsonable(x: Any) -> Any:
    """Exact rationals become ``"p/q"`` strings; tuples become lists."""
    if isinstance(x, Fraction):
        return fmt_number(x)
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        return x
    if hasattr(x, "to_dict"):
        return jsonable(x.to_dict())
    if isinstance(x, Mapping):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return str(x)


def dumps_json(obj: Any) -> str:
    return json.dumps(jsonable(obj), indent=2, ensure_ascii=False) + "\n"


def dumps_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(c) for c in r])
    return buf.getvalue()


def _cell(c: Any) -> str:
    if isinstance(c, (Fraction, float)):
        return fmt_number(c) if isinstance(c, Fraction) else f"{c:.12g}"
    return str(c)


def flatten(obj: Any, prefix: str = "") -> list[tuple[str, Any]]:
    """Nested dicts/lists as dotted ``(key, value)`` pairs, for CSV and text output."""
    obj = jsonable(obj)
    out: list[tuple[str, Any]] = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            out.extend(flatten(v, f"{prefix}.{k}" if prefix else k))
    elif isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        for i, v in enumerate(obj):
            out.extend(flatten(v, f"{prefix}[{i}]"))
    else:
        out.append((prefix, obj))
    return out


def dumps_text(obj: Any) -> str:
    lines = []
    for k, v in flatten(obj):
        if isinstance(v, float):
            v = f"{v:.6g}"
        elif isinstance(v, list):
            v = ", ".join(f"{x:.6g}" if isinstance(x, float) else str(x) for x in v)
        lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"
