"""Independent reference implementations used only by the tests.

Everything here is deliberately naive (subset enumeration, dense linear
algebra, third-party solvers) so that it shares no code path with the package.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import networkx as nx
import numpy as np
import sympy


def nx_graph(g):
    """networkx copy of an OrthoGraph / WeightedGraph."""
    graph = getattr(g, "graph", g)
    h = nx.Graph()
    h.add_nodes_from(graph.vertices)
    h.add_edges_from(tuple(e) for e in graph.edges)
    return h


def brute_alpha(wg) -> Fraction:
    """Maximum-weight independent set by enumerating all subsets."""
    verts = list(wg.vertices)
    best = Fraction(0)
    for r in range(len(verts) + 1):
        for sub in itertools.combinations(verts, r):
            if all(not wg.graph.adjacent(a, b) for a, b in itertools.combinations(sub, 2)):
                best = max(best, sum((wg.weights[v] for v in sub), Fraction(0)))
    return best


def brute_cliques(g) -> set[frozenset]:
    return {frozenset(c) for c in nx.find_cliques(nx_graph(g))}


def basic_feasible_solutions(A_eq, b_eq, n) -> set[tuple]:
    """Vertices of {x >= 0 : A x = b} as the nonnegative basic solutions (sympy, exact)."""
    A = sympy.Matrix(A_eq)
    b = sympy.Matrix(b_eq)
    rank = A.rank()
    # drop dependent rows
    rows = []
    for i in range(A.rows):
        trial = rows + [i]
        if A.extract(trial, list(range(n))).rank() == len(trial):
            rows = trial
    A, b = A.extract(rows, list(range(n))), b.extract(rows, [0])
    out = set()
    for cols in itertools.combinations(range(n), rank):
        B = A.extract(list(range(rank)), list(cols))
        if B.det() == 0:
            continue
        xb = B.LUsolve(b)
        if all(v >= 0 for v in xb):
            x = [Fraction(0)] * n
            for c, v in zip(cols, xb):
                x[c] = Fraction(int(v.p), int(v.q))
            out.add(tuple(x))
    return out


def scenario_equalities(s):
    A = [[int(v in e) for v in s.vertices] for e in s.hyperedges]
    return A, [1] * len(A)


def cvxpy_theta(wg) -> float:
    """Weighted Lovász theta with cvxpy / Clarabel."""
    import cvxpy as cp

    verts = list(wg.vertices)
    n = len(verts)
    pos = {v: i for i, v in enumerate(verts)}
    s = np.sqrt([float(wg.weights[v]) for v in verts])
    X = cp.Variable((n, n), symmetric=True)
    cons = [X >> 0, cp.trace(X) == 1]
    cons += [X[pos[a], pos[b]] == 0 for a, b in (tuple(e) for e in wg.graph.edges)]
    prob = cp.Problem(cp.Maximize(cp.sum(cp.multiply(np.outer(s, s), X))), cons)
    prob.solve(solver=cp.CLARABEL)
    return float(prob.value)


def scipy_linprog_max(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, bounds=(0, None)):
    from scipy.optimize import linprog

    res = linprog(-np.asarray(c, float), A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs")
    return res
