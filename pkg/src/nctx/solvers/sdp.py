"""A small dense SDP solver (alternating direction augmented Lagrangian on the dual).

Solves the standard-form pair

    primal:  opt <C, X>   s.t.  <A_i, X> = b_i,  X ⪰ 0
    dual:    min/max b·y  s.t.  C - Σ y_i A_i = S ⪰ 0      (for sense="min")

with the iteration of Wen, Goldfarb and Yin (2010): an exact y-update through
the Gram matrix of the constraints, a PSD projection for S, and a
multiplier step for X.  Meant for dimensions up to a few dozen.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import NoConvergence

MAX_ITERATIONS = 50_000
TOLERANCE = 1e-8


@dataclass(frozen=True)
class DenseSDP:
    """``opt <C, X>`` subject to ``<A_i, X> = b_i`` and ``X ⪰ 0``."""

    C: np.ndarray
    constraints: Sequence[tuple[np.ndarray, float]]

    def __post_init__(self):
        C = np.asarray(self.C, dtype=float)
        if C.ndim != 2 or C.shape[0] != C.shape[1]:
            raise ValueError("objective matrix must be square")
        cons = []
        for A, b in self.constraints:
            A = np.asarray(A, dtype=float)
            if A.shape != C.shape:
                raise ValueError("constraint matrices must match the objective dimension")
            cons.append(((A + A.T) / 2, float(b)))
        object.__setattr__(self, "C", (C + C.T) / 2)
        object.__setattr__(self, "constraints", tuple(cons))

    @property
    def dim(self) -> int:
        return self.C.shape[0]


@dataclass(frozen=True)
class SDPResult:
    value: float
    X: np.ndarray
    dual_value: float
    y: np.ndarray
    iterations: int
    primal_residual: float
    dual_residual: float


def _psd_split(V):
    w, Q = np.linalg.eigh(V)
    pos = np.clip(w, 0, None)
    neg = np.clip(w, None, 0)
    return (Q * pos) @ Q.T, (Q * neg) @ Q.T


def sdp_solve(
    p: DenseSDP,
    sense: str = "max",
    tol: float = TOLERANCE,
    max_iter: int = MAX_ITERATIONS,
    mu: float = 1.0,
) -> SDPResult:
    """Solve ``p``; raise :class:`NoConvergence` after ``max_iter`` iterations.

    Convergence is declared when the relative primal residual
    ``|A(X) - b| / (1 + |b|)`` and dual residual ``|C - A*(y) - S| / (1 + |C|)``
    both fall below ``tol``.  The returned ``X`` is PSD by construction.
    """
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    n = p.dim
    sign = -1.0 if sense == "max" else 1.0
    C = sign * p.C
    m = len(p.constraints)
    A = np.array([a.reshape(-1) for a, _ in p.constraints]).reshape(m, n * n)
    b = np.array([bi for _, bi in p.constraints], dtype=float)
    gram = A @ A.T
    try:
        chol = np.linalg.cholesky(gram)
        solve_gram = lambda r: np.linalg.solve(chol.T, np.linalg.solve(chol, r))
    except np.linalg.LinAlgError:
        pinv = np.linalg.pinv(gram)
        solve_gram = lambda r: pinv @ r
    Avec = lambda X: A @ X.reshape(-1)
    Aadj = lambda y: (A.T @ y).reshape(n, n)

    X = np.zeros((n, n))
    S = np.zeros((n, n))
    norm_b = 1.0 + np.linalg.norm(b)
    norm_c = 1.0 + np.linalg.norm(C)
    c_vec = Avec(C)
    streak = 0
    for it in range(1, max_iter + 1):
        y = -solve_gram(mu * (Avec(X) - b) + Avec(S) - c_vec)
        V = C - Aadj(y) - mu * X
        Vp, Vn = _psd_split(V)
        S = Vp
        X = -Vn / mu
        pres = np.linalg.norm(Avec(X) - b) / norm_b
        dres = np.linalg.norm(C - Aadj(y) - S) / norm_c
        if pres < tol and dres < tol:
            primal = float(np.sum(p.C * X))
            dual = float(sign * (b @ y))
            return SDPResult(primal, X, dual, sign * y, it, pres, dres)
        # keep the residuals balanced; rescale only occasionally so the
        # iteration has time to settle between changes
        ratio = pres / max(dres, 1e-300)
        if ratio > 10 or ratio < 0.1:
            streak += 1
        else:
            streak = 0
        if streak >= 50:
            mu = mu * 2.0 if ratio > 10 else mu * 0.5
            mu = min(max(mu, 1e-6), 1e6)
            streak = 0
    raise NoConvergence(
        f"SDP did not converge in {max_iter} iterations "
        f"(primal residual {pres:.2e}, dual residual {dres:.2e})"
    )
