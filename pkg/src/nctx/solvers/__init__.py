"""Numerical kernels: exact LP, exact vertex enumeration, dense SDP."""

from .lp import LPResult, RationalLP, lp_feasible_point, lp_solve
from .polytope import HRepPolytope, enumerate_vertices
from .sdp import DenseSDP, SDPResult, sdp_solve

__all__ = [
    "DenseSDP",
    "HRepPolytope",
    "LPResult",
    "RationalLP",
    "SDPResult",
    "enumerate_vertices",
    "lp_feasible_point",
    "lp_solve",
    "sdp_solve",
]
