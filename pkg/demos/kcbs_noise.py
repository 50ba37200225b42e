"""Depolarized KCBS experiment: where does the noise-robust witness switch on?

Builds the qutrit realization for a grid of noise strengths, computes the two
observed quantities (Corr, R) from the Born tables and evaluates the
inequality with the KCBS invariants.

    python3 demos/kcbs_noise.py
"""

import math

from nctx.noncontextuality import evaluate_nci, kcbs_invariants, violation_threshold_kcbs
from nctx.quantum import born_table, compute_corr, compute_r, kcbs_realization
from nctx.scenario import cycle_graph


def main() -> None:
    inv = kcbs_invariants()
    threshold = violation_threshold_kcbs()
    print(f"invariants: alpha={inv.alpha} theta={inv.theta:.6f} alpha*={inv.alpha_star} beta={inv.beta}")
    print(f"threshold:  {threshold}")
    print()
    print(f"{'r1*r2':>7} {'Corr':>9} {'R':>9} {'LHS':>9}  verdict")
    for k in range(11):
        t = 0.85 + 0.015 * k
        r = math.sqrt(t)
        table = born_table(kcbs_realization(r, r))
        corr, big_r = compute_corr(table), compute_r(table, cycle_graph(5))
        rep = evaluate_nci(corr, big_r, table.p0, inv)
        print(f"{t:7.3f} {corr:9.6f} {big_r:9.6f} {rep.lhs_nci3:9.6f}  {rep.witness.value}")


if __name__ == "__main__":
    main()
