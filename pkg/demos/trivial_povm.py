"""Trivial POVMs never violate the inequality, even on indeterministic models.

Mixes the indeterministic extremal point of the KCBS extended scenario with
random deterministic mixtures, certifies each model and
realizes one of them with qutrit sources to show that the observed data
stays inside the certified bounds.  Small weights on the indeterministic point
can still give a classical model: the certificate uses the decomposition with
the largest deterministic weight.

    python3 demos/trivial_povm.py
"""

import random
from fractions import Fraction

from nctx.invariants import compute_invariants
from nctx.models import check_model, classify_extremal, extremal_points, random_mixture
from nctx.noncontextuality import certify_trivial_povm
from nctx.quantum import born_table, compute_corr, compute_r, trivial_povm_realization
from nctx.scenario import library_scenario


def main() -> None:
    entry = library_scenario("kcbs_gamma_g")
    s, g = entry.scenario, entry.graph
    inv = compute_invariants(s, g)
    ext = extremal_points(s)
    part = classify_extremal(s, ext)
    (half,) = part.indeterministic
    rng = random.Random(7)
    for k in range(5):
        lam = Fraction(k, 4)
        classical = random_mixture(part.deterministic, rng, terms=3)
        m = check_model(s, tuple(lam * a + (1 - lam) * b for a, b in zip(half, classical)))
        cert = certify_trivial_povm(s, m, inv, graph=g, extremal=ext)
        print(
            f"weight {str(lam):>3} on the indeterministic point: w_det={float(cert.weight_deterministic):.3f} "
            f"Corr<={float(cert.corr_bound):.3f} R<={float(cert.r_bound):.3f} -> {cert.verdict.value}"
        )
    table = born_table(trivial_povm_realization(s, m, p0=Fraction(1, 2)))
    print(f"realized last model: Corr={compute_corr(table)} R={compute_r(table, g)}")


if __name__ == "__main__":
    main()
