"""Maxima of the three CEGA expressions over the classes C ⊆ CE¹ ⊆ G.

    python3 demos/cega_table.py
"""

from nctx.models import CLASSES, cega_expression_weights, deterministic_models, ks_colourable, max_expression
from nctx.scenario import library_scenario


def main() -> None:
    s18 = library_scenario("cega_18").scenario
    s27 = library_scenario("cega_27").scenario
    print(f"18-ray scenario KS-colourable: {ks_colourable(s18).colourable}")
    print(f"27-vertex scenario KS-colourable: {ks_colourable(s27).colourable}")
    det = deterministic_models(s27)
    print(f"deterministic models of the 27-vertex scenario: {len(det)}")
    print()
    print(f"{'':6}" + "".join(f"{c:>8}" for c in CLASSES))
    for name, w in cega_expression_weights(s27).items():
        row = [max_expression(s27, w, c, deterministic=det) for c in CLASSES]
        print(f"{name:6}" + "".join(f"{str(v):>8}" for v in row))


if __name__ == "__main__":
    main()
