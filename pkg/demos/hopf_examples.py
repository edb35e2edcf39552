"""Coefficient matrices and homotopy decisions for the shipped example maps.

    python3 demos/hopf_examples.py
"""
from hopfinv import models
from hopfinv.pipeline import coefficient, compare_maps, full_matrix, homotopic_to_constant


def main():
    s2s2, s2, y = models.s2xs2_source(), models.s2_target(), models.y_target()
    for f in (models.p1(), models.p2(), models.constant_s2()):
        M = full_matrix(f, s2s2, s2)
        print(f.name, {f"{c},{p}": str(e.value) for (c, p), e in sorted(M.entries.items())})
    print("p1 vs p2:", compare_maps(models.p1(), models.p2(), s2s2, s2))
    print("inclusion into Y null-homotopic:", homotopic_to_constant(models.inclusion_y(), s2s2, y, nodes=16))

    src, f = models.s3_source(), models.hopf_map()
    c = coefficient(f, src, s2, "sigma", "[xi,xi]")
    print(f"Hopf map S^3 -> S^2: weight-2 coefficient {c.value:.9f} (error {c.error:.1e})")


if __name__ == "__main__":
    main()
