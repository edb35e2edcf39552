"""Regenerate every JSON file under fixtures/ from the built-in models.

    python3 demos/make_fixtures.py [outdir]
"""
import sys
from fractions import Fraction
from pathlib import Path

from hopfinv import io, models
from hopfinv.coalgebra import product_of_spheres, sphere_product
from hopfinv.cwtower import snxsm_complex
from hopfinv.freelie import free_shifted_lie
from hopfinv.htt import massey_model, s2xs2_form_model

OUT = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "fixtures"


def scenario(src, tgt, maps, compare=None, options=None):
    return io.scenario_to_dict(src, tgt, {m.name: m for m in maps}, options, compare)


def corrupted_coalgebra() -> dict:
    """S^3 x S^3 with the wrong sign on beta (x) alpha: cocommutativity must fail."""
    d = product_of_spheres(3, 3).to_dict()
    for entry in d["coproducts"]:
        for t in entry["terms"]:
            t["coeff"] = str(abs(Fraction(t["coeff"])))
    return d


def gauge_problem(gamma_part: str) -> dict:
    """tau sends alpha to x; kappa adds a gamma component.  [x,[x,y]] lies in the image of the
    twisted attaching map, the generator z does not."""
    L = free_shifted_lie([("x", 2), ("y", 2), ("z", 4)], 4)
    return {"complex": snxsm_complex(2, 2).to_dict(), "algebra": io.linfty_to_dict(L),
            "tau": {"phi[alpha,x]": "1"},
            "kappa": {"phi[alpha,x]": "1", f"phi[gamma,{gamma_part}]": "1"}}


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    s2s2, s2, y = models.s2xs2_source(), models.s2_target(), models.y_target()
    files = {
        "s2xs2.json": io.dump_document("coalgebra", product_of_spheres(2, 2).to_dict()),
        "s2xs3.json": io.dump_document("coalgebra", sphere_product([2, 3]).to_dict()),
        "corrupted_sign.json": io.dump_document("coalgebra", corrupted_coalgebra()),
        "s2xs2_cw.json": io.dump_document("cw", snxsm_complex(2, 2).to_dict()),
        "slie_xi.json": io.dump_document("linfty", io.linfty_to_dict(free_shifted_lie([("xi", 2)], 3))),
        "p1.json": scenario(s2s2, s2, [models.p1()]),
        "p2.json": scenario(s2s2, s2, [models.p2()]),
        "p1_vs_p2.json": scenario(s2s2, s2, [models.p1(), models.p2()], ["p1", "p2"]),
        "constant_s2.json": scenario(s2s2, s2, [models.constant_s2()]),
        "inclusion_y.json": scenario(s2s2, y, [models.inclusion_y()], options={"nodes": 16}),
        "constant_vs_inclusion.json": scenario(s2s2, y, [models.constant_y(), models.inclusion_y()],
                                               ["constant", "inclusion"], {"nodes": 16}),
        "hopf_s3.json": scenario(models.s3_source(), s2, [models.hopf_map()]),
        "gauge_distinct.json": io.dump_document("gauge", gauge_problem("z")),
        "gauge_equal.json": io.dump_document("gauge", gauge_problem("[x,[x,y]]")),
    }
    A, c = massey_model()
    files["massey.json"] = io.dump_document("dga", {**io.dga_to_dict(A), "contraction": io.contraction_to_dict(c)})
    A, c = s2xs2_form_model()
    files["s2xs2_forms.json"] = io.dump_document("dga", io.dga_to_dict(A))
    files["s2xs2_contraction.json"] = io.dump_document("contraction", io.contraction_to_dict(c))
    for name, data in files.items():
        io.write_json(OUT / name, data)
        print("wrote", OUT / name)


if __name__ == "__main__":
    main()
