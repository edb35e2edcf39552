import math

import pytest

from hopfinv import models
from hopfinv.coalgebra import product_of_spheres
from hopfinv.cwtower import DISTINCT, EQUAL, snxsm_complex
from hopfinv.errors import ArgumentError, UnsupportedError, UnsupportedWeightError
from hopfinv.forms import ParametrizedCycle, SmoothMapSpec, integrate, solid_angle_form
from hopfinv.pipeline import (SourceModel, TargetModel, coefficient, compare_maps, complex_from_coalgebra,
                              full_matrix, homotopic_to_constant, is_distinct, validate_primitive)


@pytest.fixture(scope="module")
def s2s2():
    return models.s2xs2_source()


@pytest.fixture(scope="module")
def s2():
    return models.s2_target()


def s4_cycle():
    """Unit S^4 in the first five coordinates of R^6 (w = 0)."""
    emb = SmoothMapSpec(("a", "b", "c", "t"), models.R6, [
        "cos(a)", "sin(a)*cos(b)", "sin(a)*sin(b)*cos(c)", "sin(a)*sin(b)*sin(c)*cos(t)",
        "sin(a)*sin(b)*sin(c)*sin(t)", "0"])
    return ParametrizedCycle((("a", 0, math.pi), ("b", 0, math.pi), ("c", 0, math.pi), ("t", 0, 2 * math.pi)), emb)


def test_zeta_is_a_unit_volume_form():
    zeta = models.zeta_form()
    assert abs(abs(integrate(zeta, s4_cycle(), nodes=16).value) - 1) < 1e-6
    assert models.y_target().check_closed() == []


def test_raw_zeta_is_not_closed():
    tgt = models.y_target()
    raw = TargetModel(tgt.L, tgt.chart, {"zeta": models.zeta_form(normalized=False)}, tgt.representatives)
    assert raw.check_closed() == ["zeta"]


def test_targets_are_closed():
    assert models.s2_target().check_closed() == []


def test_p1_and_p2(s2s2, s2):
    M = full_matrix(models.p1(), s2s2, s2)
    assert (M.value("alpha", "xi"), M.value("beta", "xi")) == (1, 0)
    assert M.mc_ok is True and not M.diagnostics
    M = full_matrix(models.p2(), s2s2, s2)
    assert (M.value("alpha", "xi"), M.value("beta", "xi")) == (0, 1)


def test_orientation_reversal(s2s2, s2):
    f = SmoothMapSpec(models.R6, models.R3, ["x", "y", "-z"], name="reflect")
    assert full_matrix(f, s2s2, s2).value("alpha", "xi") == -1


def test_threads_agree(s2s2, s2):
    a = full_matrix(models.p1(), s2s2, s2, threads=1)
    b = full_matrix(models.p1(), s2s2, s2, threads=3)
    assert a.to_dict() == b.to_dict()


def test_inconsistent_matrix_is_flagged(s2, s2s2):
    # register the alpha sphere for beta too: the snapped matrix is (1, 1), which is not MC
    alpha = s2s2.cycles["alpha"]
    bad = SourceModel(s2s2.coalgebra, s2s2.chart, {"alpha": alpha, "beta": alpha, "gamma": s2s2.cycles["gamma"]})
    M = full_matrix(models.p1(), bad, s2)
    assert M.mc_ok is False
    assert any(d.startswith("inconsistent") for d in M.diagnostics)


def test_unsnapped_entries_block_decisions(s2s2):
    tgt = models.s2_target()
    odd = TargetModel(tgt.L, tgt.chart, {"omega": solid_angle_form(scale="sqrt(2)/(8*pi)")}, tgt.representatives)
    M = full_matrix(models.p1(), s2s2, odd, snap_tolerance=1e-12)
    assert not M.is_exact() and "did not snap" in M.diagnostics[0]
    with pytest.raises(UnsupportedError):
        homotopic_to_constant(models.p1(), s2s2, odd, snap_tolerance=1e-12)


def test_zero_detection(s2s2, s2):
    assert homotopic_to_constant(models.constant_s2(), s2s2, s2)
    assert not homotopic_to_constant(models.p1(), s2s2, s2)
    assert homotopic_to_constant(models.inclusion_y(), s2s2, models.y_target(), nodes=16)


def test_compare(s2s2, s2):
    dec = compare_maps(models.p1(), models.p2(), s2s2, s2)
    assert dec.verdict == DISTINCT and dec.level == 2 and is_distinct(dec)
    assert set(dec.witness["matrices"]) == {"p1", "p2"}
    assert compare_maps(models.p1(), models.p1(), s2s2, s2).verdict == EQUAL


def test_hopf():
    src, tgt, f = models.s3_source(), models.s2_target(), models.hopf_map()
    assert validate_primitive(f, src, tgt, "omega") < 1e-6
    c = coefficient(f, src, tgt, "sigma", "[xi,xi]")
    assert abs(c.value - 1) < 1e-3 and c.error < 1e-6
    # weight 1 alone cannot see it
    assert coefficient(f, src, tgt, "sigma", "[xi,xi]", weight_cutoff=1).value == 0
    assert not homotopic_to_constant(f, src, tgt)


def test_hopf_without_primitive():
    src = models.s3_source()
    bare = SourceModel(src.coalgebra, src.chart, src.cycles)
    with pytest.raises(UnsupportedWeightError):
        coefficient(models.hopf_map(), bare, models.s2_target(), "sigma", "[xi,xi]")
    with pytest.raises(UnsupportedWeightError):
        validate_primitive(models.hopf_map(), bare, models.s2_target(), "omega")


def test_weight_three_is_refused(s2s2):
    tgt = models.s2_target()
    L = models.free_shifted_lie([("xi", 2), ("eta", 2)], 4)
    big = TargetModel(L, tgt.chart, tgt.forms, {"xi": {1: [(1, ("omega",))]},
                                                "[xi,[xi,eta]]": {3: [(1, ("omega",) * 3)]}})
    with pytest.raises(UnsupportedWeightError):
        coefficient(models.p1(), s2s2, big, "gamma", "[xi,[xi,eta]]")
    # below the cutoff the weight-3 word is simply skipped
    assert coefficient(models.p1(), s2s2, big, "gamma", "[xi,[xi,eta]]", weight_cutoff=2).value == 0


def test_argument_checks(s2s2, s2):
    with pytest.raises(ArgumentError):
        coefficient(models.p1(), s2s2, s2, "gamma", "xi")
    with pytest.raises(ArgumentError):
        coefficient(models.inclusion_y(), s2s2, s2, "alpha", "xi")
    with pytest.raises(ArgumentError):
        SourceModel(product_of_spheres(2, 2), models.R6, {"alpha": s2s2.cycles["alpha"]})
    with pytest.raises(ArgumentError):
        TargetModel(s2.L, s2.chart, s2.forms, {"xi": {2: [(1, ("omega", "omega"))]}})


def test_complex_from_coalgebra():
    K = complex_from_coalgebra(product_of_spheres(2, 3))
    ref = snxsm_complex(2, 3)
    assert K.cells == ref.cells
    assert K.minimal
