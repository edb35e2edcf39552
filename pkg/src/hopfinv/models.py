"""Ready-made source and target models for the worked examples."""
from __future__ import annotations

import math
from fractions import Fraction

from .coalgebra import product_of_spheres, sphere_coalgebra
from .forms import (PI, DifferentialForm, ParametrizedCycle, SmoothMapSpec, add, const, div, mul, power,
                    solid_angle_form, sphere_cycle, var)
from .freelie import free_shifted_lie
from .pipeline import SourceModel, TargetModel

R6 = ("x", "y", "z", "u", "v", "w")
R3 = ("x", "y", "z")
C2 = ("x1", "y1", "x2", "y2")


def s2xs2_source() -> SourceModel:
    """S^2 x S^2 inside R^6 with alpha = S^2 x {(1,0,0)}, beta = {(1,0,0)} x S^2, gamma = everything."""
    alpha = _reorder(sphere_cycle(("x", "y", "z"), {"u": 1, "v": 0, "w": 0}, name="alpha"), R6)
    beta = _reorder(sphere_cycle(("u", "v", "w"), {"x": 1, "y": 0, "z": 0}, name="beta"), R6)
    g = SmoothMapSpec(("t1", "p1", "t2", "p2"), R6, [
        "sin(t1)*cos(p1)", "sin(t1)*sin(p1)", "cos(t1)", "sin(t2)*cos(p2)", "sin(t2)*sin(p2)", "cos(t2)"],
        name="gamma")
    gamma = ParametrizedCycle((("t1", 0, math.pi), ("p1", 0, 2 * math.pi), ("t2", 0, math.pi),
                               ("p2", 0, 2 * math.pi)), g, 1, "gamma")
    return SourceModel(product_of_spheres(2, 2), R6, {"alpha": alpha, "beta": beta, "gamma": gamma},
                       name="S2xS2")


def _reorder(cyc: ParametrizedCycle, chart) -> ParametrizedCycle:
    e = cyc.embedding
    comp = dict(zip(e.target, e.components))
    return ParametrizedCycle(cyc.params, SmoothMapSpec(e.source, chart, [comp[c] for c in chart], e.name),
                             cyc.orientation, cyc.name)


def s2_target() -> TargetModel:
    """R^3 minus the origin: sLie(xi) up to degree 3, q(xi) = omega, q([xi,xi]) = (omega, omega)."""
    L = free_shifted_lie([("xi", 2)], 3, name="sLie(xi)")
    return TargetModel(L, R3, {"omega": solid_angle_form(R3)},
                       {"xi": {1: [(1, ("omega",))]}, "[xi,xi]": {2: [(1, ("omega", "omega"))]}}, name="S2")


def zeta_form(normalized: bool = True) -> DifferentialForm:
    """x dy dz du dv - y dx dz du dv + z dx dy du dv - u dx dy dz dv + v dx dy dz du on R^6.

    normalized: divide by r^5 (r^2 = x^2+y^2+z^2+u^2+v^2) and by the volume 8 pi^2/3 of S^4,
    which makes it closed with integral 1 over the unit S^4.
    """
    xs = [var(c) for c in R6[:5]]
    pre = const(1)
    if normalized:
        r2 = add(*[power(x, 2) for x in xs])
        pre = div(const(3), mul(const(8), power(PI, 2), power(r2, Fraction(5, 2))))
    comps = {}
    for i in range(5):
        idx = tuple(j for j in range(5) if j != i)
        comps[idx] = mul(const(-1 if i % 2 else 1), pre, xs[i])
    return DifferentialForm(R6, 4, comps)


def y_target() -> TargetModel:
    """R^6 minus the w-axis, a model of S^4: sLie(zeta) up to degree 4."""
    L = free_shifted_lie([("zeta", 4)], 4, name="sLie(zeta)")
    return TargetModel(L, R6, {"zeta": zeta_form()}, {"zeta": {1: [(1, ("zeta",))]}}, name="Y")


def p1() -> SmoothMapSpec:
    return SmoothMapSpec(R6, R3, ["x", "y", "z"], name="p1")


def p2() -> SmoothMapSpec:
    return SmoothMapSpec(R6, R3, ["u", "v", "w"], name="p2")


def constant_s2() -> SmoothMapSpec:
    return SmoothMapSpec.constant(R6, R3, (0, 0, 1), "constant")


def inclusion_y() -> SmoothMapSpec:
    return SmoothMapSpec(R6, R6, list(R6), name="inclusion")


def constant_y() -> SmoothMapSpec:
    return SmoothMapSpec.constant(R6, R6, (1, 0, 0, 0, 0, 0), "constant")


def hopf_map() -> SmoothMapSpec:
    return SmoothMapSpec(C2, R3, ["2*(x1*x2 + y1*y2)", "2*(y1*x2 - x1*y2)", "x1^2 + y1^2 - x2^2 - y2^2"],
                         name="hopf")


def hopf_primitive() -> DifferentialForm:
    """(y1 dx1 - x1 dy1 + y2 dx2 - x2 dy2) / (2 pi): d of it is the pullback of omega on S^3."""
    return DifferentialForm.parse(C2, {"dx1": "y1/(2*pi)", "dy1": "-x1/(2*pi)",
                                       "dx2": "y2/(2*pi)", "dy2": "-x2/(2*pi)"})


def s3_source() -> SourceModel:
    """Unit S^3 in C^2 by Hopf coordinates; the parameter chart is inward, hence orientation -1."""
    emb = SmoothMapSpec(("eta", "xi1", "xi2"), C2, ["cos(eta)*cos(xi1)", "cos(eta)*sin(xi1)",
                                                    "sin(eta)*cos(xi2)", "sin(eta)*sin(xi2)"], name="S3")
    cyc = ParametrizedCycle((("eta", 0, math.pi / 2), ("xi1", 0, 2 * math.pi), ("xi2", 0, 2 * math.pi)),
                            emb, -1, "sigma")
    return SourceModel(sphere_coalgebra(3), C2, {"sigma": cyc},
                       primitives={("hopf", "omega"): hopf_primitive()}, name="S3")
