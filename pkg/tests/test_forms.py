import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from hopfinv.errors import ArgumentError, DomainError
from hopfinv.forms import (DifferentialForm, ParametrizedCycle, SmoothMapSpec, add, const, cos, differentiate,
                           evaluate, exterior_derivative, integrate, mul, parse, poincare_homotopy,
                           polynomial_form_equal, power, pullback, sin, solid_angle_form, sphere_cycle, to_string,
                           var, wedge)

from oracles import central_difference

CHART = ("x", "y", "z")
TOL = 1e-10

small_ints = st.integers(-3, 3)


@st.composite
def scalars(draw, chart=CHART, depth=2):
    """Random smooth expressions: polynomials, sin, cos, exp of polynomials."""
    kind = draw(st.sampled_from(["const", "var", "add", "mul", "sin", "cos", "exp"] if depth else ["const", "var"]))
    if kind == "const":
        return const(draw(small_ints))
    if kind == "var":
        return var(draw(st.sampled_from(chart)))
    if kind in ("add", "mul"):
        a, b = draw(scalars(chart, depth - 1)), draw(scalars(chart, depth - 1))
        return add(a, b) if kind == "add" else mul(a, b)
    inner = draw(scalars(chart, depth - 1))
    if kind == "exp":
        return parse(f"exp(({to_string(inner)})/4)", chart)
    return (sin if kind == "sin" else cos)(inner)


@st.composite
def forms(draw, degree=None, chart=CHART):
    k = draw(st.integers(0, len(chart))) if degree is None else degree
    idx = [I for I in _subsets(len(chart), k)]
    comps = {I: draw(scalars(chart)) for I in idx if draw(st.booleans())}
    return DifferentialForm(chart, k, comps)


def _subsets(n, k):
    from itertools import combinations
    return list(combinations(range(n), k))


def points(n, dim=3, seed=0):
    rng = random.Random(seed)
    return [[rng.uniform(-1, 1) for _ in range(dim)] for _ in range(n)]


def close(a: DifferentialForm, b: DifferentialForm, pts, tol=TOL) -> bool:
    for p in pts:
        va, vb = a.evaluate(p), b.evaluate(p)
        for I in set(va) | set(vb):
            x, y = va.get(I, 0.0), vb.get(I, 0.0)
            if abs(x - y) > tol * max(1.0, abs(x), abs(y)):
                return False
    return True


def vanishes(a: DifferentialForm, pts, tol=TOL) -> bool:
    return close(a, DifferentialForm.zero(a.chart, a.degree), pts, tol)


# ---- expressions -----------------------------------------------------------

def test_parse_and_print():
    e = parse("2*x^2 - sin(y)/3 + pi", CHART)
    assert evaluate(e, {"x": 1.0, "y": 0.0}) == pytest.approx(2 + math.pi)
    assert evaluate(parse(to_string(e), CHART), {"x": 0.3, "y": 0.7}) == pytest.approx(evaluate(e, {"x": 0.3, "y": 0.7}))
    with pytest.raises(ArgumentError):
        parse("x +", CHART)
    with pytest.raises(ArgumentError):
        parse("q + 1", CHART)


@given(scalars())
@settings(max_examples=50, deadline=None)
def test_derivative_matches_finite_differences(e):
    for p in points(3):
        env = lambda q: evaluate(e, dict(zip(CHART, q)))
        for i, v in enumerate(CHART):
            exact = evaluate(differentiate(e, v), dict(zip(CHART, p)))
            assert exact == pytest.approx(central_difference(env, p, i), rel=1e-6, abs=1e-6)


def test_differentiate_checks_scope():
    with pytest.raises(ArgumentError):
        differentiate(var("x"), "w", CHART)


# ---- forms ----------------------------------------------------------------

def test_form_construction():
    w = DifferentialForm.parse(CHART, {"dy^dx": "z"})
    assert w.components.keys() == {(0, 1)}
    assert w.evaluate([0, 0, 2.0])[(0, 1)] == -2.0
    assert DifferentialForm(CHART, 2, {(0, 0): var("x")}).is_zero()
    with pytest.raises(ArgumentError):
        DifferentialForm(CHART, 4)
    with pytest.raises(ArgumentError):
        DifferentialForm.parse(CHART, {"dw": "1"})
    assert DifferentialForm.from_dict(w.to_dict()).equals_symbolic(w)


def test_d_of_function_matches_finite_differences():
    f = parse("x*y^2 + sin(z)*x", CHART)
    df = DifferentialForm.function(CHART, f).d()
    for p in points(5):
        val = df.evaluate(p)
        for i in range(3):
            ref = central_difference(lambda q: evaluate(f, dict(zip(CHART, q))), p, i)
            assert val.get((i,), 0.0) == pytest.approx(ref, abs=1e-7)


def test_d_of_one_form_matches_finite_differences():
    a = DifferentialForm.parse(CHART, {"dx": "y*z", "dy": "x^2", "dz": "sin(x*y)"})
    da = a.d()
    comp = lambda j: (lambda q: a.evaluate(q).get((j,), 0.0))
    for p in points(5):
        val = da.evaluate(p)
        for i, j in ((0, 1), (0, 2), (1, 2)):
            ref = central_difference(comp(j), p, i) - central_difference(comp(i), p, j)
            assert val.get((i, j), 0.0) == pytest.approx(ref, abs=1e-7)


PTS = points(50, seed=1)


@given(forms())
@settings(max_examples=30, deadline=None)
def test_d_squared(w):
    assert vanishes(w.d().d(), PTS)


@given(forms(), forms())
@settings(max_examples=30, deadline=None)
def test_leibniz(a, b):
    if a.degree + b.degree >= len(CHART):
        return
    sign = -1 if a.degree % 2 else 1
    lhs = wedge(a, b).d()
    rhs = a.d().wedge(b) + a.wedge(b.d()).scale(const(sign))
    assert close(lhs, rhs, PTS)


def _random_map(draw, source, target):
    return SmoothMapSpec(source, target, [draw(scalars(source, 1)) for _ in target])


@given(st.data())
@settings(max_examples=25, deadline=None)
def test_pullback_functoriality(data):
    F = _random_map(data.draw, ("s", "t"), ("u", "v", "w"))
    G = _random_map(data.draw, ("u", "v", "w"), CHART)
    w = data.draw(forms(degree=data.draw(st.integers(0, 2))))
    lhs = pullback(G.compose(F), w)
    rhs = pullback(F, pullback(G, w))
    assert close(lhs, rhs, points(50, 2, seed=2))


@given(st.data())
@settings(max_examples=25, deadline=None)
def test_pullback_commutes_with_d(data):
    F = _random_map(data.draw, ("s", "t", "r"), CHART)
    w = data.draw(forms(degree=data.draw(st.integers(0, 2))))
    assert close(pullback(F, w.d()), pullback(F, w).d(), PTS)


def test_pullback_chart_mismatch():
    F = SmoothMapSpec(("s",), ("u", "v"), ["s", "s"])
    with pytest.raises(ArgumentError):
        pullback(F, DifferentialForm.function(CHART, var("x")))


@st.composite
def polynomial_forms(draw, chart=("x", "y", "z", "u")):
    k = draw(st.integers(1, len(chart)))
    comps = {}
    for I in _subsets(len(chart), k):
        if draw(st.booleans()):
            terms = []
            for _ in range(draw(st.integers(1, 3))):
                mono = [power(var(v), draw(st.integers(0, 2))) for v in chart]
                terms.append(mul(const(draw(small_ints)), *mono))
            comps[I] = add(*terms)
    return DifferentialForm(chart, k, comps)


@given(polynomial_forms())
@settings(max_examples=100, deadline=None)
def test_poincare_homotopy(w):
    K = poincare_homotopy
    assert polynomial_form_equal(K(w).d() + K(w.d()), w)


def test_poincare_on_functions_is_zero():
    assert poincare_homotopy(DifferentialForm.function(CHART, var("x"))).is_zero()


# ---- integration ------------------------------------------------------------

def test_solid_angle():
    om = solid_angle_form()
    assert vanishes(om.d(), [[p[0] + 2, p[1], p[2]] for p in PTS], 1e-9)
    I = integrate(om, sphere_cycle(), nodes=32)
    assert I.value == pytest.approx(1.0, abs=1e-12)
    assert I.error < 1e-8


@given(forms(degree=1))
@settings(max_examples=20, deadline=None)
def test_stokes_on_the_sphere(eta):
    assert abs(integrate(eta.d(), sphere_cycle(), nodes=32).value) < 1e-8


def test_orientation_and_pieces():
    om = solid_angle_form()
    S = sphere_cycle()
    flipped = ParametrizedCycle(S.params, S.embedding, -1, "S-")
    assert integrate(om, flipped).value == pytest.approx(-1.0)
    assert integrate(om, [(2, S), (-1, S)]).value == pytest.approx(1.0)


def test_integration_errors():
    S = sphere_cycle()
    with pytest.raises(ArgumentError):
        integrate(DifferentialForm.function(CHART, 1), S)
    with pytest.raises(ArgumentError):
        integrate(solid_angle_form(), S, nodes=1)
    square = ParametrizedCycle((("s", -1, 1), ("t", -1, 1)), SmoothMapSpec(("s", "t"), ("s", "t"), ["s", "t"]))
    w = DifferentialForm.parse(("s", "t"), {"ds^dt": "1/s"})
    with pytest.raises(DomainError):
        integrate(w, square, nodes=3)


def test_threads_do_not_change_the_result():
    om = solid_angle_form()
    one = integrate(om, sphere_cycle(), nodes=128, threads=1).value
    four = integrate(om, sphere_cycle(), nodes=128, threads=4).value
    assert one == four


def test_exterior_derivative_alias():
    w = DifferentialForm.parse(CHART, {"dx": "y"})
    assert exterior_derivative(w).equals_symbolic(w.d())
