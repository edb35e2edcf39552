"""The ten acceptance criteria, one printed PASS/FAIL line each."""
import itertools
import random
import time
from fractions import Fraction

import pytest

from conftest import record
from hopfinv import models
from hopfinv.coalgebra import dualize, product_of_spheres
from hopfinv.convolution import ConvolutionAlgebra
from hopfinv.cwtower import DISTINCT, EQUAL, decide_gauge, realize, snxsm_complex, snxsm_decision
from hopfinv.forms import (DifferentialForm, SmoothMapSpec, add, const, cos, integrate, mul, parse,
                           poincare_homotopy, polynomial_form_equal, power, pullback, sin, sphere_cycle, to_string,
                           var, wedge)
from hopfinv.freelie import free_shifted_lie
from hopfinv.graded import GradedSpace
from hopfinv.htt import acyclic_extension, conjugate, massey_model, s2xs2_form_model, transfer_commutative
from hopfinv.htt import validate_contraction
from hopfinv.linfty import abelian, mc_residual
from hopfinv.pipeline import coefficient, full_matrix, homotopic_to_constant, validate_primitive

from oracles import free_lie_dims, massey_triple


def verdict(n, ok, detail):
    record(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    return ok


# ---- 1, 2: projections -----------------------------------------------------------------------

@pytest.mark.parametrize("n,f,expected", [(1, models.p1, (1, 0)), (2, models.p2, (0, 1))])
def test_projection(n, f, expected):
    src, tgt = models.s2xs2_source(), models.s2_target()
    t0 = time.perf_counter()
    M = full_matrix(f(), src, tgt, nodes=32)
    dt = time.perf_counter() - t0
    got = (M.entries[("alpha", "xi")].float_value, M.entries[("beta", "xi")].float_value)
    err = max(abs(g - e) for g, e in zip(got, expected))
    ok = err < 1e-6 and dt < 1.0
    assert verdict(n, ok, f"{f.__name__}: ({got[0]:.12f}, {got[1]:.12f}) err {err:.1e}, {dt:.2f} s")


# ---- 3: inclusion into Y ----------------------------------------------------------------------

def test_inclusion_into_y():
    src, tgt = models.s2xs2_source(), models.y_target()
    t0 = time.perf_counter()
    I = coefficient(models.inclusion_y(), src, tgt, "gamma", "zeta", nodes=16)
    dt = time.perf_counter() - t0
    ok = abs(I.value) < 1e-5 and dt < 30
    assert verdict(3, ok, f"integral of i*zeta = {I.value:.2e}, {dt:.2f} s")


# ---- 4: zero detection ------------------------------------------------------------------------

def test_zero_detection():
    s2s2, s2, y = models.s2xs2_source(), models.s2_target(), models.y_target()
    got = {"constant": homotopic_to_constant(models.constant_s2(), s2s2, s2),
           "inclusion_y": homotopic_to_constant(models.inclusion_y(), s2s2, y, nodes=16),
           "p1": homotopic_to_constant(models.p1(), s2s2, s2),
           "p2": homotopic_to_constant(models.p2(), s2s2, s2)}
    ok = got == {"constant": True, "inclusion_y": True, "p1": False, "p2": False}
    assert verdict(4, ok, " ".join(f"{k}={v}" for k, v in got.items()))


# ---- 5: MC set of the S^2 x S^2 convolution algebra -----------------------------------------------

@pytest.mark.xfail(strict=True, reason="l2 of the two degree-0 generators is -[xi,xi] on gamma, nonzero")
def test_mc_residual_vanishes():
    rng = random.Random(5)
    conv = ConvolutionAlgebra(product_of_spheres(2, 2), free_shifted_lie([("xi", 2)], 3))
    bad = []
    for _ in range(500):
        a, b = (Fraction(rng.randint(-20, 20), rng.randint(1, 9)) for _ in range(2))
        r = mc_residual(conv, conv.element({("alpha", "xi"): a, ("beta", "xi"): b}))
        if r:
            bad.append((a, b, r))
    a, b, r = bad[0] if bad else (0, 0, 0)
    detail = f"{500 - len(bad)}/500 pairs have zero residual"
    if bad:
        detail += f"; e.g. ({a}, {b}) -> {r}"
    assert verdict(5, not bad, detail)


# ---- 6: gauge decisions vs the closed form --------------------------------------------------------

def _targets():
    ab = GradedSpace("A", (("x", 2), ("y", 2), ("w", 4)))
    return {"abelian": abelian(ab), "sLie(x,y)": free_shifted_lie([("x", 2), ("y", 2)], 4),
            "sLie(x,y,z)": free_shifted_lie([("x", 2), ("y", 2), ("z", 4)], 4)}


def _random_mc(rng, conv, L):
    """Degree-0 element with theta = alpha or beta part; for a free L one of the two must vanish."""
    q = lambda: Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    low = L.space.labels_in_degree(2)
    top = L.space.labels_in_degree(4)
    c = {}
    sides = ["alpha", "beta"] if L.is_abelian() else [rng.choice(["alpha", "beta", None])]
    for side in sides:
        if side:
            for l in low:
                c[(side, l)] = q()
    for l in top:
        if rng.random() < 0.5:
            c[("gamma", l)] = q()
    return conv.element(c)


def test_gauge_decisions():
    rng = random.Random(6)
    K = snxsm_complex(2, 2)
    C = realize(K)
    t0 = time.perf_counter()
    mismatches, counts = [], {EQUAL: 0, DISTINCT: 0}
    for name, L in _targets().items():
        conv = ConvolutionAlgebra(C, L)
        for _ in range(200):
            tau = _random_mc(rng, conv, L)
            mode = rng.random()
            if mode < 0.4:
                # same alpha and beta parts, fresh gamma part
                kappa = conv.element({conv.pair(l): c for l, c in tau.items() if not l.startswith("phi[gamma")})
                for l in L.space.labels_in_degree(4):
                    if rng.random() < 0.5:
                        kappa = kappa + conv.element({("gamma", l): Fraction(rng.randint(-3, 3))})
            elif mode < 0.5:
                kappa = tau
            else:
                kappa = _random_mc(rng, conv, L)
            assert not mc_residual(conv, tau) and not mc_residual(conv, kappa)
            a, b = decide_gauge(K, L, tau, kappa), snxsm_decision(2, 2, L, tau, kappa)
            counts[a.verdict] += 1
            if (a.verdict, a.level) != (b.verdict, b.level):
                mismatches.append((name, tau, kappa, a, b))
    # the two published branches
    L = _targets()["sLie(x,y)"]
    conv = ConvolutionAlgebra(C, L)
    th = {("alpha", "x"): 1}
    branch_on = all(decide_gauge(K, L, conv.element(th), conv.element({**th, ("gamma", l): 1})).verdict == EQUAL
                    for l in L.space.labels_in_degree(4))
    branch_off = all(decide_gauge(K, L, conv.space.zero(), conv.element({("gamma", l): 1})).verdict == DISTINCT
                     for l in L.space.labels_in_degree(4))
    dt = time.perf_counter() - t0
    ok = not mismatches and branch_on and branch_off and dt < 10
    assert verdict(6, ok, f"600 pairs, {len(mismatches)} disagreements ({counts[EQUAL]} equal, "
                          f"{counts[DISTINCT]} distinct); theta!=0 surjective {branch_on}, "
                          f"theta=0 zero {branch_off}; {dt:.2f} s")


# ---- 7: homotopy transfer ---------------------------------------------------------------------

def _random_extension(rng):
    small = GradedSpace("S", tuple((f"s{k}", rng.randint(0, 4)) for k in range(rng.randint(0, 3))))
    pairs = [(f"u{k}", f"v{k}", rng.randint(1, 4)) for k in range(rng.randint(1, 4))]
    c = acyclic_extension(small, pairs, cohomological=rng.random() < 0.5)
    B = c.big.space
    g, gi = {}, {}
    for d in B.dims():
        labs = B.labels_in_degree(d)
        N = {(i, j): Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for i in range(len(labs)) for j in range(i)}
        inv = {}
        for i in range(len(labs)):
            for j in range(i):
                inv[(i, j)] = -N[(i, j)] - sum(N[(i, k)] * inv[(k, j)] for k in range(j + 1, i))
        for j, l in enumerate(labs):
            g[l] = B.vector({l: 1, **{labs[i]: N[(i, j)] for i in range(j + 1, len(labs))}})
            gi[l] = B.vector({l: 1, **{labs[i]: inv[(i, j)] for i in range(j + 1, len(labs))}})
    return conjugate(c, g, gi)


def test_homotopy_transfer():
    rng = random.Random(7)
    passed = sum(validate_contraction(_random_extension(rng)).ok for _ in range(100))
    A, c = s2xs2_form_model()
    ts = transfer_commutative(c, A, 3)
    rename = {"omega": "alpha^v", "psi": "beta^v", "omega.psi": "gamma^v"}
    got = {(rename[a], rename[b]): {rename[k]: x for k, x in v.items()} for (a, b), v in ts.product_table().items()}
    cup = {k: dict(v.items()) for k, v in dualize(product_of_spheres(2, 2)).table().items()}
    A, c = massey_model()
    m3 = {w: dict(v.items()) for w, v in transfer_commutative(c, A, 3).operations(3).items()}
    classes = set(c.small.space.labels)
    oracle = {}
    for w in itertools.product(["x", "y"], repeat=3):
        ref = {k: -v for k, v in massey_triple(A, classes, *w).items()}
        if ref:
            oracle[w] = ref
    ok = passed == 100 and got == cup and bool(m3) and m3 == oracle
    assert verdict(7, ok, f"{passed}/100 contractions valid; cup table match {got == cup}; "
                          f"m3 nonzero {bool(m3)} and matches oracle {m3 == oracle}")


# ---- 8: free Lie dimensions ---------------------------------------------------------------------

def test_free_lie_dimensions():
    profiles = [[("x", 2)], [("x", 2), ("y", 2)], [("x", 2), ("y", 3)]]
    bad = []
    for gens in profiles:
        L = free_shifted_lie(gens, 8)
        got = {d: n for d, n in L.space.dims().items() if n}
        ref = {d: n for d, n in free_lie_dims(gens, 8).items() if n}
        if got != ref:
            bad.append((gens, got, ref))
    assert verdict(8, not bad, f"{len(profiles) - len(bad)}/3 generator profiles match up to degree 8")


# ---- 9: exterior calculus ---------------------------------------------------------------------

CHART = ("x", "y", "z")


def _scalar(rng, chart=CHART, depth=2):
    kinds = ["const", "var", "add", "mul", "sin", "cos", "exp"] if depth else ["const", "var"]
    k = rng.choice(kinds)
    if k == "const":
        return const(rng.randint(-3, 3))
    if k == "var":
        return var(rng.choice(chart))
    if k in ("add", "mul"):
        a, b = _scalar(rng, chart, depth - 1), _scalar(rng, chart, depth - 1)
        return add(a, b) if k == "add" else mul(a, b)
    inner = _scalar(rng, chart, depth - 1)
    if k == "exp":
        return parse(f"exp(({to_string(inner)})/4)", chart)
    return (sin if k == "sin" else cos)(inner)


def _form(rng, k, chart=CHART):
    comps = {I: _scalar(rng, chart) for I in itertools.combinations(range(len(chart)), k) if rng.random() < 0.7}
    return DifferentialForm(chart, k, comps)


def _map(rng, source, target):
    return SmoothMapSpec(source, target, [_scalar(rng, source, 1) for _ in target])


def _max_gap(a, b, pts):
    worst = 0.0
    for p in pts:
        va, vb = a.evaluate(p), b.evaluate(p)
        for I in set(va) | set(vb):
            x, y = va.get(I, 0.0), vb.get(I, 0.0)
            worst = max(worst, abs(x - y) / max(1.0, abs(x), abs(y)))
    return worst


def _poly_form(rng, chart=("x", "y", "z", "u")):
    k = rng.randint(1, len(chart))
    comps = {}
    for I in itertools.combinations(range(len(chart)), k):
        if rng.random() < 0.5:
            comps[I] = add(*[mul(const(rng.randint(-3, 3)), *[power(var(v), rng.randint(0, 2)) for v in chart])
                             for _ in range(rng.randint(1, 3))])
    return DifferentialForm(chart, k, comps)


def test_exterior_calculus():
    rng = random.Random(9)
    pts = lambda dim: [[rng.uniform(-1, 1) for _ in range(dim)] for _ in range(50)]
    gaps = {"d2": 0.0, "leibniz": 0.0, "functorial": 0.0, "pullback_d": 0.0}
    for _ in range(20):
        w = _form(rng, rng.randint(0, 3))
        gaps["d2"] = max(gaps["d2"], _max_gap(w.d().d(), DifferentialForm.zero(CHART, w.degree), pts(3)))
        a, b = _form(rng, rng.randint(0, 1)), _form(rng, rng.randint(0, 1))
        rhs = a.d().wedge(b) + a.wedge(b.d()).scale(const(-1 if a.degree % 2 else 1))
        gaps["leibniz"] = max(gaps["leibniz"], _max_gap(wedge(a, b).d(), rhs, pts(3)))
        F, G = _map(rng, ("s", "t"), ("u", "v", "w")), _map(rng, ("u", "v", "w"), CHART)
        w = _form(rng, rng.randint(0, 2))
        gaps["functorial"] = max(gaps["functorial"],
                                 _max_gap(pullback(G.compose(F), w), pullback(F, pullback(G, w)), pts(2)))
        H = _map(rng, ("s", "t", "r"), CHART)
        gaps["pullback_d"] = max(gaps["pullback_d"], _max_gap(pullback(H, w.d()), pullback(H, w).d(), pts(3)))
    poincare = sum(polynomial_form_equal(poincare_homotopy(w).d() + poincare_homotopy(w.d()), w)
                   for w in (_poly_form(rng) for _ in range(100)))
    stokes = max(abs(integrate(_form(rng, 1).d(), sphere_cycle(), nodes=32).value) for _ in range(10))
    ok = max(gaps.values()) < 1e-10 and poincare == 100 and stokes < 1e-8
    assert verdict(9, ok, " ".join(f"{k} {v:.1e}" for k, v in gaps.items())
                   + f"; Poincare {poincare}/100; Stokes {stokes:.1e}")


# ---- 10: Hopf map -----------------------------------------------------------------------------

def test_hopf_map():
    src, tgt, f = models.s3_source(), models.s2_target(), models.hopf_map()
    t0 = time.perf_counter()
    prim = validate_primitive(f, src, tgt, "omega")
    c = coefficient(f, src, tgt, "sigma", "[xi,xi]")
    dt = time.perf_counter() - t0
    ok = prim <= 1e-6 and abs(c.value - 1) < 1e-3 and dt < 60
    assert verdict(10, ok, f"coefficient {c.value:.9f}, primitive error {prim:.1e}, {dt:.2f} s")
