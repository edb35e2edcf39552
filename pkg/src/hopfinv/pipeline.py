"""From smooth maps to Maurer-Cartan elements.

lambda_ij = sum over weights n of the integral over alpha_i of the transferred
projection applied to f^* q_n(omega_j). Weight 1 is a plain pullback integral.
Weight 2 is  1/2 (a ^ hb + ha ^ b + (-1)^|a| ip(a) ^ hb + ha ^ ip(b))  with
a = f^*q, b = f^*q', h given by registered primitives (d h(x) = x on exact x)
and ip by registered harmonic representatives of the source.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .coalgebra import CInftyCoalgebra
from .convolution import ConvolutionAlgebra, HopfCoefficientMatrix, matrix_element, mc_in_convolution
from .cwtower import DISTINCT, AlgebraicCWComplex, Attach, TowerDecision, decide_gauge, realize
from .errors import ArgumentError, DomainError, InvalidMCError, UnsupportedError, UnsupportedWeightError
from .forms import (_is, DifferentialForm, Integral, ParametrizedCycle, SmoothMapSpec, default_threads,
                    gauss_grid, integrate, pullback_at, wedge_at)
from .linfty import LInftyAlgebra

SNAP_TOL = 1e-6


@dataclass
class TargetModel:
    """L with a cohomotopy basis dual to its basis and bar-word representatives.

    representatives: L label -> {weight: [(coeff, (form name, ...))]}.
    """
    L: LInftyAlgebra
    chart: tuple
    forms: dict
    representatives: dict
    name: str = "N"

    def __post_init__(self):
        self.chart = tuple(self.chart)
        for n, f in self.forms.items():
            if f.chart != self.chart:
                raise ArgumentError(f"form {n} is not on the target chart")
        clean = {}
        for l, reps in self.representatives.items():
            deg = self.L.space.degree(l)
            clean[l] = {}
            for w, terms in reps.items():
                w = int(w)
                out = []
                for c, word in terms:
                    word = tuple(word)
                    if len(word) != w:
                        raise ArgumentError(f"weight {w} representative of {l} has a word of length {len(word)}")
                    for a in word:
                        if a not in self.forms:
                            raise ArgumentError(f"unknown form {a} in the representative of {l}")
                    if sum(self.forms[a].degree for a in word) - (w - 1) != deg:
                        raise ArgumentError(f"representative word {word} of {l} has the wrong degree")
                    out.append((Fraction(c), word))
                clean[l][w] = out
        self.representatives = clean

    def max_weight(self) -> int:
        return max((w for r in self.representatives.values() for w in r), default=1)

    def check_closed(self, points=None, tol: float = 1e-8) -> list:
        """Weight-1 representative forms that fail d = 0 at sample points (outside singularities)."""
        rng = np.random.default_rng(0)
        pts = points if points is not None else rng.normal(size=(len(self.chart), 16)) * 1.3
        env = dict(zip(self.chart, pts))
        bad = []
        for l, reps in self.representatives.items():
            for c, word in reps.get(1, []):
                dw = self.forms[word[0]].d()
                for I, v in dw.evaluate(env).items():
                    v = np.asarray(v, dtype=float)
                    v = v[np.isfinite(v)]
                    if v.size and np.max(np.abs(v)) > tol:
                        bad.append(word[0])
                        break
        return sorted(set(bad))


@dataclass
class SourceModel:
    coalgebra: CInftyCoalgebra
    chart: tuple
    cycles: dict  # homology label -> ParametrizedCycle on chart
    primitives: dict = field(default_factory=dict)  # (map name, form name) -> form on chart
    harmonic: dict = field(default_factory=dict)  # homology label -> dual cohomology representative
    complex: AlgebraicCWComplex | None = None
    name: str = "M"

    def __post_init__(self):
        self.chart = tuple(self.chart)
        for l, c in self.cycles.items():
            if c.dimension != self.coalgebra.degree(l):
                raise ArgumentError(f"cycle for {l} has dimension {c.dimension}, class has degree "
                                    f"{self.coalgebra.degree(l)}")
            if c.ambient != self.chart:
                raise ArgumentError(f"cycle for {l} does not live on the source chart")
        missing = [l for l in self.coalgebra.labels if l not in self.cycles]
        if missing:
            raise ArgumentError(f"no cycle for homology classes {missing}")
        self.primitives = {tuple(k): v for k, v in self.primitives.items()}

    def cw_complex(self) -> AlgebraicCWComplex:
        if self.complex is not None:
            return self.complex
        return complex_from_coalgebra(self.coalgebra)


def complex_from_coalgebra(C: CInftyCoalgebra, name: str | None = None) -> AlgebraicCWComplex:
    """Cells = basis; each word of a cooperation becomes an attaching word with coefficient c/n!."""
    att = []
    for n, tab in sorted(C.cooperations.items()):
        for cell, words in tab.items():
            for w, c in words.items():
                att.append(Attach(cell, n, w, Fraction(c) / math.factorial(n)))
    for cell, img in C.differential.matrix.items():
        for x, c in img.items():
            att.append(Attach(cell, 1, (x,), c))
    K = AlgebraicCWComplex(C.space.basis, att, name=name or C.space.name)
    R = realize(K)
    if R.cooperations != C.cooperations:
        raise UnsupportedError("coalgebra is not cocommutative in the form the CW realisation needs")
    return K


def _composite_cycle(f: SmoothMapSpec, cyc: ParametrizedCycle) -> ParametrizedCycle:
    return ParametrizedCycle(cyc.params, f.compose(cyc.embedding), cyc.orientation, cyc.name)


def _vanishes(F: SmoothMapSpec) -> bool:
    """All Jacobian entries are symbolically zero: every positive-degree pullback is 0."""
    return all(_is(e, 0) for row in F.jacobian() for e in row)


def _top(comps: dict, k: int, npts: int):
    v = comps.get(tuple(range(k)))
    return np.zeros(npts) if v is None else np.broadcast_to(v, (npts,))


def _sum(vals, W, orientation) -> float:
    return orientation * math.fsum((vals * W).tolist())


def _weight1(f, src, form, cyc, nodes):
    comp = _composite_cycle(f, cyc)
    if form.degree > 0 and _vanishes(comp.embedding):
        return 0.0, 0.0
    r = integrate(form, comp, nodes)
    return r.value, r.error


def _finite(vals, pts, cyc):
    bad = ~np.isfinite(vals)
    if bad.any():
        j = int(np.argmax(bad))
        raise DomainError(f"non-finite integrand at node {({n: float(p[j]) for (n, _, _), p in zip(cyc.params, pts)})}")


def _period(src, f, form, nodes):
    """Periods of f^*form on the source cycles of its degree."""
    out = {}
    for l, cyc in src.cycles.items():
        if cyc.dimension == form.degree:
            out[l] = _weight1(f, src, form, cyc, nodes)[0]
    return out


def _weight2(f, src, tgt, a_name, b_name, cyc, nodes, tol=1e-8):
    a_form, b_form = tgt.forms[a_name], tgt.forms[b_name]
    comp = _composite_cycle(f, cyc)
    if _vanishes(f.compose(cyc.embedding)):
        return 0.0, 0.0
    for nm in (a_name, b_name):
        if (f.name, nm) not in src.primitives:
            raise UnsupportedWeightError(f"weight-2 term needs a primitive h(f*{nm}) for map {f.name}")
    ha, hb = src.primitives[(f.name, a_name)], src.primitives[(f.name, b_name)]
    # ip terms from registered harmonic representatives
    ip = {}
    for nm, form in ((a_name, a_form), (b_name, b_form)):
        per = _period(src, f, form, nodes)
        nz = {l: v for l, v in per.items() if abs(v) > tol}
        if nz and not src.harmonic:
            raise UnsupportedWeightError(f"f*{nm} is not exact and no harmonic representatives were registered")
        ip[nm] = nz
    ka, kb = a_form.degree, b_form.degree
    G = cyc.embedding

    def at(n):
        pts, W = gauss_grid(cyc.params, n)
        A = pullback_at(a_form, comp.embedding, pts)
        B = pullback_at(b_form, comp.embedding, pts)
        HA = pullback_at(ha, G, pts)
        HB = pullback_at(hb, G, pts)

        def harm(nm):
            acc: dict = {}
            for l, v in ip[nm].items():
                for k, x in pullback_at(src.harmonic[l], G, pts).items():
                    acc[k] = acc.get(k, 0.0) + v * x
            return acc

        sa = -1 if ka % 2 else 1
        tot: dict = {}
        for part, s in ((wedge_at(A, ka, HB, kb - 1), 1), (wedge_at(HA, ka - 1, B, kb), 1),
                        (wedge_at(harm(a_name), ka, HB, kb - 1), sa), (wedge_at(HA, ka - 1, harm(b_name), kb), 1)):
            for k, x in part.items():
                tot[k] = tot.get(k, 0.0) + s * x
        vals = 0.5 * _top(tot, cyc.dimension, len(W))
        _finite(vals, pts, cyc)
        return _sum(vals, W, cyc.orientation)

    hi, lo = at(nodes), at(max(nodes // 2, 2))
    return hi, abs(hi - lo)


def coefficient(f: SmoothMapSpec, src: SourceModel, tgt: TargetModel, i: str, j: str,
                weight_cutoff: int | None = None, nodes: int = 32) -> Integral:
    if f.source != src.chart or f.target != tgt.chart:
        raise ArgumentError(f"map {f.name} does not go from the source chart to the target chart")
    if src.coalgebra.degree(i) != tgt.L.space.degree(j):
        raise ArgumentError(f"degrees of {i} and {j} differ")
    cutoff = weight_cutoff if weight_cutoff is not None else tgt.max_weight()
    cyc = src.cycles[i]
    val = err = 0.0
    for w, terms in sorted(tgt.representatives.get(j, {}).items()):
        if w > cutoff:
            continue
        for c, word in terms:
            if w == 1:
                v, e = _weight1(f, src, tgt.forms[word[0]], cyc, nodes)
            elif w == 2:
                v, e = _weight2(f, src, tgt, word[0], word[1], cyc, nodes)
            else:
                raise UnsupportedWeightError(f"weight {w} terms need contraction data beyond weight 2")
            val += float(c) * v
            err += abs(float(c)) * e
    return Integral(val, err, nodes)


def validate_primitive(f: SmoothMapSpec, src: SourceModel, tgt: TargetModel, form: str,
                       nodes: int = 8) -> float:
    """max |d(beta) - f^*form| over the nodes of every source cycle of the right dimension."""
    beta = src.primitives.get((f.name, form))
    if beta is None:
        raise UnsupportedWeightError(f"no primitive registered for ({f.name}, {form})")
    a = tgt.forms[form]
    db = beta.d()
    worst = 0.0
    for cyc in src.cycles.values():
        if cyc.dimension < a.degree:
            continue
        pts, _ = gauss_grid(cyc.params, nodes)
        x = pullback_at(a, f.compose(cyc.embedding), pts)
        y = pullback_at(db, cyc.embedding, pts)
        for k in set(x) | set(y):
            diff = np.asarray(x.get(k, 0.0)) - np.asarray(y.get(k, 0.0))
            worst = max(worst, float(np.max(np.abs(diff))))
    return worst


def full_matrix(f: SmoothMapSpec, src: SourceModel, tgt: TargetModel, weight_cutoff: int | None = None,
                snap_tolerance: float = SNAP_TOL, nodes: int = 32, threads: int | None = None,
                check_mc: bool = True) -> HopfCoefficientMatrix:
    pairs = [(i, j) for i in src.coalgebra.labels for j in tgt.representatives
             if src.coalgebra.degree(i) == tgt.L.space.degree(j)]
    threads = threads or default_threads()

    def one(p):
        return coefficient(f, src, tgt, p[0], p[1], weight_cutoff, nodes)

    if threads > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            res = list(ex.map(one, pairs))
    else:
        res = [one(p) for p in pairs]
    M = HopfCoefficientMatrix.from_floats({p: r.value for p, r in zip(pairs, res)}, snap_tolerance,
                                          {p: r.error for p, r in zip(pairs, res)})
    if not M.is_exact():
        M.diagnostics.append(f"entries {M.unsnapped()} did not snap within {snap_tolerance}; "
                             "gauge decisions are blocked")
    elif check_mc:
        conv = ConvolutionAlgebra(src.coalgebra, tgt.L)
        try:
            mc_in_convolution(conv, M)
            M.mc_ok = True
        except InvalidMCError as exc:
            M.mc_ok = False
            M.diagnostics.append(f"inconsistent: snapped matrix is not Maurer-Cartan (residual {exc.residual}); "
                                 "weight cutoff too low or bad primitives")
    return M


def _require_exact(M: HopfCoefficientMatrix, what: str):
    if not M.is_exact():
        raise UnsupportedError(f"{what}: entries {M.unsnapped()} are not rational within the snap tolerance")


def homotopic_to_constant(f: SmoothMapSpec, src: SourceModel, tgt: TargetModel, nodes: int = 32,
                          weight_cutoff: int | None = None, snap_tolerance: float = SNAP_TOL) -> bool:
    from .cwtower import is_gauge_trivial
    M = full_matrix(f, src, tgt, weight_cutoff, snap_tolerance, nodes)
    _require_exact(M, f.name)
    conv = ConvolutionAlgebra(src.coalgebra, tgt.L)
    tau = matrix_element(conv, M)
    return is_gauge_trivial(src.cw_complex(), tgt.L, tau)


def compare_maps(f: SmoothMapSpec, g: SmoothMapSpec, src: SourceModel, tgt: TargetModel, nodes: int = 32,
                 weight_cutoff: int | None = None, snap_tolerance: float = SNAP_TOL) -> TowerDecision:
    Mf = full_matrix(f, src, tgt, weight_cutoff, snap_tolerance, nodes)
    Mg = full_matrix(g, src, tgt, weight_cutoff, snap_tolerance, nodes)
    _require_exact(Mf, f.name)
    _require_exact(Mg, g.name)
    conv = ConvolutionAlgebra(src.coalgebra, tgt.L)
    dec = decide_gauge(src.cw_complex(), tgt.L, matrix_element(conv, Mf), matrix_element(conv, Mg))
    dec.witness["matrices"] = {f.name: Mf, g.name: Mg}
    return dec


def is_distinct(dec: TowerDecision) -> bool:
    return dec.verdict == DISTINCT
