"""Contractions of chain complexes and homotopy transfer for dg commutative algebras.

Orientation: a homological contraction has d of degree -1, h of degree +1 and
dh + hd = ip - Id. A cohomological one has d of degree +1, h of degree -1 and
dh + hd = Id - ip (the Hodge-theory convention).

Transfer is computed in the bar (shifted) picture, where every sign is a plain
Koszul sign of shifted degrees |sa| = |a| - 1. The transferred operations are
the planar binary tree sums with i on leaves, h on internal edges and p at the
root.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ArgumentError, InvalidInputError
from .graded import (GradedMap, GradedSpace, GradedVector, compose, identity, koszul_sign_0, membership_in_span,
                     nullspace)
from .report import Report

TENSOR = "⊗"


@dataclass(frozen=True)
class ChainComplex:
    space: GradedSpace
    d: GradedMap

    def __post_init__(self):
        if self.d.source != self.space or self.d.target != self.space:
            raise ArgumentError("differential must be an endomorphism of the space")
        if self.d.matrix and self.d.degree not in (1, -1):
            raise ArgumentError(f"differential has degree {self.d.degree}")
        if not compose(self.d, self.d).is_zero():
            raise InvalidInputError("d o d != 0")

    @classmethod
    def minimal(cls, space: GradedSpace, degree: int = -1) -> "ChainComplex":
        return cls(space, GradedMap(space, space, degree, {}))


def _diff_map(f: GradedMap, g: GradedMap) -> list:
    """Labels on which two maps with the same source differ."""
    return [k for k in f.source.labels if f.image(k) != g.image(k)]


@dataclass
class Contraction:
    big: ChainComplex
    small: ChainComplex
    i: GradedMap
    p: GradedMap
    h: GradedMap
    cohomological: bool = False
    check: bool = True

    def __post_init__(self):
        B, S = self.big.space, self.small.space
        for name, f, src, tgt in (("i", self.i, S, B), ("p", self.p, B, S), ("h", self.h, B, B)):
            if f.source != src or f.target != tgt:
                raise ArgumentError(f"{name} has the wrong source or target")
        hd = -1 if self.cohomological else 1
        if self.i.matrix and self.i.degree != 0 or self.p.matrix and self.p.degree != 0:
            raise ArgumentError("i and p must have degree 0")
        if self.h.matrix and self.h.degree != hd:
            raise ArgumentError(f"h must have degree {hd}")
        if self.check:
            bad = [f for f in _boundary_failures(self)]
            if bad:
                raise InvalidInputError("contraction fails " + "; ".join(str(f) for f in bad))

    @property
    def h_degree(self) -> int:
        return -1 if self.cohomological else 1

    def ip(self) -> GradedMap:
        return compose(self.i, self.p)


def _boundary_failures(c: Contraction):
    rep = Report("contraction")
    _check_boundaries(c, rep)
    return rep.failures


def _check_boundaries(c: Contraction, rep: Report):
    dB, dS = c.big.d, c.small.d
    for name, f, src, tgt in (("di", c.i, dS, dB), ("dp", c.p, dB, dS)):
        rep.ran(name)
        lhs, rhs = compose(tgt, f), compose(f, src)
        for k in _diff_map(lhs, rhs):
            rep.fail(name, k, f"d{name[1]} != {name[1]}d")
    rep.ran("dh")
    B = c.big.space
    dh = compose(dB, c.h)
    hd = compose(c.h, dB)
    ip = c.ip()
    for k in B.labels:
        lhs = dh.image(k) + hd.image(k)
        rhs = B.e(k) - ip.image(k) if c.cohomological else ip.image(k) - B.e(k)
        if lhs != rhs:
            rep.fail("dh", k, f"dh + hd = {lhs}, expected {rhs}")


def validate_contraction(c: Contraction) -> Report:
    """All seven identities, on every basis element, exactly."""
    rep = Report("contraction")
    _check_boundaries(c, rep)
    S, B = c.small.space, c.big.space
    rep.ran("pi")
    pi = compose(c.p, c.i)
    for k in S.labels:
        if pi.image(k) != S.e(k):
            rep.fail("pi", k, f"pi = {pi.image(k)}")
    for name, f, src in (("ph", compose(c.p, c.h), B), ("hh", compose(c.h, c.h), B), ("hi", compose(c.h, c.i), S)):
        rep.ran(name)
        for k in src.labels:
            if f.image(k):
                rep.fail(name, k, f"{name} = {f.image(k)}")
    return rep


def acyclic_extension(small: GradedSpace, pairs, cohomological: bool = False, name: str = "V") -> Contraction:
    """small (with zero differential) plus acyclic pairs (u, v) with d u = v.

    pairs: iterable of (u_label, v_label, degree of u). h sends v back to +-u.
    """
    step = 1 if cohomological else -1
    basis = list(small.basis)
    dmat, hmat = {}, {}
    for u, v, du in pairs:
        basis += [(u, du), (v, du + step)]
    B = GradedSpace(name, tuple(basis))
    for u, v, du in pairs:
        dmat[u] = B.e(v)
        hmat[v] = B.e(u) * (1 if cohomological else -1)
    i = GradedMap(small, B, 0, {l: B.e(l) for l in small.labels})
    p = GradedMap(B, small, 0, {l: small.e(l) for l in small.labels})
    return Contraction(ChainComplex(B, GradedMap(B, B, step, dmat)),
                       ChainComplex.minimal(small, step), i, p,
                       GradedMap(B, B, -step, hmat), cohomological)


def standard_contraction(cx: ChainComplex, cohomological: bool = False, name: str = "H") -> Contraction:
    """Contraction of a finite complex onto a chosen basis of its homology.

    Per degree V = B + H + C with B = d(C); h inverts d on B and kills H and C.
    A homology class whose representative is a basis vector keeps its label.
    """
    V = cx.space
    d = cx.d
    step = 1 if cohomological else -1
    if d.matrix and d.degree != step:
        raise ArgumentError(f"differential has degree {d.degree}, expected {step}")
    # complements C of the cycles, and boundaries d(C)
    comp: dict[int, list[GradedVector]] = {}
    for k in sorted(V.dims()):
        Z: list[GradedVector] = []
        labels = V.labels_in_degree(k)
        cols = [[d.image(l)[t] for t in V.labels] for l in labels]
        for x in nullspace(cols, len(V.labels)):
            Z.append(V.vector({l: c for l, c in zip(labels, x) if c}))
        chosen = list(Z)
        comp[k] = []
        for l in labels:
            if membership_in_span(V.e(l), chosen) is None:
                chosen.append(V.e(l))
                comp[k].append(V.e(l))
    small_basis, reps = [], []
    for k in sorted(V.dims()):
        bnd = [d(c) for c in comp.get(k - step, [])]
        Z_cols = []
        labels = V.labels_in_degree(k)
        cols = [[d.image(l)[t] for t in V.labels] for l in labels]
        for x in nullspace(cols, len(V.labels)):
            Z_cols.append(V.vector({l: c for l, c in zip(labels, x) if c}))
        have = list(bnd)
        cands = [V.e(l) for l in labels] + Z_cols
        j = 0
        for z in cands:
            if d(z) or membership_in_span(z, have) is not None:
                continue
            have.append(z)
            lab = next(iter(z.coeffs)) if len(z.coeffs) == 1 and z[next(iter(z.coeffs))] == 1 else f"H{k}_{j}"
            small_basis.append((lab, k))
            reps.append(z)
            j += 1
    S = GradedSpace(name, tuple(small_basis))
    i = GradedMap(S, V, 0, {l: z for (l, _), z in zip(small_basis, reps)})
    # coordinates in the basis bnd + reps + comp, degree by degree
    pmat, hmat = {}, {}
    for k in sorted(V.dims()):
        bnd_src = comp.get(k - step, [])
        bnd = [d(c) for c in bnd_src]
        hs = [(l, z) for (l, dk), z in zip(small_basis, reps) if dk == k]
        basis = bnd + [z for _, z in hs] + comp[k]
        for l in V.labels_in_degree(k):
            x = membership_in_span(V.e(l), basis)
            pv = S.vector({hl: x[len(bnd) + a] for a, (hl, _) in enumerate(hs) if x[len(bnd) + a]})
            if pv:
                pmat[l] = pv
            hv = V.zero()
            for a, c in enumerate(bnd_src):
                if x[a]:
                    hv = hv + c * x[a]
            if hv:
                hmat[l] = hv * (1 if cohomological else -1)
    return Contraction(cx, ChainComplex.minimal(S, step), i, GradedMap(V, S, 0, pmat),
                       GradedMap(V, V, -step, hmat), cohomological)


def conjugate(c: Contraction, g: dict, ginv: dict) -> Contraction:
    """Transport a contraction along a degree-preserving automorphism g of the big space.

    g, ginv: label -> GradedVector, mutually inverse.
    """
    B = c.big.space
    G = GradedMap(B, B, 0, g)
    Gi = GradedMap(B, B, 0, ginv)
    if compose(G, Gi) != identity(B):
        raise ArgumentError("g and ginv are not inverse")
    d = compose(G, compose(c.big.d, Gi))
    h = compose(G, compose(c.h, Gi))
    return Contraction(ChainComplex(B, d), c.small, compose(G, c.i), compose(c.p, Gi), h,
                       c.cohomological, c.check)


# ---- tensor powers ----------------------------------------------------------

def tensor_label(word) -> str:
    return TENSOR.join(word)


def tensor_power(space: GradedSpace, n: int) -> GradedSpace:
    basis = []
    for word in itertools.product(space.labels, repeat=n):
        basis.append((tensor_label(word), sum(space.degree(x) for x in word)))
    return GradedSpace(f"{space.name}^{n}", tuple(basis))


def _add(acc: dict, key, c):
    v = acc.get(key, 0) + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


def _permute(word, perm, par):
    """Koszul-signed reordering of a word (perm as in koszul_sign_0)."""
    return tuple(word[k] for k in perm), koszul_sign_0(perm, [par(x) for x in word])


def _hn_words(c: Contraction, word, par) -> dict:
    """sum_{p+1+q=n} Id^p (x) h (x) (ip)^q on a word; par gives the parities used for signs."""
    ip = c.ip()
    out: dict = {}
    n = len(word)
    hpar = c.h_degree % 2
    for pos in range(n):
        sign = -1 if hpar and sum(par(x) for x in word[:pos]) % 2 else 1
        partial = {word[:pos]: Fraction(sign)}
        factors = [c.h.image(word[pos])] + [ip.image(x) for x in word[pos + 1:]]
        for f in factors:
            nxt: dict = {}
            for w, a in partial.items():
                for l, b in f.items():
                    _add(nxt, w + (l,), a * b)
            partial = nxt
            if not partial:
                break
        for w, a in partial.items():
            _add(out, w, a)
    return out


def _hn_sym_words(c: Contraction, word, par) -> dict:
    n = len(word)
    out: dict = {}
    scale = Fraction(1, math.factorial(n))
    for perm in itertools.permutations(range(n)):
        w, s = _permute(word, perm, par)
        inv = [0] * n
        for a, b in enumerate(perm):
            inv[b] = a
        for u, x in _hn_words(c, w, par).items():
            u2, s2 = _permute(u, inv, par)
            _add(out, u2, scale * s * s2 * x)
    return out


def tensor_homotopy(c: Contraction, n: int, symmetric: bool = True, shifted: bool = False) -> GradedMap:
    """h_n (or its symmetrisation (1/n!) sum sigma^-1 h_n sigma) on the n-fold tensor power."""
    if n < 1:
        raise ArgumentError("n must be >= 1")
    B = c.big.space
    if n == 1:
        return c.h
    par = _parity(B, shifted)
    T = tensor_power(B, n)
    fn = _hn_sym_words if symmetric else _hn_words
    mat = {}
    for word in itertools.product(B.labels, repeat=n):
        img = fn(c, word, par)
        if img:
            mat[tensor_label(word)] = T.vector({tensor_label(u): x for u, x in img.items()})
    return GradedMap(T, T, c.h_degree, mat)


def _parity(space: GradedSpace, shifted: bool):
    if shifted:
        return lambda x: (space.degree(x) + 1) % 2
    return lambda x: space.degree(x) % 2


# ---- dg commutative algebras -------------------------------------------------

@dataclass
class CommutativeDGA:
    """Finite-dimensional dg graded-commutative algebra (not necessarily unital)."""
    complex: ChainComplex
    product: dict  # (a, b) -> GradedVector

    def __post_init__(self):
        sp = self.space
        self.product = {tuple(k): (v if isinstance(v, GradedVector) else sp.vector(v))
                        for k, v in self.product.items()}
        self.product = {k: v for k, v in self.product.items() if v}

    @property
    def space(self) -> GradedSpace:
        return self.complex.space

    def mul_labels(self, a: str, b: str) -> GradedVector:
        return self.product.get((a, b), self.space.zero())

    def mul(self, u: GradedVector, v: GradedVector) -> GradedVector:
        out: dict = {}
        for a, x in u.items():
            for b, y in v.items():
                for k, z in self.mul_labels(a, b).items():
                    _add(out, k, x * y * z)
        return GradedVector(self.space, out)

    def validate(self) -> Report:
        rep = Report("dg commutative algebra")
        sp, d = self.space, self.complex.d
        L = sp.labels
        for k in ("degree", "commutativity", "associativity", "leibniz"):
            rep.ran(k)
        for (a, b), v in self.product.items():
            if v.degree() != sp.degree(a) + sp.degree(b):
                rep.fail("degree", (a, b))
        for a in L:
            for b in L:
                s = -1 if sp.degree(a) * sp.degree(b) % 2 else 1
                if self.mul_labels(a, b) != self.mul_labels(b, a) * s:
                    rep.fail("commutativity", (a, b))
                ab = self.mul_labels(a, b)
                lhs = d(ab)
                sa = -1 if sp.degree(a) % 2 else 1
                rhs = self.mul(d.image(a), sp.e(b)) + self.mul(sp.e(a), d.image(b)) * sa
                if lhs != rhs:
                    rep.fail("leibniz", (a, b), f"d(ab) = {lhs}, d(a)b +- a d(b) = {rhs}")
                for c in L:
                    if self.mul(ab, sp.e(c)) != self.mul(sp.e(a), self.mul_labels(b, c)):
                        rep.fail("associativity", (a, b, c))
        return rep


def free_exterior(generators, differential: dict | None = None, name: str = "Lambda") -> CommutativeDGA:
    """Non-unital free graded-commutative algebra on odd generators (words of length >= 1).

    generators: [(label, odd degree)]; differential: generator -> {product label: coeff},
    where product labels are concatenations in generator order, e.g. "xy".
    """
    gens = [(str(l), int(d)) for l, d in generators]
    if any(d % 2 == 0 for _, d in gens):
        raise ArgumentError("free_exterior only takes odd generators")
    monos = [s for r in range(1, len(gens) + 1) for s in itertools.combinations(range(len(gens)), r)]
    lab = {s: "".join(gens[k][0] for k in s) for s in monos}
    deg = {s: sum(gens[k][1] for k in s) for s in monos}
    sp = GradedSpace(name, tuple((lab[s], deg[s]) for s in monos))
    prod: dict = {}
    for s in monos:
        for t in monos:
            if set(s) & set(t):
                continue
            w = s + t
            perm = sorted(range(len(w)), key=lambda k: w[k])
            sign = koszul_sign_0(perm, [gens[k][1] for k in w])
            prod[(lab[s], lab[t])] = sp.e(lab[tuple(sorted(w))]) * sign
    alg = CommutativeDGA(ChainComplex.minimal(sp, 1), prod)
    dgen = {g: sp.vector(v) for g, v in (differential or {}).items()}

    def dmono(s):
        # d(x1...xk) = sum (-1)^{|x1..x_{j-1}|} x1..d(xj)..xk
        out = sp.zero()
        before = 0
        for j, k in enumerate(s):
            g = gens[k][0]
            if g in dgen:
                term = dgen[g]
                left = s[:j]
                right = s[j + 1:]
                if left:
                    term = alg.mul(sp.e(lab[left]), term)
                if right:
                    term = alg.mul(term, sp.e(lab[right]))
                out = out + term * (-1 if before % 2 else 1)
            before += gens[k][1]
        return out

    dmat = {lab[s]: dmono(s) for s in monos}
    cx = ChainComplex(sp, GradedMap(sp, sp, 1, {k: v for k, v in dmat.items() if v}))
    return CommutativeDGA(cx, prod)


# ---- transfer ---------------------------------------------------------------

@dataclass
class TransferredStructure:
    contraction: Contraction
    algebra: CommutativeDGA
    arity_cutoff: int
    symmetric: bool = True  # use the symmetrised h_n in the projection components
    shifted_operations: dict = field(default_factory=dict)  # n -> {small word: GradedVector}
    _leaf: dict = field(default_factory=dict, repr=False)
    _pcomp: dict = field(default_factory=dict, repr=False)

    @property
    def small(self) -> GradedSpace:
        return self.contraction.small.space

    @property
    def big(self) -> GradedSpace:
        return self.contraction.big.space

    @property
    def hsign(self) -> int:
        # the shifted homotopy H satisfies b1 H + H b1 = IP - 1
        return -1 if self.contraction.cohomological else 1

    def _spar(self, space, x):
        return (space.degree(x) + 1) % 2

    # shifted binary product on the big algebra: b2(sa, sb) = (-1)^{|sa|} s(ab)
    def _b2(self, u: GradedVector, v: GradedVector) -> GradedVector:
        out = self.big.zero()
        for a, x in u.items():
            s = -1 if self._spar(self.big, a) else 1
            for b, y in v.items():
                out = out + self.algebra.mul_labels(a, b) * (s * x * y)
        return out

    def _tree(self, word) -> GradedVector:
        """Sum over planar binary trees, before the root projection."""
        out = self.big.zero()
        for k in range(1, len(word)):
            out = out + self._b2(self.leaf(word[:k]), self.leaf(word[k:]))
        return out

    def leaf(self, word) -> GradedVector:
        word = tuple(word)
        if word not in self._leaf:
            if len(word) == 1:
                v = self.contraction.i.image(word[0])
            else:
                v = self.contraction.h(self._tree(word)) * self.hsign
            self._leaf[word] = v
        return self._leaf[word]

    def shifted_operation(self, word) -> GradedVector:
        word = tuple(word)
        n = len(word)
        if n < 2:
            return self.small.zero()
        if n > self.arity_cutoff:
            raise ArgumentError(f"arity {n} is above the cutoff {self.arity_cutoff}")
        tab = self.shifted_operations.setdefault(n, {})
        if word not in tab:
            tab[word] = self.contraction.p(self._tree(word))
        return tab[word]

    def operation(self, *labels) -> GradedVector:
        """Unshifted m_n, with m_2 = p mu (i (x) i)."""
        n = len(labels)
        e = sum((n - k) * (self.small.degree(x) + 1) for k, x in enumerate(labels, start=1))
        v = self.shifted_operation(labels)
        return v * -1 if e % 2 else v

    def product(self, a, b) -> GradedVector:
        return self.operation(a, b)

    def product_table(self) -> dict:
        L = self.small.labels
        return {(a, b): self.product(a, b) for a in L for b in L if self.product(a, b)}

    def operations(self, n: int) -> dict:
        L = self.small.labels
        out = {}
        for w in itertools.product(L, repeat=n):
            v = self.operation(*w)
            if v:
                out[w] = v
        return out

    # inclusion and projection infinity-morphism components (shifted picture)
    def i_component(self, word) -> GradedVector:
        return self.leaf(tuple(word))

    def p_component(self, word) -> GradedVector:
        word = tuple(word)
        if word in self._pcomp:
            return self._pcomp[word]
        c = self.contraction
        n = len(word)
        if n == 1:
            v = c.p.image(word[0])
        else:
            par = lambda x: self._spar(self.big, x)
            v = self.small.zero()
            hn = _hn_sym_words if self.symmetric else _hn_words
            for u, x in hn(c, word, par).items():
                before = 0
                for k in range(n - 1):
                    prod = self._b2(self.big.e(u[k]), self.big.e(u[k + 1]))
                    sk = -1 if before % 2 else 1
                    for m, y in prod.items():
                        v = v + self.p_component(u[:k] + (m,) + u[k + 2:]) * (x * y * sk)
                    before += par(u[k])
            v = v * self.hsign
        self._pcomp[word] = v
        return v


def transfer_commutative(c: Contraction, algebra: CommutativeDGA, arity_cutoff: int = 3,
                         symmetric: bool = True) -> TransferredStructure:
    if algebra.space != c.big.space:
        raise ArgumentError("the algebra does not live on the big space of the contraction")
    if algebra.complex.d != c.big.d:
        raise ArgumentError("the algebra differential differs from the contraction's")
    rep = algebra.validate()
    if not rep.ok:
        raise InvalidInputError("product is not a dg commutative algebra:\n" + str(rep))
    if arity_cutoff < 2:
        raise ArgumentError("arity_cutoff must be >= 2")
    return TransferredStructure(c, algebra, arity_cutoff, symmetric)


# ---- coherence checks ---------------------------------------------------------

def check_ainfty(ts: TransferredStructure, max_arity: int | None = None) -> Report:
    """sum b_{r+1+t}(1^r (x) b_s (x) 1^t) = 0 on every small word, in the shifted picture."""
    n_max = max_arity or ts.arity_cutoff
    S = ts.small
    rep = Report("A-infinity relations")
    par = lambda x: (S.degree(x) + 1) % 2
    for n in range(3, n_max + 1):
        rep.ran(f"arity {n}")
        for word in itertools.product(S.labels, repeat=n):
            tot = S.zero()
            for s in range(2, n):
                for r in range(0, n - s + 1):
                    sign = -1 if sum(par(x) for x in word[:r]) % 2 else 1
                    inner = ts.shifted_operation(word[r:r + s])
                    for m, y in inner.items():
                        tot = tot + ts.shifted_operation(word[:r] + (m,) + word[r + s:]) * (sign * y)
            if tot:
                rep.fail(f"arity {n}", tensor_label(word), str(tot))
    return rep


def check_projection_morphism(ts: TransferredStructure, n: int, words=None) -> Report:
    """P o b_A = b_H o P on big words of length n (b_A has arity 1 and 2, b_H starts in arity 2)."""
    B, S = ts.big, ts.small
    rep = Report("projection morphism")
    rep.ran(f"arity {n}")
    par = lambda x: (B.degree(x) + 1) % 2
    d = ts.contraction.big.d
    for word in (words if words is not None else itertools.product(B.labels, repeat=n)):
        word = tuple(word)
        lhs = S.zero()
        for r in range(n):
            sign = -1 if sum(par(x) for x in word[:r]) % 2 else 1
            for m, y in d.image(word[r]).items():
                lhs = lhs + ts.p_component(word[:r] + (m,) + word[r + 1:]) * (sign * y)
        for r in range(n - 1):
            sign = -1 if sum(par(x) for x in word[:r]) % 2 else 1
            for m, y in ts._b2(B.e(word[r]), B.e(word[r + 1])).items():
                lhs = lhs + ts.p_component(word[:r] + (m,) + word[r + 2:]) * (sign * y)
        rhs = S.zero()
        for k in range(2, n + 1):
            for cuts in itertools.combinations(range(1, n), k - 1):
                bounds = (0,) + cuts + (n,)
                parts = [ts.p_component(word[bounds[j]:bounds[j + 1]]) for j in range(k)]
                acc = {(): Fraction(1)}
                for pv in parts:
                    nxt: dict = {}
                    for w, a in acc.items():
                        for l, b in pv.items():
                            _add(nxt, w + (l,), a * b)
                    acc = nxt
                for w, a in acc.items():
                    rhs = rhs + ts.shifted_operation(w) * a
        if lhs != rhs:
            rep.fail(f"arity {n}", tensor_label(word), f"{lhs} != {rhs}")
    return rep


def check_inclusion_morphism(ts: TransferredStructure, n: int) -> Report:
    """I o b_H = b_A o I on small words of length n."""
    B, S = ts.big, ts.small
    rep = Report("inclusion morphism")
    rep.ran(f"arity {n}")
    par = lambda x: (S.degree(x) + 1) % 2
    d = ts.contraction.big.d
    for word in itertools.product(S.labels, repeat=n):
        lhs = B.zero()
        for s in range(2, n + 1):
            for r in range(0, n - s + 1):
                sign = -1 if sum(par(x) for x in word[:r]) % 2 else 1
                for m, y in ts.shifted_operation(word[r:r + s]).items():
                    lhs = lhs + ts.i_component(word[:r] + (m,) + word[r + s:]) * (sign * y)
        rhs = d(ts.i_component(word))
        for k in range(1, n):
            rhs = rhs + ts._b2(ts.i_component(word[:k]), ts.i_component(word[k:]))
        if lhs != rhs:
            rep.fail(f"arity {n}", tensor_label(word), f"{lhs} != {rhs}")
    return rep


def s2xs2_form_model() -> tuple[CommutativeDGA, Contraction]:
    """Finite dg commutative model of S^2 x S^2: classes omega, psi, omega.psi plus two
    acyclic pairs d u1 = v1, d u2 = v2 with omega u1 = u2, omega v1 = v2."""
    sp = GradedSpace("S2xS2-forms", (("omega", 2), ("psi", 2), ("omega.psi", 4),
                                     ("u1", 1), ("v1", 2), ("u2", 3), ("v2", 4)))
    e = sp.e
    prod = {("omega", "psi"): e("omega.psi"), ("psi", "omega"): e("omega.psi"),
            ("omega", "u1"): e("u2"), ("u1", "omega"): e("u2"),
            ("omega", "v1"): e("v2"), ("v1", "omega"): e("v2")}
    cx = ChainComplex(sp, GradedMap(sp, sp, 1, {"u1": e("v1"), "u2": e("v2")}))
    alg = CommutativeDGA(cx, prod)
    return alg, standard_contraction(cx, cohomological=True, name="H(S2xS2)")


def massey_model() -> tuple[CommutativeDGA, Contraction]:
    """Lambda(x, y, z) with dz = xy (all of degree 1); cohomology x, y, xz, yz, xyz, h(xy) = z."""
    A = free_exterior([("x", 1), ("y", 1), ("z", 1)], {"z": {"xy": 1}}, name="Lambda(x,y,z)")
    sp = A.space
    S = GradedSpace("H", tuple((l, sp.degree(l)) for l in ("x", "y", "xz", "yz", "xyz")))
    i = GradedMap(S, sp, 0, {l: sp.e(l) for l in S.labels})
    p = GradedMap(sp, S, 0, {l: S.e(l) for l in S.labels})
    h = GradedMap(sp, sp, -1, {"xy": sp.e("z")})
    return A, Contraction(A.complex, ChainComplex.minimal(S, 1), i, p, h, cohomological=True)
