"""Finite-dimensional reduced C-infinity coalgebras and their duals.

Cooperations are stored per arity as tables label -> {word: coefficient}, with
words tuples of basis labels. All cooperations preserve total degree.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable

from .errors import ArgumentError, UnsupportedError
from .graded import GradedMap, GradedSpace, GradedVector, as_scalar, koszul_sign_0
from .report import Report


def _clean(words: dict) -> dict:
    return {tuple(w): as_scalar(c) for w, c in words.items() if as_scalar(c)}


def _add_into(acc: dict, word, c):
    v = acc.get(word, 0) + c
    if v:
        acc[word] = v
    else:
        acc.pop(word, None)


class CInftyCoalgebra:
    def __init__(self, space: GradedSpace, cooperations: dict | None = None,
                 differential: GradedMap | None = None, max_arity: int | None = None,
                 coassociative: bool = True):
        self.space = space
        self.cooperations = {}
        for n, tab in (cooperations or {}).items():
            n = int(n)
            if n < 2:
                raise ArgumentError("cooperations start in arity 2")
            t = {}
            for label, words in tab.items():
                space.degree(label)
                w = _clean(words)
                for word in w:
                    if len(word) != n:
                        raise ArgumentError(f"arity {n} cooperation of {label} has word {word}")
                    for x in word:
                        space.degree(x)
                if w:
                    t[label] = w
            if t:
                self.cooperations[n] = t
        self.differential = differential if differential is not None else GradedMap(space, space, -1, {})
        if self.differential.source != space or self.differential.target != space or \
                (self.differential.matrix and self.differential.degree != -1):
            raise ArgumentError("differential must be a degree -1 endomorphism of the space")
        self.max_arity = max_arity if max_arity is not None else max(self.cooperations, default=2)
        self.coassociative = coassociative

    @property
    def labels(self):
        return self.space.labels

    def degree(self, label):
        return self.space.degree(label)

    def coop(self, n: int, label: str) -> dict:
        if n > self.max_arity:
            return {}
        return self.cooperations.get(n, {}).get(label, {})

    def delta(self, label: str) -> dict:
        return self.coop(2, label)

    def is_minimal(self) -> bool:
        return self.differential.is_zero()

    def restrict(self, labels: Iterable[str], name: str | None = None) -> "CInftyCoalgebra":
        """Subcoalgebra on the given labels (must be closed under the structure)."""
        keep = [l for l in self.space.labels if l in set(labels)]
        sub = GradedSpace(name or self.space.name, tuple((l, self.degree(l)) for l in keep))
        coops = {n: {l: w for l, w in tab.items() if l in keep} for n, tab in self.cooperations.items()}
        for tab in coops.values():
            for l, words in tab.items():
                for word in words:
                    if any(x not in keep for x in word):
                        raise ArgumentError(f"{keep} is not a subcoalgebra: {l} -> {word}")
        dmat = {l: GradedVector(sub, self.differential.image(l).coeffs) for l in keep
                if self.differential.image(l)}
        return CInftyCoalgebra(sub, coops, GradedMap(sub, sub, -1, dmat), self.max_arity, self.coassociative)

    def __repr__(self):
        return f"CInftyCoalgebra({self.space.labels})"

    def to_dict(self) -> dict:
        out = {
            "basis": [{"label": l, "degree": d} for l, d in self.space.basis],
            "coproducts": [
                {"of": l, **({"arity": n} if n != 2 else {}),
                 "terms": [{"word": list(w), "coeff": str(c)} for w, c in words.items()]}
                for n, tab in sorted(self.cooperations.items()) for l, words in tab.items()
            ],
        }
        if not self.differential.is_zero():
            out["differential"] = [{"of": l, "image": {k: str(c) for k, c in v.items()}}
                                   for l, v in self.differential.matrix.items()]
        return out

    @classmethod
    def from_dict(cls, data: dict, name: str = "C") -> "CInftyCoalgebra":
        space = GradedSpace(name, tuple((b["label"], b["degree"]) for b in data["basis"]))
        coops: dict = {}
        for entry in data.get("coproducts", []):
            n = int(entry.get("arity", 2))
            words = coops.setdefault(n, {}).setdefault(entry["of"], {})
            for t in entry["terms"]:
                _add_into(words, tuple(t["word"]), Fraction(t["coeff"]))
        d = {e["of"]: {k: Fraction(c) for k, c in e["image"].items()} for e in data.get("differential", [])}
        return cls(space, coops, GradedMap(space, space, -1, d))


def sphere_coalgebra(n: int, label: str = "sigma") -> CInftyCoalgebra:
    if n < 2:
        raise UnsupportedError("sphere coalgebras are 1-reduced: n >= 2")
    return CInftyCoalgebra(GradedSpace(f"S{n}", ((label, n),)))


def disk_coalgebra(n: int, labels=("alpha", "beta")) -> CInftyCoalgebra:
    """Two cells alpha (degree n-1) and beta (degree n) with d(beta) = alpha."""
    a, b = labels
    space = GradedSpace(f"D{n}", ((a, n - 1), (b, n)))
    d = GradedMap(space, space, -1, {b: space.e(a)})
    return CInftyCoalgebra(space, {}, d)


def sphere_product(dims, labels=None, name=None) -> CInftyCoalgebra:
    """Reduced homology coalgebra of S^{n1} x ... x S^{nk}.

    Basis: one class per nonempty subset of factors; the reduced coproduct
    splits a subset into two nonempty ordered pieces with the Koszul sign of the
    shuffle.
    """
    dims = list(dims)
    if any(n < 2 for n in dims):
        raise UnsupportedError("sphere factors must have dimension >= 2")
    k = len(dims)
    subsets = [s for r in range(1, k + 1) for s in itertools.combinations(range(k), r)]
    if labels is None:
        labels = {s: "x" + "".join(str(i + 1) for i in s) for s in subsets}
    deg = {s: sum(dims[i] for i in s) for s in subsets}
    space = GradedSpace(name or "x".join(f"S{n}" for n in dims), tuple((labels[s], deg[s]) for s in subsets))
    delta = {}
    for s in subsets:
        words = {}
        for r in range(1, len(s)):
            for first in itertools.combinations(s, r):
                rest = tuple(i for i in s if i not in first)
                perm = [s.index(i) for i in first + rest]
                sign = koszul_sign_0(perm, [dims[i] for i in s])
                words[(labels[first], labels[rest])] = Fraction(sign)
        if words:
            delta[labels[s]] = words
    return CInftyCoalgebra(space, {2: delta})


def product_of_spheres(n: int, m: int) -> CInftyCoalgebra:
    """H_*(S^n x S^m): alpha, beta, gamma with Delta(gamma) = alpha(x)beta + (-1)^{nm} beta(x)alpha."""
    if n < 2 or m < 2:
        raise UnsupportedError("product_of_spheres needs n, m >= 2")
    names = {(0,): "alpha", (1,): "beta", (0, 1): "gamma"}
    return sphere_product([n, m], labels=names, name=f"S{n}xS{m}")


# ---- validation -----------------------------------------------------------

def _apply_delta_at(C: CInftyCoalgebra, words: dict, pos: int) -> dict:
    """Apply Delta_2 to tensor factor ``pos`` of every word (Koszul sign is trivial: Delta has degree 0)."""
    out: dict = {}
    for w, c in words.items():
        for (a, b), x in C.delta(w[pos]).items():
            _add_into(out, w[:pos] + (a, b) + w[pos + 1:], c * x)
    return out


def _d_on_words(C: CInftyCoalgebra, words: dict) -> dict:
    out: dict = {}
    for w, c in words.items():
        before = 0
        for i, x in enumerate(w):
            s = -1 if before % 2 else 1
            for y, e in C.differential.image(x).items():
                _add_into(out, w[:i] + (y,) + w[i + 1:], s * c * e)
            before += C.degree(x)
    return out


def validate(C: CInftyCoalgebra) -> Report:
    rep = Report("coalgebra")
    sp = C.space
    rep.ran("1-reduced")
    for l, d in sp.basis:
        if d < 2:
            rep.fail("1-reduced", l, f"degree {d} < 2")
    rep.ran("degree")
    for n, tab in C.cooperations.items():
        for l, words in tab.items():
            for w in words:
                if sum(sp.degree(x) for x in w) != sp.degree(l):
                    rep.fail("degree", l, f"word {w} has total degree {sum(sp.degree(x) for x in w)}")
    rep.ran("cocommutativity")
    for n, tab in C.cooperations.items():
        for l, words in tab.items():
            for perm in itertools.permutations(range(n)):
                moved: dict = {}
                for w, c in words.items():
                    s = koszul_sign_0(perm, [sp.degree(x) for x in w])
                    _add_into(moved, tuple(w[i] for i in perm), s * c)
                if moved != words:
                    rep.fail("cocommutativity", l, f"arity {n} cooperation not symmetric under {perm}")
                    break
    if C.coassociative:
        rep.ran("coassociativity")
        for l in sp.labels:
            d = C.delta(l)
            if _apply_delta_at(C, d, 0) != _apply_delta_at(C, d, 1):
                rep.fail("coassociativity", l)
    rep.ran("conilpotence")
    for l in sp.labels:
        words = {(l,): Fraction(1)}
        for _ in range(sp.dim + 1):
            if not words:
                break
            nxt: dict = {}
            for w, c in words.items():
                for pos in range(len(w)):
                    for ww, cc in _apply_delta_at(C, {w: c}, pos).items():
                        _add_into(nxt, ww, cc)
            words = nxt
        if words:
            rep.fail("conilpotence", l, "iterated coproduct does not vanish")
    rep.ran("d^2 = 0")
    dd = C.differential
    for l in sp.labels:
        if dd(dd(sp.e(l))):
            rep.fail("d^2 = 0", l)
    rep.ran("chain map")
    for n, tab in C.cooperations.items():
        for l in sp.labels:
            lhs: dict = {}
            for y, e in dd.image(l).items():
                for w, c in C.coop(n, y).items():
                    _add_into(lhs, w, e * c)
            rhs = _d_on_words(C, C.coop(n, l))
            if lhs != rhs:
                rep.fail("chain map", l, f"Delta_{n} does not commute with d")
    return rep


# ---- duals ----------------------------------------------------------------

def _dual_label(l: str) -> str:
    return l[:-2] if l.endswith("^v") else l + "^v"


def _pairing_sign(word, degrees) -> int:
    # <a1^v (x) ... (x) an^v, a1 (x) ... (x) an>: a_j^v passes a_i for i < j
    s = 0
    for j in range(len(word)):
        for i in range(j):
            s += degrees[word[j]] * degrees[word[i]]
    return -1 if s % 2 else 1


class FiniteCInftyAlgebra:
    """Finite-dimensional C-infinity algebra with operations m_n on ordered words."""

    def __init__(self, space: GradedSpace, operations: dict, differential: GradedMap | None = None):
        self.space = space
        self.operations = {n: {tuple(w): v for w, v in tab.items() if v} for n, tab in operations.items()}
        self.differential = differential if differential is not None else GradedMap(space, space, 1, {})

    def product(self, *labels: str) -> GradedVector:
        return self.operations.get(len(labels), {}).get(tuple(labels), self.space.zero())

    def mul(self, a: GradedVector, b: GradedVector) -> GradedVector:
        acc = self.space.zero()
        for x, c in a.items():
            for y, e in b.items():
                acc = acc + self.product(x, y) * (c * e)
        return acc

    def table(self) -> dict:
        return {w: v for w, v in self.operations.get(2, {}).items()}


def dualize(obj):
    """Linear dual: a coalgebra becomes an algebra and vice versa (double dual is the identity)."""
    if isinstance(obj, CInftyCoalgebra):
        sp = obj.space
        dsp = GradedSpace(sp.name + "^v", tuple((_dual_label(l), d) for l, d in sp.basis))
        degs = dict(sp.basis)
        ops: dict = {}
        for n, tab in obj.cooperations.items():
            for c, words in tab.items():
                for w, x in words.items():
                    key = tuple(_dual_label(a) for a in w)
                    s = _pairing_sign(w, degs)
                    prev = ops.setdefault(n, {}).get(key, dsp.zero())
                    ops[n][key] = prev + dsp.e(_dual_label(c)) * (s * x)
        dmat: dict = {}
        for c in sp.labels:
            for a, x in obj.differential.image(c).items():
                prev = dmat.get(_dual_label(a), dsp.zero())
                dmat[_dual_label(a)] = prev + dsp.e(_dual_label(c)) * x
        return FiniteCInftyAlgebra(dsp, ops, GradedMap(dsp, dsp, 1, dmat))
    if isinstance(obj, FiniteCInftyAlgebra):
        sp = obj.space
        csp = GradedSpace(sp.name[:-2] if sp.name.endswith("^v") else sp.name + "^v",
                          tuple((_dual_label(l), d) for l, d in sp.basis))
        degs = dict(sp.basis)
        coops: dict = {}
        for n, tab in obj.operations.items():
            for w, v in tab.items():
                s = _pairing_sign(w, degs)
                for c, x in v.items():
                    words = coops.setdefault(n, {}).setdefault(_dual_label(c), {})
                    _add_into(words, tuple(_dual_label(a) for a in w), s * x)
        dmat: dict = {}
        for a in sp.labels:
            for c, x in obj.differential.image(a).items():
                prev = dmat.get(_dual_label(c), csp.zero())
                dmat[_dual_label(c)] = prev + csp.e(_dual_label(a)) * x
        return CInftyCoalgebra(csp, coops, GradedMap(csp, csp, -1, dmat))
    raise ArgumentError(f"cannot dualize {type(obj).__name__}")
