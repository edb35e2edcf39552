"""Free shifted Lie algebras.

A generator of shifted degree d is desuspended to degree d - 1, the free graded
Lie (super)algebra is built there from Lyndon words, and the result is
resuspended. Basis: standard bracketings of Lyndon words, plus the squares
[b, b] of odd ones. Elements are realised in the tensor algebra, which is
also where structure constants are read off.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import UnsupportedError
from .graded import GradedSpace, GradedVector, rref
from .linfty import TableLInfty

# noncommutative polynomials: {word tuple: Fraction}


def _poly_add(a, b, s=1):
    out = dict(a)
    for w, c in b.items():
        v = out.get(w, 0) + s * c
        if v:
            out[w] = v
        else:
            out.pop(w, None)
    return out


def _poly_mul(a, b):
    out: dict = {}
    for u, x in a.items():
        for v, y in b.items():
            w = u + v
            out[w] = out.get(w, 0) + x * y
    return {w: c for w, c in out.items() if c}


def supercommutator(a, da: int, b, db: int):
    """[a, b] = ab - (-1)^(da db) ba for homogeneous a, b of (desuspended) degrees da, db."""
    s = -1 if (da * db) % 2 else 1
    return _poly_add(_poly_mul(a, b), _poly_mul(b, a), -s)


def lyndon_words(n_letters: int, max_len: int):
    """Duval's algorithm: all Lyndon words up to max_len, in lexicographic order."""
    if n_letters == 0:
        return
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == n_letters - 1:
            w.pop()


def standard_factorization(w: tuple):
    """w = uv with v the longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        v = w[i:]
        if _is_lyndon(v):
            return w[:i], v
    raise ValueError(w)


def _is_lyndon(w):
    return all(w < w[i:] for i in range(1, len(w)))


class _Element:
    __slots__ = ("label", "poly", "deg")

    def __init__(self, label, poly, deg):
        self.label, self.poly, self.deg = label, poly, deg


def free_shifted_lie(generators, max_degree: int, name: str = "sLie") -> TableLInfty:
    """Free shifted Lie algebra on (label, degree) generators, truncated above max_degree.

    Only l_2 is nonzero. Basis labels are bracket expressions such as "[x,[x,y]]".
    """
    gens = [(str(l), int(d)) for l, d in generators]
    for l, d in gens:
        if d < 2:
            raise UnsupportedError(f"generator {l} has degree {d}; only simply-connected (degree >= 2) is supported")
    if not gens:
        L = TableLInfty(GradedSpace(name, ()), {}, max_arity=2, max_degree=max_degree, name=name)
        L.free_generators = []
        return L

    dprime = [d - 1 for _, d in gens]  # desuspended degrees, all >= 1
    top = max_degree - 1  # desuspended cutoff
    min_d = min(dprime)
    max_len = max(top // min_d, 0)

    elems: dict[tuple, _Element] = {}

    def build(w):
        if w in elems:
            return elems[w]
        if len(w) == 1:
            i = w[0]
            e = _Element(gens[i][0], {(i,): Fraction(1)}, dprime[i])
        else:
            u, v = standard_factorization(w)
            a, b = build(u), build(v)
            e = _Element(f"[{a.label},{b.label}]", supercommutator(a.poly, a.deg, b.poly, b.deg), a.deg + b.deg)
        elems[w] = e
        return e

    basis: list[_Element] = []
    for w in lyndon_words(len(gens), max_len):
        deg = sum(dprime[i] for i in w)
        if deg > top:
            continue
        e = build(w)
        basis.append(e)
    for e in list(basis):
        if e.deg % 2 and 2 * e.deg <= top:
            basis.append(_Element(f"[{e.label},{e.label}]", supercommutator(e.poly, e.deg, e.poly, e.deg), 2 * e.deg))
    basis.sort(key=lambda e: (e.deg, len(e.label), e.label))

    space = GradedSpace(name, tuple((e.label, e.deg + 1) for e in basis))

    # coordinates per degree: rref of [basis polys | identity]
    by_deg: dict[int, list[int]] = {}
    for k, e in enumerate(basis):
        by_deg.setdefault(e.deg, []).append(k)
    coords = {}
    for deg, ks in by_deg.items():
        words = sorted(set().union(*(basis[k].poly for k in ks)))
        rows = [[basis[k].poly.get(w, Fraction(0)) for w in words] + [Fraction(int(j == i)) for j in range(len(ks))]
                for i, k in enumerate(ks)]
        m, piv = rref(rows)
        if len(piv) != len(ks) or any(p >= len(words) for p in piv):
            raise AssertionError("free Lie basis is not linearly independent")
        coords[deg] = (words, ks, m, piv)

    def express(poly, deg):
        words, ks, m, piv = coords[deg]
        out: dict = {}
        for row, p in zip(m, piv):
            d = poly.get(words[p], 0)
            if d:
                for i, k in enumerate(ks):
                    c = row[len(words) + i]
                    if c:
                        out[basis[k].label] = out.get(basis[k].label, 0) + d * c
        return out

    table = {}
    for a in range(len(basis)):
        for b in range(a, len(basis)):
            ea, eb = basis[a], basis[b]
            deg = ea.deg + eb.deg
            if deg > top:
                continue
            poly = supercommutator(ea.poly, ea.deg, eb.poly, eb.deg)
            if not poly:
                continue
            if deg not in coords:
                raise AssertionError(f"nonzero bracket in degree {deg} with empty basis")
            vec = express(poly, deg)
            # shifted bracket l2(a, b) = (-1)^{|a'|} [a', b']
            sign = -1 if ea.deg % 2 else 1
            table[(ea.label, eb.label)] = GradedVector(space, {k: sign * c for k, c in vec.items()})
    L = TableLInfty(space, {2: table}, max_arity=2, max_degree=max_degree, name=name)
    L.realization = {e.label: (e.poly, e.deg) for e in basis}
    L.free_generators = gens
    return L
