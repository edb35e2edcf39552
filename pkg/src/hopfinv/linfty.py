"""Finite-type shifted L-infinity algebras.

Shifted convention: every bracket l_n has degree -1 and is graded symmetric,
swapping neighbours of degrees p, q costs (-1)^(pq). In this convention the
MC equation, twisting and pushforward carry no extra signs.

Brackets above ``max_arity`` are zero by declaration. A bracket whose output
would sit above ``max_degree`` is unknown, and asking for it raises
TruncationError instead of silently returning zero.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import ArgumentError, CoherenceError, InvalidMCError, TruncationError
from .graded import GradedSpace, GradedVector, koszul_sign_0


class LInftyAlgebra:
    def __init__(self, space: GradedSpace, max_arity: int, max_degree: int | None = None, name: str | None = None):
        self.space = space
        self.max_arity = max_arity
        self.max_degree = max_degree
        self.name = name or space.name
        self._order = {l: i for i, l in enumerate(space.labels)}
        self._cache: dict = {}

    # subclasses provide this, on tuples sorted by basis order
    def _basis_bracket(self, labels: tuple) -> GradedVector:
        raise NotImplementedError

    def _out_degree_ok(self, labels) -> bool:
        if self.max_degree is None:
            return True
        return sum(self.space.degree(l) for l in labels) - 1 <= self.max_degree

    def basis_bracket(self, labels: Sequence[str]) -> GradedVector:
        """l_n on basis elements in any order."""
        n = len(labels)
        if n == 0 or n > self.max_arity:
            return self.space.zero()
        degs = [self.space.degree(l) for l in labels]
        idx = sorted(range(n), key=lambda i: self._order[labels[i]])
        key = tuple(labels[i] for i in idx)
        sign = koszul_sign_0(idx, degs)
        if key not in self._cache:
            if not self._out_degree_ok(key):
                raise TruncationError(f"l_{n}{key} lands above degree {self.max_degree} in {self.name}")
            self._cache[key] = self._basis_bracket(key)
        v = self._cache[key]
        return v if sign == 1 else -v

    def bracket(self, *vectors: GradedVector) -> GradedVector:
        """Multilinear evaluation of l_n on arbitrary vectors."""
        n = len(vectors)
        for v in vectors:
            if v.space != self.space:
                raise ArgumentError(f"input not in {self.space.name}")
        out = self.space.zero()
        if n > self.max_arity or any(not v for v in vectors):
            return out
        acc: dict = {}
        for combo in itertools.product(*(list(v.items()) for v in vectors)):
            c = Fraction(1)
            for _, x in combo:
                c *= x
            for k, y in self.basis_bracket([l for l, _ in combo]).items():
                acc[k] = acc.get(k, 0) + c * y
        return GradedVector(self.space, acc)

    def power_bracket(self, n: int, tau: GradedVector, *rest: GradedVector) -> GradedVector:
        """l_{n+len(rest)}(tau, ..., tau, rest...) with tau repeated n times.

        tau has degree 0 so the repeated block is sign-free and can be summed over
        multisets with multinomial weights.
        """
        k = n + len(rest)
        if k == 0 or k > self.max_arity:
            return self.space.zero()
        if n and not tau:
            return self.space.zero()
        items = sorted(tau.items(), key=lambda t: self._order[t[0]])
        acc: dict = {}
        rest_items = [list(v.items()) for v in rest]
        for multiset in itertools.combinations_with_replacement(range(len(items)), n):
            counts: dict = {}
            for i in multiset:
                counts[i] = counts.get(i, 0) + 1
            mult = math.factorial(n)
            c = Fraction(1)
            for i, m in counts.items():
                mult //= math.factorial(m)
                c *= items[i][1] ** m
            c *= mult
            head = [items[i][0] for i in multiset]
            for combo in itertools.product(*rest_items):
                cc = c
                for _, x in combo:
                    cc *= x
                for lab, y in self.basis_bracket(head + [l for l, _ in combo]).items():
                    acc[lab] = acc.get(lab, 0) + cc * y
        return GradedVector(self.space, acc)

    def sorted_tuples(self, n: int, labels: Iterable[str] | None = None):
        labels = list(labels) if labels is not None else self.space.labels
        labels.sort(key=self._order.__getitem__)
        for t in itertools.combinations_with_replacement(labels, n):
            # repeated odd inputs vanish by symmetry
            if any(t[i] == t[i + 1] and self.space.degree(t[i]) % 2 for i in range(n - 1)):
                continue
            yield t

    def table(self, n: int, skip_truncated: bool = True) -> dict:
        """All nonzero l_n values on sorted basis tuples (truncated ones skipped)."""
        out = {}
        for t in self.sorted_tuples(n):
            if skip_truncated and not self._out_degree_ok(t):
                continue
            try:
                v = self.basis_bracket(t)
            except TruncationError:
                if skip_truncated:
                    continue
                raise
            if v:
                out[t] = v
        return out

    def is_abelian(self) -> bool:
        return all(not self.table(n) for n in range(1, self.max_arity + 1))

    def same_brackets(self, other: "LInftyAlgebra", arity: int | None = None) -> bool:
        if other.space != self.space:
            return False
        top = arity or max(self.max_arity, other.max_arity)
        return all(self.table(n) == other.table(n) for n in range(1, top + 1))


class TableLInfty(LInftyAlgebra):
    """L-infinity algebra given by explicit structure constants on sorted tuples."""

    def __init__(self, space, brackets: dict, max_arity=None, max_degree=None, name=None):
        arities = [n for n in brackets if brackets[n]]
        super().__init__(space, max_arity if max_arity is not None else max(arities, default=0), max_degree, name)
        self.brackets: dict = {}
        for n, tab in brackets.items():
            for labels, v in tab.items():
                if not isinstance(v, GradedVector):
                    v = GradedVector(space, v)
                labels = tuple(labels)
                if len(labels) != n:
                    raise ArgumentError(f"arity {n} entry has {len(labels)} inputs")
                degs = [space.degree(l) for l in labels]
                idx = sorted(range(n), key=lambda i: self._order[labels[i]])
                key = tuple(labels[i] for i in idx)
                v = v if koszul_sign_0(idx, degs) == 1 else -v
                if v:
                    d = v.degree()
                    if d != sum(degs) - 1:
                        raise ArgumentError(f"l_{n}{labels} has degree {d}, expected {sum(degs) - 1}")
                prev = self.brackets.setdefault(n, {}).get(key)
                if prev is not None and prev != v:
                    raise ArgumentError(f"conflicting values for l_{n}{key}")
                self.brackets[n][key] = v

    def _basis_bracket(self, labels):
        return self.brackets.get(len(labels), {}).get(labels, self.space.zero())


def abelian(space: GradedSpace, max_degree=None) -> TableLInfty:
    return TableLInfty(space, {}, max_arity=0, max_degree=max_degree)


def freeze(L: LInftyAlgebra) -> TableLInfty:
    """Materialise every bracket of a lazily defined algebra."""
    tabs = {n: L.table(n) for n in range(1, L.max_arity + 1)}
    return TableLInfty(L.space, tabs, max_arity=L.max_arity, max_degree=L.max_degree, name=L.name)


# ---- Maurer-Cartan --------------------------------------------------------

def _check_tau(L: LInftyAlgebra, tau: GradedVector):
    if tau.space != L.space:
        raise ArgumentError("element not in the algebra's space")
    if tau and tau.degree() != 0:
        raise ArgumentError(f"MC candidates have degree 0, got {tau.degree()}")


def mc_residual(L: LInftyAlgebra, tau: GradedVector) -> GradedVector:
    """sum_{n>=1} 1/n! l_n(tau, ..., tau)."""
    _check_tau(L, tau)
    out = L.space.zero()
    for n in range(1, L.max_arity + 1):
        out = out + L.power_bracket(n, tau) * Fraction(1, math.factorial(n))
    return out


def is_mc(L: LInftyAlgebra, tau: GradedVector) -> bool:
    return mc_residual(L, tau).is_zero()


class MCElement:
    """A verified Maurer-Cartan element."""

    def __init__(self, algebra: LInftyAlgebra, value: GradedVector):
        r = mc_residual(algebra, value)
        if r:
            raise InvalidMCError(f"not a Maurer-Cartan element, residual {r}", residual=r)
        self.algebra = algebra
        self.value = value

    def __repr__(self):
        return f"MCElement({self.value!r})"


def _as_vector(tau) -> GradedVector:
    return tau.value if isinstance(tau, MCElement) else tau


class TwistedLInfty(LInftyAlgebra):
    """L^tau with l_n^tau(x) = sum_m 1/m! l_{n+m}(tau^m, x)."""

    def __init__(self, base: LInftyAlgebra, tau: GradedVector):
        super().__init__(base.space, base.max_arity, base.max_degree, name=f"{base.name}^tau")
        self.base = base
        self.tau = tau

    def _basis_bracket(self, labels):
        n = len(labels)
        xs = [self.space.e(l) for l in labels]
        out = self.space.zero()
        for m in range(0, self.base.max_arity - n + 1):
            out = out + self.base.power_bracket(m, self.tau, *xs) * Fraction(1, math.factorial(m))
        return out

    def _out_degree_ok(self, labels):
        return self.base._out_degree_ok(labels)


def twist(L: LInftyAlgebra, tau) -> LInftyAlgebra:
    v = _as_vector(tau)
    _check_tau(L, v)
    r = mc_residual(L, v)
    if r:
        raise InvalidMCError(f"cannot twist by a non-MC element, residual {r}", residual=r)
    if not v:
        return L
    return TwistedLInfty(L, v)


def mc_set_of_twist(L: LInftyAlgebra, tau, sigma: GradedVector) -> bool:
    """Whether sigma is MC in L^tau; cross-checked against sigma + tau being MC in L."""
    t = _as_vector(tau)
    lhs = mc_residual(twist(L, t), sigma)
    rhs = mc_residual(L, sigma + t)
    if lhs.is_zero() != rhs.is_zero():
        raise CoherenceError("MC(L^tau) and the shifted MC(L) disagree")
    return lhs.is_zero()


# ---- infinity morphisms ---------------------------------------------------

class InfinityMorphism:
    """Components f_n, each symmetric of degree 0 in the shifted convention.

    ``component(n, labels)`` gives f_n on a basis tuple sorted in source order.
    """

    def __init__(self, source: LInftyAlgebra, target: LInftyAlgebra, max_arity: int,
                 component: Callable[[int, tuple], GradedVector], name: str = "f"):
        self.source = source
        self.target = target
        self.max_arity = max_arity
        self._component = component
        self._cache: dict = {}
        self.name = name

    @classmethod
    def from_tables(cls, source, target, tables: dict, name="f"):
        norm = {}
        order = source._order
        for n, tab in tables.items():
            for labels, v in tab.items():
                labels = tuple(labels)
                degs = [source.space.degree(l) for l in labels]
                idx = sorted(range(n), key=lambda i: order[labels[i]])
                key = tuple(labels[i] for i in idx)
                if not isinstance(v, GradedVector):
                    v = GradedVector(target.space, v)
                norm.setdefault(n, {})[key] = v if koszul_sign_0(idx, degs) == 1 else -v
        top = max((n for n in norm if norm[n]), default=0)
        return cls(source, target, top, lambda n, key: norm.get(n, {}).get(key, target.space.zero()), name)

    @classmethod
    def strict(cls, source, target, f1: dict):
        return cls.from_tables(source, target, {1: {(k,): v for k, v in f1.items()}})

    @classmethod
    def identity(cls, L: LInftyAlgebra):
        return cls(L, L, 1, lambda n, key: L.space.e(key[0]) if n == 1 else L.space.zero(), "id")

    def basis_component(self, labels: Sequence[str]) -> GradedVector:
        n = len(labels)
        if n == 0 or n > self.max_arity:
            return self.target.space.zero()
        degs = [self.source.space.degree(l) for l in labels]
        idx = sorted(range(n), key=lambda i: self.source._order[labels[i]])
        key = tuple(labels[i] for i in idx)
        if key not in self._cache:
            self._cache[key] = self._component(n, key)
        v = self._cache[key]
        return v if koszul_sign_0(idx, degs) == 1 else -v

    def apply(self, *vectors: GradedVector) -> GradedVector:
        acc: dict = {}
        for combo in itertools.product(*(list(v.items()) for v in vectors)):
            c = Fraction(1)
            for _, x in combo:
                c *= x
            for k, y in self.basis_component([l for l, _ in combo]).items():
                acc[k] = acc.get(k, 0) + c * y
        return GradedVector(self.target.space, acc)

    def power_apply(self, n: int, tau: GradedVector, *rest: GradedVector) -> GradedVector:
        k = n + len(rest)
        if k == 0 or k > self.max_arity or (n and not tau):
            return self.target.space.zero()
        return self.apply(*([tau] * n), *rest)

    def table(self, n: int) -> dict:
        out = {}
        for t in self.source.sorted_tuples(n):
            v = self.basis_component(t)
            if v:
                out[t] = v
        return out

    def same_components(self, other: "InfinityMorphism") -> bool:
        top = max(self.max_arity, other.max_arity)
        return all(self.table(n) == other.table(n) for n in range(1, top + 1))


def pushforward_mc(f: InfinityMorphism, tau) -> MCElement:
    """f_*(tau) = sum_n 1/n! f_n(tau, ..., tau), checked to be MC in the target."""
    t = _as_vector(tau)
    _check_tau(f.source, t)
    r = mc_residual(f.source, t)
    if r:
        raise InvalidMCError("pushforward needs an MC element", residual=r)
    out = f.target.space.zero()
    for n in range(1, f.max_arity + 1):
        out = out + f.power_apply(n, t) * Fraction(1, math.factorial(n))
    r = mc_residual(f.target, out)
    if r:
        raise CoherenceError(f"f_*(tau) is not MC in the target (residual {r}); f is not an infinity-morphism "
                             "at these cutoffs")
    return MCElement(f.target, out)


def twist_infinity_morphism(f: InfinityMorphism, tau, check: bool = True) -> InfinityMorphism:
    """f^tau_n(x) = sum_l 1/l! f_{n+l}(tau^l, x), a morphism L^tau -> M^{f_*(tau)}."""
    t = _as_vector(tau)
    if check:
        image = pushforward_mc(f, t).value
        source, target = twist(f.source, t), twist(f.target, image)
    else:
        source, target = f.source, f.target
    if not t:
        return InfinityMorphism(source, target, f.max_arity, lambda n, key: f.basis_component(key), f.name)

    def comp(n, key):
        xs = [f.source.space.e(l) for l in key]
        out = f.target.space.zero()
        for l in range(0, f.max_arity - n + 1):
            out = out + f.power_apply(l, t, *xs) * Fraction(1, math.factorial(l))
        return out

    return InfinityMorphism(source, target, f.max_arity, comp, f.name + "^tau")


# ---- generalized Jacobi ---------------------------------------------------

def _unshuffles(n: int, i: int):
    for first in itertools.combinations(range(n), i):
        rest = tuple(k for k in range(n) if k not in first)
        yield first + rest


class JacobiReport:
    def __init__(self):
        self.checked = 0
        self.skipped = 0
        self.violations: list = []  # (inputs, value)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __repr__(self):
        status = "pass" if self.ok else f"{len(self.violations)} violation(s)"
        return f"JacobiReport({status}, checked={self.checked}, skipped={self.skipped})"

    def lines(self) -> list[str]:
        out = [f"generalized Jacobi: checked {self.checked} tuples, skipped {self.skipped} (truncated)"]
        for t, v in self.violations:
            out.append(f"  FAIL on {t}: {v}")
        return out


def jacobiator(L: LInftyAlgebra, labels: Sequence[str]) -> GradedVector:
    n = len(labels)
    degs = [L.space.degree(l) for l in labels]
    out = L.space.zero()
    for i in range(1, n + 1):
        j = n + 1 - i
        if i > L.max_arity or j > L.max_arity:
            continue
        for perm in _unshuffles(n, i):
            sign = koszul_sign_0(perm, degs)
            inner = L.basis_bracket([labels[k] for k in perm[:i]])
            if not inner:
                continue
            rest = [L.space.e(labels[k]) for k in perm[i:]]
            term = L.bracket(inner, *rest)
            out = out + (term if sign == 1 else -term)
    return out


def check_generalized_jacobi(L: LInftyAlgebra, arity_cutoff: int, degree_window=None) -> JacobiReport:
    """Check the shifted L-infinity relations on all sorted basis tuples.

    ``degree_window`` = (lo, hi) restricts input degrees; tuples whose relation
    needs brackets beyond the truncation are counted as skipped.
    """
    rep = JacobiReport()
    labels = L.space.labels
    if degree_window is not None:
        lo, hi = degree_window
        labels = [l for l in labels if lo <= L.space.degree(l) <= hi]
    for n in range(1, arity_cutoff + 1):
        for t in L.sorted_tuples(n, labels):
            try:
                v = jacobiator(L, t)
            except TruncationError:
                rep.skipped += 1
                continue
            rep.checked += 1
            if v:
                rep.violations.append((t, v))
    return rep
