"""Convolution shifted L-infinity algebras Hom(C, L).

Basis: phi[c,l] sends the coalgebra basis element c to the algebra basis
element l and kills the rest; its degree is |l| - |c|. Brackets:

    l_1(f)       = l_1^L o f - (-1)^{|f|} f o d_C
    l_n(f_1..f_n) = 1/n! sum_sigma +- l_n^L o (f_s(1) (x) ... (x) f_s(n)) o Delta_n

with the Koszul sign of permuting the f's (Hom degrees) times the sign of
passing each f past the coalgebra factors to its left.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .coalgebra import CInftyCoalgebra, FiniteCInftyAlgebra, dualize
from .errors import ArgumentError, InvalidMCError
from .graded import GradedSpace, GradedVector, koszul_sign_0, nullspace
from .linfty import InfinityMorphism, LInftyAlgebra, MCElement, mc_residual, twist, twist_infinity_morphism


def phi(c: str, l: str) -> str:
    return f"phi[{c},{l}]"


def parse_phi(label: str) -> tuple[str, str]:
    inner = label[4:-1]
    depth = 0
    for i, ch in enumerate(inner):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == "," and depth == 0:
            return inner[:i], inner[i + 1:]
    raise ArgumentError(f"not a convolution basis label: {label}")


class ConvolutionAlgebra(LInftyAlgebra):
    def __init__(self, coalgebra: CInftyCoalgebra, algebra: LInftyAlgebra, name: str | None = None):
        self.coalgebra = coalgebra
        self.algebra = algebra
        C, L = coalgebra, algebra
        basis = []
        self._pair = {}
        for c, dc in C.space.basis:
            for l, dl in L.space.basis:
                lab = phi(c, l)
                basis.append((lab, dl - dc))
                self._pair[lab] = (c, l)
        space = GradedSpace(name or f"Hom({C.space.name},{L.name})", tuple(basis))
        arity = min(max(C.cooperations, default=1), L.max_arity)
        arity = max(arity, 1)
        super().__init__(space, arity, None, name=space.name)

    def pair(self, label: str) -> tuple[str, str]:
        return self._pair[label]

    def labels_in_degree(self, d: int) -> list[str]:
        return self.space.labels_in_degree(d)

    def element(self, coeffs: dict) -> GradedVector:
        """Vector from {(c, l): value}."""
        return GradedVector(self.space, {phi(c, l): v for (c, l), v in coeffs.items()})

    def as_map(self, f: GradedVector) -> dict:
        """{c: vector in L} for a homogeneous or inhomogeneous element."""
        out: dict = {}
        for lab, x in f.items():
            c, l = self._pair[lab]
            out[c] = out.get(c, self.algebra.space.zero()) + self.algebra.space.e(l) * x
        return out

    def from_map(self, images: dict) -> GradedVector:
        acc = {}
        for c, v in images.items():
            for l, x in v.items():
                acc[phi(c, l)] = acc.get(phi(c, l), 0) + x
        return GradedVector(self.space, acc)

    def _basis_bracket(self, labels):
        C, L = self.coalgebra, self.algebra
        n = len(labels)
        out: dict = {}
        if n == 1:
            (lab,) = labels
            c, l = self._pair[lab]
            fdeg = self.space.degree(lab)
            if L.max_arity >= 1:
                for l2, x in L.basis_bracket([l]).items():
                    out[phi(c, l2)] = out.get(phi(c, l2), 0) + x
            s = -1 if fdeg % 2 else 1
            for c2 in C.space.labels:
                x = C.differential.image(c2)[c]
                if x:
                    out[phi(c2, l)] = out.get(phi(c2, l), 0) - s * x
            return GradedVector(self.space, out)
        pairs = [self._pair[lab] for lab in labels]
        fdegs = [self.space.degree(lab) for lab in labels]
        weight = Fraction(1, math.factorial(n))
        for c0 in C.space.labels:
            words = C.coop(n, c0)
            if not words:
                continue
            for sigma in itertools.permutations(range(n)):
                s_perm = koszul_sign_0(sigma, fdegs)
                srcs = tuple(pairs[k][0] for k in sigma)
                for w, coeff in words.items():
                    if w != srcs:
                        continue
                    # f_s(j) passes w_i for i < j
                    t = 0
                    for j in range(n):
                        for i in range(j):
                            t += fdegs[sigma[j]] * C.degree(w[i])
                    s = s_perm * (-1 if t % 2 else 1)
                    val = L.basis_bracket([pairs[k][1] for k in sigma])
                    for l2, x in val.items():
                        key = phi(c0, l2)
                        out[key] = out.get(key, 0) + weight * s * coeff * x
        return GradedVector(self.space, out)


def convolution_bracket(conv: ConvolutionAlgebra, *fs: GradedVector) -> GradedVector:
    return conv.bracket(*fs)


# ---- coefficient matrices -------------------------------------------------

def snap(x: float, tolerance: float = 1e-6, max_denominator: int = 1000):
    """Nearest rational with bounded denominator, or None if it is farther than tolerance."""
    q = Fraction(x).limit_denominator(max_denominator)
    dist = abs(float(q) - x)
    return (q if dist <= tolerance else None), dist


@dataclass
class Entry:
    value: Fraction | None  # exact value, None if unsnapped
    float_value: float | None = None
    error: float | None = None
    snap_distance: float | None = None


@dataclass
class HopfCoefficientMatrix:
    entries: dict = field(default_factory=dict)  # (cycle, pi) -> Entry
    diagnostics: list = field(default_factory=list)
    mc_ok: bool | None = None

    @classmethod
    def exact(cls, values: dict) -> "HopfCoefficientMatrix":
        return cls({k: Entry(Fraction(v)) for k, v in values.items()})

    @classmethod
    def from_floats(cls, values: dict, tolerance: float = 1e-6, errors: dict | None = None):
        out = cls()
        for k, x in values.items():
            q, dist = snap(x, tolerance)
            out.entries[k] = Entry(q, float(x), (errors or {}).get(k), dist)
        return out

    def is_exact(self) -> bool:
        return all(e.value is not None for e in self.entries.values())

    def unsnapped(self) -> list:
        return [k for k, e in self.entries.items() if e.value is None]

    def value(self, cycle: str, pi: str) -> Fraction:
        e = self.entries.get((cycle, pi))
        if e is None:
            return Fraction(0)
        if e.value is None:
            raise ArgumentError(f"entry ({cycle},{pi}) = {e.float_value} was not snapped to a rational")
        return e.value

    def is_zero(self) -> bool:
        return all(self.value(*k) == 0 for k in self.entries)

    def to_dict(self) -> dict:
        rows = []
        for (c, p), e in sorted(self.entries.items()):
            row = {"cycle": c, "pi": p}
            if e.float_value is not None:
                row["float"] = e.float_value
                row["snapped"] = None if e.value is None else str(e.value)
                if e.error is not None:
                    row["error"] = e.error
                if e.snap_distance is not None:
                    row["snap_distance"] = e.snap_distance
            if e.value is not None:
                row["value"] = str(e.value)
            rows.append(row)
        out = {"entries": rows}
        if self.diagnostics:
            out["diagnostics"] = list(self.diagnostics)
        if self.mc_ok is not None:
            out["mc_ok"] = self.mc_ok
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "HopfCoefficientMatrix":
        out = cls()
        for row in data["entries"]:
            v = row.get("value", row.get("snapped"))
            out.entries[(row["cycle"], row["pi"])] = Entry(
                None if v is None else Fraction(v), row.get("float"), row.get("error"), row.get("snap_distance"))
        out.diagnostics = list(data.get("diagnostics", []))
        out.mc_ok = data.get("mc_ok")
        return out


def matrix_element(conv: ConvolutionAlgebra, lam: HopfCoefficientMatrix) -> GradedVector:
    coeffs = {}
    for (c, p) in lam.entries:
        v = lam.value(c, p)
        lab = phi(c, p)
        if v and conv.space.degree(lab) != 0:
            raise ArgumentError(f"entry ({c},{p}) joins degrees {conv.coalgebra.degree(c)} and "
                                f"{conv.algebra.space.degree(p)}")
        coeffs[lab] = v
    return GradedVector(conv.space, coeffs)


def mc_in_convolution(conv: ConvolutionAlgebra, lam: HopfCoefficientMatrix) -> MCElement:
    """Assemble tau = sum lambda_ij phi_ij and check the MC equation; raises with the residual."""
    if not lam.is_exact():
        raise ArgumentError(f"entries {lam.unsnapped()} must be rationalised before the exact MC check")
    tau = matrix_element(conv, lam)
    r = mc_residual(conv, tau)
    if r:
        raise InvalidMCError(f"coefficient matrix is not Maurer-Cartan, residual {r}", residual=r)
    return MCElement(conv, tau)


# ---- duality ----------------------------------------------------------------

class DualConvolutionAlgebra(LInftyAlgebra):
    """Hom(L^v, A) for A = C^v, with brackets from the products of A and the
    cobrackets of L^v (the transposes of the brackets of L)."""

    def __init__(self, conv: ConvolutionAlgebra):
        self.conv = conv
        self.A: FiniteCInftyAlgebra = dualize(conv.coalgebra)
        L = conv.algebra
        self.L = L
        basis = []
        self._pair = {}
        for l, dl in L.space.basis:
            for c, dc in conv.coalgebra.space.basis:
                lab = f"psi[{l}^v,{c}^v]"
                basis.append((lab, dl - dc))
                self._pair[lab] = (l, c)
        space = GradedSpace(f"Hom({L.name}^v,{self.A.space.name})", tuple(basis))
        super().__init__(space, conv.max_arity, None)
        self._cobracket_cache: dict = {}

    def _cobracket(self, n: int, target: str) -> dict:
        """delta_n(target^v) as {ordered word of L labels: coefficient}."""
        key = (n, target)
        if key not in self._cobracket_cache:
            L = self.L
            out = {}
            for word in itertools.product(L.space.labels, repeat=n):
                if sum(L.space.degree(x) for x in word) - 1 != L.space.degree(target):
                    continue
                v = L.basis_bracket(list(word))
                if v[target]:
                    out[word] = v[target]
            self._cobracket_cache[key] = out
        return self._cobracket_cache[key]

    def _basis_bracket(self, labels):
        n = len(labels)
        L, A = self.L, self.A
        Cs = self.conv.coalgebra
        out: dict = {}
        pairs = [self._pair[x] for x in labels]
        fdeg = [self.space.degree(x) for x in labels]
        if n == 1:
            (lab,) = labels
            l, c = pairs[0]
            s = -1 if fdeg[0] % 2 else 1
            # dual of d_L o f: F o l_1^v
            for l2 in L.space.labels:
                x = L.basis_bracket([l2])[l] if L.max_arity >= 1 else 0
                if x:
                    k = f"psi[{l2}^v,{c}^v]"
                    out[k] = out.get(k, 0) + x
            for c2 in Cs.space.labels:
                x = Cs.differential.image(c2)[c]
                if x:
                    k = f"psi[{l}^v,{c2}^v]"
                    out[k] = out.get(k, 0) - s * x
            return GradedVector(self.space, out)
        weight = Fraction(1, math.factorial(n))
        for target in L.space.labels:
            try:
                cob = self._cobracket(n, target)
            except Exception:
                continue
            for sigma in itertools.permutations(range(n)):
                s_perm = koszul_sign_0(sigma, fdeg)
                ls = tuple(pairs[k][0] for k in sigma)
                x = cob.get(ls)
                if not x:
                    continue
                prod = A.product(*[pairs[k][1] + "^v" for k in sigma])
                t = 0
                for j in range(n):
                    for i in range(j):
                        t += fdeg[sigma[j]] * L.space.degree(ls[i])
                # pairing sign of the cobracket word, matched against the product transpose
                pw = 0
                for j in range(n):
                    for i in range(j):
                        pw += L.space.degree(ls[j]) * L.space.degree(ls[i])
                s = s_perm * (-1 if (t + pw) % 2 else 1)
                for cv, y in prod.items():
                    k = f"psi[{target}^v,{cv}]"
                    s0 = -1 if A.space.degree(cv) % 2 else 1
                    out[k] = out.get(k, 0) + weight * s * s0 * x * y
        return GradedVector(self.space, out)


@dataclass
class DualityIso:
    conv: ConvolutionAlgebra
    dual: DualConvolutionAlgebra

    def __call__(self, f: GradedVector) -> GradedVector:
        acc = {}
        for lab, x in f.items():
            c, l = self.conv.pair(lab)
            acc[f"psi[{l}^v,{c}^v]"] = x * self._sign(c, l)
        return GradedVector(self.dual.space, acc)

    def _sign(self, c, l) -> int:
        # swapping c and l^v in the pairing
        return -1 if (self.conv.coalgebra.degree(c) * self.conv.algebra.space.degree(l)) % 2 else 1

    def inverse(self, g: GradedVector) -> GradedVector:
        acc = {}
        for lab, x in g.items():
            l, c = self.dual._pair[lab]
            acc[phi(c, l)] = x * self._sign(c, l)
        return GradedVector(self.conv.space, acc)

    def check(self, arity: int = 2, labels=None) -> list:
        """Basis tuples on which phi(l_n(f..)) != l_n(phi f, ..); empty when compatible."""
        bad = []
        for n in range(1, arity + 1):
            for t in self.conv.sorted_tuples(n, labels):
                try:
                    lhs = self(self.conv.basis_bracket(t))
                except Exception:
                    continue
                rhs = self.dual.bracket(*[self(self.conv.space.e(x)) for x in t])
                if lhs != rhs:
                    bad.append(t)
        return bad


def duality_iso(conv: ConvolutionAlgebra) -> DualityIso:
    return DualityIso(conv, DualConvolutionAlgebra(conv))


# ---- induced morphisms from attaching maps ------------------------------------

def induced_morphism_from_attaching(C: CInftyCoalgebra, new_cells, L: LInftyAlgebra) -> InfinityMorphism:
    """psi^*: Hom(C_low, L) ~> Hom(sum of spheres on new_cells, L).

    ``C`` is the realised complex containing the new cells, whose cooperations
    and differential encode the attaching components psi_n. The arity-n
    component sends f_1..f_n to the new-cell part of the convolution bracket of
    the f's extended by zero.
    """
    new = [c for c in C.space.labels if c in set(new_cells)]
    low = [c for c in C.space.labels if c not in set(new)]
    big = ConvolutionAlgebra(C, L)
    C_low = C.restrict(low, name=C.space.name + "_low")
    spheres = CInftyCoalgebra(GradedSpace("cells", tuple((c, C.degree(c)) for c in new)))
    src, tgt = ConvolutionAlgebra(C_low, L), ConvolutionAlgebra(spheres, L)
    top = max(big.max_arity, 1)

    def comp(n, key):
        v = big.basis_bracket([k for k in key])
        return GradedVector(tgt.space, {k: x for k, x in v.items() if big.pair(k)[0] in new})

    return InfinityMorphism(src, tgt, top, comp, name="a*")


def attaching_image(C: CInftyCoalgebra, new_cells, L: LInftyAlgebra, theta: GradedVector) -> tuple:
    """Image of the degree-1 arity-1 part of (psi^*)^theta on l_1^theta-cycles.

    Returns (target algebra, list of image vectors, list of the domain cycles).
    """
    psi = induced_morphism_from_attaching(C, new_cells, L)
    src = psi.source
    th = GradedVector(src.space, dict(theta.coeffs))
    twisted = twist_infinity_morphism(psi, th, check=True)
    Ls = twist(src, th)
    dom = src.space.labels_in_degree(1)
    # l_1^theta-cycles among degree-1 elements
    images0 = [Ls.basis_bracket([x]) for x in dom]
    rows_labels = sorted(set().union(*(v.coeffs for v in images0))) if images0 else []
    cols = [[v[r] for r in rows_labels] for v in images0]
    cycles = []
    for z in nullspace(cols, len(rows_labels)) if rows_labels else [[Fraction(int(i == j)) for i in range(len(dom))]
                                                                     for j in range(len(dom))]:
        cycles.append(GradedVector(src.space, {x: c for x, c in zip(dom, z)}))
    images = [twisted.apply(z) for z in cycles]
    return psi.target, images, cycles
