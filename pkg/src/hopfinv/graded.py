"""Exact graded linear algebra over the rationals.

Vectors and maps are sparse: a vector is a table label -> Fraction and a map
stores the image of each source basis label. Nothing here touches floats.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ArgumentError

Scalar = Fraction


def as_scalar(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise ArgumentError(f"refusing implicit float -> rational conversion of {x!r}")
    return Fraction(x)


@dataclass(frozen=True)
class GradedSpace:
    name: str
    basis: tuple  # of (label, degree)
    _deg: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        basis = tuple((str(l), int(d)) for l, d in self.basis)
        object.__setattr__(self, "basis", basis)
        deg = {}
        for label, d in basis:
            if label in deg:
                raise ArgumentError(f"duplicate basis label {label!r} in {self.name}")
            deg[label] = d
        object.__setattr__(self, "_deg", deg)

    @property
    def labels(self) -> list[str]:
        return [l for l, _ in self.basis]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def degree(self, label: str) -> int:
        try:
            return self._deg[label]
        except KeyError:
            raise ArgumentError(f"{label!r} is not a basis label of {self.name}") from None

    def __contains__(self, label) -> bool:
        return label in self._deg

    def labels_in_degree(self, d: int) -> list[str]:
        return [l for l, e in self.basis if e == d]

    def degrees(self) -> list[int]:
        return sorted(set(self._deg.values()))

    def dims(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for _, d in self.basis:
            out[d] = out.get(d, 0) + 1
        return out

    def zero(self) -> "GradedVector":
        return GradedVector(self, {})

    def vector(self, coeffs: Mapping) -> "GradedVector":
        return GradedVector(self, coeffs)

    def e(self, label: str) -> "GradedVector":
        self.degree(label)
        return GradedVector(self, {label: Fraction(1)})

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def to_dict(self) -> dict:
        return {"name": self.name, "basis": [{"label": l, "degree": d} for l, d in self.basis]}

    @classmethod
    def from_dict(cls, data: dict, name: str | None = None) -> "GradedSpace":
        basis = [(b["label"], b["degree"]) for b in data["basis"]]
        return cls(name or data.get("name", "V"), tuple(basis))


class GradedVector:
    """Sparse vector; zero coefficients are never stored."""

    __slots__ = ("space", "coeffs")

    def __init__(self, space: GradedSpace, coeffs: Mapping | None = None):
        clean = {}
        for label, c in (coeffs or {}).items():
            c = as_scalar(c)
            if c:
                space.degree(label)
                clean[label] = c
        self.space = space
        self.coeffs = clean

    def __getitem__(self, label) -> Fraction:
        return self.coeffs.get(label, Fraction(0))

    def items(self):
        return self.coeffs.items()

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def _check(self, other: "GradedVector"):
        if other.space != self.space:
            raise ArgumentError(f"vectors live in different spaces: {self.space.name} vs {other.space.name}")

    def __add__(self, other: "GradedVector") -> "GradedVector":
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return GradedVector(self.space, out)

    def __sub__(self, other: "GradedVector") -> "GradedVector":
        return self + other * -1

    def __neg__(self):
        return self * -1

    def __mul__(self, s) -> "GradedVector":
        s = as_scalar(s)
        return GradedVector(self.space, {k: v * s for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedVector):
            return NotImplemented
        return self.space == other.space and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.space.name, frozenset(self.coeffs.items())))

    def degrees(self) -> set[int]:
        return {self.space.degree(l) for l in self.coeffs}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int | None:
        """Degree of a nonzero homogeneous vector, None for zero."""
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise ArgumentError(f"vector is not homogeneous (degrees {sorted(ds)})")
        return ds.pop()

    def restrict(self, labels: Iterable[str]) -> "GradedVector":
        keep = set(labels)
        return GradedVector(self.space, {k: v for k, v in self.coeffs.items() if k in keep})

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{v}*{k}" for k, v in sorted(self.coeffs.items()))


@dataclass(frozen=True, eq=False)
class GradedMap:
    source: GradedSpace
    target: GradedSpace
    degree: int
    matrix: dict  # source label -> GradedVector in target

    def __post_init__(self):
        clean = {}
        for label, img in self.matrix.items():
            self.source.degree(label)
            if not isinstance(img, GradedVector):
                img = GradedVector(self.target, img)
            if img.space != self.target:
                raise ArgumentError("image vector not in target space")
            if img:
                d = img.degree()
                if d != self.source.degree(label) + self.degree:
                    raise ArgumentError(
                        f"image of {label!r} has degree {d}, expected {self.source.degree(label) + self.degree}")
                clean[label] = img
        object.__setattr__(self, "matrix", clean)

    def image(self, label: str) -> GradedVector:
        return self.matrix.get(label, self.target.zero())

    def __call__(self, v: GradedVector) -> GradedVector:
        if v.space != self.source:
            raise ArgumentError(f"map source {self.source.name} does not match vector space {v.space.name}")
        out: dict = {}
        for label, c in v.items():
            for k, w in self.image(label).items():
                out[k] = out.get(k, 0) + c * w
        return GradedVector(self.target, out)

    def __add__(self, other: "GradedMap") -> "GradedMap":
        self._check(other)
        keys = set(self.matrix) | set(other.matrix)
        return GradedMap(self.source, self.target, self.degree,
                         {k: self.image(k) + other.image(k) for k in keys})

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, s) -> "GradedMap":
        return GradedMap(self.source, self.target, self.degree, {k: v * s for k, v in self.matrix.items()})

    __rmul__ = __mul__

    def _check(self, other):
        if (other.source, other.target) != (self.source, self.target):
            raise ArgumentError("maps have different source/target")
        if other.degree != self.degree and self.matrix and other.matrix:
            raise ArgumentError("maps have different degrees")

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.matrix == other.matrix and (self.degree == other.degree or not self.matrix))

    def is_zero(self) -> bool:
        return not self.matrix

    def dense(self) -> list[list[Fraction]]:
        """Matrix with rows indexed by target basis, columns by source basis."""
        return [[self.image(s)[t] for s in self.source.labels] for t in self.target.labels]

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "matrix": [{"of": k, "image": {l: str(c) for l, c in v.items()}} for k, v in self.matrix.items()],
        }


def identity(space: GradedSpace) -> GradedMap:
    return GradedMap(space, space, 0, {l: space.e(l) for l in space.labels})


def zero_map(source: GradedSpace, target: GradedSpace, degree: int = 0) -> GradedMap:
    return GradedMap(source, target, degree, {})


def compose(g: GradedMap, f: GradedMap) -> GradedMap:
    """g after f."""
    if f.target != g.source:
        raise ArgumentError(f"cannot compose: target {f.target.name} != source {g.source.name}")
    return GradedMap(f.source, g.target, f.degree + g.degree, {k: g(v) for k, v in f.matrix.items()})


# ---- signs --------------------------------------------------------------

def koszul_sign_0(perm: Sequence[int], degrees: Sequence[int]) -> int:
    """Sign for reordering x_0..x_{n-1} into x_{perm[0]}, ..., x_{perm[n-1]}."""
    n = len(perm)
    s = 0
    for i in range(n):
        for j in range(i + 1, n):
            if perm[i] > perm[j]:
                s += degrees[perm[i]] * degrees[perm[j]]
    return -1 if s % 2 else 1


def koszul_sign(permutation: Sequence[int], degrees: Sequence[int]) -> Fraction:
    """Koszul sign of a permutation of {1..n} acting on elements of the given degrees.

    The permuted word is x_{p(1)} ... x_{p(n)}; each transposition of
    neighbours of degrees a, b contributes (-1)^(ab).
    """
    if len(permutation) != len(degrees):
        raise ArgumentError(f"permutation has length {len(permutation)} but {len(degrees)} degrees were given")
    if sorted(permutation) != list(range(1, len(permutation) + 1)):
        raise ArgumentError(f"{list(permutation)} is not a permutation of 1..{len(permutation)}")
    return Fraction(koszul_sign_0([p - 1 for p in permutation], degrees))


def sort_with_sign(items: Sequence, degrees: Sequence[int], key=None):
    """Stable sort of items, returning (sorted items, Koszul sign, permutation)."""
    idx = sorted(range(len(items)), key=(lambda i: key(items[i])) if key else (lambda i: items[i]))
    return [items[i] for i in idx], koszul_sign_0(idx, degrees), idx


# ---- exact row reduction --------------------------------------------------

def rref(rows: list[list[Fraction]]):
    """Reduced row echelon form. Returns (matrix, pivot columns)."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: list[list[Fraction]]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def solve(columns: list[list[Fraction]], b: list[Fraction]):
    """Find x with sum_k x_k columns[k] == b exactly, or None."""
    n = len(b)
    k = len(columns)
    if k == 0:
        return [] if all(x == 0 for x in b) else None
    aug = [[columns[j][i] for j in range(k)] + [b[i]] for i in range(n)]
    if not aug:
        return [Fraction(0)] * k
    m, pivots = rref(aug)
    if k in pivots:
        return None
    x = [Fraction(0)] * k
    for row, c in zip(m, pivots):
        x[c] = row[k]
    return x


def nullspace(columns: list[list[Fraction]], nrows: int) -> list[list[Fraction]]:
    """Basis of {x : sum_k x_k columns[k] = 0}."""
    k = len(columns)
    if k == 0:
        return []
    rows = [[columns[j][i] for j in range(k)] for i in range(nrows)]
    if not rows:
        return [[Fraction(int(i == j)) for i in range(k)] for j in range(k)]
    m, pivots = rref(rows)
    free = [c for c in range(k) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * k
        x[f] = Fraction(1)
        for row, c in zip(m, pivots):
            x[c] = -row[f]
        basis.append(x)
    return basis


def membership_in_span(v: GradedVector, spanning: Sequence[GradedVector]):
    """Exact coordinates c with sum c_i spanning[i] == v, or None if v is not in the span."""
    for s in spanning:
        if s.space != v.space:
            raise ArgumentError(f"spanning vector in {s.space.name}, target in {v.space.name}")
    labels = sorted(set(v.coeffs).union(*(s.coeffs for s in spanning)))
    cols = [[s[l] for l in labels] for s in spanning]
    return solve(cols, [v[l] for l in labels])


def span_basis(vectors: Sequence[GradedVector]) -> list[GradedVector]:
    """A linearly independent subfamily with the same span (greedy, keeps input order)."""
    out: list[GradedVector] = []
    for v in vectors:
        if v and membership_in_span(v, out) is None:
            out.append(v)
    return out
