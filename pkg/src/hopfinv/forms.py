"""Exterior calculus on coordinate charts.

Scalars are small expression trees with symbolic partial derivatives and
constant folding (no other simplification). Forms store one expression per
strictly increasing index tuple. Integration pulls back numerically at the
Gauss-Legendre nodes: coefficient at F(t) times the matching Jacobian minor.
"""
from __future__ import annotations

import ast
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import ArgumentError, DomainError, UnsupportedError

FUNCS = ("sin", "cos", "sqrt", "exp", "log")
NAMED = {"pi": math.pi}


# ---- scalar expressions -----------------------------------------------------

@dataclass(frozen=True)
class Expr:
    op: str  # const, named, var, add, mul, div, pow, atan2, or a name in FUNCS
    args: tuple = ()
    value: object = None  # Fraction/float for const, name for var and named, exponent for pow

    # construction -------------------------------------------------------
    def __add__(self, other):
        return add(self, expr(other))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, mul(const(-1), expr(other)))

    def __rsub__(self, other):
        return add(expr(other), mul(const(-1), self))

    def __mul__(self, other):
        return mul(self, expr(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return div(self, expr(other))

    def __rtruediv__(self, other):
        return div(expr(other), self)

    def __neg__(self):
        return mul(const(-1), self)

    def __pow__(self, r):
        return power(self, r)

    # inspection ---------------------------------------------------------
    def is_const(self) -> bool:
        return self.op == "const"

    def variables(self) -> set:
        if self.op == "var":
            return {self.value}
        out = set()
        for a in self.args:
            out |= a.variables()
        return out

    def __str__(self):
        return to_string(self)

    def __repr__(self):
        return f"Expr({to_string(self)})"


def const(v) -> Expr:
    if isinstance(v, float):
        if v.is_integer():
            return Expr("const", (), Fraction(int(v)))
        return Expr("const", (), v)
    return Expr("const", (), Fraction(v))


def var(name: str) -> Expr:
    return Expr("var", (), str(name))


def expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, str):
        return parse(x)
    if isinstance(x, (int, Fraction, float)):
        return const(x)
    raise ArgumentError(f"cannot make an expression from {x!r}")


ZERO = Expr("const", (), Fraction(0))
ONE = Expr("const", (), Fraction(1))


def _is(e: Expr, v) -> bool:
    return e.op == "const" and not e.args and e.value == v


def add(*terms) -> Expr:
    flat = []
    for t in terms:
        t = expr(t)
        flat.extend(t.args if t.op == "add" else [t])
    c = Fraction(0)
    rest = []
    for t in flat:
        if t.op == "const" and not t.args:
            c = c + t.value
        else:
            rest.append(t)
    if c != 0 or not rest:
        rest.append(const(c))
    if len(rest) == 1:
        return rest[0]
    return Expr("add", tuple(rest))


def mul(*factors) -> Expr:
    flat = []
    for f in factors:
        f = expr(f)
        flat.extend(f.args if f.op == "mul" else [f])
    c = Fraction(1)
    rest = []
    for f in flat:
        if f.op == "const" and not f.args:
            c = c * f.value
        else:
            rest.append(f)
    if c == 0:
        return const(0)
    if c != 1 or not rest:
        rest.insert(0, const(c))
    if len(rest) == 1:
        return rest[0]
    return Expr("mul", tuple(rest))


def div(a, b) -> Expr:
    a, b = expr(a), expr(b)
    if _is(b, 0):
        raise DomainError("division by the zero constant")
    if _is(a, 0):
        return ZERO
    if _is(b, 1):
        return a
    if b.op == "const" and not b.args:
        return mul(const(1 / b.value if isinstance(b.value, float) else Fraction(1) / b.value), a)
    return Expr("div", (a, b))


def power(a, r) -> Expr:
    a = expr(a)
    if isinstance(r, Expr):
        if not (r.op == "const" and not r.args):
            raise UnsupportedError("only constant exponents are supported")
        r = r.value
    if isinstance(r, float):
        if not r.is_integer():
            raise UnsupportedError("exponents must be integers or rationals")
        r = int(r)
    r = Fraction(r)
    if r == 0:
        return ONE
    if r == 1:
        return a
    if a.op == "const" and not a.args:
        if r.denominator == 1:
            if a.value == 0 and r < 0:
                raise DomainError("0 to a negative power")
            return const(a.value ** int(r))
        v = float(a.value) ** float(r)
        return const(v)
    return Expr("pow", (a,), r)


def func(name: str, *args) -> Expr:
    args = tuple(expr(a) for a in args)
    if name == "atan2":
        if len(args) != 2:
            raise ArgumentError("atan2 takes two arguments")
        return Expr("atan2", args)
    if name not in FUNCS or len(args) != 1:
        raise ArgumentError(f"unknown function {name}/{len(args)}")
    a = args[0]
    if a.op == "const" and not a.args:
        v = evaluate(Expr(name, args), {})
        return const(float(v))
    if name == "sqrt":
        return Expr("pow", (a,), Fraction(1, 2))
    return Expr(name, args)


def sin(a):
    return func("sin", a)


def cos(a):
    return func("cos", a)


def sqrt(a):
    return func("sqrt", a)


def atan2(y, x):
    return func("atan2", y, x)


PI = Expr("named", (), "pi")


# ---- evaluation -------------------------------------------------------------

def evaluate(e: Expr, env: dict):
    """Deterministic double-precision evaluation; env values may be floats or numpy arrays."""
    op = e.op
    if op == "const":
        return float(e.value)
    if op == "named":
        return NAMED[e.value]
    if op == "var":
        try:
            return env[e.value]
        except KeyError:
            raise ArgumentError(f"no value for variable {e.value}") from None
    if op == "add":
        out = evaluate(e.args[0], env)
        for a in e.args[1:]:
            out = out + evaluate(a, env)
        return out
    if op == "mul":
        out = evaluate(e.args[0], env)
        for a in e.args[1:]:
            out = out * evaluate(a, env)
        return out
    with np.errstate(all="ignore"):
        if op == "div":
            return np.divide(evaluate(e.args[0], env), evaluate(e.args[1], env))
        if op == "pow":
            base = evaluate(e.args[0], env)
            r = e.value
            if r.denominator == 1:
                return np.power(np.asarray(base, dtype=float), int(r))
            return np.power(np.asarray(base, dtype=float), float(r))
        if op == "atan2":
            return np.arctan2(evaluate(e.args[0], env), evaluate(e.args[1], env))
        return getattr(np, op)(evaluate(e.args[0], env))


# ---- differentiation ------------------------------------------------------

@lru_cache(maxsize=200_000)
def _diff(e: Expr, v: str) -> Expr:
    op = e.op
    if op in ("const", "named"):
        return ZERO
    if op == "var":
        return ONE if e.value == v else ZERO
    if v not in e.variables():
        return ZERO
    if op == "add":
        return add(*[_diff(a, v) for a in e.args])
    if op == "mul":
        terms = []
        for k, a in enumerate(e.args):
            da = _diff(a, v)
            if not _is(da, 0):
                terms.append(mul(*(e.args[:k] + (da,) + e.args[k + 1:])))
        return add(*terms) if terms else ZERO
    if op == "div":
        a, b = e.args
        return div(add(mul(_diff(a, v), b), mul(const(-1), a, _diff(b, v))), power(b, 2))
    if op == "pow":
        a = e.args[0]
        r = e.value
        return mul(const(r), power(a, r - 1), _diff(a, v))
    if op == "sin":
        return mul(Expr("cos", e.args), _diff(e.args[0], v))
    if op == "cos":
        return mul(const(-1), Expr("sin", e.args), _diff(e.args[0], v))
    if op == "exp":
        return mul(e, _diff(e.args[0], v))
    if op == "log":
        return div(_diff(e.args[0], v), e.args[0])
    if op == "atan2":
        y, x = e.args
        return div(add(mul(x, _diff(y, v)), mul(const(-1), y, _diff(x, v))), add(power(x, 2), power(y, 2)))
    raise ArgumentError(f"cannot differentiate {op}")


def differentiate(e, v: str, scope=None) -> Expr:
    """Exact partial derivative; scope (if given) lists the admissible variables."""
    e = expr(e)
    if scope is not None and v not in scope:
        raise ArgumentError(f"{v} is not a variable of the chart {tuple(scope)}")
    return _diff(e, v)


def substitute(e: Expr, mapping: dict) -> Expr:
    """Replace variables by expressions."""
    @lru_cache(maxsize=None)
    def go(x: Expr) -> Expr:
        if x.op == "var":
            return mapping.get(x.value, x)
        if x.op in ("const", "named"):
            return x
        args = tuple(go(a) for a in x.args)
        if x.op == "add":
            return add(*args)
        if x.op == "mul":
            return mul(*args)
        if x.op == "div":
            return div(*args)
        if x.op == "pow":
            return power(args[0], x.value)
        return func(x.op, *args)
    return go(e)


# ---- printing and parsing -----------------------------------------------------

def _num(v) -> str:
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"({v.numerator}/{v.denominator})"
    return repr(float(v))


def to_string(e: Expr) -> str:
    op = e.op
    if op == "named":
        return e.value
    if op == "const":
        s = _num(e.value)
        return f"({s})" if s.startswith("-") else s
    if op == "var":
        return e.value
    if op == "add":
        return "(" + " + ".join(to_string(a) for a in e.args) + ")"
    if op == "mul":
        return "*".join(to_string(a) for a in e.args)
    if op == "div":
        return f"({to_string(e.args[0])})/({to_string(e.args[1])})"
    if op == "pow":
        r = e.value
        rs = str(r.numerator) if r.denominator == 1 else f"({r.numerator}/{r.denominator})"
        if r.numerator < 0:
            rs = f"({rs})"
        return f"({to_string(e.args[0])})^{rs}"
    return f"{op}(" + ", ".join(to_string(a) for a in e.args) + ")"


def parse(text: str, variables=None) -> Expr:
    """Infix grammar: numbers, names, + - * / ^ (or **), parentheses, sin cos sqrt exp log atan2, pi."""
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ArgumentError(f"cannot parse expression {text!r}: {exc.msg}") from None

    def go(n):
        if isinstance(n, ast.Expression):
            return go(n.body)
        if isinstance(n, ast.Constant) and isinstance(n.value, (int, float)) and not isinstance(n.value, bool):
            return const(Fraction(n.value) if isinstance(n.value, int) else Fraction(repr(n.value)))
        if isinstance(n, ast.Name):
            if n.id in NAMED:
                return Expr("named", (), n.id)
            if variables is not None and n.id not in variables:
                raise ArgumentError(f"unknown variable {n.id!r} in {text!r}")
            return var(n.id)
        if isinstance(n, ast.UnaryOp) and isinstance(n.op, (ast.USub, ast.UAdd)):
            x = go(n.operand)
            return -x if isinstance(n.op, ast.USub) else x
        if isinstance(n, ast.BinOp):
            a, b = go(n.left), go(n.right)
            if isinstance(n.op, ast.Add):
                return add(a, b)
            if isinstance(n.op, ast.Sub):
                return add(a, mul(const(-1), b))
            if isinstance(n.op, ast.Mult):
                return mul(a, b)
            if isinstance(n.op, ast.Div):
                return div(a, b)
            if isinstance(n.op, ast.Pow):
                if not (b.op == "const" and not b.args):
                    raise UnsupportedError(f"non-constant exponent in {text!r}")
                v = b.value
                if isinstance(v, float):
                    raise UnsupportedError(f"irrational exponent in {text!r}")
                return power(a, v)
        if isinstance(n, ast.Call) and isinstance(n.func, ast.Name) and not n.keywords:
            return func(n.func.id, *[go(a) for a in n.args])
        raise ArgumentError(f"unsupported syntax in {text!r}")

    return go(tree)


# ---- polynomials ------------------------------------------------------------

def to_poly(e: Expr, chart) -> dict:
    """Exact expansion {exponent tuple: Fraction}; non-polynomial input raises UnsupportedError."""
    chart = tuple(chart)
    n = len(chart)

    def go(x):
        if x.op == "named":
            raise UnsupportedError(f"irrational constant {x.value} in a polynomial")
        if x.op == "const":
            if isinstance(x.value, float):
                raise UnsupportedError(f"irrational constant {to_string(x)} in a polynomial")
            return {(0,) * n: x.value} if x.value else {}
        if x.op == "var":
            if x.value not in chart:
                raise ArgumentError(f"variable {x.value} not in chart {chart}")
            k = chart.index(x.value)
            return {tuple(int(j == k) for j in range(n)): Fraction(1)}
        if x.op == "add":
            out: dict = {}
            for a in x.args:
                for m, c in go(a).items():
                    out[m] = out.get(m, 0) + c
            return {m: c for m, c in out.items() if c}
        if x.op == "mul":
            out = {(0,) * n: Fraction(1)}
            for a in x.args:
                out = _pmul(out, go(a))
            return out
        if x.op == "pow" and x.value.denominator == 1 and x.value >= 0:
            out = {(0,) * n: Fraction(1)}
            base = go(x.args[0])
            for _ in range(int(x.value)):
                out = _pmul(out, base)
            return out
        if x.op == "div":
            b = go(x.args[1])
            if len(b) == 1 and next(iter(b)) == (0,) * n:
                c = next(iter(b.values()))
                return {m: v / c for m, v in go(x.args[0]).items()}
        raise UnsupportedError(f"non-polynomial expression {to_string(x)}")

    return go(expr(e))


def _pmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = tuple(x + y for x, y in zip(m1, m2))
            out[m] = out.get(m, 0) + c1 * c2
    return {m: c for m, c in out.items() if c}


def from_poly(p: dict, chart) -> Expr:
    terms = []
    for m in sorted(p):
        c = p[m]
        fs = [const(c)] + [power(var(v), k) for v, k in zip(chart, m) if k]
        terms.append(mul(*fs))
    return add(*terms) if terms else ZERO


def is_polynomial(e: Expr, chart) -> bool:
    try:
        to_poly(e, chart)
        return True
    except UnsupportedError:
        return False


# ---- differential forms ---------------------------------------------------------

def _sort_index(idx):
    """Sort an index tuple; returns (sorted tuple, sign) or (None, 0) on repeats."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return None, 0
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return tuple(idx), sign


class DifferentialForm:
    def __init__(self, chart, degree: int, components: dict | None = None):
        self.chart = tuple(str(v) for v in chart)
        if len(set(self.chart)) != len(self.chart):
            raise ArgumentError(f"repeated chart variable in {self.chart}")
        if degree < 0 or degree > len(self.chart):
            raise ArgumentError(f"degree {degree} on a {len(self.chart)}-dimensional chart")
        self.degree = int(degree)
        comps: dict = {}
        for idx, e in (components or {}).items():
            idx = tuple(self._index(i) for i in idx)
            if len(idx) != degree:
                raise ArgumentError(f"component {idx} does not have degree {degree}")
            s_idx, s = _sort_index(idx)
            if s_idx is None:
                continue
            e = expr(e)
            unknown = e.variables() - set(self.chart)
            if unknown:
                raise ArgumentError(f"component uses variables {sorted(unknown)} outside the chart")
            comps[s_idx] = add(comps.get(s_idx, ZERO), mul(const(s), e))
        self.components = {k: v for k, v in comps.items() if not _is(v, 0)}

    def _index(self, i):
        if isinstance(i, str):
            try:
                return self.chart.index(i)
            except ValueError:
                raise ArgumentError(f"{i} is not a chart variable") from None
        return int(i)

    @classmethod
    def parse(cls, chart, components: dict) -> "DifferentialForm":
        """components: {"dx^dy": "expr", "": "f"} (keys name the differentials)."""
        chart = tuple(chart)
        comps = {}
        degree = None
        for key, text in components.items():
            names = [s.strip()[1:] for s in key.replace("∧", "^").split("^") if s.strip()]
            for s in names:
                if s not in chart:
                    raise ArgumentError(f"d{s} is not a differential of the chart {chart}")
            if degree is None:
                degree = len(names)
            elif degree != len(names):
                raise ArgumentError("components of different degrees")
            comps[tuple(names)] = parse(text, chart) if isinstance(text, str) else expr(text)
        return cls(chart, degree or 0, comps)

    @classmethod
    def function(cls, chart, f) -> "DifferentialForm":
        return cls(chart, 0, {(): expr(f)})

    @classmethod
    def zero(cls, chart, degree: int) -> "DifferentialForm":
        return cls(chart, degree, {})

    def is_zero(self) -> bool:
        return not self.components

    def _same_chart(self, other):
        if not isinstance(other, DifferentialForm) or other.chart != self.chart:
            raise ArgumentError("forms live on different charts")

    def __add__(self, other):
        self._same_chart(other)
        if other.degree != self.degree and self.components and other.components:
            raise ArgumentError("cannot add forms of different degrees")
        comps = dict(self.components)
        for k, v in other.components.items():
            comps[k] = add(comps.get(k, ZERO), v)
        return DifferentialForm(self.chart, self.degree if self.components else other.degree, comps)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f) -> "DifferentialForm":
        f = expr(f)
        return DifferentialForm(self.chart, self.degree, {k: mul(f, v) for k, v in self.components.items()})

    __mul__ = scale
    __rmul__ = scale

    def wedge(self, other: "DifferentialForm") -> "DifferentialForm":
        self._same_chart(other)
        k = self.degree + other.degree
        if k > len(self.chart):
            return DifferentialForm.zero(self.chart, len(self.chart))
        comps: dict = {}
        for I, a in self.components.items():
            for J, b in other.components.items():
                idx, s = _sort_index(I + J)
                if idx is None:
                    continue
                comps[idx] = add(comps.get(idx, ZERO), mul(const(s), a, b))
        return DifferentialForm(self.chart, k, comps)

    __xor__ = wedge

    def d(self) -> "DifferentialForm":
        if self.degree == len(self.chart):
            return DifferentialForm.zero(self.chart, self.degree)
        comps: dict = {}
        for I, a in self.components.items():
            for j, v in enumerate(self.chart):
                if j in I:
                    continue
                da = _diff(a, v)
                if _is(da, 0):
                    continue
                idx, s = _sort_index((j,) + I)
                comps[idx] = add(comps.get(idx, ZERO), mul(const(s), da))
        return DifferentialForm(self.chart, self.degree + 1, comps)

    def evaluate(self, point) -> dict:
        env = point if isinstance(point, dict) else dict(zip(self.chart, point))
        out = {}
        for I, a in self.components.items():
            out[I] = evaluate(a, env)
        return out

    def expand(self) -> dict:
        """Exact polynomial components {index: poly}; raises UnsupportedError if not polynomial."""
        out = {}
        for I, a in self.components.items():
            p = to_poly(a, self.chart)
            if p:
                out[I] = p
        return out

    def is_polynomial(self) -> bool:
        return all(is_polynomial(a, self.chart) for a in self.components.values())

    def equals_symbolic(self, other: "DifferentialForm") -> bool:
        """Exact equality after polynomial expansion (polynomial forms only)."""
        self._same_chart(other)
        return (self - other).expand() == {}

    def to_dict(self) -> dict:
        return {"chart": list(self.chart), "degree": self.degree,
                "components": {"^".join("d" + self.chart[i] for i in I): to_string(a)
                               for I, a in sorted(self.components.items())}}

    @classmethod
    def from_dict(cls, data: dict) -> "DifferentialForm":
        chart = data["chart"]
        comps = data.get("components", {})
        if not comps:
            return cls.zero(chart, int(data.get("degree", 0)))
        f = cls.parse(chart, comps)
        if "degree" in data and int(data["degree"]) != f.degree:
            raise ArgumentError("declared degree does not match the components")
        return f

    def __repr__(self):
        if not self.components:
            return f"0 ({self.degree}-form)"
        parts = []
        for I, a in sorted(self.components.items()):
            dx = "^".join("d" + self.chart[i] for i in I)
            parts.append(f"{to_string(a)}" + (f" {dx}" if dx else ""))
        return " + ".join(parts)


def wedge(a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    return a.wedge(b)


def exterior_derivative(w: DifferentialForm) -> DifferentialForm:
    return w.d()


# ---- smooth maps ------------------------------------------------------------

class SmoothMapSpec:
    def __init__(self, source, target, components, name: str = "f"):
        self.source = tuple(str(v) for v in source)
        self.target = tuple(str(v) for v in target)
        comps = [parse(c, self.source) if isinstance(c, str) else expr(c) for c in components]
        if len(comps) != len(self.target):
            raise ArgumentError(f"{len(comps)} components for a {len(self.target)}-dimensional target")
        for c in comps:
            extra = c.variables() - set(self.source)
            if extra:
                raise ArgumentError(f"component uses {sorted(extra)} outside the source chart")
        self.components = tuple(comps)
        self.name = name

    @classmethod
    def identity(cls, chart) -> "SmoothMapSpec":
        return cls(chart, chart, [var(v) for v in chart], "id")

    @classmethod
    def constant(cls, source, target, point, name: str = "const") -> "SmoothMapSpec":
        return cls(source, target, [expr(x) for x in point], name)

    def jacobian(self) -> list[list[Expr]]:
        return [[_diff(c, s) for s in self.source] for c in self.components]

    def __call__(self, point):
        env = point if isinstance(point, dict) else dict(zip(self.source, point))
        return [evaluate(c, env) for c in self.components]

    def compose(self, inner: "SmoothMapSpec") -> "SmoothMapSpec":
        """self o inner."""
        if inner.target != self.source:
            raise ArgumentError(f"cannot compose: {inner.target} != {self.source}")
        m = dict(zip(inner.target, inner.components))
        return SmoothMapSpec(inner.source, self.target, [substitute(c, m) for c in self.components],
                             f"{self.name}o{inner.name}")

    def to_dict(self) -> dict:
        return {"source": list(self.source), "target": list(self.target),
                "components": [to_string(c) for c in self.components]}

    @classmethod
    def from_dict(cls, data: dict, name: str = "f") -> "SmoothMapSpec":
        return cls(data["source"], data["target"], data["components"], data.get("name", name))


def pullback(F: SmoothMapSpec, w: DifferentialForm) -> DifferentialForm:
    if w.chart != F.target:
        raise ArgumentError(f"form lives on {w.chart}, map lands in {F.target}")
    m = dict(zip(F.target, F.components))
    J = F.jacobian()
    dF = [DifferentialForm(F.source, 1, {(j,): J[t][j] for j in range(len(F.source))}) for t in range(len(F.target))]
    out = DifferentialForm.zero(F.source, min(w.degree, len(F.source)))
    if w.degree > len(F.source):
        return out
    for I, a in w.components.items():
        term = DifferentialForm.function(F.source, substitute(a, m))
        for i in I:
            term = term.wedge(dF[i])
        if term.degree != w.degree:
            continue
        out = out + term
    return DifferentialForm(F.source, w.degree, out.components)


# ---- Poincare homotopy ---------------------------------------------------------

def poincare_homotopy(w: DifferentialForm) -> DifferentialForm:
    """Radial homotopy K on polynomial forms of a star-shaped chart (about 0).

    K(a x^m dx_I) = sum_r (-1)^(r-1) a/(k+|m|) x^m x_{i_r} dx_{I without i_r};
    dK + Kd = id on positive degree.
    """
    k = w.degree
    if k == 0:
        return DifferentialForm.zero(w.chart, 0)
    comps: dict = {}
    n = len(w.chart)
    for I, p in w.expand().items():
        for r, i in enumerate(I):
            rest = I[:r] + I[r + 1:]
            sign = -1 if r % 2 else 1
            acc = comps.setdefault(rest, {})
            for m, c in p.items():
                m2 = tuple(e + (1 if j == i else 0) for j, e in enumerate(m))
                acc[m2] = acc.get(m2, 0) + sign * c / (k + sum(m))
    return DifferentialForm(w.chart, k - 1, {I: from_poly({m: c for m, c in p.items() if c}, w.chart)
                                             for I, p in comps.items()})


def polynomial_form_equal(a: DifferentialForm, b: DifferentialForm) -> bool:
    return a.equals_symbolic(b)


# ---- cycles and quadrature ------------------------------------------------------

@dataclass
class ParametrizedCycle:
    params: tuple  # ((name, lower, upper), ...)
    embedding: SmoothMapSpec
    orientation: int = 1
    name: str = "cycle"

    def __post_init__(self):
        self.params = tuple((str(n), float(a), float(b)) for n, a, b in self.params)
        if tuple(n for n, _, _ in self.params) != self.embedding.source:
            raise ArgumentError("parameter names must match the embedding's source chart")
        if self.orientation not in (1, -1):
            raise ArgumentError("orientation must be +1 or -1")

    @property
    def dimension(self) -> int:
        return len(self.params)

    @property
    def ambient(self) -> tuple:
        return self.embedding.target

    def to_dict(self) -> dict:
        return {"params": [list(p) for p in self.params], "embedding": self.embedding.to_dict(),
                "orientation": self.orientation}

    @classmethod
    def from_dict(cls, data: dict, name: str = "cycle") -> "ParametrizedCycle":
        emb = data["embedding"]
        params = [tuple(p) for p in data["params"]]
        if "source" not in emb:
            emb = dict(emb, source=[p[0] for p in params])
        return cls(tuple(params), SmoothMapSpec.from_dict(emb), int(data.get("orientation", 1)), name)


@dataclass
class Integral:
    value: float
    error: float
    nodes: int

    def __float__(self):
        return self.value


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("HOPFINV_THREADS", "1")))
    except ValueError:
        return 1


@lru_cache(maxsize=64)
def _leggauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _grid(params, n):
    axes, weights = [], []
    x, w = _leggauss(n)
    for _, a, b in params:
        axes.append(0.5 * (b - a) * x + 0.5 * (a + b))
        weights.append(0.5 * (b - a) * w)
    mesh = np.meshgrid(*axes, indexing="ij")
    W = weights[0]
    for wk in weights[1:]:
        W = np.multiply.outer(W, wk)
    return [m.ravel() for m in mesh], np.asarray(W).ravel()


def gauss_grid(params, n: int):
    """Tensor Gauss-Legendre nodes (flattened coordinate arrays) and weights on a rectangle."""
    return _grid(params, n)


def pullback_at(w: DifferentialForm, F: SmoothMapSpec, pts, J=None) -> dict:
    """Numerical pullback F*w at points of F's source: {source index tuple: array}."""
    if w.chart != F.target:
        raise ArgumentError(f"form lives on {w.chart}, map lands in {F.target}")
    J = J if J is not None else F.jacobian()
    env = dict(zip(F.source, pts))
    npts = len(pts[0]) if pts else 1
    amb = [np.broadcast_to(np.asarray(evaluate(c, env), dtype=float), (npts,)) for c in F.components]
    aenv = dict(zip(F.target, amb))
    Jv = np.empty((npts, len(F.target), len(F.source)))
    for t in range(len(F.target)):
        for s in range(len(F.source)):
            Jv[:, t, s] = np.broadcast_to(np.asarray(evaluate(J[t][s], env), dtype=float), (npts,))
    out: dict = {}
    k = w.degree
    if k > len(F.source):
        return out
    cols = list(combinations(range(len(F.source)), k))
    for I, a in w.components.items():
        coeff = np.broadcast_to(np.asarray(evaluate(a, aenv), dtype=float), (npts,))
        for C in cols:
            minor = np.linalg.det(Jv[:, list(I), :][:, :, list(C)]) if I else np.ones(npts)
            out[C] = out.get(C, 0.0) + coeff * minor
    return out


def wedge_at(a: dict, ka: int, b: dict, kb: int) -> dict:
    """Wedge of numerically evaluated forms {index tuple: array}."""
    out: dict = {}
    for I, x in a.items():
        for J, y in b.items():
            idx, s = _sort_index(I + J)
            if idx is None:
                continue
            out[idx] = out.get(idx, 0.0) + s * x * y
    return out


def _integrand(w: DifferentialForm, cyc: ParametrizedCycle, pts, J):
    """Top coefficient of the pulled-back form at the parameter points."""
    top = tuple(range(cyc.dimension))
    vals = pullback_at(w, cyc.embedding, pts, J).get(top)
    npts = len(pts[0]) if pts else 1
    return np.zeros(npts) if vals is None else np.broadcast_to(vals, (npts,))


def _quadrature(w, cyc, n, threads):
    pts, W = _grid(cyc.params, n)
    J = cyc.embedding.jacobian()
    chunks = max(1, min(threads, len(W) // 4096 or 1))
    bounds = np.linspace(0, len(W), chunks + 1).astype(int)

    def part(k):
        lo, hi = bounds[k], bounds[k + 1]
        vals = _integrand(w, cyc, [p[lo:hi] for p in pts], J)
        bad = ~np.isfinite(vals)
        if bad.any():
            j = int(np.argmax(bad)) + lo
            node = {name: float(p[j]) for (name, _, _), p in zip(cyc.params, pts)}
            raise DomainError(f"non-finite integrand at node {node}")
        return math.fsum((vals * W[lo:hi]).tolist())

    if chunks == 1:
        sums = [part(0)]
    else:
        with ThreadPoolExecutor(max_workers=chunks) as ex:
            sums = list(ex.map(part, range(chunks)))
    return cyc.orientation * math.fsum(sums)


def integrate(w: DifferentialForm, cycle, nodes: int = 32, threads: int | None = None) -> Integral:
    """Tensor Gauss-Legendre integral of w over a cycle (or a list of (coeff, cycle) pieces).

    The error estimate is |I(n) - I(n/2)|.
    """
    pieces = cycle if isinstance(cycle, (list, tuple)) else [(1, cycle)]
    threads = threads or default_threads()
    if nodes < 2:
        raise ArgumentError("need at least 2 nodes per axis")
    val = err = 0.0
    for c, cyc in pieces:
        if w.degree != cyc.dimension:
            raise ArgumentError(f"cannot integrate a {w.degree}-form over a {cyc.dimension}-cycle")
        if w.chart != cyc.ambient:
            raise ArgumentError(f"form chart {w.chart} differs from the cycle's ambient chart {cyc.ambient}")
        hi = _quadrature(w, cyc, nodes, threads)
        lo = _quadrature(w, cyc, max(nodes // 2, 1), threads)
        val += float(c) * hi
        err += abs(float(c)) * abs(hi - lo)
    return Integral(val, err, nodes)


# ---- standard data ------------------------------------------------------------

def solid_angle_form(chart=("x", "y", "z"), scale=None) -> DifferentialForm:
    """(x dy^dz - y dx^dz + z dx^dy) / (4 pi r^3): closed off the origin, integral 1 over S^2."""
    x, y, z = (var(v) for v in chart)
    r3 = power(add(power(x, 2), power(y, 2), power(z, 2)), Fraction(3, 2))
    pre = div(const(1), mul(const(4), PI)) if scale is None else expr(scale)
    a, b, c = chart
    return DifferentialForm(chart, 2, {(b, c): mul(pre, div(x, r3)), (a, c): mul(const(-1), pre, div(y, r3)),
                                       (a, b): mul(pre, div(z, r3))})


def sphere_cycle(chart=("x", "y", "z"), extra=None, params=("theta", "phi"), name="S2") -> ParametrizedCycle:
    """Unit S^2 in the given chart by spherical coordinates, outward orientation.

    extra: optional {variable: constant} for further ambient coordinates.
    """
    t, p = var(params[0]), var(params[1])
    comps = {chart[0]: mul(sin(t), cos(p)), chart[1]: mul(sin(t), sin(p)), chart[2]: cos(t)}
    amb = tuple(chart) + tuple((extra or {}).keys())
    comps.update({k: expr(v) for k, v in (extra or {}).items()})
    F = SmoothMapSpec(params, amb, [comps[v] for v in amb], name)
    return ParametrizedCycle(((params[0], 0.0, math.pi), (params[1], 0.0, 2 * math.pi)), F, 1, name)
