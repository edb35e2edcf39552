import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hopfinv.errors import ArgumentError
from hopfinv.graded import (GradedMap, GradedSpace, as_scalar, compose, identity, koszul_sign, koszul_sign_0,
                            membership_in_span, nullspace, rank, rref, solve, sort_with_sign, span_basis)

from oracles import naive_matmul, solve_exact, sparse_rank

fracs = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def space(degs, name="V"):
    return GradedSpace(name, tuple((f"e{i}", d) for i, d in enumerate(degs)))


def test_space_basics():
    V = space([2, 3, 2])
    assert V.dim == 3
    assert V.dims() == {2: 2, 3: 1}
    assert V.labels_in_degree(2) == ["e0", "e2"]
    assert "e1" in V and "x" not in V
    with pytest.raises(ArgumentError):
        V.degree("x")
    with pytest.raises(ArgumentError):
        GradedSpace("W", (("a", 1), ("a", 2)))
    assert GradedSpace.from_dict(V.to_dict()) == V


def test_vector_arithmetic_and_degree():
    V = space([2, 3])
    v = V.e("e0") * 3 + V.e("e0") * -3
    assert v.is_zero() and not v
    w = V.vector({"e0": 1, "e1": Fraction(1, 2)})
    assert not w.is_homogeneous()
    assert w.restrict(["e1"]) == V.e("e1") * Fraction(1, 2)
    assert V.e("e1").degree() == 3


def test_floats_are_refused():
    with pytest.raises(ArgumentError):
        as_scalar(0.5)


def test_koszul_sign_examples():
    # swapping two odd elements costs a sign, anything even is free
    assert koszul_sign([2, 1], [1, 1]) == -1
    assert koszul_sign([2, 1], [1, 2]) == 1
    assert koszul_sign([3, 1, 2], [1, 1, 1]) == 1
    with pytest.raises(ArgumentError):
        koszul_sign([1, 1], [1, 1])
    with pytest.raises(ArgumentError):
        koszul_sign([1, 2], [1])


@given(st.lists(st.integers(0, 5), min_size=1, max_size=6), st.data())
def test_koszul_sign_is_a_homomorphism(degs, data):
    n = len(degs)
    p = data.draw(st.permutations(range(n)))
    q = data.draw(st.permutations(range(n)))
    # apply p, then q to the permuted word
    pq = [p[q[i]] for i in range(n)]
    permuted = [degs[i] for i in p]
    assert koszul_sign_0(pq, degs) == koszul_sign_0(p, degs) * koszul_sign_0(q, permuted)


@given(st.lists(st.integers(0, 4), min_size=1, max_size=6))
def test_koszul_sign_counts_odd_inversions(degs):
    n = len(degs)
    for perm in itertools.islice(itertools.permutations(range(n)), 30):
        inv = sum(degs[perm[i]] * degs[perm[j]] for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        assert koszul_sign_0(perm, degs) == (-1) ** inv


def test_sort_with_sign():
    items, sign, perm = sort_with_sign(["b", "a"], [1, 1])
    assert items == ["a", "b"] and sign == -1 and perm == [1, 0]


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return [[draw(fracs) for _ in range(c)] for _ in range(r)]


@given(matrices())
def test_rank_matches_independent_elimination(m):
    cols = [{i: m[i][j] for i in range(len(m))} for j in range(len(m[0]))]
    assert rank(m) == sparse_rank(cols)


@given(matrices())
def test_rref_is_reduced(m):
    red, piv = rref(m)
    for r, c in enumerate(piv):
        assert red[r][c] == 1
        assert all(red[i][c] == 0 for i in range(len(red)) if i != r)


@given(matrices(), st.data())
def test_solve_agrees_with_oracle(m, data):
    cols = [[m[i][j] for i in range(len(m))] for j in range(len(m[0]))]
    b = [data.draw(fracs) for _ in range(len(m))]
    x = solve(cols, b)
    y = solve_exact(cols, b)
    assert (x is None) == (y is None)
    if x is not None:
        assert [sum(cols[j][i] * x[j] for j in range(len(cols))) for i in range(len(b))] == b


@given(matrices())
def test_nullspace_dimension(m):
    cols = [[m[i][j] for i in range(len(m))] for j in range(len(m[0]))]
    ns = nullspace(cols, len(m))
    assert len(ns) == len(cols) - rank(m)
    for x in ns:
        assert all(sum(cols[j][i] * x[j] for j in range(len(cols))) == 0 for i in range(len(m)))


@given(st.data())
@settings(max_examples=50)
def test_compose_matches_dense_product(data):
    degs = [0, 1, 1, 2]
    V = space(degs)
    mk = lambda: GradedMap(V, V, 0, {l: V.vector({k: data.draw(fracs) for k in V.labels
                                                  if V.degree(k) == V.degree(l)}) for l in V.labels})
    f, g = mk(), mk()
    assert compose(g, f).dense() == naive_matmul(g.dense(), f.dense())
    assert compose(identity(V), f) == f


def test_map_degree_is_enforced():
    V = space([1, 2])
    with pytest.raises(ArgumentError):
        GradedMap(V, V, 0, {"e0": V.e("e1")})
    d = GradedMap(V, V, 1, {"e0": V.e("e1")})
    assert d(V.e("e0")) == V.e("e1")


def test_span_helpers():
    V = space([0, 0, 0])
    a, b = V.e("e0"), V.e("e1")
    assert membership_in_span(a * 2 - b, [a, b]) == [2, -1]
    assert membership_in_span(V.e("e2"), [a, b]) is None
    assert span_basis([a, a * 3, b, a + b]) == [a, b]
