import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from auternary.lattice import (
    GramMatrix,
    apply_gram,
    determinant,
    eval_quadratic,
    integer_kernel,
    is_positive_definite,
    lattices_equal,
    norm_generator,
    restrict_gram,
    scale_generator,
    scale_norm_exponents,
)


def gram(upper):
    return GramMatrix.from_upper(upper)


upper_strategy = st.tuples(
    st.integers(min_value=1, max_value=12),
    st.integers(min_value=-8, max_value=8),
    st.integers(min_value=-8, max_value=8),
    st.integers(min_value=1, max_value=12),
    st.integers(min_value=-8, max_value=8),
    st.integers(min_value=1, max_value=12),
)


def try_gram(upper):
    try:
        return GramMatrix.from_upper(upper)
    except ValueError:
        return None


def det_by_cofactors(e):
    return (
        e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1])
        - e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0])
        + e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0])
    )


def test_from_upper_layout():
    g = gram((1, 2, 3, 4, 5, 6))
    assert g.entries == ((1, 2, 3), (2, 4, 5), (3, 5, 6))
    assert g.rank == 3


def test_degenerate_rejected():
    with pytest.raises(ValueError):
        GramMatrix(((1, 0, 0), (0, 1, 0), (0, 0, 0)))
    with pytest.raises(ValueError):
        GramMatrix(((1, 0), (0, 1), (0, 0)))  # not square


@given(upper_strategy)
@settings(max_examples=300)
def test_determinant_matches_cofactor_expansion(upper):
    g = try_gram(upper)
    if g is None:
        return
    assert determinant(g) == det_by_cofactors(g.entries)


@given(upper_strategy)
@settings(max_examples=300)
def test_positive_definite_iff_leading_minors(upper):
    g = try_gram(upper)
    if g is None:
        return
    e = g.entries
    m1 = e[0][0]
    m2 = e[0][0] * e[1][1] - e[0][1] * e[1][0]
    m3 = det_by_cofactors(e)
    assert is_positive_definite(g) == (m1 > 0 and m2 > 0 and m3 > 0)


@given(upper_strategy, st.tuples(*[st.integers(min_value=-9, max_value=9)] * 3))
@settings(max_examples=300)
def test_eval_quadratic_and_apply_gram(upper, x):
    g = try_gram(upper)
    if g is None:
        return
    e = g.entries
    direct = sum(e[i][j] * x[i] * x[j] for i in range(3) for j in range(3))
    assert eval_quadratic(g, x) == direct
    gx = apply_gram(g, x)
    assert gx == tuple(sum(e[i][j] * x[j] for j in range(3)) for i in range(3))


def test_scale_and_norm_exponents():
    g = gram((2, 2, 0, 4, 0, 8))
    scale, norm = scale_norm_exponents(g, 2)
    # scale ideal: all entries; norm ideal: diagonal plus doubled off-diagonal
    assert scale == 1
    assert norm == 1
    g2 = gram((4, 2, 0, 4, 0, 8))
    scale2, norm2 = scale_norm_exponents(g2, 2)
    assert scale2 == 1
    assert norm2 == 2
    assert norm_generator(g2) == 4
    assert scale_generator(g2) == 2


def test_integer_kernel_is_saturated():
    for row in [(2, 4, 6), (1, 0, 0), (0, 3, 5), (6, 10, 15), (0, 0, 7)]:
        v1, v2 = integer_kernel(row)
        assert sum(r * c for r, c in zip(row, v1)) == 0
        assert sum(r * c for r, c in zip(row, v2)) == 0
        minors = [
            v1[i] * v2[j] - v1[j] * v2[i]
            for i in range(3)
            for j in range(i + 1, 3)
        ]
        assert math.gcd(*minors) == 1, "kernel basis must be saturated"


@given(st.tuples(*[st.integers(min_value=-40, max_value=40)] * 3))
@settings(max_examples=200)
def test_integer_kernel_random_rows(row):
    if row == (0, 0, 0):
        return
    v1, v2 = integer_kernel(row)
    assert sum(r * c for r, c in zip(row, v1)) == 0
    assert sum(r * c for r, c in zip(row, v2)) == 0
    minors = [v1[i] * v2[j] - v1[j] * v2[i] for i in range(3) for j in range(i + 1, 3)]
    assert math.gcd(*minors) == 1


def test_restrict_gram_by_hand():
    g = gram((2, 1, 0, 3, 1, 5))
    basis = ((1, 0, 1), (0, 1, -1))
    r = restrict_gram(g, basis)
    e = g.entries

    def bil(u, v):
        return sum(e[i][j] * u[i] * v[j] for i in range(3) for j in range(3))

    assert r.entries == (
        (bil(basis[0], basis[0]), bil(basis[0], basis[1])),
        (bil(basis[1], basis[0]), bil(basis[1], basis[1])),
    )


def test_lattices_equal():
    a = ((1, 0, 1), (0, 1, -1))
    b = ((1, 1, 0), (0, 1, -1))  # same span: row ops over Z
    assert lattices_equal(a, (a[1], a[0]))
    assert lattices_equal(a, ((1, 0, 1), (1, 1, 0)))
    assert not lattices_equal(a, ((2, 0, 2), (0, 1, -1)))
    assert lattices_equal(a, b) == lattices_equal(b, a)
