from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quartic_values.exact import (
    BiPoly,
    ParseError,
    UniPoly,
    UnimodularMap,
    apply_unimodular,
    homogeneous_parts,
    is_irreducible,
    normalize,
    parse_poly,
    real_root_count,
    resultant,
    to_text,
    uni_factor,
    unimodular_from_linear,
)
from quartic_values.forms import BinaryForm

X, Y = BiPoly.x(), BiPoly.y()
T = UniPoly.t()


def terms(text):
    return dict(parse_poly(text).terms)


# --- parsing -----------------------------------------------------------------


def test_parse_reads_monomials_directly():
    assert terms("x^4 + y^4") == {(4, 0): 1, (0, 4): 1}
    assert terms("1/2*x*y - 3") == {(1, 1): Fraction(1, 2), (0, 0): -3}


def test_parse_expands_powers_of_sums():
    assert terms("(x^2-2*y^2)^2 + x") == {(4, 0): 1, (2, 2): -4, (0, 4): 4, (1, 0): 1}


@pytest.mark.parametrize("bad", ["x^", "x + * y", "(x + y", "z^2", "x^-1", "", "2x", "x/3", "1/0*x"])
def test_parse_rejects_malformed(bad):
    with pytest.raises(ParseError):
        parse_poly(bad)


small_coeff = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def bipolys(draw, max_degree=4):
    out = {}
    for i in range(max_degree + 1):
        for j in range(max_degree + 1 - i):
            if draw(st.booleans()):
                out[(i, j)] = draw(small_coeff)
    return BiPoly(out)


@given(bipolys())
def test_text_round_trip(F):
    assert parse_poly(to_text(F)) == F


# --- normalization -------------------------------------------------------------


def test_normalize_clears_denominators_and_constant():
    G, n = normalize(parse_poly("1/2*x^2 + 1"))
    assert G == X * X and (n.scale, n.shift) == (2, 1)
    G, n = normalize(parse_poly("x^4 + y^4"))
    assert G == parse_poly("x^4 + y^4") and (n.scale, n.shift) == (1, 0)
    G, n = normalize(parse_poly("1/3*x + 1/6*y"))
    assert G == X * 2 + Y and (n.scale, n.shift) == (6, 0)


@given(bipolys())
def test_normalize_is_idempotent_and_recoverable(F):
    if (F - F.constant_term()).is_zero():
        return
    G, n = normalize(F)
    assert G.is_integral() and G.constant_term() == 0
    assert n.recover(G) == F
    G2, n2 = normalize(G)
    assert G2 == G and (n2.scale, n2.shift) == (1, 0)


def test_homogeneous_parts():
    F1, F2, F3, F4 = homogeneous_parts(parse_poly("x^4 + x*y"))
    assert F4 == BinaryForm([1, 0, 0, 0, 0]) and F2 == BinaryForm([0, 1, 0])
    assert F3.is_zero() and F1.is_zero()
    F1, F2, F3, F4 = homogeneous_parts(parse_poly("x^2*(x^2+y^2) + x^3 + y^2"))
    assert F4 == BinaryForm([1, 0, 1, 0, 0])
    assert F3 == BinaryForm([1, 0, 0, 0])
    assert F2 == BinaryForm([0, 0, 1])
    assert F1.is_zero()
    assert all(f.is_zero() for f in homogeneous_parts(BiPoly()))


# --- unimodular maps -------------------------------------------------------------


def test_apply_unimodular_rotation():
    A = UnimodularMap(0, 1, -1, 0)
    G = apply_unimodular(X, A)
    for p in [(1, 2), (-3, 5), (4, -1)]:
        assert G(*A.apply(*p)) == p[0]


def test_apply_unimodular_shear_matches_on_grid():
    F = X * X + Y * Y
    A = UnimodularMap(1, 1, 0, 1)
    G = apply_unimodular(F, A)
    assert G == (X - Y) ** 2 + Y * Y
    for i in range(-2, 3):
        for j in range(-2, 3):
            assert G(*A.apply(i, j)) == F(i, j)


def test_apply_identity():
    F = parse_poly("(x^2-2*y^2)^2 + x")
    assert apply_unimodular(F, UnimodularMap.identity()) == F


unimodular = st.lists(
    st.sampled_from([(1, 1, 0, 1), (1, -1, 0, 1), (1, 0, 1, 1), (1, 0, -1, 1), (0, 1, 1, 0), (0, 1, -1, 0)]),
    min_size=1,
    max_size=5,
)


@given(bipolys(), unimodular)
@settings(max_examples=60)
def test_apply_unimodular_round_trip(F, gens):
    A = UnimodularMap.identity()
    for g in gens:
        A = A.compose(UnimodularMap(*g))
    assert apply_unimodular(apply_unimodular(F, A), A.inverse()) == F


@pytest.mark.parametrize("H", [(1, 0), (2, 3), (0, 1), (-5, 7), (12, -5)])
def test_unimodular_from_linear_first_row(H):
    A = unimodular_from_linear(H)
    assert (A.a, A.b) == H and A.det == 1


def test_unimodular_from_linear_rejects_imprimitive():
    with pytest.raises(ValueError):
        unimodular_from_linear((2, 4))


# --- univariate core ---------------------------------------------------------------


def test_real_root_count():
    assert real_root_count(T * T + 1) == 0
    assert real_root_count(T * T - 2) == 2
    assert real_root_count(T ** 3 - T, (0, 2)) == 2


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=4, unique=True), st.integers(0, 3))
def test_real_root_count_matches_constructed_roots(roots, extra):
    # product of distinct linear factors times a positive quadratic
    p = UniPoly.const(1)
    for r in roots:
        p = p * (T - r)
    p = p * (T * T + extra + 1)
    assert real_root_count(p) == len(roots)
    assert real_root_count(p, (0, 6)) == sum(1 for r in roots if 0 <= r <= 6)


def test_uni_factor_examples():
    f = uni_factor(T ** 4 - 4)
    assert sorted(g.coeffs for g, _ in f.factors) == sorted([(T * T - 2).coeffs, (T * T + 2).coeffs])
    assert is_irreducible(T * T + 1)
    f = uni_factor(T * T * 2 - 2)
    assert f.content == 2
    assert sorted(g.coeffs for g, _ in f.factors) == sorted([(T - 1).coeffs, (T + 1).coeffs])
    assert is_irreducible(T ** 4 + 1)


@given(st.lists(st.integers(-4, 4), min_size=2, max_size=5))
@settings(max_examples=80)
def test_uni_factor_multiplies_back(cs):
    p = UniPoly(cs)
    if p.degree < 1:
        return
    f = uni_factor(p)
    assert f.expand() == p
    for g, m in f.factors:
        assert m >= 1 and g.degree >= 1


def test_resultant_examples():
    assert resultant(T * T + 1, T) == 1
    assert resultant(T - 1, T + 1) == 2
    assert resultant(T * T - 2, T * T - 2) == 0


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=3), st.lists(st.integers(-3, 3), min_size=1, max_size=3))
def test_resultant_vanishes_exactly_on_common_root(a, b):
    # (t - a_i) products share a root iff the root sets meet
    p, q = UniPoly.const(1), UniPoly.const(1)
    for r in a:
        p = p * (T - r)
    for r in b:
        q = q * (T - r)
    assert (resultant(p, q) == 0) == bool(set(a) & set(b))
