from __future__ import annotations

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from quartic_values.curves import (
    GENUS0,
    GENUS1,
    QBAR_REDUCIBLE,
    REDUCIBLE,
    cubic_curve_analysis,
    integral_points_scan,
    mobius_integer_points,
    rational_line_factors,
)
from quartic_values.exact import BiPoly, UniPoly, parse_poly

T = UniPoly.t()
ONE = UniPoly.const(1)


def test_nodal_cubic_is_rational_with_exact_identity():
    P = parse_poly("y^2 - x^3 - x^2")
    res = cubic_curve_analysis(P)
    assert res.kind == GENUS0
    assert res.singular_points == ((0, 0, 1),)
    assert res.parametrization.identity_residual(P).is_zero()


def test_known_parametrization_of_the_node():
    # x = t^2 - 1, y = t (t^2 - 1) lies on y^2 = x^3 + x^2
    P = parse_poly("y^2 - x^3 - x^2")
    x = T * T - 1
    assert P.substitute_uni(x, T * x).is_zero()


def test_smooth_cubic_has_genus_one():
    assert cubic_curve_analysis(parse_poly("y^2 - x^3 + 2")).kind == GENUS1
    assert cubic_curve_analysis(parse_poly("x^3 + 2*y^3 + 1")).kind == GENUS1


def test_cubic_with_rational_line_component():
    res = cubic_curve_analysis(parse_poly("(x+y)*(x^2+y^2+1)"))
    assert res.kind == REDUCIBLE
    assert parse_poly("x + y") in res.factors or parse_poly("-x - y") in res.factors


def test_concurrent_conjugate_lines():
    assert cubic_curve_analysis(parse_poly("x^3 - 2*y^3")).kind == QBAR_REDUCIBLE


def test_cusp_is_rational():
    P = parse_poly("y^2 - x^3")
    res = cubic_curve_analysis(P)
    assert res.kind == GENUS0 and res.parametrization.identity_residual(P).is_zero()


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))
@settings(max_examples=40)
def test_nodal_family_parametrizations_vanish(a, b, c):
    # y^2 = (x - a)^2 (x - b) + shifted: singular at (a, 0) whenever a != b
    if a == b:
        return
    P = parse_poly(f"y^2 - (x - ({a}))^2*(x - ({b}))").compose(BiPoly.x(), BiPoly.y() - c)
    res = cubic_curve_analysis(P)
    assert res.kind == GENUS0
    assert res.parametrization.identity_residual(P).is_zero()


def test_rational_line_factors():
    lines = rational_line_factors(parse_poly("x*(x - y + 2)*(x^2 + y^2 + 1)"))
    assert len(lines) == 2


# --- integer points on rational parametrizations ---------------------------------------


def brute_points(R1, Q1, R2, Q2, span=400):
    """Integer points found by scanning rational t = (s - v x)/(u x - r) over integer x."""
    r, s = R1.coeff(1), R1.coeff(0)
    u, v = Q1.coeff(1), Q1.coeff(0)
    out = set()
    for x in range(-span, span + 1):
        den = u * x - r
        if den == 0:
            continue
        t = Fraction(s - v * x, den)
        q = Q2(t)
        if q == 0 or Q1(t) == 0:
            continue
        y = R2(t) / q
        if y.denominator == 1:
            out.add((x, int(y)))
    return out


def test_mobius_unit_divisors():
    got = mobius_integer_points(T, ONE, T * T + 1, T)
    assert set(got.points) == {(1, 2), (-1, -2)}
    assert got.kind == "finite"


def test_mobius_polynomial_y_is_unbounded():
    got = mobius_integer_points(T, ONE, T * T + 3, ONE)
    assert got.kind == "unbounded"


def test_mobius_candidates_from_resultant_divisors():
    got = mobius_integer_points(T, ONE, T + 1, T * T + 5)
    assert got.resultant == 6
    assert set(got.points) == brute_points(T, ONE, T + 1, T * T + 5) == {(-1, 0)}


coef = st.integers(-4, 4)


@given(coef, coef, coef, coef, st.lists(coef, min_size=1, max_size=3), st.lists(coef, min_size=2, max_size=3))
@settings(max_examples=120)
def test_mobius_matches_brute_force(r, s, u, v, rs, qs):
    if r * v - s * u == 0:
        return
    R1, Q1 = UniPoly([s, r]), UniPoly([v, u])
    R2, Q2 = UniPoly(rs), UniPoly(qs)
    if Q2.degree < 1 or R2.is_zero():
        return
    got = mobius_integer_points(R1, Q1, R2, Q2)
    if got.kind != "finite":
        return
    brute = brute_points(R1, Q1, R2, Q2)
    # every brute-force point is found; the t = infinity point may lie outside the scan
    assert brute <= set(got.points)
    assert all(abs(x) <= 400 for x, _ in got.points)


cubic_terms = st.dictionaries(
    st.sampled_from([(3, 0), (2, 1), (1, 2), (0, 3), (2, 0), (1, 1), (0, 2), (1, 0), (0, 1), (0, 0)]),
    st.integers(-3, 3),
)


@given(cubic_terms)
@settings(max_examples=60)
def test_integral_scan_matches_double_loop(terms):
    P = BiPoly(terms)
    if P.degree_in("y") < 1:
        return
    B = 12
    naive = sorted((x, y) for x in range(-B, B + 1) for y in range(-B, B + 1) if P(x, y) == 0)
    assert sorted(integral_points_scan(P, B)) == naive
