from __future__ import annotations

import copy
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quartic_values.classify import analyze
from quartic_values.exact import BiPoly, parse_poly
from quartic_values.forms import BinaryForm, real_zero_directions
from quartic_values.oracle import (
    density_table,
    enumerate_values,
    missing_value_search,
    naive_values,
    reduced_equivalent,
    reducible_specialization_count,
    rigorous_box,
    sector_count,
    transform,
    verify_certificate,
)

# sums of two squares up to 100, from a plain double loop
SUMS_OF_TWO_SQUARES = [
    0, 1, 2, 4, 5, 8, 9, 10, 13, 16, 17, 18, 20, 25, 26, 29, 32, 34, 36, 37, 40, 41, 45, 49, 50,
    52, 53, 58, 61, 64, 65, 68, 72, 73, 74, 80, 81, 82, 85, 89, 90, 97, 98, 100,
]


def test_sums_of_two_squares_table():
    table = enumerate_values(parse_poly("x^2 + y^2"), 50, 100)
    assert list(table.values) == SUMS_OF_TWO_SQUARES
    assert table.exhaustive


def test_quartic_sum_table_is_exhaustive():
    table = enumerate_values(parse_poly("x^4 + y^4"), 40, 10 ** 6)
    assert table.exhaustive
    assert [v for v in table.values if v <= 20] == [0, 1, 2, 16, 17]


def test_indefinite_table_is_never_exhaustive():
    F = parse_poly("(x^2-2*y^2)^2 + x")
    assert rigorous_box(F, 100) is None
    assert not enumerate_values(F, 30, 100).exhaustive


small = st.integers(-3, 3)
quartic_terms = st.dictionaries(
    st.sampled_from([(i, j) for i in range(5) for j in range(5 - i) if i + j > 0]), small, max_size=6
)


@given(quartic_terms, st.integers(0, 9), st.integers(1, 400), st.sampled_from([1, 3, 256]))
@settings(max_examples=80)
def test_enumeration_matches_double_loop(terms, B, N, band):
    F = BiPoly(terms)
    assert set(enumerate_values(F, B, N, band).values) == naive_values(F, B, N)


@given(quartic_terms)
@settings(max_examples=40)
def test_reduced_equivalent_is_a_unimodular_image(terms):
    F = BiPoly(terms)
    R, A = reduced_equivalent(F)
    assert transform(F, A) == R
    # R(p) = F(A p), so each value of F is attained by R at the preimage point
    Ainv = A.inverse()
    for x in range(-3, 4):
        for y in range(-3, 4):
            assert R(*Ainv.apply(x, y)) == F(x, y)
    d = F.degree

    def top_size(P):
        return sum(v * v for (i, j), v in P.items() if i + j == d)

    assert top_size(R) <= top_size(F)


# --- density fits --------------------------------------------------------------------


def test_landau_ratio_on_small_range():
    fit = density_table(parse_poly("x^2 + y^2"), [10 ** 3, 10 ** 4])
    for n, count, exhaustive in fit.rows:
        assert exhaustive
        assert 0.65 <= count * math.sqrt(math.log(n)) / n <= 0.95


def test_quartic_sum_density_is_square_root():
    fit = density_table(parse_poly("x^4 + y^4"), [10 ** 4, 10 ** 5, 10 ** 6])
    assert fit.fitted == "Sqrt"
    for n, count, _ in fit.rows:
        assert count <= 3 * math.sqrt(n)


def test_pell_composition_density_is_square_root():
    fit = density_table(parse_poly("(x^2-2*y^2)^2 + (x^2-2*y^2)"), [10 ** 3, 10 ** 4, 10 ** 5], "Sqrt")
    assert fit.fitted == "Sqrt"


# --- missing values -------------------------------------------------------------------


def test_three_is_missing_from_quartic_sums():
    m = missing_value_search(parse_poly("x^4 + y^4"), 1, 0)
    assert (m.value, m.rigorous) == (3, True)


def test_three_is_missing_from_sums_of_two_squares():
    m = missing_value_search(parse_poly("x^2 + y^2"), 1, 0)
    assert (m.value, m.rigorous) == (3, True)


def test_indefinite_missing_value_is_heuristic():
    m = missing_value_search(parse_poly("(x^2-2*y^2)^2 + x"), 1, 0, budget=200)
    assert not m.rigorous


# --- sector counts --------------------------------------------------------------------


def naive_sector(slope: float, T: int, tau: float) -> int:
    """Plain float double loop; boundary ties cannot occur for the slopes used here."""
    total = 0
    for u in range(-2 * T, 2 * T + 1):
        for v in range(-2 * T, 2 * T + 1):
            n = u * u + v * v
            if T * T <= n <= 4 * T * T:
                cross = slope * u - v
                dot = slope * v + u
                if cross * cross <= tau * tau * dot * dot:
                    total += 1
    return total


@pytest.mark.parametrize("form,index", [("x^2 - 2*y^2", 1), ("x^2 - 3*y^2", 0)])
@pytest.mark.parametrize("T", [40, 80])
def test_sector_count_matches_double_loop(form, index, T):
    xi = real_zero_directions(BinaryForm.from_text(form))[index]
    tau = math.tan(T ** -0.5)
    assert sector_count(xi, T) == naive_sector(float(xi.slope), T, tau)


def test_sector_count_scale_and_growth():
    xi = real_zero_directions(BinaryForm.from_text("y"))[0]
    a = sector_count(xi, 1024)
    # area of the two opposite sectors: 3 pi T^2 * (4 T^(-1/2)) / (2 pi) = 6 T^(3/2)
    assert abs(a / (6 * 1024 ** 1.5) - 1) < 0.02
    b = sector_count(xi, 2048)
    assert abs(math.log2(b / a) - 1.5) < 0.1


def test_zero_width_sector_keeps_only_the_ray():
    xi = real_zero_directions(BinaryForm.from_text("y"))[0]
    # points (u, 0) with 64 <= |u| <= 128, both senses
    assert sector_count(xi, 64, c=0.0) == 2 * 65


# --- reducible specializations ----------------------------------------------------------


def test_linear_specialization_edge_rule():
    assert reducible_specialization_count(parse_poly("x*y - 1"), 50) == 1


def test_square_specializations():
    # x^2 - t is reducible exactly when t is a square; 0..100 squared give 101 values
    assert reducible_specialization_count(parse_poly("x^2 - y"), 10 ** 4) == 101


def test_generic_quadratic_specializations_are_rare():
    B = 10 ** 4
    assert reducible_specialization_count(parse_poly("x^2 - y^2 - 1"), B) <= 5 * math.sqrt(B) * math.log(B)


# --- certificate verification --------------------------------------------------------------


@pytest.fixture(scope="module")
def pell_report():
    return analyze("(x^2-2*y^2)^2 + x").to_json()


def test_valid_pell_certificate_passes(pell_report):
    assert verify_certificate(pell_report).ok


def test_tampered_value_breaks_strict_decrease(pell_report):
    bad = copy.deepcopy(pell_report)
    x, y, _ = bad["certificate"]["points"][1]
    F = parse_poly("(x^2-2*y^2)^2 + x")
    # recompute the point so the recorded value stays honest but no longer decreases
    first = bad["certificate"]["points"][0]
    bad["certificate"]["points"][1] = list(first)
    res = verify_certificate(bad)
    assert not res.ok and res.reasons[0] == "strict decrease"
    assert F(int(x), int(y)) < Fraction(first[2])


def test_tampered_value_is_detected(pell_report):
    bad = copy.deepcopy(pell_report)
    bad["certificate"]["points"][1][2] = "-1"
    assert "recorded value mismatch" in verify_certificate(bad).reasons


def test_wrong_composition_inner_fails():
    report = analyze("(x^2-2*y^2)^2 + (x^2-2*y^2)").to_json()
    assert verify_certificate(report).ok
    report["certificate"]["composition"]["inner"] = [[2, 0, "1"], [0, 2, "-3"]]
    assert verify_certificate(report).reasons == ["expansion mismatch"]
