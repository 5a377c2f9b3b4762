from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quartic_values.classify import (
    analyze,
    baah_witness,
    classify_quadratic,
    complete_square_quadratic,
    detect_composition,
    free_zero_witness,
    leading_form_gate,
    linked_branch,
)
from quartic_values.composed import prop_first_branch, prop_last_branch, prop_second_branch
from quartic_values.exact import BiPoly, UnimodularMap, parse_poly, to_text
from quartic_values.forms import BinaryForm
from quartic_values.oracle import transform, verify_certificate
from quartic_values.prime import prime_case_branch
from quartic_values.report import UnsupportedInput, trace_is_path


def P(text):
    return parse_poly(text)


def label(text):
    return analyze(text).verdict.label


# --- quadratic pipeline -------------------------------------------------------------


def test_complete_square_examples():
    assert complete_square_quadratic(P("x^2 + y^2 + 2*x + 4*y + 1")) == (1, 2, -4)
    # x^2 - 2 (y - 1)^2 + 2, read as Q2(x + q1, y + q2) + q3
    assert complete_square_quadratic(P("x^2 - 2*y^2 + 4*y")) == (0, -1, 2)
    assert complete_square_quadratic(P("x*y + x")) == (0, 1, 0)


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3), st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5))
def test_complete_square_reconstructs(a, b, c, d, e, f):
    if 4 * a * c - b * b == 0:
        return
    Q = P(f"{a}*x^2 + {b}*x*y + {c}*y^2 + {d}*x + {e}*y + {f}")
    q1, q2, q3 = complete_square_quadratic(Q)
    x, y = BiPoly.x(), BiPoly.y()
    Q2 = Q.homogeneous(2)
    assert Q2.compose(x + q1, y + q2) + q3 == Q


def test_quadratic_routes():
    assert classify_quadratic(P("x^2 + y^2 + 2*x + 4*y + 1")).verdict.label == "SparseValues(LandauLogHalf)"
    out = classify_quadratic(P("x^2 - y^2"))
    assert out.verdict.tag == "UnboundedBelow"
    out = classify_quadratic(P("x^2 + 3*x + y"))
    assert out.verdict.tag == "UnboundedBelow"
    assert all(x == 0 for x, _, _ in out.certificate["points"])


def test_landau_certificate_records_completion():
    rep = analyze("x^2 + y^2 + 2*x + 4*y + 1").to_json()
    comp = rep["certificate"]["completions"][0]
    # the constant is removed by normalization first, hence -5 rather than -4
    assert (comp["q1"], comp["q2"], comp["q3"]) == ("1", "2", "-5")
    assert rep["certificate"]["missing_value"] == {"value": 1, "rigorous": True, "box": 147, "range": 9999, "C": 1, "D": 0}


# --- composition detection ------------------------------------------------------------


def test_detect_composition_examples():
    outer, inner = detect_composition(P("(x^2-2*y^2)^2 + (x^2-2*y^2)"))
    assert outer.coeffs == (0, 1, 1) and inner == P("x^2 - 2*y^2")
    assert detect_composition(P("x^4 + y^4")) is None
    outer, inner = detect_composition(P("x^4 + 2*x^2*y + y^2"))
    assert outer.coeffs == (0, 0, 1) and inner == P("x^2 + y")


@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3), st.sampled_from(["x^2 - 2*y^2", "x*y + x", "x^2 + y", "x^2 + x*y - y^2"]))
def test_detect_composition_recovers_constructed_compositions(cs, inner_text):
    a, b, c = cs
    if c == 0:
        return
    inner = P(inner_text)
    F = inner * inner * c + inner * b + a
    F = F - F.constant_term()
    found = detect_composition(F)
    assert found is not None
    outer, G = found
    expanded = BiPoly()
    for k, coef in enumerate(outer.coeffs):
        expanded = expanded + G ** k * coef
    assert expanded == F


# --- leading-form gate ------------------------------------------------------------------


def test_leading_form_gate():
    assert leading_form_gate(P("x^4 + y^4 + x")).branch == "definite"
    gate = leading_form_gate(P("-x^4 + y^3"))
    assert gate.branch == "negative-somewhere" and gate.definiteness.witness_neg == (1, 0)
    assert leading_form_gate(P("x^2*y^2 + x")).branch == "semidefinite"


def test_negative_leading_form_descends_along_witness():
    rep = analyze("x^4 - y^4 + x")
    pts = rep.certificate["points"]
    assert all(x == 0 for x, _, _ in pts)
    assert all(Fraction(v) == -Fraction(y) ** 4 for _, y, v in pts)


# --- zero-direction witnesses --------------------------------------------------------------


def test_free_zero_points_lie_below_the_axis():
    out = free_zero_witness(P("(x^2-2*y^2)^2 + y^3"))
    pts = out.certificate["points"]
    assert len(pts) >= 3
    vals = [Fraction(v) for _, _, v in pts]
    assert all(y < 0 for _, y, _ in pts)
    assert all(v < 0 for v in vals[1:]) and vals == sorted(vals, reverse=True)
    assert vals[-1] <= -(10 ** 6)


def test_free_zero_with_rational_direction():
    # F4 = x^2 y^2 has the x-axis as a zero, F3 = x^3 is nonzero there
    F = P("x^2*y^2 + x^3")
    out = free_zero_witness(F)
    for x, y, v in out.certificate["points"]:
        assert x < 0 and Fraction(v) == F(x, y)


def test_shared_zero_uses_the_grid_line_first():
    out = baah_witness(P("x^2*y^2 + x^3 + x^2 + y"))
    pts = out.certificate["points"]
    assert all(x == 0 for x, _, _ in pts)
    assert [Fraction(v) for _, _, v in pts] == [Fraction(y) for _, y, _ in pts]


def test_linked_cubic_dominates():
    out = linked_branch(P("x^2*(x^2+y^2) + x^3 + y^2"))
    assert out.verdict.label == "SparseValues(PowerOneMinusLambda(1/4))"
    zero = out.certificate["sector"]["zeros"][0]
    assert (zero["r"], zero["s"]) == ("1", 3)


def test_linked_fast_approach():
    F = P("x^4 + x*y^2 + y^2")
    for t in (10, 100, 1000):
        assert F(-2, t) == 16 - t * t
    assert linked_branch(F).verdict.tag == "UnboundedBelow"


def test_linked_balanced_case_is_handed_on():
    rep = analyze("x^2*(x^2+y^2) + x*y^2 + y^2")
    nodes = [s.node for s in rep.trace]
    assert "linked:balanced" in nodes and nodes[-1] == "linear-square:sector"


# --- composed forms -------------------------------------------------------------------------

X = BinaryForm.from_text("x")
PELL = BinaryForm.from_text("x^2 - 2*y^2")


def test_line_square_reconstruction():
    F = P("x^2*(x^2+y^2) + x*y^2 + y^2")
    out = prop_first_branch(F, X)
    rep_like = {"completions": out.certificate.get("completions", [])}
    assert rep_like["completions"][0]["kind"] == "line-square"
    assert verify_certificate(analyze(F).to_json()).ok


def test_line_square_negative_line():
    # g2(u) = u^2 - 4 is negative at u = 1, so the line x = 1 carries -3 t^2 + lower terms
    F = P("x^2*(x^2 + y^2) - 4*y^2 + x")
    out = prop_first_branch(F, X)
    assert out.verdict.tag == "UnboundedBelow"
    for x, y, v in out.certificate["points"]:
        assert F(x, y) == Fraction(v)


def test_line_square_odd_gap():
    # g1^2 - 4 g0 g2 has odd degree, so v = -q(u) lines go down
    F = P("x^2*y^2 + x^3*y + x^2 + x^3")
    out = prop_first_branch(F, X)
    assert out.verdict.tag == "UnboundedBelow"


def test_line_fourth_three_ways():
    out = prop_second_branch(P("(x^2+y)^2 + x^2"), X)
    assert out.verdict.label == "SparseValues(LandauLogHalf)"
    out = prop_second_branch(P("x^4 + x^2*y + y^2"), X)
    assert out.verdict.label == "SparseValues(PowerOneMinusLambda(1/8))"
    comp = out.certificate["completions"][0]
    # g1^2 - 4 g0 g2 = u^4 - 4 u^4
    assert comp["N"] == ["0", "0", "0", "0", "-3"]
    F = P("x^4 + x^2*y - y^2")
    assert prop_second_branch(F, X).verdict.tag == "UnboundedBelow"
    assert [F(1, t) for t in (10, 100, 1000)] == [-89, -9899, -998999]


def test_indefinite_square_three_ways():
    out = prop_last_branch(P("(x^2-2*y^2)^2 + x"), PELL)
    assert out.verdict.tag == "UnboundedBelow"
    out = prop_last_branch(P("(x^2-2*y^2)^2 + x^2"), PELL)
    assert out.verdict.label == "SparseValues(PowerOneMinusLambda(1/4))"
    out = prop_last_branch(P("(x^2-2*y^2)^2 + (x^2-2*y^2)"), PELL)
    assert out.verdict.tag == "Composition"


def test_common_factor_three_ways():
    assert prime_case_branch(P("x*y*(x*y+1)")).verdict.label == "ReducibleGap(line-pair)"
    out = prime_case_branch(P("x*(x^3+2*y^3+1)"))
    assert out.verdict.tag == "UnboundedBelow"
    out = prime_case_branch(P("x^2*y^2"))
    assert out.verdict.label == "SparseValues(HomogeneousEmpirical)"
    assert out.certificate["composition"]["outer"] == ["0", "0", "1"]


def test_curve_fibre_genus_is_recorded():
    rep = analyze("x^2*y^2 + x^2*y").to_json()
    assert rep["verdict"]["label"] == "ReducibleGap(linear-factor)"
    assert verify_certificate(rep).ok


# --- whole-pipeline properties ------------------------------------------------------------------


def test_unsupported_degrees():
    with pytest.raises(UnsupportedInput):
        analyze("x^5")
    with pytest.raises(UnsupportedInput):
        analyze("7")


CORPUS_SMALL = [
    "x^4 - y^4 + x",
    "x^4 + y^4 + x",
    "x^2*y^2 + x^3 + x^2 + y",
    "x^4 + x*y^2 + y^2",
    "x^4 + x^2*y - y^2",
    "(x^2-2*y^2)^2 + (x^2-2*y^2)",
    "x^2 + y^2 + x",
    "x^3 + y",
    "x*y + x",
]


@pytest.mark.parametrize("text", CORPUS_SMALL)
def test_trace_is_a_path_and_output_is_deterministic(text):
    a, b = analyze(text), analyze(text)
    assert a.dumps() == b.dumps()
    ok, why = trace_is_path([s.node for s in a.trace])
    assert ok, why


@given(st.sampled_from(CORPUS_SMALL), st.integers(1, 5), st.integers(-7, 7))
@settings(max_examples=30)
def test_verdict_ignores_scaling_and_shift(text, k, c):
    F = P(text)
    assert analyze(F.scale(k) + c).verdict.label == analyze(F).verdict.label


@given(st.sampled_from(CORPUS_SMALL), st.integers(0, 10 ** 6))
@settings(max_examples=30)
def test_verdict_is_invariant_under_unimodular_maps(text, seed):
    rng = random.Random(seed)
    A = UnimodularMap.identity()
    for _ in range(3):
        k = rng.choice([-2, -1, 1, 2])
        A = A.compose(rng.choice([UnimodularMap(1, k, 0, 1), UnimodularMap(1, 0, k, 1), UnimodularMap(0, 1, -1, 0)]))
    F = P(text)
    G = transform(F, A)
    rep = analyze(G)
    assert rep.verdict.label == analyze(F).verdict.label, to_text(G)
    assert verify_certificate(rep.to_json()).ok
