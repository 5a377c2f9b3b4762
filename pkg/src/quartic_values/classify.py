"""Route a polynomial of degree at most four to a verdict with a certificate.

The router normalizes the input, then walks the case tree published in
``data/decision_tree.json``: odd degree, quadratics, and for quartics the
leading form gate followed by the semidefinite chain. Every verdict is
re-checked by the independent verifier before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .exact import (
    BiPoly,
    UniPoly,
    apply_unimodular,
    homogeneous_parts,
    normalize,
    parse_poly,
    to_text,
    unimodular_from_linear,
)
from .forms import (
    INDEF,
    NEG_SEMI,
    POS_DEF,
    POS_SEMI,
    BinaryForm,
    Definiteness,
    definiteness,
    factor_form,
    form_gcd,
    real_zero_directions,
    sign_at_direction,
    split_p0,
    vanishes_at,
)
from .oracle import verify_certificate
from .outcome import (
    Context,
    Outcome,
    composition_payload,
    power_law,
    shared_zeros,
    sparse,
    unbounded,
)
from .report import LANDAU, SQRT, InternalInconsistency, Report, UnsupportedInput
from .witness import (
    DEFAULT_TARGET,
    Family,
    dirichlet_family,
    line_family,
    mapped,
    ray_family,
    rescaled_dirichlet_family,
    small_lines,
)


def analyze(poly: Union[str, BiPoly], target=DEFAULT_TARGET, verify: bool = True) -> Report:
    """Full analysis: normalization, case walk, certificate and self-check."""
    if isinstance(poly, str):
        text, F = poly, parse_poly(poly)
    else:
        text, F = to_text(poly), poly
    d = F.degree
    if d < 1 or d > 4:
        raise UnsupportedInput(f"degree {d} is outside the supported range 1..4")
    ctx = _start(F, target)
    out = _route(ctx)
    G, norm = normalize(F)
    report = Report(text, F, G, norm, out.trace, out.verdict, out.certificate)
    if verify:
        check = verify_certificate(report.to_json())
        if not check.ok:
            raise InternalInconsistency("certificate failed verification: " + "; ".join(check.reasons))
    return report


def _start(F: BiPoly, target=DEFAULT_TARGET) -> Context:
    G, norm = normalize(F)
    ctx = Context(G, F, Fraction(target))
    ctx.step("normalize", degree=G.degree, scale=norm.scale, shift=norm.shift)
    return ctx


def _route(ctx: Context) -> Outcome:
    d = ctx.G.degree
    if d % 2:
        return _odd_degree(ctx)
    if d == 2:
        return _quadratic(ctx)
    return _quartic(ctx)


def _odd_degree(ctx: Context) -> Outcome:
    d = ctx.G.degree
    top = BinaryForm.from_bipoly(ctx.G.homogeneous(d), d)
    w = definiteness(top).witness_neg
    ctx.step("odd-degree", top_form=top, witness=list(w))
    return unbounded(ctx, [ray_family(w)])


# ---------------------------------------------------------------------------
# Quadratics


def complete_square_quadratic(Q: BiPoly) -> tuple[Fraction, Fraction, Fraction]:
    """Shifts with ``Q(x, y) = Q2(x + q1, y + q2) + q3`` for a nondegenerate quadratic part Q2."""
    a, b, c = Q.coeff(2, 0), Q.coeff(1, 1), Q.coeff(0, 2)
    d, e, f = Q.coeff(1, 0), Q.coeff(0, 1), Q.constant_term()
    det = 4 * a * c - b * b
    if det == 0:
        raise ValueError("quadratic part is degenerate")
    q1 = (2 * c * d - b * e) / det
    q2 = (2 * a * e - b * d) / det
    q3 = f - (a * q1 * q1 + b * q1 * q2 + c * q2 * q2)
    return q1, q2, q3


def shifted_quadratic_payload(Q: BiPoly) -> dict:
    q1, q2, q3 = complete_square_quadratic(Q)
    return {
        "kind": "shifted-quadratic",
        "quadratic_part": Q.homogeneous(2).serialize(),
        "q1": q1,
        "q2": q2,
        "q3": q3,
        "polynomial": Q.serialize(),
    }


def classify_quadratic(F: BiPoly, target=DEFAULT_TARGET) -> Outcome:
    if F.degree != 2:
        raise ValueError("expected a polynomial of degree two")
    return _quadratic(_start(F, target))


def _quadratic(ctx: Context) -> Outcome:
    G = ctx.G
    Q2 = BinaryForm.from_bipoly(G.homogeneous(2), 2)
    defn = definiteness(Q2)
    ctx.step("quadratic", quadratic_part=Q2, definiteness=defn.tag)
    if defn.tag in (NEG_SEMI, INDEF):
        ctx.step("quadratic:not-semidefinite", witness=list(defn.witness_neg))
        return unbounded(ctx, [ray_family(defn.witness_neg)])
    if defn.tag == POS_DEF:
        payload = shifted_quadratic_payload(G)
        ctx.step("quadratic:definite", q1=payload["q1"], q2=payload["q2"], q3=payload["q3"])
        return sparse(ctx, LANDAU, missing=True, completions=[payload])
    # Q2 = a L^2: in coordinates u = L the polynomial is a u^2 + c u + e v
    fac = factor_form(Q2)
    L = fac.factors[0][0]
    A = unimodular_from_linear(L)
    GA = apply_unimodular(G, A)
    c, e = GA.coeff(1, 0), GA.coeff(0, 1)
    if e != 0:
        ctx.step("quadratic:square-plus-transverse", square_of=L, map=A.to_json(), transverse=e)
        step = (0, -1 if e > 0 else 1)
        return unbounded(ctx, [mapped(line_family((0, 0), step, "transverse-line"), A.inverse())])
    outer = UniPoly([0, c, fac.content])
    inner = L.to_bipoly()
    ctx.step("quadratic:square-only", square_of=L)
    return sparse(ctx, SQRT, composition=composition_payload(outer, inner))


# ---------------------------------------------------------------------------
# Composition detection


def _linear_inner(G: BiPoly, top: BinaryForm) -> Optional[tuple[UniPoly, BiPoly]]:
    fac = factor_form(top)
    if len(fac.factors) != 1 or fac.factors[0][0].degree != 1:
        return None
    L = fac.factors[0][0]
    A = unimodular_from_linear(L)
    GA = apply_unimodular(G, A)
    if any(j for (_, j) in GA.terms):
        return None
    return UniPoly(GA.coeff(i, 0) for i in range(G.degree + 1)), L.to_bipoly()


def _quadratic_inner(G: BiPoly) -> Optional[tuple[UniPoly, BiPoly]]:
    F1, F2, F3, F4 = homogeneous_parts(G)
    fac = factor_form(F4)
    if any(m % 2 for _, m in fac.factors):
        return None
    S = BinaryForm.one()
    for f, m in fac.factors:
        S = S * f ** (m // 2)
    alpha = fac.content
    G1 = F3.divide(S * (2 * alpha)) if not F3.is_zero() else BinaryForm.zero()
    if G1 is None:
        return None
    rest = F2 - (G1 * G1) * alpha if not G1.is_zero() else F2
    if rest.is_zero():
        beta = Fraction(0)
    else:
        ratio = rest.divide(S)
        if ratio is None or ratio.degree != 0:
            return None
        beta = ratio.coeffs[0]
    expected = G1 * beta if not G1.is_zero() else BinaryForm.zero()
    if (F1 - expected).is_zero() is False:
        return None
    inner = S.to_bipoly() + G1.to_bipoly()
    return UniPoly([G.constant_term(), beta, alpha]), inner


def detect_composition(F: BiPoly) -> Optional[tuple[UniPoly, BiPoly]]:
    """Write F as outer(inner) with deg outer >= 2, or return None.

    Inner polynomials tried: a linear form, and for quartics a quadratic with
    its own linear part.
    """
    d = F.degree
    if d not in (2, 4):
        return None
    top = BinaryForm.from_bipoly(F.homogeneous(d), d)
    found = _linear_inner(F, top)
    if found is None and d == 4:
        found = _quadratic_inner(F)
    return found


# ---------------------------------------------------------------------------
# Quartics: leading form gate


@dataclass(frozen=True)
class Gate:
    branch: str
    definiteness: Definiteness


def leading_form_gate(F: BiPoly) -> Gate:
    if F.degree != 4:
        raise ValueError("the gate applies to quartics")
    F4 = BinaryForm.from_bipoly(F.homogeneous(4), 4)
    defn = definiteness(F4)
    if defn.tag == POS_DEF:
        return Gate("definite", defn)
    if defn.tag == POS_SEMI:
        return Gate("semidefinite", defn)
    return Gate("negative-somewhere", defn)


def _quartic(ctx: Context) -> Outcome:
    gate = leading_form_gate(ctx.G)
    ctx.step("leading-form", definiteness=gate.definiteness.tag)
    if gate.branch == "definite":
        ctx.step("leading:definite")
        return sparse(ctx, SQRT, missing=True)
    if gate.branch == "negative-somewhere":
        w = gate.definiteness.witness_neg
        ctx.step("leading:negative-somewhere", witness=list(w))
        return unbounded(ctx, [ray_family(w)])
    return _semidefinite(ctx)


def _semidefinite(ctx: Context) -> Outcome:
    from .prime import _common_factor

    F1, F2, F3, F4 = homogeneous_parts(ctx.G)
    split = split_p0(F4)
    T = split.real_rooted
    ctx.step("leading:semidefinite", definite_part=split.definite_part, real_rooted=T)
    if form_gcd([T, F3]).degree == 0:
        return _free_zero(ctx, T, F3)
    if form_gcd([T, F3, F2]).degree == 0:
        return _linked(ctx)
    if form_gcd([T, F3, F2, F1]).degree == 0:
        return _shared_zero(ctx, T, F3, F2, F1)
    return _common_factor(ctx, T)


# ---------------------------------------------------------------------------
# Free zero: a zero of the real-rooted part where the cubic part does not vanish


def _free_zero_families(xi, F3: BinaryForm) -> list[Family]:
    o = -1 if sign_at_direction(F3, xi, 1) > 0 else 1
    fams = [dirichlet_family(xi, o, "free-zero")]
    if not xi.is_rational:
        fams.append(rescaled_dirichlet_family(xi, o, "free-zero-rescaled"))
    return fams


def free_zero_witness(F: BiPoly, xi=None, target=DEFAULT_TARGET) -> Outcome:
    """Descent along a zero of the leading form at which the cubic part is nonzero."""
    ctx = Context(F, F, Fraction(target))
    _, _, F3, F4 = homogeneous_parts(F)
    T = split_p0(F4).real_rooted
    return _free_zero(ctx, T, F3, xi)


def _free_zero(ctx: Context, T: BinaryForm, F3: BinaryForm, xi=None) -> Outcome:
    if xi is None:
        xi = next(z for z in real_zero_directions(T) if not vanishes_at(F3, z))
    ctx.step("free-zero", direction=xi, cubic_sign=sign_at_direction(F3, xi, 1))
    return unbounded(ctx, _free_zero_families(xi, F3))


# ---------------------------------------------------------------------------
# Shared zero: the cubic and quadratic parts vanish where the leading form does


def baah_witness(F: BiPoly, target=DEFAULT_TARGET) -> Outcome:
    """Witness for a zero shared by F4, F3 and F2 but not F1."""
    ctx = Context(F, F, Fraction(target))
    F1, F2, F3, F4 = homogeneous_parts(F)
    return _shared_zero(ctx, split_p0(F4).real_rooted, F3, F2, F1)


def _shared_zero(ctx: Context, T: BinaryForm, F3, F2, F1) -> Outcome:
    g = form_gcd([T, F3, F2])
    xi = real_zero_directions(g)[0]
    o = -1 if sign_at_direction(F1, xi, 1) > 0 else 1
    ctx.step("shared-zero", direction=xi, shared_form=g, linear_sign=sign_at_direction(F1, xi, 1))
    fams = small_lines() + [dirichlet_family(xi, o, "shared-zero")]
    if not xi.is_rational:
        fams.append(rescaled_dirichlet_family(xi, o, "shared-zero-rescaled"))
    return unbounded(ctx, fams)


# ---------------------------------------------------------------------------
# Linked: F3 vanishes at some zero of the leading form, F2 does not


def linked_branch(F: BiPoly, target=DEFAULT_TARGET) -> Outcome:
    return _linked(Context(F, F, Fraction(target)))


def _linked(ctx: Context) -> Outcome:
    from .composed import _balanced
    from .dioph import cont2_points
    from .witness import explicit_family

    F1, F2, F3, F4 = homogeneous_parts(ctx.G)
    T = split_p0(F4).real_rooted
    zeros_T = real_zero_directions(T)
    ctx.step("linked", zeros=len(zeros_T))
    if not F3.is_zero():
        free = [z for z in zeros_T if not vanishes_at(F3, z)]
        if free:
            return _free_zero(ctx, T, F3, free[0])
    Xi = shared_zeros(F4, T, F3)
    negative = [z for z in Xi if sign_at_direction(F2, z.xi) < 0]
    if negative:
        xi = negative[0].xi
        ctx.step("linked:negative-quadratic", direction=xi)
        fams = [dirichlet_family(xi, o, "negative-quadratic") for o in (1, -1)]
        if not xi.is_rational:
            fams += [rescaled_dirichlet_family(xi, o, "negative-quadratic-rescaled") for o in (1, -1)]
        return unbounded(ctx, fams)
    if F3.is_zero():
        ctx.step("linked:cubic-vanishes", zeros=[z.to_json() for z in Xi])
        return power_law(ctx, Xi)
    fast = [z for z in Xi if z.r > z.s]
    if fast:
        z = fast[0]
        ctx.step("linked:fast-approach", direction=z.xi, r=z.r, s=z.s)
        fams = []
        for o in (1, -1):
            for off in (1, -1):
                pts = cont2_points(z.xi, z.s, 24, orientation=o, offset_sign=off)
                recipe = {
                    "kind": "rate-window",
                    "direction": z.xi.to_json(),
                    "exponent": z.s,
                    "orientation": o,
                    "offset_sign": off,
                }
                fams.append(explicit_family(pts, "rate-window", recipe))
        return unbounded(ctx, fams)
    if all(z.r < z.s for z in Xi):
        ctx.step("linked:cubic-dominates", zeros=[z.to_json() for z in Xi])
        return power_law(ctx, Xi)
    ctx.step("linked:balanced", zeros=[z.to_json() for z in Xi])
    return _balanced(ctx, Xi)
