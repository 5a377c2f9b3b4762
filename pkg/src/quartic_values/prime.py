"""Common factor: every homogeneous part of F shares a real-rooted factor with F4.

The shared factor g has degree four (F is a form), two (F = H G with H
quadratic), or one or three (F is a linear polynomial times a cubic K). In the
last case the values of F are products of the line value and the level of K,
so the level curves of K decide whether F runs to minus infinity.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Optional

from .curves import (
    GENUS1,
    QBAR_REDUCIBLE,
    REDUCIBLE,
    CurveAnalysis,
    cubic_curve_analysis,
    integral_points_scan,
    mobius_integer_points,
)
from .exact import (
    BiPoly,
    UniPoly,
    apply_unimodular,
    bi_divide,
    extended_gcd,
    homogeneous_parts,
    rat_str,
    rational_roots,
    resultant_in,
    unimodular_from_linear,
)
from .forms import (
    POS_DEF,
    BinaryForm,
    definiteness,
    factor_form,
    form_gcd,
    real_zero_directions,
    split_p0,
)
from .outcome import (
    Context,
    Outcome,
    ZeroData,
    composition,
    composition_payload,
    oracle_table,
    power_law,
    sparse,
    uni_json,
    unbounded,
)
from .report import HOMOGENEOUS, REDUCIBLE_GAP, InternalInconsistency, Verdict
from .witness import DEFAULT_TARGET, DOUBLINGS, Family, line_family, mapped

SCAN_BOUND = 10**4
SAMPLE_LEVELS = (1, -1, 2, -2)


def prime_case_branch(F: BiPoly, target=DEFAULT_TARGET) -> Outcome:
    """Analysis when the four homogeneous parts share a factor with the leading form."""
    ctx = Context(F, F, Fraction(target))
    _, _, _, F4 = homogeneous_parts(F)
    try:
        T = split_p0(F4).real_rooted
    except ValueError:
        # indefinite leading form: the whole form plays the part of the real-rooted factor
        T = F4
    return _common_factor(ctx, T)


def _common_factor(ctx: Context, T: BinaryForm) -> Outcome:
    F1, F2, F3, F4 = homogeneous_parts(ctx.G)
    g = form_gcd([T, F3, F2, F1])
    ctx.step("common-factor", shared=g, degree=g.degree)
    if g.degree == 4:
        return _homogeneous(ctx)
    if g.degree == 2:
        return _quadratic_factor(ctx, g)
    return _linear_factor(ctx, g)


def _homogeneous(ctx: Context) -> Outcome:
    from .classify import detect_composition

    found = detect_composition(ctx.G)
    extra = {}
    if found is not None:
        extra["composition"] = composition_payload(*found)
    ctx.step("common-factor:homogeneous", composition=found is not None)
    return sparse(ctx, HOMOGENEOUS, **extra)


# ---------------------------------------------------------------------------
# Quadratic common factor


def _quadratic_factor(ctx: Context, H: BinaryForm) -> Outcome:
    from .composed import _last

    G = bi_divide(ctx.G, H.to_bipoly())
    if G is None:
        raise InternalInconsistency("shared quadratic factor does not divide the polynomial")
    G2 = BinaryForm.from_bipoly(G.homogeneous(2), 2)
    G1 = G.homogeneous(1)
    ctx.step("common-factor:quadratic", factor=H, cofactor=G)
    if form_gcd([H, G2]).degree == 0:
        return _separated(ctx, H, G, G2)
    fac = factor_form(H)
    if len(fac.factors) == 1 and fac.factors[0][0].degree == 2:
        if not G1.is_zero():
            return _last(ctx, H, None)
        k = G2.divide(H).coeffs[0]
        c = G.constant_term()
        ctx.step("common-factor:quadratic-composition", k=k, c=c)
        return composition(ctx, UniPoly([0, c, k]), H.to_bipoly())
    return _line_pair(ctx, H, G)


def _separated(ctx: Context, H: BinaryForm, G: BiPoly, G2: BinaryForm) -> Outcome:
    """F = L^2 G with G2 coprime to L: G must stay nonnegative off the line L = 0."""
    ctx.step("common-factor:separated", cofactor=G)
    L = factor_form(H).factors[0][0]
    zeros = [ZeroData(real_zero_directions(L)[0], Fraction(1), 1)]
    if definiteness(G2).tag == POS_DEF:
        ctx.step("common-factor:separated-sector", cofactor_form=G2)
        return power_law(ctx, zeros)
    M = factor_form(G2).factors[0][0]
    B = unimodular_from_linear(M)
    back = B.inverse()
    GB = apply_unimodular(G, B)
    beta = GB.coeff(0, 1)
    if beta != 0:
        step = (0, -1 if beta > 0 else 1)
        ctx.step("common-factor:separated-negative", transverse=beta)
        return unbounded(ctx, [mapped(line_family((0, 0), step, "cofactor-line"), back)])
    phi = UniPoly(GB.coeff(i, 0) for i in range(3))
    from .composed import _negative_integer

    w = _negative_integer(phi)
    if w is not None:
        ctx.step("common-factor:separated-negative", level=w)
        fams = [mapped(line_family((w, 0), (0, s), "cofactor-line"), back) for s in (1, -1)]
        return unbounded(ctx, fams)
    ctx.step("common-factor:separated-sector", cofactor_profile=phi)
    return power_law(ctx, zeros)


def _line_pair(ctx: Context, H: BinaryForm, G: BiPoly) -> Outcome:
    """F = L1 L2 G with rational lines: restrict F to each translate L = d."""
    fac = factor_form(H)
    ctx.step("common-factor:line-pair", factor=H)
    lines = []
    for f, _ in fac.factors:
        a, b = f.int_coeffs()
        _, s, t = extended_gcd(a, b)
        d, z = BiPoly.x(), BiPoly.y()
        rows = ctx.G.compose(d * s - z * b, d * t + z * a).in_var("y")
        hit = _degree_one_level(rows)
        if hit is not None:
            c1 = rows[1](hit)
            step = -1 if c1 > 0 else 1
            base = (hit * s, hit * t)
            fam = line_family(base, (-b * step, a * step), "line-translate")
            ctx.step("common-factor:line-pair-linear", line=f, level=hit)
            return unbounded(ctx, [fam])
        lines.append({"line": [a, b], "cofactor": [s, t], "coefficients": [uni_json(r) for r in rows], "degree_one_at": []})
    factors = []
    for f, m in fac.factors:
        factors.extend([f.to_bipoly().serialize()] * m)
    factors.append(G.serialize())
    cert = {
        "subcase": "line-pair",
        "factorization": {"content": rat_str(fac.content), "factors": factors},
        "lines": lines,
        "oracle": oracle_table(ctx.G),
    }
    ctx.step("common-factor:line-pair-gap", lines=len(lines))
    return Outcome(Verdict(REDUCIBLE_GAP, subcase="line-pair"), cert, ctx.trace)


def _degree_one_level(rows: list[UniPoly]) -> Optional[int]:
    """A nonzero integer d at which the restriction has degree exactly one in z."""
    if len(rows) < 2 or rows[1].is_zero():
        return None
    high = [r for r in rows[2:] if not r.is_zero()]
    if not high:
        return next(d for d in range(1, rows[1].degree + 2) if rows[1](d) != 0)
    common: Optional[set] = None
    for r in high:
        roots = set(rational_roots(r)) if r.degree > 0 else set()
        common = roots if common is None else common & roots
    for d in sorted(common or ()):
        if d.denominator == 1 and d != 0 and rows[1](d) != 0:
            return int(d)
    return None


# ---------------------------------------------------------------------------
# Linear or cubic common factor: F = (a u + b) K(u, v)


def _linear_factor(ctx: Context, g: BinaryForm) -> Outcome:
    F1, F2, F3, F4 = homogeneous_parts(ctx.G)
    if g.degree == 1:
        A = unimodular_from_linear(g)
        a, b = Fraction(1), Fraction(0)
        K_xy = bi_divide(ctx.G, g.to_bipoly())
    else:
        ell = F4.divide(g)
        c = F3.divide(g).coeffs[0] if not F3.is_zero() else Fraction(0)
        a = ell.content()
        A = unimodular_from_linear(ell.primitive())
        b = c
        K_xy = g.to_bipoly()
    if K_xy is None:
        raise InternalInconsistency("shared linear factor does not divide the polynomial")
    back = A.inverse()
    K = apply_unimodular(K_xy, A)
    line_xy = BiPoly({(1, 0): A.a * a, (0, 1): A.b * a, (0, 0): b})
    ctx.step("common-factor:linear", map=A.to_json(), a=a, b=b, cofactor=K)
    odd = _odd_fibre(K, a, b)
    if odd is not None:
        u0, sense = odd
        ctx.step("common-factor:odd-fibre", fibre=u0)
        return unbounded(ctx, [mapped(line_family((u0, 0), (0, sense), "odd-fibre"), back)])
    levels = _levels(K)
    for level in sorted(levels):
        if level == 0:
            continue
        for line in _lines_with_points(K - level):
            fam = _line_walk(line, a, b, level, back)
            if fam is not None:
                ctx.step("common-factor:curve-line", level=level, line=line)
                return unbounded(ctx, [fam])
    fibres = []
    for level in sorted(levels | set(Fraction(v) for v in SAMPLE_LEVELS)):
        P = K - level
        analysis = cubic_curve_analysis(P)
        fibres.append(
            {
                "level": rat_str(level),
                "special": level in levels,
                "analysis": analysis.to_json(),
                "integral_points": _integral_claim(analysis),
                "scan": _scan(P),
            }
        )
    cert = {
        "subcase": "linear-factor",
        "factorization": {"content": "1", "factors": [line_xy.serialize(), K_xy.serialize()]},
        "map": A.to_json(),
        "line": {"a": rat_str(a), "b": rat_str(b)},
        "cofactor": K.serialize(),
        "fibres": fibres,
        "theory_backed": True,
        "oracle": oracle_table(ctx.G),
    }
    ctx.step("common-factor:curve-gap", levels=[f["level"] for f in fibres])
    return Outcome(Verdict(REDUCIBLE_GAP, subcase="linear-factor"), cert, ctx.trace)


def _odd_fibre(K: BiPoly, a: Fraction, b: Fraction) -> Optional[tuple[int, int]]:
    """A fibre u = u0 off the zero line on which K has odd degree in v, with the descending sense."""
    rows = K.in_var("y")
    candidates = set(range(-3, 4))
    for r in rows:
        if r.degree > 0:
            candidates |= {int(t) for t in rational_roots(r) if t.denominator == 1}
    for u0 in sorted(candidates, key=lambda t: (abs(t), t)):
        lin = a * u0 + b
        if lin == 0:
            continue
        vals = [r(u0) for r in rows]
        deg = max((k for k, c in enumerate(vals) if c != 0), default=0)
        if deg % 2:
            lead = lin * vals[deg]
            return u0, -1 if lead > 0 else 1
    return None


def _levels(K: BiPoly) -> set[Fraction]:
    """Levels where K - level may split or acquire a singular point."""
    out: set[Fraction] = set()
    top = BinaryForm.from_bipoly(K.homogeneous(3), 3)
    for f, _ in factor_form(top).factors:
        if f.degree != 1:
            continue
        h, k = f.int_coeffs()
        _, s, t = extended_gcd(h, k)
        c, z = BiPoly.x(), BiPoly.y()
        # K on the line h u + k v = c
        rows = K.compose(c * s - z * k, c * t + z * h).in_var("y")
        moving = [r for r in rows[1:] if not r.is_zero()]
        if not moving:
            continue
        common = set(rational_roots(moving[0])) if moving[0].degree > 0 else set()
        for r in moving[1:]:
            common &= set(rational_roots(r)) if r.degree > 0 else set()
        out |= {rows[0](c0) for c0 in common}
    Kx, Ky = K.partial("x"), K.partial("y")
    if not Kx.is_zero() and not Ky.is_zero() and Ky.degree_in("y") > 0:
        res = resultant_in(Kx, Ky, "y")
        if not res.is_zero():
            for u0 in rational_roots(res) if res.degree > 0 else []:
                ry = UniPoly([r(u0) for r in Ky.in_var("y")])
                for v0 in rational_roots(ry) if ry.degree > 0 else []:
                    if Kx(u0, v0) == 0:
                        out.add(Fraction(K(u0, v0)))
    return out


def _lines_with_points(P: BiPoly) -> list[BiPoly]:
    from .curves import rational_line_factors

    return [ln for ln in rational_line_factors(P) if ln.coeff(0, 1) != 0 and ln.constant_term().denominator == 1]


def _line_walk(line: BiPoly, a: Fraction, b: Fraction, level: Fraction, back) -> Optional[Family]:
    """Integer points of h u + k v + c = 0 with u moving so that (a u + b) level decreases."""
    h, k, c = int(line.coeff(1, 0)), int(line.coeff(0, 1)), int(line.constant_term())
    _, s, t = extended_gcd(h, k)
    # points (-c s - k z, -c t + h z); u moves by -k per unit of z
    base = (-c * s, -c * t)
    du = -k
    sense = -1 if a * level * du > 0 else 1

    def gen() -> Iterator[tuple[int, int]]:
        for j in range(DOUBLINGS):
            z = sense * (1 << j)
            yield back.apply(base[0] - k * z, base[1] + h * z)

    recipe = {"kind": "level-line", "line": line.serialize(), "level": rat_str(level), "sense": sense}
    return Family("level-line", recipe, gen)


def _integral_claim(analysis: CurveAnalysis) -> dict:
    if analysis.kind == GENUS1:
        return {"kind": "finite", "reason": "smooth cubic of genus one"}
    if analysis.kind == QBAR_REDUCIBLE:
        return {"kind": "finite", "reason": "conjugate lines meet in finitely many rational points"}
    if analysis.kind == REDUCIBLE:
        return {"kind": "conic-component", "reason": "rational line components carry no integer points"}
    param = analysis.parametrization
    if max(param.R1.degree, param.Q1.degree) <= 1:
        pts = mobius_integer_points(param.R1, param.Q1, param.R2, param.Q2)
        return {"kind": pts.kind, "reason": "first coordinate is a Moebius function", **pts.to_json()}
    if max(param.R2.degree, param.Q2.degree) <= 1:
        pts = mobius_integer_points(param.R2, param.Q2, param.R1, param.Q1)
        out = pts.to_json()
        out["points"] = [[p[1], p[0]] for p in out["points"]]
        out["kind"] = pts.kind
        return {"reason": "second coordinate is a Moebius function", **out}
    return {"kind": "thin", "reason": "rational curve without a Moebius coordinate"}


def _scan(P: BiPoly) -> dict:
    pts = integral_points_scan(P, SCAN_BOUND)
    return {"bound": SCAN_BOUND, "count": len(pts), "points": [list(p) for p in pts[:20]]}
