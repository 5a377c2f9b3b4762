"""Balanced zeros: completing the square along the zero line of the leading form.

Three shapes occur. A rational zero line of multiplicity two (``F4 = H^2 P``
with H linear), a rational line of multiplicity four (``F4 = a H^4``), and an
irreducible indefinite quadratic zero set (``F4 = a H^2``). In each case F is
written as a square plus a remainder whose growth decides the verdict.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator, Optional

from .dioph import dirlem_pairs
from .exact import (
    BiPoly,
    UniPoly,
    apply_unimodular,
    homogeneous_parts,
    isolate_real_roots,
    lcm_all,
    rational_roots,
    squarefree_part,
    unimodular_from_linear,
)
from .forms import BinaryForm, real_zero_directions, sign_at_direction
from .outcome import Context, Outcome, ZeroData, composition, power_law, sparse, uni_json, unbounded
from .report import LANDAU, InternalInconsistency
from .witness import DEFAULT_TARGET, DOUBLINGS, Family, explicit_family, line_family, mapped

ORBIT_POINTS = 16


def _rows(GA: BiPoly) -> tuple[UniPoly, UniPoly, UniPoly]:
    rows = GA.in_var("y")
    if len(rows) > 3:
        raise InternalInconsistency("expected degree at most two in the transverse variable")
    rows = list(rows) + [UniPoly()] * (3 - len(rows))
    return rows[2], rows[1], rows[0]


def _negative_integer(p: UniPoly) -> Optional[int]:
    """An integer where p is negative, searched between its real roots."""
    if p.is_zero():
        return None
    if p.degree == 0:
        return 0 if p.coeff(0) < 0 else None
    ivs = isolate_real_roots(squarefree_part(p), Fraction(1, 4))
    if not ivs:
        return None if p.lc > 0 else 0
    lo = math.floor(ivs[0][0]) - 1
    hi = math.ceil(ivs[-1][1]) + 1
    for w in range(lo, hi + 1):
        if p(w) < 0:
            return w
    return None


def _integral_roots(p: UniPoly) -> list[int]:
    if p.is_zero() or p.degree == 0:
        return []
    return [int(r) for r in rational_roots(p) if r.denominator == 1]


def _balanced(ctx: Context, Xi: list[ZeroData]) -> Outcome:
    balanced = [z for z in Xi if z.r == z.s]
    quadratic = [z for z in balanced if z.xi.minimal_form.degree == 2]
    if quadratic:
        return _last(ctx, quadratic[0].xi.minimal_form, Xi)
    if balanced[0].r == 2:
        return _second(ctx, balanced[0].xi.minimal_form, Xi)
    completions, exceptional = [], []
    lines = [z for z in balanced if z.r == 1]
    for z in lines:
        out = _first(ctx, z.xi.minimal_form)
        if isinstance(out, Outcome):
            return out
        completions.append(out[0])
        exceptional.extend(out[1])
    ctx.step("linear-square:sector", lines=len(lines))
    return power_law(ctx, Xi, exceptional, completions=completions)


# ---------------------------------------------------------------------------
# Linear zero line of multiplicity two


def prop_first_branch(F: BiPoly, H: BinaryForm, target=DEFAULT_TARGET) -> Outcome:
    """Square completion along the line H = 0 where F4 vanishes to order two."""
    ctx = Context(F, F, Fraction(target))
    _, _, F3, F4 = homogeneous_parts(F)
    out = _first(ctx, H)
    if isinstance(out, Outcome):
        return out
    from .forms import split_p0
    from .outcome import shared_zeros

    Xi = shared_zeros(F4, split_p0(F4).real_rooted, F3)
    ctx.step("linear-square:sector")
    return power_law(ctx, Xi, out[1], completions=[out[0]])


def _residue_points(q: UniPoly) -> Optional[tuple[int, int]]:
    """(u0, period) with q(u0 + period k) integral for every k, when such u0 exists."""
    den = lcm_all(c.denominator for c in q.coeffs) if not q.is_zero() else 1
    for u0 in range(den):
        if q(u0).denominator == 1:
            return u0, den
    return None


def _first(ctx: Context, H: BinaryForm):
    """Either a final Outcome, or (completion payload, exceptional lines) to continue."""
    A = unimodular_from_linear(H)
    back = A.inverse()
    GA = apply_unimodular(ctx.G, A)
    g2, g1, g0 = _rows(GA)
    N = g1 * g1 - g0 * g2 * 4
    q, h = g1.divmod(g2 * 2)
    payload = {
        "kind": "line-square",
        "map": A.to_json(),
        "g2": uni_json(g2),
        "g1": uni_json(g1),
        "g0": uni_json(g0),
        "N": uni_json(N),
        "q": uni_json(q),
        "h": uni_json(h),
    }
    ctx.step("linear-square", line=H, map=A.to_json(), g2=g2, discriminant_degree=N.degree)
    w = _negative_integer(g2)
    if w is not None:
        ctx.step("linear-square:negative-line", line_value=w)
        fams = [mapped(line_family((w, 0), (0, s), "negative-line"), back) for s in (1, -1)]
        return unbounded(ctx, fams, completions=[payload])
    if not N.is_zero() and N.degree > 2 and (N.lc > 0 or N.degree % 2):
        ctx.step("linear-square:growing-gap", discriminant=N)
        return unbounded(ctx, _gap_families(g2, g1, q, back), completions=[payload])
    exceptional = [{"line": str(H), "value": w} for w in _integral_roots(g2)]
    return payload, exceptional


def _gap_families(g2: UniPoly, g1: UniPoly, q: UniPoly, back) -> list[Family]:
    """Points with v cancelling the v-linear term, exactly when q is integral on a class."""
    fams = []
    res = _residue_points(q)
    for s in (1, -1):
        if res is not None:
            u0, period = res

            def gen(s=s, u0=u0, period=period) -> Iterator[tuple[int, int]]:
                for j in range(DOUBLINGS):
                    u = u0 + s * period * (1 << j)
                    yield back.apply(u, -int(q(u)))

            recipe = {"kind": "square-centre", "u0": u0, "period": period, "sense": s, "v": "-q(u)"}
            fams.append(Family("square-centre", recipe, gen))

        def rounded(s=s) -> Iterator[tuple[int, int]]:
            for j in range(DOUBLINGS):
                u = s * (1 << j)
                den = g2(u) * 2
                if den == 0:
                    continue
                v = -round(g1(u) / den)
                yield back.apply(u, v)

        recipe = {"kind": "square-centre-rounded", "sense": s, "v": "-round(g1(u)/(2 g2(u)))"}
        fams.append(Family("square-centre-rounded", recipe, rounded))
    return fams


# ---------------------------------------------------------------------------
# Linear zero line of multiplicity four


def prop_second_branch(F: BiPoly, H: BinaryForm, target=DEFAULT_TARGET) -> Outcome:
    """Square completion along the line H = 0 where F4 = a H^4."""
    ctx = Context(F, F, Fraction(target))
    _, _, F3, F4 = homogeneous_parts(F)
    from .forms import split_p0
    from .outcome import shared_zeros

    return _second(ctx, H, shared_zeros(F4, split_p0(F4).real_rooted, F3))


def _second(ctx: Context, H: BinaryForm, Xi: list[ZeroData]) -> Outcome:
    A = unimodular_from_linear(H)
    back = A.inverse()
    GA = apply_unimodular(ctx.G, A)
    g2, g1, g0 = _rows(GA)
    if g2.degree > 0:
        raise InternalInconsistency("square coefficient is not constant along a fourth-order line")
    b = g2.coeff(0)
    N = g1 * g1 - g0 * g2 * 4
    payload = {
        "kind": "line-fourth",
        "map": A.to_json(),
        "g2": uni_json(g2),
        "g1": uni_json(g1),
        "g0": uni_json(g0),
        "N": uni_json(N),
    }
    ctx.step("linear-fourth", line=H, map=A.to_json(), square_coefficient=b, discriminant=N)
    if b <= 0:
        ctx.step("linear-fourth:nonpositive-square", square_coefficient=b)
        if b < 0:
            fams = [mapped(line_family((0, 0), (0, s), "transverse-line"), back) for s in (1, -1)]
        else:
            u0 = next(u for u in range(1, 8) if g1(u) != 0)
            s = -1 if g1(u0) > 0 else 1
            fams = [mapped(line_family((u0, 0), (0, s), "transverse-line"), back)]
        return unbounded(ctx, fams, completions=[payload])
    # G = b (v + g1 / 2b)^2 - N / 4b
    if N.degree <= 0:
        inner_uv = BiPoly.y() + BiPoly.from_uni(g1, "x") * (1 / (2 * b))
        inner = inner_uv.compose(BiPoly.x() * A.a + BiPoly.y() * A.b, BiPoly.x() * A.c + BiPoly.y() * A.d)
        outer = UniPoly([-N.coeff(0) / (4 * b), 0, b])
        ctx.step("linear-fourth:constant-gap", gap=-N.coeff(0) / (4 * b))
        return composition(ctx, outer, inner, completions=[payload])
    if N.degree % 2 or N.lc > 0:
        ctx.step("linear-fourth:growing-gap", discriminant=N)
        fams = []
        for s in (1, -1):

            def gen(s=s) -> Iterator[tuple[int, int]]:
                for j in range(DOUBLINGS):
                    u = s * (1 << j)
                    yield back.apply(u, -round(g1(u) / (2 * b)))

            recipe = {"kind": "square-centre-rounded", "sense": s, "v": "-round(g1(u)/(2 b))"}
            fams.append(Family("square-centre-rounded", recipe, gen))
        return unbounded(ctx, fams, completions=[payload])
    gap = N * Fraction(-1) * (1 / (4 * b))
    if N.degree == 2:
        e, f, c0 = gap.coeff(2), gap.coeff(1), gap.coeff(0)
        ctx.step("linear-fourth:definite-quadratic", e=e, f=f, c0=c0)
        return sparse(ctx, LANDAU, completions=[payload], gap={"e": e, "f": f, "c0": c0})
    ctx.step("linear-fourth:sector", gap=gap)
    return power_law(ctx, Xi, completions=[payload])


# ---------------------------------------------------------------------------
# Irreducible indefinite quadratic zero set


def prop_last_branch(F: BiPoly, H: BinaryForm, target=DEFAULT_TARGET) -> Outcome:
    """Square completion around the conic H = const where F4 = a H^2."""
    return _last(Context(F, F, Fraction(target)), H, None)


def _last(ctx: Context, H: BinaryForm, Xi: Optional[list[ZeroData]]) -> Outcome:
    from .classify import complete_square_quadratic

    x, y = BiPoly.x(), BiPoly.y()
    _, _, F3, F4 = homogeneous_parts(ctx.G)
    H = H.primitive()
    a4 = F4.divide(H * H).coeffs[0]
    L = F3.divide(H) if not F3.is_zero() else BinaryForm.zero()
    P = H.to_bipoly() + (L.to_bipoly() * (1 / (2 * a4)) if not L.is_zero() else BiPoly())
    q1, q2, q3 = complete_square_quadratic(P)
    W = H.to_bipoly().compose(x + q1, y + q2) + q3
    Q = ctx.G - W * W * a4
    if Q.degree > 2:
        raise InternalInconsistency("square completion left a remainder of degree above two")
    payload = {
        "kind": "indefinite-square",
        "a4": a4,
        "H": H.to_bipoly().serialize(),
        "q1": q1,
        "q2": q2,
        "q3": q3,
        "Q": Q.serialize(),
    }
    Q2 = BinaryForm.from_bipoly(Q.homogeneous(2), 2)
    zeros = real_zero_directions(H)
    ctx.step("indefinite-square", form=H, a4=a4, q1=q1, q2=q2, q3=q3, remainder=Q)
    if Xi is None:
        Xi = [ZeroData(z, Fraction(1), 1) for z in zeros]
    d = lcm_all([q1.denominator, q2.denominator])
    m1, m2 = int(q1 * d), int(q2 * d)
    ratio = Q2.divide(H) if not Q2.is_zero() else BinaryForm.zero()
    if ratio is None:
        signs = [sign_at_direction(Q2, z) for z in zeros]
        if all(s > 0 for s in signs):
            ctx.step("indefinite-square:sector", signs=signs)
            return power_law(ctx, Xi, completions=[payload])
        xi = zeros[signs.index(-1)]
        ctx.step("indefinite-square:negative-direction", direction=xi)
        return unbounded(ctx, _orbit_families(H, d, m1, m2, xi, (1, -1)), completions=[payload])
    q0 = ratio.coeffs[0] if not ratio.is_zero() else Fraction(0)
    M = Q - W * q0
    M1 = BinaryForm.from_bipoly(M.homogeneous(1), 1)
    c = M.constant_term()
    if not M1.is_zero():
        xi = zeros[0]
        o = -1 if sign_at_direction(M1, xi, 1) > 0 else 1
        ctx.step("indefinite-square:linear-remainder", direction=xi, linear_part=M1)
        return unbounded(ctx, _orbit_families(H, d, m1, m2, xi, (o,)), completions=[payload])
    ctx.step("indefinite-square:composition", q0=q0, constant=c)
    return composition(ctx, UniPoly([c, q0, a4]), W, completions=[payload])


def _orbit_families(H, d, m1, m2, xi, orientations) -> list[Family]:
    fams = []
    for o in orientations:
        res = dirlem_pairs(H, d, m1, m2, ORBIT_POINTS, target=xi, orientation=o)
        recipe = {"kind": "bounded-form-orbit", "orientation": o, **res.to_json()}
        recipe.pop("points")
        fams.append(explicit_family([(p.u, p.v) for p in res.points], "bounded-form-orbit", recipe))
    return fams
