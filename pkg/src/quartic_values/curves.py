"""Plane cubic curves: splitting, singular points, rational parametrization
and integer points on parametrized curves.

The cubics handled here come from fibres ``K(x, y) = c`` of a cubic
polynomial. A cubic that is irreducible over the algebraic closure has at
most one singular point; when it exists it is rational (a lone singular point
is fixed by every Galois conjugation), so lines through it parametrize the
curve over Q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .exact import (
    BiPoly,
    UniPoly,
    bi_divide,
    divisors,
    extended_gcd,
    lcm_all,
    rat_str,
    rational_roots,
    resultant,
    resultant_in,
    uni_gcd,
)
from .forms import BinaryForm, factor_form

REDUCIBLE = "ReducibleOverQ"
QBAR_REDUCIBLE = "QbarReducible"
GENUS1 = "Genus1"
GENUS0 = "Genus0"


# ---------------------------------------------------------------------------
# Small trivariate helper for projective computations

Tri = dict  # {(i, j, k): Fraction}, exponents of X, Y, Z


def _tri_homogenize(P: BiPoly, degree: int) -> Tri:
    return {(i, j, degree - i - j): c for (i, j), c in P.items()}


def _tri_add(a: Tri, b: Tri, sign: int = 1) -> Tri:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, Fraction(0)) + sign * v
        if out[k] == 0:
            del out[k]
    return out


def _tri_mul(a: Tri, b: Tri) -> Tri:
    out: Tri = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            key = (ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2])
            out[key] = out.get(key, Fraction(0)) + va * vb
    return {k: v for k, v in out.items() if v != 0}


def _tri_partial(a: Tri, idx: int) -> Tri:
    out: Tri = {}
    for k, v in a.items():
        if k[idx]:
            key = list(k)
            key[idx] -= 1
            out[tuple(key)] = v * k[idx]
    return out


def hessian(P: BiPoly) -> Tri:
    """Determinant of second partials of the projective closure of a cubic."""
    F = _tri_homogenize(P, 3)
    first = [_tri_partial(F, i) for i in range(3)]
    m = [[_tri_partial(first[i], j) for j in range(3)] for i in range(3)]

    def minor(r1, r2, c1, c2):
        return _tri_add(_tri_mul(m[r1][c1], m[r2][c2]), _tri_mul(m[r1][c2], m[r2][c1]), -1)

    out: Tri = {}
    out = _tri_add(out, _tri_mul(m[0][0], minor(1, 2, 1, 2)))
    out = _tri_add(out, _tri_mul(m[0][1], minor(1, 2, 0, 2)), -1)
    out = _tri_add(out, _tri_mul(m[0][2], minor(1, 2, 0, 1)))
    return out


def _proportional(a: Tri, b: Tri) -> bool:
    if set(a) != set(b) or not a:
        return False
    key = next(iter(a))
    ratio = a[key] / b[key]
    return all(a[k] == ratio * b[k] for k in a)


# ---------------------------------------------------------------------------
# Results


@dataclass(frozen=True)
class Parametrization:
    """x = R1(t)/Q1(t), y = R2(t)/Q2(t)."""

    R1: UniPoly
    Q1: UniPoly
    R2: UniPoly
    Q2: UniPoly

    def identity_residual(self, P: BiPoly) -> UniPoly:
        """P(x(t), y(t)) times (Q1 Q2)^deg P; the zero polynomial on a valid parametrization."""
        d = P.degree
        a, b, c = self.R1 * self.Q2, self.R2 * self.Q1, self.Q1 * self.Q2
        out = UniPoly()
        for (i, j), coef in P.items():
            out = out + a ** i * b ** j * c ** (d - i - j) * coef
        return out

    def to_json(self) -> dict:
        return {
            "x": [[rat_str(c) for c in self.R1.coeffs], [rat_str(c) for c in self.Q1.coeffs]],
            "y": [[rat_str(c) for c in self.R2.coeffs], [rat_str(c) for c in self.Q2.coeffs]],
        }


@dataclass(frozen=True)
class CurveAnalysis:
    kind: str
    factors: tuple[BiPoly, ...] = ()
    singular_points: tuple[tuple, ...] = ()
    parametrization: Optional[Parametrization] = None
    note: str = ""

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.factors:
            out["factors"] = [f.serialize() for f in self.factors]
        if self.singular_points:
            out["singular_points"] = [_point_json(p) for p in self.singular_points]
        if self.parametrization is not None:
            out["parametrization"] = self.parametrization.to_json()
        if self.note:
            out["note"] = self.note
        return out


def _point_json(p: tuple) -> list[str]:
    return [rat_str(c) for c in p]


# ---------------------------------------------------------------------------
# Rational line components


def _line_through(h: int, k: int, c: Fraction) -> BiPoly:
    return BiPoly({(1, 0): h, (0, 1): k, (0, 0): c})


def rational_line_factors(P: BiPoly) -> list[BiPoly]:
    """Every rational line ``h x + k y + c`` dividing P, one entry per distinct line."""
    top = BinaryForm.from_bipoly(P.homogeneous(P.degree), P.degree)
    found: list[BiPoly] = []
    for f, _ in factor_form(top).factors:
        if f.degree != 1:
            continue
        h, k = f.int_coeffs()
        g, s, t = extended_gcd(h, k)
        # points of h x + k y = -c are (-c s - k z, -c t + h z); c is the x variable below
        cx, z = BiPoly.x(), BiPoly.y()
        restricted = P.compose(cx * (-s) + z * (-k), cx * (-t) + z * h)
        rows = [r for r in restricted.in_var("y") if not r.is_zero()]
        if not rows:
            raise ValueError("polynomial vanishes identically")
        common = rows[0]
        for r in rows[1:]:
            common = uni_gcd(common, r)
        if common.degree == 0:
            continue
        for c in rational_roots(common):
            found.append(_line_through(h, k, c))
    return found


def _split_lines(P: BiPoly) -> list[BiPoly]:
    pieces: list[BiPoly] = []
    rest = P
    changed = True
    while changed and rest.degree > 1:
        changed = False
        for line in rational_line_factors(rest):
            q = bi_divide(rest, line)
            if q is not None:
                pieces.append(line)
                rest = q
                changed = True
                break
    if rest.degree >= 1:
        pieces.append(rest)
    elif pieces:
        pieces[0] = pieces[0].scale(rest.constant_term())
    return pieces


# ---------------------------------------------------------------------------
# Singular points and parametrization


def _affine_singular_points(P: BiPoly) -> list[tuple[Fraction, Fraction]]:
    Px, Py = P.partial("x"), P.partial("y")
    if Py.is_zero() or P.degree_in("y") == 0:
        return []
    r = resultant_in(P, Py, "y")
    if r.is_zero():
        return []
    pts = []
    for x0 in rational_roots(r) if r.degree > 0 else []:
        polys = [Q.substitute_uni(UniPoly.const(x0), UniPoly.t()) for Q in (P, Px, Py)]
        nz = [q for q in polys if not q.is_zero()]
        if not nz:
            continue
        g = nz[0]
        for q in nz[1:]:
            g = uni_gcd(g, q)
        if g.degree == 0:
            continue
        for y0 in rational_roots(g):
            pts.append((x0, y0))
    return pts


def _infinite_singular_points(P: BiPoly) -> list[tuple[int, int]]:
    """Directions [a : b : 0] where the projective closure is singular."""
    top = BinaryForm.from_bipoly(P.homogeneous(3), 3)
    quad = BinaryForm.from_bipoly(P.homogeneous(2), 2)
    pts = []
    for f, m in factor_form(top).factors:
        if f.degree == 1 and m >= 2:
            h, k = f.int_coeffs()
            a, b = k, -h
            if quad(a, b) == 0:
                pts.append((a, b))
    return pts


def _param_affine(P: BiPoly, x0: Fraction, y0: Fraction) -> Parametrization:
    X, t = BiPoly.x(), BiPoly.y()
    shifted = P.compose(X + x0, X * t + y0)
    rows = shifted.in_var("x")
    rows += [UniPoly()] * (4 - len(rows))
    A, B = rows[2], rows[3]
    # X = -A/B on the line through the node with slope t
    return _reduced(UniPoly.const(x0) * B - A, B, UniPoly.const(y0) * B - UniPoly.t() * A, B)


def _param_infinite(P: BiPoly, a: int, b: int) -> Parametrization:
    g, s, t0 = extended_gcd(b, -a)
    # b*s - a*t0 = 1, so the line (t s + z a, t t0 + z b) has b x - a y = t
    T, Zv = BiPoly.x(), BiPoly.y()
    restricted = P.compose(T * s + Zv * a, T * t0 + Zv * b)
    rows = restricted.in_var("y")
    rows += [UniPoly()] * (2 - len(rows))
    if len(rows) > 2 and any(not r.is_zero() for r in rows[2:]):
        raise ArithmeticError("point at infinity is not a double point")
    c0, c1 = rows[0], rows[1]
    tt = UniPoly.t()
    return _reduced(tt * s * c1 - c0 * a, c1, tt * t0 * c1 - c0 * b, c1)


def _reduced(R1: UniPoly, Q1: UniPoly, R2: UniPoly, Q2: UniPoly) -> Parametrization:
    out = []
    for num, den in ((R1, Q1), (R2, Q2)):
        g = uni_gcd(num, den) if not num.is_zero() else den
        if g.degree > 0:
            num, den = num.exact_div(g), den.exact_div(g)
        lc = den.lc
        out.extend([num * (1 / lc), den * (1 / lc)])
    return Parametrization(*out)


def cubic_curve_analysis(P: BiPoly) -> CurveAnalysis:
    """Classify the plane cubic P = 0.

    Rational line components are split off first. A cubic irreducible over Q
    is then tested for splitting over the algebraic closure with its Hessian:
    three concurrent lines have vanishing Hessian and a triangle of lines has
    Hessian proportional to the cubic. Otherwise the curve is irreducible and
    has genus 0 exactly when it has a (necessarily rational) singular point.
    """
    if P.degree != 3:
        raise ValueError("expected a cubic")
    pieces = _split_lines(P)
    if len(pieces) > 1:
        return CurveAnalysis(REDUCIBLE, factors=tuple(pieces))
    H = hessian(P)
    if not H:
        return CurveAnalysis(QBAR_REDUCIBLE, note="three concurrent conjugate lines")
    if _proportional(H, _tri_homogenize(P, 3)):
        return CurveAnalysis(QBAR_REDUCIBLE, note="triangle of conjugate lines")
    affine = _affine_singular_points(P)
    infinite = _infinite_singular_points(P)
    if not affine and not infinite:
        return CurveAnalysis(GENUS1)
    if affine:
        x0, y0 = affine[0]
        param = _param_affine(P, x0, y0)
        sing = ((x0, y0, Fraction(1)),)
    else:
        a, b = infinite[0]
        param = _param_infinite(P, a, b)
        sing = ((Fraction(a), Fraction(b), Fraction(0)),)
    if not param.identity_residual(P).is_zero():
        raise ArithmeticError("parametrization failed its substitution check")
    return CurveAnalysis(GENUS0, singular_points=sing, parametrization=param)


# ---------------------------------------------------------------------------
# Integer points on a curve parametrized with a Moebius first coordinate


@dataclass(frozen=True)
class MobiusPoints:
    kind: str  # "finite" or "unbounded"
    points: tuple[tuple[int, int], ...] = ()
    resultant: Optional[Fraction] = None
    modulus: Optional[int] = None
    residues: tuple[int, ...] = ()

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind, "points": [list(p) for p in self.points]}
        if self.resultant is not None:
            out["resultant"] = rat_str(self.resultant)
        if self.modulus is not None:
            out["modulus"] = self.modulus
            out["residues"] = list(self.residues)
        return out


def _integralize(*polys: UniPoly) -> list[UniPoly]:
    den = lcm_all(c.denominator for p in polys for c in p.coeffs)
    return [p * den for p in polys]


def mobius_integer_points(R1: UniPoly, Q1: UniPoly, R2: UniPoly, Q2: UniPoly) -> MobiusPoints:
    """Integer points of x = R1/Q1, y = R2/Q2 when x is a Moebius function of t.

    With R1/Q1 = (r t + s)/(u t + v) the parameter is t = (s - v x)/(u x - r),
    so y is a rational function R~2(x)/Q~2(x). When Q~2 is not constant an
    integer point forces Q~2(x) to divide the resultant of R~2 and Q~2, which
    leaves finitely many candidates; each one is checked exactly.
    """
    if max(R1.degree, Q1.degree) > 1:
        raise ValueError("first coordinate is not a Moebius function of t")
    r, s = R1.coeff(1), R1.coeff(0)
    u, v = Q1.coeff(1), Q1.coeff(0)
    if r * v - s * u == 0:
        raise ValueError("degenerate Moebius map")
    m = max(R2.degree, Q2.degree)
    num_t = UniPoly([s, -v])  # s - v x
    den_t = UniPoly([-r, u])  # u x - r

    def lift(p: UniPoly) -> UniPoly:
        out = UniPoly()
        for k, c in enumerate(p.coeffs):
            out = out + num_t ** k * den_t ** (m - k) * c
        return out

    Rt, Qt = _integralize(lift(R2), lift(Q2))
    g = uni_gcd(Rt, Qt)
    if g.degree > 0:
        Rt, Qt = Rt.exact_div(g), Qt.exact_div(g)
        Rt, Qt = _integralize(Rt, Qt)
    candidates: set[int] = set()
    # the parameter value t = infinity sits at x = r/u
    extra: list[tuple[int, int]] = []
    if u != 0 and (r / u).denominator == 1:
        if R2.degree < Q2.degree:
            lim = Fraction(0)
        elif R2.degree == Q2.degree:
            lim = R2.lc / Q2.lc
        else:
            lim = None
        if lim is not None and lim.denominator == 1:
            extra.append((int(r / u), int(lim)))
    if Qt.degree == 0:
        q = int(Qt.coeff(0))
        mod = abs(q)
        residues = tuple(a for a in range(mod) if Rt(a) % q == 0)
        if residues:
            pts = []
            for a in residues:
                for k in range(3):
                    xv = a + k * mod
                    if den_t(xv) != 0:
                        pts.append((xv, int(Rt(xv) / q)))
            return MobiusPoints("unbounded", tuple(sorted(set(pts))), None, mod, residues)
        return MobiusPoints("finite", tuple(extra), None, mod, ())
    res = resultant(Rt, Qt)
    for delta in divisors(int(abs(res))):
        for sgn in (1, -1):
            for root in rational_roots(Qt - sgn * delta):
                if root.denominator == 1:
                    candidates.add(int(root))
    pts = set(extra)
    for xv in candidates:
        qv = Qt(xv)
        if qv == 0 or den_t(xv) == 0:
            continue
        yv = Rt(xv) / qv
        if yv.denominator == 1:
            pts.add((xv, int(yv)))
    return MobiusPoints("finite", tuple(sorted(pts)), res)


# ---------------------------------------------------------------------------
# Integral point scan used as an empirical companion to finiteness claims


def integral_points_scan(P: BiPoly, bound: int) -> list[tuple[int, int]]:
    """Integer zeros of P with |x| <= bound and |y| <= bound.

    For each x the polynomial in y is solved through the eigenvalues of its
    companion matrix, batched over all x at once; every candidate is then
    confirmed exactly.
    """
    rows = P.in_var("y")
    D = len(rows) - 1
    xs = np.arange(-bound, bound + 1)
    out: set[tuple[int, int]] = set()
    if D == 0:
        return []
    lead = rows[D]
    special = set()
    if not lead.is_zero() and lead.degree > 0:
        special = {int(r) for r in rational_roots(lead) if r.denominator == 1 and abs(r) <= bound}
    for x0 in special:
        poly = UniPoly([row(x0) for row in rows])
        if poly.is_zero():
            # the vertical line x = x0 is a component of the curve
            out.update((x0, y0) for y0 in range(-bound, bound + 1))
        elif poly.degree > 0:
            out.update((x0, y0) for y0 in _integer_roots(poly) if abs(y0) <= bound)
    mask = np.array([int(x) not in special for x in xs])
    xs = xs[mask]
    xf = xs.astype(float)
    coef = np.array([np.polyval([float(c) for c in reversed(row.coeffs)] or [0.0], xf) for row in rows]).T
    comp = np.zeros((len(xs), D, D))
    comp[:, 0, :] = -coef[:, D - 1 :: -1] / coef[:, D : D + 1]
    for i in range(1, D):
        comp[:, i, i - 1] = 1.0
    roots = np.linalg.eigvals(comp)
    for i, j in zip(*np.nonzero(np.abs(roots.imag) <= 1e-6 * np.maximum(1.0, np.abs(roots.real)))):
        x0 = int(xs[i])
        base = int(round(roots[i, j].real))
        for y0 in (base - 1, base, base + 1):
            if abs(y0) <= bound and P(x0, y0) == 0:
                out.add((x0, y0))
    return sorted(out)


def _integer_roots(p: UniPoly) -> list[int]:
    """Integer roots: floating candidates from numpy, each confirmed exactly."""
    coeffs = [float(c) for c in reversed(p.coeffs)]
    roots = set()
    for z in np.roots(coeffs):
        if abs(z.imag) > 1e-6 * max(1.0, abs(z.real)):
            continue
        base = round(z.real)
        for cand in (base - 1, base, base + 1):
            if p(cand) == 0:
                roots.add(cand)
    return sorted(roots)
