"""Continued fractions and explicit Diophantine approximation witnesses.

Every bound produced here is checked with exact rational or surd arithmetic
before it is returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Union

from .exact import as_fraction, iroot, rat_str
from .forms import BinaryForm, Direction
from .surd import QuadIrr, Surd

Real = Union[int, Fraction, Surd, QuadIrr]


@dataclass(frozen=True)
class ContinuedFraction:
    preperiod: tuple[int, ...]
    period: tuple[int, ...] = ()

    def is_rational(self) -> bool:
        return not self.period

    def quotients(self) -> Iterator[int]:
        yield from self.preperiod
        while self.period:
            yield from self.period

    def to_json(self) -> dict:
        return {"preperiod": list(self.preperiod), "period": list(self.period)}


def _as_surd(alpha: Real):
    if isinstance(alpha, QuadIrr):
        return alpha.to_surd()
    if isinstance(alpha, Surd) and alpha.b == 0:
        return alpha.a
    if isinstance(alpha, Surd):
        return alpha
    return as_fraction(alpha)


def cf_expand(alpha: Real) -> ContinuedFraction:
    """Expansion of a rational (finite) or a quadratic irrational (eventually periodic)."""
    alpha = _as_surd(alpha)
    if isinstance(alpha, Fraction):
        out = []
        num, den = alpha.numerator, alpha.denominator
        while den:
            a = num // den
            out.append(a)
            num, den = den, num - a * den
        return ContinuedFraction(tuple(out))
    # write alpha = (P + sqrt(d)) / Q with Q | d - P^2
    a, b, D = alpha.a, alpha.b, alpha.D
    den = math.lcm(a.denominator, b.denominator)
    P, B, Q = int(a * den), int(b * den), den
    d = B * B * D
    if B < 0:
        P, Q = -P, -Q
    if (d - P * P) % Q:
        P, d, Q = P * abs(Q), d * Q * Q, Q * abs(Q)
    seen: dict[tuple[int, int], int] = {}
    quotients: list[int] = []
    while (P, Q) not in seen:
        seen[(P, Q)] = len(quotients)
        q = _floor_state(P, Q, d)
        quotients.append(q)
        P = q * Q - P
        Q = (d - P * P) // Q
    start = seen[(P, Q)]
    return ContinuedFraction(tuple(quotients[:start]), tuple(quotients[start:]))


def _floor_state(P: int, Q: int, d: int) -> int:
    """Exact floor of (P + sqrt(d)) / Q for non-square d."""
    s = math.isqrt(d)
    if Q > 0:
        return (P + s) // Q
    # sqrt(d) lies strictly between s and s + 1, and no integer fits in the image interval
    return (P + s + 1) // Q


def convergent_stream(cf: ContinuedFraction) -> Iterator[tuple[int, int]]:
    """Convergents ``(p, q)`` with ``q > 0`` in order."""
    p0, q0, p1, q1 = 1, 0, 0, 1
    for a in cf.quotients():
        p0, p1 = a * p0 + p1, p0
        q0, q1 = a * q0 + q1, q0
        yield p0, q0


def convergents(cf: ContinuedFraction, k: int) -> list[tuple[int, int]]:
    if k < 1:
        raise ValueError("need at least one convergent")
    out = []
    for pq in convergent_stream(cf):
        out.append(pq)
        if len(out) == k:
            break
    return out


def approximation_gap(alpha: Real, p: int, q: int):
    """``|alpha - p/q|`` exactly, as a Fraction or Surd."""
    alpha = _as_surd(alpha)
    return abs(alpha - Fraction(p, q))


def certify_convergent(alpha: Real, p: int, q: int) -> bool:
    """Exact check of ``|alpha - p/q| < 1/q^2``, with equality allowed only at alpha itself."""
    gap = approximation_gap(alpha, p, q)
    return gap < Fraction(1, q * q) or gap == 0


def badly_approximable_bound(alpha: Real) -> Fraction:
    """Constant c with ``|alpha - p/q| > c / q^2`` for every rational p/q."""
    cf = cf_expand(alpha)
    if cf.is_rational():
        raise ValueError("rationals are not badly approximable")
    tail = list(cf.preperiod[1:]) + list(cf.period)
    return Fraction(1, max(tail) + 2)


# ---------------------------------------------------------------------------
# Witness points


@dataclass(frozen=True)
class WitnessPoint:
    u: int
    v: int
    quality: Fraction
    construction_tag: str

    def to_json(self) -> dict:
        return {
            "point": [self.u, self.v],
            "quality": rat_str(self.quality),
            "construction": self.construction_tag,
        }


def normalized_linear_sq(xi: Direction, u: int, v: int):
    """Square of the unit-normalized distance of (u, v) from the line of xi."""
    px, py = xi.point()
    cross = py * u - px * v
    return cross * cross / (px * px + py * py)


def dyadic_sqrt_bound(value, cap: Optional[Fraction] = None) -> Fraction:
    """A dyadic rational r with ``r*r >= value``; also ``r*r <= cap`` when a cap is given."""
    if value == 0:
        return Fraction(0)
    if cap is not None:
        for m in range(4, 400):
            scale = 1 << m
            r = Fraction(iroot(math.floor(cap * scale * scale), 2), scale)
            if r * r >= value:
                return r
        raise ArithmeticError("no dyadic bound between the value and the cap")
    m = 8
    while True:
        scale = 1 << m
        top = value * scale * scale
        top_int = top.ceil() if isinstance(top, Surd) else math.ceil(top)
        r = Fraction(iroot(top_int, 2) + 1, scale)
        if r * r >= value:
            return r
        m += 4


def dirichlet_pairs(xi: Direction, k: int, start: int = 0) -> list[WitnessPoint]:
    """Points close to the line of xi, with ``quality^2 * (u^2 + v^2) <= 4``.

    Irrational slopes use convergents ``p/q`` of ``y/x`` as points ``(q, p)``;
    rational directions return the exact multiples of the primitive vector.
    ``start`` skips that many leading convergents.
    """
    if xi.is_rational:
        a, b = xi.vector
        return [WitnessPoint(j * a, j * b, Fraction(0), "dirichlet") for j in range(1, k + 1)]
    out = []
    for idx, (p, q) in enumerate(convergent_stream(cf_expand(xi.slope))):
        if idx < start:
            continue
        ell = normalized_linear_sq(xi, q, p)
        cap = Fraction(4, q * q + p * p)
        out.append(WitnessPoint(q, p, dyadic_sqrt_bound(ell, cap), "dirichlet"))
        if len(out) == k:
            break
    return out


# ---------------------------------------------------------------------------
# Congruence-constrained approximation along an automorph orbit


def pell_fundamental(D: int) -> tuple[int, int]:
    """Smallest positive solution of ``t^2 - D u^2 = 1`` for non-square D."""
    if math.isqrt(D) ** 2 == D:
        raise ValueError("D must not be a square")
    cf = cf_expand(Surd.sqrt(D))
    for p, q in convergent_stream(cf):
        if p * p - D * q * q == 1:
            return p, q
    raise AssertionError("unreachable")


def form_automorph(H: BinaryForm) -> tuple[tuple[int, int], tuple[int, int]]:
    """Integer matrix of determinant 1 and infinite order preserving H."""
    A, B, C = H.int_coeffs()
    D = B * B - 4 * A * C
    t, u = pell_fundamental(D)
    return ((t - B * u, -2 * C * u), (2 * A * u, t + B * u))


def _mat_mul(m, n, mod: Optional[int] = None):
    (a, b), (c, d) = m
    (e, f), (g, h) = n
    out = ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))
    if mod:
        out = tuple(tuple(v % mod for v in row) for row in out)
    return out


def _mat_inv(m):
    (a, b), (c, d) = m
    return ((d, -b), (-c, a))


def _apply(m, pt):
    (a, b), (c, d) = m
    return a * pt[0] + b * pt[1], c * pt[0] + d * pt[1]


@dataclass(frozen=True)
class OrbitPairs:
    d: int
    m1: int
    m2: int
    bound: Fraction
    start: tuple[int, int]
    step: tuple[tuple[int, int], tuple[int, int]]
    points: tuple[WitnessPoint, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "m1": self.m1,
            "m2": self.m2,
            "c_H": rat_str(self.bound),
            "start": list(self.start),
            "step": [list(r) for r in self.step],
            "points": [p.to_json() for p in self.points],
        }


def dirlem_pairs(
    H: BinaryForm,
    d: int,
    m1: int,
    m2: int,
    k: int,
    target: Optional[Direction] = None,
    orientation: int = 1,
) -> OrbitPairs:
    """Pairs ``(x, y)`` with ``|H(d x + m1, d y + m2)|`` bounded, approaching a zero line of H.

    Points ``Z = (d x + m1, d y + m2)`` are taken on the orbit of a small
    starting point under the power of an automorph of H that is the identity
    modulo d, so residues and the value of H are both preserved.
    """
    if d < 1:
        raise ValueError("d must be positive")
    H = H.primitive()
    dirs = [xi for xi in _zero_dirs(H)]
    if target is None:
        target = dirs[0]
    step = form_automorph(H)
    A, B, C = H.int_coeffs()
    disc = B * B - 4 * A * C
    attracting = (Surd.sqrt(disc) * -1 - B) / (2 * C)
    if attracting != target.slope:
        step = _mat_inv(step)
    # smallest power of the automorph that is the identity modulo d
    power, acc = step, tuple(tuple(v % d for v in row) for row in step) if d > 1 else step
    n = 1
    if d > 1:
        ident = ((1 % d, 0), (0, 1 % d))
        while acc != ident:
            acc = _mat_mul(acc, step, d)
            n += 1
        power = step
        for _ in range(n - 1):
            power = _mat_mul(power, step)
    px, py = target.point()
    best = None
    for r in range(0, 12):
        for i in range(-r, r + 1):
            for j in range(-r, r + 1):
                if max(abs(i), abs(j)) != r:
                    continue
                Z = (d * i + m1, d * j + m2)
                hv = H(*Z)
                if hv == 0:
                    continue
                W = _apply(power, _apply(power, Z))
                if (W[0] * px + W[1] * py).__gt__(0) != (orientation > 0):
                    continue
                key = (abs(hv), abs(Z[0]) + abs(Z[1]))
                if best is None or key < best[0]:
                    best = (key, Z)
        if best is not None and r >= 2:
            break
    if best is None:
        raise ArithmeticError("no starting point with the required residues")
    Z0 = best[1]
    bound = abs(Fraction(H(*Z0)))
    pts = []
    Z = Z0
    while len(pts) < k:
        Z = _apply(power, Z)
        x, y = (Z[0] - m1) // d, (Z[1] - m2) // d
        ell = normalized_linear_sq(target, x, y)
        pts.append(WitnessPoint(x, y, dyadic_sqrt_bound(ell), "automorph-orbit"))
    return OrbitPairs(d, m1, m2, bound, Z0, power, tuple(pts))


def _zero_dirs(H: BinaryForm) -> list[Direction]:
    from .forms import directions_of_factor

    return directions_of_factor(H)


# ---------------------------------------------------------------------------
# Scaled points realizing a prescribed approach rate


def cont2_points(
    xi: Direction,
    s: int,
    k: int,
    base: int = 10**6,
    orientation: int = 1,
    offset_sign: int = 1,
    min_norm: int = 10**4,
) -> list[tuple[int, int]]:
    """Points whose distance from the line of xi grows like a fixed power of their size.

    Irrational slopes: ``(M u, M v)`` with ``M = (u^2 + v^2)^s`` for convergent
    pairs ``(u, v)`` of norm at least ``min_norm``. Rational directions:
    ``M (x0, y0)`` plus an offset ``floor(M^((2s-1)/(2s+1)))`` in the x
    coordinate (the y coordinate when y0 = 0), for ``M = base * 8^j``.
    """
    if s < 1:
        raise ValueError("s must be positive")
    out: list[tuple[int, int]] = []
    if xi.is_rational:
        x0, y0 = xi.vector
        x0, y0 = orientation * x0, orientation * y0
        for j in range(k):
            M = base * 8 ** j
            off = offset_sign * iroot(M ** (2 * s - 1), 2 * s + 1)
            if y0 != 0:
                out.append((M * x0 + off, M * y0))
            else:
                out.append((M * x0, M * y0 + off))
        return out
    for p, q in convergent_stream(cf_expand(xi.slope)):
        u, v = orientation * q, orientation * p
        n2 = u * u + v * v
        if n2 < min_norm:
            continue
        M = n2 ** s
        out.append((M * u, M * v))
        if len(out) == k:
            break
    return out


def in_rate_window(xi: Direction, point: tuple[int, int], s: int, eps: Fraction = Fraction(1, 10)) -> bool:
    """Exact test of ``|delta + 2/(2s+1)| < eps`` where ``B^delta = |L(P)| / B`` and ``B = |P|``.

    Both sides are raised to integer powers so the comparison is exact.
    """
    eps = as_fraction(eps)
    x, y = point
    b2 = Fraction(x * x + y * y)
    ell = normalized_linear_sq(xi, x, y)
    if ell == 0:
        return False
    ratio = ell / b2
    target = Fraction(2, 2 * s + 1)
    lo_exp, hi_exp = target + eps, target - eps
    # ratio = B^(2 delta); need B^(-2 lo_exp) < ratio < B^(-2 hi_exp)
    n = math.lcm(lo_exp.denominator, hi_exp.denominator)
    lhs = ratio ** n
    lower = b2 ** (-int(lo_exp * n))
    upper = b2 ** (-int(hi_exp * n))
    return lower < lhs < upper
