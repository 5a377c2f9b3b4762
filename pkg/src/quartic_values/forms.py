"""Binary forms: factorization, definiteness, gcds and real zero directions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .exact import (
    BiPoly,
    Number,
    UniPoly,
    as_fraction,
    gcd_all,
    isolate_real_roots,
    lcm_all,
    rat_str,
    real_root_count,
    squarefree_part,
    sturm_sequence,
    uni_factor,
)
from .surd import QuadIrr, Surd


class BinaryForm:
    """Homogeneous polynomial of a fixed degree; coefficients of x^d, x^(d-1) y, ..., y^d."""

    __slots__ = ("degree", "coeffs")

    def __init__(self, coeffs: Sequence[Number], degree: Optional[int] = None):
        c = tuple(as_fraction(v) for v in coeffs)
        if degree is None:
            degree = len(c) - 1
        if len(c) != degree + 1:
            raise ValueError("coefficient count does not match degree")
        if all(v == 0 for v in c):
            # the zero form carries degree 0
            c, degree = (Fraction(0),), 0
        self.degree = degree
        self.coeffs = c

    @classmethod
    def zero(cls) -> "BinaryForm":
        return cls([0])

    @classmethod
    def one(cls) -> "BinaryForm":
        return cls([1])

    @classmethod
    def from_bipoly(cls, P: BiPoly, degree: Optional[int] = None) -> "BinaryForm":
        if P.is_zero():
            return cls.zero()
        d = P.degree if degree is None else degree
        for (i, j) in P.terms:
            if i + j != d:
                raise ValueError("polynomial is not homogeneous of the given degree")
        return cls([P.coeff(d - k, k) for k in range(d + 1)], d)

    @classmethod
    def from_text(cls, text: str) -> "BinaryForm":
        from .exact import parse_poly

        return cls.from_bipoly(parse_poly(text))

    @classmethod
    def homogenize(cls, p: UniPoly, degree: int) -> "BinaryForm":
        """Form of the given degree whose value at (t, 1) is ``p(t)``."""
        if p.is_zero():
            return cls.zero()
        if p.degree > degree:
            raise ValueError("polynomial degree exceeds form degree")
        return cls([p.coeff(degree - k) for k in range(degree + 1)], degree)

    def to_bipoly(self) -> BiPoly:
        d = self.degree
        return BiPoly({(d - k, k): c for k, c in enumerate(self.coeffs)})

    def dehomogenize(self) -> UniPoly:
        """``G(t, 1)``; a factor y^e shows up as a degree drop of e."""
        return UniPoly(self.coeffs[::-1])

    def is_zero(self) -> bool:
        return self.coeffs == (Fraction(0),)

    def is_constant(self) -> bool:
        return self.degree == 0

    def __call__(self, x, y):
        d = self.degree
        total = 0
        for k, c in enumerate(self.coeffs):
            if c:
                cc = c.numerator if c.denominator == 1 else c
                total = total + cc * x ** (d - k) * y ** k
        return total

    def __eq__(self, other) -> bool:
        return isinstance(other, BinaryForm) and (self.degree, self.coeffs) == (other.degree, other.coeffs)

    def __hash__(self) -> int:
        return hash((self.degree, self.coeffs))

    def __mul__(self, other) -> "BinaryForm":
        if isinstance(other, (int, Fraction)):
            return BinaryForm([c * other for c in self.coeffs], self.degree)
        if self.is_zero() or other.is_zero():
            return BinaryForm.zero()
        out = [Fraction(0)] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return BinaryForm(out, self.degree + other.degree)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BinaryForm":
        out = BinaryForm.one()
        for _ in range(n):
            out = out * self
        return out

    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise ValueError("adding forms of different degree")
        return BinaryForm([a + b for a, b in zip(self.coeffs, other.coeffs)], self.degree)

    def __neg__(self) -> "BinaryForm":
        return self * -1

    def __sub__(self, other: "BinaryForm") -> "BinaryForm":
        return self + (-other)

    def content(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        den = lcm_all(c.denominator for c in self.coeffs)
        g = gcd_all(int(c * den) for c in self.coeffs)
        first = next(c for c in self.coeffs if c != 0)
        return Fraction(g if first > 0 else -g, den)

    def primitive(self) -> "BinaryForm":
        """Integral, gcd 1, first nonzero coefficient positive."""
        if self.is_zero():
            return self
        return self * (1 / self.content())

    def int_coeffs(self) -> list[int]:
        if any(c.denominator != 1 for c in self.coeffs):
            raise ValueError("form is not integral")
        return [int(c) for c in self.coeffs]

    def divide(self, other: "BinaryForm") -> Optional["BinaryForm"]:
        """Exact quotient ``self / other`` as forms, or None when it does not divide."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero form")
        if self.is_zero():
            return BinaryForm.zero()
        if other.degree > self.degree:
            return None
        q, r = self.dehomogenize().divmod(other.dehomogenize())
        d = self.degree - other.degree
        if not r.is_zero() or q.degree > d:
            return None
        return BinaryForm.homogenize(q, d)

    def substitute(self, a: Number, b: Number, c: Number, d: Number) -> "BinaryForm":
        """``G(a x + b y, c x + d y)``."""
        P = self.to_bipoly().compose(BiPoly({(1, 0): a, (0, 1): b}), BiPoly({(1, 0): c, (0, 1): d}))
        return BinaryForm.from_bipoly(P, self.degree) if not P.is_zero() else BinaryForm.zero()

    def sort_key(self) -> tuple:
        return (self.degree, tuple(-c for c in self.coeffs))

    def to_json(self) -> dict:
        return {"degree": self.degree, "coeffs": [rat_str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "BinaryForm":
        return cls([Fraction(c) for c in data["coeffs"]], data["degree"])

    def __str__(self) -> str:
        return str(self.to_bipoly())

    def __repr__(self) -> str:
        return f"BinaryForm({str(self)!r}, degree={self.degree})"


# ---------------------------------------------------------------------------
# Factorization


@dataclass(frozen=True)
class FormFactorization:
    content: Fraction
    factors: tuple[tuple[BinaryForm, int], ...]

    def expand(self) -> BinaryForm:
        out = BinaryForm([self.content])
        for f, m in self.factors:
            out = out * f ** m
        return out

    def to_json(self) -> dict:
        return {
            "content": rat_str(self.content),
            "factors": [{"form": f.to_json(), "multiplicity": m} for f, m in self.factors],
        }


def factor_form(G: BinaryForm) -> FormFactorization:
    """Content times irreducible primitive forms with multiplicities, canonically ordered."""
    if G.is_zero():
        raise ValueError("cannot factor the zero form")
    p = G.dehomogenize()
    found: list[tuple[BinaryForm, int]] = []
    y_power = G.degree - p.degree
    if y_power:
        found.append((BinaryForm([0, 1]), y_power))
    if p.degree > 0:
        for f, m in uni_factor(p).factors:
            found.append((BinaryForm.homogenize(f, f.degree).primitive(), m))
    found.sort(key=lambda fm: fm[0].sort_key())
    prod = BinaryForm.one()
    for f, m in found:
        prod = prod * f ** m
    k = next(i for i, c in enumerate(prod.coeffs) if c != 0)
    return FormFactorization(G.coeffs[k] / prod.coeffs[k], tuple(found))


def is_real_rooted(f: BinaryForm) -> bool:
    """Whether an irreducible form vanishes on some real line."""
    if f.degree == 1:
        return True
    if f.degree == 0:
        return False
    p = f.dehomogenize()
    if p.degree < f.degree:
        return True
    return real_root_count(p) > 0


def multiplicity(H: BinaryForm, G: BinaryForm) -> int:
    if G.is_zero():
        raise ValueError("multiplicity in the zero form is unbounded")
    n = 0
    cur = G
    while True:
        q = cur.divide(H)
        if q is None:
            return n
        n += 1
        cur = q


def form_gcd(forms: Iterable[BinaryForm]) -> BinaryForm:
    """Primitive gcd of the nonzero forms; zero forms are ignored."""
    nonzero = [f for f in forms if not f.is_zero()]
    if not nonzero:
        raise ValueError("gcd of zero forms only")
    common: Optional[dict[BinaryForm, int]] = None
    for f in nonzero:
        mults = {h: m for h, m in factor_form(f).factors}
        if common is None:
            common = mults
        else:
            common = {h: min(m, mults[h]) for h, m in common.items() if h in mults}
    out = BinaryForm.one()
    for h, m in sorted(common.items(), key=lambda hm: hm[0].sort_key()):
        out = out * h ** m
    return out


def coprime(*forms: BinaryForm) -> bool:
    return form_gcd(forms).degree == 0


# ---------------------------------------------------------------------------
# Definiteness


POS_DEF = "PositiveDefinite"
POS_SEMI = "PositiveSemiNotDefinite"
NEG_SEMI = "NegativeSemiOrDefinite"
INDEF = "Indefinite"


@dataclass(frozen=True)
class Definiteness:
    tag: str
    witness_pos: Optional[tuple[int, int]]
    witness_neg: Optional[tuple[int, int]]

    def allows_negative(self) -> bool:
        return self.tag in (NEG_SEMI, INDEF)

    def to_json(self) -> dict:
        return {
            "tag": self.tag,
            "witness_pos": list(self.witness_pos) if self.witness_pos else None,
            "witness_neg": list(self.witness_neg) if self.witness_neg else None,
        }


def _primitive_pair(num: int, den: int) -> tuple[int, int]:
    g = math.gcd(num, den) or 1
    return num // g, den // g


def _between(q: UniPoly, lo: Fraction, hi: Fraction) -> Fraction:
    """A rational strictly between the root at or below ``lo`` and the next root, not a root itself."""
    seq = sturm_sequence(q)

    def count(a: Fraction, b: Fraction) -> int:
        def var(t):
            signs = [(v > 0) - (v < 0) for v in (f(t) for f in seq)]
            nz = [s for s in signs if s]
            return sum(1 for u, w in zip(nz, nz[1:]) if u != w)

        return var(a) - var(b)

    cand = lo
    if q(cand) != 0:
        return cand
    step = hi - lo
    while True:
        step /= 2
        c = lo + step
        if q(c) != 0 and count(lo, c) == 0:
            return c


def sample_points(G: BinaryForm) -> list[tuple[int, int]]:
    """Integer points meeting every sign region of G, both orientations included."""
    pts: list[tuple[int, int]] = []
    for r in range(1, 4):
        ring = [
            (a, b)
            for a in range(-r, r + 1)
            for b in range(-r, r + 1)
            if max(abs(a), abs(b)) == r and math.gcd(a, b) == 1
        ]
        # small, non-negative coordinates first
        ring.sort(key=lambda ab: (abs(ab[0]) + abs(ab[1]), ab[0] < 0, ab[1] < 0, abs(ab[0])))
        pts.extend(ring)
    p = G.dehomogenize()
    if p.degree > 0:
        q = squarefree_part(p)
        ivs = isolate_real_roots(q, Fraction(1, 64))
        ts: list[Fraction] = []
        if ivs:
            ts.append(ivs[0][0] - 1)
            ts.append(ivs[-1][1] + 1)
            for (lo, hi), (lo2, hi2) in zip(ivs, ivs[1:]):
                ts.append(_between(q, hi, hi2))
        for t in ts:
            a, b = _primitive_pair(t.numerator, t.denominator)
            pts.extend([(a, b), (-a, -b)])
    return pts


def definiteness(G: BinaryForm) -> Definiteness:
    if G.is_zero():
        raise ValueError("definiteness of the zero form")
    fac = factor_form(G)
    sign = 1 if fac.content > 0 else -1
    real_mults = []
    for f, m in fac.factors:
        if is_real_rooted(f):
            real_mults.append(m)
        else:
            # a definite irreducible factor has the sign of its x^d coefficient
            if f.coeffs[0] < 0 and m % 2:
                sign = -sign
    if any(m % 2 for m in real_mults):
        tag = INDEF
    elif sign > 0:
        tag = POS_SEMI if real_mults else POS_DEF
    else:
        tag = NEG_SEMI
    pos = neg = None
    for a, b in sample_points(G):
        v = G(a, b)
        if v > 0 and pos is None:
            pos = (a, b)
        if v < 0 and neg is None:
            neg = (a, b)
    if tag in (NEG_SEMI, INDEF) and neg is None:
        raise ArithmeticError("no negative witness found for a form that takes negative values")
    if tag != NEG_SEMI and pos is None:
        raise ArithmeticError("no positive witness found")
    return Definiteness(tag, pos, neg)


# ---------------------------------------------------------------------------
# The definite / real-rooted split of a semidefinite quartic


@dataclass(frozen=True)
class P0Split:
    definite_part: BinaryForm
    real_rooted: BinaryForm
    definite: bool

    def to_json(self) -> dict:
        return {
            "P0": self.definite_part.to_json(),
            "F4_tilde": self.real_rooted.to_json(),
            "definite": self.definite,
        }


def split_p0(F4: BinaryForm) -> P0Split:
    tag = definiteness(F4).tag
    if tag not in (POS_DEF, POS_SEMI):
        raise ValueError("split requires a positive semidefinite form")
    fac = factor_form(F4)
    tilde = BinaryForm.one()
    p0 = BinaryForm([fac.content])
    for f, m in fac.factors:
        if is_real_rooted(f):
            tilde = tilde * f ** m
        else:
            p0 = p0 * f ** m
    return P0Split(p0, tilde, tag == POS_DEF)


# ---------------------------------------------------------------------------
# Real zero directions


@dataclass(frozen=True)
class Direction:
    """A real projective zero of an irreducible form, identified with its antipode.

    Rational directions carry a primitive vector ``(a, b)`` with ``a > 0`` or
    ``a == 0 < b``. Quadratic directions carry the irrational slope ``y/x``
    and are represented by the vector ``(1, slope)``.
    """

    minimal_form: BinaryForm
    vector: Optional[tuple[int, int]] = None
    slope: Optional[Surd] = None

    @property
    def is_rational(self) -> bool:
        return self.vector is not None

    @property
    def vertical(self) -> bool:
        return self.is_rational and self.vector[0] == 0

    def point(self, orientation: int = 1):
        """A real vector along the direction, in Q or Q(sqrt D)."""
        if self.is_rational:
            return orientation * self.vector[0], orientation * self.vector[1]
        return orientation, self.slope * orientation

    def sort_key(self):
        if self.is_rational:
            a, b = self.vector
            if a == 0:
                return (1, 0)
            return (0, Fraction(b, a))
        return (0, self.slope)

    def linear_value(self, u: int, v: int):
        """Cross product of (u, v) with the direction vector; zero exactly on the line."""
        px, py = self.point()
        return py * u - px * v

    def to_json(self) -> dict:
        if self.is_rational:
            a, b = self.vector
            if a == 0:
                return {"slope": "0", "vertical": True}
            return {"slope": rat_str(Fraction(b, a)), "vertical": False}
        return {"quad": QuadIrr.from_surd(self.slope).to_json(), "vertical": False}

    def __eq__(self, other) -> bool:
        if not isinstance(other, Direction):
            return False
        if self.is_rational != other.is_rational:
            return False
        if self.is_rational:
            return self.vector == other.vector
        return self.slope == other.slope

    def __hash__(self) -> int:
        return hash(self.vector if self.is_rational else (self.slope.a, self.slope.b, self.slope.D))

    def __repr__(self) -> str:
        return f"Direction({self.to_json()})"


def directions_of_factor(f: BinaryForm) -> list[Direction]:
    f = f.primitive()
    if f.degree == 1:
        a, b = f.int_coeffs()
        vx, vy = b, -a
        if vx < 0 or (vx == 0 and vy < 0):
            vx, vy = -vx, -vy
        return [Direction(f, vector=(vx, vy))]
    if f.degree == 2:
        A, B, C = f.coeffs
        disc = B * B - 4 * A * C
        if disc <= 0:
            return []
        root = Surd.sqrt(disc)
        if not isinstance(root, Surd):
            raise ValueError("quadratic factor is reducible over Q")
        # slope s = y/x solves A + B s + C s^2 = 0, and C != 0 for irreducible f
        s1 = (root * -1 - B) / (2 * C)
        s2 = (root - B) / (2 * C)
        return sorted([Direction(f, slope=s1), Direction(f, slope=s2)], key=lambda d: d.slope)
    if is_real_rooted(f):
        raise ValueError("real zeros of irreducible forms of degree three or more are not supported")
    return []


def real_zero_directions(G: BinaryForm) -> list[Direction]:
    if G.is_zero():
        raise ValueError("every direction is a zero of the zero form")
    out: list[Direction] = []
    for f, _ in factor_form(G).factors:
        out.extend(directions_of_factor(f))
    return sorted(out, key=lambda d: d.sort_key())


def sign_at_direction(G: BinaryForm, xi: Direction, orientation: Optional[int] = None) -> int:
    if G.is_zero():
        return 0
    if G.degree % 2 and orientation is None:
        raise ValueError("odd degree form needs an orientation")
    x, y = xi.point(orientation or 1)
    v = G(x, y)
    if isinstance(v, Surd):
        return v.sign()
    return (v > 0) - (v < 0)


def vanishes_at(G: BinaryForm, xi: Direction) -> bool:
    return G.is_zero() or sign_at_direction(G, xi, 1) == 0
