"""Exact arithmetic in real quadratic fields Q(sqrt(D)).

A :class:`Surd` is ``a + b*sqrt(D)`` with rational ``a``, ``b`` and a squarefree
``D > 1``. Signs, comparisons and floors are decided exactly with integer
square roots, so nothing here ever touches floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .exact import as_fraction, squarefree_decompose

Scalar = Union[int, Fraction]


class Surd:
    __slots__ = ("a", "b", "D")

    def __init__(self, a: Scalar = 0, b: Scalar = 0, D: int = 2):
        if D <= 1:
            raise ValueError("radicand must exceed 1")
        self.a = as_fraction(a)
        self.b = as_fraction(b)
        self.D = D

    @classmethod
    def sqrt(cls, n: Scalar) -> Union["Surd", Fraction]:
        """Exact square root of a non-negative rational; rational when possible."""
        n = as_fraction(n)
        if n < 0:
            raise ValueError("negative radicand")
        num = n.numerator * n.denominator
        if num == 0:
            return Fraction(0)
        s, f = squarefree_decompose(num)
        coef = Fraction(s, n.denominator)
        if f == 1:
            return coef
        return cls(0, coef, f)

    def _lift(self, other) -> "Surd":
        if isinstance(other, Surd):
            if other.D != self.D:
                raise ValueError("mixing different quadratic fields")
            return other
        return Surd(other, 0, self.D)

    def is_rational(self) -> bool:
        return self.b == 0

    def __add__(self, other) -> "Surd":
        o = self._lift(other)
        return Surd(self.a + o.a, self.b + o.b, self.D)

    __radd__ = __add__

    def __neg__(self) -> "Surd":
        return Surd(-self.a, -self.b, self.D)

    def __sub__(self, other) -> "Surd":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Surd":
        return self._lift(other) - self

    def __mul__(self, other) -> "Surd":
        o = self._lift(other)
        return Surd(self.a * o.a + self.b * o.b * self.D, self.a * o.b + self.b * o.a, self.D)

    __rmul__ = __mul__

    def conjugate(self) -> "Surd":
        return Surd(self.a, -self.b, self.D)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.D

    def inverse(self) -> "Surd":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("surd is zero")
        return Surd(self.a / n, -self.b / n, self.D)

    def __truediv__(self, other) -> "Surd":
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other) -> "Surd":
        return self._lift(other) * self.inverse()

    def __pow__(self, n: int) -> "Surd":
        if n < 0:
            return self.inverse() ** (-n)
        out = Surd(1, 0, self.D)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 D
        n = self.norm()
        return sa if n > 0 else (sb if n < 0 else 0)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, Surd):
            if self.b == 0 and other.b == 0:
                return self.a == other.a
            return self.D == other.D and self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.D))

    def __lt__(self, other) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other) -> bool:
        return (self - other).sign() >= 0

    def __abs__(self) -> "Surd":
        return -self if self.sign() < 0 else self

    def floor(self) -> int:
        """Exact floor via an integer square root and a local correction."""
        # b*sqrt(D) = sign(b) * sqrt(b^2 D); bracket it by integer roots on a common denominator
        den = self.a.denominator * self.b.denominator
        big = 1 << 8
        scale = den * big
        root = math.isqrt(int(self.b * self.b * self.D * scale * scale))
        approx = Fraction(root, scale)
        guess = math.floor(self.a + (approx if self.b >= 0 else -approx))
        while self < guess:
            guess -= 1
        while self >= guess + 1:
            guess += 1
        return guess

    def ceil(self) -> int:
        return -((-self).floor())

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.D)

    def __repr__(self) -> str:
        return f"Surd({self.a}, {self.b}, {self.D})"


def floor_of(value) -> int:
    if isinstance(value, Surd):
        return value.floor()
    return math.floor(value)


def sign_of(value) -> int:
    if isinstance(value, Surd):
        return value.sign()
    return (value > 0) - (value < 0)


@dataclass(frozen=True)
class QuadIrr:
    """Canonical quadratic irrational ``(p + q*sqrt(disc))/r``.

    ``r > 0``, ``gcd(p, q, r) = 1``, ``q != 0`` and ``disc`` squarefree.
    """

    p: int
    q: int
    r: int
    disc: int

    def __post_init__(self):
        if self.r <= 0 or self.q == 0 or self.disc <= 1:
            raise ValueError("not a canonical quadratic irrational")
        if math.gcd(math.gcd(self.p, self.q), self.r) != 1:
            raise ValueError("not in lowest terms")

    @classmethod
    def from_surd(cls, s: Surd) -> "QuadIrr":
        if s.b == 0:
            raise ValueError("value is rational")
        r = s.a.denominator * s.b.denominator // math.gcd(s.a.denominator, s.b.denominator)
        p, q = int(s.a * r), int(s.b * r)
        g = math.gcd(math.gcd(p, q), r)
        return cls(p // g, q // g, r // g, s.D)

    def to_surd(self) -> Surd:
        return Surd(Fraction(self.p, self.r), Fraction(self.q, self.r), self.disc)

    def to_json(self) -> list[int]:
        return [self.p, self.q, self.r, self.disc]
