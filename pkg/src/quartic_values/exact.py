"""Exact polynomial arithmetic over the rationals.

Bivariate polynomials are sparse maps from exponent pairs to ``Fraction``
coefficients; univariate polynomials are dense coefficient tuples, lowest
degree first. Every operation is exact and every value is immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

Number = Union[int, Fraction]


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def rat_str(value: Number) -> str:
    """Canonical text for a rational: ``"3"``, ``"-7/2"``."""
    value = as_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def lcm_all(values: Iterable[int]) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


def gcd_all(values: Iterable[int]) -> int:
    return reduce(math.gcd, values, 0)


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of a non-negative integer."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2 or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    guess = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        nxt = ((k - 1) * guess + n // guess ** (k - 1)) // k
        if nxt >= guess:
            break
        guess = nxt
    while guess ** k > n:
        guess -= 1
    while (guess + 1) ** k <= n:
        guess += 1
    return guess


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def divisors(n: int) -> list[int]:
    """Positive divisors of a nonzero integer, ascending."""
    n = abs(n)
    if n == 0:
        raise ValueError("zero has infinitely many divisors")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Write a positive integer as ``s**2 * f`` with ``f`` squarefree."""
    if n <= 0:
        raise ValueError("expected a positive integer")
    square, free = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        square *= p ** (e // 2)
        if e % 2:
            free *= p
        p += 1 if p == 2 else 2
    return square, free * n


# ---------------------------------------------------------------------------
# Univariate polynomials


class UniPoly:
    """Dense univariate polynomial over the rationals, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        c = [as_fraction(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(c)

    @classmethod
    def const(cls, value: Number) -> "UniPoly":
        return cls([value])

    @classmethod
    def t(cls) -> "UniPoly":
        return cls([0, 1])

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        # the zero polynomial has degree 0 by convention
        return max(len(self.coeffs) - 1, 0)

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = UniPoly.const(other)
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UniPoly({[rat_str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            parts.append(_signed_term(c, mono))
        return _join_terms(parts)

    def _coerce(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return other
        return UniPoly.const(other)

    def __add__(self, other) -> "UniPoly":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> "UniPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "UniPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "UniPoly":
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "UniPoly":
        result = UniPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, value):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UniPoly(), self
        quo = [Fraction(0)] * (dq + 1)
        lead = other.lc
        for k in range(dq, -1, -1):
            q = rem[k + len(other.coeffs) - 1] / lead
            quo[k] = q
            if q:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= q * b
        return UniPoly(quo), UniPoly(rem[: len(other.coeffs) - 1])

    def __floordiv__(self, other) -> "UniPoly":
        return self.divmod(self._coerce(other))[0]

    def __mod__(self, other) -> "UniPoly":
        return self.divmod(self._coerce(other))[1]

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("division is not exact")
        return q

    def derivative(self) -> "UniPoly":
        return UniPoly(k * c for k, c in enumerate(self.coeffs) if k)

    def monic(self) -> "UniPoly":
        return self * (1 / self.lc) if self.coeffs else self

    def content_primitive(self) -> tuple[Fraction, "UniPoly"]:
        """Split into a rational content and a primitive integer polynomial with positive lead."""
        if not self.coeffs:
            return Fraction(0), self
        den = lcm_all(c.denominator for c in self.coeffs)
        ints = [int(c * den) for c in self.coeffs]
        g = gcd_all(ints)
        if ints[-1] < 0:
            g = -g
        return Fraction(g, den), UniPoly(v // g for v in ints)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def compose(self, inner: "UniPoly") -> "UniPoly":
        acc = UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def int_coeffs(self) -> list[int]:
        if not self.is_integral():
            raise ValueError("polynomial has non-integral coefficients")
        return [int(c) for c in self.coeffs]


def uni_gcd(p: UniPoly, q: UniPoly) -> UniPoly:
    """Monic gcd; ``gcd(p, 0) = p`` up to normalization."""
    a, b = p, q
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def squarefree_part(p: UniPoly) -> UniPoly:
    if p.degree == 0:
        return p
    return p.exact_div(uni_gcd(p, p.derivative()))


# ---------------------------------------------------------------------------
# Real roots


def sturm_sequence(p: UniPoly) -> list[UniPoly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    seq.pop()
    return seq


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _variations(signs: Sequence[int]) -> int:
    nz = [s for s in signs if s]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def _signs_at(seq: Sequence[UniPoly], point) -> list[int]:
    if point == "+inf":
        return [_sign(f.lc) for f in seq]
    if point == "-inf":
        return [_sign(f.lc) * (-1) ** f.degree for f in seq]
    return [_sign(f(point)) for f in seq]


def real_root_count(p: UniPoly, interval: Optional[tuple[Number, Number]] = None) -> int:
    """Number of distinct real roots of ``p``, optionally in a closed rational interval."""
    if p.is_zero():
        raise ValueError("the zero polynomial has infinitely many roots")
    q = squarefree_part(p)
    if q.degree == 0:
        return 0
    seq = sturm_sequence(q)
    if interval is None:
        return _variations(_signs_at(seq, "-inf")) - _variations(_signs_at(seq, "+inf"))
    lo, hi = as_fraction(interval[0]), as_fraction(interval[1])
    if lo > hi:
        return 0
    extra = 0
    if q(lo) == 0:
        # Sturm counts roots in (lo, hi]; the left endpoint is added by hand.
        extra = 1
    return _variations(_signs_at(seq, lo)) - _variations(_signs_at(seq, hi)) + extra


def root_bound(p: UniPoly) -> Fraction:
    """Cauchy bound: every complex root has modulus below this value."""
    lead = abs(p.lc)
    return 1 + max((abs(c) / lead for c in p.coeffs[:-1]), default=Fraction(0))


def isolate_real_roots(p: UniPoly, width: Number = Fraction(1, 1 << 20)) -> list[tuple[Fraction, Fraction]]:
    """Disjoint closed intervals, each holding exactly one distinct real root, sorted."""
    q = squarefree_part(p)
    if q.degree == 0:
        return []
    seq = sturm_sequence(q)
    width = as_fraction(width)

    def count(lo: Fraction, hi: Fraction) -> int:
        # roots in the half-open interval (lo, hi]
        return _variations(_signs_at(seq, lo)) - _variations(_signs_at(seq, hi))

    bound = root_bound(q)
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        n = count(lo, hi)
        if n == 0:
            continue
        if n == 1 and hi - lo <= width:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((mid, hi))
        stack.append((lo, mid))
    # each interval is (lo, hi]; a root sitting exactly on hi is fine for closed use
    return sorted(out)


def rational_roots(p: UniPoly) -> list[Fraction]:
    """All distinct rational roots, found by isolating real roots and rounding."""
    if p.is_zero():
        raise ValueError("the zero polynomial has every root")
    _, prim = p.content_primitive()
    roots: list[Fraction] = []
    if prim.degree == 0:
        return roots
    if prim.coeffs[0] == 0:
        roots.append(Fraction(0))
        k = next(i for i, c in enumerate(prim.coeffs) if c != 0)
        prim = UniPoly(prim.coeffs[k:])
        if prim.degree == 0:
            return roots
    lead = abs(int(prim.lc))
    denoms = divisors(lead)
    # distinct rationals with denominators dividing lead are 1/lead**2 apart
    width = Fraction(1, 2 * lead * lead)
    for lo, hi in isolate_real_roots(prim, width):
        for q in denoms:
            for num in range(math.floor(lo * q), math.ceil(hi * q) + 1):
                cand = Fraction(num, q)
                if lo <= cand <= hi and prim(cand) == 0 and cand not in roots:
                    roots.append(cand)
    return sorted(roots)


# ---------------------------------------------------------------------------
# Factorization over Q for small degree


@dataclass(frozen=True)
class Factorization:
    content: Fraction
    factors: tuple[tuple[UniPoly, int], ...]

    def expand(self) -> UniPoly:
        out = UniPoly.const(self.content)
        for f, m in self.factors:
            out = out * f ** m
        return out


def _interpolate(points: Sequence[int], values: Sequence[int]) -> UniPoly:
    out = UniPoly()
    for i, xi in enumerate(points):
        basis = UniPoly.const(values[i])
        for j, xj in enumerate(points):
            if j != i:
                basis = basis * UniPoly([-xj, 1]) * Fraction(1, xi - xj)
        out = out + basis
    return out


def _mignotte(p: UniPoly, k: int) -> int:
    """Bound on the coefficients of any degree-k integer factor of p."""
    norm = math.isqrt(int(sum(c * c for c in p.coeffs))) + 1
    return max(math.comb(k, j) for j in range(k + 1)) * norm


def _find_factor_of_degree(p: UniPoly, k: int) -> Optional[UniPoly]:
    """Search a primitive integer factor of degree k by divisor matching at k+1 points."""
    lead = int(p.lc)
    bound = _mignotte(p, k)
    pts = []
    cand = 0
    while len(pts) < k + 1:
        for v in (cand, -cand) if cand else (0,):
            if p(v) != 0 and v not in pts:
                pts.append(v)
        cand += 1
    pts = sorted(pts[: k + 1], key=lambda v: len(divisors(int(p(v)))))
    choices = []
    for i, v in enumerate(pts):
        ds = divisors(int(p(v)))
        # the overall sign of a factor is free, so the first value is taken positive
        choices.append(ds if i == 0 else ds + [-d for d in ds])
    for vals in product(*choices):
        h = _interpolate(pts, vals)
        if h.degree != k or not h.is_integral():
            continue
        hl = int(h.lc)
        if lead % hl:
            continue
        if any(abs(c) > bound for c in h.coeffs):
            continue
        q, r = p.divmod(h)
        if r.is_zero() and q.is_integral():
            _, prim = h.content_primitive()
            return prim
    return None


def uni_factor(p: UniPoly) -> Factorization:
    """Content and irreducible primitive factors (positive lead) with multiplicities.

    Rational roots come from real-root isolation; the remaining quadratic and
    cubic splits use divisor matching at interpolation nodes, pruned by a
    Mignotte-type coefficient bound. Designed for degree at most 6.
    """
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    content, prim = p.content_primitive()
    found: dict[UniPoly, int] = {}

    def push(f: UniPoly) -> None:
        found[f] = found.get(f, 0) + 1

    rest = prim
    for root in rational_roots(rest):
        lin = UniPoly([-root.numerator, root.denominator])
        while True:
            q, r = rest.divmod(lin)
            if not r.is_zero():
                break
            rest = q
            push(lin)
    _, rest = rest.content_primitive()
    pending = [rest]
    while pending:
        g = pending.pop()
        if g.degree == 0:
            continue
        if g.degree <= 3:
            push(g)
            continue
        split = None
        for k in range(2, g.degree // 2 + 1):
            split = _find_factor_of_degree(g, k)
            if split is not None:
                break
        if split is None:
            push(g)
            continue
        _, other = g.exact_div(split).content_primitive()
        pending.extend([split, other])
    unit = prim.lc / Factorization(Fraction(1), tuple(found.items())).expand().lc
    factors = tuple(sorted(found.items(), key=lambda fm: (fm[0].degree, fm[0].coeffs[::-1])))
    return Factorization(content * unit, factors)


def is_irreducible(p: UniPoly) -> bool:
    if p.degree < 1:
        return False
    if p.degree == 1:
        return True
    if p.degree == 2:
        _, prim = p.content_primitive()
        c, b, a = prim.coeffs
        return not is_square(int(b * b - 4 * a * c))
    fac = uni_factor(p)
    return len(fac.factors) == 1 and fac.factors[0][1] == 1


# ---------------------------------------------------------------------------
# Resultants


def det(matrix: Sequence[Sequence[Number]]) -> Fraction:
    """Exact determinant by fraction-valued Gaussian elimination."""
    m = [[as_fraction(v) for v in row] for row in matrix]
    n = len(m)
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        pv = m[col][col]
        result *= pv
        for r in range(col + 1, n):
            f = m[r][col] / pv
            if f:
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return sign * result


def sylvester(p: Sequence, q: Sequence) -> list[list]:
    """Sylvester matrix of coefficient lists given highest degree first, p's rows first."""
    m, n = len(p) - 1, len(q) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + list(p) + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(q) + [0] * (size - n - 1 - i))
    return rows


def resultant(p: UniPoly, q: UniPoly) -> Fraction:
    """Resultant as the Sylvester determinant with p's coefficient rows first."""
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant of the zero polynomial is undefined here")
    if p.degree == 0 and q.degree == 0:
        return Fraction(1)
    return det(sylvester(p.coeffs[::-1], q.coeffs[::-1]))


# ---------------------------------------------------------------------------
# Bivariate polynomials


Monomial = tuple[int, int]


class BiPoly:
    """Sparse polynomial in x and y with rational coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Monomial, Number]] = None):
        clean: dict[Monomial, Fraction] = {}
        for key, val in (terms or {}).items():
            val = as_fraction(val)
            if val != 0:
                i, j = key
                if i < 0 or j < 0:
                    raise ValueError("negative exponent")
                clean[(int(i), int(j))] = val
        self._terms = clean

    @classmethod
    def const(cls, value: Number) -> "BiPoly":
        return cls({(0, 0): value})

    @classmethod
    def x(cls) -> "BiPoly":
        return cls({(1, 0): 1})

    @classmethod
    def y(cls) -> "BiPoly":
        return cls({(0, 1): 1})

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(sorted(self._terms.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0])))

    def coeff(self, i: int, j: int) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        return max((i + j for i, j in self._terms), default=0)

    def degree_in(self, var: str) -> int:
        idx = 0 if var == "x" else 1
        return max((k[idx] for k in self._terms), default=0)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._terms.values())

    def constant_term(self) -> Fraction:
        return self.coeff(0, 0)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = BiPoly.const(other)
        return isinstance(other, BiPoly) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        return f"BiPoly({to_text(self)!r})"

    def __str__(self) -> str:
        return to_text(self)

    @staticmethod
    def _coerce(other) -> "BiPoly":
        return other if isinstance(other, BiPoly) else BiPoly.const(other)

    def __add__(self, other) -> "BiPoly":
        other = self._coerce(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return BiPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "BiPoly":
        return BiPoly({k: -v for k, v in self._terms.items()})

    def __sub__(self, other) -> "BiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "BiPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "BiPoly":
        other = self._coerce(other)
        out: dict[Monomial, Fraction] = {}
        for (i1, j1), a in self._terms.items():
            for (i2, j2), b in other._terms.items():
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, 0) + a * b
        return BiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BiPoly":
        if n < 0:
            raise ValueError("negative power")
        result = BiPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, x, y):
        """Evaluate at any values supporting ring operations (ints, Fractions, surds)."""
        total = 0
        xp: dict[int, object] = {0: 1}
        yp: dict[int, object] = {0: 1}

        def power(cache, base, k):
            if k not in cache:
                cache[k] = base ** k
            return cache[k]

        for (i, j), c in self._terms.items():
            if c.denominator == 1:
                c = c.numerator
            total = total + c * power(xp, x, i) * power(yp, y, j)
        return total

    def homogeneous(self, k: int) -> "BiPoly":
        return BiPoly({key: v for key, v in self._terms.items() if sum(key) == k})

    def compose(self, px: "BiPoly", py: "BiPoly") -> "BiPoly":
        """Substitute x -> px and y -> py."""
        out = BiPoly()
        xp = {0: BiPoly.const(1)}
        yp = {0: BiPoly.const(1)}
        for (i, j), c in self._terms.items():
            if i not in xp:
                xp[i] = px ** i
            if j not in yp:
                yp[j] = py ** j
            out = out + xp[i] * yp[j] * c
        return out

    def scale(self, c: Number) -> "BiPoly":
        return BiPoly({k: v * c for k, v in self._terms.items()})

    def partial(self, var: str) -> "BiPoly":
        if var == "x":
            return BiPoly({(i - 1, j): v * i for (i, j), v in self._terms.items() if i})
        return BiPoly({(i, j - 1): v * j for (i, j), v in self._terms.items() if j})

    def in_var(self, var: str) -> list[UniPoly]:
        """Coefficients as polynomials in the other variable, indexed by the power of ``var``."""
        idx = 0 if var == "x" else 1
        top = self.degree_in(var)
        rows: list[dict[int, Fraction]] = [dict() for _ in range(top + 1)]
        for key, v in self._terms.items():
            rows[key[idx]][key[1 - idx]] = v
        out = []
        for row in rows:
            n = max(row, default=-1) + 1
            out.append(UniPoly(row.get(k, 0) for k in range(n)))
        return out

    @classmethod
    def from_uni(cls, p: UniPoly, var: str = "x") -> "BiPoly":
        if var == "x":
            return cls({(k, 0): c for k, c in enumerate(p.coeffs)})
        return cls({(0, k): c for k, c in enumerate(p.coeffs)})

    @classmethod
    def from_rows(cls, rows: Sequence[UniPoly], var: str = "y") -> "BiPoly":
        """Inverse of :meth:`in_var`: ``sum rows[k](other) * var**k``."""
        out = {}
        for k, row in enumerate(rows):
            for m, c in enumerate(row.coeffs):
                out[(m, k) if var == "y" else (k, m)] = c
        return cls(out)

    def substitute_uni(self, px: UniPoly, py: UniPoly) -> UniPoly:
        """Restrict to the parametrized curve (px(t), py(t))."""
        out = UniPoly()
        for (i, j), c in self._terms.items():
            out = out + px ** i * py ** j * c
        return out

    def serialize(self) -> list[list]:
        """Canonical JSON form: ``[i, j, "num/den"]`` sorted by (i+j, i) descending."""
        return [[i, j, rat_str(c)] for (i, j), c in self.items()]

    @classmethod
    def deserialize(cls, data: Sequence[Sequence]) -> "BiPoly":
        return cls({(int(i), int(j)): Fraction(str(c)) for i, j, c in data})


def _signed_term(c: Fraction, mono: str) -> str:
    sign = "-" if c < 0 else "+"
    mag = abs(c)
    if mono and mag == 1:
        body = mono
    elif mono:
        body = f"{rat_str(mag)}*{mono}"
    else:
        body = rat_str(mag)
    return f"{sign} {body}"


def _join_terms(parts: list[str]) -> str:
    if not parts:
        return "0"
    head = parts[0]
    head = head[2:] if head.startswith("+ ") else "-" + head[2:]
    return " ".join([head] + parts[1:])


def to_text(F: BiPoly) -> str:
    """Render in the input grammar, terms ordered by (i+j, i) descending."""
    parts = []
    for (i, j), c in F.items():
        factors = []
        if i:
            factors.append("x" if i == 1 else f"x^{i}")
        if j:
            factors.append("y" if j == 1 else f"y^{j}")
        parts.append(_signed_term(c, "*".join(factors)))
    return _join_terms(parts)


# ---------------------------------------------------------------------------
# Parser


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            raise ParseError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def integer(self) -> int:
        self.peek()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected an integer", start)
        return int(self.text[start:self.pos])

    def parse(self) -> BiPoly:
        if not self.peek():
            raise ParseError("empty expression", self.pos)
        out = self.expr()
        if self.peek():
            raise ParseError(f"unexpected {self.peek()!r}", self.pos)
        return out

    def expr(self) -> BiPoly:
        acc = self.term()
        while self.peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> BiPoly:
        acc = self.unary()
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                acc = acc * self.unary()
            elif ch and (ch.isalnum() or ch == "("):
                raise ParseError("implicit multiplication is not allowed", self.pos)
            else:
                return acc

    def unary(self) -> BiPoly:
        ch = self.peek()
        if ch in ("+", "-"):
            self.pos += 1
            val = self.unary()
            return -val if ch == "-" else val
        return self.power()

    def power(self) -> BiPoly:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            return base ** self.integer()
        return base

    def atom(self) -> BiPoly:
        ch = self.peek()
        if ch.isdigit():
            num = self.integer()
            if self.peek() == "/":
                self.pos += 1
                at = self.pos
                den = self.integer()
                if den == 0:
                    raise ParseError("zero denominator", at)
                return BiPoly.const(Fraction(num, den))
            return BiPoly.const(num)
        if ch == "x":
            self.pos += 1
            return BiPoly.x()
        if ch == "y":
            self.pos += 1
            return BiPoly.y()
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            self.expect(")")
            return inner
        if not ch:
            raise ParseError("unexpected end of input", self.pos)
        raise ParseError(f"unexpected {ch!r}", self.pos)


def parse_poly(text: str) -> BiPoly:
    """Parse the expression grammar: integers, ``a/b``, x, y, + - * ^ and parentheses."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Normalization and coordinate changes


@dataclass(frozen=True)
class Normalization:
    scale: int
    shift: Fraction

    def recover(self, G: BiPoly) -> BiPoly:
        return G.scale(Fraction(1, self.scale)) + self.shift

    def to_json(self) -> dict:
        return {"scale": self.scale, "shift": rat_str(self.shift)}


def normalize(F: BiPoly) -> tuple[BiPoly, Normalization]:
    """Return ``scale * (F - F(0,0))`` with integer coefficients and the minimal scale."""
    if F.is_zero():
        raise ValueError("cannot normalize the zero polynomial")
    shift = F.constant_term()
    body = F - shift
    scale = lcm_all(c.denominator for c in body.terms.values())
    return body.scale(scale), Normalization(scale, shift)


def homogeneous_parts(F: BiPoly):
    """Forms F1, F2, F3, F4 (zero parts as the zero form)."""
    from .forms import BinaryForm

    return tuple(BinaryForm.from_bipoly(F.homogeneous(k), k) for k in range(1, 5))


@dataclass(frozen=True)
class UnimodularMap:
    """Integer matrix [[a, b], [c, d]] with determinant +-1, acting on column vectors."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.det not in (1, -1):
            raise ValueError("matrix is not unimodular")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @classmethod
    def identity(cls) -> "UnimodularMap":
        return cls(1, 0, 0, 1)

    def apply(self, x, y):
        return self.a * x + self.b * y, self.c * x + self.d * y

    def inverse(self) -> "UnimodularMap":
        e = self.det
        return UnimodularMap(e * self.d, -e * self.b, -e * self.c, e * self.a)

    def compose(self, other: "UnimodularMap") -> "UnimodularMap":
        """Matrix product self @ other."""
        return UnimodularMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def to_json(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]


def apply_unimodular(F: BiPoly, A: UnimodularMap) -> BiPoly:
    """``F o A^{-1}``: the polynomial G with G(A(x, y)) = F(x, y)."""
    inv = A.inverse()
    u, v = BiPoly.x(), BiPoly.y()
    return F.compose(u * inv.a + v * inv.b, u * inv.c + v * inv.d)


def extended_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def unimodular_from_linear(H) -> UnimodularMap:
    """Determinant-one matrix whose first row is the coefficient pair of ``H = ax + by``."""
    if hasattr(H, "coeffs"):
        if H.degree != 1:
            raise ValueError("expected a linear form")
        a, b = (as_fraction(c) for c in H.coeffs)
    else:
        a, b = (as_fraction(c) for c in H)
    if a.denominator != 1 or b.denominator != 1:
        raise ValueError("linear form must be integral")
    a, b = int(a), int(b)
    g, s, t = extended_gcd(a, b)
    if g != 1:
        raise ValueError("linear form is not primitive")
    return UnimodularMap(a, b, -t, s)


def bi_divide(F: BiPoly, G: BiPoly) -> Optional[BiPoly]:
    """Exact quotient F / G in Q[x, y], or None when G does not divide F."""
    if G.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")

    def lead(P: BiPoly) -> Monomial:
        return max(P.terms, key=lambda k: (k[0] + k[1], k[0]))

    gl = lead(G)
    gc = G.coeff(*gl)
    rem = F
    quot: dict[Monomial, Fraction] = {}
    while not rem.is_zero():
        rl = lead(rem)
        if rl[0] < gl[0] or rl[1] < gl[1]:
            return None
        mono = (rl[0] - gl[0], rl[1] - gl[1])
        c = rem.coeff(*rl) / gc
        quot[mono] = quot.get(mono, Fraction(0)) + c
        rem = rem - BiPoly({mono: c}) * G
    return BiPoly(quot)


def resultant_in(A: BiPoly, B: BiPoly, var: str = "y") -> UniPoly:
    """Resultant with respect to ``var`` as a polynomial in the other variable.

    Uses the formal Sylvester matrix of the coefficient rows; its determinant is
    a polynomial whose values are recovered at enough integer points and then
    interpolated.
    """
    ra, rb = A.in_var(var), B.in_var(var)
    if A.is_zero() or B.is_zero():
        raise ValueError("resultant of the zero polynomial is undefined here")
    m, n = len(ra) - 1, len(rb) - 1
    if m == 0 and n == 0:
        return UniPoly.const(1)
    bound = n * max(r.degree for r in ra) + m * max(r.degree for r in rb)
    xs = list(range(bound + 1))
    vals = []
    for x0 in xs:
        pa = [r(x0) for r in reversed(ra)]
        pb = [r(x0) for r in reversed(rb)]
        vals.append(det(sylvester(pa, pb)))
    return _interpolate_rational(xs, vals)


def _interpolate_rational(xs: Sequence[int], values: Sequence[Fraction]) -> UniPoly:
    """Lagrange interpolation through (xs[i], values[i])."""
    out = UniPoly()
    for i, xi in enumerate(xs):
        if values[i] == 0:
            continue
        basis = UniPoly.const(1)
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j != i:
                basis = basis * UniPoly([-xj, 1])
                denom *= xi - xj
        out = out + basis * (values[i] / denom)
    return out
