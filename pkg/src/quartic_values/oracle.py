"""Brute-force value sets and independent re-checking of certificates.

Nothing in this module consults the classifier: counts come from direct
enumeration over a box, and certificates are re-verified from the data they
carry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .exact import (
    BiPoly,
    Normalization,
    UniPoly,
    UnimodularMap,
    is_square,
    lcm_all,
    real_root_count,
    uni_factor,
)
from .forms import BinaryForm, Direction, definiteness, POS_DEF

MAX_PAIRS = 10**8
_INT64_SAFE = 2**62


# ---------------------------------------------------------------------------
# Enumeration


@dataclass(frozen=True)
class ValueTable:
    box: int
    limit: int
    values: tuple
    exhaustive: bool

    def count_positive(self, upto: Optional[int] = None) -> int:
        """Number of distinct attained values in [1, upto]."""
        top = self.limit if upto is None else upto
        return sum(1 for v in self.values if 1 <= v <= top)

    def to_json(self) -> dict:
        return {
            "box": self.box,
            "range": self.limit,
            "exhaustive": self.exhaustive,
            "count": len(self.values),
            "count_positive": self.count_positive(),
        }


def _integral(F: BiPoly) -> tuple[BiPoly, int]:
    den = lcm_all(c.denominator for c in F.terms.values()) if not F.is_zero() else 1
    return F.scale(den), den


def _band_values(G: BiPoly, xs: np.ndarray, ys: np.ndarray, use_int64: bool):
    if use_int64:
        X = xs.astype(np.int64)[:, None]
        Y = ys.astype(np.int64)[None, :]
        out = np.zeros((len(xs), len(ys)), dtype=np.int64)
    else:
        X = np.array([int(v) for v in xs], dtype=object)[:, None]
        Y = np.array([int(v) for v in ys], dtype=object)[None, :]
        out = np.zeros((len(xs), len(ys)), dtype=object)
    for (i, j), c in G.items():
        out = out + int(c) * (X ** i) * (Y ** j)
    return out


def _magnitude_bound(G: BiPoly, B: int) -> int:
    return sum(abs(int(c)) * B ** (i + j) for (i, j), c in G.items())


def enumerate_values(F: BiPoly, B: int, N: int, band: int = 256) -> ValueTable:
    """Distinct values of F on the box max(|x|, |y|) <= B, clipped to [-N, N].

    The box is processed in row bands; band results are merged by set union,
    so the outcome does not depend on the band size.
    """
    if B < 0 or N < 1:
        raise ValueError("box and range must be positive")
    if (2 * B + 1) ** 2 > MAX_PAIRS:
        raise MemoryError("box exceeds the enumeration guard")
    G, den = _integral(F)
    limit = N * den
    use_int64 = _magnitude_bound(G, B) < _INT64_SAFE
    ys = np.arange(-B, B + 1)
    acc: set = set()
    for start in range(-B, B + 1, band):
        xs = np.arange(start, min(B, start + band - 1) + 1)
        vals = _band_values(G, xs, ys, use_int64)
        flat = vals.ravel()
        if use_int64:
            flat = flat[np.abs(flat) <= limit]
            acc.update(int(v) for v in np.unique(flat))
        else:
            acc.update(int(v) for v in flat if -limit <= v <= limit)
    if den == 1:
        values = tuple(sorted(acc))
    else:
        values = tuple(sorted(Fraction(v, den) for v in acc))
    bound = rigorous_box(F, N)
    return ValueTable(B, N, values, bound is not None and B >= bound)


def naive_values(F: BiPoly, B: int, N: int) -> set:
    """Plain double loop over the box; used to cross-check enumerate_values."""
    out = set()
    for x in range(-B, B + 1):
        for y in range(-B, B + 1):
            v = F(x, y)
            if -N <= v <= N:
                out.add(v)
    return out


def _form_floor(f: BinaryForm) -> Fraction:
    """A positive rational c with f >= c * max(|x|, |y|)^d for a definite form f."""
    p1 = f.dehomogenize()  # f(1, t)
    p2 = UniPoly(list(f.coeffs))  # f(t, 1) with coefficients ordered from t^0
    sample = min(f(1, 0), f(0, 1), f(1, 1), f(1, -1))
    c = Fraction(sample) / 2
    while c > 0:
        ok = True
        for p in (p1, p2):
            shifted = p - c
            if real_root_count(shifted, (Fraction(-1), Fraction(1))) or shifted(0) <= 0:
                ok = False
                break
        if ok:
            return c
        c /= 2
    raise ArithmeticError("form is not definite")


def rigorous_box(F: BiPoly, N: int) -> Optional[int]:
    """Box radius that provably contains every point with F(x, y) <= N.

    Only available when the top-degree part is positive definite: then
    F >= c m^d - S m^(d-1) with m = max(|x|, |y|), where c bounds the top form
    from below on the max-norm unit square and S sums the absolute values of
    the lower coefficients.
    """
    d = F.degree
    if d not in (2, 4):
        return None
    top = BinaryForm.from_bipoly(F.homogeneous(d), d)
    if definiteness(top).tag != POS_DEF:
        return None
    c = _form_floor(top)
    S = sum(abs(v) for (i, j), v in F.items() if i + j < d)

    def g(m: int) -> Fraction:
        return c * m ** d - S * m ** (d - 1)

    m = max(1, math.ceil(S / c))
    step = 1
    while g(m + step) <= N:
        step *= 2
    lo, hi = m, m + step
    if g(lo) > N:
        return max(0, lo - 1)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if g(mid) > N:
            hi = mid
        else:
            lo = mid
    return hi - 1


def transform(F: BiPoly, A: UnimodularMap) -> BiPoly:
    """``F(a x + b y, c x + d y)``; same value set as F since A permutes Z^2."""
    x, y = BiPoly.x(), BiPoly.y()
    return F.compose(x * A.a + y * A.b, x * A.c + y * A.d)


def reduced_equivalent(F: BiPoly) -> tuple[BiPoly, UnimodularMap]:
    """Greedy shear reduction of the top form, so that enumeration boxes stay small."""
    d = F.degree
    moves = [UnimodularMap(1, 1, 0, 1), UnimodularMap(1, -1, 0, 1), UnimodularMap(1, 0, 1, 1), UnimodularMap(1, 0, -1, 1)]

    def cost(P: BiPoly) -> Fraction:
        return sum((v * v for (i, j), v in P.items() if i + j == d), Fraction(0))

    A = UnimodularMap.identity()
    cur, best = F, cost(F)
    for _ in range(200):
        step = None
        for M in moves:
            cand = transform(cur, M)
            c = cost(cand)
            if c < best:
                step, best, nxt = M, c, cand
        if step is None:
            break
        cur, A = nxt, A.compose(step)
    return cur, A


def heuristic_box(F: BiPoly, N: int) -> int:
    bound = rigorous_box(F, N)
    if bound is not None:
        return bound
    d = max(F.degree, 1)
    return int(min(1000, max(40, round(N ** (1.0 / d) * 4))))


# ---------------------------------------------------------------------------
# Density fitting


CANDIDATES = {
    "Sqrt": lambda n: math.sqrt(n),
    "PowerOneOverD(3)": lambda n: n ** (1.0 / 3),
    "PowerOneOverD(4)": lambda n: n ** 0.25,
    "LandauLogHalf": lambda n: n / math.sqrt(math.log(n)),
    "Linear": lambda n: float(n),
}


@dataclass(frozen=True)
class DensityFit:
    rows: tuple[tuple[int, int, bool], ...]
    fitted: str
    residuals: dict
    constants: dict
    tie: bool = False
    slope: Optional[float] = None

    def to_json(self) -> dict:
        return {
            "rows": [{"N": n, "count": c, "exhaustive": e} for n, c, e in self.rows],
            "class": self.fitted,
            "residuals": {k: round(v, 6) for k, v in sorted(self.residuals.items())},
            "constants": {k: round(v, 6) for k, v in sorted(self.constants.items())},
            "tie": self.tie,
            "slope": None if self.slope is None else round(self.slope, 6),
        }

    def csv(self) -> str:
        lines = ["N,count,exhaustive"]
        lines += [f"{n},{c},{str(e).lower()}" for n, c, e in self.rows]
        return "\n".join(lines) + "\n"


def fit_density(rows: Sequence[tuple[int, int, bool]], predicted: Optional[str] = None) -> DensityFit:
    """Pick the candidate shape with the smallest log-scale residual.

    Each candidate has one free constant fitted in log space. Residuals within
    0.01 of the best count as a tie; ties go to ``predicted`` when it is among
    them, otherwise to the candidate whose constant is closest to 1.
    """
    ns = [n for n, _, _ in rows]
    cs = [max(c, 1) for _, c, _ in rows]
    residuals, constants = {}, {}
    for name, shape in CANDIDATES.items():
        logs = [math.log(c) - math.log(shape(n)) for n, c in zip(ns, cs)]
        mean = sum(logs) / len(logs)
        residuals[name] = math.sqrt(sum((v - mean) ** 2 for v in logs) / len(logs))
        constants[name] = math.exp(mean)
    best = min(residuals.values())
    close = sorted(k for k, v in residuals.items() if v - best <= 0.01)
    tie = len(close) > 1
    if predicted in close:
        fitted = predicted
    else:
        fitted = min(close, key=lambda k: (abs(math.log(constants[k])), k))
    slope = None
    if len(ns) >= 2:
        lx = [math.log(n) for n in ns]
        ly = [math.log(c) for c in cs]
        mx, my = sum(lx) / len(lx), sum(ly) / len(ly)
        den = sum((a - mx) ** 2 for a in lx)
        slope = sum((a - mx) * (b - my) for a, b in zip(lx, ly)) / den if den else None
    return DensityFit(tuple(rows), fitted, residuals, constants, tie, slope)


def density_table(F: BiPoly, Ns: Sequence[int], predicted: Optional[str] = None) -> DensityFit:
    if not Ns:
        raise ValueError("empty list of range limits")
    if list(Ns) != sorted(set(Ns)):
        raise ValueError("range limits must be strictly increasing")
    top = max(Ns)
    B = heuristic_box(F, top)
    table = enumerate_values(F, B, top)
    rows = []
    for n in Ns:
        exhaustive = False
        bound = rigorous_box(F, n)
        if bound is not None and B >= bound:
            exhaustive = True
        rows.append((n, table.count_positive(n), exhaustive))
    return fit_density(rows, predicted)


# ---------------------------------------------------------------------------
# Missing values of an arithmetic progression


@dataclass(frozen=True)
class MissingValue:
    value: Optional[int]
    rigorous: bool
    box: int
    limit: int
    C: int
    D: int

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "rigorous": self.rigorous,
            "box": self.box,
            "range": self.limit,
            "C": self.C,
            "D": self.D,
        }


def missing_value_search(F: BiPoly, C: int, D: int, budget: int = 10**4, box: Optional[int] = None) -> MissingValue:
    """Smallest element of {Cn : n >= D/C} that F does not attain in the searched box.

    The answer is rigorous only when the box provably contains every
    representation of the numbers searched. ``value`` is None when every
    checked element was attained (inconclusive, never a claim of coverage).
    """
    if C < 1:
        raise ValueError("C must be positive")
    first = -((-D) // C)  # ceil(D / C)
    last = C * (first + budget - 1)
    limit = max(abs(D), abs(last), abs(C * first), 1)
    B = box if box is not None else heuristic_box(F, limit)
    table = enumerate_values(F, B, limit)
    attained = set(table.values)
    for n in range(first, first + budget):
        if C * n not in attained:
            return MissingValue(C * n, table.exhaustive, B, limit, C, D)
    return MissingValue(None, False, B, limit, C, D)


# ---------------------------------------------------------------------------
# Lattice points in a thin annular sector


def tangent_bound(phi: float) -> Fraction:
    """A rational close to tan(phi); the count is exact for this rational."""
    if phi <= 0:
        return Fraction(0)
    return Fraction(math.tan(phi)).limit_denominator(10**12)


def sector_count(xi: Direction, T: int, R: int = 1, c: float = 1.0) -> int:
    """Lattice points with T <= |P| <= 2T within angle c*T^(-1/(2R)) of the line of xi.

    Both the direction and its antipode are counted. The angular test is
    cross^2 <= tau^2 dot^2 with a rational tau approximating the tangent of
    the window; it is decided exactly, in Q or Q(sqrt D).
    """
    if T < 2:
        raise ValueError("T must be at least 2")
    tau = tangent_bound(c * T ** (-1.0 / (2 * R)))
    if tau >= 1:
        raise ValueError("angular window too wide")
    # exchanging the coordinates preserves counts, so keep |slope| <= 1
    if xi.is_rational:
        a, b = xi.vector
        if abs(b) > abs(a):
            a, b = b, a
        slope = Fraction(b, a)
    else:
        slope = xi.slope
        if abs(slope) > 1:
            slope = 1 / slope
    sf = float(slope)
    tau2 = tau * tau

    def inside_cone(u: int, v: int) -> bool:
        cross = slope * u - v
        dot = slope * v + u
        val = cross * cross - tau2 * dot * dot
        return (val.sign() if hasattr(val, "sign") else (val > 0) - (val < 0)) <= 0

    T2, T4 = T * T, 4 * T * T
    total = 0
    tf = float(tau)
    lo_slope = (sf - tf) / (1 + sf * tf)
    hi_slope = (sf + tf) / (1 - sf * tf)
    for u in range(-2 * T, 2 * T + 1):
        rem_hi = T4 - u * u
        if rem_hi < 0:
            continue
        hi_b = math.isqrt(rem_hi)
        rem_lo = T2 - u * u
        # annulus in v: [-hi_b, -lo_b] and [lo_b, hi_b], merged when lo_b == 0
        lo_b = 0 if rem_lo <= 0 else math.isqrt(rem_lo - 1) + 1
        e1, e2 = sorted((u * lo_slope, u * hi_slope))
        vl, vh = math.floor(e1) - 1, math.ceil(e2) + 1
        # tighten the cone interval exactly
        while vl <= vh and not inside_cone(u, vl):
            vl += 1
        while vh >= vl and not inside_cone(u, vh):
            vh -= 1
        if vl > vh:
            continue
        while inside_cone(u, vl - 1):
            vl -= 1
        while inside_cone(u, vh + 1):
            vh += 1
        ranges = [(-hi_b, -lo_b), (lo_b, hi_b)] if lo_b > 0 else [(-hi_b, hi_b)]
        for r0, r1 in ranges:
            lo, hi = max(r0, vl), min(r1, vh)
            if lo <= hi:
                total += hi - lo + 1
    return total


# ---------------------------------------------------------------------------
# Reducible specializations


def _is_reducible(p: UniPoly) -> bool:
    if p.degree <= 0:
        return True
    if p.degree == 1:
        return False
    if p.degree == 2:
        a, b, c = p.coeffs[2], p.coeffs[1], p.coeffs[0]
        disc = b * b - 4 * a * c
        return disc >= 0 and is_square(disc.numerator * disc.denominator)
    fac = uni_factor(p)
    return len(fac.factors) > 1 or fac.factors[0][1] > 1


def reducible_specialization_count(Y: BiPoly, B: int) -> int:
    """Number of integers t in [-B, B] with Y(x, t) reducible over Q as a polynomial in x.

    A specialization whose degree drops to zero or below counts as reducible.
    """
    rows = Y.in_var("x")  # coefficient of x^k as a polynomial in t
    count = 0
    for t0 in range(-B, B + 1):
        p = UniPoly([row(t0) for row in rows])
        if p.is_zero() or _is_reducible(p):
            count += 1
    return count


# ---------------------------------------------------------------------------
# Certificate verification


@dataclass
class Verification:
    ok: bool
    reasons: list[str] = field(default_factory=list)

    def fail(self, clause: str) -> "Verification":
        self.ok = False
        self.reasons.append(clause)
        return self


def _uni(data) -> UniPoly:
    return UniPoly(Fraction(c) for c in data)


def _expand_composition(outer: UniPoly, inner: BiPoly) -> BiPoly:
    out = BiPoly()
    power = BiPoly.const(1)
    for c in outer.coeffs:
        out = out + power * c
        power = power * inner
    return out


def verify_certificate(report: dict) -> Verification:
    """Re-check a report from its own data; the first violated clause is reported first."""
    from .report import trace_is_path

    res = Verification(True)
    try:
        F = BiPoly.deserialize(report["input"]["polynomial"])
        norm = report["normalization"]
        G = BiPoly.deserialize(norm["polynomial"])
        scale, shift = int(norm["scale"]), Fraction(norm["shift"])
        verdict = report["verdict"]
        cert = report["certificate"]
        nodes = [s["node"] for s in report["trace"]]
    except (KeyError, TypeError, ValueError) as exc:
        return res.fail(f"malformed report: {exc}")
    if Normalization(scale, shift).recover(G) != F:
        res.fail("normalization mismatch")
    ok, why = trace_is_path(nodes)
    if not ok:
        res.fail("trace: " + why)
    tag = verdict.get("tag")
    if tag == "UnboundedBelow":
        _check_descent(F, cert, res)
    elif tag == "Composition":
        _check_composition(G, cert.get("composition", {}), res)
    elif tag == "SparseValues":
        _check_sparse(G, cert, res)
    elif tag == "ReducibleGap":
        _check_reducible(G, cert, res)
    else:
        res.fail("unknown verdict tag")
    for item in cert.get("completions", []):
        _check_completion(G, item, res)
    return res


def _check_descent(F: BiPoly, cert: dict, res: Verification) -> None:
    pts = cert.get("points", [])
    target = Fraction(cert.get("target", "-1000000"))
    if len(pts) < 3:
        res.fail("fewer than three witness points")
        return
    prev = None
    for x, y, v in pts:
        val = Fraction(F(int(x), int(y)))
        if val != Fraction(v):
            res.fail("recorded value mismatch")
            return
        if prev is not None and not val < prev:
            res.fail("strict decrease")
            return
        prev = val
    if prev > target:
        res.fail("target not reached")


def _check_composition(G: BiPoly, comp: dict, res: Verification) -> None:
    try:
        outer = _uni(comp["outer"])
        inner = BiPoly.deserialize(comp["inner"])
    except (KeyError, ValueError):
        res.fail("composition payload missing")
        return
    if outer.degree < 2:
        res.fail("outer polynomial has degree below two")
    if _expand_composition(outer, inner) != G:
        res.fail("expansion mismatch")


def _table_poly(G: BiPoly, table: dict) -> BiPoly:
    """The polynomial a table was taken on: G itself or an equivalent with the same value set."""
    if "reduction" not in table:
        return G
    (a, b), (c, d) = table["reduction"]
    return transform(G, UnimodularMap(int(a), int(b), int(c), int(d)))


def _check_sparse(G: BiPoly, cert: dict, res: Verification) -> None:
    table = cert.get("oracle")
    if not table:
        res.fail("oracle table missing")
        return
    B, N = int(table["box"]), int(table["range"])
    E = _table_poly(G, table)
    fresh = enumerate_values(E, B, N)
    if fresh.count_positive() != int(table["count_positive"]):
        res.fail("oracle count mismatch")
    if fresh.exhaustive != bool(table["exhaustive"]):
        res.fail("exhaustive flag mismatch")
    missing = cert.get("missing_value")
    if missing is not None:
        mv = missing_value_search(E, int(missing["C"]), int(missing["D"]), box=int(missing["box"]))
        if mv.value != missing["value"] or mv.rigorous != missing["rigorous"]:
            res.fail("missing value mismatch")
    comp = cert.get("composition")
    if comp is not None:
        _check_composition(G, comp, res)


def _check_completion(G: BiPoly, item: dict, res: Verification) -> None:
    kind = item.get("kind")
    x, y = BiPoly.x(), BiPoly.y()
    if kind == "shifted-quadratic":
        Q2 = BiPoly.deserialize(item["quadratic_part"])
        q1, q2, q3 = (Fraction(item[k]) for k in ("q1", "q2", "q3"))
        target = BiPoly.deserialize(item["polynomial"])
        if Q2.compose(x + q1, y + q2) + q3 != target:
            res.fail("square completion mismatch")
    elif kind in ("line-square", "line-fourth"):
        a, b, c, d = (int(v) for row in item["map"] for v in row)
        # G(u, v) with (u, v) = A (x, y); rebuild it from the recorded rows
        g2, g1, g0 = (_uni(item[k]) for k in ("g2", "g1", "g0"))
        v = BiPoly.y()
        rebuilt = (
            BiPoly.from_uni(g2, "x") * v * v + BiPoly.from_uni(g1, "x") * v + BiPoly.from_uni(g0, "x")
        )
        back = rebuilt.compose(x * a + y * b, x * c + y * d)
        if abs(a * d - b * c) != 1 or back != G:
            res.fail("quadratic-in-v identity mismatch")
        Nn = _uni(item["N"])
        if Nn != g1 * g1 - g0 * g2 * 4:
            res.fail("discriminant mismatch")
        if "q" in item:
            q, h = _uni(item["q"]), _uni(item["h"])
            if g1 != g2 * q * 2 + h:
                res.fail("division identity mismatch")
    elif kind == "indefinite-square":
        a4 = Fraction(item["a4"])
        H = BiPoly.deserialize(item["H"])
        q1, q2, q3 = (Fraction(item[k]) for k in ("q1", "q2", "q3"))
        Q = BiPoly.deserialize(item["Q"])
        W = H.compose(x + q1, y + q2) + q3
        if W * W * a4 + Q != G:
            res.fail("square completion mismatch")
    else:
        res.fail(f"unknown completion kind {kind}")


def _check_reducible(G: BiPoly, cert: dict, res: Verification) -> None:
    fac = cert.get("factorization")
    if not fac:
        res.fail("factorization missing")
        return
    prod = BiPoly.const(Fraction(fac["content"]))
    for f in fac["factors"]:
        prod = prod * BiPoly.deserialize(f)
    if prod != G:
        res.fail("factorization does not multiply back")
    sub = cert.get("subcase")
    if sub == "line-pair":
        for entry in cert.get("lines", []):
            _check_line_restriction(G, entry, res)
    elif sub == "linear-factor":
        _check_linear_factor(G, cert, res)
    table = cert.get("oracle")
    if table:
        fresh = enumerate_values(_table_poly(G, table), int(table["box"]), int(table["range"]))
        if fresh.count_positive() != int(table["count_positive"]):
            res.fail("oracle count mismatch")


def _check_line_restriction(G: BiPoly, entry: dict, res: Verification) -> None:
    a, b = (int(v) for v in entry["line"])
    s, t = (int(v) for v in entry["cofactor"])
    if a * s + b * t != 1:
        res.fail("line cofactor does not give determinant one")
        return
    d, z = BiPoly.x(), BiPoly.y()
    restricted = G.compose(d * s - z * b, d * t + z * a)
    rows = restricted.in_var("y")
    recorded = [_uni(r) for r in entry["coefficients"]]
    if len(rows) != len(recorded) or any(p != q for p, q in zip(rows, recorded)):
        res.fail("line restriction mismatch")
        return
    linear_at = _degree_one_values(rows)
    if sorted(linear_at) != sorted(int(v) for v in entry.get("degree_one_at", [])):
        res.fail("degree-one specializations mismatch")


def _degree_one_values(rows: list[UniPoly]) -> list[int]:
    """Nonzero integers d where the polynomial in z with coefficient rows(d) has degree exactly one."""
    from .exact import rational_roots

    if len(rows) < 2:
        return []
    high = [r for r in rows[2:] if not r.is_zero()]
    if not high:
        return []
    common = None
    for r in high:
        roots = set(rational_roots(r)) if r.degree > 0 else set()
        common = roots if common is None else common & roots
    out = []
    for d in sorted(common or ()):
        if d.denominator == 1 and d != 0 and rows[1](d) != 0:
            out.append(int(d))
    return out


def _check_linear_factor(G: BiPoly, cert: dict, res: Verification) -> None:
    from .curves import cubic_curve_analysis

    K = BiPoly.deserialize(cert["cofactor"])
    for item in cert.get("fibres", []):
        level = Fraction(item["level"])
        kind = cubic_curve_analysis(K - level).kind
        if kind != item["analysis"]["kind"]:
            res.fail("fibre analysis mismatch")
            return
