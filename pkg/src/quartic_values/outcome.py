"""Shared pieces for the case analysis: the running context and certificate builders."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .exact import BiPoly, UniPoly, rat_str
from .forms import BinaryForm, Direction, multiplicity, real_zero_directions, vanishes_at
from .oracle import enumerate_values, missing_value_search, reduced_equivalent, rigorous_box
from .report import (
    COMPOSITION,
    POWER_ONE_MINUS_LAMBDA,
    SPARSE,
    UNBOUNDED,
    InternalInconsistency,
    TraceStep,
    Verdict,
)
from .witness import DEFAULT_TARGET, Family, descend

ORACLE_RANGE = 10**4
ORACLE_BOX_CAP = 60


@dataclass
class Context:
    """State carried down one analysis.

    ``G`` is the normalized polynomial the case analysis works on; witness
    values are measured on ``source`` (the user's polynomial), which differs
    from ``G`` only by a positive scale and a constant shift.
    """

    G: BiPoly
    source: BiPoly
    target: Fraction = DEFAULT_TARGET
    trace: list[TraceStep] = field(default_factory=list)

    def step(self, node: str, **data) -> None:
        self.trace.append(TraceStep(node, {k: _jsonable(v) for k, v in data.items()}))


@dataclass
class Outcome:
    verdict: Verdict
    certificate: dict
    trace: list[TraceStep] = field(default_factory=list)


def _jsonable(v):
    if isinstance(v, Fraction):
        return rat_str(v)
    if isinstance(v, BinaryForm):
        return str(v)
    if isinstance(v, BiPoly):
        return v.serialize()
    if isinstance(v, UniPoly):
        return [rat_str(c) for c in v.coeffs]
    if isinstance(v, Direction):
        return v.to_json()
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return v


def uni_json(p: UniPoly) -> list[str]:
    return [rat_str(c) for c in p.coeffs]


# ---------------------------------------------------------------------------
# Certificate builders


def unbounded(ctx: Context, families: Iterable[Family], **extra) -> Outcome:
    found = descend(ctx.source, families, ctx.target)
    cert = {"target": rat_str(ctx.target), **found.to_json(), **{k: _jsonable(v) for k, v in extra.items()}}
    if found.convergents_used:
        cert["convergents_used"] = found.convergents_used
    return Outcome(Verdict(UNBOUNDED), cert, ctx.trace)


def oracle_table(G: BiPoly) -> dict:
    R, A = reduced_equivalent(G)
    bound = rigorous_box(R, ORACLE_RANGE)
    box = bound if bound is not None else ORACLE_BOX_CAP
    out = enumerate_values(R, box, ORACLE_RANGE).to_json()
    if R != G:
        out["reduction"] = A.to_json()
    return out


def sparse(
    ctx: Context,
    density_class: str,
    lam: Optional[Fraction] = None,
    degree: Optional[int] = None,
    missing: bool = False,
    **extra,
) -> Outcome:
    cert = {"class": density_class, "oracle": oracle_table(ctx.G)}
    if missing:
        R, _ = reduced_equivalent(ctx.G)
        mv = missing_value_search(R, 1, 0, budget=ORACLE_RANGE, box=rigorous_box(R, ORACLE_RANGE))
        if mv.value is None or not mv.rigorous:
            raise InternalInconsistency("no rigorous missing value in a definite branch")
        cert["missing_value"] = mv.to_json()
    cert.update({k: _jsonable(v) for k, v in extra.items()})
    return Outcome(Verdict(SPARSE, density_class, lam, degree), cert, ctx.trace)


def compose_uni(outer: UniPoly, inner: BiPoly) -> BiPoly:
    out = BiPoly()
    power = BiPoly.const(1)
    for c in outer.coeffs:
        out = out + power * c
        power = power * inner
    return out


def composition(ctx: Context, outer: UniPoly, inner: BiPoly, **extra) -> Outcome:
    # keep the inner polynomial free of a constant term; the outer absorbs it
    c = inner.constant_term()
    if c:
        shift = UniPoly([c, 1])
        outer = outer.compose(shift)
        inner = inner - c
    if compose_uni(outer, inner) != ctx.G:
        raise InternalInconsistency("composition does not expand to the polynomial")
    cert = {"composition": composition_payload(outer, inner)}
    cert.update({k: _jsonable(v) for k, v in extra.items()})
    return Outcome(Verdict(COMPOSITION), cert, ctx.trace)


def composition_payload(outer: UniPoly, inner: BiPoly) -> dict:
    return {"outer": uni_json(outer), "inner": inner.serialize()}


# ---------------------------------------------------------------------------
# Sector data


@dataclass(frozen=True)
class ZeroData:
    xi: Direction
    r: Fraction
    s: int

    def to_json(self) -> dict:
        return {"direction": self.xi.to_json(), "form": str(self.xi.minimal_form), "r": rat_str(self.r), "s": self.s}


def shared_zeros(F4: BinaryForm, tilde: BinaryForm, F3: BinaryForm) -> list[ZeroData]:
    """Zeros of the real-rooted part that F3 also vanishes on, with their multiplicities."""
    out = []
    for xi in real_zero_directions(tilde):
        if vanishes_at(F3, xi):
            H = xi.minimal_form
            r = Fraction(multiplicity(H, F4), 2)
            s = multiplicity(H, F3) if not F3.is_zero() else 10**9
            out.append(ZeroData(xi, r, s))
    return out


def sector_lambda(zeros: list[ZeroData]) -> Fraction:
    R = max((z.r for z in zeros), default=Fraction(1))
    return 1 / (4 * R)


def power_law(ctx: Context, zeros: list[ZeroData], exceptional: Optional[list] = None, **extra) -> Outcome:
    lam = sector_lambda(zeros)
    sector = {
        "R": rat_str(max((z.r for z in zeros), default=Fraction(1))),
        "lambda": rat_str(lam),
        "zeros": [z.to_json() for z in zeros],
        "exceptional_lines": exceptional or [],
    }
    return sparse(ctx, POWER_ONE_MINUS_LAMBDA, lam, sector=sector, **extra)
