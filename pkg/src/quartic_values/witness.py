"""Search for integer points along which a polynomial decreases without bound.

A family is a deterministic stream of integer points together with a short
recipe describing it. The descent engine walks each family in turn and keeps
the points where the value strictly drops; it stops as soon as at least three
kept points exist and the last value is at or below the target.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

from .dioph import cf_expand, convergent_stream
from .exact import BiPoly, UnimodularMap, iroot, rat_str
from .forms import Direction
from .report import InternalInconsistency

CONVERGENT_BUDGET = 60
POINT_BUDGET = 10**6
DEFAULT_TARGET = Fraction(-(10**6))
DOUBLINGS = 64

Point = tuple[int, int]


@dataclass
class Family:
    name: str
    recipe: dict
    points: Callable[[], Iterable[Point]]


@dataclass
class Descent:
    family: str
    recipe: dict
    points: list[Point]
    values: list[Fraction]
    convergents_used: int = 0

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "recipe": self.recipe,
            "points": [[x, y, rat_str(v)] for (x, y), v in zip(self.points, self.values)],
        }


def descend(F: BiPoly, families: Iterable[Family], target=DEFAULT_TARGET, min_points: int = 3) -> Descent:
    """Run the families in order; the first that reaches ``target`` wins."""
    target = Fraction(target)
    tried = []
    for fam in families:
        kept: list[tuple[Point, Fraction]] = []
        for count, pt in enumerate(fam.points()):
            if count >= POINT_BUDGET:
                break
            val = Fraction(F(*pt))
            if not kept or val < kept[-1][1]:
                kept.append((pt, val))
                if len(kept) >= min_points and val <= target:
                    used = fam.recipe.get("convergents_per_point")
                    return Descent(
                        fam.name,
                        fam.recipe,
                        [p for p, _ in kept],
                        [v for _, v in kept],
                        count + 1 if used else 0,
                    )
        tried.append(fam.name)
    raise InternalInconsistency("witness search budget exhausted; tried " + ", ".join(tried) if tried else "no family")


# ---------------------------------------------------------------------------
# Family constructors


def doubling(base: Point, step: Point, start: int = 0) -> Iterator[Point]:
    """base + 2^j * step for j = start, start + 1, ..."""
    for j in range(start, start + DOUBLINGS):
        k = 1 << j
        yield base[0] + k * step[0], base[1] + k * step[1]


def ray_family(w: Point, name: str = "ray") -> Family:
    return Family(name, {"kind": "ray", "direction": list(w), "scale": "2^j"}, lambda: doubling((0, 0), w))


def line_family(base: Point, step: Point, name: str = "line") -> Family:
    return Family(
        name,
        {"kind": "line", "base": list(base), "step": list(step), "scale": "2^j"},
        lambda: doubling(base, step),
    )


def mapped(fam: Family, back: UnimodularMap) -> Family:
    """The same family read in other coordinates: each point p becomes back(p)."""

    def gen():
        for u, v in fam.points():
            yield back.apply(u, v)

    recipe = dict(fam.recipe)
    recipe["coordinate_map"] = back.to_json()
    return Family(fam.name, recipe, gen)


def small_lines(radius: int = 2) -> list[Family]:
    """Lines through small points along the axes and diagonals, both senses."""
    steps = [(0, 1), (0, -1), (1, 0), (-1, 0), (1, 1), (-1, -1), (1, -1), (-1, 1)]
    fams = []
    for r in range(radius + 1):
        for a in range(-r, r + 1):
            for b in range(-r, r + 1):
                if max(abs(a), abs(b)) != r:
                    continue
                for st in steps:
                    fams.append(line_family((a, b), st, "grid-line"))
    return fams


def _convergent_pairs(xi: Direction) -> Iterator[Point]:
    for p, q in itertools.islice(convergent_stream(cf_expand(xi.slope)), CONVERGENT_BUDGET):
        yield q, p


def dirichlet_family(xi: Direction, orientation: int, name: str = "dirichlet", scale: int = 1) -> Family:
    """Points on or near the line of xi: convergent pairs, or multiples of a rational vector."""

    def gen():
        if xi.is_rational:
            a, b = xi.vector
            for j in range(DOUBLINGS):
                k = orientation * scale << j
                yield k * a, k * b
            return
        for u, v in _convergent_pairs(xi):
            yield orientation * scale * u, orientation * scale * v

    recipe = {"kind": "dirichlet", "direction": xi.to_json(), "orientation": orientation}
    if scale != 1:
        recipe["scale"] = scale
    if not xi.is_rational:
        recipe["convergents_per_point"] = 1
    return Family(name, recipe, gen)


def rescaled_dirichlet_family(xi: Direction, orientation: int, name: str = "dirichlet-rescaled") -> Family:
    """Convergent pairs (u, v) scaled by M = floor((u^2 + v^2)^(1/4))."""

    def gen():
        for u, v in _convergent_pairs(xi):
            M = max(1, iroot(u * u + v * v, 4))
            yield orientation * M * u, orientation * M * v

    recipe = {
        "kind": "dirichlet-rescaled",
        "direction": xi.to_json(),
        "orientation": orientation,
        "multiplier": "floor((u^2+v^2)^(1/4))",
        "convergents_per_point": 1,
    }
    return Family(name, recipe, gen)


def offset_line_family(xi: Direction, offset: Point, orientation: int, name: str = "offset-line") -> Family:
    """Multiples of a rational direction shifted by a fixed offset."""
    a, b = xi.vector
    return line_family(offset, (orientation * a, orientation * b), name)


def explicit_family(points: Sequence[Point], name: str, recipe: dict) -> Family:
    pts = list(points)
    return Family(name, recipe, lambda: iter(pts))
