"""Verdicts, case traces and the canonical JSON report."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Any, Optional

from . import __version__
from .exact import BiPoly, Normalization, rat_str, to_text

UNBOUNDED = "UnboundedBelow"
SPARSE = "SparseValues"
COMPOSITION = "Composition"
REDUCIBLE_GAP = "ReducibleGap"

SQRT = "Sqrt"
POWER_ONE_OVER_D = "PowerOneOverD"
LANDAU = "LandauLogHalf"
POWER_ONE_MINUS_LAMBDA = "PowerOneMinusLambda"
HOMOGENEOUS = "HomogeneousEmpirical"

FORMAT_VERSION = 1

_REASONS = {
    UNBOUNDED: "F takes arbitrarily negative values, while every set {Cn : n >= D/C} is bounded below",
    SPARSE: "the values of F in [1, N] are o(N), while {Cn : n >= D/C} has about N/C elements there",
    COMPOSITION: "F factors through a univariate polynomial of degree at least 2, so its values are sparse",
    REDUCIBLE_GAP: "F is reducible and its factors force a value set of density zero",
}


class InternalInconsistency(RuntimeError):
    """A construction that theory guarantees has failed; signals a defect, never a verdict."""


class UnsupportedInput(ValueError):
    """The polynomial is outside the supported range (degree 1 to 4)."""


@dataclass(frozen=True)
class Verdict:
    tag: str
    density_class: Optional[str] = None
    lam: Optional[Fraction] = None
    degree: Optional[int] = None
    subcase: Optional[str] = None

    def __post_init__(self):
        if self.lam is not None and not (0 < self.lam < 1):
            raise ValueError("lambda must lie strictly between 0 and 1")

    @property
    def label(self) -> str:
        """Short tag used by tests and the CLI, e.g. ``SparseValues(Sqrt)``."""
        if self.tag == SPARSE:
            if self.density_class == POWER_ONE_MINUS_LAMBDA:
                return f"{SPARSE}({POWER_ONE_MINUS_LAMBDA}({rat_str(self.lam)}))"
            if self.density_class == POWER_ONE_OVER_D:
                return f"{SPARSE}({POWER_ONE_OVER_D}({self.degree}))"
            return f"{SPARSE}({self.density_class})"
        if self.tag == REDUCIBLE_GAP:
            return f"{REDUCIBLE_GAP}({self.subcase})"
        return self.tag

    def to_json(self) -> dict:
        out: dict[str, Any] = {
            "tag": self.tag,
            "label": self.label,
            "consequence": "F(Z^2) differs from {Cn : n >= D/C} for every C >= 1 and D: " + _REASONS[self.tag],
        }
        if self.density_class is not None:
            out["class"] = self.density_class
        if self.lam is not None:
            out["lambda"] = rat_str(self.lam)
        if self.degree is not None:
            out["d"] = self.degree
        if self.subcase is not None:
            out["subcase"] = self.subcase
        return out


@dataclass
class TraceStep:
    node: str
    data: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"node": self.node, "data": self.data}


@dataclass
class Report:
    text: str
    polynomial: BiPoly
    normalized: BiPoly
    normalization: Normalization
    trace: list[TraceStep]
    verdict: Verdict
    certificate: dict

    def to_json(self) -> dict:
        return {
            "input": {"text": self.text, "polynomial": self.polynomial.serialize(), "canonical": to_text(self.polynomial)},
            "normalization": {**self.normalization.to_json(), "polynomial": self.normalized.serialize()},
            "trace": [s.to_json() for s in self.trace],
            "verdict": self.verdict.to_json(),
            "certificate": self.certificate,
            "versions": {"package": __version__, "format": FORMAT_VERSION},
        }

    def dumps(self) -> str:
        return canonical_json(self.to_json())


def canonical_json(obj: Any) -> str:
    """Sorted keys, fixed separators, ASCII only: identical bytes for identical content."""
    return json.dumps(_plain(obj), sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _plain(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return rat_str(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, BiPoly):
        return obj.serialize()
    return obj


# ---------------------------------------------------------------------------
# Decision tree


@lru_cache(maxsize=1)
def decision_tree() -> dict:
    text = resources.files("quartic_values").joinpath("data/decision_tree.json").read_text()
    return json.loads(text)


def trace_is_path(nodes: list[str]) -> tuple[bool, str]:
    """Check that ``nodes`` walks the published tree from its root to a leaf."""
    tree = decision_tree()
    edges = tree["edges"]
    if not nodes or nodes[0] != tree["root"]:
        return False, "trace does not start at the root"
    for a, b in zip(nodes, nodes[1:]):
        if a not in edges or b not in edges[a]:
            return False, f"no edge {a} -> {b}"
    if nodes[-1] not in edges or edges[nodes[-1]]:
        return False, f"trace ends at the inner node {nodes[-1]}"
    return True, ""
