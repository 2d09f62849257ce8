"""Result records returned by the verifiers, and their JSON form."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .entropy import INFINITE, Entropy


def _plain(x):
    """Convert report values to JSON-ready Python objects.

    Non-finite numbers and :data:`INFINITE` become strings so the output is
    strict JSON.
    """
    if x is INFINITE:
        return "Infinite"
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "NaN"
        if math.isinf(x):
            return "Infinite" if x > 0 else "-Infinite"
        return x
    if isinstance(x, (complex, np.complexfloating)):
        return [_plain(x.real), _plain(x.imag)]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    return x


@dataclass
class VerdictReport:
    """Outcome of checking ``lhs <= rhs``; ``gap = rhs - lhs``."""

    name: str
    lhs: Entropy
    rhs: Entropy
    gap: float
    holds: bool
    tolerance: float
    residuals: dict[str, Any] = field(default_factory=dict)
    meta: dict[str, Any] = field(default_factory=dict)
    equality: bool | None = None

    @classmethod
    def compare(cls, name, lhs, rhs, tolerance, equality_tol=None, **extra) -> "VerdictReport":
        """Build a report for ``lhs <= rhs``.

        An infinite right-hand side makes the inequality hold trivially; an
        infinite left-hand side with a finite right-hand side is a violation.
        """
        meta = dict(extra.pop("meta", {}))
        if rhs is INFINITE:
            gap = math.inf if lhs is not INFINITE else math.nan
            holds = True
            meta["infinite"] = "both" if lhs is INFINITE else "rhs"
        elif lhs is INFINITE:
            gap = -math.inf
            holds = False
            meta["infinite"] = "lhs"
        else:
            gap = float(rhs) - float(lhs)
            holds = gap >= -tolerance
        equality = None
        if equality_tol is not None and math.isfinite(gap):
            equality = abs(gap) <= equality_tol
        return cls(name, lhs, rhs, gap, holds, tolerance, meta=meta, equality=equality, **extra)

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
            "holds": self.holds,
            "tolerance": self.tolerance,
            "residuals": self.residuals,
            "meta": self.meta,
        }
        if self.equality is not None:
            out["equality"] = self.equality
        return _plain(out)


@dataclass
class ResidualReport:
    """Size of the defect in an equality condition."""

    condition: str
    residual: float
    satisfied: bool
    tolerance: float
    components: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def build(cls, condition, residual, tolerance, **components) -> "ResidualReport":
        residual = float(residual)
        return cls(condition, residual, residual <= tolerance, tolerance, components)

    def to_json(self) -> dict:
        return _plain(
            {
                "name": self.condition,
                "residual": self.residual,
                "satisfied": self.satisfied,
                "tolerance": self.tolerance,
                "components": self.components,
            }
        )


@dataclass
class InfoReport:
    """Accessible information and the two upper bounds on it, in nats."""

    accessible_info: float
    chi: float
    hall_bound: float
    gaps: dict[str, float] = field(default_factory=dict)
    equality_residuals: dict[str, float] = field(default_factory=dict)
    tolerance: float = 1e-9

    @property
    def holds(self) -> bool:
        return all(g >= -self.tolerance for g in self.gaps.values())

    def to_json(self) -> dict:
        return _plain(
            {
                "accessible_info": self.accessible_info,
                "chi": self.chi,
                "hall_bound": self.hall_bound,
                "gaps": self.gaps,
                "equality_residuals": self.equality_residuals,
                "tolerance": self.tolerance,
                "holds": self.holds,
            }
        )


def default_tolerance(dim: int) -> float:
    """Violation tolerance on gaps: 1e-9 up to dimension 16, growing
    linearly with dimension beyond."""
    return 1e-9 * max(1.0, dim / 16.0)
