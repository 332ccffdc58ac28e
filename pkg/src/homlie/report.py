"""Verification reports: named cases with residuals against tolerances.

Reports serialize deterministically (sorted keys, fixed float repr), so the
same configuration and seed produce byte-identical JSON.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

__all__ = ["Case", "Report"]


@dataclass(frozen=True)
class Case:
    """One verified identity: the measured residual against its tolerance.

    ``anchor`` names the mathematical law being exercised, so a report is
    readable without the source.  For witness cases (where a residual must
    be large, or a failure must occur) the residual is transformed so that
    pass is still residual <= tolerance; the anchor says so.
    """

    name: str
    anchor: str
    max_residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class Report:
    """A suite of cases plus the configuration that produced them."""

    suite: str
    config: dict = field(default_factory=dict)
    cases: tuple[Case, ...] = ()

    @property
    def passed(self) -> bool:
        return all(case.passed for case in self.cases)

    def to_dict(self) -> dict:
        out = {
            "schema": 1,
            "suite": self.suite,
            "config": dict(self.config),
            "cases": [case.to_dict() for case in self.cases],
            "pass": self.passed,
        }
        # convenience top-level echoes, stable across runs
        for key in ("n", "beta_id", "seed", "samples"):
            if key in self.config:
                out[key] = self.config[key]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def summary_text(self) -> str:
        width = max((len(c.name) for c in self.cases), default=4)
        lines = [f"suite {self.suite}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.cases:
            lines.append(
                f"  {c.name:<{width}}  residual {c.max_residual:>12.5e}"
                f"  tol {c.tolerance:>9.1e}  {'pass' if c.passed else 'FAIL'}"
            )
        return "\n".join(lines)
