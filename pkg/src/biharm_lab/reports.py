"""Verification reports: margin fields reduced to deterministic pass/fail.

A check passes when its minimum margin over the trimmed interior stays above
-tol * scale.  Reports keep the full margin field for serialization but all
statistics (min, argmin, pass) are taken over the trimmed region.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grids import TRIM_NODES, Field

#: margins built from first-order quantities (values, first derivatives)
TOL_FIRST_ORDER = 1e-8
#: margins involving a Laplacian of a derived field (two extra derivative orders)
TOL_SECOND_ORDER = 1e-6


@dataclass
class VerificationReport:
    """Outcome of one pointwise inequality check."""

    inequality: str
    params: dict
    passed: bool | None
    min_margin: float
    argmin_r: float
    tol: float
    scale: float
    margin: Field | None = None
    refinement_order: float | None = None
    caveats: list[str] = field(default_factory=list)
    argmin_t: float | None = None
    two_sided: bool = False

    def recheck(self, tol: float):
        """Re-evaluate pass/fail under an overridden tolerance."""
        self.tol = tol
        if self.passed is None:
            return
        if self.two_sided:
            self.passed = bool(abs(self.min_margin) <= tol * self.scale)
        else:
            self.passed = bool(self.min_margin >= -tol * self.scale)

    def to_dict(self) -> dict:
        out = {
            "inequality": self.inequality,
            "params": dict(self.params),
            "pass": self.passed,
            "min_margin": self.min_margin,
            "argmin_r": self.argmin_r,
            "tol": self.tol,
            "scale": self.scale,
            "refinement_order": self.refinement_order,
            "caveats": list(self.caveats),
        }
        if self.argmin_t is not None:
            out["argmin_t"] = self.argmin_t
        return out

    def margin_csv_rows(self):
        if self.margin is None:
            return iter(())
        return self.margin.csv_rows()


def report_from_margin(inequality: str, margin: Field, tol: float, scale: float,
                       params: dict, caveats: list[str] | None = None,
                       trim: int = TRIM_NODES, two_sided: bool = False) -> VerificationReport:
    """Reduce a margin field to a report over the trimmed interior.

    ``two_sided`` checks |margin| <= tol * scale (identity checks) instead of
    the one-sided margin >= -tol * scale.
    """
    sl = margin.grid.trim_slice(trim)
    vals = margin.values[sl]
    r = margin.grid.r[sl]
    if two_sided:
        idx = int(np.argmax(np.abs(vals)))
        worst = float(vals[idx])
        ok = abs(worst) <= tol * scale
    else:
        idx = int(np.argmin(vals))
        worst = float(vals[idx])
        ok = worst >= -tol * scale
    return VerificationReport(
        inequality=inequality, params=params, passed=bool(ok),
        min_margin=worst, argmin_r=float(r[idx]), tol=tol, scale=scale,
        margin=margin, caveats=list(caveats or []), two_sided=two_sided)
