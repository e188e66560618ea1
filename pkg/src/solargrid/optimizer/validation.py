"""Re-check an LP solution against the raw scenario matrices."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from ..pv import M2_TO_FT2
from ..scenario import ScenarioMatrices, fmt6
from .lp import ConstraintPolicy

REL_TOL = 1e-6

SCALE_FACTORS_HEADER = ("location", "scale_factor_m2", "area_ft2", "energy_share")


@dataclass
class ValidationReport:
    surplus: list  # MWh per hour, hour 1 first
    min_slack_hour: int  # 1-based
    min_slack: float
    shares: list  # per location; nan where the location consumes nothing
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def _ok(lhs: float, rhs: float, sense: str) -> bool:
    tol = REL_TOL * max(1.0, abs(rhs))
    return lhs >= rhs - tol if sense == ">=" else lhs <= rhs + tol


def validate_solution(m: ScenarioMatrices, sol, policy: ConstraintPolicy) -> ValidationReport:
    """Recompute every constraint from the matrices.

    ``sol`` is an optimal LPSolution or a plain sequence of scale factors.
    """
    if hasattr(sol, "status"):
        if not sol.optimal:
            raise ValueError(f"cannot validate a {sol.status} solution")
        areas = np.asarray(sol.scale_factors, dtype=float)
    else:
        areas = np.asarray(sol, dtype=float)

    violations = []
    surplus = []
    for t in range(24):
        demand = float(sum(m.consumption[t, i] for i in range(m.n)))
        supply = float(sum(m.production[t, i] * areas[i] for i in range(m.n)))
        surplus.append(supply - demand)
        if not _ok(supply, demand, ">="):
            violations.append(f"hour {t + 1}: production {supply:.6g} MWh below "
                              f"consumption {demand:.6g} MWh")
    for i, a in enumerate(areas):
        if a < -1e-9:
            violations.append(f"{m.names[i]}: negative scale factor {a:.6g}")

    shares = []
    for i in range(m.n):
        produced = float(m.production[:, i].sum() * areas[i])
        consumed = float(m.consumption[:, i].sum())
        shares.append(produced / consumed if consumed > 0 else math.nan)
        for bound, sense, label in ((policy.min_fraction, ">=", "minimum"),
                                    (policy.max_fraction, "<=", "maximum")):
            if bound is not None and not _ok(produced, bound * consumed, sense):
                violations.append(f"{m.names[i]}: energy share {shares[-1]:.6g} breaks "
                                  f"{label} {bound:g}")

    worst = int(np.argmin(surplus))
    return ValidationReport(surplus, worst + 1, surplus[worst], shares, violations)


def scale_factors_csv(m: ScenarioMatrices, areas, shares, unit_area: float = 1.0) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SCALE_FACTORS_HEADER)
    for name, a, share in zip(m.names, areas, shares):
        a = max(0.0, float(a))
        writer.writerow([name, fmt6(a), fmt6(a * unit_area * M2_TO_FT2), fmt6(share)])
    return buf.getvalue()
