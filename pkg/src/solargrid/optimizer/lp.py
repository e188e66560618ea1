"""Panel-area linear program and its plain-text dump format.

Dump format, one item per line (``#`` starts a comment)::

    var A1 Los Angeles
    var A2 Brasilia
    min 1 1
    row balance_h01 >= 49813.2 : 0.000123 0.000119
    row min_share_Los_Angeles >= 1234.5 : 0.0021 0

``var`` lines name the decision variables in column order, ``min`` lists the
objective coefficients, and every ``row`` gives its name, relation, right-hand
side and dense coefficients.  All variables are bounded below by zero.
Numbers use repr() precision so a dump re-parses to the identical problem.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from ..errors import EmptyScenario

GE, LE, EQ = ">=", "<=", "="


@dataclass(frozen=True)
class ConstraintPolicy:
    min_fraction: float | None = None
    max_fraction: float | None = None

    def __post_init__(self):
        if self.min_fraction is not None and self.min_fraction < 0:
            raise ValueError("min_fraction must be >= 0")
        if self.max_fraction is not None and self.max_fraction <= 0:
            raise ValueError("max_fraction must be > 0")
        if (self.min_fraction is not None and self.max_fraction is not None
                and self.max_fraction <= self.min_fraction):
            raise ValueError("max_fraction must exceed min_fraction")

    def describe(self) -> str:
        lo, hi = self.min_fraction, self.max_fraction
        if lo is None and hi is None:
            return "no per-location constraint"
        parts = []
        if lo is not None:
            parts.append(f"share >= {lo:g}")
        if hi is not None:
            parts.append(f"share <= {hi:g}")
        return " and ".join(parts)


EXPERIMENTS = {
    1: ConstraintPolicy(),
    2: ConstraintPolicy(min_fraction=0.4),
    3: ConstraintPolicy(max_fraction=4.0),
    4: ConstraintPolicy(min_fraction=0.4, max_fraction=4.0),
}


@dataclass(frozen=True)
class LPProblem:
    """minimize c.x subject to rows (A x  sense  b) and x >= 0."""

    objective: np.ndarray
    coefficients: np.ndarray  # m x n
    senses: tuple
    rhs: np.ndarray
    row_names: tuple = ()
    var_names: tuple = ()

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float).reshape(-1)
        a = np.asarray(self.coefficients, dtype=float).reshape(-1, c.size)
        b = np.asarray(self.rhs, dtype=float).reshape(-1)
        if a.shape[0] != b.size or len(self.senses) != b.size:
            raise ValueError("coefficient rows, senses and rhs must have equal length")
        bad = [s for s in self.senses if s not in (GE, LE, EQ)]
        if bad:
            raise ValueError(f"unknown relation {bad[0]!r}")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "coefficients", a)
        object.__setattr__(self, "rhs", b)
        object.__setattr__(self, "senses", tuple(self.senses))
        if not self.row_names:
            object.__setattr__(self, "row_names", tuple(f"r{i + 1}" for i in range(b.size)))
        if not self.var_names:
            object.__setattr__(self, "var_names", tuple(f"x{j + 1}" for j in range(c.size)))

    @property
    def n_vars(self) -> int:
        return self.objective.size

    @property
    def n_rows(self) -> int:
        return self.rhs.size


def _slug(name: str) -> str:
    return re.sub(r"[^0-9A-Za-z]+", "_", name).strip("_") or "loc"


def build_lp(m, policy: ConstraintPolicy, unit_area: float = 1.0) -> LPProblem:
    """Minimum-area LP for a scenario.

    Hourly rows require pooled production to cover pooled consumption; the
    optional per-location rows bound each location's daily production as a
    fraction of its own daily consumption.
    """
    if m.n == 0:
        raise EmptyScenario("scenario has no locations")
    if unit_area <= 0:
        raise ValueError("unit_area must be > 0")
    P, C = m.production, m.consumption
    n = m.n
    rows, senses, rhs, names = [], [], [], []
    hourly_demand = C.sum(axis=1)
    for t in range(24):
        rows.append(P[t])
        senses.append(GE)
        rhs.append(hourly_demand[t])
        names.append(f"balance_h{t + 1:02d}")

    daily_prod = P.sum(axis=0)
    daily_cons = C.sum(axis=0)
    slugs = [_slug(name) for name in m.names]
    for bound, sense, prefix in ((policy.min_fraction, GE, "min_share"),
                                 (policy.max_fraction, LE, "max_share")):
        if bound is None:
            continue
        for i in range(n):
            row = np.zeros(n)
            row[i] = daily_prod[i]
            rows.append(row)
            senses.append(sense)
            rhs.append(bound * daily_cons[i])
            names.append(f"{prefix}_{slugs[i]}")

    return LPProblem(
        objective=np.full(n, float(unit_area)),
        coefficients=np.array(rows),
        senses=tuple(senses),
        rhs=np.array(rhs),
        row_names=tuple(names),
        var_names=tuple(m.names),
    )


def dump_lp(p: LPProblem) -> str:
    lines = ["# minimize objective . A subject to rows, A >= 0"]
    for j, name in enumerate(p.var_names):
        lines.append(f"var A{j + 1} {name}")
    lines.append("min " + " ".join(repr(float(v)) for v in p.objective))
    for name, sense, b, row in zip(p.row_names, p.senses, p.rhs, p.coefficients):
        coeffs = " ".join(repr(float(v)) for v in row)
        lines.append(f"row {name} {sense} {float(b)!r} : {coeffs}")
    return "\n".join(lines) + "\n"


def parse_lp_dump(text: str) -> LPProblem:
    var_names, objective = [], None
    rows, senses, rhs, names = [], [], [], []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kind, _, rest = line.partition(" ")
        if kind == "var":
            _, _, name = rest.partition(" ")
            var_names.append(name)
        elif kind == "min":
            objective = [float(x) for x in rest.split()]
        elif kind == "row":
            head, _, coeffs = rest.partition(":")
            name, sense, b = head.split()
            names.append(name)
            senses.append(sense)
            rhs.append(float(b))
            rows.append([float(x) for x in coeffs.split()])
        else:
            raise ValueError(f"unrecognised LP dump line: {raw!r}")
    if objective is None:
        raise ValueError("LP dump has no objective line")
    return LPProblem(np.array(objective), np.array(rows).reshape(-1, len(objective)),
                     tuple(senses), np.array(rhs), tuple(names), tuple(var_names))
