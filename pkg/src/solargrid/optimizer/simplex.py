"""Dense two-phase primal simplex with Bland's rule."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ..errors import IterationLimit
from .lp import EQ, GE, LE, LPProblem

log = logging.getLogger(__name__)

OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"

PIVOT_TOL = 1e-9
COST_TOL = 1e-9
FEASIBILITY_TOL = 1e-7


@dataclass(frozen=True)
class LPSolution:
    status: str
    scale_factors: np.ndarray = field(default_factory=lambda: np.zeros(0))
    objective_value: float = float("nan")
    dual_values: np.ndarray = field(default_factory=lambda: np.zeros(0))
    iterations: int = 0
    diagnosis: str = ""

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


@dataclass
class _StandardForm:
    """Rows flipped to non-negative rhs, with slack, surplus and artificial columns."""

    a: np.ndarray  # m x (n + slacks + artificials)
    b: np.ndarray
    c: np.ndarray  # original costs padded with zeros
    flip: np.ndarray  # +1 / -1 per row
    n: int
    n_struct: int  # originals + slack/surplus columns
    basis: list


def _standard_form(p: LPProblem) -> _StandardForm:
    m, n = p.n_rows, p.n_vars
    flip = np.where(p.rhs < 0, -1.0, 1.0)
    a = p.coefficients * flip[:, None]
    b = p.rhs * flip
    senses = []
    for s, f in zip(p.senses, flip):
        if f < 0 and s != EQ:
            s = LE if s == GE else GE
        senses.append(s)

    slack_cols, art_rows = [], []
    for i, s in enumerate(senses):
        if s != EQ:
            slack_cols.append((i, 1.0 if s == LE else -1.0))
        if s != LE:
            art_rows.append(i)
    n_struct = n + len(slack_cols)
    total = n_struct + len(art_rows)
    full = np.zeros((m, total))
    full[:, :n] = a
    basis = [-1] * m
    for k, (i, sign) in enumerate(slack_cols):
        full[i, n + k] = sign
        if sign > 0:
            basis[i] = n + k
    for k, i in enumerate(art_rows):
        full[i, n_struct + k] = 1.0
        basis[i] = n_struct + k
    c = np.zeros(total)
    c[:n] = p.objective
    return _StandardForm(full, b, c, flip, n, n_struct, basis)


def _scales(a: np.ndarray, n: int):
    """Column then row equilibration factors for the structural block."""
    m = a.shape[0]
    col = np.ones(a.shape[1])
    if m:
        colmax = np.abs(a[:, :n]).max(axis=0)
        col[:n] = np.where(colmax > 0, 1.0 / np.where(colmax > 0, colmax, 1.0), 1.0)
    scaled = a * col
    rowmax = np.abs(scaled).max(axis=1) if a.shape[1] else np.ones(m)
    row = np.where(rowmax > 0, 1.0 / np.where(rowmax > 0, rowmax, 1.0), 1.0)
    return row, col


class _Tableau:
    def __init__(self, a, b, basis, limit):
        m, total = a.shape
        self.t = np.zeros((m + 1, total + 1))
        self.t[:m, :total] = a
        self.t[:m, -1] = b
        self.basis = list(basis)
        self.active = np.ones(total, dtype=bool)
        self.iterations = 0
        self.limit = limit

    @property
    def m(self):
        return self.t.shape[0] - 1

    def set_costs(self, c):
        self.t[-1, :-1] = c
        self.t[-1, -1] = 0.0
        for i, j in enumerate(self.basis):
            if self.t[-1, j] != 0.0:
                self.t[-1] -= self.t[-1, j] * self.t[i]

    def pivot(self, r, j):
        t = self.t
        t[r] /= t[r, j]
        col = t[:, j].copy()
        col[r] = 0.0
        t -= np.outer(col, t[r])
        t[:, j] = 0.0
        t[r, j] = 1.0
        self.basis[r] = j

    def run(self) -> str:
        """Iterate to optimality; returns OPTIMAL or UNBOUNDED."""
        t = self.t
        while True:
            reduced = t[-1, :-1]
            candidates = np.flatnonzero((reduced < -COST_TOL) & self.active)
            if candidates.size == 0:
                return OPTIMAL
            j = int(candidates[0])  # Bland: lowest-index improving column
            col = t[:-1, j]
            rows = np.flatnonzero(col > PIVOT_TOL)
            if rows.size == 0:
                return UNBOUNDED
            ratios = t[rows, -1] / col[rows]
            best = ratios.min()
            tied = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
            r = int(min(tied, key=lambda i: self.basis[i]))
            if self.iterations >= self.limit:
                raise IterationLimit(
                    f"simplex exceeded {self.limit} pivots without terminating")
            self.pivot(r, j)
            self.iterations += 1


def solve_simplex(p: LPProblem, max_iterations: int | None = None) -> LPSolution:
    """Solve ``p`` with the two-phase primal simplex method.

    Pivoting follows Bland's rule (lowest-index entering column, ratio ties
    broken by lowest basic index) so the method cannot cycle.  Final primal
    and dual values are recomputed from the optimal basis on the unscaled
    problem.
    """
    m = p.n_rows
    diagnosis = _structural_infeasibility(p)
    if diagnosis:
        return LPSolution(INFEASIBLE, diagnosis=diagnosis)

    sf = _standard_form(p)
    total = sf.a.shape[1]
    limit = max_iterations if max_iterations is not None else 10 * (m + total) ** 2

    row_s, col_s = _scales(sf.a, sf.n)
    a_s = (sf.a * col_s) * row_s[:, None]
    b_s = sf.b * row_s
    b_scale = float(np.abs(b_s).max()) if m and np.abs(b_s).max() > 0 else 1.0
    b_s = b_s / b_scale
    # Artificial and slack columns keep unit entries after row scaling.
    for j in range(sf.n, total):
        nz = np.flatnonzero(a_s[:, j])
        if nz.size:
            a_s[nz, j] = np.sign(a_s[nz, j])
    tab = _Tableau(a_s, b_s, sf.basis, limit)

    art = np.arange(sf.n_struct, total)
    if art.size:
        phase1 = np.zeros(total)
        phase1[art] = 1.0
        tab.set_costs(phase1)
        tab.run()  # bounded below by zero, cannot be unbounded
        infeasibility = -tab.t[-1, -1]
        if infeasibility > FEASIBILITY_TOL:
            positive = [p.row_names[i] for i, j in enumerate(tab.basis)
                        if j >= sf.n_struct and tab.t[i, -1] > FEASIBILITY_TOL]
            return LPSolution(
                INFEASIBLE, iterations=tab.iterations,
                diagnosis="no point satisfies all rows; phase-1 residual "
                          f"{infeasibility:.3g} on: {', '.join(positive) or 'n/a'}")
        _drive_out_artificials(tab, sf.n_struct)
        tab.active[art] = False

    c_s = sf.c * col_s
    c_scale = float(np.abs(c_s).max()) if total and np.abs(c_s).max() > 0 else 1.0
    tab.set_costs(c_s / c_scale)
    status = tab.run()
    if status == UNBOUNDED:
        return LPSolution(UNBOUNDED, iterations=tab.iterations,
                          diagnosis="objective decreases without bound")

    x, y = _basis_solution(p, sf, tab)
    return LPSolution(OPTIMAL, x, float(p.objective @ x), y, tab.iterations)


def _structural_infeasibility(p: LPProblem) -> str:
    bad = []
    for name, sense, b, row in zip(p.row_names, p.senses, p.rhs, p.coefficients):
        if np.any(row != 0):
            continue
        if (sense == GE and b > 0) or (sense == LE and b < 0) or (sense == EQ and b != 0):
            bad.append(f"{name} (0 {sense} {b:.6g})")
    if bad:
        return "rows with no contributing variable cannot be met: " + ", ".join(bad)
    return ""


def _drive_out_artificials(tab: _Tableau, n_struct: int) -> None:
    """Pivot zero-level artificials out of the basis; drop rows that are redundant."""
    redundant = []
    for r in range(tab.m):
        if tab.basis[r] < n_struct:
            continue
        row = tab.t[r, :n_struct]
        nz = np.flatnonzero(np.abs(row) > PIVOT_TOL)
        if nz.size:
            tab.pivot(r, int(nz[0]))
        else:
            redundant.append(r)
    if redundant:
        keep = [r for r in range(tab.m) if r not in redundant]
        tab.t = np.vstack([tab.t[keep], tab.t[-1:]])
        tab.basis = [tab.basis[r] for r in keep]
        tab.kept_rows = keep
        log.debug("dropped %d redundant rows", len(redundant))


def _basis_solution(p: LPProblem, sf: _StandardForm, tab: _Tableau):
    rows = getattr(tab, "kept_rows", list(range(p.n_rows)))
    basis = tab.basis
    x_std = np.zeros(sf.a.shape[1])
    y = np.zeros(p.n_rows)
    if rows:
        B = sf.a[np.ix_(rows, basis)]
        x_std[basis] = np.linalg.solve(B, sf.b[rows])
        y[rows] = np.linalg.solve(B.T, sf.c[basis])
    x = x_std[:sf.n]
    # Undo the rhs sign flips so duals refer to the rows as written.
    return x, y * sf.flip


def dual_objective(p: LPProblem, sol: LPSolution) -> float:
    return float(p.rhs @ sol.dual_values)


def duality_gap(p: LPProblem, sol: LPSolution) -> float:
    return abs(sol.objective_value - dual_objective(p, sol))


def certify(p: LPProblem, sol: LPSolution, tol: float = 1e-6) -> bool:
    """Check primal feasibility, dual feasibility and strong duality."""
    if not sol.optimal:
        return False
    x, y = sol.scale_factors, sol.dual_values
    scale = max(1.0, abs(sol.objective_value))
    if duality_gap(p, sol) > tol * scale:
        return False
    if (x < -1e-9).any():
        return False
    lhs = p.coefficients @ x
    for s, l, b, yi in zip(p.senses, lhs, p.rhs, y):
        slack_tol = tol * max(1.0, abs(b))
        if s == GE and (l < b - slack_tol or yi < -tol):
            return False
        if s == LE and (l > b + slack_tol or yi > tol):
            return False
        if s == EQ and abs(l - b) > slack_tol:
            return False
    reduced = p.objective - p.coefficients.T @ y
    return bool((reduced >= -tol * max(1.0, np.abs(p.objective).max(initial=0.0))).all())
