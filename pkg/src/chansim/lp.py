"""Dense two-phase primal simplex with Farkas infeasibility certificates.

Bland's anti-cycling rule is used throughout, all comparisons run against a
single pivot tolerance, and every verdict is certified: feasible answers
carry a point that satisfies the constraints, infeasible answers carry
multipliers whose re-multiplication yields an impossible inequality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import NumericalBreakdown

PIVOT_TOL = 1e-9
RELAXED_PIVOT_TOL = 1e-11
FEAS_TOL = 1e-8
MAX_ITERS = 100_000

LE, EQ, GE = "<=", "=", ">="


@dataclass
class LinearProgram:
    """min/max c.x subject to rows of (coeffs, relation, rhs).

    Variables are free unless flagged nonnegative; ``objective=None`` asks
    only for feasibility.
    """

    num_vars: int
    constraints: list[tuple[np.ndarray, str, float]] = field(default_factory=list)
    objective: np.ndarray | None = None
    maximize: bool = False
    nonneg: bool | Sequence[bool] = False

    def add(self, coeffs, rel: str, rhs: float) -> None:
        row = np.asarray(coeffs, dtype=float)
        if row.shape != (self.num_vars,):
            raise ValueError(f"coefficient vector has shape {row.shape}, expected ({self.num_vars},)")
        if rel not in (LE, EQ, GE):
            raise ValueError(f"unknown relation {rel!r}")
        if not np.all(np.isfinite(row)) or not np.isfinite(rhs):
            raise ValueError("constraint entries must be finite")
        self.constraints.append((row, rel, float(rhs)))

    def nonneg_flags(self) -> np.ndarray:
        if isinstance(self.nonneg, bool):
            return np.full(self.num_vars, self.nonneg)
        flags = np.asarray(self.nonneg, dtype=bool)
        if flags.shape != (self.num_vars,):
            raise ValueError("nonneg flag vector has the wrong length")
        return flags


@dataclass(frozen=True)
class FarkasCertificate:
    """Multipliers over the constraints, >= 0 on inequalities.

    Applying multiplier i to constraint i written in >=-form (<= rows are
    negated first, = rows keep their sign) combines the system into
    0 >= gap with gap > 0.
    """

    multipliers: np.ndarray

    def combination(self, lp: LinearProgram) -> tuple[np.ndarray, float]:
        combo = np.zeros(lp.num_vars)
        gap = 0.0
        for lam, (row, rel, rhs) in zip(self.multipliers, lp.constraints):
            sign = -1.0 if rel == LE else 1.0
            combo += lam * sign * row
            gap += lam * sign * rhs
        return combo, gap

    def verify(self, lp: LinearProgram, tol: float = FEAS_TOL) -> bool:
        for lam, (_, rel, _) in zip(self.multipliers, lp.constraints):
            if rel != EQ and lam < -tol:
                return False
        combo, gap = self.combination(lp)
        flags = lp.nonneg_flags()
        scale = max(1.0, float(np.max(np.abs(self.multipliers)))) if len(self.multipliers) else 1.0
        ok_free = np.all(np.abs(combo[~flags]) <= tol * scale)
        ok_nonneg = np.all(combo[flags] <= tol * scale)
        return bool(ok_free and ok_nonneg and gap > tol)


@dataclass(frozen=True)
class Optimal:
    x: np.ndarray
    value: float


@dataclass(frozen=True)
class Feasible:
    x: np.ndarray


@dataclass(frozen=True)
class Infeasible:
    certificate: FarkasCertificate


@dataclass(frozen=True)
class Unbounded:
    x: np.ndarray
    ray: np.ndarray


def residuals(lp: LinearProgram, x: np.ndarray) -> float:
    """Largest constraint violation at x (0 means all satisfied)."""
    worst = 0.0
    for row, rel, rhs in lp.constraints:
        val = float(row @ x)
        if rel == LE:
            worst = max(worst, val - rhs)
        elif rel == GE:
            worst = max(worst, rhs - val)
        else:
            worst = max(worst, abs(val - rhs))
    flags = lp.nonneg_flags()
    if flags.any():
        worst = max(worst, float(np.max(np.clip(-x[flags], 0.0, None), initial=0.0)))
    return worst


class _Tableau:
    def __init__(self, lp: LinearProgram):
        self.lp = lp
        flags = lp.nonneg_flags()
        m = len(lp.constraints)
        n = lp.num_vars

        # structural columns: one per nonneg var, a (pos, neg) pair per free var
        self.pos_col = np.empty(n, dtype=int)
        self.neg_col = np.full(n, -1, dtype=int)
        cols = 0
        for v in range(n):
            self.pos_col[v] = cols
            cols += 1
            if not flags[v]:
                self.neg_col[v] = cols
                cols += 1
        self.n_struct = cols
        n_slack = sum(1 for _, rel, _ in lp.constraints if rel != EQ)
        self.n_total = self.n_struct + n_slack + m  # artificials on every row

        a = np.zeros((m, self.n_total))
        b = np.empty(m)
        self.row_sign = np.ones(m)
        slack_idx = self.n_struct
        for i, (row, rel, rhs) in enumerate(lp.constraints):
            for v in range(n):
                a[i, self.pos_col[v]] = row[v]
                if self.neg_col[v] >= 0:
                    a[i, self.neg_col[v]] = -row[v]
            if rel != EQ:
                a[i, slack_idx] = 1.0 if rel == LE else -1.0
                slack_idx += 1
            b[i] = rhs
            if rhs < 0:
                a[i, :] *= -1.0
                b[i] *= -1.0
                self.row_sign[i] = -1.0
        self.art_start = self.n_struct + n_slack
        for i in range(m):
            a[i, self.art_start + i] = 1.0

        self.t = np.hstack([a, b[:, None]])
        self.basis = [self.art_start + i for i in range(m)]
        self.m = m

    def pivot(self, prow: int, pcol: int, obj_rows: list[np.ndarray]) -> None:
        t = self.t
        t[prow] = t[prow] / t[prow, pcol]
        col = t[:, pcol].copy()
        col[prow] = 0.0
        t -= np.outer(col, t[prow])
        for z in obj_rows:
            z -= z[pcol] * t[prow]
        self.basis[prow] = pcol

    def _ratio_row(self, pcol: int, tol: float) -> int | None:
        col = self.t[:self.m, pcol]
        rhs = self.t[:self.m, -1]
        best = None
        for i in range(self.m):
            if col[i] > tol:
                ratio = rhs[i] / col[i]
                if best is None or ratio < best[0] - 1e-12 or (
                    abs(ratio - best[0]) <= 1e-12 and self.basis[i] < self.basis[best[1]]
                ):
                    best = (ratio, i)
        return None if best is None else best[1]

    def run(self, z: np.ndarray, extra: list[np.ndarray], allowed: np.ndarray) -> str:
        """Bland iterations on objective row z; returns 'optimal' or 'unbounded'."""
        for _ in range(MAX_ITERS):
            candidates = np.nonzero((z[:-1] < -PIVOT_TOL) & allowed)[0]
            if len(candidates) == 0:
                return "optimal"
            pcol = int(candidates[0])
            prow = self._ratio_row(pcol, PIVOT_TOL)
            if prow is None:
                prow = self._ratio_row(pcol, RELAXED_PIVOT_TOL)
            if prow is None:
                return "unbounded"
            self.pivot(prow, pcol, [z] + extra)
        raise NumericalBreakdown("simplex iteration limit exceeded")

    def solution(self) -> np.ndarray:
        x_std = np.zeros(self.n_total)
        for i, col in enumerate(self.basis):
            x_std[col] = self.t[i, -1]
        x = x_std[self.pos_col]
        free = self.neg_col >= 0
        x[free] -= x_std[self.neg_col[free]]
        return x


def solve(lp: LinearProgram):
    """Two-phase simplex; returns Optimal, Feasible, Infeasible, or Unbounded."""
    if not lp.constraints:
        x = np.zeros(lp.num_vars)
        if lp.objective is None:
            return Feasible(x=x)
        c = np.asarray(lp.objective, dtype=float)
        if np.any(np.abs(c) > PIVOT_TOL):
            direction = np.sign(c) * (1.0 if lp.maximize else -1.0)
            flags = lp.nonneg_flags()
            direction[flags & (direction < 0)] = 0.0
            if np.any(np.abs(direction) > 0):
                return Unbounded(x=x, ray=direction)
        return Optimal(x=x, value=0.0)

    tab = _Tableau(lp)
    m, n_total = tab.m, tab.n_total

    # phase-1 objective (min sum of artificials), pre-reduced for the
    # artificial basis; the phase-2 row rides along through the pivots
    z1 = np.zeros(n_total + 1)
    z1[:n_total] = -tab.t[:, :n_total].sum(axis=0)
    z1[tab.art_start:n_total] += 1.0
    z1[-1] = -tab.t[:, -1].sum()

    z2 = np.zeros(n_total + 1)
    if lp.objective is not None:
        c = np.asarray(lp.objective, dtype=float)
        sign = -1.0 if lp.maximize else 1.0
        for v in range(lp.num_vars):
            z2[tab.pos_col[v]] = sign * c[v]
            if tab.neg_col[v] >= 0:
                z2[tab.neg_col[v]] = -sign * c[v]

    allowed = np.ones(n_total, dtype=bool)
    status = tab.run(z1, [z2], allowed)
    if status == "unbounded":
        raise NumericalBreakdown("phase 1 reported unbounded; no usable pivot found")
    phase1_value = -z1[-1]
    if phase1_value > FEAS_TOL:
        y = 1.0 - z1[tab.art_start:n_total]
        lams = np.empty(m)
        for i, (_, rel, _) in enumerate(lp.constraints):
            mult = tab.row_sign[i] * y[i]
            lams[i] = -mult if rel == LE else mult
        for i, (_, rel, _) in enumerate(lp.constraints):
            if rel != EQ and -PIVOT_TOL * 10 < lams[i] < 0:
                lams[i] = 0.0
        cert = FarkasCertificate(multipliers=lams)
        if not cert.verify(lp):
            raise NumericalBreakdown("infeasibility certificate failed re-verification")
        return Infeasible(certificate=cert)

    # drive artificials out of the basis; redundant rows stay with a zeroed row
    for i in range(m):
        if tab.basis[i] >= tab.art_start:
            row = tab.t[i, : tab.art_start]
            pivots = np.nonzero(np.abs(row) > PIVOT_TOL)[0]
            if len(pivots):
                tab.pivot(i, int(pivots[0]), [z1, z2])

    allowed = np.zeros(n_total, dtype=bool)
    allowed[: tab.art_start] = True

    if lp.objective is None:
        x = tab.solution()
        _check_point(lp, x)
        return Feasible(x=x)

    status = tab.run(z2, [z1], allowed)
    if status == "unbounded":
        candidates = np.nonzero((z2[:-1] < -PIVOT_TOL) & allowed)[0]
        pcol = int(candidates[0])
        ray_std = np.zeros(n_total)
        ray_std[pcol] = 1.0
        for i, col in enumerate(tab.basis):
            ray_std[col] = -tab.t[i, pcol]
        ray = ray_std[tab.pos_col]
        free = tab.neg_col >= 0
        ray -= np.where(free, ray_std[np.clip(tab.neg_col, 0, None)], 0.0)
        x = tab.solution()
        _check_point(lp, x)
        return Unbounded(x=x, ray=ray)

    x = tab.solution()
    _check_point(lp, x)
    value = float(np.asarray(lp.objective, dtype=float) @ x)
    return Optimal(x=x, value=value)


def _check_point(lp: LinearProgram, x: np.ndarray) -> None:
    worst = residuals(lp, x)
    if worst > FEAS_TOL:
        raise NumericalBreakdown(f"solver point violates constraints by {worst:.3e}")
