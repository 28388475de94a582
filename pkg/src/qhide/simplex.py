"""Dense two-phase tableau simplex with Bland's rule.

Small and deliberately boring: the optimization problems in this package have
at most a few hundred rows and columns, so a dense tableau with anti-cycling
pivoting is fast enough and easy to audit.  Variables are nonnegative; callers
split free variables into differences themselves.

Long pivot sequences on ill-conditioned cut collections drift numerically, so
the tableau is periodically rebuilt from the pristine constraint data for the
current basis, and termination is only accepted on a freshly rebuilt tableau.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-9
MAX_PIVOTS = 200_000
REFACTOR_EVERY = 40
BLAND_AFTER = 60  # consecutive degenerate pivots before anti-cycling kicks in


@dataclass(frozen=True)
class LpResult:
    status: str  # "optimal" | "unbounded" | "infeasible"
    objective: float | None
    x: np.ndarray | None
    ray: np.ndarray | None  # improving direction when unbounded


def _pivot(tab: np.ndarray, basis: np.ndarray, row: int, col: int) -> None:
    tab[row] /= tab[row, col]
    mask = np.abs(tab[:, col]) > 0.0
    mask[row] = False
    tab[mask] -= np.outer(tab[mask, col], tab[row])
    basis[row] = col


class _Refactorizer:
    """Rebuilds the tableau for the current basis from the original data."""

    def __init__(self, a: np.ndarray, b: np.ndarray, cost: np.ndarray):
        self.a = a
        self.b = b
        self.cost = cost  # full-width objective coefficients (maximization)

    def refresh(self, tab: np.ndarray, basis: np.ndarray) -> bool:
        m = tab.shape[0] - 1
        ncols = self.a.shape[1]
        try:
            sol = np.linalg.solve(
                self.a[:, basis], np.hstack([self.a, self.b[:, None]])
            )
        except np.linalg.LinAlgError:
            return False
        rhs = sol[:, -1]
        if rhs.min() < -1e-7:
            return False  # basis inconsistent with the data; keep the tableau
        tab[:m, :ncols] = sol[:, :ncols]
        tab[:m, -1] = np.maximum(rhs, 0.0)
        cb = self.cost[basis]
        tab[m, :ncols] = cb @ tab[:m, :ncols] - self.cost
        tab[m, -1] = cb @ tab[:m, -1]
        return True


def _run(
    tab: np.ndarray,
    basis: np.ndarray,
    ncols: int,
    tol: float,
    refac: _Refactorizer | None = None,
) -> tuple[str, int]:
    """Iterate simplex pivots on a priced-out tableau; returns (status, entering).

    Pricing is Dantzig (most negative reduced cost) while the objective moves,
    switching to Bland's lowest-index rule after a run of degenerate pivots so
    cycling cannot occur; an improving pivot switches back.
    """
    m = tab.shape[0] - 1
    since_refresh = 0
    degenerate_run = 0
    for _ in range(MAX_PIVOTS):
        obj = tab[m, :ncols]
        candidates = np.flatnonzero(obj < -tol)
        if candidates.size == 0:
            if refac is None or since_refresh == 0:
                return "optimal", -1
            refac.refresh(tab, basis)
            since_refresh = 0
            continue
        if degenerate_run >= BLAND_AFTER:
            enter = int(candidates[0])
        else:
            enter = int(candidates[np.argmin(obj[candidates])])
        col = tab[:m, enter]
        best, best_row = None, -1
        for i in range(m):
            if col[i] > tol:
                ratio = tab[i, -1] / col[i]
                if best is None or ratio < best - tol or (
                    abs(ratio - best) <= tol and basis[i] < basis[best_row]
                ):
                    best, best_row = ratio, i
        if best_row < 0:
            return "unbounded", enter
        before = tab[m, -1]
        _pivot(tab, basis, best_row, enter)
        degenerate_run = 0 if tab[m, -1] > before + tol else degenerate_run + 1
        since_refresh += 1
        if refac is not None and since_refresh >= REFACTOR_EVERY:
            refac.refresh(tab, basis)
            since_refresh = 0
    raise RuntimeError("simplex pivot limit exceeded")


def solve_lp(
    c,
    a_ub=None,
    b_ub=None,
    a_eq=None,
    b_eq=None,
    maximize: bool = True,
    tol: float = DEFAULT_TOL,
) -> LpResult:
    """Optimize c.x subject to a_ub x <= b_ub, a_eq x = b_eq, x >= 0."""
    c = np.asarray(c, dtype=float)
    n = c.size
    a_ub = np.zeros((0, n)) if a_ub is None else np.atleast_2d(np.asarray(a_ub, dtype=float))
    b_ub = np.zeros(0) if b_ub is None else np.atleast_1d(np.asarray(b_ub, dtype=float))
    a_eq = np.zeros((0, n)) if a_eq is None else np.atleast_2d(np.asarray(a_eq, dtype=float))
    b_eq = np.zeros(0) if b_eq is None else np.atleast_1d(np.asarray(b_eq, dtype=float))
    if a_ub.shape != (b_ub.size, n) or a_eq.shape != (b_eq.size, n):
        raise ValueError("constraint shapes do not match")
    if not maximize:
        inner = solve_lp(-c, a_ub, b_ub, a_eq, b_eq, maximize=True, tol=tol)
        obj = None if inner.objective is None else -inner.objective
        return LpResult(inner.status, obj, inner.x, inner.ray)

    mu, me = b_ub.size, b_eq.size
    m = mu + me
    slack = np.vstack([np.eye(mu), np.zeros((me, mu))])
    a = np.hstack([np.vstack([a_ub, a_eq]), slack])
    b = np.concatenate([b_ub, b_eq])
    neg = b < 0
    a[neg] *= -1.0
    b[neg] = -b[neg]

    ncols = n + mu
    basis = np.full(m, -1, dtype=int)
    needs_art = [i for i in range(mu) if neg[i]] + list(range(mu, m))
    for i in range(mu):
        if not neg[i]:
            basis[i] = n + i
    if needs_art:
        art = np.zeros((m, len(needs_art)))
        for k, i in enumerate(needs_art):
            art[i, k] = 1.0
            basis[i] = ncols + k
        a = np.hstack([a, art])
    total = a.shape[1]

    tab = np.zeros((m + 1, total + 1))
    tab[:m, :total] = a
    tab[:m, -1] = b
    rows_kept = np.arange(m)

    if needs_art:
        # phase 1: maximize minus the sum of artificials
        c1 = np.zeros(total)
        c1[ncols:] = -1.0
        tab[m, :total] = -c1
        for i in range(m):
            if basis[i] >= ncols:
                tab[m] += c1[basis[i]] * tab[i]
        status, _ = _run(tab, basis, total, tol, _Refactorizer(a, b, c1))
        if status != "optimal" or tab[m, -1] < -1e-7:
            return LpResult("infeasible", None, None, None)
        for i in range(m):
            if basis[i] >= ncols:  # drive a zero-valued artificial out
                js = np.flatnonzero(np.abs(tab[i, :ncols]) > tol)
                if js.size:
                    _pivot(tab, basis, i, int(js[0]))
        keep = [i for i in range(m) if basis[i] < ncols]  # rows left on an artificial are redundant
        new_tab = np.zeros((len(keep) + 1, ncols + 1))
        for r, i in enumerate(keep):
            new_tab[r, :ncols] = tab[i, :ncols]
            new_tab[r, -1] = tab[i, -1]
        tab = new_tab
        basis = basis[keep]
        rows_kept = rows_kept[keep]
        m = len(keep)

    c_ext = np.concatenate([c, np.zeros(mu)])
    tab[m, :ncols] = -c_ext
    tab[m, -1] = 0.0
    for i in range(m):
        if c_ext[basis[i]] != 0.0:
            tab[m] += c_ext[basis[i]] * tab[i]

    refac = _Refactorizer(a[rows_kept][:, :ncols], b[rows_kept], c_ext)
    refac.refresh(tab, basis)
    status, enter = _run(tab, basis, ncols, tol, refac)
    if status == "unbounded":
        ray = np.zeros(ncols)
        ray[enter] = 1.0
        for i in range(m):
            ray[basis[i]] = -tab[i, enter]
        return LpResult("unbounded", None, None, ray[:n].copy())

    x = np.zeros(ncols)
    for i in range(m):
        x[basis[i]] = tab[i, -1]
    return LpResult("optimal", float(c_ext @ x), x[:n].copy(), None)
