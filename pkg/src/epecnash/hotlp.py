"""Incremental LP used by the branch-and-bound inner loops.

One HiGHS model is built per search; every tree node differs from the
base relaxation only in row/column *bounds* (a pinned complementarity
side turns a one-sided row into an equation; a branched convex weight
turns into a fixed column).  Bound edits plus warm-started re-solves
are orders of magnitude cheaper than rebuilding the LP per node.

Backed by the HiGHS bindings vendored with SciPy; falls back to
``scipy.optimize.linprog`` model rebuilds if that private module ever
disappears.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .lp import LpStatus, NumericalFailure

try:  # vendored highspy (scipy >= 1.15)
    import scipy.optimize._highspy._core as _hc

    _HAVE_HIGHS = True
except ImportError:  # pragma: no cover - exercised only on old scipy
    _hc = None
    _HAVE_HIGHS = False

INF = 1e30


class RangedLp:
    """min c x  s.t.  row_lo <= A x <= row_hi,  col_lo <= x <= col_hi."""

    def __init__(self, objective, a, row_lo, row_hi, col_lo=None, col_hi=None):
        self.n = len(objective)
        self.m = a.shape[0]
        self._a = sp.csr_matrix(a)
        self._base_row = (np.asarray(row_lo, float).copy(), np.asarray(row_hi, float).copy())
        self._base_col = (
            np.full(self.n, -INF) if col_lo is None else np.asarray(col_lo, float).copy(),
            np.full(self.n, INF) if col_hi is None else np.asarray(col_hi, float).copy(),
        )
        self._touched_rows: set[int] = set()
        self._touched_cols: set[int] = set()
        self._objective = np.asarray(objective, float).copy()
        if not _HAVE_HIGHS:  # pragma: no cover
            raise NumericalFailure("incremental LP backend unavailable")
        lp = _hc.HighsLp()
        lp.num_col_ = self.n
        lp.num_row_ = self.m
        lp.col_cost_ = self._objective
        lp.col_lower_ = self._base_col[0].copy()
        lp.col_upper_ = self._base_col[1].copy()
        lp.row_lower_ = self._base_row[0].copy()
        lp.row_upper_ = self._base_row[1].copy()
        lp.a_matrix_.format_ = _hc.MatrixFormat.kRowwise
        lp.a_matrix_.start_ = self._a.indptr.astype(np.int64)
        lp.a_matrix_.index_ = self._a.indices.astype(np.int64)
        lp.a_matrix_.value_ = self._a.data.astype(float)
        self._h = _hc._Highs()
        self._h.setOptionValue("output_flag", False)
        self._h.setOptionValue("threads", 1)
        self._h.setOptionValue("random_seed", 0)
        if self._h.passModel(lp) == _hc.HighsStatus.kError:
            raise NumericalFailure("could not build incremental LP")

    # -- node edits ----------------------------------------------------
    def reset(self) -> None:
        for r in self._touched_rows:
            self._h.changeRowBounds(r, self._base_row[0][r], self._base_row[1][r])
        for c in self._touched_cols:
            self._h.changeColBounds(c, self._base_col[0][c], self._base_col[1][c])
        self._touched_rows.clear()
        self._touched_cols.clear()

    def pin_row(self, r: int, lo: float, hi: float) -> None:
        self._h.changeRowBounds(r, lo, hi)
        self._touched_rows.add(r)

    def pin_col(self, c: int, lo: float, hi: float) -> None:
        self._h.changeColBounds(c, max(lo, -INF), min(hi, INF))
        self._touched_cols.add(c)

    def set_objective(self, c: np.ndarray) -> None:
        self._objective = np.asarray(c, float).copy()
        self._h.changeColsCost(
            self.n, np.arange(self.n, dtype=np.int64), self._objective
        )

    # -- solving --------------------------------------------------------
    def solve(self):
        """(status, point, value); point/value only when optimal."""
        self._h.run()
        status = self._h.getModelStatus()
        if status in (
            _hc.HighsModelStatus.kUnknown,
            _hc.HighsModelStatus.kIterationLimit,
        ):
            # a stale warm basis can defeat the solve; retry cold, then
            # without presolve
            self._h.clearSolver()
            self._h.run()
            status = self._h.getModelStatus()
            if status in (
                _hc.HighsModelStatus.kUnknown,
                _hc.HighsModelStatus.kIterationLimit,
            ):
                self._h.setOptionValue("presolve", "off")
                self._h.clearSolver()
                self._h.run()
                status = self._h.getModelStatus()
                self._h.setOptionValue("presolve", "choose")
        if status == _hc.HighsModelStatus.kOptimal:
            x = np.array(self._h.getSolution().col_value)
            return LpStatus.OPTIMAL, x, float(self._h.getObjectiveValue())
        if status == _hc.HighsModelStatus.kInfeasible:
            return LpStatus.INFEASIBLE, None, None
        if status == _hc.HighsModelStatus.kUnbounded:
            return LpStatus.UNBOUNDED, None, None
        if status == _hc.HighsModelStatus.kUnboundedOrInfeasible:
            return (
                (LpStatus.UNBOUNDED, None, None)
                if self._feasible_with_zero_objective()
                else (LpStatus.INFEASIBLE, None, None)
            )
        raise NumericalFailure(f"incremental LP ended with status {status}")

    def _feasible_with_zero_objective(self) -> bool:
        saved = self._objective.copy()
        self.set_objective(np.zeros(self.n))
        self._h.run()
        feasible = self._h.getModelStatus() == _hc.HighsModelStatus.kOptimal
        self.set_objective(saved)
        return feasible

    def feasible_point(self):
        """A point of the current node system, or None."""
        saved = self._objective.copy()
        self.set_objective(np.zeros(self.n))
        status, x, _ = self.solve()
        self.set_objective(saved)
        return x if status is LpStatus.OPTIMAL else None
