"""Linear-program solving used by every other module.

Thin, deterministic wrapper around ``scipy.optimize.linprog`` (HiGHS).
Problems are minimization over ``A x <= b`` with optional variable
bounds.  Unbounded problems come back with an explicit recession ray so
callers can report unboundedness meaningfully (a best response with no
optimum is game-relevant information, not an error).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from .tolerances import FEAS_TOL


class LpError(Exception):
    pass


class DimensionMismatch(LpError):
    pass


class NumericalFailure(LpError):
    pass


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LinearProgram:
    """min objective @ x  s.t.  a @ x <= b,  lower <= x <= upper."""

    objective: np.ndarray
    a: object  # (m, n) ndarray or scipy sparse
    b: np.ndarray
    lower: np.ndarray | None = None  # -inf where absent
    upper: np.ndarray | None = None  # +inf where absent

    def dims(self) -> tuple[int, int]:
        m = self.a.shape[0] if self.a is not None else 0
        n = len(self.objective)
        return m, n


@dataclass(frozen=True)
class LpOutcome:
    status: LpStatus
    point: np.ndarray | None = None
    value: float | None = None
    ray: np.ndarray | None = None


def _check_dims(lp: LinearProgram) -> None:
    n = len(lp.objective)
    if lp.a is not None and lp.a.shape[0] > 0:
        if lp.a.shape[1] != n:
            raise DimensionMismatch(
                f"A has {lp.a.shape[1]} columns, objective has {n} entries"
            )
        if lp.a.shape[0] != len(lp.b):
            raise DimensionMismatch(
                f"A has {lp.a.shape[0]} rows, b has {len(lp.b)} entries"
            )
    for bound, label in ((lp.lower, "lower"), (lp.upper, "upper")):
        if bound is not None and len(bound) != n:
            raise DimensionMismatch(f"{label} bounds have wrong length")
    if lp.lower is not None and lp.upper is not None:
        both = np.isfinite(lp.lower) & np.isfinite(lp.upper)
        if np.any(lp.lower[both] > lp.upper[both]):
            raise DimensionMismatch("lower bound exceeds upper bound")


def _bounds_list(lp: LinearProgram) -> list[tuple[float | None, float | None]]:
    n = len(lp.objective)
    lo = lp.lower if lp.lower is not None else np.full(n, -np.inf)
    hi = lp.upper if lp.upper is not None else np.full(n, np.inf)
    return [
        (None if not np.isfinite(l) else float(l), None if not np.isfinite(h) else float(h))
        for l, h in zip(lo, hi)
    ]


def _run_highs(c, a, b, bounds):
    kwargs = {}
    if a is not None and a.shape[0] > 0:
        kwargs["A_ub"] = a
        kwargs["b_ub"] = b
    return linprog(c, bounds=bounds, method="highs", **kwargs)


def _recession_ray(lp: LinearProgram) -> np.ndarray:
    """A direction d with A d <= 0, bound-compatible, and objective @ d < 0.

    Exists whenever the LP is feasible and unbounded; found by minimizing
    the objective over the recession cone intersected with a unit box.
    """
    m, n = lp.dims()
    lo = np.full(n, -1.0)
    hi = np.full(n, 1.0)
    if lp.lower is not None:
        lo[np.isfinite(lp.lower)] = 0.0
    if lp.upper is not None:
        hi[np.isfinite(lp.upper)] = 0.0
    a = lp.a if m > 0 else None
    res = _run_highs(lp.objective, a, np.zeros(m), list(zip(lo, hi)))
    if res.status != 0 or res.fun >= -FEAS_TOL:
        raise NumericalFailure("unbounded LP without a certifying ray")
    return np.asarray(res.x, dtype=float)


def solve_lp(lp: LinearProgram) -> LpOutcome:
    _check_dims(lp)
    m, _ = lp.dims()
    a = lp.a if m > 0 else None
    res = _run_highs(np.asarray(lp.objective, dtype=float), a, lp.b, _bounds_list(lp))
    if res.status == 0:
        return LpOutcome(LpStatus.OPTIMAL, point=np.asarray(res.x, dtype=float), value=float(res.fun))
    if res.status == 2:
        return LpOutcome(LpStatus.INFEASIBLE)
    if res.status == 3:
        return LpOutcome(LpStatus.UNBOUNDED, ray=_recession_ray(lp))
    raise NumericalFailure(f"LP backend failed: {res.message}")


def feasible_point(a, b, n: int) -> np.ndarray | None:
    """Some point of {x : a x <= b} (free variables), or None if empty."""
    lp = LinearProgram(np.zeros(n), a, b)
    out = solve_lp(lp)
    return out.point if out.status is LpStatus.OPTIMAL else None
