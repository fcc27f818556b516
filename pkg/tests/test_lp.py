import numpy as np
import pytest

from epecnash.lp import (
    DimensionMismatch,
    LinearProgram,
    LpStatus,
    solve_lp,
)
from epecnash.rng import Lcg


def test_single_variable_box():
    lp = LinearProgram(
        objective=np.array([1.0]),
        a=np.array([[-1.0], [1.0]]),
        b=np.array([-1.0, 3.0]),
    )
    out = solve_lp(lp)
    assert out.status is LpStatus.OPTIMAL
    assert out.point == pytest.approx([1.0], abs=1e-7)
    assert out.value == pytest.approx(1.0, abs=1e-7)


def test_recession_direction():
    lp = LinearProgram(
        objective=np.array([-1.0]),
        a=np.array([[-1.0]]),
        b=np.array([0.0]),
    )
    out = solve_lp(lp)
    assert out.status is LpStatus.UNBOUNDED
    assert out.ray is not None
    assert out.ray[0] > 0
    # A ray must stay feasible and strictly decrease the objective.
    assert (lp.a @ out.ray <= 1e-9).all()
    assert lp.objective @ out.ray < 0


def test_equality_pair_system():
    # min x1 + x2 s.t. x1 + x2 >= 2, x1 - x2 = 0, x >= 0.
    # By hand: x1 = x2 = t with 2t >= 2 gives t = 1, value 2.
    a = np.array(
        [
            [-1.0, -1.0],
            [1.0, -1.0],
            [-1.0, 1.0],
            [-1.0, 0.0],
            [0.0, -1.0],
        ]
    )
    b = np.array([-2.0, 0.0, 0.0, 0.0, 0.0])
    out = solve_lp(LinearProgram(np.array([1.0, 1.0]), a, b))
    assert out.status is LpStatus.OPTIMAL
    assert out.point == pytest.approx([1.0, 1.0], abs=1e-7)
    assert out.value == pytest.approx(2.0, abs=1e-7)


def test_infeasible():
    a = np.array([[1.0], [-1.0]])
    b = np.array([0.0, -1.0])  # x <= 0 and x >= 1
    out = solve_lp(LinearProgram(np.array([0.0]), a, b))
    assert out.status is LpStatus.INFEASIBLE


def test_bounds_and_feasibility_margin():
    n, m = 4, 6
    rng = Lcg(7)
    a = np.array([[rng.uniform(-2, 2) for _ in range(n)] for _ in range(m)])
    x0 = np.array([rng.uniform(-1, 1) for _ in range(n)])
    b = a @ x0 + 1.0  # interior point keeps it feasible
    lp = LinearProgram(
        objective=np.array([rng.uniform(-1, 1) for _ in range(n)]),
        a=a,
        b=b,
        lower=np.full(n, -5.0),
        upper=np.full(n, 5.0),
    )
    out = solve_lp(lp)
    assert out.status is LpStatus.OPTIMAL
    assert (a @ out.point - b).max() <= 1e-7
    assert out.point.min() >= -5 - 1e-7 and out.point.max() <= 5 + 1e-7


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        solve_lp(LinearProgram(np.zeros(2), np.zeros((1, 3)), np.zeros(1)))
    with pytest.raises(DimensionMismatch):
        solve_lp(LinearProgram(np.zeros(2), np.zeros((2, 2)), np.zeros(1)))


def test_determinism():
    rng = Lcg(11)
    a = np.array([[rng.uniform(-1, 1) for _ in range(5)] for _ in range(8)])
    b = a @ np.zeros(5) + 1.0
    c = np.array([rng.uniform(-1, 1) for _ in range(5)])
    lp = LinearProgram(c, a, b, lower=np.full(5, -3.0), upper=np.full(5, 3.0))
    first = solve_lp(lp)
    second = solve_lp(lp)
    assert first.value == second.value
    assert (first.point == second.point).all()


def _dual_of(c, a, b):
    """Dual of min c x s.t. a x <= b (free x): max b'y s.t. a'y = c, y <= 0.

    Returned in the same <=-form so solve_lp can run it.
    """
    m, n = a.shape
    obj = -b  # max b'y == min -b'y
    rows = np.vstack([a.T, -a.T, np.eye(m)])
    rhs = np.concatenate([c, -c, np.zeros(m)])
    return LinearProgram(obj, rows, rhs)


def test_duality_spot_check():
    hits = 0
    for seed in range(40):
        rng = Lcg(1000 + seed)
        n = 2 + rng.randint(4)
        m = 2 + rng.randint(4)
        a = np.array([[rng.uniform(-2, 2) for _ in range(n)] for _ in range(m)])
        x0 = np.array([rng.uniform(-1, 1) for _ in range(n)])
        b = a @ x0 + np.array([rng.uniform(0.1, 2) for _ in range(m)])
        c = np.array([rng.uniform(-1, 1) for _ in range(n)])
        # box rows keep the primal bounded without variable bounds
        a_full = np.vstack([a, np.eye(n), -np.eye(n)])
        b_full = np.concatenate([b, np.full(n, 4.0), np.full(n, 4.0)])
        primal = solve_lp(LinearProgram(c, a_full, b_full))
        assert primal.status is LpStatus.OPTIMAL
        dual = solve_lp(_dual_of(c, a_full, b_full))
        assert dual.status is LpStatus.OPTIMAL
        assert primal.value == pytest.approx(-dual.value, abs=1e-7)
        hits += 1
    assert hits == 40
