"""Simultaneous games of convex-quadratic players over polyhedra.

Each player i solves

    min  1/2 v_i' Q_i v_i + (c_i + K_i [v_{-i}; pi])' v_i
    s.t. A_i v_i <= b_i  (- P_i x  when parameterized by an external x)

optionally tied together by shared market-clearing equalities whose
free multipliers ``pi`` act as prices the players take as given (the
"invisible hand": the clearing rows are the stationarity conditions of
a fictitious price-setting agent, so the game stays a standard Nash
game).  Stacking every player's KKT system yields one complementarity
set whose solutions are exactly the game's pure equilibria.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .lp import DimensionMismatch, LpError, LpStatus
from .polyhedra import BinaryVar, ComplementaritySet, Deadline, optimize_over_set


class NonPsdObjective(ValueError):
    pass


def _as_csr(mat) -> sp.csr_matrix:
    return mat.tocsr() if sp.issparse(mat) else sp.csr_matrix(np.atleast_2d(mat))


@dataclass(frozen=True)
class QuadraticPlayer:
    """One player's data.

    ``coupling`` maps the concatenation of *all* players' strategy
    blocks followed by the market-price block to this player's linear
    objective coefficients; its own block must be zero.  ``param_obj``
    and ``param_rhs`` carry the simple parameterization in an external
    decision x: an objective shift ``(param_obj x)' v`` and a right-hand
    side shift ``A v <= b - param_rhs x``.
    """

    c: np.ndarray
    a: object
    b: np.ndarray
    q: np.ndarray | None = None
    coupling: object | None = None
    param_obj: object | None = None
    param_rhs: object | None = None

    @property
    def n(self) -> int:
        return len(self.c)

    @property
    def m(self) -> int:
        return self.a.shape[0]

    def __post_init__(self):
        if self.a.shape[1] != self.n:
            raise DimensionMismatch("player constraint columns != variable count")
        if self.a.shape[0] != len(self.b):
            raise DimensionMismatch("player A/b mismatch")
        if self.q is not None:
            qm = np.asarray(self.q, dtype=float)
            if qm.shape != (self.n, self.n):
                raise DimensionMismatch("Q must be square over the player's variables")
            if np.abs(qm - qm.T).max() > 1e-9:
                raise NonPsdObjective("Q must be symmetric")
            if qm.size and np.linalg.eigvalsh(qm).min() < -1e-8:
                raise NonPsdObjective("Q must be positive semidefinite")


@dataclass(frozen=True)
class PolyhedralNashGame:
    """Players plus optional shared clearing equalities over their blocks."""

    players: tuple[QuadraticPlayer, ...]
    clearing: object | None = None  # (n_mkt, sum n_i) rows; equality = 0
    n_param: int = 0

    @property
    def strategy_dim(self) -> int:
        return sum(p.n for p in self.players)

    @property
    def n_market(self) -> int:
        return 0 if self.clearing is None else self.clearing.shape[0]

    def __post_init__(self):
        width = self.strategy_dim + self.n_market
        for p in self.players:
            if p.coupling is not None and p.coupling.shape != (p.n, width):
                raise DimensionMismatch(
                    "coupling must span all strategy blocks plus market prices"
                )
            if p.param_obj is not None and p.param_obj.shape != (p.n, self.n_param):
                raise DimensionMismatch("param_obj shape mismatch")
            if p.param_rhs is not None and p.param_rhs.shape != (p.m, self.n_param):
                raise DimensionMismatch("param_rhs shape mismatch")
        if self.clearing is not None and self.clearing.shape[1] != self.strategy_dim:
            raise DimensionMismatch("clearing rows must span the strategy blocks")


@dataclass(frozen=True)
class KktLayout:
    """Positions of the blocks inside the stacked KKT variable vector."""

    n_param: int
    var_slices: tuple[slice, ...]
    mult_slices: tuple[slice, ...]
    market_slice: slice
    total: int

    def strategies(self, w: np.ndarray) -> list[np.ndarray]:
        return [np.asarray(w[s]) for s in self.var_slices]

    def market(self, w: np.ndarray) -> np.ndarray:
        return np.asarray(w[self.market_slice])


def kkt_layout(g: PolyhedralNashGame) -> KktLayout:
    pos = g.n_param
    var_slices = []
    for p in g.players:
        var_slices.append(slice(pos, pos + p.n))
        pos += p.n
    mult_slices = []
    for p in g.players:
        mult_slices.append(slice(pos, pos + p.m))
        pos += p.m
    market = slice(pos, pos + g.n_market)
    return KktLayout(
        n_param=g.n_param,
        var_slices=tuple(var_slices),
        mult_slices=tuple(mult_slices),
        market_slice=market,
        total=pos + g.n_market,
    )


def kkt_lcp(g: PolyhedralNashGame) -> ComplementaritySet:
    """Stacked stationarity + primal feasibility + complementary slackness.

    Variables: [external parameter | strategies | multipliers | prices].
    Every constraint multiplier is complementary to its row slack; the
    stationarity and clearing equalities enter as inequality pairs.
    """
    set_, _ = kkt_system(g)
    return set_


def kkt_system(g: PolyhedralNashGame) -> tuple[ComplementaritySet, KktLayout]:
    lay = kkt_layout(g)
    total = lay.total
    width = g.strategy_dim + g.n_market

    a_blocks = []
    b_parts = []
    for i, p in enumerate(g.players):
        stat = sp.lil_matrix((p.n, total))
        if p.q is not None and np.any(p.q):
            stat[:, lay.var_slices[i]] = p.q
        if p.coupling is not None:
            coup = _as_csr(p.coupling)
            strat = coup[:, : g.strategy_dim]
            offset = lay.var_slices[0].start
            stat[:, offset : offset + g.strategy_dim] += strat
            if g.n_market:
                stat[:, lay.market_slice] += coup[:, g.strategy_dim :]
        if p.param_obj is not None:
            stat[:, : g.n_param] += p.param_obj
        stat[:, lay.mult_slices[i]] = _as_csr(p.a).T
        stat = sp.csr_matrix(stat)
        a_blocks += [stat, -stat]
        b_parts += [-np.asarray(p.c, dtype=float), np.asarray(p.c, dtype=float)]

    if g.n_market:
        rows = sp.lil_matrix((g.n_market, total))
        offset = lay.var_slices[0].start
        rows[:, offset : offset + g.strategy_dim] = g.clearing
        rows = sp.csr_matrix(rows)
        a_blocks += [rows, -rows]
        b_parts += [np.zeros(g.n_market), np.zeros(g.n_market)]

    a = sp.vstack(a_blocks, format="csr")
    b = np.concatenate(b_parts)

    m_blocks = []
    q_parts = []
    comp: list[int] = []
    for i, p in enumerate(g.players):
        mrows = sp.lil_matrix((p.m, total))
        mrows[:, lay.var_slices[i]] = -_as_csr(p.a)
        if p.param_rhs is not None:
            mrows[:, : g.n_param] = -p.param_rhs
        m_blocks.append(sp.csr_matrix(mrows))
        q_parts.append(np.asarray(p.b, dtype=float))
        comp.extend(range(lay.mult_slices[i].start, lay.mult_slices[i].stop))

    if m_blocks:
        m_mat = sp.vstack(m_blocks, format="csr")
        q = np.concatenate(q_parts)
    else:
        m_mat = sp.csr_matrix((0, total))
        q = np.zeros(0)

    assert width == g.strategy_dim + g.n_market
    return ComplementaritySet(a=a, b=b, m_mat=m_mat, q=q, comp=tuple(comp)), lay


@dataclass(frozen=True)
class PneOutcome:
    found: bool
    point: np.ndarray | None = None
    layout: KktLayout | None = None

    def strategies(self) -> list[np.ndarray]:
        return self.layout.strategies(self.point)

    def market(self) -> np.ndarray:
        return self.layout.market(self.point)


def find_pne(
    g: PolyhedralNashGame,
    selection: np.ndarray | None = None,
    deadline: Deadline | None = None,
    binaries: tuple[BinaryVar, ...] = (),
) -> PneOutcome:
    """A pure equilibrium of the game, or a certificate that none exists.

    ``selection`` (over the concatenated strategy blocks) picks among
    equilibria by minimizing a linear criterion over the whole KKT set;
    without it the search stops at the first equilibrium found.
    """
    if g.n_param:
        raise LpError("cannot solve a game that still has free parameters")
    set_, lay = kkt_system(g)
    c = np.zeros(lay.total)
    if selection is not None:
        if len(selection) != g.strategy_dim:
            raise DimensionMismatch("selection objective spans the strategy blocks")
        c[lay.var_slices[0].start : lay.var_slices[0].start + g.strategy_dim] = selection
    out = optimize_over_set(set_, c, deadline=deadline, binaries=binaries)
    if out.status is LpStatus.OPTIMAL:
        return PneOutcome(found=True, point=out.point, layout=lay)
    if out.status is LpStatus.INFEASIBLE:
        return PneOutcome(found=False)
    raise LpError("selection objective is unbounded over the equilibrium set")
