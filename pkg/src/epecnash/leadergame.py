"""Leaders of bilevel programs playing a simultaneous game.

Each leader commits decision variables x subject to joint constraints
with its followers' responses y; the followers then play a quadratic
Nash game among themselves, parameterized in x, whose (unique, by
strict convexity) equilibrium the leader anticipates.  Replacing the
followers by their KKT systems turns the leader's feasible region into
a complementarity set over (x, y, multipliers) -- a finite union of
polyhedra that the solver enumerates and lifts.

At the top level, leaders interact only through bilinear objective
terms (and, optionally, shared market-clearing equalities priced by a
free multiplier block).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .lp import DimensionMismatch
from .nashgame import PolyhedralNashGame, kkt_system
from .polyhedra import ComplementaritySet, _vstack


@dataclass(frozen=True)
class StackelbergLeader:
    """One leader: own constraints over (x, y) plus a follower game in x.

    ``poly_a`` spans the leader's decision block (first ``n_leader``
    columns) and the follower strategy blocks.  ``followers`` must have
    ``n_param == n_leader``; ``feasible`` short-circuits the KKT
    derivation when the leader was loaded in raw matrix form.
    """

    name: str
    n_leader: int
    poly_a: object
    poly_b: np.ndarray
    followers: PolyhedralNashGame | None = None
    feasible: ComplementaritySet | None = None

    @property
    def ambient(self) -> int:
        """Dimension of (x, y, follower multipliers)."""
        if self.feasible is not None:
            return self.feasible.n
        if self.followers is None:
            return self.n_leader
        return self.n_leader + self.followers.strategy_dim + sum(
            p.m for p in self.followers.players
        )

    def __post_init__(self):
        if self.feasible is not None:
            return
        expected = self.n_leader + (
            self.followers.strategy_dim if self.followers is not None else 0
        )
        if self.poly_a.shape[1] != expected:
            raise DimensionMismatch(
                f"leader '{self.name}' constraint width {self.poly_a.shape[1]} "
                f"!= leader+follower variables {expected}"
            )
        if self.poly_a.shape[0] != len(self.poly_b):
            raise DimensionMismatch("leader polyhedron A/b mismatch")
        if self.followers is not None and self.followers.n_param != self.n_leader:
            raise DimensionMismatch("follower game must be parameterized in x")


def leader_feasible_set(leader: StackelbergLeader) -> ComplementaritySet:
    """The leader's feasible region as one complementarity system.

    Rows: own (x, y) constraints plus the followers' stationarity
    equalities; pairs: follower constraint multipliers against their
    slacks.  Its projection onto (x, y) is the set of leader decisions
    together with the followers' anticipated equilibrium response.
    """
    if leader.feasible is not None:
        return leader.feasible
    if leader.followers is None:
        return ComplementaritySet(
            a=leader.poly_a,
            b=np.asarray(leader.poly_b, dtype=float),
            m_mat=np.zeros((0, leader.n_leader)),
            q=np.zeros(0),
            comp=(),
        )
    inner, lay = kkt_system(leader.followers)
    total = lay.total
    lead_rows = leader.poly_a.shape[0]
    width = leader.poly_a.shape[1]
    if sp.issparse(leader.poly_a) or sp.issparse(inner.a):
        pad = sp.hstack(
            [sp.csr_matrix(leader.poly_a), sp.csr_matrix((lead_rows, total - width))],
            format="csr",
        )
    else:
        pad = np.hstack([leader.poly_a, np.zeros((lead_rows, total - width))])
    return ComplementaritySet(
        a=_vstack([pad, inner.a]),
        b=np.concatenate([np.asarray(leader.poly_b, dtype=float), inner.b]),
        m_mat=inner.m_mat,
        q=inner.q,
        comp=inner.comp,
    )


@dataclass(frozen=True)
class MultiLeaderGame:
    """Linear Nash game among Stackelberg leaders.

    ``objectives[i]`` and ``couplings[i]`` give leader i's payoff
    ``(objectives[i] + couplings[i] @ [all ambient blocks; prices])' v_i``
    over its own ambient block v_i; the own-block columns of a coupling
    must be zero.  ``clearing`` rows (over the concatenated ambient
    blocks) must hold at equilibrium and are priced by free multipliers
    that enter the couplings' trailing columns.
    """

    leaders: tuple[StackelbergLeader, ...]
    objectives: tuple[np.ndarray, ...]
    couplings: tuple[object | None, ...]
    clearing: object | None = None

    @property
    def n_market(self) -> int:
        return 0 if self.clearing is None else self.clearing.shape[0]

    @property
    def ambients(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.objectives)

    @property
    def total_ambient(self) -> int:
        return sum(self.ambients)

    def ambient_offset(self, i: int) -> int:
        return sum(self.ambients[:i])

    def __post_init__(self):
        if not (len(self.leaders) == len(self.objectives) == len(self.couplings)):
            raise DimensionMismatch("leaders/objectives/couplings disagree")
        width = self.total_ambient + self.n_market
        for i, leader in enumerate(self.leaders):
            if len(self.objectives[i]) != leader.ambient:
                raise DimensionMismatch(
                    f"objective {i} has length {len(self.objectives[i])}, "
                    f"leader ambient is {leader.ambient}"
                )
            coup = self.couplings[i]
            if coup is not None:
                if coup.shape != (leader.ambient, width):
                    raise DimensionMismatch(f"coupling {i} has wrong shape")
                own = coup[:, self.ambient_offset(i) : self.ambient_offset(i) + leader.ambient]
                own = own.toarray() if sp.issparse(own) else np.asarray(own)
                if own.size and np.abs(own).max() > 0:
                    raise DimensionMismatch("coupling own-block must be zero")
        if self.clearing is not None and self.clearing.shape[1] != self.total_ambient:
            raise DimensionMismatch("clearing width must match total ambient")

    def rival_objective(self, i: int, means: list[np.ndarray], prices: np.ndarray) -> np.ndarray:
        """Leader i's effective linear objective given rivals' mean play."""
        obj = np.asarray(self.objectives[i], dtype=float).copy()
        if self.couplings[i] is not None:
            stacked = np.concatenate(list(means) + [prices])
            obj += np.asarray(self.couplings[i] @ stacked).ravel()
        return obj
