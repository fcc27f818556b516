"""Equilibrium algorithms for games among Stackelberg leaders.

Three entry points, all sharing the same machinery:

``full_enumeration``
    Enumerate every polyhedral piece of every leader's feasible set,
    lift each union to its convex hull, solve the resulting one-shot
    game of linear players over polytopes, and read a mixed strategy
    off the hull weights.  Finds a mixed equilibrium whenever one
    exists; an empty equilibrium set certifies that none does.

``inner_approximation``
    Grow each leader's hull from a few pieces, solve the restricted
    game, and use profitable deviations against the *true* feasible
    sets to decide which piece to add next.  Falls back to adding
    pieces in a configurable order when the restricted game has no
    equilibrium; its terminal iteration coincides with full enumeration.

``pure_enumeration``
    Same hull game as full enumeration, but the convex weights are
    branched to {0,1}, so any solution lies in an original piece: a
    pure equilibrium, or a proof that no pure equilibrium exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import scipy.sparse as sp

from .leadergame import MultiLeaderGame, leader_feasible_set
from .lp import LpStatus, NumericalFailure
from .nashgame import PolyhedralNashGame, QuadraticPlayer, find_pne, kkt_layout
from .polyhedra import (
    BinaryVar,
    ComplementaritySet,
    Deadline,
    HullFormulation,
    TimeLimitReached,
    balas_hull,
    contains,
    enumerate_pieces,
)
from .rng import Lcg
from .tolerances import DELTA_MIN, DEVIATION_TOL, FEAS_TOL

Strategy = Literal["seq", "rseq", "rand"]
STRATEGIES = ("seq", "rseq", "rand")


class DegenerateWeight(ValueError):
    pass


@dataclass(frozen=True)
class MixedProfile:
    """Per leader, a finitely supported distribution over pure points."""

    supports: tuple[tuple[tuple[np.ndarray, float], ...], ...]
    market: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def mean(self, i: int) -> np.ndarray:
        return sum(p * pt for pt, p in self.supports[i])

    def means(self) -> list[np.ndarray]:
        return [self.mean(i) for i in range(len(self.supports))]

    def is_pure(self) -> bool:
        return all(len(s) == 1 for s in self.supports)


@dataclass(frozen=True)
class Deviation:
    leader: int
    improvement: float
    point: np.ndarray | None = None
    ray: np.ndarray | None = None


@dataclass(frozen=True)
class SolveReport:
    status: Literal["MNE", "PNE", "NoEquilibrium", "TimeLimit"]
    profile: MixedProfile | None
    iterations: int
    wall_time: float
    pieces_per_leader: tuple[int, ...]
    objective_values: tuple[float, ...] = ()
    trace: tuple = ()


def decompose_mixed(
    lifted: np.ndarray, hull: HullFormulation
) -> list[tuple[np.ndarray, float]]:
    """Convex-combination support implied by a lifted hull point.

    Each copy block with weight above the dust threshold contributes
    the pure point ``copy / weight`` played with that weight;
    probabilities are renormalized to absorb the dropped dust.
    """
    support = []
    total = 0.0
    for j in range(hull.k):
        w = float(lifted[hull.delta_index(j)])
        if w > DELTA_MIN:
            support.append((hull.piece_point(lifted, j), w))
            total += w
    if not support:
        raise DegenerateWeight("all hull weights are numerically zero")
    return [(pt, w / total) for pt, w in support]


@dataclass
class _Assembly:
    game: PolyhedralNashGame
    hulls: list[HullFormulation]
    var_offsets: list[int]
    binaries: tuple[BinaryVar, ...]


def _assemble_hull_game(game: MultiLeaderGame, hulls: list[HullFormulation]) -> _Assembly:
    """One quadratic-free player per leader over its lifted hull polytope."""
    n_l = len(game.leaders)
    n_mkt = game.n_market
    lifted_dims = [h.num_vars for h in hulls]
    offsets = [sum(lifted_dims[:i]) for i in range(n_l)]
    total_lifted = sum(lifted_dims)

    players = []
    for i, hull in enumerate(hulls):
        c = np.zeros(hull.num_vars)
        c[hull.agg_slice] = game.objectives[i]
        coupling = None
        if game.couplings[i] is not None:
            coup = sp.lil_matrix((hull.num_vars, total_lifted + n_mkt))
            src = sp.csr_matrix(game.couplings[i])
            rows = np.arange(hull.agg_slice.start, hull.agg_slice.stop)
            for j in range(n_l):
                block = src[:, game.ambient_offset(j) : game.ambient_offset(j) + game.ambients[j]]
                if block.nnz:
                    cols = offsets[j] + hulls[j].agg_slice.start
                    coup[
                        rows[0] : rows[-1] + 1,
                        cols : cols + game.ambients[j],
                    ] = block
            if n_mkt:
                mblock = src[:, game.total_ambient :]
                if mblock.nnz:
                    coup[rows[0] : rows[-1] + 1, total_lifted:] = mblock
            coupling = sp.csr_matrix(coup)
        players.append(
            QuadraticPlayer(c=c, a=hull.a, b=hull.b, coupling=coupling)
        )

    clearing = None
    if n_mkt:
        rows = sp.lil_matrix((n_mkt, total_lifted))
        src = sp.csr_matrix(game.clearing)
        for j in range(n_l):
            block = src[:, game.ambient_offset(j) : game.ambient_offset(j) + game.ambients[j]]
            if block.nnz:
                cols = offsets[j] + hulls[j].agg_slice.start
                rows[:, cols : cols + game.ambients[j]] = block
        clearing = sp.csr_matrix(rows)

    hull_game = PolyhedralNashGame(players=tuple(players), clearing=clearing)
    binaries = []
    for i, hull in enumerate(hulls):
        for j in range(hull.k):
            if hull.points[j] is None:
                copy = hull.copy_slice(j)
                zero_block = tuple(
                    range(offsets[i] + copy.start, offsets[i] + copy.stop)
                )
            else:
                zero_block = ()  # a point contributes delta_j v_j: off is off
            binaries.append(
                BinaryVar(index=offsets[i] + hull.delta_index(j), zero_block=zero_block)
            )
    return _Assembly(
        game=hull_game, hulls=hulls, var_offsets=offsets, binaries=tuple(binaries)
    )


def _embed_selection(asm: _Assembly, game: MultiLeaderGame, selection) -> np.ndarray | None:
    if selection is None:
        return None
    selection = np.asarray(selection, dtype=float)
    if len(selection) != game.total_ambient:
        raise NumericalFailure("selection objective must span all leader blocks")
    c = np.zeros(asm.game.strategy_dim)
    for i, hull in enumerate(asm.hulls):
        block = selection[game.ambient_offset(i) : game.ambient_offset(i) + game.ambients[i]]
        start = asm.var_offsets[i] + hull.agg_slice.start
        c[start : start + game.ambients[i]] = block
    return c


def _decode_profile(
    w: np.ndarray,
    asm: _Assembly,
    sets: list[ComplementaritySet],
) -> MixedProfile:
    lay = kkt_layout(asm.game)
    supports = []
    for i, hull in enumerate(asm.hulls):
        lifted = w[lay.var_slices[i]]
        agg = np.asarray(lifted[hull.agg_slice])
        if contains(sets[i], agg, FEAS_TOL):
            supports.append(((agg, 1.0),))
        else:
            supports.append(tuple(decompose_mixed(lifted, hull)))
    return MixedProfile(supports=tuple(supports), market=lay.market(w))


def _objective_values(game: MultiLeaderGame, profile: MixedProfile) -> tuple[float, ...]:
    means = profile.means()
    return tuple(
        float(game.rival_objective(i, means, profile.market) @ means[i])
        for i in range(len(game.leaders))
    )


def deviation_check(
    game: MultiLeaderGame,
    profile: MixedProfile,
    tol: float = DEVIATION_TOL,
    sets: list[ComplementaritySet] | None = None,
    deadline: Deadline | None = None,
) -> list[Deviation | None]:
    """Per-leader best response against the true feasible set.

    Rivals enter only through their support means: with linear payoffs
    the expected payoff of any reply equals its payoff at the rivals'
    mean, so one exact best response per leader settles whether the
    profile is an equilibrium.  An unbounded best response counts as a
    deviation and carries its ray.
    """
    from .polyhedra import optimize_over_set

    if sets is None:
        sets = [leader_feasible_set(l) for l in game.leaders]
    means = profile.means()
    out: list[Deviation | None] = []
    for i in range(len(game.leaders)):
        obj = game.rival_objective(i, means, profile.market)
        played = float(obj @ means[i])
        br = optimize_over_set(sets[i], obj, deadline=deadline)
        if br.status is LpStatus.UNBOUNDED:
            out.append(Deviation(leader=i, improvement=np.inf, point=br.point, ray=br.ray))
        elif br.status is LpStatus.OPTIMAL:
            gain = played - br.value
            out.append(
                Deviation(leader=i, improvement=gain, point=br.point)
                if gain > tol
                else None
            )
        else:
            raise NumericalFailure(
                f"best response of leader {i} infeasible at a certified profile"
            )
    return out


def _report(status, profile, iterations, deadline, pieces, values=(), trace=()):
    return SolveReport(
        status=status,
        profile=profile,
        iterations=iterations,
        wall_time=deadline.elapsed,
        pieces_per_leader=tuple(pieces),
        objective_values=tuple(values),
        trace=tuple(trace),
    )


def _enumerate_all(game: MultiLeaderGame, deadline: Deadline):
    sets = [leader_feasible_set(l) for l in game.leaders]
    pieces = [enumerate_pieces(s, deadline=deadline) for s in sets]
    deadline.check()
    return sets, pieces


def full_enumeration(
    game: MultiLeaderGame,
    selection: np.ndarray | None = None,
    budget: float | None = None,
) -> SolveReport:
    """Mixed equilibrium by complete piece enumeration and hull lifting."""
    deadline = Deadline(budget)
    try:
        sets, pieces = _enumerate_all(game, deadline)
        counts = [len(p) for p in pieces]
        if any(c == 0 for c in counts):
            return _report("NoEquilibrium", None, 1, deadline, counts)
        hulls = [
            balas_hull([poly for _, poly in pc], tuple(e for e, _ in pc))
            for pc in pieces
        ]
        asm = _assemble_hull_game(game, hulls)
        res = find_pne(asm.game, _embed_selection(asm, game, selection), deadline)
        if not res.found:
            return _report("NoEquilibrium", None, 1, deadline, counts)
        profile = _decode_profile(res.point, asm, sets)
        status = "PNE" if profile.is_pure() else "MNE"
        return _report(
            status, profile, 1, deadline, counts, _objective_values(game, profile)
        )
    except TimeLimitReached:
        return _report("TimeLimit", None, 1, deadline, [0] * len(game.leaders))


def pure_enumeration(
    game: MultiLeaderGame,
    selection: np.ndarray | None = None,
    budget: float | None = None,
) -> SolveReport:
    """Pure equilibrium, or proof that none exists, via binary hull weights.

    At a 0-branch the corresponding piece copy is pinned to zero as
    well, so recession directions of switched-off unbounded pieces
    cannot leak into the aggregate: the solution's aggregate block lies
    in the single active piece.
    """
    deadline = Deadline(budget)
    try:
        sets, pieces = _enumerate_all(game, deadline)
        counts = [len(p) for p in pieces]
        if any(c == 0 for c in counts):
            return _report("NoEquilibrium", None, 1, deadline, counts)
        hulls = [
            balas_hull([poly for _, poly in pc], tuple(e for e, _ in pc))
            for pc in pieces
        ]
        asm = _assemble_hull_game(game, hulls)
        res = find_pne(
            asm.game,
            _embed_selection(asm, game, selection),
            deadline,
            binaries=asm.binaries,
        )
        if not res.found:
            return _report("NoEquilibrium", None, 1, deadline, counts)
        lay = kkt_layout(asm.game)
        supports = []
        for i, hull in enumerate(asm.hulls):
            agg = np.asarray(res.point[lay.var_slices[i]][hull.agg_slice])
            supports.append(((agg, 1.0),))
        profile = MixedProfile(supports=tuple(supports), market=lay.market(res.point))
        return _report(
            "PNE", profile, 1, deadline, counts, _objective_values(game, profile)
        )
    except TimeLimitReached:
        return _report("TimeLimit", None, 1, deadline, [0] * len(game.leaders))


def _strategy_order(encodings, strategy: Strategy, rng: Lcg):
    order = list(encodings)
    if strategy == "rseq":
        order.reverse()
    elif strategy == "rand":
        rng.shuffle(order)
    elif strategy != "seq":
        raise ValueError(f"unknown extension strategy {strategy!r}")
    return order


@dataclass
class InnerApproxState:
    """Growing piece selection of one leader during inner approximation.

    ``included`` holds encodings of nonempty pieces only and grows
    strictly across iterations; ``order`` fixes the extension sequence
    implied by the strategy (and seed, for the shuffled one).
    """

    order: list[tuple[int, ...]]
    included: list[tuple[int, ...]]

    @property
    def exhausted(self) -> bool:
        return len(self.included) == len(self.order)

    def extend(self, count: int) -> int:
        fresh = [e for e in self.order if e not in self.included][:count]
        self.included.extend(fresh)
        return len(fresh)

    def add(self, encoding: tuple[int, ...]) -> bool:
        if encoding in self.order and encoding not in self.included:
            self.included.append(encoding)
            return True
        return False


def _piece_encoding_at(s: ComplementaritySet, x: np.ndarray) -> tuple[int, ...]:
    """Encoding of a piece containing x: pin the smaller side of each pair."""
    z = s.slacks(x)
    return tuple(1 if x[c] > z[i] else 0 for i, c in enumerate(s.comp))


def inner_approximation(
    game: MultiLeaderGame,
    strategy: Strategy = "seq",
    k: int = 1,
    seed: int = 0,
    budget: float | None = None,
    deviation_tol: float = DEVIATION_TOL,
) -> SolveReport:
    """Deviation-guided hull growth.

    Starts each leader from its first k pieces in the strategy's order.
    A restricted equilibrium that survives the deviation check against
    the true sets is returned; a profitable deviation adds a piece
    containing the deviating point; a restricted game with no
    equilibrium extends every leader by k pieces.  Once every piece is
    in, the iteration coincides with full enumeration.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    deadline = Deadline(budget)
    master = Lcg(seed)
    trace: list[dict] = []
    try:
        sets, pieces = _enumerate_all(game, deadline)
        counts = [len(p) for p in pieces]
        if any(c == 0 for c in counts):
            return _report("NoEquilibrium", None, 1, deadline, counts)
        by_enc = [dict(pc) for pc in pieces]
        states = [
            InnerApproxState(
                order=_strategy_order([e for e, _ in pc], strategy, master.split(i)),
                included=[],
            )
            for i, pc in enumerate(pieces)
        ]
        for st in states:
            st.extend(k)

        iterations = 0
        while True:
            iterations += 1
            deadline.check()
            hulls = [
                balas_hull(
                    [by_enc[i][e] for e in states[i].included],
                    tuple(states[i].included),
                )
                for i in range(len(game.leaders))
            ]
            asm = _assemble_hull_game(game, hulls)
            res = find_pne(asm.game, None, deadline)

            if not res.found:
                if all(st.exhausted for st in states):
                    trace.append({"restricted": None, "deviations": None})
                    return _report(
                        "NoEquilibrium", None, iterations, deadline, counts, trace=trace
                    )
                for st in states:
                    st.extend(k)
                trace.append({"restricted": None, "deviations": None})
                continue

            profile = _decode_profile(res.point, asm, sets)
            devs = deviation_check(game, profile, deviation_tol, sets, deadline)
            trace.append({"restricted": profile, "deviations": devs})
            if all(d is None for d in devs):
                status = "PNE" if profile.is_pure() else "MNE"
                return _report(
                    status,
                    profile,
                    iterations,
                    deadline,
                    counts,
                    _objective_values(game, profile),
                    trace,
                )

            added = False
            for dev in devs:
                if dev is None or dev.point is None:
                    continue
                i = dev.leader
                enc = _piece_encoding_at(sets[i], dev.point)
                if states[i].add(enc):
                    added = True
                elif states[i].extend(1):
                    added = True
            if not added:
                raise NumericalFailure(
                    "deviation found but no piece left to add; tolerances disagree"
                )
    except TimeLimitReached:
        return _report(
            "TimeLimit", None, len(trace) + 1, deadline, [0] * len(game.leaders), trace=trace
        )
