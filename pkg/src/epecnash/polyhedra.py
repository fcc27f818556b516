"""Complementarity-constrained feasible sets and their polyhedral geometry.

A :class:`ComplementaritySet` is the region

    { x : A x <= b,  z = M x + q,  0 <= x_{c_i}  perp  z_i >= 0  for each pair i }

which is a finite union of polyhedra: fixing, per pair, which side is
pinned to zero yields one "selected" polyhedron per 0/1 encoding.  This
module enumerates the nonempty selected polyhedra, lifts a finite union
to its closed convex hull via the Balas extended formulation, and
minimizes linear objectives over the set by branch-and-bound that
branches directly on violated complementarity pairs (no big-M needed).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .lp import (
    DimensionMismatch,
    LinearProgram,
    LpStatus,
    NumericalFailure,
    solve_lp,
)
from .tolerances import COMP_TOL, ENUM_CAP, FEAS_TOL


class EncodingLengthMismatch(ValueError):
    pass


class TooManyComplementarities(ValueError):
    pass


class EmptyPieceList(ValueError):
    pass


class TimeLimitReached(Exception):
    pass


class Deadline:
    """Wall-clock budget; branch-and-bound polls it every ``stride`` nodes."""

    def __init__(self, seconds: float | None = None, stride: int = 1000):
        self.seconds = seconds
        self.stride = stride
        self.start = time.monotonic()
        self.nodes = 0

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.start

    def check(self) -> None:
        if self.seconds is not None and self.elapsed > self.seconds:
            raise TimeLimitReached()

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes % self.stride == 0:
            self.check()


def _vstack(parts):
    parts = [p for p in parts if p is not None and p.shape[0] > 0]
    if not parts:
        return None
    if any(sp.issparse(p) for p in parts):
        return sp.vstack([sp.csr_matrix(p) for p in parts], format="csr")
    return np.vstack(parts)


@dataclass(frozen=True)
class Polyhedron:
    """{ x : a x <= b } over free variables."""

    a: object  # (m, n) ndarray or scipy sparse
    b: np.ndarray

    def __post_init__(self):
        if self.a.shape[0] != len(self.b):
            raise DimensionMismatch("row count of A must equal length of b")

    @property
    def n(self) -> int:
        return self.a.shape[1]

    @property
    def m(self) -> int:
        return self.a.shape[0]


def is_feasible(poly: Polyhedron) -> bool:
    out = solve_lp(LinearProgram(np.zeros(poly.n), poly.a, poly.b))
    return out.status is not LpStatus.INFEASIBLE


@dataclass(frozen=True)
class ComplementaritySet:
    """Feasible set with complementarity pairs (x_{comp[i]}, [m_mat x + q]_i)."""

    a: object  # (m, n)
    b: np.ndarray
    m_mat: object  # (p, n)
    q: np.ndarray
    comp: tuple[int, ...]

    def __post_init__(self):
        n = self.n
        if self.a.shape[0] != len(self.b):
            raise DimensionMismatch("A/b row mismatch")
        if self.m_mat.shape[0] != len(self.q) or len(self.q) != len(self.comp):
            raise DimensionMismatch("M/q/comp size mismatch")
        if self.m_mat.shape[0] > 0 and self.m_mat.shape[1] != n:
            raise DimensionMismatch("M column count differs from A")
        if any(c < 0 or c >= n for c in self.comp):
            raise DimensionMismatch("complementarity index out of range")

    @property
    def n(self) -> int:
        return self.a.shape[1]

    @property
    def num_pairs(self) -> int:
        return len(self.comp)

    def slacks(self, x: np.ndarray) -> np.ndarray:
        if self.num_pairs == 0:
            return np.zeros(0)
        return np.asarray(self.m_mat @ x).ravel() + self.q


def _sign_rows(s: ComplementaritySet):
    """Rows x_{c_i} >= 0 and z_i >= 0 written as <= 0 constraints."""
    p = s.num_pairs
    if p == 0:
        return None, None
    xsign = sp.csr_matrix(
        (-np.ones(p), (np.arange(p), np.array(s.comp))), shape=(p, s.n)
    )
    if sp.issparse(s.m_mat):
        zsign = -sp.csr_matrix(s.m_mat)
    else:
        zsign = sp.csr_matrix(-s.m_mat)
    return xsign, zsign


def polyhedral_relaxation(s: ComplementaritySet) -> Polyhedron:
    """Drop the orthogonality, keep both nonnegativity sides."""
    xsign, zsign = _sign_rows(s)
    if xsign is None:
        return Polyhedron(s.a, np.asarray(s.b, dtype=float))
    a = _vstack([s.a, xsign, zsign])
    b = np.concatenate([s.b, np.zeros(s.num_pairs), np.asarray(s.q, dtype=float)])
    return Polyhedron(a, b)


def _pin_row(s: ComplementaritySet, pair: int, bit: int):
    """Inequality pinning one side of a pair: bit 0 -> x <= 0, bit 1 -> z <= 0."""
    if bit == 0:
        row = sp.csr_matrix(
            (np.ones(1), (np.zeros(1, dtype=int), np.array([s.comp[pair]]))),
            shape=(1, s.n),
        )
        rhs = 0.0
    else:
        mrow = s.m_mat.getrow(pair) if sp.issparse(s.m_mat) else s.m_mat[pair : pair + 1]
        row = sp.csr_matrix(mrow)
        rhs = -float(s.q[pair])
    return row, rhs


def selected_polyhedron(s: ComplementaritySet, encoding: tuple[int, ...]) -> Polyhedron:
    """Relaxation intersected with the per-pair pins given by ``encoding``."""
    if len(encoding) != s.num_pairs:
        raise EncodingLengthMismatch(
            f"encoding has {len(encoding)} bits, set has {s.num_pairs} pairs"
        )
    relax = polyhedral_relaxation(s)
    if s.num_pairs == 0:
        return relax
    rows = []
    rhs = []
    for i, bit in enumerate(encoding):
        r, v = _pin_row(s, i, int(bit))
        rows.append(r)
        rhs.append(v)
    a = _vstack([relax.a] + rows)
    b = np.concatenate([relax.b, np.array(rhs)])
    return Polyhedron(a, b)


def _ranged_relaxation(s: ComplementaritySet, objective: np.ndarray) -> "RangedLp":
    """The relaxation as one incremental LP with pinnable pair rows.

    Row layout: the m base rows, then per pair i the row x_{c_i} >= 0
    (index m+i) and the row [Mx+q]_i >= 0 (index m+p+i); pinning a side
    turns its row into an equation, so every search node is a bound
    edit on this single model.
    """
    from .hotlp import INF, RangedLp

    p = s.num_pairs
    m = s.a.shape[0]
    xsign, zsign = _sign_rows(s)
    if xsign is None:
        a_full = sp.csr_matrix(s.a)
        row_lo = np.full(m, -INF)
        row_hi = np.asarray(s.b, float)
    else:
        a_full = _vstack([s.a, -xsign, -zsign])  # sign rows stored as >=
        row_lo = np.concatenate([np.full(m, -INF), np.zeros(p), -np.asarray(s.q, float)])
        row_hi = np.concatenate([np.asarray(s.b, float), np.full(2 * p, INF)])
    return RangedLp(objective, a_full, row_lo, row_hi)


def _pin_pair(lp, s: ComplementaritySet, i: int, bit: int) -> None:
    m = s.a.shape[0]
    if bit == 0:
        lp.pin_row(m + i, 0.0, 0.0)
    else:
        lp.pin_row(m + s.num_pairs + i, -float(s.q[i]), -float(s.q[i]))


def enumerate_pieces(
    s: ComplementaritySet,
    cap: int = ENUM_CAP,
    deadline: Deadline | None = None,
) -> list[tuple[tuple[int, ...], Polyhedron]]:
    """All encodings with a nonempty selected polyhedron, lexicographic.

    Depth-first over bit prefixes; a prefix whose partial system is
    already infeasible prunes all its completions, so the cost scales
    with the number of nonempty pieces rather than 2^pairs.
    """
    p = s.num_pairs
    if p > cap:
        raise TooManyComplementarities(f"{p} pairs exceeds cap {cap}")
    relax = polyhedral_relaxation(s)
    if p == 0:
        return [((), relax)] if is_feasible(relax) else []

    lp = _ranged_relaxation(s, np.zeros(s.n))
    out: list[tuple[tuple[int, ...], Polyhedron]] = []

    def descend(prefix: tuple[int, ...]) -> None:
        if deadline is not None:
            deadline.tick()
        lp.reset()
        for i, bit in enumerate(prefix):
            _pin_pair(lp, s, i, bit)
        status, _, _ = lp.solve()
        if status is LpStatus.INFEASIBLE:
            return
        if len(prefix) == p:
            out.append((prefix, selected_polyhedron(s, prefix)))
            return
        descend(prefix + (0,))
        descend(prefix + (1,))

    descend(())
    return out


def contains(s: ComplementaritySet, x: np.ndarray, tol: float = FEAS_TOL) -> bool:
    """Membership of a point: rows, both signs, and pair products within tol."""
    x = np.asarray(x, dtype=float)
    if len(x) != s.n:
        raise DimensionMismatch("point dimension mismatch")
    resid = np.asarray(s.a @ x).ravel() - s.b
    if resid.size and resid.max() > tol:
        return False
    if s.num_pairs == 0:
        return True
    xc = x[list(s.comp)]
    z = s.slacks(x)
    if xc.min() < -tol or z.min() < -tol:
        return False
    return bool(np.max(xc * z) <= tol)


@dataclass(frozen=True)
class HullFormulation:
    """Balas lift of cl conv of a finite union of nonempty polyhedra.

    Variables are laid out ``[copies of fat pieces | delta (k) | x (n)]``
    with rows

        A^i x^i <= delta_i b^i  (fat pieces),
        sum_w x^w + sum_j delta_j v_j = x,   sum_w delta_w = 1,
        delta >= 0,

    equalities written as inequality pairs so the whole system is one
    ``a x <= b`` block.  A piece that is a single point v_j needs no
    copy block: its Balas system ``A x <= delta b`` forces exactly
    ``x = delta v_j``, so it enters the aggregation row directly.  Any
    point of piece i is recovered with delta the i-th unit vector.
    """

    a: object
    b: np.ndarray
    n: int
    k: int
    points: tuple  # per piece: its single point, or None if fat
    copy_start: tuple[int, ...]  # per piece: copy offset, or -1 if a point
    num_copies: int
    encodings: tuple[tuple[int, ...], ...] | None = None

    @property
    def num_vars(self) -> int:
        return self.n * self.num_copies + self.k + self.n

    def copy_slice(self, i: int) -> slice:
        start = self.copy_start[i]
        if start < 0:
            raise IndexError(f"piece {i} is a point and has no copy block")
        return slice(start, start + self.n)

    def delta_index(self, i: int) -> int:
        return self.n * self.num_copies + i

    @property
    def agg_slice(self) -> slice:
        base = self.n * self.num_copies + self.k
        return slice(base, base + self.n)

    def piece_point(self, lifted: np.ndarray, i: int) -> np.ndarray:
        """The pure point piece i contributes at a lifted solution."""
        if self.points[i] is not None:
            return np.asarray(self.points[i])
        w = float(lifted[self.delta_index(i)])
        return np.asarray(lifted[self.copy_slice(i)]) / w

    def polyhedron(self) -> Polyhedron:
        return Polyhedron(self.a, self.b)


def _single_point_of(piece: Polyhedron) -> np.ndarray | None:
    """The piece's unique point if it is a singleton, else None."""
    from .hotlp import INF, RangedLp

    n = piece.n
    lp = RangedLp(np.zeros(n), piece.a, np.full(piece.m, -INF), np.asarray(piece.b, float))
    lo = np.empty(n)
    hi = np.empty(n)
    for j in range(n):
        c = np.zeros(n)
        c[j] = 1.0
        lp.set_objective(c)
        status, x, val = lp.solve()
        if status is not LpStatus.OPTIMAL:
            return None
        lo[j] = val
        lp.set_objective(-c)
        status, x, val = lp.solve()
        if status is not LpStatus.OPTIMAL:
            return None
        hi[j] = -val
        if hi[j] - lo[j] > 1e-9:
            return None
    return (lo + hi) / 2.0


def balas_hull(
    pieces: list[Polyhedron],
    encodings: tuple[tuple[int, ...], ...] | None = None,
) -> HullFormulation:
    if not pieces:
        raise EmptyPieceList("hull of zero pieces is undefined")
    n = pieces[0].n
    if any(p.n != n for p in pieces):
        raise DimensionMismatch("pieces must share the ambient dimension")
    k = len(pieces)
    points = [_single_point_of(p) for p in pieces]
    copy_start = []
    num_copies = 0
    for pt in points:
        if pt is None:
            copy_start.append(num_copies * n)
            num_copies += 1
        else:
            copy_start.append(-1)
    nvar = n * num_copies + k + n
    d_off = n * num_copies
    x_off = d_off + k

    blocks = []
    rhs = []
    for i, piece in enumerate(pieces):
        if points[i] is not None:
            continue
        # A^i x^i - b^i delta_i <= 0
        cols = sp.lil_matrix((piece.m, nvar))
        cols[:, copy_start[i] : copy_start[i] + n] = piece.a
        cols[:, d_off + i] = -np.asarray(piece.b, dtype=float).reshape(-1, 1)
        blocks.append(sp.csr_matrix(cols))
        rhs.append(np.zeros(piece.m))
    # delta >= 0
    dneg = sp.csr_matrix(
        (-np.ones(k), (np.arange(k), d_off + np.arange(k))), shape=(k, nvar)
    )
    blocks.append(dneg)
    rhs.append(np.zeros(k))
    # sum_w x^w + sum_j delta_j v_j - x = 0 as a pair of inequality blocks
    agg = sp.lil_matrix((n, nvar))
    for i in range(k):
        if points[i] is None:
            agg[:, copy_start[i] : copy_start[i] + n] = sp.eye(n)
        else:
            agg[:, d_off + i] = points[i].reshape(-1, 1)
    agg[:, x_off:] = -sp.eye(n)
    agg = sp.csr_matrix(agg)
    blocks += [agg, -agg]
    rhs += [np.zeros(n), np.zeros(n)]
    # sum_w delta_w = 1 as a pair of rows
    drow = sp.csr_matrix(
        (np.ones(k), (np.zeros(k, dtype=int), d_off + np.arange(k))), shape=(1, nvar)
    )
    blocks += [drow, -drow]
    rhs += [np.ones(1), -np.ones(1)]
    return HullFormulation(
        a=sp.vstack(blocks, format="csr"),
        b=np.concatenate(rhs),
        n=n,
        k=k,
        points=tuple(points),
        copy_start=tuple(copy_start),
        num_copies=num_copies,
        encodings=encodings,
    )


@dataclass(frozen=True)
class SetOutcome:
    status: LpStatus
    point: np.ndarray | None = None
    value: float | None = None
    ray: np.ndarray | None = None


@dataclass(frozen=True)
class BinaryVar:
    """A variable branched to {0, 1}; at the 0 branch ``zero_block`` is pinned.

    Pinning the piece copy to zero alongside its convex weight keeps the
    recession cone of switched-off unbounded pieces from leaking into
    the aggregate point.
    """

    index: int
    zero_block: tuple[int, ...] = ()


_BIN_TOL = 1e-7


def _unit_rows(n: int, indices, sign: float):
    idx = np.fromiter(indices, dtype=int)
    return sp.csr_matrix(
        (np.full(len(idx), sign), (np.arange(len(idx)), idx)), shape=(len(idx), n)
    )


def optimize_over_set(
    s: ComplementaritySet,
    c: np.ndarray,
    deadline: Deadline | None = None,
    binaries: tuple[BinaryVar, ...] = (),
) -> SetOutcome:
    """Global min of c @ x over the set by disjunctive branch-and-bound.

    Depth-first, 0-side child first; branch variable is the pair with
    the largest product at the node relaxation optimum (ties to the
    lowest index), then the most fractional binary.  With a zero
    objective the search stops at the first complementary leaf.  An
    unbounded result is only reported from a fully pinned branch, whose
    system is a subset of the set itself.
    """
    from .hotlp import INF

    c = np.asarray(c, dtype=float)
    if len(c) != s.n:
        raise DimensionMismatch("objective length mismatch")
    p = s.num_pairs
    comp_idx = np.array(s.comp, dtype=int) if p else np.zeros(0, dtype=int)

    feasibility_mode = not np.any(c)
    if feasibility_mode and p:
        # Guiding objective sum_i (x_{c_i} + z_i): nonnegative on the
        # relaxation, and zero exactly at complementary points.
        guide = np.zeros(s.n)
        np.add.at(guide, comp_idx, 1.0)
        guide = guide + np.asarray(s.m_mat.sum(axis=0)).ravel()
    else:
        guide = c

    lp = _ranged_relaxation(s, guide)

    def apply_node(pins, bins):
        lp.reset()
        for i, bit in pins:
            _pin_pair(lp, s, i, bit)
        for bi, side in bins:
            bv = binaries[bi]
            if side == 0:
                lp.pin_col(bv.index, -INF, 0.0)
                for col in bv.zero_block:
                    lp.pin_col(col, 0.0, 0.0)
            else:
                lp.pin_col(bv.index, 1.0, INF)

    def node_polyhedron(pins, bins) -> Polyhedron:
        rows = [polyhedral_relaxation(s).a]
        rhs = [polyhedral_relaxation(s).b]
        for i, bit in pins:
            r, v = _pin_row(s, i, bit)
            rows.append(r)
            rhs.append(np.array([v]))
        for bi, side in bins:
            bv = binaries[bi]
            if side == 0:
                rows.append(_unit_rows(s.n, [bv.index], 1.0))
                rhs.append(np.zeros(1))
                if bv.zero_block:
                    rows.append(_unit_rows(s.n, bv.zero_block, 1.0))
                    rhs.append(np.zeros(len(bv.zero_block)))
                    rows.append(_unit_rows(s.n, bv.zero_block, -1.0))
                    rhs.append(np.zeros(len(bv.zero_block)))
            else:
                rows.append(_unit_rows(s.n, [bv.index], -1.0))
                rhs.append(-np.ones(1))
        return Polyhedron(_vstack(rows), np.concatenate(rhs))

    def polish(x: np.ndarray) -> np.ndarray:
        """Drive the node point toward complementarity.

        Re-solves the node LP a few times, minimizing the linearization
        of sum_i x_{c_i} z_i at the current point; every iterate stays
        feasible for the node system, so this only ever finds leaves
        faster, never changes what the search can reach.
        """
        for _ in range(8):
            z = s.slacks(x)
            xc = x[comp_idx]
            if np.max(xc * z) <= COMP_TOL:
                return x
            c_lin = np.zeros(s.n)
            np.add.at(c_lin, comp_idx, np.maximum(z, 0.0))
            c_lin += np.asarray(s.m_mat.T @ np.maximum(xc, 0.0)).ravel()
            top = np.abs(c_lin).max()
            if top > 0:
                c_lin /= top
            lp.set_objective(c_lin)
            status, x_new, _ = lp.solve()
            if status is not LpStatus.OPTIMAL:
                break
            new_viol = int(
                np.sum(x_new[comp_idx] * s.slacks(x_new) > COMP_TOL)
            )
            old_viol = int(np.sum(xc * z > COMP_TOL))
            if new_viol >= old_viol:
                x = x_new if new_viol < old_viol else x
                break
            x = x_new
        return x

    best_val = np.inf
    best_pt: np.ndarray | None = None

    # Node = (pair pins, binary pins) as immutable tuples; depth-first.
    stack: list[tuple[tuple[tuple[int, int], ...], tuple[tuple[int, int], ...]]] = [
        ((), ())
    ]

    while stack:
        pins, bins = stack.pop()
        if deadline is not None:
            deadline.tick()
        apply_node(pins, bins)
        if feasibility_mode:
            lp.set_objective(guide)
        status, x, lp_val = lp.solve()

        if status is LpStatus.INFEASIBLE:
            continue

        if status is LpStatus.UNBOUNDED:
            # Only possible in optimization mode (the guide is bounded below).
            pinned = {i for i, _ in pins}
            free_pairs = [i for i in range(p) if i not in pinned]
            branched = {bi for bi, _ in bins}
            free_bins = [bi for bi in range(len(binaries)) if bi not in branched]
            if not free_pairs and not free_bins:
                witness = lp.feasible_point()
                poly = node_polyhedron(pins, bins)
                ray_out = solve_lp(LinearProgram(c, poly.a, poly.b))
                if ray_out.status is not LpStatus.UNBOUNDED:
                    raise NumericalFailure("unbounded node lost its ray")
                return SetOutcome(LpStatus.UNBOUNDED, point=witness, ray=ray_out.ray)
            if free_pairs:
                i = free_pairs[0]
                stack.append((pins + ((i, 1),), bins))
                stack.append((pins + ((i, 0),), bins))
            else:
                bi = free_bins[0]
                stack.append((pins, bins + ((bi, 0),)))
                stack.append((pins, bins + ((bi, 1),)))
            continue

        true_val = float(c @ x)
        if not feasibility_mode and true_val >= best_val:
            # The guide equals c here, so the LP value is a valid bound.
            continue

        if feasibility_mode and p:
            x = polish(x)

        pinned = {i for i, _ in pins}
        if p:
            prod = x[comp_idx] * s.slacks(x)
            if pinned:
                prod[list(pinned)] = -np.inf
            worst = int(np.argmax(prod))
            if prod[worst] > COMP_TOL:
                if not feasibility_mode:
                    stack.append((pins + ((worst, 1),), bins))
                    stack.append((pins + ((worst, 0),), bins))
                    continue
                # Look ahead: polish both children and explore the more
                # complementary one first; a child that polishes clean
                # and has no fractional binaries is already a leaf.
                scored = []
                for side in (0, 1):
                    child = pins + ((worst, side),)
                    apply_node(child, bins)
                    lp.set_objective(guide)
                    st2, x2, _ = lp.solve()
                    if st2 is not LpStatus.OPTIMAL:
                        continue
                    x2 = polish(x2)
                    prod2 = x2[comp_idx] * s.slacks(x2)
                    done = {i for i, _ in child}
                    prod2[list(done)] = -np.inf
                    nv = int(np.sum(prod2 > COMP_TOL))
                    if nv == 0 and not binaries:
                        return SetOutcome(
                            LpStatus.OPTIMAL, point=x2, value=float(c @ x2)
                        )
                    scored.append((nv, side, child))
                # push the worse child first so the better one pops first;
                # ties keep the 0-side ahead
                scored.sort(key=lambda t: (-t[0], -t[1]))
                for _, _, child in scored:
                    stack.append((child, bins))
                continue

        if binaries:
            branched = {bi for bi, _ in bins}
            frac = np.array(
                [
                    -np.inf
                    if bi in branched
                    else min(abs(x[bv.index]), abs(x[bv.index] - 1.0))
                    for bi, bv in enumerate(binaries)
                ]
            )
            worst_b = int(np.argmax(frac))
            if frac[worst_b] > _BIN_TOL:
                # select-the-piece child first: fixing a weight to one is
                # far more constraining than switching one off
                stack.append((pins, bins + ((worst_b, 0),)))
                stack.append((pins, bins + ((worst_b, 1),)))
                continue

        if feasibility_mode:
            return SetOutcome(LpStatus.OPTIMAL, point=x, value=true_val)
        if true_val < best_val:
            best_val = true_val
            best_pt = x

    if best_pt is None:
        return SetOutcome(LpStatus.INFEASIBLE)
    return SetOutcome(LpStatus.OPTIMAL, point=best_pt, value=best_val)
