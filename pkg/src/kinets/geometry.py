"""Exact static geometry: orientation, hull membership, lexicographic minima.

Points are tuples of ``Fraction``; Python's tuple ordering is exactly the
lexicographic order used throughout.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .errors import DegenerateFrame, DimensionMismatch, UnboundedProblem
from .lp import OPTIMAL, UNBOUNDED, solve_lp


class HullMembership(enum.Enum):
    OUTSIDE = "OUTSIDE"
    RELATIVE_BOUNDARY = "RELATIVE_BOUNDARY"
    RELATIVE_INTERIOR = "RELATIVE_INTERIOR"


OUTSIDE = HullMembership.OUTSIDE
RELATIVE_BOUNDARY = HullMembership.RELATIVE_BOUNDARY
RELATIVE_INTERIOR = HullMembership.RELATIVE_INTERIOR


def point(*coords) -> tuple:
    """Build an exact point; accepts ints, Fractions and 'p/q' strings."""
    if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
        coords = coords[0]
    return tuple(Fraction(c) for c in coords)


@dataclass
class PointSet:
    dimension: int
    points: list
    ids: list = field(default_factory=list)

    def __post_init__(self):
        self.points = [point(p) for p in self.points]
        if not self.ids:
            self.ids = [f"p{i + 1}" for i in range(len(self.points))]
        if len(set(self.ids)) != len(self.ids):
            raise ValueError("point ids must be unique")
        if len(self.ids) != len(self.points):
            raise ValueError("one id per point required")
        for p in self.points:
            if len(p) != self.dimension:
                raise DimensionMismatch(f"point {p} is not {self.dimension}-dimensional")

    def __len__(self):
        return len(self.points)

    def by_id(self, pid):
        return self.points[self.ids.index(pid)]


def _check_dim(pts, d=None):
    if not pts:
        raise DimensionMismatch("empty point list")
    d = len(pts[0]) if d is None else d
    for p in pts:
        if len(p) != d:
            raise DimensionMismatch(f"expected dimension {d}, got {len(p)}")
    return d


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def det(rows) -> Fraction:
    """Exact determinant by fraction-preserving Gaussian elimination."""
    M = [[Fraction(v) for v in r] for r in rows]
    n = len(M)
    sign = 1
    acc = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        pk = M[k][k]
        acc *= pk
        for i in range(k + 1, n):
            f = M[i][k] / pk
            if f:
                Mi, Mk = M[i], M[k]
                for j in range(k + 1, n):
                    Mi[j] -= f * Mk[j]
    return sign * acc


def orient2d(a, b, c) -> int:
    return _sign((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))


def orientation(simplex_points: Sequence) -> int:
    """Sign of det[p1 - p0, ..., pd - p0] for d+1 points in R^d."""
    pts = [point(p) for p in simplex_points]
    d = _check_dim(pts)
    if len(pts) != d + 1:
        raise DimensionMismatch(f"need {d + 1} points in R^{d}, got {len(pts)}")
    if d == 1:
        return _sign(pts[1][0] - pts[0][0])
    if d == 2:
        return orient2d(*pts)
    p0 = pts[0]
    return _sign(det([[p[k] - p0[k] for k in range(d)] for p in pts[1:]]))


def affine_rank(pts) -> int:
    """Dimension of the affine hull of pts (-1 for no points)."""
    if not pts:
        return -1
    p0 = pts[0]
    rows = [[p[k] - p0[k] for k in range(len(p0))] for p in pts[1:]]
    return _rank(rows)


def _rank(rows) -> int:
    M = [[Fraction(v) for v in r] for r in rows]
    if not M:
        return 0
    rank = 0
    ncols = len(M[0])
    for col in range(ncols):
        piv = next((i for i in range(rank, len(M)) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for i in range(rank + 1, len(M)):
            f = M[i][col] / M[rank][col]
            if f:
                M[i] = [a - f * b for a, b in zip(M[i], M[rank])]
        rank += 1
    return rank


def solve_linear(A, b) -> Optional[list]:
    """Unique solution of a square or overdetermined consistent system.

    Returns None when the system is inconsistent; raises DegenerateFrame
    when the solution is not unique.
    """
    n = len(A[0])
    M = [[Fraction(v) for v in r] + [Fraction(bi)] for r, bi in zip(A, b)]
    row = 0
    pivcols = []
    for col in range(n):
        piv = next((i for i in range(row, len(M)) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        inv = 1 / M[row][col]
        M[row] = [v * inv for v in M[row]]
        for i in range(len(M)):
            if i != row and M[i][col]:
                f = M[i][col]
                M[i] = [a - f * c for a, c in zip(M[i], M[row])]
        pivcols.append(col)
        row += 1
    for i in range(row, len(M)):
        if M[i][-1] != 0:
            return None
    if len(pivcols) < n:
        raise DegenerateFrame("linear system has no unique solution")
    x = [Fraction(0)] * n
    for i, col in enumerate(pivcols):
        x[col] = M[i][-1]
    return x


def affine_solve(frame: Sequence, target) -> list:
    """Barycentric coordinates of target w.r.t. d+1 affinely independent points."""
    pts = [point(p) for p in frame]
    target = point(target)
    d = _check_dim(pts + [target])
    if len(pts) != d + 1:
        raise DimensionMismatch(f"need {d + 1} frame points in R^{d}")
    if orientation(pts) == 0:
        raise DegenerateFrame("frame points are affinely dependent")
    A = [[p[k] for p in pts] for k in range(d)] + [[Fraction(1)] * (d + 1)]
    b = list(target) + [Fraction(1)]
    return solve_linear(A, b)


def _barycentric_in_span(x, S):
    """Coefficients of x in aff(S) for affinely independent S, or None."""
    d = len(x)
    A = [[s[k] for s in S] for k in range(d)] + [[Fraction(1)] * len(S)]
    b = list(x) + [Fraction(1)]
    return solve_linear(A, b)


def hull_membership(x, S: Sequence) -> HullMembership:
    """Classify x against conv(S), relative to aff(S), exactly."""
    S = [point(s) for s in S]
    x = point(x)
    if not S:
        raise DimensionMismatch("empty hull")
    _check_dim(S + [x])
    if affine_rank(S) == len(S) - 1:
        lam = _barycentric_in_span(x, S)
        if lam is None or any(v < 0 for v in lam):
            return OUTSIDE
        if len(S) == 1 or all(v > 0 for v in lam):
            return RELATIVE_INTERIOR
        return RELATIVE_BOUNDARY
    return _hull_membership_lp(x, S)


def _hull_membership_lp(x, S) -> HullMembership:
    # lambda_i = mu_i + eps with mu, eps >= 0; maximise eps.  x is in the
    # relative interior iff a strictly positive convex combination exists.
    k = len(S)
    d = len(x)
    A = []
    b = []
    for c in range(d):
        A.append([s[c] for s in S] + [sum(s[c] for s in S)])
        b.append(x[c])
    A.append([Fraction(1)] * k + [Fraction(k)])
    b.append(Fraction(1))
    res = solve_lp([0] * k + [-1], A, b)
    if res.status != OPTIMAL:
        return OUTSIDE
    return RELATIVE_INTERIOR if res.x[-1] > 0 else RELATIVE_BOUNDARY


def in_hull(x, S) -> bool:
    return hull_membership(x, S) is not OUTSIDE


def _intersection_system(hulls):
    """Equality system for x in every conv(H_i); x expressed via hull 0."""
    d = len(hulls[0][0])
    offs = []
    n = 0
    for H in hulls:
        offs.append(n)
        n += len(H)
    A, b = [], []
    for i, H in enumerate(hulls):
        row = [Fraction(0)] * n
        for j in range(len(H)):
            row[offs[i] + j] = Fraction(1)
        A.append(row)
        b.append(Fraction(1))
    H0 = hulls[0]
    for i in range(1, len(hulls)):
        Hi = hulls[i]
        for c in range(d):
            row = [Fraction(0)] * n
            for j, s in enumerate(H0):
                row[j] += s[c]
            for j, s in enumerate(Hi):
                row[offs[i] + j] -= s[c]
            A.append(row)
            b.append(Fraction(0))
    return A, b, n, d


def lex_min_intersection(hulls: Sequence[Sequence]):
    """Lexicographic minimum of the intersection of the hulls, or None.

    Solved as d successive exact linear programs: minimise x1, fix it,
    minimise x2, and so on.
    """
    hulls = [[point(p) for p in H] for H in hulls]
    if not hulls or any(not H for H in hulls):
        raise DimensionMismatch("need nonempty hulls")
    _check_dim([p for H in hulls for p in H])
    A, b, n, d = _intersection_system(hulls)
    H0 = hulls[0]
    fixed = []
    for c in range(d):
        cost = [Fraction(0)] * n
        for j, s in enumerate(H0):
            cost[j] = s[c]
        res = solve_lp(cost, A, b)
        if res.status == UNBOUNDED:
            raise UnboundedProblem("intersection is unbounded")
        if res.status != OPTIMAL:
            return None
        fixed.append(res.value)
        A = A + [cost]
        b = b + [res.value]
    return tuple(fixed)


def _boxes_overlap(hulls) -> bool:
    d = len(hulls[0][0])
    for c in range(d):
        lo = max(min(p[c] for p in H) for H in hulls)
        hi = min(max(p[c] for p in H) for H in hulls)
        if lo > hi:
            return False
    return True


def intersection_nonempty(hulls) -> bool:
    hulls = [[point(p) for p in H] for H in hulls]
    if not _boxes_overlap(hulls):
        return False
    A, b, n, _ = _intersection_system(hulls)
    return solve_lp([0] * n, A, b).status == OPTIMAL


def static_general_position(P: PointSet) -> bool:
    """True iff every (d+1)-subset of P is affinely independent."""
    d = P.dimension
    if d == 2:
        pts = P.points
        for a, b, c in combinations(pts, 3):
            if orient2d(a, b, c) == 0:
                return False
        return True
    for sub in combinations(P.points, d + 1):
        if orientation(sub) == 0:
            return False
    return True


def in_triangle(x, a, b, c) -> HullMembership:
    """Fast exact classification against a nondegenerate triangle."""
    o = orient2d(a, b, c)
    s1 = orient2d(a, b, x) * o
    s2 = orient2d(b, c, x) * o
    s3 = orient2d(c, a, x) * o
    if s1 < 0 or s2 < 0 or s3 < 0:
        return OUTSIDE
    if s1 > 0 and s2 > 0 and s3 > 0:
        return RELATIVE_INTERIOR
    return RELATIVE_BOUNDARY
