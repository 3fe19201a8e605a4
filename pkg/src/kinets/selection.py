"""Tverberg partitions, selection certificates and simplicial depth.

Functions taking a plain list of points report parts as index tuples into
that list; the PointSet-level functions translate indices to point ids.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .errors import DegenerateInput, DimensionMismatch, InternalFailure, SizeMismatch, TooFewPoints
from .geometry import (
    OUTSIDE,
    RELATIVE_BOUNDARY,
    RELATIVE_INTERIOR,
    PointSet,
    hull_membership,
    intersection_nonempty,
    lex_min_intersection,
    point,
    static_general_position,
)

MAX_TVERBERG_DIM = 3


@dataclass(frozen=True)
class TverbergPartition:
    parts: tuple  # tuple of sorted index tuples, canonical order
    witness: tuple


@dataclass(frozen=True)
class SelectionCertificate:
    tuple: tuple
    S: tuple
    parts: tuple
    x: tuple


@dataclass
class DepthReport:
    point: tuple
    depth: int
    boundary_count: int
    bound: Optional[int] = None
    candidates: Optional[int] = None
    b_d: Optional[int] = None


def _general_position_or_raise(pts, d):
    if not static_general_position(PointSet(d, list(pts))):
        raise DegenerateInput("points are not in general position")


def _dim(pts) -> int:
    if not pts:
        raise DimensionMismatch("no points")
    d = len(pts[0])
    if any(len(p) != d for p in pts):
        raise DimensionMismatch("mixed dimensions")
    return d


def radon_partition(D: Sequence, check: bool = True) -> TverbergPartition:
    """The Radon partition of d+2 points in general position in R^d."""
    pts = [point(p) for p in D]
    d = _dim(pts)
    if len(pts) != d + 2:
        raise SizeMismatch(f"Radon partition needs {d + 2} points in R^{d}")
    if check:
        _general_position_or_raise(pts, d)
    lam = _radon_coefficients(pts)
    pos = tuple(i for i, v in enumerate(lam) if v > 0)
    neg = tuple(i for i, v in enumerate(lam) if v < 0)
    parts = tuple(sorted((pos, neg)))
    witness = lex_min_intersection([[pts[i] for i in part] for part in parts])
    return TverbergPartition(parts, witness)


def _radon_coefficients(pts) -> list:
    """A nonzero solution of sum l_i p_i = 0, sum l_i = 0."""
    d = len(pts[0])
    n = len(pts)
    rows = [[p[k] for p in pts] for k in range(d)] + [[Fraction(1)] * n]
    # reduced row echelon form; the null space is one-dimensional here
    M = [r[:] for r in rows]
    pivcols = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [v * inv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivcols.append(c)
        r += 1
    free = next(c for c in range(n) if c not in pivcols)
    lam = [Fraction(0)] * n
    lam[free] = Fraction(1)
    for i, c in enumerate(pivcols):
        lam[c] = -M[i][free]
    return lam


def _bounded_partitions(m: int, r: int, cap: int):
    """Set partitions of range(m) into exactly r blocks of size <= cap.

    Blocks are yielded in order of their smallest element (restricted growth
    strings), which is the canonical enumeration order used for tie-breaks.
    """
    blocks: list = []

    def rec(i):
        if i == m:
            if len(blocks) == r:
                yield tuple(tuple(b) for b in blocks)
            return
        # prune: remaining elements must be able to open the missing blocks
        if r - len(blocks) > m - i:
            return
        for b in blocks:
            if len(b) < cap:
                b.append(i)
                yield from rec(i + 1)
                b.pop()
        if len(blocks) < r:
            blocks.append([i])
            yield from rec(i + 1)
            blocks.pop()

    yield from rec(0)


def tverberg_partitions(D: Sequence, r: int, check: bool = True, first_only: bool = False) -> list:
    """All partitions of D into r parts of size <= d+1 with a common hull point."""
    pts = [point(p) for p in D]
    d = _dim(pts)
    if len(pts) != (r - 1) * (d + 1) + 1:
        raise SizeMismatch(f"Tverberg with r={r} in R^{d} needs {(r - 1) * (d + 1) + 1} points")
    if check:
        _general_position_or_raise(pts, d)
    out = []
    for parts in _bounded_partitions(len(pts), r, d + 1):
        hulls = [[pts[i] for i in part] for part in parts]
        if intersection_nonempty(hulls):
            out.append(TverbergPartition(parts, lex_min_intersection(hulls)))
            if first_only:
                break
    return out


def _certificate_from_partition(pts, parts, d):
    """Run the selection procedure on one Tverberg partition; None on failure."""
    hulls = [[pts[i] for i in part] for part in parts]
    x = lex_min_intersection(hulls)
    if x is None:
        return None
    # move the part whose removal keeps the lex-min to the end
    drop = None
    for k in range(len(parts)):
        rest = [h for i, h in enumerate(hulls) if i != k]
        if lex_min_intersection(rest) == x:
            drop = k
            break
    if drop is None:
        return None
    order = [i for i in range(len(parts)) if i != drop] + [drop]
    A = [list(parts[i]) for i in order]

    full = d + 1
    for j in range(d):
        if len(A[j]) == full and hull_membership(x, [pts[i] for i in A[j]]) is RELATIVE_INTERIOR:
            S = tuple(sorted(A[j]))
            D_parts = [tuple(sorted(A[i])) for i in range(d + 1) if i != j]
            return S, D_parts, x

    need = sum(len(A[i]) for i in range(d)) - d * d
    eliminated = []
    for j in range(d):
        if need == 0:
            break
        if len(A[j]) != full:
            continue
        for a in list(A[j]):
            rest = [pts[i] for i in A[j] if i != a]
            if hull_membership(x, rest) is not OUTSIDE:
                A[j].remove(a)
                eliminated.append(a)
                need -= 1
                break
    if need != 0:
        return None
    S = tuple(sorted(eliminated + A[d]))
    return S, [tuple(sorted(A[i])) for i in range(d)], x


def check_certificate(pts, cert: SelectionCertificate, d: int) -> bool:
    """Independent check of the certificate invariants."""
    if len(cert.S) != d + 1 or len(cert.parts) != d:
        return False
    union = [i for part in cert.parts for i in part]
    if len(union) != d * d or len(set(union)) != d * d:
        return False
    if set(union) & set(cert.S):
        return False
    if set(union) | set(cert.S) != set(cert.tuple):
        return False
    if any(len(part) > d + 1 or not part for part in cert.parts):
        return False
    if lex_min_intersection([[pts[i] for i in part] for part in cert.parts]) != cert.x:
        return False
    return hull_membership(cert.x, [pts[i] for i in cert.S]) is not OUTSIDE


def selection_pair(D: Sequence, check: bool = True) -> SelectionCertificate:
    """Certificate (S, D_1..D_d, x) for a (d^2+d+1)-tuple D."""
    pts = [point(p) for p in D]
    d = _dim(pts)
    if len(pts) != d * d + d + 1:
        raise SizeMismatch(f"selection_pair needs {d * d + d + 1} points in R^{d}")
    if check:
        _general_position_or_raise(pts, d)
    for parts in _bounded_partitions(len(pts), d + 1, d + 1):
        hulls = [[pts[i] for i in part] for part in parts]
        if not intersection_nonempty(hulls):
            continue
        got = _certificate_from_partition(pts, parts, d)
        if got is None:
            continue
        S, D_parts, x = got
        cert = SelectionCertificate(tuple(range(len(pts))), S, tuple(sorted(D_parts)), x)
        if check_certificate(pts, cert, d):
            return cert
    raise InternalFailure("no selection certificate found for a general-position tuple")


def simplex_depth(P: PointSet, x) -> DepthReport:
    """Brute-force count of spanned d-simplices containing x."""
    x = point(x)
    if len(x) != P.dimension:
        raise DimensionMismatch("query point dimension differs from the set")
    d = P.dimension
    depth = boundary = 0
    if d == 2:
        depth, boundary = _depth_2d(P.points, x)
    else:
        for sub in combinations(P.points, d + 1):
            m = hull_membership(x, sub)
            if m is not OUTSIDE:
                depth += 1
                if m is RELATIVE_BOUNDARY:
                    boundary += 1
    return DepthReport(x, depth, boundary)


def _scaled_ints(pts):
    L = 1
    for p in pts:
        for v in p:
            L = math.lcm(L, v.denominator)
    return [tuple(int(v * L) for v in p) for p in pts]


def _depth_2d(points, x):
    # same classification as in_triangle, on integer-scaled coordinates
    pts = _scaled_ints(list(points) + [x])
    qx, qy = pts.pop()
    depth = boundary = 0
    n = len(pts)
    # orientation of x against every directed pair, computed once
    side = {}
    for i in range(n):
        ax, ay = pts[i]
        for j in range(i + 1, n):
            bx, by = pts[j]
            v = (bx - ax) * (qy - ay) - (by - ay) * (qx - ax)
            side[i, j] = (v > 0) - (v < 0)
    for i, j, k in combinations(range(n), 3):
        (ax, ay), (bx, by), (cx, cy) = pts[i], pts[j], pts[k]
        o = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
        o = (o > 0) - (o < 0)
        # orient(a,b,x), orient(b,c,x), orient(c,a,x) = -orient(a,c,x)
        s1 = side[i, j] * o
        s2 = side[j, k] * o
        s3 = -side[i, k] * o
        if s1 < 0 or s2 < 0 or s3 < 0:
            continue
        depth += 1
        if not (s1 > 0 and s2 > 0 and s3 > 0):
            boundary += 1
    return depth, boundary


def first_selection_bound(n: int, d: int, b_d: int = 1) -> int:
    """ceil(C(n, d^2+d+1) / (b_d * C(n, d^2)))."""
    num = math.comb(n, d * d + d + 1)
    den = b_d * math.comb(n, d * d)
    return -(-num // den)


def rich_simplex_bound(n: int, d: int) -> int:
    """ceil(C(n, d^2+d+1) / C(n, d+1))."""
    return -(-math.comb(n, d * d + d + 1) // math.comb(n, d + 1))


def selection_candidates(P: PointSet):
    """Witnesses of all Tverberg partitions of d^2-tuples into d parts.

    Returns (sorted distinct witnesses, b_d measured as the maximum number of
    partitions of a single tuple).
    """
    d = P.dimension
    if d > MAX_TVERBERG_DIM:
        raise DegenerateInput(f"dimension {d} exceeds the enumeration cap {MAX_TVERBERG_DIM}")
    pts = P.points
    k = d * d
    seen = set()
    b_d = 0
    for idx in combinations(range(len(pts)), k):
        sub = [pts[i] for i in idx]
        if d == 1:
            parts = [TverbergPartition(((0,),), sub[0])]
        elif k == d + 2:
            parts = [radon_partition(sub, check=False)]
        else:
            parts = tverberg_partitions(sub, d, check=False)
        b_d = max(b_d, len(parts))
        for tp in parts:
            seen.add(tp.witness)
    return sorted(seen), max(b_d, 1)


def first_selection_point(P: PointSet) -> DepthReport:
    """Deepest Tverberg witness of d^2-tuples (ties: lexicographically smallest)."""
    d, n = P.dimension, len(P)
    if n < d * d + d + 1:
        raise TooFewPoints(f"need at least {d * d + d + 1} points, got {n}")
    if not static_general_position(P):
        raise DegenerateInput("points are not in general position")
    cands, b_d = selection_candidates(P)
    best = None
    for c in cands:
        rep = simplex_depth(P, c)
        if best is None or rep.depth > best.depth:
            best = rep
    best.bound = first_selection_bound(n, d, b_d)
    best.candidates = len(cands)
    best.b_d = b_d
    return best


@dataclass
class RichSimplexResult:
    simplex: tuple  # point ids
    tuples: list  # sorted d^2-tuples of point ids
    bound: int
    certificates: int = 0
    groups: dict = field(default_factory=dict, repr=False)


def rich_simplex(P: PointSet) -> RichSimplexResult:
    """The spanned d-simplex collecting the most certified d^2-tuples."""
    d, n = P.dimension, len(P)
    if n < d * d + d + 1:
        raise TooFewPoints(f"need at least {d * d + d + 1} points, got {n}")
    if not static_general_position(P):
        raise DegenerateInput("points are not in general position")
    groups: dict = {}
    total = 0
    for idx in combinations(range(n), d * d + d + 1):
        cert = selection_pair([P.points[i] for i in idx], check=False)
        # ids listed in input order
        S = tuple(P.ids[idx[i]] for i in sorted(cert.S))
        rest = tuple(P.ids[idx[i]] for i in sorted(i for part in cert.parts for i in part))
        groups.setdefault(S, set()).add(rest)
        total += 1
    rank = {pid: k for k, pid in enumerate(P.ids)}

    def key(ids):
        return [rank[p] for p in ids]

    simplex = min(groups, key=lambda s: (-len(groups[s]), key(s)))
    return RichSimplexResult(
        simplex, sorted(groups[simplex], key=key), rich_simplex_bound(n, d), total, groups
    )
