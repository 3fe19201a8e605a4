"""Kinetic weak 1/r-nets for points moving polynomially in the plane.

Construction: a strong net N1 of the x-projection picks moving vertical
lines x = w(t); on each line the heights of all chords of P form a moving
scalar family F_h, and a strong net of F_h gives the net points (w, h) on
that line.  Verification tests the weak-net property exactly at a sampled
set of rational times.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional

import numpy as np

from .errors import GeneralPositionViolation, IdenticalPoints, PreconditionError
from .kinetic import MovingScalarSet
from .poly import Poly, RationalFunction, eval_ratfun, isolate_real_roots, poly_gcd, simplest_between
from .sweep import (
    Events,
    WindowSweep,
    batch_roots,
    merge_identical,
    poly_rows_product,
    time_groups,
    window_strong_net,
)

LAMBDA1 = Fraction(1, 4)
LAMBDA2 = Fraction(1, 8)
FALLBACK_FACTOR = 24


@dataclass
class MovingPointSet2D:
    points: list  # (id, (Poly x, Poly y)) in input order

    def __post_init__(self):
        pts = []
        for pid, (x, y) in self.points:
            x = x if isinstance(x, Poly) else Poly(x)
            y = y if isinstance(y, Poly) else Poly(y)
            pts.append((pid, (x, y)))
        self.points = pts
        ids = self.ids
        if len(set(ids)) != len(ids):
            raise ValueError("point ids must be unique")

    @classmethod
    def from_coeffs(cls, coords, ids=None):
        ids = ids or [f"p{i + 1}" for i in range(len(coords))]
        return cls([(pid, (Poly(x), Poly(y))) for pid, (x, y) in zip(ids, coords)])

    @property
    def ids(self) -> list:
        return [pid for pid, _ in self.points]

    @property
    def coords(self) -> list:
        return [c for _, c in self.points]

    @property
    def beta(self) -> int:
        return max((max(x.degree(), y.degree(), 0) for x, y in self.coords), default=0)

    def __len__(self):
        return len(self.points)

    def at(self, t) -> list:
        t = Fraction(t)
        return [(x(t), y(t)) for x, y in self.coords]


def project_axis(P: MovingPointSet2D, k: int) -> MovingScalarSet:
    if k not in (1, 2):
        raise ValueError("axis must be 1 or 2")
    return MovingScalarSet([(pid, RationalFunction(c[k - 1])) for pid, c in P.points])


class ChordHeight(RationalFunction):
    """Height of a moving chord on a moving vertical line.

    Behaves as the reduced rational function for all algebra; calling it
    returns None wherever the chord is vertical (the unreduced denominator
    vanishes), since there the intersection is not a single point.
    """

    __slots__ = ("raw_den", "pair")

    def __init__(self, num, den, raw_den=None, pair=None):
        super().__init__(num, den)
        self.raw_den = den if raw_den is None else raw_den
        self.pair = pair

    def __call__(self, t):
        t = Fraction(t)
        if self.raw_den.sign_at(t) == 0:
            return None
        return eval_ratfun(self, t)


def chord_height(pi, pj, w: Poly, pair=None) -> ChordHeight:
    """x2 of aff(pi(t), pj(t)) on the line x1 = w(t).

    A pair with identical abscissae is vertical at every t; it is kept in the
    family as the static function 0 and never evaluates to a point.
    """
    (xi, yi), (xj, yj) = pi, pj
    dx = xj - xi
    dy = yj - yi
    if dx.is_zero():
        if dy.is_zero():
            raise IdenticalPoints("chord of identical moving points", pair=pair)
        return ChordHeight(Poly(), Poly((1,)), raw_den=Poly(), pair=pair)
    num = yi * dx + (w - xi) * dy
    return ChordHeight(num, dx, pair=pair)


# ---------------------------------------------------------------------------
# kinetic general position


def _coeff_array(polys, width, dtype=object):
    return np.array([list(p.coeffs) + [0] * (width - len(p.coeffs)) for p in polys], dtype=dtype)


def _coord_arrays(P: MovingPointSet2D):
    width = P.beta + 1
    big = max((abs(c) for x, y in P.coords for c in x.coeffs + y.coeffs), default=0)
    dtype = np.int64 if 8 * width * big * big < 2 ** 52 else object
    X = _coeff_array([x for x, _ in P.coords], width, dtype)
    Y = _coeff_array([y for _, y in P.coords], width, dtype)
    return X, Y


def collinearity_polys(P: MovingPointSet2D):
    """(triples, coefficient rows) of det[b - a, c - a] for every triple a<b<c."""
    n = len(P)
    X, Y = _coord_arrays(P)
    T = np.array(list(combinations(range(n), 3)), dtype=np.int64).reshape(-1, 3)
    a, b, c = T[:, 0], T[:, 1], T[:, 2]
    C = poly_rows_product(X[b] - X[a], Y[c] - Y[a]) - poly_rows_product(Y[b] - Y[a], X[c] - X[a])
    return T, C


def kinetic_general_position(P: MovingPointSet2D):
    """(ok, violation): pairs never meet and no 4 points are ever collinear (t >= 0)."""
    ids = P.ids
    coords = P.coords
    for i, j in combinations(range(len(P)), 2):
        dx = coords[i][0] - coords[j][0]
        dy = coords[i][1] - coords[j][1]
        if dx.is_zero() and dy.is_zero():
            return False, f"coincident pair {ids[i]},{ids[j]} at every t"
        g = dy if dx.is_zero() else (dx if dy.is_zero() else poly_gcd(dx, dy))
        if g.degree() >= 1:
            roots = isolate_real_roots(g)
            if roots:
                return False, f"coincident pair {ids[i]},{ids[j]} at t={roots[0]}"
    if len(P) < 4:
        return True, None
    T, C = collinearity_polys(P)
    zero = ~(C != 0).any(axis=1)
    always = [tuple(T[k]) for k in np.nonzero(zero)[0]]
    live = np.nonzero(~zero)[0]
    ev = Events.empty()
    nonconst = live[(C[live, 1:] != 0).any(axis=1)] if C.shape[1] > 1 else live[:0]
    if len(nonconst):
        batch_roots(C[nonconst], nonconst, np.zeros(len(nonconst), dtype=np.int64), ev, keep_zero=True)
    # two triples sharing a pair and vanishing together mean 4 collinear points
    for tau, members in time_groups(ev):
        trips = [tuple(T[ev.i[k]]) for k in members]
        for s, u in combinations(trips, 2):
            if len(set(s) & set(u)) >= 2:
                quad = sorted(set(s) | set(u))
                t = tau if tau is not None else ev.interval(members[0])
                return False, "4-collinear " + ",".join(ids[q] for q in quad) + f" at t={t}"
    if always:
        vanishing = {tuple(T[ev.i[k]]) for k in range(len(ev))} | set(always)
        for s in always:
            for u in vanishing:
                if u != s and len(set(s) & set(u)) >= 2:
                    quad = sorted(set(s) | set(u))
                    return False, "4-collinear " + ",".join(ids[q] for q in quad) + " (a triple is collinear at all t)"
    return True, None


# ---------------------------------------------------------------------------
# construction


@dataclass
class Step1Line:
    generator: str
    abscissa: Poly
    height_net: list  # ChordHeight functions
    chord_index: list  # generating (id, id) pairs, parallel to height_net
    stats: dict = field(default_factory=dict)
    event_bounds: Optional[tuple] = field(default=None, repr=False)


@dataclass
class KineticWeakNet:
    lines: list
    r: Fraction
    lambdas: tuple = (LAMBDA1, LAMBDA2)
    fallback: bool = False
    fallback_ids: list = field(default_factory=list)
    stage1: dict = field(default_factory=dict)
    stage1_bounds: Optional[tuple] = field(default=None, repr=False)

    @property
    def size(self) -> int:
        if self.fallback:
            return len(self.fallback_ids)
        return sum(len(line.height_net) for line in self.lines)

    def points_at(self, P: MovingPointSet2D, t) -> list:
        """Net points at time t, skipping undefined ones."""
        t = Fraction(t)
        if self.fallback:
            keep = set(self.fallback_ids)
            return [p for pid, p in zip(P.ids, P.at(t)) if pid in keep]
        out = []
        for line in self.lines:
            x = line.abscissa(t)
            for h in line.height_net:
                y = h(t)
                if y is not None:
                    out.append((x, y))
        return out

    def without_line(self, k: int) -> "KineticWeakNet":
        lines = self.lines[:k] + self.lines[k + 1:]
        return KineticWeakNet(lines, self.r, self.lambdas, False, [], self.stage1, self.stage1_bounds)


def build_weak_net(
    P: MovingPointSet2D,
    r,
    force_construct: bool = False,
    threshold: int = FALLBACK_FACTOR,
    check_position: bool = True,
    keep_events: bool = True,
) -> KineticWeakNet:
    r = Fraction(r)
    n = len(P)
    if check_position:
        ok, why = kinetic_general_position(P)
        if not ok:
            raise GeneralPositionViolation(why)
    if n <= threshold * r and not force_construct:
        return KineticWeakNet([], r, fallback=True, fallback_ids=list(P.ids))
    xs = [RationalFunction(x) for x, _ in P.coords]
    n1 = window_strong_net(xs, r / LAMBDA1)
    stage1 = {
        "members": [P.ids[k] for k in n1.members],
        "threshold": n1.threshold,
        "runs": n1.rows,
        "events": n1.events,
        "verified": n1.verify(),
    }
    bounds1 = None
    if keep_events:
        classes = merge_identical(xs)
        bounds1 = WindowSweep([xs[c[0]] for c in classes]).group_bounds()
    pairs = list(combinations(range(n), 2))
    lines = []
    for g in n1.members:
        w = P.coords[g][0]
        fam = [chord_height(P.coords[i], P.coords[j], w, pair=(P.ids[i], P.ids[j])) for i, j in pairs]
        net = window_strong_net(fam, r * r / LAMBDA2)
        chosen = net.members
        stats = {
            "family_size": len(fam),
            "classes": len(net.classes),
            "threshold": net.threshold,
            "runs": net.rows,
            "events": net.events,
            "verified": net.verify(),
        }
        bounds = None
        if keep_events:
            bounds = net.event_bounds
        lines.append(
            Step1Line(
                generator=P.ids[g],
                abscissa=w,
                height_net=[fam[k] for k in chosen],
                chord_index=[fam[k].pair for k in chosen],
                stats=stats,
                event_bounds=bounds,
            )
        )
    return KineticWeakNet(lines, r, fallback=False, stage1=stage1, stage1_bounds=bounds1)


# ---------------------------------------------------------------------------
# verification schedule


def _near_times(lo: np.ndarray, hi: np.ndarray, picks, tag: str):
    """Rationals just left and right of chosen events, kept inside neighbouring gaps."""
    out = []
    m = len(lo)
    for k in picks:
        left_end = Fraction(float(lo[k]))
        right_end = Fraction(float(hi[k]))
        prev = Fraction(float(hi[k - 1])) if k > 0 else Fraction(0)
        nxt = Fraction(float(lo[k + 1])) if k + 1 < m else right_end + 1
        if prev < left_end:
            gap = min(left_end - prev, Fraction(1, 10 ** 6))
            out.append((simplest_between(left_end - gap, left_end), tag + "-left"))
        if right_end < nxt:
            gap = min(nxt - right_end, Fraction(1, 10 ** 6))
            out.append((simplest_between(right_end, right_end + gap), tag + "-right"))
    return out


def _mid_times(lo, hi, picks, tag):
    out = []
    m = len(lo)
    for k in picks:
        a = Fraction(float(hi[k]))
        b = Fraction(float(lo[k + 1])) if k + 1 < m else a + 2
        if a < b:
            out.append((simplest_between(a, b), tag))
    return out


def _pick(rng, m, cap):
    if m <= cap:
        return list(range(m))
    return sorted(rng.sample(range(m), cap))


def sample_schedule(
    P: MovingPointSet2D,
    net: KineticWeakNet,
    seed: int = 0,
    horizon=10,
    count: int = 64,
    cap: int = 16,
) -> list:
    """Sorted list of (time, tags) to verify at.

    Pools: t = 0; midpoints of x-projection event gaps; times just beside
    those events; the same two pools for every line's chord family; times
    beside 3-point collinearities; and ``count`` seeded random rationals in
    [0, horizon].  Each structured pool is subsampled (seeded) to ``cap``.
    """
    rng = random.Random(seed)
    pool = [(Fraction(0), "origin")]
    b1 = net.stage1_bounds
    if b1 is None:
        xs = [RationalFunction(x) for x, _ in P.coords]
        classes = merge_identical(xs)
        b1 = WindowSweep([xs[c[0]] for c in classes]).group_bounds()
    lo, hi = b1
    if len(lo):
        pool += _mid_times(lo, hi, _pick(rng, len(lo), cap), "x-gap")
        pool += _near_times(lo, hi, _pick(rng, len(lo), cap // 2), "x-event")
    line_events = [(k, line.event_bounds) for k, line in enumerate(net.lines) if line.event_bounds is not None]
    total = sum(len(b[0]) for _, b in line_events)
    if total:
        flat = [(k, e) for k, b in line_events for e in range(len(b[0]))]
        for k, e in (flat[i] for i in _pick(rng, total, cap)):
            lo, hi = line_events[k][1]
            pool += _mid_times(lo, hi, [e], f"line{k}-gap")
        for k, e in (flat[i] for i in _pick(rng, total, cap // 2)):
            lo, hi = line_events[k][1]
            pool += _near_times(lo, hi, [e], f"line{k}-event")
    if len(P) >= 3 and P.beta > 0:
        T, C = collinearity_polys(P)
        rows = np.nonzero((C[:, 1:] != 0).any(axis=1))[0]
        ev = Events.empty()
        if len(rows):
            batch_roots(C[rows], rows, np.zeros(len(rows), dtype=np.int64), ev)
        groups = time_groups(ev)
        if groups:
            glo, ghi = [], []
            for tau, members in groups:
                iv = tau if tau is not None else ev.interval(members[0])
                glo.append(float(iv.lo))
                ghi.append(float(iv.hi))
            pool += _near_times(np.array(glo), np.array(ghi), _pick(rng, len(glo), cap // 2), "collinear")
    H = Fraction(horizon)
    den = 1000
    for _ in range(count):
        pool.append((Fraction(rng.randint(0, int(H * den)), den), "random"))
    merged: dict = {}
    for t, tag in pool:
        if t < 0:
            continue
        merged.setdefault(t, set()).add(tag)
    return [(t, sorted(tags)) for t, tags in sorted(merged.items())]


# ---------------------------------------------------------------------------
# verification


@dataclass
class VerificationReport:
    times: list  # (time, tags)
    families: list
    failures: list
    net_size: int
    stage_sizes: dict
    checks: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures


def _scaled_coords(P: MovingPointSet2D, t: Fraction):
    """Integer arrays X, Y with P(t) = (X, Y) / q^beta."""
    p, q = t.numerator, t.denominator
    beta = P.beta
    xs, ys = [], []
    for x, y in P.coords:
        xs.append(x.scaled_eval(p, q) * q ** (beta - max(x.degree(), 0)))
        ys.append(y.scaled_eval(p, q) * q ** (beta - max(y.degree(), 0)))
    big = max(max(map(abs, xs)), max(map(abs, ys)))
    dtype = np.int64 if big < 2 ** 30 else object
    return np.array(xs, dtype=dtype), np.array(ys, dtype=dtype), q ** beta


def _orient_all(X, Y):
    """O[i, j, k] = orient(p_i, p_j, p_k)."""
    dx = X[None, :] - X[:, None]
    dy = Y[None, :] - Y[:, None]
    rx = X[None, None, :] - X[:, None, None]
    ry = Y[None, None, :] - Y[:, None, None]
    return dx[:, :, None] * ry - dy[:, :, None] * rx


def _orient(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def convex_hull(points) -> list:
    """Exact monotone-chain hull (counter-clockwise, no collinear vertices)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _orient(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _orient(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _in_hull(hull, q) -> bool:
    """Closed membership of q in a ccw hull (any size)."""
    if len(hull) == 1:
        return hull[0] == q
    if len(hull) == 2:
        a, b = hull
        if _orient(a, b, q) != 0:
            return False
        return min(a[0], b[0]) <= q[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= q[1] <= max(a[1], b[1])
    return all(_orient(hull[k], hull[(k + 1) % len(hull)], q) >= 0 for k in range(len(hull)))


def heavy_halfplanes(P: MovingPointSet2D, t, r):
    """Membership matrix of closed halfplanes through two points with > n/r points.

    Returns (pairs as (i, j) index array, boolean membership rows).
    """
    t = Fraction(t)
    r = Fraction(r)
    n = len(P)
    X, Y = _scaled_coords(P, t)[:2]
    O = _orient_all(X, Y)
    inside = O >= 0
    if inside.dtype == object:
        inside = inside.astype(bool)
    counts = inside.sum(axis=2)
    idx = np.array([(i, j) for i in range(n) for j in range(n) if i != j and counts[i, j] * r > n], dtype=np.int64)
    if len(idx) == 0:
        return idx.reshape(0, 2), np.zeros((0, n), dtype=bool)
    return idx, inside[idx[:, 0], idx[:, 1]]


def verify_weak_net(
    P: MovingPointSet2D,
    net: KineticWeakNet,
    r,
    times,
    seed: int = 0,
    subsets: int = 200,
    max_failures: int = 10,
) -> VerificationReport:
    r = Fraction(r)
    n = len(P)
    k_sub = min(math.floor(n / r) + 1, n)
    failures = []
    checks = 0
    times = [(Fraction(x[0]), x[1]) if isinstance(x, tuple) else (Fraction(x), []) for x in times]
    for ti, (t, _tags) in enumerate(times):
        pts = P.at(t)
        netpts = net.points_at(P, t)
        hull = convex_hull(netpts)
        # (a) halfplanes
        idx, member = heavy_halfplanes(P, t, r)
        for row, (i, j) in enumerate(idx):
            checks += 1
            a, b = pts[i], pts[j]
            if not any(_orient(a, b, q) >= 0 for q in hull):
                failures.append({
                    "time": t,
                    "family": "halfplane",
                    "range": (P.ids[i], P.ids[j]),
                    "subset": [P.ids[k] for k in np.nonzero(member[row])[0]],
                })
                break
        # (b) seeded subset hulls
        rng = random.Random(seed * 1_000_003 + ti)
        fx = np.array([float(q[0]) for q in netpts])
        fy = np.array([float(q[1]) for q in netpts])
        for _ in range(subsets):
            checks += 1
            S = sorted(rng.sample(range(n), k_sub))
            hs = convex_hull([pts[k] for k in S])
            if not _subset_hull_hit(hs, netpts, fx, fy):
                failures.append({
                    "time": t,
                    "family": "subset-hull",
                    "range": [P.ids[k] for k in S],
                    "subset": [P.ids[k] for k in S],
                })
                break
        if len(failures) >= max_failures:
            break
    sizes = {"N": net.size}
    if not net.fallback:
        sizes["N1"] = len(net.lines)
        sizes["per_line"] = [len(line.height_net) for line in net.lines]
    return VerificationReport(list(times), ["halfplane", "subset-hull"], failures, net.size, sizes, checks)


def _subset_hull_hit(hull, netpts, fx, fy) -> bool:
    if not netpts:
        return False
    m = len(hull)
    if m >= 3:
        # float filter: points clearly inside, then one exact confirmation
        hx = np.array([float(p[0]) for p in hull])
        hy = np.array([float(p[1]) for p in hull])
        ex = np.roll(hx, -1) - hx
        ey = np.roll(hy, -1) - hy
        cr = ex[None, :] * (fy[:, None] - hy[None, :]) - ey[None, :] * (fx[:, None] - hx[None, :])
        scale = (np.abs(ex) + np.abs(ey))[None, :] * (np.abs(fx)[:, None] + np.abs(fy)[:, None] + np.abs(hx)[None, :] + np.abs(hy)[None, :] + 1)
        clear = (cr > 1e-9 * scale).all(axis=1)
        for k in np.nonzero(clear)[0][:3]:
            if _in_hull(hull, netpts[k]):
                return True
    return any(_in_hull(hull, q) for q in netpts)


def split_diagnostic(P: MovingPointSet2D, net: KineticWeakNet, r, t, details: bool = False):
    """Every heavy halfplane has > n/(4r) of its points strictly on each side of some line."""
    r = Fraction(r)
    n = len(P)
    if net.fallback:
        raise PreconditionError("split diagnostic needs a constructed (non-fallback) net")
    t = Fraction(t)
    idx, member = heavy_halfplanes(P, t, r)
    xs = [x(t) for x, _ in P.coords]
    need = Fraction(n) / (4 * r)
    if not net.lines:
        ok = len(idx) == 0
        return (ok, None if ok else 0) if details else ok
    ws = [line.abscissa(t) for line in net.lines]
    left = np.array([[x < w for w in ws] for x in xs], dtype=np.int64)
    right = np.array([[x > w for w in ws] for x in xs], dtype=np.int64)
    M = member.astype(np.int64)
    L = M @ left
    R = M @ right
    good = ((L > need) & (R > need)).any(axis=1)
    ok = bool(good.all())
    if details:
        bad = None if ok else int(np.nonzero(~good)[0][0])
        return ok, (None if bad is None else (P.ids[idx[bad][0]], P.ids[idx[bad][1]]))
    return ok
