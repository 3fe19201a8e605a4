"""Kinetic interval hypergraphs of points moving on the real line.

This is the exact reference engine: events are isolated with Sturm
sequences, orders are computed at rational sample times between events and
exactly at the events themselves.  It is meant for small instances; the
window sweep in :mod:`kinets.sweep` handles the large ones.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from itertools import combinations
from typing import Iterable, Optional

from .errors import IdenticalPoints, OutOfRange, ResampleLimit
from .poly import (
    IsolatingInterval,
    RationalFunction,
    compare_roots,
    cross_difference,
    eval_ratfun,
    exact_root,
    isolate_real_roots,
    sign_at_root,
)

ORIGIN = "ORIGIN"
COINCIDENCE = "COINCIDENCE"
UNDEFINED = "UNDEFINED"


@dataclass
class MovingScalarSet:
    points: list  # (id, RationalFunction) pairs, in input order

    def __post_init__(self):
        pts = []
        for pid, f in self.points:
            if not isinstance(f, RationalFunction):
                f = RationalFunction(f)
            pts.append((pid, f))
        self.points = pts
        ids = [pid for pid, _ in pts]
        if len(set(ids)) != len(ids):
            raise ValueError("point ids must be unique")

    @classmethod
    def from_functions(cls, funcs, ids=None):
        ids = ids or [f"p{i + 1}" for i in range(len(funcs))]
        return cls(list(zip(ids, funcs)))

    @property
    def ids(self) -> list:
        return [pid for pid, _ in self.points]

    @property
    def functions(self) -> list:
        return [f for _, f in self.points]

    @property
    def beta(self) -> int:
        return max((f.beta() for f in self.functions), default=0)

    def __len__(self):
        return len(self.points)

    def id_order(self) -> dict:
        return {pid: i for i, pid in enumerate(self.ids)}


@dataclass
class Event:
    time: IsolatingInterval
    tags: set = field(default_factory=set)

    @property
    def approx(self) -> float:
        return self.time.approx()


@dataclass
class EventTimeline:
    events: list  # Event objects, strictly increasing in time

    def times(self) -> list:
        return [e.time for e in self.events]


@dataclass
class KineticIntervalHypergraph:
    vertices: list
    hyperedges: set

    def __len__(self):
        return len(self.hyperedges)

    def sorted_edges(self) -> list:
        rank = {v: i for i, v in enumerate(self.vertices)}
        return sorted(self.hyperedges, key=lambda e: (len(e), sorted(rank[v] for v in e)))


@dataclass
class StrongNet:
    members: list
    epsilon: Fraction
    heavy_count: int = 0
    method: str = "greedy"


def check_identical(M: MovingScalarSet):
    seen = {}
    for pid, f in M.points:
        if f in seen:
            raise IdenticalPoints(f"{seen[f]} and {pid} are the same function", pair=(seen[f], pid))
        seen[f] = pid


def special_events(M: MovingScalarSet, allow_identical: bool = False) -> EventTimeline:
    """t = 0, pair coincidences and poles on [0, oo), merged by exact time."""
    if not allow_identical:
        check_identical(M)
    raw = [(exact_root(0), (ORIGIN,))]
    pts = M.points
    for (a, f), (b, g) in combinations(pts, 2):
        d = cross_difference(f, g)
        if d.is_zero():
            continue
        for iv in isolate_real_roots(d):
            raw.append((iv, (COINCIDENCE, a, b)))
    for pid, f in pts:
        for iv in isolate_real_roots(f.den):
            raw.append((iv, (UNDEFINED, pid)))
    return EventTimeline(_merge_events(raw))


def _merge_events(raw) -> list:
    raw.sort(key=cmp_to_key(lambda x, y: compare_roots(x[0], y[0])))
    events: list = []
    for iv, tag in raw:
        if events and compare_roots(events[-1].time, iv) == 0:
            ev = events[-1]
            # keep the exact representative when there is one
            if iv.is_exact and not ev.time.is_exact:
                ev.time = iv
            ev.tags.add(tag)
        else:
            events.append(Event(iv, {tag}))
    return events


def rational_between(a: IsolatingInterval, b: IsolatingInterval) -> Fraction:
    """A rational strictly between the distinct algebraic numbers a < b."""
    while not a.hi < b.lo:
        a, b = a.refine(), b.refine()
    return (a.hi + b.lo) / 2


def rational_after(a: IsolatingInterval) -> Fraction:
    return a.hi + 1


def interval_sample_times(timeline: EventTimeline) -> list:
    """One rational inside each open interval between consecutive events."""
    ev = timeline.events
    out = [rational_between(ev[k].time, ev[k + 1].time) for k in range(len(ev) - 1)]
    out.append(rational_after(ev[-1].time))
    return out


def positions_at(M: MovingScalarSet, t) -> list:
    """Points defined at rational t, grouped into positions by equal value."""
    vals = []
    for pid, f in M.points:
        v = eval_ratfun(f, t)
        if v is not None:
            vals.append((v, pid))
    vals.sort(key=lambda x: x[0])
    return _group(vals, lambda a, b: a[0] == b[0])


def _group(items, same) -> list:
    out: list = []
    for it in items:
        if out and same(out[-1][-1], it):
            out[-1].append(it)
        else:
            out.append([it])
    return [[pid for _, pid in grp] for grp in out]


def positions_at_event(M: MovingScalarSet, tau: IsolatingInterval) -> list:
    """Exact configuration at an algebraic time: coincident points share a position."""
    live = []
    for pid, f in M.points:
        s = sign_at_root(f.den, tau)
        if s != 0:
            live.append((f, pid, s))

    def cmp(a, b):
        (f, _, sf), (g, _, sg) = a, b
        return sign_at_root(cross_difference(f, g), tau) * sf * sg

    live.sort(key=cmp_to_key(cmp))
    out: list = []
    for it in live:
        if out and cmp(out[-1][-1], it) == 0:
            out[-1].append(it)
        else:
            out.append([it])
    return [[pid for _, pid, _ in grp] for grp in out]


def contiguous_runs(positions) -> Iterable[frozenset]:
    for a in range(len(positions)):
        acc = set()
        for b in range(a, len(positions)):
            acc.update(positions[b])
            yield frozenset(acc)


def enumerate_hyperedges(M: MovingScalarSet, allow_identical: bool = False) -> KineticIntervalHypergraph:
    """All subsets realizable as I ∩ P(t) for a closed interval I and t >= 0."""
    timeline = special_events(M, allow_identical=allow_identical)
    edges = {frozenset()}
    for t in interval_sample_times(timeline):
        edges.update(contiguous_runs(positions_at(M, t)))
    for ev in timeline.events:
        edges.update(contiguous_runs(positions_at_event(M, ev.time)))
    return KineticIntervalHypergraph(M.ids, edges)


def hyperedge_bound(n: int, beta: int) -> int:
    return (10 * beta + 4) * n ** 4


def hyperedge_bound_ok(M: MovingScalarSet, H: Optional[KineticIntervalHypergraph] = None):
    H = H or enumerate_hyperedges(M)
    count = len(H)
    bound = hyperedge_bound(len(M), M.beta)
    return count, bound, count <= bound


def traces(H: KineticIntervalHypergraph, A) -> set:
    A = frozenset(A)
    return {e & A for e in H.hyperedges}


def shatter_function(H: KineticIntervalHypergraph, m: int) -> int:
    n = len(H.vertices)
    if not 1 <= m <= n:
        raise OutOfRange(f"m must lie in [1, {n}], got {m}")
    return max(len(traces(H, A)) for A in combinations(H.vertices, m))


def vc_dimension(H: KineticIntervalHypergraph) -> int:
    """Largest m such that some m-subset is shattered."""
    best = 0 if H.hyperedges else -1
    for m in range(1, len(H.vertices) + 1):
        full = 2 ** m
        if any(len(traces(H, A)) == full for A in combinations(H.vertices, m)):
            best = m
        else:
            break
    return best


def vc_threshold(beta: int) -> int:
    """Smallest D with 2^D > (10 beta + 4) D^4."""
    D = 1
    while 2 ** D <= hyperedge_bound(D, beta):
        D += 1
    return D


def _heavy(H: KineticIntervalHypergraph, n: int, r) -> list:
    r = Fraction(r)
    return [e for e in H.sorted_edges() if len(e) * r > n]


def greedy_bound(r, heavy_count: int) -> int:
    return math.ceil(Fraction(r) * (1 + math.log(max(1, heavy_count))))


def greedy_hitting_set(vertices: list, sets: list) -> list:
    """Repeatedly take the vertex in most unhit sets; ties go to the earlier vertex."""
    rank = {v: i for i, v in enumerate(vertices)}
    unhit = [set(s) for s in sets]
    chosen = []
    while unhit:
        counts = {}
        for s in unhit:
            for v in s:
                counts[v] = counts.get(v, 0) + 1
        v = min(counts, key=lambda u: (-counts[u], rank[u]))
        chosen.append(v)
        unhit = [s for s in unhit if v not in s]
    return sorted(chosen, key=rank.__getitem__)


def strong_interval_net(
    M: MovingScalarSet,
    r,
    method: str = "greedy",
    seed: int = 0,
    H: Optional[KineticIntervalHypergraph] = None,
    max_tries: int = 200,
) -> StrongNet:
    """Strong 1/r-net of the kinetic interval hypergraph of M.

    ``method="greedy"`` runs the greedy hitting set over all heavy hyperedges
    (size > n/r).  ``method="sample"`` draws seeded uniform samples of the
    greedy-bound size and retries until one verifies.
    """
    r = Fraction(r)
    H = H or enumerate_hyperedges(M)
    n = len(M)
    heavy = _heavy(H, n, r)
    if method == "greedy":
        members = greedy_hitting_set(M.ids, heavy)
        return StrongNet(members, 1 / r, len(heavy), "greedy")
    if method != "sample":
        raise ValueError(f"unknown method {method!r}")
    rng = random.Random(seed)
    size = min(n, greedy_bound(r, len(heavy)))
    order = M.id_order()
    for _ in range(max_tries):
        pick = set(rng.sample(M.ids, size))
        if all(e & pick for e in heavy):
            return StrongNet(sorted(pick, key=order.__getitem__), 1 / r, len(heavy), "sample")
    raise ResampleLimit(f"no verified sample of size {size} after {max_tries} tries")


def verify_strong_net(M: MovingScalarSet, N, r, H: Optional[KineticIntervalHypergraph] = None):
    """(ok, counterexample): every hyperedge with > n/r points must meet N."""
    H = H or enumerate_hyperedges(M)
    N = set(N)
    for e in _heavy(H, len(M), r):
        if not e & N:
            return False, e
    return True, None
