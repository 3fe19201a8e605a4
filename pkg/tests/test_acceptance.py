"""Acceptance criteria 1-10, each at its stated size and time limit.

Every test records a PASS/FAIL line; the session ends with one summary line
per criterion (see conftest.py).
"""
import math
import random
import time
from fractions import Fraction
from itertools import combinations

import pytest
from helpers import corpus_1d, figure1, planar, record

from kinets.geometry import intersection_nonempty, orientation
from kinets.io import POLYNOMIAL, STATIC, GenSpec, gen_instance
from kinets.kinetic import (
    enumerate_hyperedges,
    greedy_bound,
    hyperedge_bound,
    shatter_function,
    special_events,
    strong_interval_net,
    traces,
    vc_dimension,
    vc_threshold,
    verify_strong_net,
)
from kinets.poly import Poly
from kinets.selection import (
    check_certificate,
    first_selection_point,
    radon_partition,
    rich_simplex,
    selection_candidates,
    selection_pair,
    simplex_depth,
)
from kinets.weaknet import build_weak_net, sample_schedule, split_diagnostic, verify_weak_net


@pytest.fixture(scope="module")
def corpus():
    """The 1D corpus with its hypergraphs, shared by criteria 2, 3 and 10."""
    t0 = time.perf_counter()
    items = [(M, enumerate_hyperedges(M)) for M in corpus_1d(200, seed=0)]
    return items, time.perf_counter() - t0


def test_criterion_01_figure1():
    t0 = time.perf_counter()
    M = figure1()
    tl = special_events(M)
    H = enumerate_hyperedges(M)
    elapsed = time.perf_counter() - t0
    everything = {frozenset(s) for k in range(5) for s in combinations(M.ids, k)}
    missing = everything - H.hyperedges
    want = {frozenset(s) for s in (("p1", "p2", "p4"), ("p1", "p3", "p4"), ("p1", "p4"))}
    events = [(e.time.lo, e.time.hi) for e in tl.events]
    ok = len(H) == 13 and missing == want and events == [(0, 0), (Fraction(1, 2), Fraction(1, 2))] and elapsed < 1
    record(1, ok, f"13 hyperedges={len(H) == 13}, missing ok={missing == want}, events {{0, 1/2}}, {elapsed:.3f}s")
    assert ok


def test_criterion_02_hyperedge_bound(corpus):
    items, setup = corpus
    t0 = time.perf_counter()
    worst = 0.0
    bad = []
    for k, (M, H) in enumerate(items):
        if len(H) > hyperedge_bound(len(M), M.beta):
            bad.append(k)
        for m in range(1, len(M) + 1):
            for A in combinations(M.ids, m):
                c = len(traces(H, A))
                worst = max(worst, c / hyperedge_bound(m, M.beta))
                if c > hyperedge_bound(m, M.beta):
                    bad.append((k, A))
    elapsed = setup + time.perf_counter() - t0
    ok = not bad and elapsed < 120
    record(2, ok, f"200 instances, violations={len(bad)}, max count/bound={worst:.4f}, {elapsed:.1f}s")
    assert ok


def test_criterion_03_strong_nets(corpus):
    items, _ = corpus
    failures, over, survivors, nets = [], [], [], 0
    for k, (M, H) in enumerate(items):
        for r in (2, 3, 4):
            net = strong_interval_net(M, r, H=H)
            nets += 1
            if not verify_strong_net(M, net.members, r, H)[0]:
                failures.append((k, r))
            if len(net.members) > greedy_bound(r, net.heavy_count):
                over.append((k, r))
            for v in net.members:
                rest = [u for u in net.members if u != v]
                if verify_strong_net(M, rest, r, H)[0]:
                    survivors.append((k, r, v))
    ok = not failures and not over and not survivors
    record(3, ok, f"{nets} nets, unverified={len(failures)}, over size bound={len(over)}, "
                  f"deletions not detected={len(survivors)}")
    assert ok


def test_criterion_04_radon_unique():
    rng = random.Random(2024)
    done, bad = 0, 0
    while done < 1000:
        pts = [(rng.randint(-1000, 1000), rng.randint(-1000, 1000)) for _ in range(4)]
        if any(orientation(list(t)) == 0 for t in combinations(pts, 3)):
            continue
        splits = []
        for size in (1, 2):
            for A in combinations(range(4), size):
                B = tuple(i for i in range(4) if i not in A)
                if size == 2 and A > B:
                    continue
                if intersection_nonempty([[pts[i] for i in A], [pts[i] for i in B]]):
                    splits.append(tuple(sorted((A, B))))
        if splits != [radon_partition(pts).parts]:
            bad += 1
        done += 1
    record(4, bad == 0, f"1000 tuples, mismatches={bad}")
    assert bad == 0


def test_criterion_05_selection_certificates():
    t0 = time.perf_counter()
    count, bad = 0, 0
    for s in range(100):
        P = planar(9, 5000 + s)
        for idx in combinations(range(9), 7):
            pts = [P.points[i] for i in idx]
            try:
                ok = check_certificate(pts, selection_pair(pts), 2)
            except Exception:  # noqa: BLE001 - any failure counts against the criterion
                ok = False
            bad += not ok
            count += 1
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 300
    record(5, ok, f"{count} tuples, failures={bad}, {elapsed:.1f}s")
    assert ok


def test_criterion_06_first_selection():
    rows = []
    ok = True
    for n in (10, 12, 14):
        for s in range(5):
            P = planar(n, 100 * n + s)
            rep = first_selection_point(P)
            bound = math.ceil(Fraction((n - 4) * (n - 5) * (n - 6), 210))
            cands, _ = selection_candidates(P)
            oracle = max(simplex_depth(P, c).depth for c in cands)
            ok &= rep.depth >= bound and rep.depth == oracle
            rows.append(f"{n}:{rep.depth}>={bound}")
    record(6, ok, "depth per instance " + " ".join(rows))
    assert ok


def test_criterion_07_rich_simplex():
    rows = []
    ok = True
    for n in (10, 12):
        for s in range(5):
            res = rich_simplex(planar(n, 200 * n + s))
            bound = math.ceil(Fraction((n - 3) * (n - 4) * (n - 5) * (n - 6), 840))
            ok &= len(res.tuples) >= bound == math.ceil(Fraction(math.comb(n, 7), math.comb(n, 3)))
            rows.append(f"{n}:{len(res.tuples)}>={bound}")
    record(7, ok, "tuples per instance " + " ".join(rows))
    assert ok


WEAK_NET_CASES = [(STATIC, 0, s) for s in (1, 2, 3)] + [(POLYNOMIAL, 1, s) for s in (1, 2, 3)]


@pytest.mark.slow
@pytest.mark.parametrize("mode, beta, seed", WEAK_NET_CASES, ids=[f"{m.lower()}-{s}" for m, _, s in WEAK_NET_CASES])
def test_criterion_08_weak_net(mode, beta, seed):
    P = gen_instance(GenSpec(2, 49, mode, beta, seed)).moving_2d()
    t0 = time.perf_counter()
    net = build_weak_net(P, 2)
    t_build = time.perf_counter() - t0
    schedule = sample_schedule(P, net, seed=seed)
    rep = verify_weak_net(P, net, 2, schedule, seed=seed, subsets=200)
    t_verify = time.perf_counter() - t0 - t_build
    polynomial = all(isinstance(line.abscissa, Poly) for line in net.lines)
    split_bad = [t for t, _ in schedule if not split_diagnostic(P, net, 2, t)]
    elapsed = time.perf_counter() - t0
    ok = (not net.fallback and rep.passed and polynomial and not split_bad and elapsed <= 900)
    record(8, ok, f"{mode.lower()} seed {seed}: |N|={net.size} lines={len(net.lines)} times={len(schedule)} "
                  f"verified={rep.passed} split_fail={len(split_bad)} build {t_build:.0f}s "
                  f"verify {t_verify:.0f}s total {elapsed:.0f}s")
    assert ok


def test_criterion_09_fallback():
    P = gen_instance(GenSpec(2, 10, POLYNOMIAL, 1, 9)).moving_2d()
    net = build_weak_net(P, 2)
    rep = verify_weak_net(P, net, 2, sample_schedule(P, net, seed=9), seed=9)
    ok = net.fallback and net.fallback_ids == P.ids and rep.passed
    record(9, ok, f"fallback={net.fallback}, N=P={net.fallback_ids == P.ids}, verified={rep.passed}")
    assert ok


def test_criterion_10_vc(corpus):
    items, _ = corpus
    H = enumerate_hyperedges(figure1())
    vc, pi2 = vc_dimension(H), shatter_function(H, 2)
    below = [vc_dimension(Hk) < vc_threshold(M.beta) for M, Hk in items]
    ok = vc == 3 and pi2 == 4 and all(below)
    record(10, ok, f"figure-1 vc={vc}, pi(2)={pi2}; corpus below threshold {sum(below)}/{len(below)}")
    assert ok
