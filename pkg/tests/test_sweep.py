"""Window sweep engine, checked against the event-by-event enumeration route."""
import random
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from helpers import figure1, random_poly

from kinets.kinetic import MovingScalarSet, enumerate_hyperedges
from kinets.poly import Poly, RationalFunction, compare_roots, isolate_real_roots
from kinets.sweep import (
    Events,
    WindowSweep,
    batch_roots,
    greedy_rows,
    merge_identical,
    minimal_rows,
    rows_hit,
    time_groups,
    unique_rows,
    window_strong_net,
)


def random_family(rng, n, beta, repeat=0.15, rational=0.4, c=5):
    funcs = []
    for _ in range(n):
        if funcs and rng.random() < repeat:
            funcs.append(rng.choice(funcs))
            continue
        num = random_poly(rng, beta, c)
        den = Poly([1]) if rng.random() > rational else random_poly(rng, rng.randint(0, beta), c)
        funcs.append(RationalFunction(num, den))
    return funcs


def check_family(funcs, probe):
    """Minimal recorded runs of weight >= K equal the minimal heavy hyperedges."""
    M = MovingScalarSet.from_functions(funcs)
    H = enumerate_hyperedges(M, allow_identical=True)
    classes = merge_identical(funcs)
    reps = [funcs[c[0]] for c in classes]
    sw = WindowSweep(reps, [len(c) for c in classes], probe=probe)
    for K in range(1, len(funcs) + 1):
        flat, offs = unique_rows(*sw.windows(K))
        got = {frozenset(M.ids[k] for ci in row for k in classes[ci]) for row in minimal_rows(flat, offs)}
        heavy = [e for e in H.hyperedges if len(e) >= K]
        want = {e for e in heavy if not any(x < e for x in heavy)}
        assert got == want, (funcs, K)


@pytest.mark.parametrize("probe", [True, False])
def test_dual_route_random(probe):
    rng = random.Random(21)
    for _ in range(150):
        check_family(random_family(rng, rng.randint(1, 7), rng.randint(0, 2)), probe)


@pytest.mark.parametrize("probe", [True, False])
def test_dual_route_degree3(probe):
    rng = random.Random(22)
    for _ in range(40):
        check_family(random_family(rng, rng.randint(2, 6), 3, rational=0.2), probe)


def test_dual_route_structured_coincidences():
    # many lines through common points: simultaneous multi-way crossings
    funcs = [Poly([a * 3 - a * k, k]) for a in (1, 2) for k in range(-2, 3)]
    funcs = [RationalFunction(f) for f in dict.fromkeys(funcs)]
    check_family(funcs, True)
    check_family(funcs, False)
    check_family(figure1().functions, True)


def test_chord_like_triple_coincidences():
    # chords of three points on a moving line coincide at the collinearity time
    rng = random.Random(5)
    for _ in range(10):
        pts = [(random_poly(rng, 1), random_poly(rng, 1)) for _ in range(4)]
        w = random_poly(rng, 1)
        fam = []
        for (xi, yi), (xj, yj) in combinations(pts, 2):
            dx = xj - xi
            if dx.is_zero():
                continue
            fam.append(RationalFunction(yi * dx + (w - xi) * (yj - yi), dx))
        check_family(fam, True)


def test_batch_roots_match_isolation():
    rng = np.random.default_rng(3)
    C = rng.integers(-9, 10, size=(300, 4))
    C[:, 3][C[:, 3] == 0] = 1
    C[:100, 3] = 0  # some quadratics
    C[:100, 2][C[:100, 2] == 0] = 1
    ev = Events.empty()
    batch_roots(C, np.arange(300), np.zeros(300, dtype=np.int64), ev)
    got = {}
    for k in range(len(ev)):
        got.setdefault(ev.i[k], []).append(ev.interval(k))
    for row in range(300):
        p = Poly([int(c) for c in C[row]])
        want = [iv for iv in isolate_real_roots(p) if not (iv.is_exact and iv.lo == 0)]
        mine = sorted(got.get(row, []), key=lambda iv: iv.lo)
        assert len(mine) == len(want)
        for a, b in zip(mine, want):
            assert compare_roots(a, b) == 0
            assert a.lo <= a.hi


def test_time_groups_are_exact():
    # distinct polynomials sharing the root sqrt(2) must land in one group
    polys = [Poly([-2, 0, 1]), Poly([-2, 0, 1]) * Poly([-5, 1]), Poly([-2, 0, 1]) * Poly([3, 1]), Poly([-3, 0, 1])]
    C = np.zeros((4, 4), dtype=np.int64)
    for k, p in enumerate(polys):
        C[k, : len(p.coeffs)] = p.coeffs
    ev = Events.empty()
    batch_roots(C, np.arange(4), np.zeros(4, dtype=np.int64), ev)
    groups = time_groups(ev)
    sizes = [sorted(ev.i[k] for k in members) for _, members in groups]
    assert sizes == [[0, 1, 2], [3], [1]]


def naive_unique(flat, offs):
    seen, out = set(), []
    for k in range(len(offs) - 1):
        row = frozenset(flat[offs[k]:offs[k + 1]].tolist())
        if row not in seen:
            seen.add(row)
            out.append(row)
    return out


def test_unique_rows_and_greedy():
    rng = random.Random(9)
    rows = [rng.sample(range(12), rng.randint(1, 5)) for _ in range(400)]
    flat = np.array([v for r in rows for v in r], dtype=np.int16)
    offs = np.zeros(len(rows) + 1, dtype=np.int64)
    np.cumsum([len(r) for r in rows], out=offs[1:])
    uf, uo = unique_rows(flat, offs)
    mine = [frozenset(uf[uo[k]:uo[k + 1]].tolist()) for k in range(len(uo) - 1)]
    assert mine == naive_unique(flat, offs)
    chosen = greedy_rows(uf, uo, 12)
    assert rows_hit(uf, uo, chosen).all()
    # reference greedy: most unhit rows, ties to the smallest item
    unhit = set(mine)
    ref = []
    while unhit:
        counts = {v: sum(v in r for r in unhit) for v in range(12)}
        v = min(counts, key=lambda u: (-counts[u], u))
        ref.append(v)
        unhit = {r for r in unhit if v not in r}
    assert chosen == sorted(ref)


def test_window_strong_net_matches_kinetic_heavy_sets():
    rng = random.Random(31)
    for _ in range(40):
        funcs = random_family(rng, rng.randint(2, 7), rng.randint(1, 2))
        M = MovingScalarSet.from_functions(funcs)
        H = enumerate_hyperedges(M, allow_identical=True)
        for r in (2, 3):
            net = window_strong_net(funcs, r)
            assert net.verify()
            chosen = {M.ids[k] for k in net.members}
            n = len(funcs)
            for e in H.hyperedges:
                if len(e) * r > n:
                    # a class member in the net stands for all identical functions
                    hit = {M.ids[k] for c in net.classes if M.ids[c[0]] in chosen for k in c}
                    assert e & hit


def test_sweep_rejects_duplicates():
    f = RationalFunction(Poly([1, 1]))
    with pytest.raises(Exception):
        WindowSweep([f, f])


def test_probe_free_path_agrees_on_larger_family():
    rng = random.Random(41)
    funcs = random_family(rng, 40, 1, repeat=0, rational=0, c=30)
    funcs = list(dict.fromkeys(funcs))
    a = WindowSweep(funcs, probe=True)
    b = WindowSweep(funcs, probe=False)
    for K in (3, 10):
        fa, oa = unique_rows(*a.windows(K))
        fb, ob = unique_rows(*b.windows(K))
        assert set(map(frozenset, minimal_rows(fa, oa))) == set(map(frozenset, minimal_rows(fb, ob)))


def test_fraction_inputs():
    funcs = [RationalFunction(Poly([Fraction(1, 2), 1])), RationalFunction(Poly([1, -1]))]
    check_family(funcs, True)
