"""Window sweep: strong interval nets for large moving scalar sets.

For a family of distinct rational functions (each carrying an integer
weight, the size of a class of identical input functions) this module
tracks the sorted order over t > 0 and records, for every order that
occurs, the shortest heavy run of consecutive items starting at each
position.  Every heavy hyperedge of the kinetic interval hypergraph contains
one of these runs, so a set meets all heavy hyperedges iff it meets all
recorded runs.

Event times come from batched floating-point root finding, but every
decision is certified: signs are taken from exact integer arithmetic or
from float evaluations whose rounding error is bounded, root counts are
checked against the discriminant, and anything ambiguous falls back to the
exact Sturm machinery in :mod:`kinets.poly`.  Simultaneous events are
grouped by exact comparison.
"""
from __future__ import annotations

import bisect
import math
from array import array
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key

import numpy as np

from .errors import InternalFailure
from .poly import (
    IsolatingInterval,
    Poly,
    RationalFunction,
    _signs_near,
    compare_roots,
    cross_difference,
    eval_ratfun,
    exact_root,
    isolate_real_roots,
    sign_at_root,
    simplest_between,
)

_U = 2.0 ** -53
_FLOAT_SAFE = 2 ** 52
_HALF_WIDTHS = (1e-14, 1e-12, 1e-10)


# ---------------------------------------------------------------------------
# certified float helpers


def _horner(coeffs: np.ndarray, x: np.ndarray):
    """Float value and a rigorous rounding-error bound, row-wise."""
    deg = coeffs.shape[1] - 1
    v = np.zeros(len(x))
    a = np.zeros(len(x))
    ax = np.abs(x)
    for k in range(deg, -1, -1):
        v = v * x + coeffs[:, k]
        a = a * ax + np.abs(coeffs[:, k])
    return v, 4.0 * (2 * deg + 2) * _U * a


def _certified_sign(coeffs, x):
    """+1/-1 where the float sign is certain, 0 where it is not."""
    v, err = _horner(coeffs, x)
    s = np.sign(v).astype(np.int8)
    s[np.abs(v) <= err] = 0
    return s


def _disc_sign(coeffs: np.ndarray):
    """Certified discriminant sign for quadratics/cubics (0 = undecided)."""
    if coeffs.shape[1] == 3:
        c, b, a = coeffs[:, 0], coeffs[:, 1], coeffs[:, 2]
        val = b * b - 4 * a * c
        mag = b * b + 4 * np.abs(a * c)
    else:
        d, c, b, a = coeffs[:, 0], coeffs[:, 1], coeffs[:, 2], coeffs[:, 3]
        terms = [18 * a * b * c * d, -4 * b ** 3 * d, b * b * c * c, -4 * a * c ** 3, -27 * a * a * d * d]
        val = sum(terms)
        mag = sum(np.abs(t) for t in terms)
    s = np.sign(val).astype(np.int8)
    s[np.abs(val) <= 32 * _U * mag] = 0
    return s


def _companion_roots(coeffs: np.ndarray):
    deg = coeffs.shape[1] - 1
    m = len(coeffs)
    C = np.zeros((m, deg, deg))
    for k in range(1, deg):
        C[:, k, k - 1] = 1.0
    C[:, :, deg - 1] = -coeffs[:, :deg] / coeffs[:, deg:deg + 1]
    return np.linalg.eigvals(C)


def _newton_polish(coeffs: np.ndarray, x: np.ndarray, steps: int = 2):
    """A few float Newton steps on each finite approximate root (column-wise)."""
    deg = coeffs.shape[1] - 1
    x = x.copy()
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        for _ in range(steps):
            for k in range(x.shape[1]):
                col = x[:, k]
                v = np.zeros(len(col))
                dv = np.zeros(len(col))
                for c in range(deg, -1, -1):
                    dv = dv * col + v
                    v = v * col + coeffs[:, c]
                step = v / dv
                new = col - step
                fine = np.isfinite(new) & np.isfinite(col)
                x[fine, k] = new[fine]
    return x


def _frac(x: float) -> Fraction:
    return Fraction(float(x))


def _float_bounds(iv: IsolatingInterval):
    lo = float(iv.lo)
    hi = float(iv.hi)
    return math.nextafter(lo, -math.inf), math.nextafter(hi, math.inf)


# ---------------------------------------------------------------------------
# event collection


@dataclass
class Events:
    """Parallel lists describing the positive events."""

    lo: list
    hi: list
    i: list
    j: list  # -1 marks a pole of item i
    flip: list
    poly: list  # coefficient tuple (low first), block row number, or None
    exact: list  # IsolatingInterval or None
    blocks: list = field(default_factory=list)  # coefficient matrices

    @classmethod
    def empty(cls) -> "Events":
        return cls([], [], [], [], [], [], [])

    def __len__(self):
        return len(self.lo)

    def add(self, lo, hi, i, j, flip, poly, exact):
        self.lo.append(lo)
        self.hi.append(hi)
        self.i.append(i)
        self.j.append(j)
        self.flip.append(flip)
        self.poly.append(poly)
        self.exact.append(exact)

    def extend(self, lo, hi, i, j, flip, coeffs, rows):
        """Add a block of events whose polynomials are rows of ``coeffs``."""
        base = sum(len(b) for b in self.blocks)
        self.blocks.append(np.asarray(coeffs))
        m = len(lo)
        self.lo.extend(np.asarray(lo, dtype=float).tolist())
        self.hi.extend(np.asarray(hi, dtype=float).tolist())
        self.i.extend(np.asarray(i).tolist())
        self.j.extend(np.asarray(j).tolist())
        self.flip.extend(np.asarray(flip, dtype=bool).tolist())
        self.poly.extend((np.asarray(rows) + base).tolist())
        self.exact.extend([None] * m)

    def coeffs(self, k) -> tuple:
        p = self.poly[k]
        if not isinstance(p, int):
            return p
        for b in self.blocks:
            if p < len(b):
                return tuple(int(c) for c in b[p])
            p -= len(b)
        raise IndexError(k)

    def interval(self, k) -> IsolatingInterval:
        if self.exact[k] is None:
            p = Poly(self.coeffs(k)).primitive()
            self.exact[k] = IsolatingInterval(p, _frac(self.lo[k]), _frac(self.hi[k]))
        return self.exact[k]


def _coeff_matrix(polys, width):
    rows = []
    for p in polys:
        c = list(p.coeffs) + [0] * (width - len(p.coeffs))
        rows.append(c)
    return rows


def poly_rows_product(A, B):
    """Row-wise product of coefficient matrices (low degree first)."""
    out = np.zeros((A.shape[0], A.shape[1] + B.shape[1] - 1), dtype=np.result_type(A, B))
    for a in range(A.shape[1]):
        for b in range(B.shape[1]):
            out[:, a + b] += A[:, a] * B[:, b]
    return out


def _pair_polys(funcs):
    """Cross-difference coefficients of every pair (i < j)."""
    n = len(funcs)
    dn = max(max(f.num.degree(), 0) for f in funcs)
    dd = max(max(f.den.degree(), 0) for f in funcs)
    num = _coeff_matrix([f.num for f in funcs], dn + 1)
    den = _coeff_matrix([f.den for f in funcs], dd + 1)
    big = max(abs(c) for row in num + den for c in row)
    I, J = np.triu_indices(n, 1)
    width = dn + dd + 1
    # the cross-difference is bounded by 2 (min degree + 1) big^2
    if 2 * (min(dn, dd) + 1) * big * big < _FLOAT_SAFE:
        N = np.array(num, dtype=np.int64)
        D = np.array(den, dtype=np.int64)
    else:
        N = np.array(num, dtype=object)
        D = np.array(den, dtype=object)
    out = np.zeros((len(I), width), dtype=N.dtype)
    for a in range(dn + 1):
        for b in range(dd + 1):
            out[:, a + b] += N[I, a] * D[J, b] - N[J, a] * D[I, b]
    return I, J, out


def _exact_pair_roots(coeffs, i, j, ev: Events, keep_zero=False):
    p = Poly(int(c) for c in coeffs)
    if p.is_zero():
        raise InternalFailure("identical items passed to the sweep")
    for iv in isolate_real_roots(p):
        if iv.is_exact and iv.lo == 0 and not keep_zero:
            continue
        left, _, right = _signs_near(p, iv)
        iv = _narrow(iv)
        lo, hi = _float_bounds(iv)
        ev.add(lo, hi, i, j, left != right, None, iv)


def _collect_pair_events(funcs, ev: Events):
    I, J, C = _pair_polys(funcs)
    batch_roots(C, I, J, ev)


def batch_roots(C, I, J, ev: Events, keep_zero=False):
    """Roots on (0, oo) (or [0, oo)) of each coefficient row, tagged (I[k], J[k]).

    Zero rows are an error: callers exclude identically vanishing rows.
    """
    if C.dtype == object:
        for k in range(len(I)):
            _exact_pair_roots(C[k], int(I[k]), int(J[k]), ev, keep_zero)
        return
    nz = C != 0
    deg = np.where(nz.any(axis=1), C.shape[1] - 1 - np.argmax(nz[:, ::-1], axis=1), -1)
    if (deg < 0).any():
        raise InternalFailure("identical items passed to the sweep")
    # linear: the root is rational
    for k in np.nonzero(deg == 1)[0]:
        c0, c1 = int(C[k, 0]), int(C[k, 1])
        if c0 == 0:
            if not keep_zero:
                continue
        elif (c0 > 0) == (c1 > 0):
            continue
        q = Fraction(-c0, c1)
        iv = exact_root(q)
        lo, hi = _float_bounds(iv)
        ev.add(lo, hi, int(I[k]), int(J[k]), True, None, iv)
    for d in (2, 3):
        idx = np.nonzero(deg == d)[0]
        if len(idx):
            _certified_block(C[idx, : d + 1], I[idx], J[idx], ev, keep_zero)
    for k in np.nonzero(deg > 3)[0]:
        _exact_pair_roots(C[k], int(I[k]), int(J[k]), ev, keep_zero)


def _certified_block(Ci, I, J, ev: Events, keep_zero=False):
    """Roots of quadratics/cubics with float approximations certified exactly."""
    d = Ci.shape[1] - 1
    Cf = Ci.astype(np.float64)
    ds = _disc_sign(Cf)
    roots = _companion_roots(Cf)
    # number of distinct real roots from the discriminant
    nreal = np.where(ds > 0, d, np.where(ds < 0, d - 2, -1))
    order = np.argsort(np.abs(roots.imag), axis=1, kind="stable")
    re = np.take_along_axis(roots.real, order, axis=1)
    ok = nreal >= 0
    # keep the nreal most-real eigenvalues and sort them
    slots = np.arange(d)[None, :] < nreal[:, None]
    re = np.where(slots, re, np.inf)
    re.sort(axis=1)
    re = _newton_polish(Cf, re)
    # the tightest half width whose endpoint signs certify a sign change
    lo = np.full(re.shape, np.nan)
    hi = np.full(re.shape, np.nan)
    with np.errstate(invalid="ignore"):
        scale = np.maximum(1.0, np.abs(re))
    for k in range(d):
        todo = np.nonzero(slots[:, k] & ok)[0]
        for hw in _HALF_WIDTHS:
            if not len(todo):
                break
            x = re[todo, k]
            a = x - hw * scale[todo, k]
            b = x + hw * scale[todo, k]
            slo = _certified_sign(Cf[todo], a)
            shi = _certified_sign(Cf[todo], b)
            good = (slo != 0) & (shi != 0) & (slo != shi)
            lo[todo[good], k] = a[good]
            hi[todo[good], k] = b[good]
            todo = todo[~good]
        ok[todo] = False
    for k in range(d - 1):
        rows = np.nonzero(slots[:, k + 1] & ok)[0]
        clash = ~(hi[rows, k] < lo[rows, k + 1])
        ok[rows[clash]] = False
    sign0 = np.sign(Cf[:, 0])
    use = slots & ok[:, None]
    with np.errstate(invalid="ignore"):
        use &= hi >= 0
    near0 = use & (lo <= 0)
    zero = near0 & (sign0[:, None] == 0)
    if keep_zero:
        for k in np.unique(np.nonzero(zero)[0]):
            ev.add(0.0, 0.0, int(I[k]), int(J[k]), True, None, exact_root(0))
    use &= ~zero
    # a root whose interval reaches below 0: keep it only if it is positive
    rk, sk = np.nonzero(near0 & ~zero)
    if len(rk):
        sb = _certified_sign(Cf[rk], hi[rk, sk])
        neg = sb == sign0[rk]
        use[rk[neg], sk[neg]] = False
        lo[rk[~neg], sk[~neg]] = 0.0
    rk, sk = np.nonzero(use)
    if len(rk):
        ev.extend(lo[rk, sk], hi[rk, sk], I[rk], J[rk], np.ones(len(rk), dtype=bool), Ci, rk)
    for k in np.nonzero(~ok)[0]:
        _exact_pair_roots(Ci[k], int(I[k]), int(J[k]), ev, keep_zero)


def _narrow(iv: IsolatingInterval) -> IsolatingInterval:
    """Refine to about 1e-10 relative width so event clusters stay small."""
    while not iv.is_exact and iv.hi - iv.lo > Fraction(1, 1 << 33) * max(1, abs(iv.lo)):
        iv = iv.refine()
    return iv


def _collect_pole_events(funcs, ev: Events):
    for i, f in enumerate(funcs):
        if f.den.degree() < 1:
            continue
        for iv in isolate_real_roots(f.den):
            if iv.is_exact and iv.lo == 0:
                continue
            iv = _narrow(iv)
            lo, hi = _float_bounds(iv)
            ev.add(lo, hi, i, -1, True, None, iv)


def time_groups(ev: Events):
    """Group events by exact time; returns [(IsolatingInterval, [event idx])] in order."""
    m = len(ev.lo)
    if not m:
        return []
    lo = np.array(ev.lo)
    hi = np.array(ev.hi)
    # connected components of overlapping intervals, scanned by lower end
    order = np.lexsort((hi, lo))
    slo, shi = lo[order], hi[order]
    reach = np.maximum.accumulate(shi)
    starts = np.concatenate(([0], np.nonzero(slo[1:] > reach[:-1])[0] + 1, [m]))
    groups = []
    for a, b in zip(starts[:-1].tolist(), starts[1:].tolist()):
        if b - a == 1:
            groups.append((None, [int(order[a])]))
        else:
            groups.extend(_resolve_cluster(ev, order[a:b].tolist()))
    return groups


def _vanishes_at(ev: Events, k, q: Fraction) -> bool:
    iv = ev.interval(k)
    if iv.is_exact:
        return iv.lo == q
    if not iv.lo <= q <= iv.hi:
        return False
    return iv.poly.sign_at(q) == 0


def _resolve_cluster(ev: Events, members):
    """Exactly split an overlapping cluster into ordered equal-time groups."""
    out = []
    rest = list(members)
    while rest:
        # try a rational time first: structured instances produce many
        # simultaneous events at rational times
        seed = ev.interval(rest[0])
        if seed.is_exact:
            q = seed.lo
        else:
            q = Fraction((seed.lo + seed.hi) / 2).limit_denominator(1 << 24)
        at_q = [k for k in rest if _vanishes_at(ev, k, q)]
        if at_q:
            out.append((exact_root(q), at_q))
            taken = set(at_q)
            rest = [k for k in rest if k not in taken]
            continue
        # algebraic time: exact comparison against the first member
        first = rest[0]
        same = [k for k in rest if k == first or compare_roots(ev.interval(first), ev.interval(k)) == 0]
        out.append((ev.interval(first), same))
        taken = set(same)
        rest = [k for k in rest if k not in taken]
    out.sort(key=cmp_to_key(lambda a, b: compare_roots(a[0], b[0])))
    return out


# ---------------------------------------------------------------------------
# the sweep


class WindowSweep:
    """Kinetic sorted order of distinct rational functions with window capture."""

    def __init__(self, funcs, weights=None, probe=True):
        self.funcs = [f if isinstance(f, RationalFunction) else RationalFunction(f) for f in funcs]
        n = len(self.funcs)
        if len(set(self.funcs)) != n:
            raise InternalFailure("sweep items must be distinct functions")
        self.weights = list(weights) if weights is not None else [1] * n
        self.probe = probe  # False forces the exact comparator at every event
        self.total = sum(self.weights)
        ev = Events.empty()
        if n > 1:
            _collect_pair_events(self.funcs, ev)
        _collect_pole_events(self.funcs, ev)
        self._ev = ev
        self.groups = time_groups(ev)
        self.event_count = len(ev.lo)

    # -- exact comparisons just after an event time
    def _after_sign(self, q: Poly, tau: IsolatingInterval) -> int:
        if tau.is_exact:
            s = q.sign_at(tau.lo)
            if s:
                return s
        else:
            s = sign_at_root(q, tau)
            if s:
                return s
        return _signs_near(q, tau)[2]

    def _cmp_after(self, a, b, tau) -> int:
        fa, fb = self.funcs[a], self.funcs[b]
        s = self._after_sign(cross_difference(fa, fb), tau)
        s *= self._after_sign(fa.den, tau) * self._after_sign(fb.den, tau)
        if s == 0:
            raise InternalFailure("distinct items equal just after an event")
        return s

    def group_bounds(self):
        """Float bounds (lo, hi arrays) of each distinct positive event time."""
        ev = self._ev
        lo = np.empty(len(self.groups))
        hi = np.empty(len(self.groups))
        for k, (tau, members) in enumerate(self.groups):
            if tau is None:
                lo[k], hi[k] = ev.lo[members[0]], ev.hi[members[0]]
            else:
                lo[k], hi[k] = math.nextafter(float(tau.lo), -math.inf), math.nextafter(float(tau.hi), math.inf)
        return lo, hi

    def _group_time(self, g) -> IsolatingInterval:
        tau, members = g
        return tau if tau is not None else self._ev.interval(members[0])

    def initial_order(self) -> list:
        """Order on the open interval right after t = 0."""
        if self.groups:
            first = self._group_time(self.groups[0])
            t0 = first.lo / 2 if first.lo > 0 else None
            if t0 is None:
                iv = first
                while not iv.lo > 0:
                    iv = iv.refine()
                t0 = iv.lo / 2
        else:
            t0 = Fraction(1)
        vals = [(eval_ratfun(f, t0), k) for k, f in enumerate(self.funcs)]
        if any(v is None for v, _ in vals):
            raise InternalFailure("item undefined at the initial sample time")
        vals.sort()
        for (u, _), (v, _) in zip(vals, vals[1:]):
            if u == v:
                raise InternalFailure("distinct items tie at a non-event time")
        return [k for _, k in vals]

    def windows(self, K: int):
        """Yield-free capture of all recorded runs of weight >= K.

        Returns (flat int16 or int32 array, row offsets int64 array).
        """
        n = len(self.funcs)
        w = self.weights
        order = self.initial_order()
        pos = [0] * n
        for p, k in enumerate(order):
            pos[k] = p
        W = [0] * (n + 1)
        for p in range(n):
            W[p + 1] = W[p] + w[order[p]]
        code, dt = ("h", np.int16) if n < (1 << 15) else ("i", np.int32)
        flat = array(code)
        offs = array("q", [0])
        unit = all(x == 1 for x in w)
        if self.total < K:
            return np.zeros(0, dt), np.zeros(1, np.int64)

        def emit(s):
            # shortest run from s reaching weight K
            if W[n] - W[s] < K:
                return
            if unit:
                e = s + K
            else:
                e = bisect.bisect_left(W, W[s] + K)
            flat.extend(order[s:e])
            offs.append(len(flat))

        def emit_span(a, b):
            # every run intersecting positions [a, b)
            s0 = bisect.bisect_right(W, W[a] - K)
            for s in range(s0, b):
                emit(s)

        for s in range(n):
            emit(s)

        ev = self._ev
        glo, ghi = self.group_bounds()
        for gi, g in enumerate(self.groups):
            tau, members = g
            if len(members) == 1:
                k = members[0]
                j = ev.j[k]
                if j >= 0:
                    if not ev.flip[k]:
                        continue
                    i = ev.i[k]
                    pi, pj = pos[i], pos[j]
                    if pi > pj:
                        pi, pj = pj, pi
                    if pj != pi + 1:
                        raise InternalFailure("swapping items are not adjacent")
                    a, b = order[pi], order[pj]
                    order[pi], order[pj] = b, a
                    pos[a], pos[b] = pj, pi
                    W[pi + 1] = W[pi] + w[b]
                    if unit:
                        if pi + 1 >= K:
                            flat.extend(order[pi + 1 - K:pi + 1])
                            offs.append(len(flat))
                        if n - pi - 1 >= K:
                            flat.extend(order[pi + 1:pi + 1 + K])
                            offs.append(len(flat))
                    else:
                        lo_s = bisect.bisect_right(W, W[pi] - K)
                        hi_s = bisect.bisect_right(W, W[pi + 1] - K)
                        for s in range(lo_s, min(hi_s, pi + 1)):
                            emit(s)
                        emit(pi + 1)
                    continue
            probe = self._probe_time(glo, ghi, gi) if self.probe else None
            self._general_step(self._group_time(g), members, order, pos, W, emit, emit_span, probe)
        return np.frombuffer(flat, dtype=dt).copy(), np.frombuffer(offs, dtype=np.int64).copy()

    def _probe_time(self, glo, ghi, gi):
        """A rational after group gi and before the next one, if floats separate them."""
        if ghi[gi] < 0:
            return None
        a = Fraction(max(float(ghi[gi]), 0.0))
        if gi + 1 == len(glo):
            return simplest_between(a, a + 1)
        if not ghi[gi] < glo[gi + 1]:
            return None
        return simplest_between(a, Fraction(float(glo[gi + 1])))

    def _general_step(self, tau, members, order, pos, W, emit, emit_span, probe=None):
        ev = self._ev
        n = len(order)
        w = self.weights
        if probe is not None:
            # the order just after tau holds up to the next event, so exact
            # values at the probe time decide it
            vals = {}

            def value(x):
                if x not in vals:
                    vals[x] = eval_ratfun(self.funcs[x], probe)
                return vals[x]

            key = value
        else:
            key = cmp_to_key(lambda a, b: self._cmp_after(a, b, tau))
        poles = sorted({ev.i[k] for k in members if ev.j[k] < 0})
        pole_set = set(poles)
        parent = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for k in members:
            i, j = ev.i[k], ev.j[k]
            if j < 0 or i in pole_set or j in pole_set:
                continue
            for x in (i, j):
                parent.setdefault(x, x)
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
        comps = {}
        for x in parent:
            comps.setdefault(find(x), []).append(x)
        changed = []
        for comp in comps.values():
            ps = sorted(pos[x] for x in comp)
            a, b = ps[0], ps[-1] + 1
            if b - a != len(comp):
                raise InternalFailure("coincident items are not contiguous")
            block = sorted(comp, key=key)
            if block != order[a:b]:
                order[a:b] = block
                for p in range(a, b):
                    pos[order[p]] = p
                    W[p + 1] = W[p] + w[order[p]]
                changed.append(comp)
        spans = []
        if poles:
            m = len(poles)
            pp = sorted(pos[x] for x in poles)
            # poles approach +-oo, so they must sit at the two ends
            bottom = 0
            while bottom < m and pp[bottom] == bottom:
                bottom += 1
            if pp[bottom:] != list(range(n - (m - bottom), n)):
                raise InternalFailure("a pole item is not at an end of the order")
            up, down = [], []
            ref = next((x for x in order if x not in pole_set), None)
            for x in poles:
                if probe is not None:
                    # just after a pole the item is beyond every other one
                    side = 1 if ref is None or value(x) > value(ref) else -1
                else:
                    f = self.funcs[x]
                    side = self._after_sign(f.num, tau) * self._after_sign(f.den, tau)
                (up if side > 0 else down).append(x)
            up.sort(key=key)
            down.sort(key=key)
            middle = [x for x in order if x not in pole_set]
            order[:] = down + middle + up
            for p in range(n):
                pos[order[p]] = p
                W[p + 1] = W[p] + w[order[p]]
            # runs not touching a moved item keep their sets
            if down:
                spans.append((0, len(down)))
            if up:
                spans.append((n - len(up), n))
        for comp in changed:
            ps = [pos[x] for x in comp]
            spans.append((min(ps), max(ps) + 1))
        for a, b in spans:
            emit_span(a, b)


# ---------------------------------------------------------------------------
# hitting sets over captured windows


def _row_matrix(flat: np.ndarray, offs: np.ndarray):
    """Rows padded with -1 and sorted, so equal sets give equal rows."""
    nrows = len(offs) - 1
    lens = np.diff(offs)
    L = int(lens.max())
    dt = np.int16 if flat.size == 0 or int(flat.max()) < (1 << 15) else np.int32
    M = np.full((nrows, L), -1, dtype=dt)
    if L and (lens == L).all():
        M[:] = flat.reshape(nrows, L)
    else:
        # chunked so the index arrays stay small
        step = 1 << 17
        for a in range(0, nrows, step):
            b = min(nrows, a + step)
            ln = lens[a:b]
            cols = np.arange(offs[a], offs[b]) - np.repeat(offs[a:b], ln)
            M[np.repeat(np.arange(a, b), ln), cols] = flat[offs[a]:offs[b]]
    M.sort(axis=1)  # -1 padding sorts first
    return M


def unique_rows(flat: np.ndarray, offs: np.ndarray):
    """Deduplicate rows as sets; returns (flat, offsets) of sorted unique rows.

    Rows are bucketed by a multiplicative hash and duplicates are only
    dropped after an exact comparison with their neighbour in hash order.
    """
    nrows = len(offs) - 1
    if nrows == 0:
        return flat, offs
    M = _row_matrix(flat, offs)
    mult = np.random.default_rng(0).integers(1, 1 << 62, size=M.shape[1], dtype=np.uint64) | np.uint64(1)
    h = np.zeros(nrows, dtype=np.uint64)
    for c in range(M.shape[1]):
        h += (M[:, c].astype(np.int64) + 2).astype(np.uint64) * mult[c]
    # ties in the hash keep row order via the stable sort on (hash, row)
    order = np.lexsort((np.arange(nrows), h))
    Ms = M[order]
    dup = np.zeros(nrows, dtype=bool)
    dup[1:] = (h[order][1:] == h[order][:-1]) & (Ms[1:] == Ms[:-1]).all(axis=1)
    keep_rows = np.sort(order[~dup])
    M = M[keep_rows]
    keep = M >= 0
    lens = keep.sum(axis=1)
    new_offs = np.zeros(len(M) + 1, dtype=np.int64)
    np.cumsum(lens, out=new_offs[1:])
    return M[keep], new_offs


def minimal_rows(flat, offs) -> list:
    """Inclusion-minimal rows as frozensets (small inputs only)."""
    rows = {frozenset(flat[offs[k]:offs[k + 1]].tolist()) for k in range(len(offs) - 1)}
    return [r for r in rows if not any(o < r for o in rows)]


def greedy_rows(flat: np.ndarray, offs: np.ndarray, n: int) -> list:
    """Greedy hitting set of the rows; ties go to the smallest item index."""
    nrows = len(offs) - 1
    if nrows == 0:
        return []
    lens = np.diff(offs)
    row_of = np.repeat(np.arange(nrows, dtype=np.int32), lens)
    by_item = np.argsort(flat, kind="stable")  # radix sort for small ints
    item_ptr = np.searchsorted(flat[by_item], np.arange(n + 1))
    counts = np.bincount(flat, minlength=n).astype(np.int64)
    alive = np.ones(nrows, dtype=bool)
    chosen = []
    while True:
        v = int(np.argmax(counts))
        if counts[v] == 0:
            break
        chosen.append(v)
        rows = row_of[by_item[item_ptr[v]:item_ptr[v + 1]]]
        rows = rows[alive[rows]]
        alive[rows] = False
        if len(rows):
            rl = lens[rows]
            starts = np.repeat(offs[rows], rl)
            idx = starts + (np.arange(rl.sum()) - np.repeat(np.cumsum(rl) - rl, rl))
            counts -= np.bincount(flat[idx], minlength=n)
    return sorted(chosen)


def rows_hit(flat, offs, members) -> np.ndarray:
    """Boolean per row: does it contain a member?"""
    nrows = len(offs) - 1
    if nrows == 0:
        return np.zeros(0, dtype=bool)
    mark = np.isin(flat, np.asarray(sorted(members), dtype=np.int32))
    hits = np.add.reduceat(mark.astype(np.int64), offs[:-1])
    return hits > 0


# ---------------------------------------------------------------------------
# strong nets of (possibly repeated) functions


@dataclass
class WindowNet:
    members: list  # indices into the input function list
    threshold: int  # heavy means total weight >= threshold
    rows: int  # distinct recorded runs
    events: int
    net_items: list  # class indices
    classes: list  # per class, the input indices in it
    flat: np.ndarray = None
    offs: np.ndarray = None
    event_bounds: tuple = None

    def verify(self, members=None) -> bool:
        items = self.net_items if members is None else members
        return bool(rows_hit(self.flat, self.offs, items).all())


def merge_identical(funcs):
    """Group equal functions; classes are ordered by their first member."""
    first = {}
    classes = []
    for k, f in enumerate(funcs):
        if f in first:
            classes[first[f]].append(k)
        else:
            first[f] = len(classes)
            classes.append([k])
    return classes


def window_strong_net(funcs, r) -> WindowNet:
    """Strong 1/r-net (heavy: more than len(funcs)/r members) via the window sweep.

    Identical functions are allowed; they always share a position.  The net
    picks the first member of each chosen class.
    """
    funcs = [f if isinstance(f, RationalFunction) else RationalFunction(f) for f in funcs]
    r = Fraction(r)
    m = len(funcs)
    K = math.floor(m / r) + 1
    classes = merge_identical(funcs)
    reps = [funcs[c[0]] for c in classes]
    sweep = WindowSweep(reps, [len(c) for c in classes])
    flat, offs = sweep.windows(K)
    flat, offs = unique_rows(flat, offs)
    items = greedy_rows(flat, offs, len(reps))
    return WindowNet(
        members=sorted(classes[i][0] for i in items),
        threshold=K,
        rows=len(offs) - 1,
        events=sweep.event_count,
        net_items=items,
        classes=classes,
        flat=flat,
        offs=offs,
        event_bounds=sweep.group_bounds(),
    )
