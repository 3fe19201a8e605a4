"""Exact two-phase simplex over the rationals.

Solves ``min c.x  s.t.  A x = b, x >= 0`` in exact rational arithmetic
(gmpy2 ``mpq`` inside, ``Fraction`` at the interface) with Bland's
anti-cycling rule.  The problems solved here are tiny
(tens of variables), so a dense tableau is the simplest correct choice.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

try:  # GMP rationals are an order of magnitude faster than Fraction
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    x: Optional[list] = None
    value: Optional[Fraction] = None

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


_ZERO = _Q(0)
_ONE = _Q(1)


def _q(v):
    if isinstance(v, Fraction):
        return _Q(v.numerator, v.denominator)
    return _Q(v)


def _frac(v) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))


def _pivot(T, basis, row, col):
    pr = T[row]
    inv = 1 / pr[col]
    if inv != 1:
        T[row] = pr = [v * inv for v in pr]
    for i, r in enumerate(T):
        if i != row:
            f = r[col]
            if f:
                T[i] = [a - f * b for a, b in zip(r, pr)]
    basis[row] = col


def _run(T, basis, ncols):
    """Minimise the objective stored in the last row of T (reduced costs).

    Columns >= ncols are never allowed to enter.  Returns False when the
    problem is unbounded.
    """
    obj = T[-1]
    m = len(T) - 1
    while True:
        col = -1
        for j in range(ncols):
            if obj[j] < 0:
                col = j
                break
        if col < 0:
            return True
        best = None
        row = -1
        for i in range(m):
            a = T[i][col]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[row]):
                    best, row = ratio, i
        if row < 0:
            return False
        _pivot(T, basis, row, col)
        obj = T[-1]


def solve_lp(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    """Minimise c.x subject to A x = b and x >= 0, exactly."""
    m = len(A)
    n = len(c)
    c = [_q(v) for v in c]
    rows = []
    for i in range(m):
        r = [_q(v) for v in A[i]]
        rhs = _q(b[i])
        if rhs < 0:
            r = [-v for v in r]
            rhs = -rhs
        rows.append(r + [rhs])

    # phase 1: artificial variable per row
    width = n + m
    T = []
    for i, r in enumerate(rows):
        art = [_ZERO] * m
        art[i] = _ONE
        T.append(r[:n] + art + [r[n]])
    obj = [_ZERO] * (width + 1)
    for r in T:
        for j in range(n):
            obj[j] -= r[j]
        obj[-1] -= r[-1]
    T.append(obj)
    basis = [n + i for i in range(m)]
    _run(T, basis, n)
    if T[-1][-1] != 0:
        return LPResult(INFEASIBLE)

    # drive artificials out of the basis; drop redundant rows
    keep = []
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), -1)
            if col < 0:
                continue
            _pivot(T, basis, i, col)
        keep.append(i)
    T = [T[i][:n] + [T[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]

    # phase 2
    obj = c[:] + [_ZERO]
    for i, bv in enumerate(basis):
        f = obj[bv]
        if f:
            obj = [a - f * v for a, v in zip(obj, T[i])]
    T.append(obj)
    if not _run(T, basis, n):
        return LPResult(UNBOUNDED)
    x = [_ZERO] * n
    for i, bv in enumerate(basis):
        x[bv] = T[i][-1]
    value = sum((ci * xi for ci, xi in zip(c, x)), _ZERO)
    return LPResult(OPTIMAL, [_frac(v) for v in x], _frac(value))


def feasible(A, b) -> Optional[list]:
    """A nonnegative solution of A x = b, or None."""
    res = solve_lp([0] * (len(A[0]) if A else 0), A, b)
    return res.x if res.status == OPTIMAL else None
