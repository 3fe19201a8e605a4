"""Integer-coefficient univariate polynomials, rational functions and
exact real-root isolation on the time domain [0, oo).

Coefficients are stored low degree first.  Everything here is exact: rational
arguments are handled through ``fractions.Fraction`` and sign evaluations are
done on integer-scaled Horner sums, never in floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Optional, Sequence

from .errors import ZeroPolynomial


def _sign(x) -> int:
    return (x > 0) - (x < 0)


class Poly:
    """Immutable polynomial with arbitrary-precision integer coefficients."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[int] = ()):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)
        self._hash = None

    @classmethod
    def const(cls, c: int) -> "Poly":
        return cls((c,))

    @classmethod
    def t(cls) -> "Poly":
        return cls((0, 1))

    # -- basic queries -------------------------------------------------
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    def primitive(self) -> "Poly":
        """Divide out the content and make the leading coefficient positive."""
        if not self.coeffs:
            return self
        g = self.content()
        if self.coeffs[-1] < 0:
            g = -g
        return Poly(c // g for c in self.coeffs)

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        other = _as_poly(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly((1,))
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly((other,))
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("Poly", self.coeffs))
        return self._hash

    def __repr__(self):
        return f"Poly({list(self.coeffs)})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{'*' if mono else ''}{mono}"
            terms.append(("-" if c < 0 else "+", body))
        s = "".join(f" {sg} {b}" for sg, b in terms).strip()
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    # -- evaluation ----------------------------------------------------
    def __call__(self, x):
        """Exact value at an int or Fraction."""
        if isinstance(x, int):
            acc = 0
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        x = Fraction(x)
        p, q = x.numerator, x.denominator
        return Fraction(self.scaled_eval(p, q), q ** max(self.degree(), 0))

    def scaled_eval(self, p: int, q: int) -> int:
        """q**deg * self(p/q) as an integer (q > 0): same sign as self(p/q)."""
        acc = 0
        qk = 1
        n = len(self.coeffs)
        # Horner over the homogenised form
        for i in range(n - 1, -1, -1):
            acc = acc * p + self.coeffs[i] * qk
            qk *= q
        return acc

    def sign_at(self, x) -> int:
        if isinstance(x, int):
            return _sign(self(x))
        x = Fraction(x)
        return _sign(self.scaled_eval(x.numerator, x.denominator))

    def sign_after_zero(self) -> int:
        """Sign of the polynomial on (0, eps) for small eps."""
        for c in self.coeffs:
            if c:
                return _sign(c)
        return 0

    def sign_at_infinity(self) -> int:
        return _sign(self.lc())

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def to_fractions(self) -> list:
        return [Fraction(c) for c in self.coeffs]


def _as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, int):
        return Poly((x,))
    raise TypeError(f"cannot use {type(x).__name__} as a polynomial")


# ---------------------------------------------------------------------------
# Division, gcd, square-free parts


def _qdivmod(a: Sequence[Fraction], b: Sequence[Fraction]):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], a
    q = [Fraction(0)] * (len(a) - db)
    inv = 1 / Fraction(b[-1])
    for k in range(len(a) - 1 - db, -1, -1):
        f = a[k + db] * inv
        q[k] = f
        if f:
            for i in range(db + 1):
                a[k + i] -= f * b[i]
    r = a[:db]
    while r and r[-1] == 0:
        r.pop()
    return q, r


def pseudo_remainder(a: Poly, b: Poly) -> Poly:
    """Remainder r with |lc(b)|**(deg a - deg b + 1) * a = q*b + r."""
    if b.is_zero():
        raise ZeroDivisionError("pseudo-remainder by zero polynomial")
    r = list(a.coeffs)
    db = b.degree()
    lb = b.lc()
    delta = len(r) - 1 - db
    if delta < 0:
        return a
    for k in range(delta, -1, -1):
        # r <- lb*r - r[k+db] * t^k * b
        top = r[k + db] if k + db < len(r) else 0
        r = [lb * c for c in r]
        if top:
            for i, c in enumerate(b.coeffs):
                r[k + i] -= top * c
        r = r[: k + db]
    out = Poly(r)
    # factor lb**(delta+1) may be negative; restore the positive-multiple form
    if lb < 0 and (delta + 1) % 2 == 1:
        out = -out
    return out


def exact_quotient(a: Poly, b: Poly) -> Poly:
    """a / b when b divides a over Q and the quotient is integral."""
    q, r = _qdivmod(a.to_fractions(), b.to_fractions())
    if r:
        raise ArithmeticError(f"{b} does not divide {a}")
    if any(c.denominator != 1 for c in q):
        raise ArithmeticError(f"quotient of {a} by {b} is not integral")
    return Poly(int(c) for c in q)


@lru_cache(maxsize=65536)
def _primitive_gcd(a: Poly, b: Poly) -> Poly:
    a, b = a.primitive(), b.primitive()
    if a.degree() < b.degree():
        a, b = b, a
    while not b.is_zero():
        r = pseudo_remainder(a, b)
        a, b = b, r.primitive()
    return a.primitive()


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Greatest common divisor in Z[t], positive leading coefficient."""
    if a.is_zero():
        return -b if b.lc() < 0 else b
    if b.is_zero():
        return -a if a.lc() < 0 else a
    g = _primitive_gcd(a, b)
    return g * gcd(a.content(), b.content())


@lru_cache(maxsize=65536)
def square_free(p: Poly) -> Poly:
    """Primitive square-free part of p (same real roots, all simple)."""
    if p.is_zero():
        raise ZeroPolynomial("square-free part of the zero polynomial")
    if p.degree() <= 0:
        return Poly((1,))
    g = _primitive_gcd(p, p.derivative())
    if g.degree() == 0:
        return p.primitive()
    return exact_quotient(p.primitive(), g).primitive()


def root_multiplicity_split(p: Poly, factor: Poly):
    """Return (m, rest) with p = factor**m * rest and factor not dividing rest."""
    m = 0
    rest = p
    fq = factor.to_fractions()
    while True:
        q, r = _qdivmod(rest.to_fractions(), fq)
        if r:
            break
        # q may be non-integral; rescale to a primitive integer polynomial
        den = 1
        for c in q:
            den = den * c.denominator // gcd(den, c.denominator)
        rest = Poly(int(c * den) for c in q)
        m += 1
    return m, rest


# ---------------------------------------------------------------------------
# Sturm sequences


@lru_cache(maxsize=65536)
def sturm_sequence(p: Poly) -> tuple:
    """Sturm chain of p using positive-multiple pseudo-remainders."""
    if p.is_zero():
        raise ZeroPolynomial("Sturm sequence of the zero polynomial")
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        r = pseudo_remainder(seq[-2], seq[-1])
        if r.is_zero():
            break
        c = r.content()
        seq.append(Poly(-x // c for x in r.coeffs))
    if seq[-1].is_zero():
        seq.pop()
    return tuple(seq)


def _variations(signs) -> int:
    v = 0
    last = 0
    for s in signs:
        if s:
            if last and s != last:
                v += 1
            last = s
    return v


def sign_variations(seq, x) -> int:
    """Sign variations of a chain at x (a Fraction, or +/-inf as floats)."""
    if x == float("inf"):
        return _variations(q.sign_at_infinity() for q in seq)
    if x == float("-inf"):
        return _variations(
            q.sign_at_infinity() * (-1 if q.degree() % 2 else 1) for q in seq
        )
    x = Fraction(x)
    return _variations(q.sign_at(x) for q in seq)


def count_roots(p: Poly, lo, hi) -> int:
    """Number of distinct real roots of p in the half-open interval (lo, hi]."""
    seq = sturm_sequence(square_free(p))
    return sign_variations(seq, lo) - sign_variations(seq, hi)


def count_roots_closed(p: Poly, lo, hi) -> int:
    n = count_roots(p, lo, hi)
    if lo != float("-inf") and p.sign_at(lo) == 0:
        n += 1
    return n


def cauchy_bound(p: Poly) -> int:
    """Integer B with every real root of p in (-B, B)."""
    lc = abs(p.lc())
    m = max((abs(c) for c in p.coeffs[:-1]), default=0)
    return 1 + -(-m // lc)


# ---------------------------------------------------------------------------
# Isolating intervals / algebraic times


@dataclass(frozen=True)
class IsolatingInterval:
    """A real root of ``poly`` pinned down by rational bounds.

    ``poly`` is square-free and primitive.  Either ``lo == hi`` (the root is
    that rational) or poly(lo), poly(hi) are nonzero of opposite sign and the
    root is the unique root of poly in [lo, hi].
    """

    poly: Poly
    lo: Fraction
    hi: Fraction

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def approx(self) -> float:
        return float((self.lo + self.hi) / 2)

    def width(self) -> Fraction:
        return self.hi - self.lo

    def refine(self) -> "IsolatingInterval":
        if self.is_exact:
            return self
        m = (self.lo + self.hi) / 2
        sm = self.poly.sign_at(m)
        if sm == 0:
            return IsolatingInterval(self.poly, m, m)
        if sm == self.poly.sign_at(self.lo):
            return IsolatingInterval(self.poly, m, self.hi)
        return IsolatingInterval(self.poly, self.lo, m)

    def refine_to(self, width) -> "IsolatingInterval":
        iv = self
        while iv.hi - iv.lo > width:
            iv = iv.refine()
        return iv

    def is_root_of(self, q: Poly) -> bool:
        """Exact test q(root) == 0."""
        if q.is_zero():
            return True
        if self.is_exact:
            return q.sign_at(self.lo) == 0
        g = _primitive_gcd(self.poly, q)
        if g.degree() < 1:
            return False
        return _simple_root_in(g, self.lo, self.hi)

    def __repr__(self):
        if self.is_exact:
            return f"Root({self.lo})"
        return f"Root({self.poly}; [{self.lo}, {self.hi}])"


def _simple_root_in(g: Poly, lo, hi) -> bool:
    """Does g vanish in [lo, hi]?  Valid when g divides a polynomial with a
    single root there (an isolating interval), so an endpoint sign test decides."""
    g = square_free(g)
    slo, shi = g.sign_at(lo), g.sign_at(hi)
    return slo == 0 or shi == 0 or slo != shi


def exact_root(x) -> IsolatingInterval:
    """The rational time x as an isolating interval of t - x."""
    x = Fraction(x)
    return IsolatingInterval(Poly((-x.numerator, x.denominator)), x, x)


def compare_roots(a: IsolatingInterval, b: IsolatingInterval) -> int:
    """Exact three-way comparison of two real algebraic numbers."""
    if a.is_exact and b.is_exact:
        return _sign(a.lo - b.lo)
    tested = False
    while True:
        if a.hi < b.lo:
            return -1
        if b.hi < a.lo:
            return 1
        if not tested:
            tested = True
            lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
            if a.is_exact:
                if b.is_root_of(Poly((-a.lo.numerator, a.lo.denominator))):
                    return 0
            elif b.is_exact:
                if a.is_root_of(Poly((-b.lo.numerator, b.lo.denominator))):
                    return 0
            else:
                g = _primitive_gcd(a.poly, b.poly)
                if g.degree() >= 1 and _simple_root_in(g, lo, hi):
                    return 0
        a, b = a.refine(), b.refine()


def sign_at_root(q: Poly, at: IsolatingInterval) -> int:
    """Exact sign of q at the algebraic number described by ``at``."""
    if q.is_zero():
        return 0
    if at.is_exact:
        return q.sign_at(at.lo)
    if at.is_root_of(q):
        return 0
    iv = at
    while count_roots_closed(q, iv.lo, iv.hi) > 0:
        iv = iv.refine()
        if iv.is_exact:
            return q.sign_at(iv.lo)
    return q.sign_at(iv.lo)


def _nudge(q: Poly, seq, x: Fraction, direction: int, limit: Fraction) -> Fraction:
    """A point y beyond x (towards ``direction``) with no root of q in between."""
    step = abs(limit - x) / 2
    while True:
        y = x + direction * step
        a, b = (x, y) if direction > 0 else (y, x)
        inside = sign_variations(seq, a) - sign_variations(seq, b)
        if direction < 0:
            inside -= 1  # (y, x] counts the root at x
        if inside == 0 and q.sign_at(y) != 0:
            return y
        step /= 2


def _isolate_sf(q: Poly, lo: Fraction, hi: Fraction, out: list):
    """Isolate the roots of square-free q in (lo, hi]; q(lo) != 0."""
    seq = sturm_sequence(q)
    stack = [(lo, hi, sign_variations(seq, lo) - sign_variations(seq, hi))]
    while stack:
        a, b, k = stack.pop()
        if k == 0:
            continue
        if k == 1:
            if q.sign_at(b) == 0:
                out.append(IsolatingInterval(q, b, b))
            else:
                out.append(IsolatingInterval(q, a, b))
            continue
        m = (a + b) / 2
        vm = sign_variations(seq, m)
        if q.sign_at(m) == 0:
            out.append(IsolatingInterval(q, m, m))
            left = _nudge(q, seq, m, -1, a)
            right = _nudge(q, seq, m, +1, b)
            stack.append((a, left, sign_variations(seq, a) - sign_variations(seq, left)))
            stack.append((right, b, sign_variations(seq, right) - sign_variations(seq, b)))
        else:
            stack.append((a, m, sign_variations(seq, a) - vm))
            stack.append((m, b, vm - sign_variations(seq, b)))


def isolate_real_roots(p: Poly, lo=Fraction(0), hi=None) -> list:
    """Isolating intervals for the distinct real roots of p in [lo, hi].

    The default domain is [0, oo).  Intervals are sorted and pairwise
    disjoint; rational roots met during bisection come back exact.
    """
    if p.is_zero():
        raise ZeroPolynomial("cannot isolate roots of the zero polynomial")
    q = square_free(p)
    if q.degree() <= 0:
        return []
    lo = Fraction(lo)
    out = []
    hi = Fraction(cauchy_bound(q)) if hi is None else Fraction(hi)
    if hi < lo:
        return out
    start = lo
    if q.sign_at(lo) == 0:
        out.append(IsolatingInterval(q, lo, lo))
        if hi == lo:
            return out
        start = _nudge(q, sturm_sequence(q), lo, +1, hi + 1)
        if start > hi:
            return out
    _isolate_sf(q, start, hi, out)
    out.sort(key=lambda iv: (iv.lo, iv.hi))
    return [_snap_rational(iv) for iv in out]


_DIVISOR_LIMIT = 10 ** 6


def _divisors(n: int) -> list:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _snap_rational(iv: IsolatingInterval) -> IsolatingInterval:
    """Make an interval exact when its root is rational (small coefficients)."""
    if iv.is_exact:
        return iv
    q = iv.poly
    c0, lc = q.coeffs[0], q.lc()
    if c0 == 0 or abs(c0) > _DIVISOR_LIMIT or abs(lc) > _DIVISOR_LIMIT:
        return iv
    for a in _divisors(lc):
        for b in _divisors(c0):
            for s in (1, -1):
                x = Fraction(s * b, a)
                if iv.lo < x < iv.hi and q.sign_at(x) == 0:
                    return IsolatingInterval(q, x, x)
    return iv


# ---------------------------------------------------------------------------
# Rational functions


class RationalFunction:
    """num/den in lowest terms with integer coefficients.

    Canonical form: gcd(num, den) = 1 in Z[t], jointly content-free, and the
    denominator has a positive leading coefficient, so equality is structural.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, *, reduced=False):
        num = _as_poly(num) if not isinstance(num, Poly) else num
        den = Poly((1,)) if den is None else (_as_poly(den) if not isinstance(den, Poly) else den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not reduced:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def from_coeffs(cls, num, den=(1,)):
        return cls(Poly(num), Poly(den))

    def beta(self) -> int:
        """Description complexity: max degree of the reduced num/den."""
        return max(self.num.degree(), self.den.degree(), 0)

    def is_polynomial(self) -> bool:
        return self.den.degree() == 0

    def as_poly(self) -> Poly:
        if not self.is_polynomial():
            raise ValueError("not a polynomial")
        d = self.den.coeffs[0]
        if any(c % d for c in self.num.coeffs):
            raise ValueError("polynomial with non-integer coefficients")
        return Poly(c // d for c in self.num.coeffs)

    def __call__(self, t):
        return eval_ratfun(self, t)

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self):
        if self.is_polynomial() and self.den.coeffs == (1,):
            return f"RationalFunction({self.num})"
        return f"RationalFunction(({self.num}) / ({self.den}))"


def _reduce(num: Poly, den: Poly):
    if num.is_zero():
        return Poly(), Poly((1,))
    g = _primitive_gcd(num, den)
    if g.degree() > 0:
        num = exact_quotient(num, g)
        den = exact_quotient(den, g)
    c = gcd(num.content(), den.content())
    if den.lc() < 0:
        c = -c
    return Poly(x // c for x in num.coeffs), Poly(x // c for x in den.coeffs)


def eval_ratfun(f: RationalFunction, t) -> Optional[Fraction]:
    """Exact value of f at t, or None where the denominator vanishes."""
    t = Fraction(t)
    p, q = t.numerator, t.denominator
    d = f.den.scaled_eval(p, q)
    if d == 0:
        return None
    n = f.num.scaled_eval(p, q)
    # both scaled by their own degree; bring to a common power of q
    dn, dd = max(f.num.degree(), 0), max(f.den.degree(), 0)
    if dn > dd:
        d *= q ** (dn - dd)
    elif dd > dn:
        n *= q ** (dd - dn)
    return Fraction(n, d)


class _Identical:
    def __repr__(self):
        return "IDENTICAL"

    def __bool__(self):
        return False


IDENTICAL = _Identical()


def cross_difference(f: RationalFunction, g: RationalFunction) -> Poly:
    return f.num * g.den - g.num * f.den


def cross_difference_roots(f: RationalFunction, g: RationalFunction):
    """Roots on [0, oo) of num(f)den(g) - num(g)den(f), or IDENTICAL."""
    d = cross_difference(f, g)
    if d.is_zero():
        return IDENTICAL
    return isolate_real_roots(d)


def signs_near_event(polys, event: IsolatingInterval) -> list:
    """(left, at, right) signs of each polynomial around an event time.

    ``left``/``right`` are the signs on punctured neighbourhoods of the
    event; at t = 0 the left sign is reported as the sign at 0 since the
    domain starts there.
    """
    out = []
    for q in polys:
        out.append(_signs_near(q, event))
    return out


def _signs_near(q: Poly, ev: IsolatingInterval):
    if q.is_zero():
        return (0, 0, 0)
    at = sign_at_root(q, ev)
    if at != 0:
        return (at, at, at)
    if ev.is_exact:
        x = ev.lo
        step = Fraction(1)
        while count_roots_closed(q, x - step, x + step) > 1:
            step /= 2
        return (q.sign_at(x - step), 0, q.sign_at(x + step))
    iv = ev
    while True:
        if iv.is_exact:
            return _signs_near(q, iv)
        if count_roots_closed(q, iv.lo, iv.hi) == 1:
            return (q.sign_at(iv.lo), 0, q.sign_at(iv.hi))
        iv = iv.refine()


def simplest_between(a: Fraction, b: Fraction) -> Fraction:
    """The rational with the smallest denominator in the open interval (a, b)."""
    a, b = Fraction(a), Fraction(b)
    if a >= b:
        raise ValueError("empty interval")
    fl = a.numerator // a.denominator
    if fl + 1 < b:
        return Fraction(fl + 1)
    # continued-fraction descent on the shared integer part
    if a == fl:
        return fl + 1 / _smallest_above(1 / (b - fl))
    inner = simplest_between(1 / (b - fl), 1 / (a - fl))
    return fl + 1 / inner


def _smallest_above(x: Fraction) -> Fraction:
    return Fraction(x.numerator // x.denominator + 1)
