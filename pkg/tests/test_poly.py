"""Polynomials, root isolation and rational functions, checked against sympy."""
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from kinets.errors import ZeroPolynomial
from kinets.poly import (
    IDENTICAL,
    IsolatingInterval,
    Poly,
    RationalFunction,
    compare_roots,
    count_roots,
    cross_difference_roots,
    eval_ratfun,
    exact_root,
    isolate_real_roots,
    poly_gcd,
    sign_at_root,
    signs_near_event,
    simplest_between,
    sturm_sequence,
)

T = sympy.Symbol("t")


def sym(p: Poly):
    return sum(sympy.Integer(c) * T ** k for k, c in enumerate(p.coeffs))


def sympy_nonneg_roots(p: Poly) -> list:
    """Distinct real roots >= 0 as sympy algebraic numbers, sorted."""
    roots = sympy.Poly(sym(p), T).real_roots()
    return sorted({r for r in roots if r >= 0}, key=lambda r: float(r))


coeff_lists = st.lists(st.integers(-30, 30), min_size=1, max_size=6).filter(lambda c: any(c))


def test_isolate_sqrt2():
    ivs = isolate_real_roots(Poly([-2, 0, 1]))
    assert len(ivs) == 1
    iv = ivs[0]
    assert iv.lo ** 2 <= 2 <= iv.hi ** 2


def test_isolate_rational_roots_exact():
    ivs = isolate_real_roots(Poly([3, -4, 1]))
    assert [(iv.lo, iv.hi) for iv in ivs] == [(1, 1), (3, 3)]


def test_isolate_negative_root_excluded():
    assert isolate_real_roots(Poly([4, 1])) == []


def test_isolate_zero_polynomial():
    with pytest.raises(ZeroPolynomial):
        isolate_real_roots(Poly([]))


@settings(max_examples=150, deadline=None)
@given(coeff_lists)
def test_isolation_matches_sympy(coeffs):
    p = Poly(coeffs)
    if p.degree() < 1:
        return
    ivs = isolate_real_roots(p)
    expected = sympy_nonneg_roots(p)
    assert len(ivs) == len(expected)
    for iv, r in zip(ivs, expected):
        assert sympy.Rational(iv.lo.numerator, iv.lo.denominator) <= r <= sympy.Rational(iv.hi.numerator, iv.hi.denominator)
        # exactly one root of the defining polynomial inside
        if not iv.is_exact:
            assert iv.poly.sign_at(iv.lo) * iv.poly.sign_at(iv.hi) < 0
            assert count_roots(iv.poly, iv.lo, iv.hi) == 1
    for a, b in zip(ivs, ivs[1:]):
        # neighbours may share an endpoint only if it is not a root
        assert a.hi < b.lo or (a.hi == b.lo and p.sign_at(a.hi) != 0)


@settings(max_examples=100, deadline=None)
@given(coeff_lists, coeff_lists)
def test_gcd_matches_sympy(a, b):
    pa, pb = Poly(a), Poly(b)
    g = poly_gcd(pa, pb)
    gs = sympy.Poly(sympy.gcd(sym(pa), sym(pb)), T)
    assert g.degree() == gs.degree()
    # same polynomial up to a rational unit
    ratio = sympy.cancel(sym(g) / gs.as_expr())
    assert ratio.is_number


def test_sturm_sequence_sympy():
    p = Poly([-5, 3, -2, 1])
    seq = sturm_sequence(p)
    ours = [sympy.Poly(sym(q), T) for q in seq]
    theirs = sympy.sturm(sym(p), T)
    assert len(ours) == len(theirs)
    for q, s in zip(ours, theirs):
        # each term agrees up to a positive factor
        ratio = sympy.cancel(q.as_expr() / s)
        assert ratio.is_number and ratio > 0


def test_eval_ratfun_examples():
    f = RationalFunction(Poly([1, 1]), Poly([-2, 1]))
    assert eval_ratfun(f, 0) == Fraction(-1, 2)
    assert eval_ratfun(f, 2) is None
    assert eval_ratfun(RationalFunction(Poly([5])), Fraction(7, 3)) == 5


@settings(max_examples=100, deadline=None)
@given(coeff_lists, coeff_lists, st.fractions(min_value=0, max_value=50, max_denominator=40))
def test_eval_ratfun_direct(num, den, t):
    f = RationalFunction(Poly(num), Poly(den))
    d = Poly(den)(t)
    v = eval_ratfun(f, t)
    if d == 0:
        # only the reduced denominator decides; the removable case may be defined
        assert v is None or f.den(t) != 0
    else:
        assert v == Poly(num)(t) / d


def test_reduced_form():
    f = RationalFunction(Poly([0, 0, 2]), Poly([0, 1]))
    assert f == RationalFunction(Poly([0, 2]))
    assert f.beta() == 1


def test_cross_difference_examples():
    roots = cross_difference_roots(RationalFunction(Poly([-2, 3])), RationalFunction(Poly([0, -1])))
    assert [(r.lo, r.hi) for r in roots] == [(Fraction(1, 2), Fraction(1, 2))]
    assert cross_difference_roots(RationalFunction(Poly([-4, -4])), RationalFunction(Poly([2, 4]))) == []
    same = cross_difference_roots(RationalFunction(Poly([0, 2])), RationalFunction(Poly([0, 0, 2]), Poly([0, 1])))
    assert same is IDENTICAL


@settings(max_examples=60, deadline=None)
@given(coeff_lists, coeff_lists)
def test_cross_difference_symmetric(a, b):
    f, g = RationalFunction(Poly(a)), RationalFunction(Poly(b))
    ra, rb = cross_difference_roots(f, g), cross_difference_roots(g, f)
    if ra is IDENTICAL:
        assert rb is IDENTICAL
        return
    assert len(ra) == len(rb)
    for x, y in zip(ra, rb):
        assert compare_roots(x, y) == 0


def test_signs_near_event_examples():
    ev = IsolatingInterval(Poly([-1, 2]), Fraction(0), Fraction(1))
    assert signs_near_event([Poly([-3, 1])], ev) == [(-1, -1, -1)]
    assert signs_near_event([Poly([-1, 2]) * Poly([-1, 2])], ev)[0][1] == 0
    sqrt2 = isolate_real_roots(Poly([-2, 0, 1]))[0]
    left, at, right = signs_near_event([Poly([-2, 0, 1])], sqrt2)[0]
    assert (left, at, right) == (-1, 0, 1)


def test_compare_and_sign_at_algebraic_roots():
    sqrt2 = isolate_real_roots(Poly([-2, 0, 1]))[0]
    sqrt3 = isolate_real_roots(Poly([-3, 0, 1]))[0]
    assert compare_roots(sqrt2, sqrt3) == -1
    assert compare_roots(sqrt3, sqrt2) == 1
    # the same number from a different polynomial
    other = isolate_real_roots(Poly([-2, 0, 1]) * Poly([-7, 1]))[0]
    assert compare_roots(sqrt2, other) == 0
    assert sign_at_root(Poly([-2, 0, 1]), sqrt3) == 1
    assert sign_at_root(Poly([-3, 0, 1]), sqrt2) == -1
    assert compare_roots(exact_root(Fraction(3, 2)), sqrt2) == 1


@settings(max_examples=100, deadline=None)
@given(st.fractions(min_value=-20, max_value=20, max_denominator=50),
       st.fractions(min_value=Fraction(1, 50), max_value=5, max_denominator=1000))
def test_simplest_between(a, w):
    b = a + w
    q = simplest_between(a, b)
    assert a < q < b
    # no smaller denominator lies strictly inside
    for den in range(1, q.denominator):
        k = (a * den).__floor__() + 1
        assert not Fraction(k, den) < b
