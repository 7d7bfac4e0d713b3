"""Exact polynomial containers and Sturm-based root isolation."""

from fractions import Fraction as F

import pytest

import hypboot as hb
from hypboot.errors import NoThresholdError
from hypboot.polys import BivariatePolynomial, UnivariatePolynomial


def test_univariate_basics():
    p = UnivariatePolynomial((F(48), F(-19), F(1)))
    assert p.degree == 2
    assert p.coefficient(1) == -19
    assert p.coefficient(7) == 0
    assert p(F(3)) == 0 and p(F(16)) == 0
    assert p(F(0)) == 48
    d = p.derivative()
    assert [d.coefficient(n) for n in range(d.degree + 1)] == [F(-19), F(2)]
    assert p.leading == 1


def test_bivariate_substitution():
    # x^2 - 2xy + y^2/2 + 2x - y
    p = hb.p(2)
    assert isinstance(p, BivariatePolynomial)
    assert p.total_degree == 2
    sl = p.substitute_x(F(3))
    assert sl(F(1)) == F(17, 2)  # 9 - 6 + 1/2 + 6 - 1
    assert p.substitute_y(F(0))(F(5)) == 35  # 25 + 10


def test_sturm_chain_sign_structure():
    p = UnivariatePolynomial((F(48), F(-19), F(1)))
    chain = hb.sturm_chain(p)
    assert chain[0] is p or chain[0].coeffs == p.coeffs
    assert chain[-1].degree == 0  # squarefree input ends in a constant


def test_root_isolation_quadratic():
    p = UnivariatePolynomial((F(48), F(-19), F(1)))
    exact, intervals, squarefree = hb.isolate_real_roots(p)
    assert len(exact) + len(intervals) == 2
    brackets = hb.real_root_brackets(p, F(1, 10**9))
    assert len(brackets) == 2
    for root, (a, b) in zip((F(3), F(16)), brackets):
        assert a <= root <= b
        assert b - a <= F(1, 10**9)


def test_refine_root_shrinks():
    p = UnivariatePolynomial((F(-2), F(0), F(1)))  # x^2 - 2
    _, intervals, sf = hb.isolate_real_roots(p)
    hit = False
    for a, b in intervals:
        if a >= 0:
            lo, hi = hb.refine_root(sf, a, b, F(1, 10**12))
            assert lo * lo <= 2 <= hi * hi
            assert hi - lo <= F(1, 10**12)
            hit = True
    assert hit


def test_positivity_threshold_cases():
    Q = UnivariatePolynomial((F(0), F(1), F(-19, 48), F(1, 48)))
    thr = hb.positivity_threshold(Q)
    assert abs(thr - 16) <= F(1, 10**12)
    assert hb.positivity_threshold(UnivariatePolynomial((F(0), F(1)))) == 0
    # strictly positive constant is nonnegative everywhere
    assert hb.positivity_threshold(UnivariatePolynomial((F(5),))) == 0
    with pytest.raises(NoThresholdError):
        hb.positivity_threshold(UnivariatePolynomial((F(1), F(-1))))


def test_positivity_threshold_tangency():
    # touching zero without dipping below must not raise the threshold
    Q = UnivariatePolynomial((F(16), F(-8), F(1)))  # (lam-4)^2
    assert hb.positivity_threshold(Q) == 0
    Q2 = UnivariatePolynomial((F(0), F(16), F(-8), F(1)))  # lam (lam-4)^2
    assert hb.positivity_threshold(Q2) == 0
    # but a dip before a later tangency does: (lam-1)(lam-4)^2
    Q3 = UnivariatePolynomial((F(-16), F(24), F(-9), F(1)))
    assert abs(hb.positivity_threshold(Q3) - 1) <= F(1, 10**11)
