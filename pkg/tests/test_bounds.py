"""Spectral-gap bounds: cancellation coefficients, the induced spectral
polynomial, certified thresholds, and the functional search."""

import math
import random
from fractions import Fraction as F

import pytest

import hypboot as hb
from hypboot.errors import DomainError


EXPECTED_TABLE = {1: 8.6055, 2: 16.0, 3: 23.3808, 4: 30.7577, 6: 45.5069}


def test_closed_form_table():
    for k, want in EXPECTED_TABLE.items():
        assert abs(float(hb.closed_form_bound(k)) - want) < 5e-4
    assert hb.closed_form_bound(2) == 16  # exact rational value


def test_closed_form_rejects_bad_k():
    with pytest.raises(DomainError):
        hb.closed_form_bound(0)


def test_cancellation_explicit_rows():
    for k in range(1, 7):
        assert hb.solve_cancellation(k, 0, (F(1),)) == [F(2)]
        want = F(4 * k + 2, k + 1)
        assert hb.solve_cancellation(k, 1, (F(-1), F(1))) == [-want, want]


def test_cancellation_is_linear_in_a():
    k = 3
    a1 = (F(1), F(0), F(2))
    a2 = (F(0), F(1), F(-1))
    b1 = hb.solve_cancellation(k, 2, a1)
    b2 = hb.solve_cancellation(k, 2, a2)
    mixed = tuple(3 * x + 5 * y for x, y in zip(a1, a2))
    assert hb.solve_cancellation(k, 2, mixed) == [3 * x + 5 * y for x, y in zip(b1, b2)]


def test_cancellation_full_rank_sweep():
    # one b per a on every tested (k, N): no CancellationError, right length
    for k in range(1, 7):
        for N in range(7):
            a = tuple(F((-1) ** n * (n + 1)) for n in range(N + 1))
            b = hb.solve_cancellation(k, N, a)
            assert len(b) == N + 1


# --- numeric cancellation oracle ---------------------------------------------
#
# A synthetic spectrum carrying only discrete lowest-weight columns: the
# squared ladder function is annihilated by lowering, so a column whose
# lowest weight is 2k + 2n0 holds free data x_{n0} and everything above it
# is chained by the two weight-raising relations
#
#   sqrt(lam_c + w(w+1)) x_n = 2 sqrt((n+1)(n+2k)) y_n          (w = 2k+2n)
#   sqrt(lam_c + (w+2)(w+1)) x_{n+1} = 2 sqrt((n+1)(n+2k)) y_n
#
# with lam_c = -(2k+2n0)(2k+2n0-1).  On such data the alternating double
# sum that the b-coefficients are built to kill must vanish identically.

def _discrete_column_fixture(k, N, seed=11):
    rng = random.Random(seed)
    weights = tuple([k] + [2 * k + 2 * n for n in range(N + 1)])
    r1 = len(weights)
    lam = [F(0)]
    for _ in range(r1):
        lam.append(lam[-1] + F(round(rng.uniform(1.0, 5.0) * 10**3), 10**3))
    ctx = hb.SpectralContext(
        hb.LaplaceSpectrum(tuple(lam), lam[-1]),
        hb.HolomorphicSpectrum(weights, weights[-1]),
    )
    window = hb.Window(r1, 2 * k + 2 * N + 2)
    entries = []
    for rank in range(2, len(weights) + 1):
        n0 = rank - 2
        m = 2 * k + 2 * n0
        lam_c = -m * (m - 1)
        x = rng.uniform(0.5, 2.0)
        for n in range(n0, N + 1):
            w = 2 * k + 2 * n
            entries.append((hb.Index(-1, k + n), hb.Index(-1, k + n),
                            hb.Index(-rank, w), x))
            y = math.sqrt(lam_c + w * (w + 1)) * x / (2 * math.sqrt((n + 1) * (n + 2 * k)))
            entries.append((hb.Index(-1, k + n), hb.Index(-1, k + n + 1),
                            hb.Index(-rank, w + 1), y))
            if n < N:
                x = 2 * math.sqrt((n + 1) * (n + 2 * k)) * y / math.sqrt(lam_c + (w + 2) * (w + 1))
    return hb.extend_hb3_closure(hb.from_triples(ctx, window, entries)), window, ctx


def _combo_rhs(spec, window, ctx, k, N, a, b):
    total = 0.0
    for l in window.members(ctx):
        sgn = (-1) ** (l[1] % 2)
        for n in range(N + 1):
            i_n = hb.Index(-1, k + n)
            i_n1 = hb.Index(-1, k + n + 1)
            bl = hb.bar(l)
            term_a = spec.get(i_n, i_n, l) * spec.get(hb.bar(i_n), hb.bar(i_n), bl)
            term_b = spec.get(i_n, i_n1, l) * spec.get(hb.bar(i_n), hb.bar(i_n1), bl)
            total += sgn * (float(a[n]) * term_a + float(b[n]) * term_b)
    return total


@pytest.mark.parametrize("k,N,a", [
    (2, 0, (1,)),
    (2, 1, (-1, 1)),
    (2, 3, (2, -1, 3, 1)),
    (1, 2, (1, 2, -1)),
    (3, 4, (0, 1, -2, 1, 1)),
    (2, 5, (1, -2, 3, -1, 2, 1)),
])
def test_cancellation_kills_discrete_columns(k, N, a):
    a = tuple(F(x) for x in a)
    spec, window, ctx = _discrete_column_fixture(k, N)
    b = hb.solve_cancellation(k, N, a)
    cancelled = _combo_rhs(spec, window, ctx, k, N, a, b)
    untouched = _combo_rhs(spec, window, ctx, k, N, a, [F(0)] * (N + 1))
    assert abs(cancelled) < 1e-10
    # sensitivity: with b zeroed out the same sum is far from zero
    assert abs(untouched) > 1e-2


# --- induced spectral polynomial ---------------------------------------------

def test_functional_polynomial_order_zero():
    for k in (1, 2, 3, 5):
        Q = hb.functional_polynomial(k, 0, (F(1),), (F(2),))
        assert Q.degree == 1
        assert Q.coefficient(0) == -1 and Q.coefficient(1) == F(1, k)


def test_functional_polynomial_order_one_identity():
    for k in range(1, 11):
        a = (F(-1), F(1))
        b = hb.solve_cancellation(k, 1, a)
        Q = hb.functional_polynomial(k, 1, a, b)
        den = F(4 * k * k * (k + 1))
        assert Q.degree == 3
        assert Q.coefficient(0) == 0
        assert Q.coefficient(1) == F(12 * k * k) / den
        assert Q.coefficient(2) == F(-(9 * k + 1)) / den
        assert Q.coefficient(3) == 1 / den


def test_order_one_threshold_matches_closed_form():
    for k in range(1, 11):
        a = (F(-1), F(1))
        b = hb.solve_cancellation(k, 1, a)
        thr = hb.positivity_threshold(hb.functional_polynomial(k, 1, a, b))
        assert abs(float(thr) - float(hb.closed_form_bound(k))) <= 1e-9


def test_functional_polynomial_length_validation():
    with pytest.raises(DomainError):
        hb.functional_polynomial(2, 1, (F(1),), (F(1), F(1)))


# --- search -------------------------------------------------------------------

def test_search_order_one_recovers_closed_form():
    fn = hb.search_functional(2, 1)
    assert fn.k == 2 and fn.N == 1 and fn.vacuum_normalized
    assert abs(float(fn.threshold) - 16.0) <= 1e-9
    assert fn.Q(F(0)) == 0
    fn1 = hb.search_functional(1, 1)
    assert abs(float(fn1.threshold) - float(hb.closed_form_bound(1))) <= 1e-9


def test_search_certificate_is_selfconsistent():
    fn = hb.search_functional(2, 3)
    Q = hb.functional_polynomial(2, 3, fn.a, fn.b)
    assert Q.coeffs == fn.Q.coeffs
    assert list(hb.solve_cancellation(2, 3, fn.a)) == list(fn.b)
    # certified: Q really is nonnegative past the threshold
    assert hb.positivity_threshold(Q) <= fn.threshold + F(1, 10**9)


def test_search_monotone_in_order():
    prev = None
    for N in range(1, 5):
        fn = hb.search_functional(2, N)
        if prev is not None:
            assert fn.threshold <= prev + F(1, 10**6)
        prev = fn.threshold


def test_search_deterministic():
    one = hb.search_functional(2, 2)
    two = hb.search_functional(2, 2)
    assert one.a == two.a and one.threshold == two.threshold


def test_search_improves_strictly_at_order_five():
    fn = hb.search_functional(2, 5)
    assert fn.threshold < 16


def test_search_rejects_bad_arguments():
    with pytest.raises(DomainError):
        hb.search_functional(0, 1)
    with pytest.raises(DomainError):
        hb.search_functional(2, 0)
