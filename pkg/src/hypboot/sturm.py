"""Exact real-root location for rational polynomials via Sturm chains.

Used to certify positivity thresholds: isolate every real root of an
eventually-positive polynomial, then bisect the largest positive one to a
requested width.  All arithmetic is exact (fractions.Fraction), so the
certificates carry no floating-point doubt.
"""

from __future__ import annotations

from fractions import Fraction

from .polys import UnivariatePolynomial


def polynomial_divmod(a: UnivariatePolynomial, b: UnivariatePolynomial):
    """Quotient and remainder of exact polynomial division."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(0, a.degree - b.degree + 1)
    rem = list(a.coeffs)
    db, lb = b.degree, b.leading
    while len(rem) - 1 >= db and any(rem):
        while rem and rem[-1] == 0:
            rem.pop()
        if len(rem) - 1 < db:
            break
        shift = len(rem) - 1 - db
        factor = rem[-1] / lb
        q[shift] = factor
        for i, c in enumerate(b.coeffs):
            rem[shift + i] -= factor * c
        rem.pop()
    return UnivariatePolynomial(q), UnivariatePolynomial(rem)


def polynomial_gcd(a: UnivariatePolynomial, b: UnivariatePolynomial) -> UnivariatePolynomial:
    """Monic gcd by the Euclidean algorithm."""
    while b:
        a, b = b, polynomial_divmod(a, b)[1]
    if a:
        a = a * (1 / a.leading)
    return a


def squarefree_part(p: UnivariatePolynomial) -> UnivariatePolynomial:
    """p divided by gcd(p, p'); same real roots, all simple."""
    if p.degree < 1:
        return p
    g = polynomial_gcd(p, p.derivative())
    if g.degree < 1:
        return p
    return polynomial_divmod(p, g)[0]


def deflate(p: UnivariatePolynomial, root: Fraction) -> UnivariatePolynomial:
    """Exact synthetic division by (x - root); root must be an exact root."""
    out = []
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * root + c
        out.append(acc)
    if out and out[-1] != 0:
        raise ArithmeticError(f"{root} is not a root")
    return UnivariatePolynomial(list(reversed(out[:-1])))


def sturm_chain(p: UnivariatePolynomial) -> list[UnivariatePolynomial]:
    chain = [p, p.derivative()]
    while chain[-1]:
        rem = polynomial_divmod(chain[-2], chain[-1])[1]
        if not rem:
            break
        # Normalize to keep coefficient growth in check; sign is what matters,
        # so scale by a positive rational only.
        rem = rem * (1 / abs(rem.leading))
        chain.append(-rem)
    return chain


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def sign_variations(chain, x: Fraction) -> int:
    signs = [s for s in (_sign(p(x)) for p in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def cauchy_bound(p: UnivariatePolynomial) -> Fraction:
    """All real roots lie in (-bound, bound)."""
    if p.degree < 1:
        return Fraction(1)
    lead = abs(p.leading)
    return 1 + max(abs(c) for c in p.coeffs[:-1]) / lead


def isolate_real_roots(p: UnivariatePolynomial):
    """All real roots of p as (exact_roots, isolating_intervals, residual).

    Each interval (a, b] contains exactly one (simple) root of `residual`,
    with nonzero values of opposite signs at a and b.  `residual` is the
    squarefree part of p with any exactly-located roots deflated out;
    those are returned in exact_roots.
    """
    sf = squarefree_part(p)
    exact: list[Fraction] = []
    while True:
        hit = _isolate_pass(sf)
        if isinstance(hit, Fraction):
            exact.append(hit)
            sf = deflate(sf, hit)
            continue
        return sorted(exact), hit, sf


def _isolate_pass(sf: UnivariatePolynomial):
    if sf.degree < 1:
        return []
    chain = sturm_chain(sf)
    bound = cauchy_bound(sf)
    intervals = []
    stack = [(-bound, bound, sign_variations(chain, -bound), sign_variations(chain, bound))]
    while stack:
        a, b, va, vb = stack.pop()
        n = va - vb
        if n <= 0:
            continue
        if n == 1:
            intervals.append((a, b))
            continue
        m = (a + b) / 2
        if sf(m) == 0:
            return m  # caller deflates and retries
        vm = sign_variations(chain, m)
        stack.append((a, m, va, vm))
        stack.append((m, b, vm, vb))
    return sorted(intervals)


def refine_root(sf: UnivariatePolynomial, a: Fraction, b: Fraction, width: Fraction):
    """Bisect a sign-changing bracket down to the requested width.

    Returns (lo, hi) with sf(lo)*sf(hi) < 0 and hi - lo <= width, or an
    exact pair (r, r) if a bisection point lands on the root.
    """
    sa = _sign(sf(a))
    if sa == 0:
        return a, a
    if _sign(sf(b)) == 0:
        return b, b
    while b - a > width:
        m = (a + b) / 2
        sm = _sign(sf(m))
        if sm == 0:
            return m, m
        if sm == sa:
            a = m
        else:
            b = m
    return a, b


def strip_zero_root(p: UnivariatePolynomial):
    """Factor out the largest power of x: returns (p / x^m, m)."""
    m = 0
    coeffs = p.coeffs
    while coeffs and coeffs[0] == 0:
        coeffs = coeffs[1:]
        m += 1
    return UnivariatePolynomial(coeffs), m


def real_root_brackets(p: UnivariatePolynomial, width: Fraction):
    """Every real root of p as a sorted list of disjoint brackets.

    Exactly-known roots appear as degenerate pairs (r, r); the rest as
    (lo, hi) with hi - lo <= width, opposite signs at the ends, and no
    exact root or 0 strictly inside.
    """
    width = Fraction(width)
    if width <= 0:
        raise ValueError("width must be positive")
    stripped, mult0 = strip_zero_root(p)
    exact, intervals, sf = isolate_real_roots(stripped)
    if mult0:
        exact = sorted(exact + [Fraction(0)])
    brackets = [(r, r) for r in exact]
    open_brackets = [refine_root(sf, a, b, width) for a, b in intervals]

    sep_points = set(exact) | {Fraction(0)}
    for lo, hi in list(open_brackets):
        while lo < hi and any(lo < pt < hi for pt in sep_points):
            # sf has no root at any separation point, so bisection pulls the
            # bracket off it in finitely many steps.
            lo, hi = refine_root(sf, lo, hi, (hi - lo) / 4)
        brackets.append((lo, hi))
    return sorted(brackets)
