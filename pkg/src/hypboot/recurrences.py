"""Exact engines for the polynomial families defined by three-term recurrences.

Five families live here, all with exact rational coefficients:

* ``p(n)`` — bivariate in (lambda, mu):
      p_{n+1} = (2*lam - mu + 2n^2) p_n - (lam + n(n-1))^2 p_{n-1},
      p_0 = 1, p_1 = lam - mu/2.
* ``q(k, n)`` — univariate in mu; same recurrence after the shift
      lam -> -k(k-1), n -> n+k (coefficient-shift duality).
* ``B(k, n)`` — univariate in lam, the normalized ladder-diagonal family:
      B_{k,n+1} = [(lam + 2k(k-1) - 2(n+k)^2) B_{k,n}
                   - ((n+k)(n+k-1) - k(k-1)) B_{k,n-1}]
                  / ((n+k)(n+k+1) - k(k-1)),   n >= 1,
      B_{k,0} = 1, B_{k,1} = lam/(2k) - 1.
* ``s(n) = p_{n+1} - (lam + n(n+1)) p_n`` and the gated combination
  ``r(n) = 1_{mu>=1} s_n^2 / mu - p_n p_{n+1}``.
* the correction family ``p_correction(n, i, j)`` with its own recurrence,
  reducing to p_n at (i, j) = (0, 0).

Plus the two verification drivers: grid sign-law certification and the
transfer-matrix diagonalization error check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Optional, Sequence, Union

import numpy as np

from .errors import DomainError
from .polys import (
    BI_ONE,
    BI_X,
    BI_Y,
    BI_ZERO,
    BivariatePolynomial,
    UnivariatePolynomial,
)

Number = Union[int, float, Fraction]


# ---------------------------------------------------------------------------
# polynomial families


@lru_cache(maxsize=None)
def p(n: int) -> BivariatePolynomial:
    """The bivariate family p_n(lambda, mu)."""
    if n < 0:
        raise DomainError(f"p is defined for n >= 0, got {n}")
    if n == 0:
        return BI_ONE
    if n == 1:
        return BI_X - BivariatePolynomial({(0, 1): Fraction(1, 2)})
    m = n - 1
    lead = 2 * BI_X - BI_Y + BivariatePolynomial({(0, 0): 2 * m * m})
    back = Fraction(m * (m - 1)) + BI_X
    return lead * p(m) - back * back * p(m - 1)


@lru_cache(maxsize=None)
def q(k: int, n: int) -> UnivariatePolynomial:
    """The univariate family q_{k,n}(mu)."""
    if k < 1 or n < 0:
        raise DomainError(f"q needs k >= 1 and n >= 0, got ({k}, {n})")
    if n == 0:
        return UnivariatePolynomial([1])
    if n == 1:
        return UnivariatePolynomial([2 * k, -1])
    m = n - 1
    lead = UnivariatePolynomial([2 * (m + k) ** 2 - 2 * k * (k - 1), -1])
    c = (m + k) * (m + k - 1) - k * (k - 1)
    return lead * q(k, m) - c * c * q(k, m - 1)


@lru_cache(maxsize=None)
def B(k: int, n: int) -> UnivariatePolynomial:
    """The normalized ladder-diagonal family B_{k,n}(lambda)."""
    if k < 1 or n < 0:
        raise DomainError(f"B needs k >= 1 and n >= 0, got ({k}, {n})")
    if n == 0:
        return UnivariatePolynomial([1])
    if n == 1:
        return UnivariatePolynomial([-1, Fraction(1, 2 * k)])
    m = n - 1
    lead = UnivariatePolynomial([2 * k * (k - 1) - 2 * (m + k) ** 2, 1])
    c = (m + k) * (m + k - 1) - k * (k - 1)
    d = (m + k) * (m + k + 1) - k * (k - 1)
    return (lead * B(k, m) - c * B(k, m - 1)) * Fraction(1, d)


@lru_cache(maxsize=None)
def s(n: int) -> BivariatePolynomial:
    """s_n = p_{n+1} - (lambda + n(n+1)) p_n; divisible by mu."""
    if n < 0:
        raise DomainError(f"s is defined for n >= 0, got {n}")
    return p(n + 1) - (BI_X + Fraction(n * (n + 1))) * p(n)


@dataclass(frozen=True)
class PiecewiseBivariate:
    """polynomial + 1_{mu>=1} * gated_numerator / mu.

    The gated numerator is divisible by mu (it is a square of a multiple of
    mu), so for mu >= 1 the whole object is again a polynomial.
    """

    polynomial: BivariatePolynomial
    gated_numerator: BivariatePolynomial

    def __call__(self, lam, mu):
        val = self.polynomial(lam, mu)
        if mu >= 1:
            val += self.gated_numerator(lam, mu) / mu
        return val

    def as_polynomial_mu_ge_1(self) -> BivariatePolynomial:
        """The exact polynomial this equals on the region mu >= 1."""
        return self.polynomial + self.gated_numerator.divide_by_y()


@lru_cache(maxsize=None)
def r(n: int) -> PiecewiseBivariate:
    """r_n = 1_{mu>=1} s_n^2 / mu - p_n p_{n+1}."""
    sn = s(n)
    return PiecewiseBivariate(polynomial=-(p(n) * p(n + 1)), gated_numerator=sn * sn)


def R_combined(N: int, a: Sequence) -> PiecewiseBivariate:
    """R = sum_n a_n lambda^{2(N-n)} r_n for nonnegative rational weights a."""
    if N < 0 or len(a) != N + 1:
        raise DomainError(f"need N >= 0 and exactly N+1 weights, got N={N}, len(a)={len(a)}")
    weights = [Fraction(x) for x in a]
    if any(w < 0 for w in weights):
        raise DomainError(f"weights must be nonnegative, got {a}")
    poly = BI_ZERO
    gated = BI_ZERO
    for n, w in enumerate(weights):
        if w == 0:
            continue
        mono = w * BivariatePolynomial({(2 * (N - n), 0): 1})
        rn = r(n)
        poly += mono * rn.polynomial
        gated += mono * rn.gated_numerator
    return PiecewiseBivariate(poly, gated)


# ---------------------------------------------------------------------------
# correction family


@lru_cache(maxsize=None)
def p_correction(n: int, i: int, j: int) -> BivariatePolynomial:
    """The refinement p_{n,i,j}, equal to p_n at (i,j) = (0,0).

    Vanishes whenever i < 0, j < 0 or i + j > n.  The recurrence couples
    neighbouring (i, j) cells:

        p_{n+1,i,j} = (2*lam - mu + 2n^2) p_{n,i,j}
                      - (lam + n(n-1))^2 p_{n-1,i,j}
                      + p_{n,i-1,j} + p_{n,i,j-1}
                      - (lam + n(n-1)) (p_{n-1,i-1,j} + p_{n-1,i,j-1})
                      - p_{n-1,i-1,j-1}.
    """
    if n < 0 or i < 0 or j < 0 or i + j > n:
        return BI_ZERO
    if n == 0:
        return BI_ONE  # (i, j) = (0, 0) is the only cell that survives the guard
    if n == 1:
        if (i, j) == (0, 0):
            return p(1)
        return BivariatePolynomial({(0, 0): Fraction(1, 2)})  # (1,0) and (0,1)
    m = n - 1
    lead = 2 * BI_X - BI_Y + BivariatePolynomial({(0, 0): 2 * m * m})
    back = BI_X + Fraction(m * (m - 1))
    return (
        lead * p_correction(m, i, j)
        - back * back * p_correction(m - 1, i, j)
        + p_correction(m, i - 1, j)
        + p_correction(m, i, j - 1)
        - back * (p_correction(m - 1, i - 1, j) + p_correction(m - 1, i, j - 1))
        - p_correction(m - 1, i - 1, j - 1)
    )


@lru_cache(maxsize=None)
def s_correction(n: int, i: int, j: int) -> BivariatePolynomial:
    """s_{n,i,j} = p_{n+1,i,j} - (lambda + n(n+1)) p_{n,i,j} - p_{n,i-1,j}."""
    if n < 0 or i < 0 or j < 0 or i + j > n + 1:
        return BI_ZERO
    return (
        p_correction(n + 1, i, j)
        - (BI_X + Fraction(n * (n + 1))) * p_correction(n, i, j)
        - p_correction(n, i - 1, j)
    )


# ---------------------------------------------------------------------------
# scalar evaluation (fast paths used by grids and series)


def _promote(x):
    """Keep integer inputs exact across divisions."""
    return Fraction(x) if isinstance(x, int) else x


def p_values(lam, mu, n_max: int) -> list:
    """[p_0(lam,mu), ..., p_{n_max}(lam,mu)] by direct scalar recurrence."""
    lam, mu = _promote(lam), _promote(mu)
    out = [1 * lam**0, lam - mu / 2]
    for m in range(1, n_max):
        back = lam + m * (m - 1)
        out.append((2 * lam - mu + 2 * m * m) * out[m] - back * back * out[m - 1])
    return out[: n_max + 1]


def q_values(k: int, mu, n_max: int) -> list:
    """[q_{k,0}(mu), ..., q_{k,n_max}(mu)] by direct scalar recurrence."""
    out = [1 * mu**0, 2 * k - mu]
    for m in range(1, n_max):
        c = (m + k) * (m + k - 1) - k * (k - 1)
        out.append((2 * (m + k) ** 2 - 2 * k * (k - 1) - mu) * out[m] - c * c * out[m - 1])
    return out[: n_max + 1]


def B_values(k: int, lam, n_max: int) -> list:
    """[B_{k,0}(lam), ..., B_{k,n_max}(lam)]; works for exact or float lam."""
    lam = _promote(lam)
    out = [1 * lam**0, lam / (2 * k) - 1]
    for m in range(1, n_max):
        c = (m + k) * (m + k - 1) - k * (k - 1)
        d = (m + k) * (m + k + 1) - k * (k - 1)
        out.append(((lam + 2 * k * (k - 1) - 2 * (m + k) ** 2) * out[m] - c * out[m - 1]) / d)
    return out[: n_max + 1]


def correction_values(lam, mu, n_max: int) -> dict:
    """{(n, i, j): p_{n,i,j}(lam, mu)} for all n <= n_max, i+j <= n."""
    lam, mu = _promote(lam), _promote(mu)
    vals = {(0, 0, 0): 1 * lam**0}
    if n_max >= 1:
        vals[(1, 0, 0)] = lam - mu / 2
        vals[(1, 1, 0)] = Fraction(1, 2) * lam**0
        vals[(1, 0, 1)] = Fraction(1, 2) * lam**0
    for n in range(2, n_max + 1):
        m = n - 1
        lead = 2 * lam - mu + 2 * m * m
        back = lam + m * (m - 1)

        def cell(nn, ii, jj):
            if ii < 0 or jj < 0 or ii + jj > nn:
                return 0
            return vals[(nn, ii, jj)]

        for i in range(0, n + 1):
            for j in range(0, n + 1 - i):
                vals[(n, i, j)] = (
                    lead * cell(m, i, j)
                    - back * back * cell(m - 1, i, j)
                    + cell(m, i - 1, j)
                    + cell(m, i, j - 1)
                    - back * (cell(m - 1, i - 1, j) + cell(m - 1, i, j - 1))
                    - cell(m - 1, i - 1, j - 1)
                )
    return vals


# ---------------------------------------------------------------------------
# sign-law certification


@dataclass(frozen=True)
class SignGrid:
    """A declared finite grid for certifying a sign law.

    For the p family `primary_values` are Laplace eigenvalues (rationals);
    for the q family they are integer half-weights k >= 1.
    """

    family: str
    n_values: tuple[int, ...]
    primary_values: tuple
    mu_values: tuple

    def __post_init__(self):
        if self.family not in ("p", "q"):
            raise DomainError(f"family must be 'p' or 'q', got {self.family!r}")
        if not (self.n_values and self.primary_values and self.mu_values):
            raise DomainError("sign-law grid must be nonempty in every axis")
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        object.__setattr__(self, "mu_values", tuple(Fraction(m) for m in self.mu_values))
        if self.family == "q":
            prim = tuple(int(k) for k in self.primary_values)
            if any(k < 1 for k in prim):
                raise DomainError("q-family grid needs k >= 1")
        else:
            prim = tuple(Fraction(x) for x in self.primary_values)
            if any(x < 0 for x in prim):
                raise DomainError("p-family grid needs lambda >= 0")
        object.__setattr__(self, "primary_values", prim)
        if any(n < 0 for n in self.n_values):
            raise DomainError("grid needs n >= 0")
        if any(m < 0 for m in self.mu_values):
            raise DomainError("grid needs mu >= 0")


def default_sign_grid(family: str) -> SignGrid:
    """The declared certification grids: n <= 40, mu up to 1e5,
    lambda <= 100 (p family) or k <= 10 (q family)."""
    mus = (1, 2, 5, 10, 50, 100, 500, 1000, 5000, 10**4, 5 * 10**4, 10**5)
    if family == "p":
        return SignGrid("p", tuple(range(0, 41)), (0, 1, 2, 5, 10, 25, 50, 100), mus)
    if family == "q":
        return SignGrid("q", tuple(range(0, 41)), tuple(range(1, 11)), mus)
    raise DomainError(f"unknown family {family!r}")


@dataclass(frozen=True)
class SignThreshold:
    """A grid-certified multiplier A for a sign law.

    At every grid point with mu >= A*(lambda + n^2) (p family) or
    mu >= A*(k^2 + n^2) (q family) the inequality

        (-1)^n p_n(lambda, mu) >= (1/2) (0.9 mu)^n      resp.
        (-1)^n q_{k,n}(mu)     >=       (0.9 mu)^n

    holds; nothing is claimed off the grid.
    """

    A: Fraction
    family: str
    grid: SignGrid
    points_total: int
    points_certified: int
    max_failing_ratio: Optional[Fraction]

    def __post_init__(self):
        if self.A <= 0:
            raise DomainError("certified multiplier must be positive")


def _sign_law_margin(family: str, n: int, primary, mu: Fraction):
    """inequality LHS - RHS at one grid point, exact."""
    gauge = Fraction(9, 10) * mu
    if family == "p":
        value = p_values(primary, mu, n)[n]
        return (-1) ** n * value - Fraction(1, 2) * gauge**n
    value = q_values(primary, mu, n)[n]
    return (-1) ** n * value - gauge**n


def certify_sign_threshold(family: str, grid: Optional[SignGrid] = None) -> SignThreshold:
    """Smallest grid-certified A for the family's sign law.

    Candidate values for A are the ratios mu/(lambda+n^2) (resp.
    mu/(k^2+n^2)) realized on the grid; the certified A is the smallest
    candidate exceeding every failing ratio.  Points with lambda+n^2 = 0
    are tested unconditionally and must pass.
    """
    if grid is None:
        grid = default_sign_grid(family)
    if grid.family != family:
        raise DomainError(f"grid is for family {grid.family!r}, not {family!r}")

    ratios = set()
    max_fail = None
    total = 0
    for n in grid.n_values:
        for prim in grid.primary_values:
            base = (prim if family == "p" else prim * prim) + n * n
            values = {mu: _sign_law_margin(family, n, prim, mu) for mu in grid.mu_values}
            for mu, margin in values.items():
                total += 1
                if base == 0:
                    if margin < 0:
                        raise DomainError(
                            f"sign law fails at unconditional point n={n}, mu={mu}: no A certifies"
                        )
                    continue
                ratio = Fraction(mu, 1) / base
                ratios.add(ratio)
                if margin < 0 and (max_fail is None or ratio > max_fail):
                    max_fail = ratio

    if max_fail is None:
        A = min((x for x in ratios if x > 0), default=Fraction(1))
    else:
        above = [x for x in ratios if x > max_fail]
        # No realized ratio beats every failure: certify an A just above the
        # worst failing ratio (the certified region of this grid is empty).
        A = min(above) if above else max_fail * Fraction(1025, 1024)

    certified = 0
    for n in grid.n_values:
        for prim in grid.primary_values:
            base = (prim if family == "p" else prim * prim) + n * n
            for mu in grid.mu_values:
                if base == 0 or mu >= A * base:
                    certified += 1
    return SignThreshold(A, family, grid, total, certified, max_fail)


# ---------------------------------------------------------------------------
# correction-family domination


@dataclass(frozen=True)
class DominationGrid:
    """Grid for bounding |p_{n,i,j}| against mu^{-(i+j)} binom(n,i+j) |p_n|."""

    n_values: tuple[int, ...]
    lam_values: tuple
    mu_factors: tuple
    A: Fraction

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        object.__setattr__(self, "lam_values", tuple(Fraction(x) for x in self.lam_values))
        object.__setattr__(self, "mu_factors", tuple(Fraction(x) for x in self.mu_factors))
        object.__setattr__(self, "A", Fraction(self.A))
        if not (self.n_values and self.lam_values and self.mu_factors):
            raise DomainError("domination grid must be nonempty in every axis")
        if self.A <= 0 or any(f < 1 for f in self.mu_factors):
            raise DomainError("domination grid needs A > 0 and mu factors >= 1")


def default_domination_grid(A: Fraction) -> DominationGrid:
    return DominationGrid(tuple(range(0, 26)), (0, 1, 10), (1, 2, 10), A)


@dataclass(frozen=True)
class DominationReport:
    grid: DominationGrid
    max_ratio: Fraction
    worst: Optional[tuple]  # (n, i, j, lam, mu)
    points: int
    cells: int


def verify_correction_domination(grid: DominationGrid) -> DominationReport:
    """Grid maximum of |p_{n,i,j}| / [mu^{-(i+j)} binom(n,i+j) |p_n|].

    mu is taken as A*(lambda+n^2)*factor at each point, which keeps every
    point inside the certified sign region, so p_n never vanishes there
    (except at the trivial point n=0 where the ratio is 1 by definition).
    """
    max_ratio = Fraction(0)
    worst = None
    points = 0
    cells = 0
    for n in grid.n_values:
        for lam in grid.lam_values:
            for fac in grid.mu_factors:
                mu = grid.A * (lam + n * n) * fac
                points += 1
                vals = correction_values(lam, mu, n)
                pn = vals[(n, 0, 0)]
                for i in range(0, n + 1):
                    for j in range(0, n + 1 - i):
                        cells += 1
                        num = abs(vals[(n, i, j)])
                        if num == 0:
                            continue
                        if i == j == 0:
                            ratio = Fraction(1)
                        else:
                            if pn == 0:
                                raise DomainError(
                                    f"p_{n} vanishes at lam={lam}, mu={mu}: grid leaves certified region"
                                )
                            ratio = num * mu ** (i + j) / (comb(n, i + j) * abs(pn))
                        if ratio > max_ratio:
                            max_ratio = ratio
                            worst = (n, i, j, lam, mu)
    return DominationReport(grid, max_ratio, worst, points, cells)


# ---------------------------------------------------------------------------
# transfer-matrix diagonalization error


@dataclass(frozen=True)
class MatrixProductReport:
    n: int
    lam: float
    mu: float
    error: float
    comparison: float
    ratio: Optional[float]
    d_norm_min: float
    d_norm_max: float
    delta_max: float
    eps_max: float


def verify_matrix_product(n: int, lam, mu, admissibility: float = 1e-2) -> MatrixProductReport:
    """Error of the telescoped diagonalization of the product A_n ... A_1.

    A_m = [[1 - delta_m, -eps_m^2], [1, 0]] with delta_m = (2*lam + 2m^2)/mu
    and eps_m = (lam + m(m-1))/mu.  Each admissible A_m is diagonalized as
    Q_m D_m Q_m^{-1} with eigenvector second components normalized to 1; the
    report compares ||A_n...A_1 - Q_n D_n...D_1 Q_1^{-1}|| against
    ||D_1||...||D_n|| * ||A_n - A_1||.
    """
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    lam = float(lam)
    mu = float(mu)
    if mu <= 0:
        raise DomainError("mu must be positive")

    deltas = np.array([(2 * lam + 2 * m * m) / mu for m in range(1, n + 1)])
    epss = np.array([(lam + m * (m - 1)) / mu for m in range(1, n + 1)])
    if deltas.max() > admissibility or np.abs(epss).max() > admissibility:
        raise DomainError(
            f"mu={mu} too small: max delta={deltas.max():.3g}, max |eps|={np.abs(epss).max():.3g} "
            f"exceed admissibility {admissibility:g}"
        )

    mats = []
    qs = []
    xps = []
    xms = []
    for d, e in zip(deltas, epss):
        tr = 1.0 - d
        disc = tr * tr - 4.0 * e * e
        if disc <= 0:
            raise DomainError(f"eigenvalues not separated (disc={disc:.3g}); mu too small")
        root = np.sqrt(disc)
        xp = (tr + root) / 2.0
        xm = (tr - root) / 2.0
        if abs(xp) <= abs(xm):
            raise DomainError("eigenvalue moduli tie; outside the admissible region")
        mats.append(np.array([[1.0 - d, -e * e], [1.0, 0.0]]))
        qs.append(np.array([[xp, xm], [1.0, 1.0]]))
        xps.append(xp)
        xms.append(xm)

    prod = mats[0]
    for m in mats[1:]:
        prod = m @ prod

    if n == 1:
        # Q_1 D_1 Q_1^{-1} is algebraically the exact diagonalization of A_1.
        error = 0.0
    else:
        diag = np.diag([float(np.prod(xps)), float(np.prod(xms))])
        approx = qs[-1] @ diag @ np.linalg.inv(qs[0])
        error = float(np.linalg.norm(prod - approx, 2))

    d_norms = [max(abs(a), abs(b)) for a, b in zip(xps, xms)]
    comparison = float(np.prod(d_norms)) * float(np.linalg.norm(mats[-1] - mats[0], 2))
    return MatrixProductReport(
        n=n,
        lam=lam,
        mu=mu,
        error=error,
        comparison=comparison,
        ratio=(error / comparison) if comparison > 0 else None,
        d_norm_min=float(min(d_norms)),
        d_norm_max=float(max(d_norms)),
        delta_max=float(deltas.max()),
        eps_max=float(np.abs(epss).max()),
    )
