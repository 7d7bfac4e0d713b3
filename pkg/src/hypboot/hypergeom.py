"""Spectral hypergeometric series, crossing checks, and growth diagnostics.

Everything here works with the Gauss series whose parameters are the two
roots s, 1-s of s(1-s) = lam, at third parameter 1.  Since the product
(s+n)(1-s+n) = lam + n(n+1) is polynomial in lam, the series is summed
without ever leaving the real field for real lam:

    F(lam; z) = sum_n c_n z^n,   c_0 = 1,
    c_{n+1}/c_n = (lam + n(n+1)) / (n+1)^2.

mpmath supplies the arbitrary-precision arithmetic; tail estimates come
from the eventually-geometric decay of the term ratios.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import mpmath as mp

from .errors import DomainError
from .indexset import Index, bar, lambda_of
from .recurrences import B_values

Real = Union[int, float, Fraction]


def _to_mp(x):
    """Exact-as-possible conversion into the current mpmath context."""
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / mp.mpf(x.denominator)
    if isinstance(x, complex):
        return mp.mpc(x.real, x.imag)
    return mp.mpmathify(x)


@dataclass(frozen=True)
class SpectralParameter:
    """A Laplace eigenvalue lam >= 0 with its root pair s(1-s) = lam."""

    lam: float

    def __post_init__(self):
        if self.lam < 0:
            raise DomainError(f"need lam >= 0, got {self.lam}")

    @property
    def s(self) -> complex:
        disc = 0.25 - self.lam
        if disc >= 0:
            return complex(0.5 + disc**0.5, 0.0)
        return complex(0.5, (-disc) ** 0.5)

    def check(self) -> float:
        s = self.s
        return abs(s * (1 - s) - self.lam)


@dataclass(frozen=True)
class SeriesEvaluation:
    """A partial sum with bookkeeping: value, terms used, certified tail bound."""

    value: object
    terms_used: int
    tail_estimate: object


def pochhammer(q, n: int):
    """Rising factorial q(q+1)...(q+n-1); exact for exact inputs."""
    if not isinstance(n, int) or n < 0:
        raise DomainError(f"need integer n >= 0, got {n!r}")
    if isinstance(q, int):
        q = Fraction(q)
    out = q**0
    for m in range(n):
        out = out * (q + m)
    return out


_MAX_TERMS = 200_000


def f21(lam: Real, z, precision: int = 50) -> SeriesEvaluation:
    """Sum the spectral Gauss series at z, |z| < 1, to ~`precision` digits.

    The returned tail_estimate is a rigorous bound on the truncation error:
    once n >= lam the term ratios are below |z| in modulus, so the dropped
    tail is dominated by the geometric series |t_n| |z| / (1 - |z|).
    """
    if precision < 1:
        raise DomainError(f"need precision >= 1, got {precision}")
    with mp.workdps(precision + 10):
        zm = _to_mp(z)
        q = abs(zm)
        if q >= 1:
            raise DomainError(f"series domain is |z| < 1, got |z| = {float(q)}")
        lamf = _to_mp(lam)
        if lamf < 0:
            raise DomainError(f"need lam >= 0, got {lam!r}")
        target = mp.mpf(10) ** (-(precision + 5))
        term = mp.mpf(1) if mp.im(zm) == 0 else mp.mpc(1)
        total = term
        n = 0
        while True:
            if n >= _MAX_TERMS:
                raise DomainError(
                    f"series did not converge within {_MAX_TERMS} terms (lam={lam!r}, z={z!r})"
                )
            if term == 0:
                tail = mp.mpf(0)
                break
            if n + 1 >= lamf:
                # from here on every ratio has modulus <= q < 1
                tail = abs(term) * q / (1 - q)
                if tail < target * max(mp.mpf(1), abs(total)):
                    break
            term = term * (lamf + n * (n + 1)) / (n + 1) ** 2 * zm
            total += term
            n += 1
        return SeriesEvaluation(value=total, terms_used=n + 1, tail_estimate=tail)


def weyl_ladder_ratio(n: int, k: int, lam: Real):
    """Squared magnitude ratio |C_n|^2 / |C_0|^2 along a holomorphic ladder.

    Equals prod_{m<n} (lam + m(m+1)) / (n! (2k)_n); exact for rational lam.
    """
    if not isinstance(n, int) or n < 0:
        raise DomainError(f"need integer n >= 0, got {n!r}")
    if not isinstance(k, int) or k < 1:
        raise DomainError(f"need integer k >= 1, got {k!r}")
    if isinstance(lam, (int, Fraction)):
        lam = Fraction(lam)
    num = lam**0
    for m in range(n):
        num = num * (lam + m * (m + 1))
    den = 1
    for m in range(1, n + 1):
        den *= m * (2 * k + m - 1)
    return num / den


# ---------------------------------------------------------------------------
# block-sum identity


def verify_tblock(k: int, lam: Real, z, precision: int = 50):
    """Residual of the ladder block resummation identity at one (k, lam, z).

    LHS: sum_n (-1)^n (2k)_n / n! * B_{k,n}(lam) * z^n
    RHS: (1-z)^{-2k} * F(lam; z/(z-1))

    Valid for |z| < 1/2 (both sides then converge with room to spare).
    The LHS is summed until the terms stay negligible; B values come from
    the forward three-term recurrence evaluated at working precision.
    """
    if not isinstance(k, int) or k < 1:
        raise DomainError(f"need integer k >= 1, got {k!r}")
    with mp.workdps(precision + 15):
        zm = _to_mp(z)
        if abs(zm) >= mp.mpf(1) / 2:
            raise DomainError(f"identity checked on |z| < 1/2, got |z| = {float(abs(zm))}")
        lamf = _to_mp(lam)

        w = zm / (zm - 1)
        rhs = (1 - zm) ** (-2 * k) * f21(lamf, w, precision + 10).value

        eps = mp.mpf(10) ** (-(precision + 8))
        chunk = 64
        total = mp.mpf(0) if mp.im(zm) == 0 else mp.mpc(0)
        n = 0
        coeff = mp.mpf(1)  # (2k)_n / n!
        zpow = mp.mpf(1) if mp.im(zm) == 0 else mp.mpc(1)
        small_run = 0
        bvals = B_values(k, lamf, chunk)
        while True:
            if n >= len(bvals):
                if n >= 4000:
                    raise DomainError(
                        f"block sum did not settle within 4000 terms (k={k}, lam={lam!r}, z={z!r})"
                    )
                bvals = B_values(k, lamf, len(bvals) * 2)
            term = (-1) ** n * coeff * bvals[n] * zpow
            total += term
            small = abs(term) <= eps * max(mp.mpf(1), abs(total))
            small_run = small_run + 1 if small else 0
            if n >= 8 and small_run >= 6:
                break
            coeff = coeff * (2 * k + n) / (n + 1)
            zpow = zpow * zm
            n += 1
        return abs(total - rhs)


# ---------------------------------------------------------------------------
# crossing diagnostics on candidate spectra


@dataclass(frozen=True)
class CrossingEntry:
    z: complex
    lhs: complex
    rhs: complex
    residual: float
    lhs_abs: float
    rhs_abs: float


@dataclass(frozen=True)
class CrossingReport:
    rho: int
    k: int
    weights: tuple
    entries: tuple

    @property
    def max_residual(self) -> float:
        return max((e.residual for e in self.entries), default=0.0)


def check_kmp_crossing(
    spec, z_values: Sequence, precision: int = 50, rho: Optional[int] = None
) -> CrossingReport:
    """Per-z crossing residuals for the weight-k ladder seeded at cone index rho.

    Extracts the seed weights w_r = |C(bar(i), i, (r,0))|^2 from the stored
    spectrum (i the lowest ladder index for rho) and compares

        sum_r w_r F(lam_r; z)   vs   (1-z)^{-2k} sum_r w_r F(lam_r; z/(z-1))

    on the given grid, which must stay inside |z| < 1/2.  Entries record both
    sides, the residual, and the sums of term magnitudes for scale context.
    """
    ctx = spec.ctx
    if rho is None:
        found = None
        for cand in range(1, ctx.holomorphic.count + 1):
            k_c = ctx.holomorphic.weight(cand)
            i0 = Index(-cand, k_c)
            if spec.window.contains(i0) and any(
                spec.get(bar(i0), i0, Index(r, 0)) != 0 for r in range(spec.window.r1 + 1)
            ):
                found = cand
                break
        if found is None:
            raise DomainError("no seeded ladder found in the stored spectrum")
        rho = found
    if not (1 <= rho <= ctx.holomorphic.count):
        raise DomainError(f"cone index rho={rho} outside the holomorphic horizon")
    k = ctx.holomorphic.weight(rho)
    i0 = Index(-rho, k)
    if not spec.window.contains(i0):
        raise DomainError(f"ladder base {i0} lies outside the window")

    weights = []
    lams = []
    for r in range(spec.window.r1 + 1):
        c = spec.get(bar(i0), i0, Index(r, 0))
        weights.append(abs(c) ** 2)
        lams.append(lambda_of(ctx, r))

    entries = []
    with mp.workdps(precision + 10):
        for z in z_values:
            zm = _to_mp(z)
            if abs(zm) >= mp.mpf(1) / 2:
                raise DomainError(f"crossing grid must stay in |z| < 1/2, got {z!r}")
            w = zm / (zm - 1)
            pref = (1 - zm) ** (-2 * k)
            lhs = mp.mpc(0)
            rhs = mp.mpc(0)
            lhs_abs = mp.mpf(0)
            rhs_abs = mp.mpf(0)
            for wt, lam in zip(weights, lams):
                if wt == 0:
                    continue
                fl = f21(lam, zm, precision).value
                fr = pref * f21(lam, w, precision).value
                lhs += wt * fl
                rhs += wt * fr
                lhs_abs += wt * abs(fl)
                rhs_abs += wt * abs(fr)
            entries.append(
                CrossingEntry(
                    z=complex(zm),
                    lhs=complex(lhs),
                    rhs=complex(rhs),
                    residual=float(abs(lhs - rhs)),
                    lhs_abs=float(lhs_abs),
                    rhs_abs=float(rhs_abs),
                )
            )
    return CrossingReport(rho=rho, k=k, weights=tuple(weights), entries=tuple(entries))


# ---------------------------------------------------------------------------
# exponential growth of the series near z = 1


@dataclass(frozen=True)
class AsymptoticEntry:
    lam: float
    exponent: float
    bound: float
    passed: bool


def check_asymptotic(
    lams: Sequence[Real], z: Real, delta: float, precision: int = 50
) -> list[AsymptoticEntry]:
    """Check log F(lam; z) / sqrt(lam) >= pi - delta on a list of eigenvalues.

    For z in (0,1) all series terms are positive, so the logarithm is real;
    the normalized exponent should approach pi (times 1 + o(1)) from below
    as lam grows with z -> 1.
    """
    entries = []
    with mp.workdps(precision + 10):
        zm = _to_mp(z)
        if not (0 < zm < 1):
            raise DomainError(f"need real z in (0,1), got {z!r}")
        bound = float(mp.pi - _to_mp(delta))
        for lam in lams:
            lamf = _to_mp(lam)
            if lamf <= 0:
                raise DomainError(f"need lam > 0, got {lam!r}")
            val = f21(lamf, zm, precision).value
            expo = float(mp.log(val) / mp.sqrt(lamf))
            entries.append(
                AsymptoticEntry(lam=float(lamf), exponent=expo, bound=bound, passed=expo >= bound)
            )
    return entries
