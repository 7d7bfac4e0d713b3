"""The lattice index set behind a candidate spectrum, and ladder coefficients.

Basis vectors are indexed by pairs i = (i1, i2) of integers.  i1 selects the
spectral channel: i1 = r >= 0 picks the r-th Laplace eigenvalue, i1 = -rho < 0
picks the rho-th lowest-weight (holomorphic) family of weight k_rho.  i2 is
the weight coordinate that the raising/lowering operators move by one.

Membership in the index set I:

    i1 > 0                                  always a member,
    i = (0, 0)                              the constant function,
    i1 = 0, i2 != 0                         not a member,
    i1 < 0                                  member iff |i2| >= k_{-i1}.

For negative channels the "eigenvalue" read by lambda_of is -k(k-1) with
k = k_{-i1}; on members both transition radicands lambda + i2(i2 +- 1) are
nonnegative, so the ladder coefficients below are real.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple, Union

from .errors import DomainError, HorizonError
from .orbifold import HolomorphicSpectrum

Number = Union[int, float, Fraction]


class Index(NamedTuple):
    """A lattice point (channel, weight)."""

    i1: int
    i2: int

    def __str__(self) -> str:
        return f"({self.i1},{self.i2})"


def bar(i: Index) -> Index:
    """Conjugation image: flips the weight, (i1, i2) -> (i1, -i2)."""
    return Index(i[0], -i[1])


def raise_(i: Index) -> Index:
    """Weight raised by one.  (Trailing underscore: `raise` is reserved.)"""
    return Index(i[0], i[1] + 1)


def lower(i: Index) -> Index:
    """Weight lowered by one."""
    return Index(i[0], i[1] - 1)


def shift(i: Index, n: int) -> Index:
    """Weight shifted by n: (i1, i2 + n)."""
    return Index(i[0], i[1] + n)


@dataclass(frozen=True)
class LaplaceSpectrum:
    """Laplace eigenvalues 0 = lambda_0 < lambda_1 <= ..., complete up to `horizon`.

    Entries are exact rationals (or floats if the caller insists); every
    eigenvalue <= horizon is present with its multiplicity.
    """

    entries: tuple[Number, ...]
    horizon: Number

    def __post_init__(self):
        entries = tuple(self.entries)
        if not entries or entries[0] != 0:
            raise DomainError("laplace spectrum must start with eigenvalue 0")
        if len(entries) > 1 and entries[1] <= 0:
            raise DomainError("lambda_1 must be positive")
        for a, b in zip(entries[1:], entries[2:]):
            if b < a:
                raise DomainError("laplace eigenvalues must be nondecreasing")
        object.__setattr__(self, "entries", entries)

    @property
    def count(self) -> int:
        return len(self.entries)

    def value(self, r: int) -> Number:
        if not isinstance(r, int) or r < 0:
            raise DomainError(f"eigenvalue index must be an integer >= 0, got {r!r}")
        if r >= len(self.entries):
            raise HorizonError(
                f"eigenvalue {r} requested but only {len(self.entries)} known "
                f"(horizon {self.horizon})"
            )
        return self.entries[r]


@dataclass(frozen=True)
class SpectralContext:
    """The two spectral halves an index set is defined against."""

    laplace: LaplaceSpectrum
    holomorphic: HolomorphicSpectrum


def member(ctx: SpectralContext, i: Index) -> bool:
    """Is i in the index set I?"""
    i1, i2 = i
    if i1 > 0:
        return True
    if i1 == 0:
        return i2 == 0
    return abs(i2) >= ctx.holomorphic.weight(-i1)


def lambda_of(ctx: SpectralContext, r: int) -> Number:
    """Channel eigenvalue: laplace entry for r >= 0, -k(k-1) for r < 0."""
    if r >= 0:
        return ctx.laplace.value(r)
    k = ctx.holomorphic.weight(-r)
    return -k * (k - 1)


def raising_radicand(ctx: SpectralContext, i: Index) -> Number:
    """lambda_{i1} + i2(i2+1); nonnegative on members."""
    return lambda_of(ctx, i[0]) + i[1] * (i[1] + 1)


def lowering_radicand(ctx: SpectralContext, i: Index) -> Number:
    """lambda_{i1} + i2(i2-1); nonnegative on members."""
    return lambda_of(ctx, i[0]) + i[1] * (i[1] - 1)


def raising_coefficient(ctx: SpectralContext, i: Index) -> float:
    """Coefficient sqrt(lambda_{i1} + i2(i2+1)) of the raised basis vector.

    Only defined on members of I (the radicand is guaranteed nonnegative
    there).
    """
    if not member(ctx, i):
        raise DomainError(f"raising coefficient undefined outside the index set: {i}")
    rad = raising_radicand(ctx, i)
    if rad < 0:
        raise DomainError(f"negative raising radicand {rad} at {i}: inconsistent spectra")
    return math.sqrt(rad)


def lowering_coefficient(ctx: SpectralContext, i: Index) -> float:
    """Coefficient sqrt(lambda_{i1} + i2(i2-1)) of the lowered basis vector."""
    if not member(ctx, i):
        raise DomainError(f"lowering coefficient undefined outside the index set: {i}")
    rad = lowering_radicand(ctx, i)
    if rad < 0:
        raise DomainError(f"negative lowering radicand {rad} at {i}: inconsistent spectra")
    return math.sqrt(rad)


@dataclass(frozen=True)
class Window:
    """The finite box |i1| <= r1, |i2| <= r2 used to truncate all checks."""

    r1: int
    r2: int

    def __post_init__(self):
        if not (isinstance(self.r1, int) and isinstance(self.r2, int)) or self.r1 < 1 or self.r2 < 1:
            raise DomainError(f"window bounds must be positive integers, got ({self.r1!r}, {self.r2!r})")

    def contains(self, i: Index) -> bool:
        return abs(i[0]) <= self.r1 and abs(i[1]) <= self.r2

    def __iter__(self) -> Iterator[Index]:
        for i1 in range(-self.r1, self.r1 + 1):
            for i2 in range(-self.r2, self.r2 + 1):
                yield Index(i1, i2)

    def members(self, ctx: SpectralContext) -> Iterator[Index]:
        """Lattice points of the window that lie in the index set, in order."""
        for i in self:
            if member(ctx, i):
                yield i


def context_covers(ctx: SpectralContext, window: Window) -> bool:
    """Do the spectra hold enough entries to resolve every window index?"""
    return ctx.laplace.count >= window.r1 + 1 and ctx.holomorphic.count >= window.r1
