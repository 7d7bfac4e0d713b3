"""Topological types of closed 2-orbifolds and their modular-form dimensions.

A topological type is a genus together with a multiset of cone orders.
Hyperbolicity is decided by the sign of the orbifold Euler characteristic,
and for hyperbolic types the dimension formula below gives the number of
holomorphic modular forms of each even weight 2k.  Those dimensions, read
as multiplicities, produce the holomorphic half of a candidate spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError


@dataclass(frozen=True)
class TopologicalType:
    """Genus g plus cone point orders (each >= 2), kept sorted."""

    genus: int
    cone_orders: tuple[int, ...] = ()

    def __post_init__(self):
        if not isinstance(self.genus, int) or self.genus < 0:
            raise DomainError(f"genus must be a nonnegative integer, got {self.genus!r}")
        orders = tuple(sorted(self.cone_orders))
        for m in orders:
            if not isinstance(m, int) or m < 2:
                raise DomainError(f"cone orders must be integers >= 2, got {m!r}")
        object.__setattr__(self, "cone_orders", orders)

    def __str__(self) -> str:
        inside = ";".join([str(self.genus)] + [",".join(str(m) for m in self.cone_orders)])
        return f"[{inside}]" if self.cone_orders else f"[{self.genus}]"


def orbifold_euler_characteristic(top: TopologicalType) -> Fraction:
    """chi = 2 - 2g - sum_i (1 - 1/m_i), exact."""
    chi = Fraction(2 - 2 * top.genus)
    for m in top.cone_orders:
        chi -= 1 - Fraction(1, m)
    return chi


def is_hyperbolic(top: TopologicalType) -> bool:
    """True iff the orbifold Euler characteristic is negative."""
    return orbifold_euler_characteristic(top) < 0


def dim_modular_forms(top: TopologicalType, k: int) -> int:
    """Dimension of the space of weight-2k holomorphic modular forms.

    For k = 1 the dimension is the genus; for k >= 2 it is
    (2k-1)(g-1) + sum_i floor(k (m_i - 1) / m_i).
    Only defined for hyperbolic types and integer k >= 1.
    """
    if not isinstance(k, int) or k < 1:
        raise DomainError(f"weight index k must be an integer >= 1, got {k!r}")
    if not is_hyperbolic(top):
        raise DomainError(f"{top} is not hyperbolic (chi = {orbifold_euler_characteristic(top)})")
    if k == 1:
        return top.genus
    g = top.genus
    d = (2 * k - 1) * (g - 1) + sum((k * (m - 1)) // m for m in top.cone_orders)
    if d < 0:
        # The formula counts a dimension; a negative value would mean the
        # hyperbolicity guard above is wrong.
        raise AssertionError(f"negative dimension {d} for {top} at k={k}")
    return d


@dataclass(frozen=True)
class HolomorphicSpectrum:
    """Nondecreasing positive weights k_1 <= k_2 <= ..., complete up to `horizon`.

    `entries[rho-1]` is the weight of the rho-th lowest-weight family
    (1-based).  Every weight <= horizon occurs with its full multiplicity.
    """

    entries: tuple[int, ...]
    horizon: int

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(int(k) for k in self.entries))
        if self.horizon < 1:
            raise DomainError(f"horizon must be >= 1, got {self.horizon}")
        prev = 1
        for k in self.entries:
            if k < prev:
                raise DomainError(f"holomorphic weights must be nondecreasing and >= 1: {self.entries}")
            prev = k

    @property
    def count(self) -> int:
        return len(self.entries)

    def weight(self, rho: int) -> int:
        """Weight k_rho of the rho-th family (rho >= 1)."""
        from .errors import HorizonError

        if not isinstance(rho, int) or rho < 1:
            raise DomainError(f"family index must be an integer >= 1, got {rho!r}")
        if rho > len(self.entries):
            raise HorizonError(
                f"family {rho} requested but only {len(self.entries)} families known "
                f"(horizon {self.horizon})"
            )
        return self.entries[rho - 1]

    def multiplicity(self, k: int) -> int:
        """Number of families of weight exactly k (complete for k <= horizon)."""
        from .errors import HorizonError

        if k > self.horizon:
            raise HorizonError(f"weight {k} beyond horizon {self.horizon}")
        return sum(1 for e in self.entries if e == k)


def holomorphic_spectrum(top: TopologicalType, horizon: int) -> HolomorphicSpectrum:
    """The weights (with multiplicity dim M_{2k}) of all k <= horizon."""
    if not isinstance(horizon, int) or horizon < 1:
        raise DomainError(f"horizon must be an integer >= 1, got {horizon!r}")
    entries = []
    for k in range(1, horizon + 1):
        entries.extend([k] * dim_modular_forms(top, k))
    return HolomorphicSpectrum(tuple(entries), horizon)
