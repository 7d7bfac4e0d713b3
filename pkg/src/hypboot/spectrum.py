"""Candidate spectra: windowed triple-coefficient stores and fixture builders.

A candidate spectrum holds finitely many coefficients C(i, j, l) over a
window, one value per unordered pair {i, j} (the exchange symmetry is a
storage convention, so it can never be violated by construction — except
by data read from disk, where both orientations may appear and any
mismatch is recorded for the symmetry checker).

Lookups of anything not stored return exactly 0.  Builders produce new
spectra; nothing mutates in place.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

from .errors import DomainError, HorizonError, ParseError
from .indexset import (
    Index,
    LaplaceSpectrum,
    SpectralContext,
    Window,
    bar,
    context_covers,
    lambda_of,
    member,
    shift,
)
from .orbifold import HolomorphicSpectrum

Value = Union[int, float, complex, Fraction]
TripleKey = tuple[Index, Index, Index]


def canonical_key(i: Index, j: Index, l: Index) -> TripleKey:
    """Orientation-free storage key: the index pair sorted lexicographically."""
    i, j, l = Index(*i), Index(*j), Index(*l)
    if j < i:
        i, j = j, i
    return (i, j, l)


@dataclass(frozen=True)
class CandidateSpectrum:
    """Finitely many stored coefficients against a spectral context and window."""

    ctx: SpectralContext
    window: Window
    values: dict = field(default_factory=dict)
    squared: dict = field(default_factory=dict)
    exact: dict = field(default_factory=dict)
    ingest_asymmetry: tuple = ()

    def __post_init__(self):
        if not context_covers(self.ctx, self.window):
            raise HorizonError(
                f"spectra too short for window r1={self.window.r1}: need "
                f"{self.window.r1 + 1} Laplace and {self.window.r1} holomorphic entries"
            )
        for key, v in self.values.items():
            i, j, l = key
            if key != canonical_key(i, j, l):
                raise DomainError(f"non-canonical storage key {key}")
            for x in (i, j, l):
                if not member(self.ctx, x):
                    raise DomainError(f"stored index {x} outside the index set")
                if not self.window.contains(x):
                    raise DomainError(f"stored index {x} outside the window")
            if i[1] + j[1] != l[1]:
                raise DomainError(f"stored triple {key} violates weight additivity")
            if v == 0:
                raise DomainError(f"zero values are never stored explicitly: {key}")

    @property
    def count(self) -> int:
        return len(self.values)

    def get(self, i, j, l) -> Value:
        """C(i, j, l); exactly 0 for anything not stored."""
        i, j, l = Index(*i), Index(*j), Index(*l)
        for x in (i, j, l):
            if not self.window.contains(x):
                return 0
            if not member(self.ctx, x):
                return 0
        if i[1] + j[1] != l[1]:
            return 0
        return self.values.get(canonical_key(i, j, l), 0)

    def get_squared(self, i, j, l) -> Optional[Fraction]:
        """Exact |C|^2 annotation, when one was tracked by a builder."""
        return self.squared.get(canonical_key(i, j, l))

    def get_exact(self, i, j, l) -> Optional[Fraction]:
        """Exact rational value annotation (diagonal/unit fills, rational seeds)."""
        return self.exact.get(canonical_key(i, j, l))

    def stored_triples(self) -> list:
        """(i, j, l, value) for every stored triple, in key order."""
        return [(i, j, l, self.values[(i, j, l)]) for i, j, l in sorted(self.values)]

    def stored_indices(self) -> list:
        """Sorted distinct indices appearing in stored triples."""
        seen = set()
        for i, j, l in self.values:
            seen.add(i)
            seen.add(j)
        return sorted(seen)

    def with_entries(self, new_values: Mapping, new_squared=None, new_exact=None):
        """Copy with extra entries merged in (collisions must agree exactly)."""
        values = dict(self.values)
        squared = dict(self.squared)
        exact = dict(self.exact)
        for key, v in new_values.items():
            if key in values and values[key] != v:
                raise DomainError(f"conflicting value for {key}: {values[key]!r} vs {v!r}")
            values[key] = v
        for key, v in (new_squared or {}).items():
            squared[key] = v
        for key, v in (new_exact or {}).items():
            exact[key] = v
        return CandidateSpectrum(self.ctx, self.window, values, squared, exact, self.ingest_asymmetry)


def from_triples(
    ctx: SpectralContext,
    window: Window,
    entries: Iterable,
    squared: Optional[Mapping] = None,
    exact: Optional[Mapping] = None,
) -> CandidateSpectrum:
    """Build a spectrum from (i, j, l, value) tuples; zero values are dropped."""
    values = {}
    for i, j, l, v in entries:
        if v == 0:
            continue
        key = canonical_key(i, j, l)
        if key in values and values[key] != v:
            raise DomainError(f"conflicting duplicate entry for {key}")
        values[key] = v
    sq = {canonical_key(*k): v for k, v in (squared or {}).items()}
    ex = {canonical_key(*k): v for k, v in (exact or {}).items()}
    return CandidateSpectrum(ctx, window, values, sq, ex)


# ---------------------------------------------------------------------------
# fixture builders


def fill_unit(spec: CandidateSpectrum) -> CandidateSpectrum:
    """Store C((0,0), j, j) = 1 for every window index j (identity channel)."""
    zero = Index(0, 0)
    values, exact = {}, {}
    for j in spec.window.members(spec.ctx):
        key = canonical_key(zero, j, j)
        values[key] = 1
        exact[key] = Fraction(1)
    return spec.with_entries(values, new_squared={k: Fraction(1) for k in values}, new_exact=exact)


@dataclass(frozen=True)
class LadderSeed:
    """Base coefficients C(bar(i0), i0, (r, 0)) for the weight ladder at cone rho.

    i0 = (-rho, k) is the lowest index of the holomorphic family rho; one
    base value per Laplace channel r >= 0 seeds the whole ladder.
    """

    rho: int
    k: int
    base_values: Mapping

    def __post_init__(self):
        if self.rho < 1:
            raise DomainError(f"cone index rho must be >= 1, got {self.rho}")
        if self.k < 1:
            raise DomainError(f"weight k must be >= 1, got {self.k}")
        base = {}
        for key, v in dict(self.base_values).items():
            idx = Index(*key)
            if idx[1] != 0 or idx[0] < 0:
                raise DomainError(f"seed channels must be (r, 0) with r >= 0, got {idx}")
            base[idx] = v
        object.__setattr__(self, "base_values", base)


def generate_ladder(ctx: SpectralContext, window: Window, seed: LadderSeed) -> CandidateSpectrum:
    """Spectrum holding exactly the seeded ladders; all other triples absent.

    Each channel r with base value c extends upward by the one-step raising
    relation with positive real step ratios, so phases propagate unchanged:

        C_n = C_{n-1} * sqrt((lam_r + n(n-1)) / (n (2k+n-1)))

    The identity channel r = 0 stops at n = 0 (the index (0, n) leaves the
    index set for n >= 1).  Exact squared magnitudes are tracked whenever
    both the base value and lam_r are rational.
    """
    if seed.k != ctx.holomorphic.weight(seed.rho):
        raise DomainError(
            f"seed weight {seed.k} does not match holomorphic family {seed.rho} "
            f"(weight {ctx.holomorphic.weight(seed.rho)})"
        )
    i0 = Index(-seed.rho, seed.k)
    if not window.contains(i0):
        raise HorizonError(f"ladder base {i0} outside window ({window.r1}, {window.r2})")
    values, squared, exact = {}, {}, {}
    k = seed.k
    for base_l, c0 in sorted(seed.base_values.items()):
        if not window.contains(base_l):
            raise HorizonError(f"seed channel {base_l} outside window ({window.r1}, {window.r2})")
        if c0 == 0:
            continue
        r = base_l[0]
        lam = lambda_of(ctx, r)  # raises HorizonError past the known spectrum
        key = canonical_key(bar(i0), i0, base_l)
        values[key] = c0
        rational_track = isinstance(c0, (int, Fraction)) and isinstance(lam, (int, Fraction))
        if rational_track:
            squared[key] = Fraction(c0) ** 2
            exact[key] = Fraction(c0)
        value, sq = c0, squared.get(key)
        for n in range(1, window.r2 - k + 1):
            l_n = Index(r, n)
            if not member(ctx, l_n):
                break  # the r = 0 column dies immediately
            ratio = Fraction(lam + n * (n - 1), n * (2 * k + n - 1)) if rational_track else (
                (lam + n * (n - 1)) / (n * (2 * k + n - 1))
            )
            if ratio == 0:
                break
            value = value * math.sqrt(ratio)
            key_n = canonical_key(bar(i0), shift(i0, n), l_n)
            values[key_n] = value
            if rational_track:
                sq = sq * ratio
                squared[key_n] = sq
    return CandidateSpectrum(ctx, window, values, squared, exact)


def extend_hb3_closure(spec: CandidateSpectrum) -> CandidateSpectrum:
    """Add the conjugate-mirror C(bar i, bar j, bar l) = conj(C(i, j, l)) of
    every stored triple that does not already have one."""
    values, squared, exact = {}, {}, {}
    for (i, j, l), v in spec.values.items():
        mkey = canonical_key(bar(i), bar(j), bar(l))
        if mkey in spec.values or mkey in values:
            continue
        values[mkey] = v.conjugate() if isinstance(v, complex) else v
        sq = spec.squared.get((i, j, l))
        if sq is not None:
            squared[mkey] = sq
        ex = spec.exact.get((i, j, l))
        if ex is not None:
            exact[mkey] = ex
    return spec.with_entries(values, squared, exact)


def fill_se4_diagonal(spec: CandidateSpectrum) -> CandidateSpectrum:
    """Store the identity-channel diagonal C(bar j, j, (0,0)) = (-1)^{j_2}.

    A seed that already fixed one of these triples must agree (normalize the
    base values first if not); any mismatch raises.
    """
    zero = Index(0, 0)
    values, squared, exact = {}, {}, {}
    for j in spec.window.members(spec.ctx):
        key = canonical_key(bar(j), j, zero)
        target = (-1) ** (j[1] % 2)
        existing = spec.values.get(key)
        if existing is not None:
            if existing != target:
                raise DomainError(
                    f"diagonal fill conflicts with stored {key}: {existing!r} != {target}"
                )
            continue
        if key in values:
            continue
        values[key] = target
        squared[key] = Fraction(1)
        exact[key] = Fraction(target)
    return spec.with_entries(values, squared, exact)


# ---------------------------------------------------------------------------
# on-disk format


FORMAT_VERSION = "1"
_TOP_FIELDS = (
    "version",
    "laplace",
    "laplace_horizon",
    "holomorphic",
    "holomorphic_horizon",
    "window",
    "C",
)


def _num_str(x) -> str:
    """Canonical decimal string when exact, 'p/q' otherwise.

    Floats are first converted through their shortest round-trip decimal,
    so equal numbers serialize identically whatever their Python type.
    """
    if isinstance(x, int):
        return str(x)
    if not isinstance(x, Fraction):
        x = Fraction(repr(float(x)))
    den = x.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{x.numerator}/{x.denominator}"
    e = max(twos, fives)
    scaled = x.numerator * 10**e // x.denominator
    if e == 0:
        return str(scaled)
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(e + 1, "0")
    return f"{sign}{digits[:-e]}.{digits[-e:]}"


def _num_parse(s, where: str) -> Fraction:
    if not isinstance(s, str):
        raise ParseError(f"expected a number string, got {s!r}", location=where)
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"unreadable number {s!r}: {exc}", location=where) from None


def serialize(spec: CandidateSpectrum) -> bytes:
    """Canonical byte serialization (stable ordering, exact numbers kept exact)."""
    doc = {
        "version": FORMAT_VERSION,
        "laplace": [_num_str(v) for v in spec.ctx.laplace.entries],
        "laplace_horizon": _num_str(spec.ctx.laplace.horizon),
        "holomorphic": list(spec.ctx.holomorphic.entries),
        "holomorphic_horizon": spec.ctx.holomorphic.horizon,
        "window": {"r1": spec.window.r1, "r2": spec.window.r2},
        "C": [
            {
                "i": [i[0], i[1]],
                "j": [j[0], j[1]],
                "l": [l[0], l[1]],
                # the exact annotation (present for rational real values) wins
                # over the float image, so parsed p/q entries rewrite stably
                "re": _num_str(spec.exact.get((i, j, l), _re(v))),
                "im": _num_str(_im(v)),
            }
            for i, j, l, v in spec.stored_triples()
        ],
    }
    return (json.dumps(doc, indent=2) + "\n").encode("ascii")


def _re(v):
    return v.real if isinstance(v, complex) else v


def _im(v):
    return v.imag if isinstance(v, complex) else 0


def _index_of(raw, where: str) -> Index:
    if (
        not isinstance(raw, list)
        or len(raw) != 2
        or not all(isinstance(c, int) and not isinstance(c, bool) for c in raw)
    ):
        raise ParseError(f"index must be a pair of integers, got {raw!r}", location=where)
    return Index(raw[0], raw[1])


def deserialize(data: Union[bytes, str]) -> CandidateSpectrum:
    """Parse serialized bytes back into a spectrum, validating as it goes.

    Unknown fields are rejected.  Exchange-asymmetric duplicates (both
    orientations of a pair present with different values) are kept — first
    orientation wins — and the discrepancy is recorded for check_hb1.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not utf-8: {exc}", location="document") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", location=f"line {exc.lineno}") from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", location="document")
    unknown = set(doc) - set(_TOP_FIELDS)
    if unknown:
        raise ParseError(f"unknown fields {sorted(unknown)}", location="document")
    missing = set(_TOP_FIELDS) - set(doc)
    if missing:
        raise ParseError(f"missing fields {sorted(missing)}", location="document")
    if doc["version"] != FORMAT_VERSION:
        raise ParseError(f"unsupported version {doc['version']!r}", location="version")

    if not isinstance(doc["laplace"], list) or not doc["laplace"]:
        raise ParseError("laplace must be a non-empty list", location="laplace")
    laplace_entries = tuple(
        _num_parse(s, f"laplace[{idx}]") for idx, s in enumerate(doc["laplace"])
    )
    laplace_horizon = _num_parse(doc["laplace_horizon"], "laplace_horizon")
    holo_raw = doc["holomorphic"]
    if not isinstance(holo_raw, list) or not all(
        isinstance(x, int) and not isinstance(x, bool) for x in holo_raw
    ):
        raise ParseError("holomorphic must be a list of integers", location="holomorphic")
    holo_horizon = doc["holomorphic_horizon"]
    if not isinstance(holo_horizon, int) or isinstance(holo_horizon, bool):
        raise ParseError("holomorphic_horizon must be an integer", location="holomorphic_horizon")
    win_raw = doc["window"]
    if (
        not isinstance(win_raw, dict)
        or set(win_raw) != {"r1", "r2"}
        or not all(isinstance(win_raw[f], int) for f in ("r1", "r2"))
    ):
        raise ParseError("window must be an object with integer r1, r2", location="window")

    try:
        ctx = SpectralContext(
            laplace=LaplaceSpectrum(laplace_entries, laplace_horizon),
            holomorphic=HolomorphicSpectrum(tuple(holo_raw), holo_horizon),
        )
        window = Window(win_raw["r1"], win_raw["r2"])
    except DomainError as exc:
        raise ParseError(str(exc), location="header") from None

    if not isinstance(doc["C"], list):
        raise ParseError("C must be a list", location="C")
    first_seen: dict = {}  # canonical key -> first-listed value (zeros included)
    first_parts: dict = {}  # canonical key -> exact (re, im) Fractions
    asymmetry = []
    seen_oriented = set()
    for pos, entry in enumerate(doc["C"]):
        where = f"C[{pos}]"
        if not isinstance(entry, dict):
            raise ParseError("entry must be an object", location=where)
        if set(entry) != {"i", "j", "l", "re", "im"}:
            raise ParseError(
                f"entry must have exactly fields i, j, l, re, im; got {sorted(entry)}",
                location=where,
            )
        i = _index_of(entry["i"], f"{where}.i")
        j = _index_of(entry["j"], f"{where}.j")
        l = _index_of(entry["l"], f"{where}.l")
        re_part = _num_parse(entry["re"], f"{where}.re")
        im_part = _num_parse(entry["im"], f"{where}.im")
        for x in (i, j, l):
            if not window.contains(x):
                raise ParseError(f"index {x} outside the window", location=where)
            if not member(ctx, x):
                raise ParseError(f"index {x} outside the index set", location=where)
        if i[1] + j[1] != l[1]:
            raise ParseError(
                f"weights do not add up: {i} + {j} vs {l}", location=where
            )
        if (i, j, l) in seen_oriented:
            raise ParseError(f"duplicate entry for ({i}, {j}, {l})", location=where)
        seen_oriented.add((i, j, l))
        v = complex(float(re_part), float(im_part))
        if v.imag == 0:
            v = v.real
        key = canonical_key(i, j, l)
        if key in first_seen:
            gap = abs(first_seen[key] - v)
            if gap != 0:
                asymmetry.append((key, gap))
            continue  # first orientation wins
        first_seen[key] = v
        first_parts[key] = (re_part, im_part)

    values = {key: v for key, v in first_seen.items() if v != 0}
    # the parsed rationals are exact, so rebuild the exact annotations
    squared = {key: first_parts[key][0] ** 2 + first_parts[key][1] ** 2 for key in values}
    exact = {
        key: first_parts[key][0] for key in values if first_parts[key][1] == 0
    }
    try:
        return CandidateSpectrum(ctx, window, values, squared, exact, tuple(asymmetry))
    except (DomainError, HorizonError) as exc:
        raise ParseError(str(exc), location="document") from None
