"""Residual checkers for the bootstrap equations on candidate spectra.

Two checking modes:

* ``support`` (default): an equation instance only counts when every
  referenced coefficient that could carry information — in the index set,
  inside the window, with a nonzero structural coefficient — is actually
  stored.  Anything else is reported as skipped, never as a violation.
  This is the right mode for sparse fixtures, where absence means
  "untracked", not "zero".
* ``window``: every reference inside the window reads through the store
  (absent = exactly 0).  This is the right mode for data meant to be
  complete on the window.

Instances are anchored at stored triples: each stored triple generates the
handful of instances that reference it, deduplicated by exchange symmetry.
Residual scale for relative tolerances is the largest term magnitude.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .errors import DomainError
from .indexset import (
    Index,
    Window,
    bar,
    lambda_of,
    lower,
    lowering_radicand,
    member,
    raise_,
    raising_radicand,
)
from .spectrum import CandidateSpectrum, canonical_key

DEFAULT_TOL_ABS = 1e-9
DEFAULT_TOL_REL = 1e-9

_STORED, _ZERO, _OUTSIDE, _ABSENT = range(4)


@dataclass(frozen=True)
class EquationStats:
    """Aggregated residuals of one equation family over a window."""

    equation: str
    instances: int
    skipped: int
    max_residual: float
    rms: float
    violations: int
    worst: Optional[str]
    details: tuple = ()

    def to_doc(self) -> dict:
        doc = {
            "equation": self.equation,
            "instances": self.instances,
            "skipped": self.skipped,
            "max_residual": self.max_residual,
            "rms": self.rms,
            "violations": self.violations,
            "worst": self.worst,
        }
        if self.details:
            doc["details"] = [list(d) for d in self.details]
        return doc


@dataclass(frozen=True)
class ResidualReport:
    """Full check run: one EquationStats per equation, plus the policy used."""

    window: Window
    mode: str
    tol_abs: float
    tol_rel: float
    entries: tuple

    @property
    def max_residual(self) -> float:
        return max((e.max_residual for e in self.entries), default=0.0)

    @property
    def violations(self) -> int:
        return sum(e.violations for e in self.entries)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    @property
    def worst(self) -> Optional[str]:
        # name a genuine offender when there are any: the diagnostic entry
        # never flags violations, so it must not mask the failing equation
        bad = [e for e in self.entries if e.violations and e.worst is not None]
        if not bad:
            bad = [e for e in self.entries if e.worst is not None]
        if not bad:
            return None
        top = max(bad, key=lambda e: e.max_residual)
        return f"{top.equation}: {top.worst}"

    def to_doc(self) -> dict:
        return {
            "window": {"r1": self.window.r1, "r2": self.window.r2},
            "mode": self.mode,
            "tol_abs": self.tol_abs,
            "tol_rel": self.tol_rel,
            "violations": self.violations,
            "max_residual": self.max_residual,
            "equations": [e.to_doc() for e in self.entries],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_doc(), indent=2)

    def to_table(self) -> str:
        lines = [
            f"mode={self.mode} window=({self.window.r1},{self.window.r2}) "
            f"tol_abs={self.tol_abs:.3e} tol_rel={self.tol_rel:.3e}",
            f"{'equation':<16}{'instances':>10}{'skipped':>9}{'max_resid':>13}"
            f"{'rms':>13}{'violations':>12}",
        ]
        for e in self.entries:
            lines.append(
                f"{e.equation:<16}{e.instances:>10}{e.skipped:>9}"
                f"{e.max_residual:>13.3e}{e.rms:>13.3e}{e.violations:>12}"
            )
        return "\n".join(lines)


class _Tally:
    """Residual accumulator shared by all the checkers."""

    def __init__(self, equation: str, tol_abs: float, tol_rel: float):
        self.equation = equation
        self.tol_abs = tol_abs
        self.tol_rel = tol_rel
        self.instances = 0
        self.skipped = 0
        self.violations = 0
        self.sumsq = 0.0
        self.max_residual = 0.0
        self.worst = None
        self.details = []

    def skip(self):
        self.skipped += 1

    def add(self, residual: float, scale: float, label: str):
        residual = float(residual)
        self.instances += 1
        self.sumsq += residual * residual
        if residual > self.max_residual or self.worst is None:
            self.max_residual = max(self.max_residual, residual)
            if residual >= self.max_residual:
                self.worst = f"{label} residual={residual:.6e}"
        if residual > max(self.tol_abs, self.tol_rel * scale):
            self.violations += 1

    def stats(self) -> EquationStats:
        rms = math.sqrt(self.sumsq / self.instances) if self.instances else 0.0
        return EquationStats(
            equation=self.equation,
            instances=self.instances,
            skipped=self.skipped,
            max_residual=self.max_residual,
            rms=rms,
            violations=self.violations,
            worst=self.worst,
            details=tuple(self.details),
        )


def _effective_window(spec: CandidateSpectrum, window: Optional[Window]) -> Window:
    if window is None:
        return spec.window
    return Window(min(window.r1, spec.window.r1), min(window.r2, spec.window.r2))


def _ref_status(spec: CandidateSpectrum, win: Window, i: Index, j: Index, l: Index) -> int:
    for x in (i, j, l):
        if not member(spec.ctx, x):
            return _ZERO
    for x in (i, j, l):
        if not win.contains(x):
            return _OUTSIDE
    if canonical_key(i, j, l) in spec.values:
        return _STORED
    return _ABSENT


def _valid_instance(spec, win, i, j, l, weight_offset: int) -> bool:
    """Instance (i, j, l) well-formed: all in I and the window, weights add."""
    return (
        all(member(spec.ctx, x) for x in (i, j, l))
        and all(win.contains(x) for x in (i, j, l))
        and i[1] + j[1] + weight_offset == l[1]
    )


def _label(i, j, l) -> str:
    return f"C({i}, {j}; {l})"


def _run_linear(spec, win, mode, tally, instances, terms_of):
    """Evaluate sum-of-terms == 0 instances; terms are (coeff, i, j, l, sign)."""
    for inst in instances:
        terms = terms_of(*inst)
        if mode == "support":
            needed = [
                t for t in terms if t[0] != 0 and _ref_status(spec, win, *t[1:4]) == _ABSENT
            ]
            outside = [
                t for t in terms if t[0] != 0 and _ref_status(spec, win, *t[1:4]) == _OUTSIDE
            ]
            if needed or outside:
                tally.skip()
                continue
        acc = 0.0
        scale = 0.0
        for coeff, ti, tj, tl, sign in terms:
            if coeff == 0:
                continue
            val = spec.get(ti, tj, tl)
            term = coeff * val * sign
            acc += term
            scale = max(scale, abs(term))
        tally.add(abs(acc), scale, _label(*inst))


# ---------------------------------------------------------------------------
# the individual equations


def check_hb1(spec, window=None, mode="support", tol_abs=DEFAULT_TOL_ABS, tol_rel=DEFAULT_TOL_REL):
    """Exchange symmetry C(i,j,l) = C(j,i,l).

    Identically satisfied by the one-orientation store; the only way to
    falsify it is data ingested from disk with both orientations listed,
    whose discrepancies were recorded at parse time.
    """
    win = _effective_window(spec, window)
    tally = _Tally("hb1_symmetry", tol_abs, tol_rel)
    for i, j, l, v in spec.stored_triples():
        if not all(win.contains(x) for x in (i, j, l)):
            continue
        tally.add(0.0, abs(v), _label(i, j, l))
    for key, gap in spec.ingest_asymmetry:
        tally.add(float(gap), abs(spec.values.get(key, 0)) or 1.0, _label(*key))
    return tally.stats()


def check_hb2(spec, window=None, mode="support", tol_abs=DEFAULT_TOL_ABS, tol_rel=DEFAULT_TOL_REL):
    """Weight support: C vanishes unless i2 + j2 = l2 with all indices in I."""
    win = _effective_window(spec, window)
    tally = _Tally("hb2_weight", tol_abs, tol_rel)
    for i, j, l, v in spec.stored_triples():
        if not all(win.contains(x) for x in (i, j, l)):
            continue
        off_support = i[1] + j[1] != l[1] or not all(member(spec.ctx, x) for x in (i, j, l))
        tally.add(abs(v) if off_support else 0.0, abs(v), _label(i, j, l))
    return tally.stats()


def check_hb3(spec, window=None, mode="support", tol_abs=DEFAULT_TOL_ABS, tol_rel=DEFAULT_TOL_REL):
    """Conjugation symmetry conj(C(i,j,l)) = C(bar i, bar j, bar l)."""
    win = _effective_window(spec, window)
    tally = _Tally("hb3_conjugation", tol_abs, tol_rel)
    seen = set()
    for i, j, l, v in spec.stored_triples():
        if not all(win.contains(x) for x in (i, j, l)):
            continue
        key = (i, j, l)
        mkey = canonical_key(bar(i), bar(j), bar(l))
        pair = min(key, mkey)
        if pair in seen:
            continue
        seen.add(pair)
        vb = v.conjugate() if isinstance(v, complex) else v
        if mkey == key:
            tally.add(abs(vb - v), abs(v), _label(i, j, l))
            continue
        if mkey in spec.values:
            mv = spec.values[mkey]
            tally.add(abs(vb - mv), max(abs(v), abs(mv)), _label(i, j, l))
        elif mode == "support":
            tally.skip()
        else:
            tally.add(abs(v), abs(v), _label(i, j, l))
    return tally.stats()


def check_hb4(spec, window=None, mode="support", tol_abs=DEFAULT_TOL_ABS, tol_rel=DEFAULT_TOL_REL):
    """Identity channel: C((0,0), j, l) = 1 if j == l else 0."""
    win = _effective_window(spec, window)
    tally = _Tally("hb4_unit", tol_abs, tol_rel)
    zero = Index(0, 0)
    if mode == "support":
        for i, j, l, v in spec.stored_triples():
            if not all(win.contains(x) for x in (i, j, l)):
                continue
            if i == zero or j == zero:
                other = j if i == zero else i
                expected = 1 if other == l else 0
                tally.add(abs(v - expected), max(abs(v), 1.0), _label(i, j, l))
    else:
        for j in win.members(spec.ctx):
            for l in win.members(spec.ctx):
                if j[1] != l[1]:
                    continue
                v = spec.get(zero, j, l)
                expected = 1 if j == l else 0
                tally.add(abs(v - expected), max(abs(v), 1.0), _label(zero, j, l))
    return tally.stats()


def _hb5_terms(spec):
    ctx = spec.ctx

    def terms(i, j, l):
        return (
            (math.sqrt(max(0.0, float(lowering_radicand(ctx, l)))), i, j, lower(l), 1.0),
            (math.sqrt(max(0.0, float(raising_radicand(ctx, i)))), raise_(i), j, l, -1.0),
            (math.sqrt(max(0.0, float(raising_radicand(ctx, j)))), i, raise_(j), l, -1.0),
        )

    return terms


def _hb5_candidates(spec, win):
    out = set()
    for a, b, c in spec.values:
        for cand in ((a, b, raise_(c)), (lower(a), b, c), (a, lower(b), c)):
            i, j, l = cand
            if j < i:
                i, j = j, i
            if _valid_instance(spec, win, i, j, l, weight_offset=1):
                out.add((i, j, l))
    return sorted(out)


def check_hb5(spec, window=None, mode="support", tol_abs=DEFAULT_TOL_ABS, tol_rel=DEFAULT_TOL_REL):
    """Lowering recursion: sqrt-weighted C(i,j,l-) against raised references."""
    win = _effective_window(spec, window)
    tally = _Tally("hb5_lowering", tol_abs, tol_rel)
    _run_linear(spec, win, mode, tally, _hb5_candidates(spec, win), _hb5_terms(spec))
    return tally.stats()


def _hb5_inverted_terms(spec):
    ctx = spec.ctx

    def terms(i, j, l):
        return (
            (math.sqrt(max(0.0, float(raising_radicand(ctx, l)))), i, j, raise_(l), 1.0),
            (math.sqrt(max(0.0, float(lowering_radicand(ctx, i)))), lower(i), j, l, -1.0),
            (math.sqrt(max(0.0, float(lowering_radicand(ctx, j)))), i, lower(j), l, -1.0),
        )

    return terms


def _hb5_inverted_candidates(spec, win):
    out = set()
    for a, b, c in spec.values:
        for cand in ((a, b, lower(c)), (raise_(a), b, c), (a, raise_(b), c)):
            i, j, l = cand
            if j < i:
                i, j = j, i
            if _valid_instance(spec, win, i, j, l, weight_offset=-1):
                out.add((i, j, l))
    return sorted(out)


def check_hb5_inverted(
    spec, window=None, mode="support", tol_abs=DEFAULT_TOL_ABS, tol_rel=DEFAULT_TOL_REL
):
    """Raising recursion (the inverted form implied by hb5 + hb3)."""
    win = _effective_window(spec, window)
    tally = _Tally("hb5_inverted", tol_abs, tol_rel)
    _run_linear(spec, win, mode, tally, _hb5_inverted_candidates(spec, win), _hb5_inverted_terms(spec))
    return tally.stats()


def _num_recursion_terms(spec):
    ctx = spec.ctx

    def terms(i, j, l):
        coeff0 = float(
            lambda_of(ctx, l[0]) - lambda_of(ctx, i[0]) - lambda_of(ctx, j[0]) + 2 * i[1] * j[1]
        )
        rad_up = max(0.0, float(raising_radicand(ctx, i)) * float(lowering_radicand(ctx, j)))
        rad_dn = max(0.0, float(lowering_radicand(ctx, i)) * float(raising_radicand(ctx, j)))
        return (
            (coeff0, i, j, l, 1.0),
            (math.sqrt(rad_up), raise_(i), lower(j), l, -1.0),
            (math.sqrt(rad_dn), lower(i), raise_(j), l, -1.0),
        )

    return terms


def _num_recursion_candidates(spec, win):
    out = set()
    for a, b, c in spec.values:
        for cand in ((a, b, c), (lower(a), raise_(b), c), (raise_(a), lower(b), c)):
            i, j, l = cand
            if j < i:
                i, j = j, i
            if _valid_instance(spec, win, i, j, l, weight_offset=0):
                out.add((i, j, l))
    return sorted(out)


def check_num_recursion(
    spec, window=None, mode="support", tol_abs=DEFAULT_TOL_ABS, tol_rel=DEFAULT_TOL_REL
):
    """Radical-free eigenvalue recursion (the composition of the two hb5 forms)."""
    win = _effective_window(spec, window)
    tally = _Tally("num_recursion", tol_abs, tol_rel)
    _run_linear(spec, win, mode, tally, _num_recursion_candidates(spec, win), _num_recursion_terms(spec))
    return tally.stats()


def check_l0_diagonal(
    spec, window=None, mode="support", tol_abs=DEFAULT_TOL_ABS, tol_rel=DEFAULT_TOL_REL
):
    """Identity-channel projection: C(i, j, (0,0)) = (-1)^{i2} [j == bar(i)]."""
    win = _effective_window(spec, window)
    tally = _Tally("l0_diagonal", tol_abs, tol_rel)
    zero = Index(0, 0)
    if mode == "support":
        for i, j, l, v in spec.stored_triples():
            if l != zero or not all(win.contains(x) for x in (i, j, l)):
                continue
            expected = (-1) ** (i[1] % 2) if j == bar(i) else 0
            tally.add(abs(v - expected), max(abs(v), 1.0), _label(i, j, l))
    else:
        seen = set()
        for i in win.members(spec.ctx):
            for j in win.members(spec.ctx):
                if i[1] + j[1] != 0 or (j, i) in seen:
                    continue
                seen.add((i, j))
                v = spec.get(i, j, zero)
                expected = (-1) ** (i[1] % 2) if j == bar(i) else 0
                tally.add(abs(v - expected), max(abs(v), 1.0), _label(i, j, zero))
    return tally.stats()


def check_hb6(
    spec,
    window=None,
    quadruples: Optional[Iterable] = None,
    exhaustive: bool = False,
    tol_abs=DEFAULT_TOL_ABS,
    tol_rel=DEFAULT_TOL_REL,
):
    """Truncated crossing sums, reported per quadruple — diagnostics only.

    For (i, j, ip, jp) both sides of the quadratic identity are summed over
    the window's channel column; absent coefficients read zero.  Because the
    true sums run over the whole index set, truncation gaps are expected —
    entries record both sides and their term-magnitude sums so callers can
    judge scale, and no violations are ever flagged.

    The default set is the caller-supplied list plus the diagonal family
    (x, bar x, y, bar y) over stored indices; `exhaustive` scans the full
    quartic product of window members instead (tiny windows only).
    """
    win = _effective_window(spec, window)
    tally = _Tally("hb6_crossing", tol_abs, tol_rel)
    quads = []
    if quadruples is not None:
        quads.extend(tuple(Index(*x) for x in q) for q in quadruples)
    if exhaustive:
        pool = list(win.members(spec.ctx))
        quads.extend(
            (i, j, ip, jp) for i in pool for j in pool for ip in pool for jp in pool
        )
    elif quadruples is None:
        pool = [x for x in spec.stored_indices() if win.contains(x)]
        for xi, x in enumerate(pool):
            for y in pool[xi:]:
                quads.append((x, bar(x), y, bar(y)))

    for i, j, ip, jp in quads:
        lhs = 0.0
        rhs = 0.0
        lhs_abs = 0.0
        rhs_abs = 0.0
        for l1 in range(-win.r1, win.r1 + 1):
            l_left = Index(l1, i[1] + j[1])
            if member(spec.ctx, l_left) and member(spec.ctx, bar(l_left)):
                term = (
                    (-1) ** (l_left[1] % 2)
                    * spec.get(i, j, l_left)
                    * spec.get(ip, jp, bar(l_left))
                )
                lhs += term
                lhs_abs += abs(term)
            l_right = Index(l1, i[1] + ip[1])
            if member(spec.ctx, l_right) and member(spec.ctx, bar(l_right)):
                term = (
                    (-1) ** (l_right[1] % 2)
                    * spec.get(i, ip, l_right)
                    * spec.get(j, jp, bar(l_right))
                )
                rhs += term
                rhs_abs += abs(term)
        residual = abs(lhs - rhs)
        label = f"({i}, {j}, {ip}, {jp})"
        tally.instances += 1
        tally.sumsq += residual * residual
        if residual > tally.max_residual or tally.worst is None:
            tally.max_residual = max(tally.max_residual, residual)
            tally.worst = f"{label} residual={residual:.6e}"
        tally.details.append(
            (
                label,
                _c(lhs),
                _c(rhs),
                float(residual),
                float(lhs_abs),
                float(rhs_abs),
            )
        )
    return tally.stats()


def _c(z):
    z = complex(z)
    return z.real if z.imag == 0 else (z.real, z.imag)


EQUATION_ORDER = (
    "hb1_symmetry",
    "hb2_weight",
    "hb3_conjugation",
    "hb4_unit",
    "hb5_lowering",
    "hb5_inverted",
    "num_recursion",
    "l0_diagonal",
    "hb6_crossing",
)


def check_all(
    spec,
    window=None,
    mode="support",
    quadruples=None,
    tol_abs=DEFAULT_TOL_ABS,
    tol_rel=DEFAULT_TOL_REL,
) -> ResidualReport:
    """Run every checker in fixed order and bundle the results."""
    if mode not in ("support", "window"):
        raise DomainError(f"mode must be 'support' or 'window', got {mode!r}")
    win = _effective_window(spec, window)
    args = dict(window=win, mode=mode, tol_abs=tol_abs, tol_rel=tol_rel)
    entries = (
        check_hb1(spec, **args),
        check_hb2(spec, **args),
        check_hb3(spec, **args),
        check_hb4(spec, **args),
        check_hb5(spec, **args),
        check_hb5_inverted(spec, **args),
        check_num_recursion(spec, **args),
        check_l0_diagonal(spec, **args),
        check_hb6(spec, window=win, quadruples=quadruples, tol_abs=tol_abs, tol_rel=tol_rel),
    )
    return ResidualReport(window=win, mode=mode, tol_abs=tol_abs, tol_rel=tol_rel, entries=entries)


# ---------------------------------------------------------------------------
# exact (rational) verification for square-annotated fixtures


def _sqrt_exact(x: Fraction) -> Optional[Fraction]:
    """Exact square root of a rational, when it is one."""
    if x < 0:
        return None
    num, den = x.numerator, x.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def exact_hb5_squared(spec, window=None):
    """Exactly verify hb5 instances by squaring the relation pairwise.

    For real-valued data, sqrt(L) C0 = sqrt(A) C1 + sqrt(B) C2 implies
    (L s0 - A s1 - B s2)^2 = 4 A B s1 s2 with s_m the squared magnitudes,
    which is radical-free over the exact annotations.  The converse only
    holds up to the relative signs of the three terms, so this check
    trades sign information for exactness.  Instances lacking an
    annotation on some referenced stored triple are skipped.  Returns
    (instances, skipped, max_residual) with an exact Fraction residual.
    """
    win = _effective_window(spec, window)
    ctx = spec.ctx
    checked = skipped = 0
    worst = Fraction(0)
    for i, j, l in _hb5_candidates(spec, win):
        coeffs = (
            Fraction(lowering_radicand(ctx, l)),
            Fraction(raising_radicand(ctx, i)),
            Fraction(raising_radicand(ctx, j)),
        )
        triples = ((i, j, lower(l)), (raise_(i), j, l), (i, raise_(j), l))
        squares = []
        usable = True
        for coeff, (ti, tj, tl) in zip(coeffs, triples):
            if coeff == 0:
                squares.append(Fraction(0))
                continue
            status = _ref_status(spec, win, ti, tj, tl)
            if status == _ZERO:
                squares.append(Fraction(0))
                continue
            if status != _STORED:
                usable = False
                break
            sq = spec.get_squared(ti, tj, tl)
            if sq is None:
                usable = False
                break
            squares.append(Fraction(sq))
        if not usable:
            skipped += 1
            continue
        ll, aa, bb = coeffs
        s0, s1, s2 = squares
        residual = (ll * s0 - aa * s1 - bb * s2) ** 2 - 4 * aa * bb * s1 * s2
        worst = max(worst, abs(residual))
        checked += 1
    return checked, skipped, worst


def exact_num_recursion(spec, window=None):
    """Exactly verify num_recursion instances whose radicands are perfect squares
    and whose referenced values carry exact rational annotations."""
    win = _effective_window(spec, window)
    ctx = spec.ctx
    checked = skipped = 0
    worst = Fraction(0)
    for i, j, l in _num_recursion_candidates(spec, win):
        coeff0 = (
            Fraction(lambda_of(ctx, l[0]))
            - Fraction(lambda_of(ctx, i[0]))
            - Fraction(lambda_of(ctx, j[0]))
            + 2 * i[1] * j[1]
        )
        s_up = _sqrt_exact(Fraction(raising_radicand(ctx, i)) * Fraction(lowering_radicand(ctx, j)))
        s_dn = _sqrt_exact(Fraction(lowering_radicand(ctx, i)) * Fraction(raising_radicand(ctx, j)))
        if s_up is None or s_dn is None:
            skipped += 1
            continue
        acc = Fraction(0)
        usable = True
        for coeff, ti, tj, tl, sign in (
            (coeff0, i, j, l, 1),
            (s_up, raise_(i), lower(j), l, -1),
            (s_dn, lower(i), raise_(j), l, -1),
        ):
            if coeff == 0:
                continue
            status = _ref_status(spec, win, ti, tj, tl)
            if status == _ZERO:
                continue
            if status != _STORED:
                usable = False
                break
            val = spec.get_exact(ti, tj, tl)
            if val is None:
                usable = False
                break
            acc += coeff * val * sign
        if not usable:
            skipped += 1
            continue
        worst = max(worst, abs(acc))
        checked += 1
    return checked, skipped, worst
