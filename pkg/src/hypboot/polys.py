"""Exact polynomial arithmetic over the rationals.

Univariate polynomials are coefficient tuples (low degree first);
bivariate ones are sparse maps (a, b) -> coefficient of x^a y^b.
Everything is a fractions.Fraction, so evaluation at rational points is
exact; evaluation also works with floats/mpmath values by plain Horner.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Number = Union[int, float, Fraction]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        if not x.is_integer():
            raise TypeError(f"refusing to coerce non-integral float {x!r} to an exact coefficient")
        return Fraction(int(x))
    raise TypeError(f"cannot use {type(x).__name__} as an exact coefficient")


class UnivariatePolynomial:
    """Immutable polynomial with exact rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):  # pragma: no cover - immutability guard
        raise AttributeError("UnivariatePolynomial is immutable")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coefficient(self, n: int) -> Fraction:
        return self.coeffs[n] if 0 <= n < len(self.coeffs) else Fraction(0)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, UnivariatePolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == UnivariatePolynomial([other])
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = _as_uni(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UnivariatePolynomial(
            [self.coefficient(i) + other.coefficient(i) for i in range(n)]
        )

    __radd__ = __add__

    def __neg__(self):
        return UnivariatePolynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_as_uni(other))

    def __rsub__(self, other):
        return _as_uni(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return UnivariatePolynomial([c * other for c in self.coeffs])
        other = _as_uni(other)
        if not self.coeffs or not other.coeffs:
            return UnivariatePolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UnivariatePolynomial(out)

    __rmul__ = __mul__

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc if self.coeffs else 0 * x

    def derivative(self) -> "UnivariatePolynomial":
        return UnivariatePolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def __repr__(self):
        if not self.coeffs:
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*x")
            else:
                terms.append(f"{c}*x^{i}")
        return "Poly(" + " + ".join(terms) + ")"


def _as_uni(x) -> UnivariatePolynomial:
    if isinstance(x, UnivariatePolynomial):
        return x
    return UnivariatePolynomial([x])


UNI_X = UnivariatePolynomial([0, 1])
UNI_ONE = UnivariatePolynomial([1])
UNI_ZERO = UnivariatePolynomial()


class BivariatePolynomial:
    """Immutable sparse polynomial in two variables over the rationals.

    By convention throughout this package the first variable is the
    Laplace eigenvalue and the second is the squared-magnitude parameter.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping = ()):
        clean = {}
        for (a, b), c in dict(terms).items():
            c = _frac(c)
            if c != 0:
                clean[(int(a), int(b))] = c
        object.__setattr__(self, "terms", dict(clean))

    def __setattr__(self, *a):  # pragma: no cover - immutability guard
        raise AttributeError("BivariatePolynomial is immutable")

    def coefficient(self, a: int, b: int) -> Fraction:
        return self.terms.get((a, b), Fraction(0))

    @property
    def total_degree(self) -> int:
        return max((a + b for a, b in self.terms), default=-1)

    @property
    def degree_x(self) -> int:
        return max((a for a, _ in self.terms), default=-1)

    @property
    def degree_y(self) -> int:
        return max((b for _, b in self.terms), default=-1)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, BivariatePolynomial):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({} if other == 0 else {(0, 0): _frac(other)})
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        other = _as_bi(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, Fraction(0)) + c
        return BivariatePolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return BivariatePolynomial({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_bi(other))

    def __rsub__(self, other):
        return _as_bi(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return BivariatePolynomial({k: c * other for k, c in self.terms.items()})
        other = _as_bi(other)
        out: dict = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return BivariatePolynomial(out)

    __rmul__ = __mul__

    def __call__(self, x, y):
        acc = 0 * x
        for (a, b), c in sorted(self.terms.items()):
            acc = acc + c * x**a * y**b
        return acc

    def substitute_y(self, y_value) -> UnivariatePolynomial:
        """Exact specialization of the second variable."""
        y_value = _frac(y_value)
        out: dict = {}
        for (a, b), c in self.terms.items():
            out[a] = out.get(a, Fraction(0)) + c * y_value**b
        n = max(out, default=-1)
        return UnivariatePolynomial([out.get(i, Fraction(0)) for i in range(n + 1)])

    def substitute_x(self, x_value) -> UnivariatePolynomial:
        """Exact specialization of the first variable."""
        x_value = _frac(x_value)
        out: dict = {}
        for (a, b), c in self.terms.items():
            out[b] = out.get(b, Fraction(0)) + c * x_value**a
        n = max(out, default=-1)
        return UnivariatePolynomial([out.get(i, Fraction(0)) for i in range(n + 1)])

    def divide_by_y(self) -> "BivariatePolynomial":
        """Exact division by the second variable; raises if not divisible."""
        out = {}
        for (a, b), c in self.terms.items():
            if b < 1:
                raise ArithmeticError("polynomial is not divisible by the second variable")
            out[(a, b - 1)] = c
        return BivariatePolynomial(out)

    def sorted_terms(self):
        """Deterministic (degree-sorted) list of ((a, b), coefficient)."""
        return sorted(self.terms.items())

    def __repr__(self):
        if not self.terms:
            return "BiPoly(0)"
        parts = []
        for (a, b), c in self.sorted_terms():
            piece = str(c)
            if a:
                piece += f"*x^{a}" if a > 1 else "*x"
            if b:
                piece += f"*y^{b}" if b > 1 else "*y"
            parts.append(piece)
        return "BiPoly(" + " + ".join(parts) + ")"


def _as_bi(x) -> BivariatePolynomial:
    if isinstance(x, BivariatePolynomial):
        return x
    return BivariatePolynomial({(0, 0): x})


BI_X = BivariatePolynomial({(1, 0): 1})
BI_Y = BivariatePolynomial({(0, 1): 1})
BI_ONE = BivariatePolynomial({(0, 0): 1})
BI_ZERO = BivariatePolynomial()
