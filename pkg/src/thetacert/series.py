"""Exact truncated Laurent series in a formal variable q.

Exponents may be rational.  A series stores its coefficients on the grid
``q^(i/denom)`` and remembers up to which grid index the coefficients are
guaranteed exact.  Products, quotients and sums propagate that bound, so
reading a coefficient beyond it raises instead of returning garbage.
"""
from __future__ import annotations

from fractions import Fraction
from math import ceil, gcd, lcm
from numbers import Rational
from typing import Iterable, Iterator, Mapping

from . import kernels


class SeriesError(ValueError):
    """Raised for domain errors in series arithmetic."""


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def _denom_lcm(values: Iterable) -> int:
    d = 1
    for v in values:
        d = lcm(d, as_fraction(v).denominator)
    return d


def _grid_ceil(t: Fraction, denom: int) -> int:
    return ceil(t * denom)


class QSeries:
    """Immutable truncated Laurent series.

    ``coeffs[i]`` is the coefficient of ``q^((offset + i)/denom)``.  The
    coefficients are exact for grid indices ``< trunc``; ``coeffs`` always
    covers ``[offset, trunc)`` densely.
    """

    __slots__ = ("coeffs", "offset", "trunc", "denom")

    def __init__(self, coeffs, offset: int, trunc: int, denom: int = 1):
        if denom <= 0:
            raise SeriesError("denominator must be positive")
        n = trunc - offset
        if n < 0:
            offset = trunc
            n = 0
        c = list(coeffs[:n])
        if len(c) < n:
            c.extend([0] * (n - len(c)))
        object.__setattr__(self, "coeffs", tuple(c))
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "trunc", trunc)
        object.__setattr__(self, "denom", denom)

    def __setattr__(self, name, value):
        raise AttributeError("QSeries is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, T, denom: int = 1) -> "QSeries":
        t = _grid_ceil(as_fraction(T), denom)
        return cls((), t, t, denom)

    @classmethod
    def one(cls, T) -> "QSeries":
        return cls.monomial(1, 0, T)

    @classmethod
    def monomial(cls, coeff, exponent, T) -> "QSeries":
        e = as_fraction(exponent)
        T = as_fraction(T)
        d = lcm(e.denominator, T.denominator)
        idx = int(e * d)
        t = _grid_ceil(T, d)
        if idx >= t:
            return cls((), t, t, d)
        return cls([coeff], idx, t, d)

    @classmethod
    def from_dict(cls, terms: Mapping, T) -> "QSeries":
        """Build from ``{exponent: coefficient}``; terms at or past ``T`` are dropped."""
        T = as_fraction(T)
        d = _denom_lcm(list(terms) + [T])
        t = _grid_ceil(T, d)
        idx = {int(as_fraction(e) * d): c for e, c in terms.items()}
        lo = min([i for i in idx if i < t], default=t)
        lo = min(lo, 0)
        coeffs = [0] * (t - lo)
        for i, c in idx.items():
            if i < t:
                coeffs[i - lo] += c
        return cls(coeffs, lo, t, d)

    # -- basic accessors --------------------------------------------------

    @property
    def truncation(self) -> Fraction:
        """Exponent bound below which every coefficient is exact."""
        return Fraction(self.trunc, self.denom)

    def coeff(self, exponent) -> int:
        e = as_fraction(exponent)
        scaled = e * self.denom
        if e >= self.truncation:
            raise SeriesError(f"coefficient of q^{e} lies beyond the truncation {self.truncation}")
        if scaled.denominator != 1:
            return 0
        i = int(scaled) - self.offset
        if i < 0:
            return 0
        return self.coeffs[i]

    def __getitem__(self, exponent):
        return self.coeff(exponent)

    def items(self) -> Iterator[tuple[Fraction, int]]:
        """Nonzero ``(exponent, coefficient)`` pairs in increasing order."""
        for i, c in enumerate(self.coeffs):
            if c:
                yield Fraction(self.offset + i, self.denom), c

    def to_dict(self) -> dict[Fraction, int]:
        return dict(self.items())

    def valuation(self) -> Fraction | None:
        for e, _ in self.items():
            return e
        return None

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def integer_coeffs(self, count: int | None = None) -> list[int]:
        """Coefficients of q^0, q^1, ... for a power series in integral powers."""
        n = self.trunc // self.denom if self.trunc >= 0 else 0
        if count is not None:
            if count > n:
                raise SeriesError(f"only {n} integral coefficients are exact")
            n = count
        return [self.coeff(k) for k in range(n)]

    def __repr__(self):
        terms = []
        for e, c in list(self.items())[:8]:
            terms.append(f"{c}*q^{e}")
        more = " + ..." if sum(1 for _ in self.items()) > 8 else ""
        body = " + ".join(terms) if terms else "0"
        return f"QSeries({body}{more}; O(q^{self.truncation}))"

    # -- grid handling ----------------------------------------------------

    def rescale(self, denom: int) -> "QSeries":
        """Re-express on the finer grid ``q^(1/denom)``; ``denom`` must be a multiple."""
        if denom == self.denom:
            return self
        if denom % self.denom:
            raise SeriesError(f"cannot rescale denominator {self.denom} to {denom}")
        k = denom // self.denom
        n = (self.trunc - self.offset) * k
        coeffs = [0] * n
        for i, c in enumerate(self.coeffs):
            coeffs[i * k] = c
        return QSeries(coeffs, self.offset * k, self.trunc * k, denom)

    def simplify_grid(self) -> "QSeries":
        """Coarsest grid that represents the same data."""
        g = self.denom
        for i, c in enumerate(self.coeffs):
            if c:
                g = gcd(g, self.offset + i)
        g = gcd(g, self.trunc) if self.trunc else g
        g = gcd(g, self.offset) if self.offset else g
        if g <= 1:
            return self
        new_off = self.offset // g
        new_trunc = -(-self.trunc // g)
        coeffs = [0] * (new_trunc - new_off)
        for i, c in enumerate(self.coeffs):
            if c:
                coeffs[(self.offset + i) // g - new_off] = c
        return QSeries(coeffs, new_off, new_trunc, self.denom // g)

    def truncate(self, T) -> "QSeries":
        T = as_fraction(T)
        d = lcm(self.denom, T.denominator)
        s = self.rescale(d)
        t = min(s.trunc, _grid_ceil(T, d))
        return QSeries(s.coeffs, s.offset, t, d)

    # -- arithmetic -------------------------------------------------------

    def _aligned(self, other: "QSeries"):
        d = lcm(self.denom, other.denom)
        return self.rescale(d), other.rescale(d), d

    def __neg__(self):
        return QSeries([-c for c in self.coeffs], self.offset, self.trunc, self.denom)

    def __add__(self, other):
        if not isinstance(other, QSeries):
            return self + QSeries.monomial(other, 0, self.truncation)
        a, b, d = self._aligned(other)
        t = min(a.trunc, b.trunc)
        lo = min(a.offset, b.offset, t)
        coeffs = [0] * (t - lo)
        for s in (a, b):
            for i, c in enumerate(s.coeffs):
                j = s.offset + i
                if j >= t:
                    break
                coeffs[j - lo] += c
        return QSeries(coeffs, lo, t, d)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "QSeries":
        return QSeries([c * x for x in self.coeffs], self.offset, self.trunc, self.denom)

    def shift(self, exponent) -> "QSeries":
        """Multiply by ``q^exponent``."""
        e = as_fraction(exponent)
        d = lcm(self.denom, e.denominator)
        s = self.rescale(d)
        k = int(e * d)
        return QSeries(s.coeffs, s.offset + k, s.trunc + k, d)

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return series_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return series_div(self, other)
        raise TypeError("only division by a QSeries is supported")

    def agrees(self, other: "QSeries", upto=None) -> bool:
        """Coefficientwise equality on the range where both are exact."""
        a, b, d = self._aligned(other)
        t = min(a.trunc, b.trunc)
        if upto is not None:
            t = min(t, _grid_ceil(as_fraction(upto), d))
        lo = min(a.offset, b.offset)
        for j in range(lo, t):
            ca = a.coeffs[j - a.offset] if a.offset <= j < a.trunc else 0
            cb = b.coeffs[j - b.offset] if b.offset <= j < b.trunc else 0
            if ca != cb:
                return False
        return True

    def first_difference(self, other: "QSeries"):
        """First exponent where the two series differ, or None."""
        a, b, d = self._aligned(other)
        t = min(a.trunc, b.trunc)
        lo = min(a.offset, b.offset)
        for j in range(lo, t):
            ca = a.coeffs[j - a.offset] if a.offset <= j < a.trunc else 0
            cb = b.coeffs[j - b.offset] if b.offset <= j < b.trunc else 0
            if ca != cb:
                return Fraction(j, d), ca, cb
        return None


def series_mul(a: QSeries, b: QSeries) -> QSeries:
    a, b, d = a._aligned(b)
    off = a.offset + b.offset
    t = min(a.trunc + b.offset, b.trunc + a.offset)
    n = t - off
    if n <= 0:
        return QSeries((), t, t, d)
    coeffs = kernels.mul_trunc(list(a.coeffs), list(b.coeffs), n)
    return QSeries(coeffs, off, t, d)


def series_div(a: QSeries, b: QSeries) -> QSeries:
    a, b, d = a._aligned(b)
    lead = None
    for i, c in enumerate(b.coeffs):
        if c:
            lead = i
            break
    if lead is None:
        raise SeriesError("division by a series that is zero to its truncation")
    if b.coeffs[lead] not in (1, -1):
        raise SeriesError(f"divisor has non-unit leading coefficient {b.coeffs[lead]}")
    vb = b.offset + lead
    bb = list(b.coeffs[lead:])
    rel = min(a.trunc - a.offset, b.trunc - vb)
    off = a.offset - vb
    if rel <= 0:
        return QSeries((), off + max(rel, 0), off + max(rel, 0), d)
    coeffs = kernels.div_trunc(list(a.coeffs), bb, rel)
    return QSeries(coeffs, off, off + rel, d)


def product_expand(f: Mapping[int, int], T, denom: int = 1) -> QSeries:
    """Expand ``prod_m (1 - q^(m/denom))^f[m]`` (``m`` positive grid indices) below ``q^T``."""
    n = _grid_ceil(as_fraction(T), denom)
    if n <= 0:
        return QSeries((), n, n, denom)
    vec = [0] * n
    for m, e in f.items():
        if m <= 0:
            raise SeriesError("product factors need positive exponents")
        if m < n:
            vec[m] += e
    return QSeries(kernels.euler_product(vec, n), 0, n, denom)


def poch_expand(e, sign: int, M, T) -> QSeries:
    """Expand ``(sign*q^e; q^M)_inf`` below ``q^T``."""
    e, M, T = as_fraction(e), as_fraction(M), as_fraction(T)
    if M <= 0:
        raise SeriesError("Pochhammer modulus must be positive")
    if e < 0:
        raise SeriesError("Pochhammer base exponent must be nonnegative")
    if sign not in (1, -1):
        raise SeriesError("sign must be +1 or -1")
    d = _denom_lcm([e, M, T])
    n = _grid_ceil(T, d)
    if e == 0 and sign == 1:
        return QSeries.zero(T, d)
    step = int(M * d)
    start = int(e * d)
    scalar = 1
    if start == 0:
        scalar = 2
        start = step
    f: dict[int, int] = {}
    for m in range(start, max(n, 0), step):
        if sign == 1:
            f[m] = f.get(m, 0) + 1
        else:
            # 1 + x = (1 - x^2) / (1 - x)
            f[m] = f.get(m, 0) - 1
            f[2 * m] = f.get(2 * m, 0) + 1
    s = product_expand(f, T, d)
    return s.scale(scalar) if scalar != 1 else s


def jtp_bilateral(A, B, alternating: bool, T) -> QSeries:
    """Sum over all integers k of ``(+-1)^k q^(A k^2 + B k)`` by direct enumeration."""
    A, B, T = as_fraction(A), as_fraction(B), as_fraction(T)
    if A <= 0:
        raise SeriesError("quadratic coefficient must be positive")
    terms: dict[Fraction, int] = {}
    # A k^2 + B k is minimal near k = -B/(2A); walk outward both ways
    k0 = int(-B / (2 * A))
    for direction in (1, -1):
        k = k0 if direction == 1 else k0 - 1
        while True:
            ex = A * k * k + B * k
            if ex >= T and (direction * (2 * A * k + B) > 0):
                break
            if ex < T:
                sgn = -1 if (alternating and k % 2) else 1
                terms[ex] = terms.get(ex, 0) + sgn
            k += direction
    return QSeries.from_dict(terms, T)


def square_sum_series(kind: str, M: int, T) -> QSeries:
    """Product form of ``sum_{n>=1} q^(M n^2)`` or ``sum_{n>=0} q^(M n(n+1))``."""
    if M < 1:
        raise SeriesError("scale must be a positive integer")
    if kind == "squares":
        full = series_mul(
            poch_expand(2 * M, 1, 2 * M, T),
            series_mul(poch_expand(M, -1, 2 * M, T), poch_expand(M, -1, 2 * M, T)),
        )
        shifted = full - QSeries.one(T)
        halves = []
        for c in shifted.coeffs:
            if c % 2:
                raise ArithmeticError("odd coefficient in theta-square expansion")
            halves.append(c // 2)
        return QSeries(halves, shifted.offset, shifted.trunc, shifted.denom)
    if kind == "triangular":
        return series_mul(
            poch_expand(2 * M, 1, 2 * M, T),
            series_mul(poch_expand(2 * M, -1, 2 * M, T), poch_expand(2 * M, -1, 2 * M, T)),
        )
    raise SeriesError(f"unknown kind {kind!r}")
