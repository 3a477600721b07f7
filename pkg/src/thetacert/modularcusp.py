"""Cusps of Gamma_1(N), modularity tests and orders of E-products at cusps."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd
from typing import Iterable, Sequence

from .thetaprod import EProduct


class ModularityError(ValueError):
    """The product is not a modular function on Gamma_1(N)."""


@dataclass(frozen=True, order=True)
class Cusp:
    """The cusp ``a/c``; infinity is ``1/0``."""

    a: int
    c: int

    @property
    def is_infinity(self) -> bool:
        return self.c == 0

    def __str__(self):
        return "oo" if self.c == 0 else f"{self.a}/{self.c}"


INFINITY = Cusp(1, 0)


def cusps_equivalent(x: Cusp, y: Cusp, N: int) -> bool:
    """Gamma_1(N)-equivalence of two cusps given in lowest terms."""
    for s in (1, -1):
        if (y.c - s * x.c) % N == 0:
            d = gcd(x.c, N)
            if (y.a - s * x.a) % d == 0:
                return True
    return False


def cusp_count(N: int) -> int:
    if N <= 4:
        raise ValueError("cusp count formula applies for N >= 5")
    total = 0
    for d in range(1, N + 1):
        if N % d == 0:
            total += _phi(d) * _phi(N // d)
    return total // 2


def _phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def cusp_representatives(N: int) -> list[Cusp]:
    """One representative ``a/c`` (``gcd(a, c) = 1``) per cusp of Gamma_1(N), infinity first."""
    if N < 5:
        raise ValueError("only N >= 5 is supported (-I not in Gamma_1(N))")
    reps = [INFINITY]
    seen = set()
    for c0 in range(N):
        d = gcd(c0, N)
        neg_c = (-c0) % N
        for a0 in range(d):
            if gcd(a0, d) != 1:
                continue
            key = (c0, a0)
            if key in seen:
                continue
            seen.add(key)
            seen.add((neg_c, (-a0) % d))
            if c0 == 0 and ((a0 - 1) % d == 0 or (a0 + 1) % d == 0):
                # c = 0, a = +-1 is infinity itself
                continue
            reps.append(_realize(a0, c0, d, N))
    return reps


def _realize(a0: int, c0: int, d: int, N: int) -> Cusp:
    c = c0 if c0 else N
    t = 0
    while True:
        a = a0 + t * d
        if gcd(a, c) == 1:
            return Cusp(a, c)
        t += 1


def order_at_cusp(g: int, cusp: Cusp, N: int) -> Fraction:
    """Order of ``E_g`` at the finite cusp ``a/c``: ``d * B2({a g / d}) / 2``, ``d = gcd(c, N)``."""
    if cusp.is_infinity:
        raise ValueError("the order at infinity is read off the q-expansion")
    d = gcd(cusp.c, N)
    r = (cusp.a * g) % d
    return Fraction(6 * r * r - 6 * r * d + d * d, 12 * d)


def product_order(p: EProduct, cusp: Cusp) -> Fraction:
    """Order of an E-product at ``cusp``; at infinity this is the leading q-exponent."""
    if p.eta:
        raise ModularityError("eta factor present; product is not a function on Gamma_1(N)")
    if cusp.is_infinity:
        return p.total_qshift()
    return sum((e * order_at_cusp(g, cusp, p.level) for g, e in p.factors), Fraction(0))


def modularity_defect(p: EProduct) -> str | None:
    """``None`` if ``p`` is a modular function on Gamma_1(N), else the reason."""
    N = p.level
    if p.eta:
        return f"eta exponent {p.eta} is nonzero"
    if p.qpower:
        return f"stray factor q^{p.qpower}"
    for g, e in p.factors:
        if e.denominator != 1:
            return f"half-integral exponent on E_{g}"
    s = sum(e for _, e in p.factors)
    if s % 12:
        return f"sum of exponents {s} is not divisible by 12"
    y = 2 * N if N % 2 == 0 else N
    s2 = sum(g * g * e for g, e in p.factors)
    if s2 % y:
        return f"sum g^2 a_g = {s2} is not divisible by {y}"
    return None


def is_modular_function(p: EProduct) -> bool:
    return modularity_defect(p) is None


def valence_bound(terms: Sequence[EProduct], cusps: Iterable[Cusp] | None = None) -> int:
    """Coefficient count bound for ``sum(terms) = 0``.

    If the q-expansion of the sum vanishes through ``q^U`` with
    ``U = -sum over finite cusps of min_j ord(term_j)`` the identity holds.
    """
    if not terms:
        raise ValueError("empty sum")
    N = terms[0].level
    for t in terms:
        if t.level != N:
            raise ValueError("all terms must share one level")
        why = modularity_defect(t)
        if why:
            raise ModularityError(f"{t}: {why}")
    if cusps is None:
        cusps = cusp_representatives(N)
    total = Fraction(0)
    for cusp in cusps:
        if cusp.is_infinity:
            continue
        total += min(product_order(t, cusp) for t in terms)
    return -floor(total)
