"""The Weierstrass three-term theta relation and its specializations.

With ``theta(a; q) = (a, q/a; q)_inf`` the relation reads::

    theta(xy) theta(x/y) theta(uv) theta(u/v) - theta(xv) theta(x/v) theta(uy) theta(u/y)
        = (u/y) theta(yv) theta(y/v) theta(xu) theta(x/u)

All arguments here are signed monomials ``+-q^e`` and the nome is ``q^base``.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .series import QSeries, as_fraction
from .thetaprod import (EProduct, RawProduct, ThetaError, ThetaMonomial,
                        eprod_expand, theta_normalize, theta_raw)


@dataclass(frozen=True)
class SignedMonomial:
    sign: int
    exponent: Fraction

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        object.__setattr__(self, "exponent", as_fraction(self.exponent))

    def __mul__(self, other: "SignedMonomial") -> "SignedMonomial":
        return SignedMonomial(self.sign * other.sign, self.exponent + other.exponent)

    def __truediv__(self, other: "SignedMonomial") -> "SignedMonomial":
        return SignedMonomial(self.sign * other.sign, self.exponent - other.exponent)

    def __pow__(self, k: int) -> "SignedMonomial":
        return SignedMonomial(self.sign ** k, self.exponent * k)

    def __str__(self):
        e = self.exponent
        body = "1" if e == 0 else ("q" if e == 1 else f"q^{e}")
        return ("-" if self.sign < 0 else "") + body

    @classmethod
    def parse(cls, text: str) -> "SignedMonomial":
        m = re.fullmatch(r"\s*(-)?\s*(?:q(?:\^\(?(-?\d+(?:/\d+)?)\)?)?|(1))\s*", text)
        if not m:
            raise ValueError(f"cannot parse monomial {text!r}")
        sign = -1 if m.group(1) else 1
        if m.group(3):
            return cls(sign, 0)
        return cls(sign, Fraction(m.group(2)) if m.group(2) else Fraction(1))


def q_(e, sign: int = 1) -> SignedMonomial:
    return SignedMonomial(sign, e)


@dataclass(frozen=True)
class WeierstrassInstance:
    base: int
    u: SignedMonomial
    v: SignedMonomial
    x: SignedMonomial
    y: SignedMonomial

    def __str__(self):
        return f"base={self.base} u={self.u} v={self.v} x={self.x} y={self.y}"

    @classmethod
    def parse(cls, text: str) -> "WeierstrassInstance":
        """Parse ``base=35 u=q^10 v=q^3 x=q^14 y=q^6``."""
        f = dict(tok.split("=", 1) for tok in text.split())
        return cls(int(f["base"]), *(SignedMonomial.parse(f[k]) for k in "uvxy"))

    def arguments(self) -> list[list[SignedMonomial]]:
        """Theta arguments of the three products (first, second, right-hand)."""
        u, v, x, y = self.u, self.v, self.x, self.y
        return [[x * y, x / y, u * v, u / v],
                [x * v, x / v, u * y, u / y],
                [y * v, y / v, x * u, x / u]]

    def prefactors(self) -> list[SignedMonomial]:
        """Coefficients in ``first - second = prefactor * third`` moved to one side."""
        return [q_(0), q_(0, -1), (self.u / self.y) * q_(0, -1)]


@dataclass
class ThetaTerm:
    """``scalar * q^shift * prod theta(arg; q^base)`` with canonical arguments, or zero."""

    scalar: int
    shift: Fraction
    thetas: tuple
    zero_factor: str | None = None

    def is_zero(self) -> bool:
        return self.zero_factor is not None

    def raw(self, base) -> RawProduct:
        out = RawProduct(Fraction(self.scalar), self.shift, Counter())
        for m in self.thetas:
            out = out * theta_raw(m)
        return out

    def eproduct(self, base, extra_eta: int = 0) -> EProduct:
        raw = self.raw(base)
        if extra_eta:
            raw.pochs[(1, Fraction(base), Fraction(base))] += extra_eta
        return raw.to_eproduct()

    def __str__(self):
        if self.is_zero():
            return f"0 [{self.zero_factor}]"
        body = " ".join(str(t) for t in self.thetas)
        return f"{self.scalar} * q^{self.shift} * {body}"


def theta_term(prefactor: SignedMonomial, args: Sequence[SignedMonomial], base) -> ThetaTerm:
    scalar, shift = prefactor.sign, prefactor.exponent
    thetas = []
    for a in args:
        try:
            s, sh, canon = theta_normalize(ThetaMonomial(base, a.exponent, a.sign))
        except ThetaError:
            return ThetaTerm(0, Fraction(0), (), f"theta({a}; q^{base}) = 0")
        scalar *= s
        shift += sh
        thetas.append(canon)
    thetas.sort(key=lambda m: (m.exponent, m.sign))
    return ThetaTerm(scalar, shift, tuple(thetas))


def tadd_terms(inst: WeierstrassInstance) -> list[ThetaTerm]:
    """The three signed terms ``X + Y + Z = 0`` of the relation."""
    return [theta_term(p, a, inst.base) for p, a in zip(inst.prefactors(), inst.arguments())]


def _term_series(t: ThetaTerm, base, T) -> QSeries:
    if t.is_zero():
        return QSeries.zero(T)
    return eprod_expand(t.eproduct(base), T)


def instantiate_tadd(inst: WeierstrassInstance, T) -> dict:
    """Expand the three products and check the relation through ``q^T`` (exclusive)."""
    terms = tadd_terms(inst)
    total = QSeries.zero(T)
    for t in terms:
        total = total + _term_series(t, inst.base, T)
    diff = total.first_difference(QSeries.zero(T))
    report = {
        "instance": str(inst),
        "T": _fmt(as_fraction(T)),
        "terms": [str(t) for t in terms],
        "zero_factors": [t.zero_factor for t in terms if t.is_zero()],
        "holds": diff is None,
    }
    if diff is not None:
        report["first_difference"] = _fmt(diff[0])
    return report


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# -- the two specializations ---------------------------------------------


def threl_sides(which: int, N: int, u: SignedMonomial) -> tuple[list[EProduct], EProduct]:
    """Both sides of the two-term to one-product reductions.

    ``which = 1`` specializes ``x = q^N, y = u^2/q^N, v = q^N/u``;
    ``which = 2`` specializes ``x = q^2N, y = u^2/q^2N, v = q^2N/u`` (nome ``q^3N``).
    """
    M = 3 * N
    u3 = u ** 3
    if which == 1:
        pairs = [(q_(0), u3 / q_(N)), (q_(N) / u, u3 / q_(2 * N))]
        rhs_num, rhs_den = (u ** 2) / q_(N), u
    elif which == 2:
        pairs = [(q_(0), u3 / q_(2 * N)), (q_(0, -1) * q_(3 * N) / u ** 2, u3 / q_(4 * N))]
        rhs_num, rhs_den = (u ** 2) / q_(2 * N), u / q_(N)
    else:
        raise ValueError("which must be 1 or 2")
    lhs = []
    for pre, arg in pairs:
        t = theta_term(pre, [arg], M)
        if t.is_zero():
            raise ThetaError(f"degenerate left-hand factor: {t.zero_factor}")
        lhs.append(t.eproduct(M, extra_eta=1))
    num = theta_term(q_(0), [rhs_num], N)
    den = theta_term(q_(0), [rhs_den], N)
    for t in (num, den):
        if t.is_zero():
            raise ThetaError(f"degenerate right-hand factor: {t.zero_factor}")
    rhs = num.eproduct(N, extra_eta=1) / den.eproduct(N)
    return lhs, rhs


def reduce_threl(which: int, N: int, u: SignedMonomial, T) -> tuple[list[EProduct], EProduct, bool]:
    lhs, rhs = threl_sides(which, N, u)
    total = QSeries.zero(T)
    for t in lhs:
        total = total + eprod_expand(t, T)
    ok = total.first_difference(eprod_expand(rhs, T)) is None
    return lhs, rhs, ok


# -- exhaustive search ----------------------------------------------------


def eproduct_value(p: EProduct, q: float, terms: int = 400) -> float:
    """Numerical value of an E-product at real ``0 < q < 1``."""
    counts = p.pochhammer_counts()
    N = p.level
    logv = 0.0
    sign = 1.0
    for r, c in counts.items():
        m = r
        while m < terms:
            f = 1.0 - q ** m
            logv += c * np.log(abs(f))
            m += N
    val = float(p.scalar) * q ** float(p.total_qshift()) * np.exp(logv) * sign
    return val


def _theta_table(base: int, lo: int, hi: int, q: float) -> dict:
    """theta(+-q^e; q^base) for integer e in [lo, hi] (exact zeros where e = 0 mod base)."""
    Q = q ** base
    K = int(np.ceil(60 / -np.log10(Q))) + 2 if Q < 1 else 200
    out = {}
    for s in (1, -1):
        for e in range(lo, hi + 1):
            z = s * q ** e
            val = 1.0
            for k in range(K):
                val *= (1 - z * Q ** k) * (1 - Q ** (k + 1) / z)
            out[(s, e)] = 0.0 if (s == 1 and e % base == 0) else val
    return out


def search_specialization(target: Sequence[EProduct], base: int, bound: int, T,
                          signs: Sequence[int] = (1, -1)) -> list[WeierstrassInstance]:
    """All ``(u, v, x, y)`` with exponents in ``[0, bound]`` collapsing ``target[0] + target[1]``.

    A hit is an instance with two of its three terms ``X, Y`` (nonzero) in
    the ratio ``target[0] : target[1]``; then ``target[0] + target[1]`` is a
    single product.  Candidates are screened numerically at two values of
    ``q`` and every survivor is confirmed structurally and by expansion.
    """
    A, B = target
    hits = []
    vars_ = [(s, e) for s in signs for e in range(bound + 1)]
    n = len(vars_)
    sv = np.array([s for s, _ in vars_], dtype=float)
    ev = np.array([e for _, e in vars_], dtype=float)
    candidates = None
    for q in (0.31, 0.57):
        tab = _theta_table(base, -bound, 2 * bound, q)
        a_val, b_val = eproduct_value(A, q), eproduct_value(B, q)
        # F[i, j] = theta(w_i w_j) theta(w_i / w_j)
        F = np.empty((n, n))
        for i, (si, ei) in enumerate(vars_):
            for j, (sj, ej) in enumerate(vars_):
                F[i, j] = tab[(si * sj, ei + ej)] * tab[(si * sj, ei - ej)]
        mono = sv[:, None] * sv[None, :] * q ** (ev[:, None] - ev[None, :])  # w_i / w_j
        found = set()
        for xi in range(n):
            for yi in range(n):
                # axes: u, v
                X = F[xi, yi] * F                          # theta(xy)theta(x/y)theta(uv)theta(u/v)
                Y = -(F[xi, :][None, :] * F[:, yi][:, None])  # -theta(xv)theta(x/v)theta(uy)theta(u/y)
                Z = -(mono[:, yi][:, None] * F[yi, :][None, :] * F[xi, :][:, None])
                for P, Qv in ((X, Y), (X, Z), (Y, Z)):
                    for L, R in ((P, Qv), (Qv, P)):
                        lhs = a_val * R
                        rhs = b_val * L
                        ok = (np.abs(lhs - rhs) <= 1e-8 * (np.abs(lhs) + np.abs(rhs))) & (L != 0) & (R != 0)
                        for ui, vi in zip(*np.nonzero(ok)):
                            found.add((int(ui), int(vi), xi, yi))
        candidates = found if candidates is None else candidates & found
    for ui, vi, xi, yi in sorted(candidates, key=lambda c: (c[2], c[3], c[0], c[1])):
        inst = WeierstrassInstance(base, *(SignedMonomial(*vars_[i]) for i in (ui, vi, xi, yi)))
        if _confirm(inst, A, B, T):
            hits.append(inst)
    return hits


def _confirm(inst: WeierstrassInstance, A: EProduct, B: EProduct, T) -> bool:
    terms = tadd_terms(inst)
    prods = [None if t.is_zero() else t.eproduct(inst.base) for t in terms]
    for i in range(3):
        for j in range(3):
            if i == j or prods[i] is None or prods[j] is None:
                continue
            if (A * prods[j]).same_product(B * prods[i]):
                return instantiate_tadd(inst, T)["holds"]
    return False


# -- Euler's odd/distinct relation ------------------------------------------


def rewrite_euler(raw: RawProduct) -> RawProduct:
    """Apply ``1/(q^M; q^2M) = (-q^M; q^M)`` and ``1/(-q^M; q^2M) = (q^M; q^2M)(-q^2M; q^2M)``.

    Every inverted factor of either shape is replaced; the result is the same
    formal product written differently.
    """
    out = Counter()
    for (sign, e, M), c in raw.pochs.items():
        e, M = as_fraction(e), as_fraction(M)
        if c < 0 and M == 2 * e and e > 0:
            if sign > 0:
                out[(-1, e, e)] += -c
            else:
                out[(1, e, M)] += -c
                out[(-1, M, M)] += -c
            continue
        out[(sign, e, M)] += c
    return RawProduct(raw.scalar, raw.qexp, Counter({k: v for k, v in out.items() if v}))
