"""Theta-quotient building blocks.

``E_g(q; N) = q^(N*B2(g/N)/2) (q^g, q^(N-g); q^N)_inf`` with the second
Bernoulli polynomial ``B2(x) = x^2 - x + 1/6``.  An :class:`EProduct` is
``scalar * q^qpower * (q^N; q^N)^eta * prod_g E_g^a_g``.

Products written in q-Pochhammer notation (possibly with ``-q^e``
arguments or exponents outside ``(0, M)``) are parsed into a
:class:`RawProduct` and then rewritten at a chosen level.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping

from .series import QSeries, as_fraction, product_expand


class ThetaError(ValueError):
    """Malformed or degenerate theta product."""


class NotAnEProduct(ThetaError):
    """A Pochhammer product that does not pair up into E_g factors."""


def bernoulli2(x: Fraction) -> Fraction:
    return x * x - x + Fraction(1, 6)


def prefactor(g: int, N: int) -> Fraction:
    """Exponent of the q-power built into ``E_g`` at level ``N``."""
    return N * bernoulli2(Fraction(g, N)) / 2


def _canon_g(g: int, N: int) -> int:
    r = g % N
    if r == 0:
        raise ThetaError(f"E_{g} at level {N} is degenerate (g = 0 mod N)")
    return min(r, N - r)


@dataclass(frozen=True)
class EProduct:
    level: int
    factors: tuple = ()
    scalar: Fraction = Fraction(1)
    qpower: Fraction = Fraction(0)
    eta: int = 0

    def __post_init__(self):
        if self.level < 1:
            raise ThetaError("level must be positive")
        object.__setattr__(self, "scalar", as_fraction(self.scalar))
        object.__setattr__(self, "qpower", as_fraction(self.qpower))
        merged: dict[int, Fraction] = {}
        items = self.factors.items() if isinstance(self.factors, Mapping) else self.factors
        for g, a in items:
            key = _canon_g(int(g), self.level)
            merged[key] = merged.get(key, Fraction(0)) + as_fraction(a)
        for g, a in merged.items():
            if a.denominator != 1 and not (2 * g == self.level and a.denominator == 2):
                raise ThetaError(f"non-integral exponent {a} on E_{g} at level {self.level}")
        object.__setattr__(
            self, "factors", tuple(sorted((g, a) for g, a in merged.items() if a != 0))
        )

    @classmethod
    def constant(cls, c, level: int = 1) -> "EProduct":
        return cls(level, (), as_fraction(c))

    @property
    def factor_map(self) -> dict[int, Fraction]:
        return dict(self.factors)

    def is_constant(self) -> bool:
        return not self.factors and self.eta == 0 and self.qpower == 0

    def prefactor_exponent(self) -> Fraction:
        return sum((a * prefactor(g, self.level) for g, a in self.factors), Fraction(0))

    def total_qshift(self) -> Fraction:
        """Exponent of the overall q-power once every E_g is written as a Pochhammer product."""
        return self.qpower + self.prefactor_exponent()

    def pochhammer_counts(self) -> dict[int, int]:
        """Exponent of ``(q^r; q^N)_inf`` for ``r`` in ``1..N`` (``r = N`` is the eta factor)."""
        N = self.level
        counts: dict[int, int] = {}
        for g, a in self.factors:
            if 2 * g == N:
                counts[g] = counts.get(g, 0) + int(2 * a)
            else:
                counts[g] = counts.get(g, 0) + int(a)
                counts[N - g] = counts.get(N - g, 0) + int(a)
        if self.eta:
            counts[N] = counts.get(N, 0) + self.eta
        return {r: c for r, c in counts.items() if c}

    @classmethod
    def from_pochhammer_counts(cls, level: int, counts: Mapping[int, int], scalar=1, qshift=0) -> "EProduct":
        """Inverse of :meth:`pochhammer_counts`.

        ``qshift`` is the explicit q-power in front of the raw Pochhammer
        product; the E_g prefactors are compensated in ``qpower``.
        """
        N = level
        factors: dict[int, Fraction] = {}
        for r, c in counts.items():
            if not 1 <= r <= N:
                raise ThetaError(f"residue {r} outside 1..{N}")
        for r in range(1, N // 2 + 1):
            c = counts.get(r, 0)
            if 2 * r == N:
                if c:
                    factors[r] = Fraction(c, 2)
                continue
            if c != counts.get(N - r, 0):
                raise NotAnEProduct(
                    f"(q^{r};q^{N}) has exponent {c} but (q^{N - r};q^{N}) has {counts.get(N - r, 0)}"
                )
            if c:
                factors[r] = Fraction(c)
        p = cls(level, factors, scalar, 0, counts.get(N, 0))
        return cls(level, p.factors, scalar, as_fraction(qshift) - p.prefactor_exponent(), p.eta)

    # -- algebra ----------------------------------------------------------

    def _with(self, **kw) -> "EProduct":
        data = dict(level=self.level, factors=self.factors, scalar=self.scalar,
                    qpower=self.qpower, eta=self.eta)
        data.update(kw)
        return EProduct(**data)

    def scale(self, c) -> "EProduct":
        return self._with(scalar=self.scalar * as_fraction(c))

    def __neg__(self):
        return self.scale(-1)

    def times_q(self, e) -> "EProduct":
        return self._with(qpower=self.qpower + as_fraction(e))

    def __mul__(self, other: "EProduct") -> "EProduct":
        if not isinstance(other, EProduct):
            return self.scale(other)
        a, b = self, other
        if a.level != b.level:
            N = lcm(a.level, b.level)
            a, b = blowup(a, N), blowup(b, N)
        f = a.factor_map
        for g, e in b.factors:
            f[g] = f.get(g, 0) + e
        return EProduct(a.level, f, a.scalar * b.scalar, a.qpower + b.qpower, a.eta + b.eta)

    def inverse(self) -> "EProduct":
        if self.scalar == 0:
            raise ZeroDivisionError("inverse of a zero product")
        return EProduct(self.level, tuple((g, -a) for g, a in self.factors),
                        1 / self.scalar, -self.qpower, -self.eta)

    def __truediv__(self, other: "EProduct") -> "EProduct":
        return self * other.inverse()

    def same_product(self, other: "EProduct") -> bool:
        """Structural equality after bringing both to a common level."""
        a, b = self, other
        if a.level != b.level:
            N = lcm(a.level, b.level)
            a, b = blowup(a, N), blowup(b, N)
        return a == b

    def __str__(self):
        return format_eproduct(self)


def blowup(p: EProduct, target: int) -> EProduct:
    """Rewrite ``p`` at level ``target`` (a multiple of ``p.level``)."""
    N = p.level
    if target % N:
        raise ThetaError(f"target level {target} is not a multiple of {N}")
    if target == N:
        return p
    k = target // N
    counts: dict[int, int] = {}
    for r, c in p.pochhammer_counts().items():
        for j in range(k):
            h = r + j * N
            counts[h] = counts.get(h, 0) + c
    return EProduct.from_pochhammer_counts(target, counts, p.scalar, p.total_qshift())


def eprod_expand(p: EProduct, T) -> QSeries:
    """q-expansion of ``p`` exact below ``q^T``."""
    T = as_fraction(T)
    shift = p.total_qshift()
    counts = p.pochhammer_counts()
    N = p.level
    rel = T - shift
    n = max(0, -(-rel.numerator // rel.denominator))
    f = {}
    for m in range(1, n):
        c = counts.get(m % N or N, 0)
        if c:
            f[m] = c
    s = product_expand(f, n).shift(shift)
    if p.scalar != 1:
        c = p.scalar
        s = s.scale(c.numerator if c.denominator == 1 else c)
    return s


# -- theta monomials -----------------------------------------------------


@dataclass(frozen=True)
class ThetaMonomial:
    """``theta(sign*q^a; q^M) = (sign*q^a, sign*q^(M-a); q^M)_inf``."""

    level: Fraction
    exponent: Fraction
    sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, "level", as_fraction(self.level))
        object.__setattr__(self, "exponent", as_fraction(self.exponent))
        if self.level <= 0:
            raise ThetaError("theta modulus must be positive")
        if self.sign not in (1, -1):
            raise ThetaError("sign must be +1 or -1")

    def __str__(self):
        s = "-" if self.sign < 0 else ""
        return f"theta({s}q^{self.exponent}; q^{self.level})"


def theta_normalize(m: ThetaMonomial):
    """Return ``(scalar, shift, canonical)`` with ``m = scalar*q^shift*canonical``.

    Uses ``theta(p z; p) = -z^-1 theta(z; p)`` and ``theta(p/z; p) = theta(z; p)``.
    The canonical exponent lies in ``[0, M/2]``.
    """
    M, a, s = m.level, m.exponent, m.sign
    scalar, shift = 1, Fraction(0)
    if a < 0:
        a = M - a
    while a >= M:
        # theta(s q^a) = -s q^(M-a) theta(s q^(a-M))
        scalar *= -s
        shift += M - a
        a -= M
    if 2 * a > M:
        a = M - a
    if a == 0 and s == 1:
        raise ThetaError(f"{m} vanishes identically (theta(1) = 0)")
    return scalar, shift, ThetaMonomial(M, a, s)


def theta_raw(m: ThetaMonomial) -> "RawProduct":
    pochs = Counter()
    pochs[(m.sign, m.exponent, m.level)] += 1
    pochs[(m.sign, m.level - m.exponent, m.level)] += 1
    return RawProduct(1, 0, pochs)


def theta_expand(m: ThetaMonomial, T) -> QSeries:
    scalar, shift, canon = theta_normalize(m)
    return eprod_expand(theta_raw(canon).to_eproduct(), as_fraction(T) - shift).shift(shift).scale(scalar)


# -- raw Pochhammer products ----------------------------------------------


@dataclass
class RawProduct:
    """``scalar * q^qexp * prod (sign*q^e; q^M)_inf^count``, keyed by ``(sign, e, M)``."""

    scalar: Fraction = Fraction(1)
    qexp: Fraction = Fraction(0)
    pochs: Counter = field(default_factory=Counter)

    def __mul__(self, other: "RawProduct") -> "RawProduct":
        c = Counter(self.pochs)
        c.update(other.pochs)
        return RawProduct(as_fraction(self.scalar) * as_fraction(other.scalar),
                          as_fraction(self.qexp) + as_fraction(other.qexp), c)

    def inverse(self) -> "RawProduct":
        return RawProduct(1 / as_fraction(self.scalar), -as_fraction(self.qexp),
                          Counter({k: -v for k, v in self.pochs.items()}))

    def natural_level(self) -> int:
        L = 1
        for (sign, e, M), c in self.pochs.items():
            if not c:
                continue
            M = as_fraction(M)
            if M.denominator != 1:
                raise ThetaError(f"non-integral Pochhammer modulus {M}")
            L = lcm(L, int(M) * (2 if sign < 0 else 1))
        return L

    def to_eproduct(self, level: int | None = None) -> EProduct:
        if level is None:
            level = self.natural_level()
        scalar = as_fraction(self.scalar)
        qexp = as_fraction(self.qexp)
        unsigned: Counter = Counter()
        for (sign, e, M), c in self.pochs.items():
            if not c:
                continue
            e, M = as_fraction(e), as_fraction(M)
            if sign < 0 and e == 0:
                # (-1; p) = 2 (-p; p)
                scalar *= Fraction(2) ** c
                e = M
            if sign < 0:
                # (-x; p) = (x^2; p^2) / (x; p)
                unsigned[(2 * e, 2 * M)] += c
                unsigned[(e, M)] -= c
            else:
                unsigned[(e, M)] += c
        counts: dict[int, int] = {}
        finite: Counter = Counter()
        for (e, M), c in unsigned.items():
            if not c:
                continue
            if e.denominator != 1 or M.denominator != 1:
                raise ThetaError(f"non-integral exponent in (q^{e};q^{M})")
            e, M = int(e), int(M)
            if level % M:
                raise ThetaError(f"level {level} is not a multiple of modulus {M}")
            r = e % M or M
            # (q^e; q^M) = (q^r; q^M) * prod over the finitely many factors between e and r
            if e > r:
                for x in range(r, e, M):
                    finite[x] -= c
            elif e < r:
                for x in range(e, r, M):
                    if x == 0:
                        raise ThetaError("Pochhammer product contains the factor (1 - q^0) = 0")
                    finite[x] += c
            for j in range(level // M):
                h = r + j * M
                counts[h] = counts.get(h, 0) + c
        # (1 - q^-d) = -q^-d (1 - q^d)
        merged = Counter()
        for x, c in finite.items():
            if not c:
                continue
            if x < 0:
                scalar *= (-1) ** (c % 2)
                qexp += x * c
            merged[abs(x)] += c
        for d, c in merged.items():
            if c:
                raise NotAnEProduct(f"leftover finite factor (1 - q^{d})^{c}")
        return EProduct.from_pochhammer_counts(level, counts, scalar, qexp)


_POCH_RE = re.compile(r"\(([^;()]*);\s*q(?:\^(\d+))?\s*\)(?:_inf(?:ty)?)?(?:\^(-?\d+))?")
_ARG_RE = re.compile(r"^(-)?q(?:\^(\(?-?[\d/]+\)?))?$|^(-)?1$")


def _parse_exp(text: str | None) -> Fraction:
    if text is None:
        return Fraction(1)
    return Fraction(text.strip("()"))


def parse_pochhammer(text: str) -> RawProduct:
    """Parse q-Pochhammer notation such as ``q^4 (q,q^6,q^7;q^7) / (q,q^4;q^5)``.

    One ``/`` separates numerator and denominator.  Each side is a
    whitespace/``*`` separated list of factors: an optional rational scalar,
    ``q^e`` powers and ``(x1,x2,...;q^M)`` groups with optional ``^k``.
    An argument may be ``q^e``, ``-q^e``, ``q`` or ``-1``.
    """
    parts = _split_top(text, "/")
    if len(parts) > 2:
        raise ThetaError(f"more than one '/' in {text!r}")
    num = _parse_side(parts[0])
    if len(parts) == 2:
        num = num * _parse_side(parts[1]).inverse()
    return num


def _split_top(text: str, sep: str) -> list[str]:
    depth, out, cur = 0, [], []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def _parse_side(text: str) -> RawProduct:
    prod = RawProduct()
    pos = 0
    text = text.strip()
    while pos < len(text):
        ch = text[pos]
        if ch in " *\t":
            pos += 1
            continue
        m = _POCH_RE.match(text, pos)
        if m:
            args, mod, power = m.group(1), m.group(2), m.group(3)
            M = Fraction(int(mod)) if mod else Fraction(1)
            k = int(power) if power else 1
            for arg in args.split(","):
                arg = arg.strip()
                am = _ARG_RE.match(arg)
                if not am:
                    raise ThetaError(f"cannot parse Pochhammer argument {arg!r}")
                if arg.lstrip("-") == "1":
                    sign = -1 if arg.startswith("-") else 1
                    e = Fraction(0)
                else:
                    sign = -1 if am.group(1) else 1
                    e = _parse_exp(am.group(2))
                prod.pochs[(sign, e, M)] += k
            pos = m.end()
            continue
        m = re.compile(r"q(?:\^(\(?-?[\d/]+\)?))?").match(text, pos)
        if m and m.group(0):
            prod.qexp = as_fraction(prod.qexp) + _parse_exp(m.group(1))
            pos = m.end()
            continue
        m = re.compile(r"-?\d+(?:/\d+)?").match(text, pos)
        if m:
            prod.scalar = as_fraction(prod.scalar) * Fraction(m.group(0))
            pos = m.end()
            continue
        if ch == "-":
            prod.scalar = -as_fraction(prod.scalar)
            pos += 1
            continue
        raise ThetaError(f"unexpected {text[pos:pos + 10]!r} in product {text!r}")
    return prod


# -- text serialization of EProducts ---------------------------------------


def _fmt_frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_eproduct(p: EProduct) -> str:
    """Serialize as ``[scalar *] N: E7 E8^2 / E4 [* q^e] [* eta^k]``."""
    num = [(g, a) for g, a in p.factors if a > 0]
    den = [(g, -a) for g, a in p.factors if a < 0]

    def side(items):
        if not items:
            return "1"
        return " ".join(f"E{g}" if a == 1 else f"E{g}^{_fmt_frac(a)}" for g, a in items)

    text = f"{p.level}: {side(num)}"
    if den:
        text += f" / {side(den)}"
    if p.qpower:
        text += f" * q^{_fmt_frac(p.qpower)}"
    if p.eta:
        text += f" * eta^{p.eta}"
    if p.scalar != 1:
        text = f"{_fmt_frac(p.scalar)} * {text}"
    return text


_EFACTOR = re.compile(r"^E(\d+)(?:\^(\d+(?:/2)?))?$")


def parse_eproduct(text: str) -> EProduct:
    """Inverse of :func:`format_eproduct`."""
    if ":" not in text:
        raise ThetaError(f"missing ':' after the level in {text!r}")
    head, body = text.split(":", 1)
    head_parts = [h.strip() for h in head.split("*")]
    scalar = Fraction(1)
    if len(head_parts) == 2:
        scalar = Fraction(head_parts[0])
    elif len(head_parts) != 1:
        raise ThetaError(f"malformed head {head!r}")
    try:
        level = int(head_parts[-1])
    except ValueError:
        raise ThetaError(f"level must be an integer, got {head_parts[-1]!r}") from None
    chunks = [c.strip() for c in body.split("*")]
    frac = chunks[0]
    qpower, eta = Fraction(0), 0
    for extra in chunks[1:]:
        if extra.startswith("q^"):
            qpower += Fraction(extra[2:])
        elif extra == "q":
            qpower += 1
        elif extra.startswith("eta^"):
            eta += int(extra[4:])
        elif extra == "eta":
            eta += 1
        else:
            raise ThetaError(f"unexpected factor {extra!r}")
    sides = _split_fraction(frac)
    factors: dict[int, Fraction] = {}
    for sign, side in zip((1, -1), sides):
        for tok in side.split():
            if tok == "1":
                continue
            m = _EFACTOR.match(tok)
            if not m:
                raise ThetaError(f"bad E-factor {tok!r}")
            g = int(m.group(1))
            a = Fraction(m.group(2)) if m.group(2) else Fraction(1)
            factors[g] = factors.get(g, 0) + sign * a
    return EProduct(level, factors, scalar, qpower, eta)


_FRAC_TOKEN = re.compile(r"E\d+(?:\^\d+(?:/\d+)?)?|/|[^\s/]+")


def _split_fraction(frac: str) -> list[str]:
    # the only '/' not inside an exponent separates numerator and denominator
    tokens = _FRAC_TOKEN.findall(frac)
    if tokens.count("/") > 1:
        raise ThetaError(f"more than one '/' in {frac!r}")
    for i, tok in enumerate(tokens):
        if tok == "/":
            return [" ".join(tokens[:i]), " ".join(tokens[i + 1:])]
    return [frac]


def eproducts_from_text(lines: Iterable[str]) -> list[EProduct]:
    return [parse_eproduct(x) for x in lines if x.strip()]
