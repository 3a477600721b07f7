"""Generating functions of square sequences and their theta-product form.

For ``K`` and ``b^2`` let ``a_0 < a_1 < ...`` be the ``m`` with ``K m + b^2``
a perfect square.  Writing ``K m + b^2 = S^2`` with ``S = R k + r`` for a
residue class ``r`` of the minimal period ``R``, the signed generating
function is ``sum s_r * eps^k * q^((S^2 - b^2)/K)``.  Classes ``r`` and
``R - r`` fold into one bilateral sum, which the Jacobi triple product
turns into a theta product.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .prover import IdentityStatement
from .series import QSeries, as_fraction
from .thetaprod import (EProduct, RawProduct, ThetaMonomial, parse_pochhammer,
                        theta_normalize, theta_raw)


class PairingError(ValueError):
    """Residue classes cannot be folded into bilateral sums."""


class FamilyDomainError(ValueError):
    """Parameters outside the hypotheses of a parametric family."""


def solve_residues(K: int, bsq: int) -> tuple[int, list[int]]:
    """Minimal period ``R`` and the classes ``S mod R`` with ``S^2 = bsq (mod K)``."""
    if K < 1:
        raise ValueError("K must be positive")
    sols = {s for s in range(K) if (s * s - bsq) % K == 0}
    if not sols:
        return K, []
    for R in range(1, K + 1):
        if K % R:
            continue
        if all((s + R) % K in sols for s in sols):
            return R, sorted({s % R for s in sols})
    raise AssertionError("unreachable: K itself is a period")


def _sign_char(s: int) -> str:
    return "+" if s > 0 else "-"


@dataclass(frozen=True)
class SquareClassSpec:
    K: int
    bsq: int
    signs: tuple = ()
    alternating: bool | None = None

    def __post_init__(self):
        R, classes = solve_residues(self.K, self.bsq)
        object.__setattr__(self, "period", R)
        object.__setattr__(self, "classes", tuple(classes))
        signs = tuple(self.signs) if self.signs else (1,) * len(classes)
        if len(signs) != len(classes):
            raise ValueError(f"{len(signs)} signs given for {len(classes)} classes {classes}")
        if any(s not in (1, -1) for s in signs):
            raise ValueError("signs must be +1 or -1")
        object.__setattr__(self, "signs", signs)
        if self.alternating is None:
            object.__setattr__(self, "alternating", _infer_alternation(R, classes, signs))

    @classmethod
    def from_text(cls, text: str) -> "SquareClassSpec":
        """Parse ``K=840 bsq=361 signs=+,+,-,+,-,+,-,- [alt=yes|no]``."""
        fields = dict(tok.split("=", 1) for tok in text.split())
        signs = ()
        if "signs" in fields:
            signs = tuple(1 if c.strip() == "+" else -1 for c in fields["signs"].split(","))
        alt = None
        if "alt" in fields:
            alt = fields["alt"] in ("yes", "true", "1")
        return cls(int(fields["K"]), int(fields["bsq"]), signs, alt)

    def to_text(self) -> str:
        return f"K={self.K} bsq={self.bsq} signs={','.join(_sign_char(s) for s in self.signs)}"

    def sign_of(self, S: int) -> int:
        """Sign attached to the term with square root ``S >= 0``."""
        R = self.period
        k, r = divmod(S, R)
        s = self.signs[self.classes.index(r)]
        if self.alternating and k % 2:
            s = -s
        return s

    def term_roots(self, T) -> list[int]:
        """All ``S >= 0`` in the classes with exponent ``(S^2 - bsq)/K < T``, increasing."""
        T = as_fraction(T)
        bound = self.K * T + self.bsq
        out = []
        R = self.period
        k = 0
        while True:
            base = R * k
            if base * base >= bound:
                break
            for r in self.classes:
                S = base + r
                if S * S < bound:
                    out.append(S)
            k += 1
        return out

    def exponent(self, S: int) -> Fraction:
        return Fraction(S * S - self.bsq, self.K)


def _infer_alternation(R: int, classes, signs) -> bool:
    sign = dict(zip(classes, signs))
    votes = set()
    for r in classes:
        partner = (R - r) % R
        if partner not in sign:
            raise PairingError(f"class {r} has no partner {partner} mod {R}")
        if partner == r:
            continue
        votes.add(sign[partner] == -sign[r])
    if len(votes) > 1:
        raise PairingError("signs are neither consistently alternating nor constant across pairs")
    return votes.pop() if votes else True


@dataclass(frozen=True)
class BilateralSum:
    """``sign * sum_{k in Z} (+-1)^k q^(A k^2 + B k + C)``."""

    sign: int
    alternating: bool
    A: Fraction
    B: Fraction
    C: Fraction

    def exponent(self, k: int) -> Fraction:
        return self.A * k * k + self.B * k + self.C

    def is_integral(self) -> bool:
        return all(self.exponent(k).denominator == 1 for k in (0, 1, -1, 2, -2))

    def theta_form(self) -> RawProduct:
        """``sign * q^C (q^2A, +-q^(A+B), +-q^(A-B); q^2A)`` via the triple product."""
        Q = 2 * self.A
        z_sign = 1 if self.alternating else -1
        scalar, shift, canon = theta_normalize(ThetaMonomial(Q, self.A + self.B, z_sign))
        raw = theta_raw(canon)
        raw.pochs[(1, Q, Q)] += 1
        raw.scalar = Fraction(self.sign * scalar)
        raw.qexp = self.C + shift
        return raw

    def expand(self, T) -> QSeries:
        """Direct enumeration of the bilateral sum (reference, no products)."""
        T = as_fraction(T)
        terms: dict = {}
        k0 = int(-self.B / (2 * self.A))
        for direction in (1, -1):
            k = k0 if direction == 1 else k0 - 1
            while True:
                e = self.exponent(k)
                if e >= T and direction * (2 * self.A * k + self.B) > 0:
                    break
                if e < T:
                    c = self.sign * (-1 if self.alternating and k % 2 else 1)
                    terms[e] = terms.get(e, 0) + c
                k += direction
        return QSeries.from_dict(terms, T)


def build_bilateral(spec: SquareClassSpec) -> list[BilateralSum]:
    """Fold class ``r`` (``r < R - r``) with its partner ``R - r`` via ``k -> -k-1``."""
    R, K = spec.period, spec.K
    sign = dict(zip(spec.classes, spec.signs))
    eps = -1 if spec.alternating else 1
    out = []
    for r in spec.classes:
        partner = (R - r) % R
        if partner not in sign:
            raise PairingError(f"class {r} has no partner {partner} mod {R}")
        if partner == r:
            raise PairingError(f"class {r} is its own partner mod {R}")
        if sign[partner] != eps * sign[r]:
            raise PairingError(
                f"classes {r} and {partner}: signs {_sign_char(sign[r])},{_sign_char(sign[partner])} "
                f"do not fit {'alternating' if spec.alternating else 'constant'} pairing"
            )
        if r > partner:
            continue
        A = Fraction(R * R, K)
        B = Fraction(2 * r * R, K)
        C = Fraction(r * r - spec.bsq, K)
        out.append(BilateralSum(sign[r], bool(spec.alternating), A, B, C))
    return out


def compile_theta(spec: SquareClassSpec) -> list[EProduct]:
    return [b.theta_form().to_eproduct() for b in build_bilateral(spec)]


def brute_force_series(spec: SquareClassSpec, T) -> QSeries:
    """Reference expansion: test every ``m`` with ``K m + bsq >= 0`` for squareness."""
    T = as_fraction(T)
    K, bsq = spec.K, spec.bsq
    terms: dict = {}
    m = -(bsq // K)
    while m < T:
        v = K * m + bsq
        if v >= 0:
            S = isqrt(v)
            if S * S == v:
                terms[Fraction(m)] = terms.get(Fraction(m), 0) + spec.sign_of(S)
        m += 1
    return QSeries.from_dict(terms, T)


def sign_pattern(spec: SquareClassSpec, period_terms: int) -> list[int]:
    """Bit ``t(n)`` (sign ``(-1)^t(n)``) of the first ``period_terms`` terms."""
    if not spec.classes:
        raise ValueError("no residue classes")
    bits = []
    seen = set()
    R = spec.period
    k = 0
    while len(bits) < period_terms:
        for r in spec.classes:
            S = R * k + r
            e = spec.exponent(S)
            if e in seen:
                raise ValueError(f"two terms share the exponent {e}")
            seen.add(e)
            bits.append(0 if spec.sign_of(S) > 0 else 1)
        k += 1
    return bits[:period_terms]


# -- parametric families -------------------------------------------------

FAMILIES = ("24P-thm", "24P-cor", "3P-thm", "3P-cor", "16m")


def is_odd_prime_power(P: int) -> bool:
    if P < 3 or P % 2 == 0:
        return False
    p = next(d for d in range(3, P + 1, 2) if P % d == 0)
    while P % p == 0:
        P //= p
    return P == 1


def _check(cond: bool, message: str):
    if not cond:
        raise FamilyDomainError(message)


def family_case(family: str, P: int, a: int) -> tuple[int, dict, str]:
    """``(K, class -> sign, rhs text)`` for a family member; validates the hypotheses."""
    if family == "16m":
        _check(a in (1, 3), "a must be 1 or 3")
        return 16, {a: 1, 8 - a: 1}, f"(q^8;q^8) (-q^{4 + a};q^8) (-q^{4 - a};q^8)"
    _check(family in FAMILIES, f"unknown family {family!r}")
    _check(is_odd_prime_power(P), f"P = {P} is not an odd prime power")
    _check(P % 3 != 0, f"P = {P} is divisible by 3 (exponents would not be integral)")
    _check(a > 0 and gcd(a, P) == 1, f"a = {a} must be positive and coprime to P = {P}")
    _check(a % 3 != 0, f"a = {a} is divisible by 3 (exponents would not be integral)")
    c1 = (a - P) % 3 == 0
    if family.startswith("24P"):
        _check(a % 2 == 1, f"a = {a} must be odd")
        if family == "24P-thm":
            _check(a < P, f"need a < P, got a = {a}, P = {P}")
        else:
            _check(P < a < 2 * P, f"need P < a < 2P, got a = {a}, P = {P}")
        R = 6 * P
        if c1:
            cls = {a: 1, 2 * P - a: 1, 4 * P + a: -1, 6 * P - a: -1}
            rhs = (f"(q^{(P - a) // 3},q^{(2 * P + a) // 3},q^{P};q^{P}) / "
                   f"(q^{(P - a) // 6},q^{(5 * P + a) // 6};q^{P})")
        else:
            cls = {a: 1, 2 * P + a: 1, 4 * P - a: -1, 6 * P - a: -1}
            rhs = (f"(q^{(P + a) // 3},q^{(2 * P - a) // 3},q^{P};q^{P}) / "
                   f"(q^{(P + a) // 6},q^{(5 * P - a) // 6};q^{P})")
        return 24 * P, {r % R: s for r, s in cls.items()}, rhs
    if family == "3P-thm":
        _check(2 * a < P, f"need a < P/2, got a = {a}, P = {P}")
    else:
        _check(P < 2 * a < 2 * P, f"need P/2 < a < P, got a = {a}, P = {P}")
    R = 3 * P
    if c1:
        cls = {a: 1, P + a: 1, 2 * P - a: -1, 3 * P - a: -1}
        rhs = (f"(q^{(4 * P - 4 * a) // 3},q^{(2 * P + 4 * a) // 3},q^{2 * P};q^{2 * P}) / "
               f"(q^{(5 * P - 2 * a) // 3},q^{(P + 2 * a) // 3};q^{2 * P})")
    else:
        cls = {a: 1, P - a: 1, 2 * P + a: -1, 3 * P - a: -1}
        rhs = (f"(q^{(4 * P + 4 * a) // 3},q^{(2 * P - 4 * a) // 3},q^{2 * P};q^{2 * P}) / "
               f"(q^{(5 * P + 2 * a) // 3},q^{(P - 2 * a) // 3};q^{2 * P})")
    return 3 * P, {r % R: s for r, s in cls.items()}, rhs


def family_spec(family: str, P: int, a: int) -> tuple[SquareClassSpec, str]:
    K, class_signs, rhs = family_case(family, P, a)
    R, classes = solve_residues(K, a * a)
    if set(classes) != set(class_signs):
        raise FamilyDomainError(
            f"residue classes {classes} mod {R} differ from the case list {sorted(class_signs)}"
        )
    signs = tuple(class_signs[r] for r in classes)
    return SquareClassSpec(K, a * a, signs, family != "16m"), rhs


def parametric_instance(family: str, P: int, a: int) -> IdentityStatement:
    spec, rhs_text = family_spec(family, P, a)
    rhs = parse_pochhammer(rhs_text).to_eproduct()
    name = f"{family}:P={P},a={a}" if family != "16m" else f"16m:a={a}"
    return IdentityStatement(name, compile_theta(spec), rhs, tag=f"{spec.K}m+{a * a}",
                             meta={"family": family, "P": P, "a": a, "spec": spec,
                                   "rhs_text": rhs_text})


def admissible_parameters(family: str, pmax: int) -> list[tuple[int, int]]:
    if family == "16m":
        return [(0, 1), (0, 3)]
    out = []
    for P in range(3, pmax + 1, 2):
        for a in range(1, 2 * P):
            try:
                family_case(family, P, a)
            except FamilyDomainError:
                continue
            out.append((P, a))
    return out


def parametric_instances(family: str, pmax: int, a_values=None) -> list[IdentityStatement]:
    """All admissible members with ``P <= pmax`` (optionally restricted to ``a_values``)."""
    out = []
    for P, a in admissible_parameters(family, pmax):
        if a_values is not None and a not in a_values:
            continue
        out.append(parametric_instance(family, P, a))
    return out


def family_threl(family: str, P: int, a: int) -> tuple[int, int, Fraction]:
    """``(which, N, e)``: the two-term reduction with ``u = q^e`` that collapses the member."""
    family_case(family, P, a)
    c1 = (a - P) % 3 == 0
    if family.startswith("24P"):
        return 1, P, Fraction(5 * P + a, 6) if c1 else Fraction(5 * P - a, 6)
    if family.startswith("3P"):
        return 1, 2 * P, Fraction(5 * P - 2 * a, 3) if c1 else Fraction(5 * P + 2 * a, 3)
    raise FamilyDomainError(f"family {family!r} needs no two-term reduction")


def structural_check(family: str, P: int, a: int) -> dict:
    """Match the compiled products and the closed form against the reduction, symbolically.

    For ``16m`` the single bilateral sum must already be the closed form.
    """
    from .weierstrass import q_, threl_sides

    spec, rhs_text = family_spec(family, P, a)
    rhs = parse_pochhammer(rhs_text).to_eproduct()
    lhs = compile_theta(spec)
    if family == "16m":
        ok_lhs = len(lhs) == 1
        ok_rhs = ok_lhs and lhs[0].same_product(rhs)
        return {"family": family, "a": a, "lhs": ok_lhs, "rhs": ok_rhs, "ok": ok_lhs and ok_rhs}
    which, N, e = family_threl(family, P, a)
    red_lhs, red_rhs = threl_sides(which, N, q_(e))
    ok_lhs = len(red_lhs) == len(lhs) and all(
        any(x.same_product(y) for y in lhs) for x in red_lhs)
    ok_rhs = red_rhs.same_product(rhs)
    return {"family": family, "P": P, "a": a, "threl": which, "N": N, "u": f"q^{e}",
            "lhs": ok_lhs, "rhs": ok_rhs, "ok": ok_lhs and ok_rhs}
