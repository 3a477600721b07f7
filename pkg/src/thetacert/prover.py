"""Mechanical verification of theta-quotient identities on Gamma_1(N).

An identity ``sum(lhs_terms) = rhs`` is divided through by its first term,
every quotient is checked to be a modular function, the cusp orders give a
bound ``U`` and the identity holds iff the q-expansion of the normalized
sum vanishes through ``q^U``.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .modularcusp import (Cusp, cusp_representatives, modularity_defect,
                          product_order)
from .series import QSeries
from .thetaprod import EProduct, blowup, eprod_expand, format_eproduct

CERT_FORMAT = "thetacert-certificate/1"


class NormalizationError(ValueError):
    """Eta factors (or other non-E content) survive division by the first term."""


class StaleCertificateError(ValueError):
    """Certificate was produced for a different statement."""


@dataclass
class IdentityStatement:
    name: str
    lhs_terms: list
    rhs: EProduct
    tag: str = ""
    meta: dict = field(default_factory=dict)

    @property
    def level(self) -> int:
        N = self.rhs.level
        for t in self.lhs_terms:
            N = lcm(N, t.level)
        return N

    @property
    def working_level(self) -> int:
        """Level used for the cusp analysis: the smallest multiple of ``level`` that is at least 5.

        Below 5 the group ``Gamma_1(N)`` contains ``-I``; a modular function on
        ``Gamma_1(N)`` is also one on ``Gamma_1(kN)``, so lifting is harmless.
        """
        N = self.level
        return N * -(-5 // N)

    def canonical_text(self) -> str:
        lines = [f"name {self.name}", f"level {self.level}"]
        lines += [f"lhs {format_eproduct(t)}" for t in self.lhs_terms]
        lines.append(f"rhs {format_eproduct(self.rhs)}")
        return "\n".join(lines)

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()


def normalize(stmt: IdentityStatement) -> list[EProduct]:
    """Terms of ``lhs - rhs`` divided by the first lhs term, at the common level."""
    if not stmt.lhs_terms:
        raise ValueError("statement has no left-hand side")
    N = stmt.working_level
    raw = [blowup(t, N) for t in stmt.lhs_terms] + [blowup(-stmt.rhs, N)]
    first = raw[0]
    if first.scalar == 0:
        raise ValueError("first term is zero")
    out = []
    for t in raw:
        q = t / first
        if q.eta:
            raise NormalizationError(f"eta^{q.eta} survives in {format_eproduct(q)}")
        if q.scalar != 0:
            out.append(q)
    return out


def combine_terms(terms: Sequence[EProduct]) -> list[EProduct]:
    """Add up terms that are the same product; terms that cancel are dropped."""
    merged: dict = {}
    for q in terms:
        key = (q.level, q.factors, q.qpower)
        merged[key] = merged.get(key, Fraction(0)) + q.scalar
    return [EProduct(N, f, c, e) for (N, f, e), c in merged.items() if c != 0]


def _modularity_record(t: EProduct) -> dict:
    N = t.level
    s1 = sum(a for _, a in t.factors)
    s2 = sum(g * g * a for g, a in t.factors)
    why = modularity_defect(t)
    return {
        "term": format_eproduct(t),
        "sum_a": _num(s1),
        "sum_g2a": _num(s2),
        "y": 2 * N if N % 2 == 0 else N,
        "ok": why is None,
        **({"reason": why} if why else {}),
    }


def _num(x: Fraction):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _frac(x) -> Fraction:
    return Fraction(x) if isinstance(x, str) else Fraction(x)


def expand_sum(terms: Sequence[EProduct], T) -> QSeries:
    total = QSeries.zero(T)
    for t in terms:
        total = total + eprod_expand(t, T)
    return total


def prove(stmt: IdentityStatement, cusps: Sequence[Cusp] | None = None,
          verify_to: int | None = None) -> dict:
    """Run the full verification and return a certificate (plain dict, JSON-ready).

    ``verify_to`` asks for coefficients through a higher power than the bound;
    it never shortens the range below ``q^U``.
    """
    cert: dict = {
        "format": CERT_FORMAT,
        "statement": {"name": stmt.name, "tag": stmt.tag, "sha256": stmt.digest()},
        "level": stmt.working_level,
    }
    try:
        divided = normalize(stmt)
    except NormalizationError as exc:
        cert["verdict"] = {"status": "not-applicable", "reason": str(exc)}
        return cert
    terms = combine_terms(divided)
    cert["normalization"] = {
        "divided_by": format_eproduct(blowup(stmt.lhs_terms[0], stmt.working_level)),
        "terms": [format_eproduct(t) for t in terms],
    }
    checks = [_modularity_record(t) for t in terms]
    cert["modularity"] = checks
    bad = [c["term"] for c in checks if not c["ok"]]
    if bad:
        cert["verdict"] = {"status": "not-applicable", "non_modular": bad}
        return cert
    N = stmt.working_level
    if cusps is None:
        cusps = cusp_representatives(N)
    minima = []
    total = Fraction(0)
    for c in cusps:
        if c.is_infinity:
            continue
        # an empty normalized sum (everything cancelled) has no poles anywhere
        m = min((product_order(t, c) for t in terms), default=Fraction(0))
        total += m
        minima.append([str(c), _num(m)])
    U = -(total.numerator // total.denominator)
    cert["cusps"] = minima
    cert["order_sum"] = _num(total)
    cert["bound"] = U
    top = max(U, verify_to) if verify_to is not None else U
    cert["verified_range"] = [0, top]
    series = expand_sum(terms, top + 1)
    diff = series.first_difference(QSeries.zero(top + 1))
    if diff is None:
        cert["verdict"] = {"status": "proven"}
    else:
        e, coeff, _ = diff
        cert["verdict"] = {
            "status": "refuted",
            "exponent": _num(e),
            "grid": [e.numerator * (series.denom // e.denominator), series.denom],
            "coefficient": _num(Fraction(coeff)),
        }
    return cert


def certificate_json(cert: dict) -> str:
    return json.dumps(cert, indent=2) + "\n"


def verify_certificate(cert: dict, stmt: IdentityStatement) -> bool:
    """Recompute everything recorded in ``cert``; raise on a hash mismatch."""
    if cert.get("statement", {}).get("sha256") != stmt.digest():
        raise StaleCertificateError(f"certificate does not belong to {stmt.name}")
    if cert.get("verdict", {}).get("status") == "proven":
        # internal consistency of the bound arithmetic
        try:
            total = sum((_frac(m) for _, m in cert["cusps"]), Fraction(0))
            if total != _frac(cert["order_sum"]):
                return False
            if cert["bound"] != -(total.numerator // total.denominator):
                return False
            lo, hi = cert["verified_range"]
            if lo != 0 or hi < cert["bound"]:
                return False
        except (KeyError, TypeError, ValueError):
            return False
    try:
        verify_to = int(cert["verified_range"][1])
    except (KeyError, IndexError, TypeError, ValueError):
        verify_to = None
    return prove(stmt, verify_to=verify_to) == cert
