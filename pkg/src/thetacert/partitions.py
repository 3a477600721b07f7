"""Partition generating functions around the truncated pentagonal theorem.

``M_k(n)`` counts partitions of ``n`` in which ``k`` is the least positive
integer that is not a part and there are more parts ``> k`` than parts ``< k``.
``A(n)`` counts partitions with parts restricted mod 35 (some parts in two
colors); its generating function is ``1 / ((q,q^4;q^5) (q^2,q^3,q^4,q^5;q^7))``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .series import QSeries, as_fraction, poch_expand, product_expand, series_div, series_mul

CONJECTURES = ("C41", "C41-inequalities", "Cexp")


@dataclass(frozen=True)
class PartitionSeriesSpec:
    kind: str
    T: int
    k: int | None = None
    n: int | None = None

    def __post_init__(self):
        if self.kind not in ("pentagonal", "truncated_pentagonal", "Mk", "A", "qbinomial"):
            raise ValueError(f"unknown partition series kind {self.kind!r}")
        if self.kind in ("truncated_pentagonal", "Mk") and (self.k is None or self.k < 1):
            raise ValueError("k >= 1 required")

    def expand(self) -> QSeries:
        if self.kind == "pentagonal":
            return poch_expand(1, 1, 1, self.T)
        if self.kind == "truncated_pentagonal":
            return truncated_pentagonal_sum(self.k, self.T)
        if self.kind == "Mk":
            return Mk_series(self.k, self.T)
        if self.kind == "A":
            return A_series(self.T)
        return qbinomial(self.n, self.k, self.T)


def _poch_list(exps, M, T) -> QSeries:
    out = QSeries.one(T)
    for e in exps:
        out = series_mul(out, poch_expand(e, 1, M, T))
    return out


def finite_poch(n: int, T) -> QSeries:
    """``(q;q)_n = (1-q)(1-q^2)...(1-q^n)``."""
    return product_expand({m: 1 for m in range(1, n + 1)}, T)


def qbinomial(n: int, k: int, T) -> QSeries:
    """Gaussian binomial coefficient; zero unless ``0 <= k <= n``."""
    if not 0 <= k <= n:
        return QSeries.zero(T)
    f: dict[int, int] = {}
    for m in range(1, n + 1):
        f[m] = f.get(m, 0) + 1
    for m in list(range(1, k + 1)) + list(range(1, n - k + 1)):
        f[m] = f.get(m, 0) - 1
    return product_expand({m: e for m, e in f.items() if e}, T)


def Mk_series(k: int, T) -> QSeries:
    """``sum_{n>=k} q^(C(k,2) + (k+1) n) / (q;q)_n * [n-1, k-1]``."""
    if k < 1:
        raise ValueError("k must be positive")
    T = as_fraction(T)
    total = QSeries.zero(T)
    n = k
    while True:
        e = k * (k - 1) // 2 + (k + 1) * n
        if e >= T:
            break
        rest = T - e
        term = series_div(qbinomial(n - 1, k - 1, rest), finite_poch(n, rest))
        total = total + term.shift(e)
        n += 1
    return total


def A_denominator(T) -> QSeries:
    return series_mul(_poch_list((1, 4), 5, T), _poch_list((2, 3, 4, 5), 7, T))


def A_series(T) -> QSeries:
    return series_div(QSeries.one(T), A_denominator(T))


def pentagonal_partial(k: int, T) -> QSeries:
    """``sum_{j=-(k-1)}^{k} (-1)^j q^(j(3j-1)/2)``."""
    terms: dict = {}
    for j in range(-(k - 1), k + 1):
        e = j * (3 * j - 1) // 2
        if e < as_fraction(T):
            terms[e] = terms.get(e, 0) + (-1) ** (j % 2)
    return QSeries.from_dict(terms, T)


def truncated_pentagonal_sum(k: int, T) -> QSeries:
    """``(-1)^(k-1) (sum_{j=-(k-1)}^{k} (-1)^j q^(j(3j-1)/2) / (q;q)_inf - 1)``."""
    s = series_div(pentagonal_partial(k, T), poch_expand(1, 1, 1, T)) - QSeries.one(T)
    return s.scale((-1) ** (k - 1))


def truncated_pentagonal_check(k: int, T) -> dict:
    """Compare both sides of the truncated pentagonal identity through ``q^T``."""
    if k < 1:
        raise ValueError("k must be positive")
    sign = (-1) ** (k - 1)
    lhs = series_div(pentagonal_partial(k, T), poch_expand(1, 1, 1, T)).scale(sign)
    rhs = Mk_series(k, T) + QSeries.one(T).scale(sign)
    diff = lhs.first_difference(rhs)
    report = {"identity": "truncated-pentagonal", "k": k, "T": int(T), "holds": diff is None}
    if diff is not None:
        report["first_difference"] = {"n": int(diff[0]), "lhs": diff[1], "rhs": diff[2]}
    return report


def square_sequence_terms(T) -> list[tuple[int, int]]:
    """``(a_j, (-1)^t(j))`` for the ``840m+361`` sequence with ``a_j < T``."""
    from .corpus import load_corpus

    entry = next(e for e in load_corpus() if e.tag == "840m+361")
    spec = entry.square_spec()
    out = []
    for S in spec.term_roots(T):
        out.append((int(spec.exponent(S)), spec.sign_of(S)))
    return out


def corollary_check(k: int, nmax: int) -> dict:
    """Check the convolution identity between ``A``, ``M_k`` and the ``840m+361`` signs.

    For every ``1 <= n <= nmax``::

        (-1)^(k-1) (sum_j (-1)^j A(n - j(3j-1)/2) - delta(n)) = sum_j (-1)^t(j) M_k(n - a_j)
    """
    T = nmax + 1
    A = A_series(T).integer_coeffs(T)
    M = Mk_series(k, T).integer_coeffs(T)
    terms = square_sequence_terms(T)
    delta = dict(terms)
    sign = (-1) ** (k - 1)
    rows, failures = [], []
    for n in range(1, nmax + 1):
        lhs = 0
        for j in range(-(k - 1), k + 1):
            m = n - j * (3 * j - 1) // 2
            if m >= 0:
                lhs += (-1) ** (j % 2) * A[m]
        lhs = sign * (lhs - delta.get(n, 0))
        rhs = sum(s * M[n - a] for a, s in terms if a <= n)
        rows.append((n, lhs, rhs))
        if lhs != rhs:
            failures.append({"n": n, "lhs": lhs, "rhs": rhs})
    return {"identity": "corollary", "k": k, "nmax": nmax, "holds": not failures,
            "failures": failures}


# -- conjecture scans --------------------------------------------------------


def c41_series(k: int, T) -> QSeries:
    """Truncated pentagonal quotient times ``(q,q^6,q^7;q^7)``."""
    return series_mul(truncated_pentagonal_sum(k, T), _poch_list((1, 6, 7), 7, T))


def c41_series_sum_form(k: int, T) -> QSeries:
    """Same series as a tail sum over the pentagonal numbers divided by ``(q^2,...,q^5;q^7)``."""
    T = as_fraction(T)
    terms: dict = {}
    j = k
    while j * (3 * j + 1) // 2 < T:
        s = (-1) ** ((j + k) % 2)
        e = j * (3 * j + 1) // 2
        terms[e] = terms.get(e, 0) + s
        if e + 2 * j + 1 < T:
            terms[e + 2 * j + 1] = terms.get(e + 2 * j + 1, 0) - s
        j += 1
    return series_div(QSeries.from_dict(terms, T), _poch_list((2, 3, 4, 5), 7, T))


def c41_inequality_series(k: int, T) -> QSeries:
    """``(-1)^(k-1) (A * partial pentagonal - Theta)``, ``Theta = (q,q^6,q^7;q^7)/(q,q^4;q^5)``."""
    theta = series_div(_poch_list((1, 6, 7), 7, T), _poch_list((1, 4), 5, T))
    s = series_mul(A_series(T), pentagonal_partial(k, T)) - theta
    return s.scale((-1) ** (k - 1))


def cexp_series(k: int, S: int, variant: str, T) -> QSeries:
    """Tail sum ``(-1)^k sum_{j>=k} (-1)^j q^(7j(j+1)/2 - jS) (1 - q^((2j+1)S))`` over a mod-5 product.

    ``variant`` ``"14"`` divides by ``(q,q^4;q^5)``, ``"23"`` by ``(q^2,q^3;q^5)``.
    """
    T = as_fraction(T)
    terms: dict = {}
    j = k
    while True:
        e = 7 * j * (j + 1) // 2 - j * S
        if e >= T:
            break
        s = (-1) ** ((j + k) % 2)
        terms[e] = terms.get(e, 0) + s
        e2 = e + (2 * j + 1) * S
        if e2 < T:
            terms[e2] = terms.get(e2, 0) - s
        j += 1
    den = {"14": (1, 4), "23": (2, 3)}[variant]
    return series_div(QSeries.from_dict(terms, T), _poch_list(den, 5, T))


def _cell(conjecture: str, params: dict, coeffs: list[int], expected_zero) -> dict:
    """Compare signs with the conjectured pattern; ``expected_zero(n)`` is True, False or None (>= 0)."""
    violations = []
    for n, c in enumerate(coeffs):
        want = expected_zero(n)
        if want is True and c != 0:
            violations.append({"n": n, "coefficient": c, "expected": "zero"})
        elif want is False and c <= 0:
            violations.append({"n": n, "coefficient": c, "expected": "positive"})
        elif want is None and c < 0:
            violations.append({"n": n, "coefficient": c, "expected": "nonnegative"})
    return {
        "conjecture": conjecture,
        "params": params,
        "violations": violations,
        "zero_set": [n for n, c in enumerate(coeffs) if c == 0],
        "negative": [n for n, c in enumerate(coeffs) if c < 0],
    }


def conjecture_scan(which: str, k_max: int, T: int, S_set=(1, 2, 3, 4, 5, 6),
                    negate: bool = False) -> dict:
    """Scan coefficient signs of the conjectured series through ``q^T`` (evidence only).

    ``negate`` flips every series, which must produce violations; it exists to
    exercise the reporting path.
    """
    if which not in CONJECTURES:
        raise ValueError(f"unknown conjecture {which!r}; choose from {CONJECTURES}")
    sgn = -1 if negate else 1
    cells = []
    for k in range(1, k_max + 1):
        p = k * (3 * k + 1) // 2
        if which == "C41":
            coeffs = [sgn * c for c in c41_series(k, T).integer_coeffs(T)]
            cells.append(_cell(which, {"k": k}, coeffs, lambda n: n < p or n == p + 1))
        elif which == "C41-inequalities":
            coeffs = [sgn * c for c in c41_inequality_series(k, T).integer_coeffs(T)]
            # strict at p and from p + 2 on; only nonnegativity is claimed elsewhere
            # (n = 0 is excluded: the statement is for positive n)
            cells.append(_cell(which, {"k": k}, coeffs,
                               lambda n: None if n == 0 else (False if n == p or n >= p + 2 else None)))
        else:
            for S in S_set:
                for variant in ("14", "23"):
                    coeffs = [sgn * c for c in cexp_series(k, S, variant, T).integer_coeffs(T)]
                    cells.append(_cell(which, {"k": k, "S": S, "denominator": variant},
                                       coeffs, lambda n: None))
    return {
        "conjecture": which,
        "k_max": k_max,
        "T": T,
        "negated": negate,
        "cells": cells,
        "violations": sum(len(c["violations"]) for c in cells),
    }
