"""Identity corpus: a small line-oriented text format.

::

    # comment
    statement 840m+361
      lhs squares K=840 bsq=361 signs=+,+,-,+,-,+,-,-
      rhs (q,q^6,q^7;q^7) / (q,q^4;q^5)
      pattern mod16 0,1,3,5,10,12,14,15
      expect level=105 bound=148
    end

Left-hand side components (summed in the order given):

``squares K= bsq= signs= [alt=yes|no]``
    signed generating function of the ``m`` with ``K m + bsq`` a square
``bilateral A= B= C= alt=yes|no [coeff=]``
    ``coeff * sum_{k in Z} (+-1)^k q^(A k^2 + B k + C)``
``sqsum kind=squares|triangular M= [shift=] [coeff=]``
    ``coeff * sum_{n>=1} q^(M n^2 + shift)`` or ``coeff * sum_{n>=0} q^(M n(n+1) + shift)``
``const c [e]``
    the monomial ``c q^e``
``eprod <E-product>`` / ``poch <Pochhammer product>``
    a product given directly

``pattern`` is one of ``mod16 <residues>``, ``floor (n+2)/4`` (any ``(a n + b)/c``)
or ``plus``; it describes the sign sequence ``(-1)^t(n)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .prover import IdentityStatement
from .series import QSeries, as_fraction
from .squares import BilateralSum, SquareClassSpec, brute_force_series, compile_theta
from .thetaprod import EProduct, parse_eproduct, parse_pochhammer, eprod_expand

FORMAT_VERSION = 1


class CorpusError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f"line {line}" + (f", column {column}" if column else "") if line else ""
        super().__init__(f"{where}: {message}" if where else message)
        self.line = line
        self.column = column


def _kv(tokens: list[str], line: int) -> dict:
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise CorpusError(f"expected key=value, got {tok!r}", line)
        k, v = tok.split("=", 1)
        out[k] = v
    return out


@dataclass
class Component:
    kind: str
    text: str
    line: int = 0

    def _fields(self) -> dict:
        return _kv(self.text.split(), self.line)

    def products(self) -> list[EProduct]:
        """The component written as a list of E-products (constants have level 1)."""
        if self.kind == "squares":
            return compile_theta(SquareClassSpec.from_text(self.text))
        if self.kind == "bilateral":
            f = self._fields()
            b = BilateralSum(1, f.get("alt", "yes") == "yes", Fraction(f["A"]),
                             Fraction(f["B"]), Fraction(f.get("C", "0")))
            return [b.theta_form().to_eproduct().scale(Fraction(f.get("coeff", "1")))]
        if self.kind == "sqsum":
            f = self._fields()
            M, shift = int(f["M"]), Fraction(f.get("shift", "0"))
            coeff = Fraction(f.get("coeff", "1"))
            if f["kind"] == "triangular":
                b = BilateralSum(1, False, Fraction(M), Fraction(M), shift)
                return [b.theta_form().to_eproduct().scale(coeff / 2)]
            if f["kind"] == "squares":
                b = BilateralSum(1, False, Fraction(M), Fraction(0), shift)
                return [b.theta_form().to_eproduct().scale(coeff / 2),
                        EProduct(1, (), -coeff / 2, shift)]
            raise CorpusError(f"unknown sqsum kind {f['kind']!r}", self.line)
        if self.kind == "const":
            parts = self.text.split()
            e = Fraction(parts[1]) if len(parts) > 1 else Fraction(0)
            return [EProduct(1, (), Fraction(parts[0]), e)]
        if self.kind == "eprod":
            return [parse_eproduct(self.text)]
        if self.kind == "poch":
            return [parse_pochhammer(self.text).to_eproduct()]
        raise CorpusError(f"unknown component kind {self.kind!r}", self.line)

    def direct_series(self, T) -> QSeries:
        """Expansion by direct enumeration of the sum, without any product formula."""
        T = as_fraction(T)
        if self.kind == "squares":
            return brute_force_series(SquareClassSpec.from_text(self.text), T)
        if self.kind == "bilateral":
            f = self._fields()
            b = BilateralSum(1, f.get("alt", "yes") == "yes", Fraction(f["A"]),
                             Fraction(f["B"]), Fraction(f.get("C", "0")))
            return b.expand(T).scale(Fraction(f.get("coeff", "1")))
        if self.kind == "sqsum":
            f = self._fields()
            M, shift = int(f["M"]), Fraction(f.get("shift", "0"))
            coeff = Fraction(f.get("coeff", "1"))
            terms: dict = {}
            n = 1 if f["kind"] == "squares" else 0
            while True:
                e = M * (n * n if f["kind"] == "squares" else n * (n + 1)) + shift
                if e >= T:
                    break
                terms[e] = terms.get(e, 0) + coeff
                n += 1
            return QSeries.from_dict(terms, T)
        if self.kind == "const":
            parts = self.text.split()
            e = Fraction(parts[1]) if len(parts) > 1 else Fraction(0)
            return QSeries.from_dict({e: Fraction(parts[0])} if e < T else {}, T)
        return sum_series([eprod_expand(p, T) for p in self.products()], T)


def sum_series(items, T) -> QSeries:
    total = QSeries.zero(T)
    for s in items:
        total = total + s
    return total


_FLOOR = re.compile(r"^\((\d*)n([+-]\d+)?\)/(\d+)$")


def pattern_bits(pattern: str, count: int) -> list[int]:
    """Expand a sign pattern into bits ``t(0), ..., t(count-1)``."""
    kind, _, arg = pattern.partition(" ")
    if kind == "plus":
        return [0] * count
    if kind == "mod16":
        zeros = {int(x) for x in arg.split(",")}
        return [0 if n % 16 in zeros else 1 for n in range(count)]
    if kind == "floor":
        m = _FLOOR.match(arg.replace(" ", ""))
        if not m:
            raise CorpusError(f"cannot parse floor pattern {arg!r}")
        a = int(m.group(1) or 1)
        b = int(m.group(2) or 0)
        c = int(m.group(3))
        return [((a * n + b) // c) % 2 for n in range(count)]
    raise CorpusError(f"unknown pattern kind {kind!r}")


@dataclass
class CorpusEntry:
    tag: str
    components: list = field(default_factory=list)
    rhs_text: str = ""
    pattern: str | None = None
    expect: dict = field(default_factory=dict)
    line: int = 0

    def square_spec(self) -> SquareClassSpec | None:
        for c in self.components:
            if c.kind == "squares":
                return SquareClassSpec.from_text(c.text)
        return None

    def lhs_products(self) -> list[EProduct]:
        """Products of all components, with monomials of equal exponent combined and moved last."""
        prods, monos = [], {}
        for c in self.components:
            for p in c.products():
                if not p.factors and not p.eta:
                    monos[p.qpower] = monos.get(p.qpower, 0) + p.scalar
                else:
                    prods.append(p)
        prods += [EProduct(1, (), c, e) for e, c in sorted(monos.items()) if c]
        return prods

    def rhs(self) -> EProduct:
        return parse_pochhammer(self.rhs_text).to_eproduct()

    def statement(self) -> IdentityStatement:
        return IdentityStatement(self.tag, self.lhs_products(), self.rhs(), tag=self.tag,
                                 meta={"entry": self})

    def direct_series(self, T) -> QSeries:
        return sum_series([c.direct_series(T) for c in self.components], T)


COMPONENT_KINDS = ("squares", "bilateral", "sqsum", "const", "eprod", "poch")


def parse_corpus(text: str) -> list[CorpusEntry]:
    entries: list[CorpusEntry] = []
    cur: CorpusEntry | None = None
    tags = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        head, _, rest = line.strip().partition(" ")
        rest = rest.strip()
        if head == "version":
            if int(rest) != FORMAT_VERSION:
                raise CorpusError(f"unsupported corpus version {rest}", lineno, col)
            continue
        if head == "statement":
            if cur is not None:
                raise CorpusError("nested statement (missing 'end')", lineno, col)
            if not rest or rest in tags:
                raise CorpusError(f"missing or duplicate tag {rest!r}", lineno, col)
            tags.add(rest)
            cur = CorpusEntry(rest, line=lineno)
            continue
        if cur is None:
            raise CorpusError(f"{head!r} outside a statement", lineno, col)
        if head == "end":
            if not cur.components or not cur.rhs_text:
                raise CorpusError(f"statement {cur.tag} needs lhs and rhs", lineno, col)
            entries.append(cur)
            cur = None
        elif head == "lhs":
            kind, _, body = rest.partition(" ")
            if kind not in COMPONENT_KINDS:
                raise CorpusError(f"unknown component kind {kind!r}", lineno, col + 4)
            cur.components.append(Component(kind, body.strip(), lineno))
        elif head == "rhs":
            cur.rhs_text = rest
        elif head == "pattern":
            cur.pattern = rest
        elif head == "expect":
            cur.expect.update({k: int(v) for k, v in _kv(rest.split(), lineno).items()})
        else:
            raise CorpusError(f"unknown directive {head!r}", lineno, col)
    if cur is not None:
        raise CorpusError(f"statement {cur.tag} is not closed by 'end'")
    return entries


def load_corpus(path: str | Path | None = None) -> list[CorpusEntry]:
    """Load a corpus file; without a path the bundled theorem list is used."""
    if path is None:
        text = resources.files("thetacert").joinpath("data/theorems.idn").read_text()
    else:
        text = Path(path).read_text()
    return parse_corpus(text)
