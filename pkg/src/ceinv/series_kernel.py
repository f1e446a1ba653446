"""Exact truncated graded arithmetic in the torsion power-series structures.

Three nested structures share one representation here:

* K: integer power series in the free variables only (t2[m], t3[m], h2).
* L: power series also involving b and c, subject to b^2 c = b c^2 and
  2b = 2c = 0.
* M: the K-module extending L by a divided generator zeta_p for every
  monomial class p, with 2^{r(p)} zeta_p = p, where r(p) counts the
  excess multiplicity of b and c in p.

A monomial class is canonicalized so that whenever both b and c occur,
the b-exponent is 1 (the class of b^i c^j with i, j >= 1 is stored as
b c^{i+j-1}).  A zeta generator is torsion-free when its class is free
of b and c, and cyclic of order 2^{r+1} otherwise.  Series coefficients
are kept reduced to [0, order), which makes equality a term-map
comparison.

Every series carries an explicit truncation degree N; adding or
multiplying series with different bounds is an error rather than a
silent re-truncation.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping

from .group_l1 import AVariable, L1Element


class TruncationMismatch(ValueError):
    """Operands carry different truncation bounds."""


class DegreeOverflow(ValueError):
    """A requested degree exceeds the truncation bound."""


class NotInL(ValueError):
    """A module element was used where a ring element is required."""


class NotInK(ValueError):
    """An operand involving b or c was used where the action is undefined."""


class MonomialClass:
    """A monomial modulo b^2 c = b c^2, in canonical form.

    ``a_exps`` maps free variables to positive exponents (stored as a
    sorted tuple so classes hash); ``mb``/``mc`` are the b and c
    multiplicities of the canonical representative.  Build through
    ``make`` unless the arguments are already canonical; the raw
    constructor only re-normalizes the (mb, mc) pair.
    """

    __slots__ = ("a_exps", "mb", "mc", "degree", "repetition", "_hash")

    def __init__(self, a_exps: tuple[tuple[AVariable, int], ...] = (),
                 mb: int = 0, mc: int = 0):
        if mb >= 1 and mc >= 1:
            mb, mc = 1, mb + mc - 1
        self.a_exps = a_exps
        self.mb = mb
        self.mc = mc
        self.degree = sum(e for _, e in a_exps) + mb + mc
        self.repetition = max(0, mb - 1) + max(0, mc - 1)
        self._hash = hash((a_exps, mb, mc))

    @classmethod
    def make(cls, a_exps: Mapping[AVariable, int] | Iterable[tuple[AVariable, int]] = (),
             mb: int = 0, mc: int = 0) -> "MonomialClass":
        acc: dict[AVariable, int] = {}
        items = a_exps.items() if isinstance(a_exps, dict) else a_exps
        for var, exp in items:
            if exp < 0:
                raise ValueError(f"negative exponent on {var}")
            if exp:
                acc[var] = acc.get(var, 0) + exp
        if mb < 0 or mc < 0:
            raise ValueError("negative b/c multiplicity")
        exps = tuple(sorted(acc.items(), key=_var_key))
        return cls(exps, mb, mc)

    @classmethod
    def one(cls) -> "MonomialClass":
        return _ONE_CLASS

    @property
    def is_pure_a(self) -> bool:
        return self.mb == 0 and self.mc == 0

    @property
    def sort_key(self):
        # graded lex over the canonical variable order, b and c last
        seq = [v.sort_key + (-e,) for v, e in self.a_exps]
        if self.mb:
            seq.append((3, 0, -self.mb))
        if self.mc:
            seq.append((4, 0, -self.mc))
        return (self.degree, tuple(seq))

    def __eq__(self, other: object) -> bool:
        return (type(other) is MonomialClass
                and self.a_exps == other.a_exps
                and self.mb == other.mb and self.mc == other.mc)

    def __hash__(self) -> int:
        return self._hash

    def text(self) -> str:
        factors = []
        for var, exp in self.a_exps:
            factors.append(var.text() if exp == 1 else f"{var.text()}^{exp}")
        if self.mb:
            factors.append("b" if self.mb == 1 else f"b^{self.mb}")
        if self.mc:
            factors.append("c" if self.mc == 1 else f"c^{self.mc}")
        return "*".join(factors) if factors else "1"

    def __str__(self) -> str:
        return self.text()

    def __repr__(self) -> str:
        return f"MonomialClass({self.text()})"


def _var_key(item):
    return item[0].sort_key


_ONE_CLASS = MonomialClass()


def class_mul(p: MonomialClass, q: MonomialClass) -> MonomialClass:
    """Multiply two classes (exponents add, then re-canonicalize)."""
    if not q.a_exps:
        exps = p.a_exps
    elif not p.a_exps:
        exps = q.a_exps
    else:
        acc = dict(p.a_exps)
        for var, exp in q.a_exps:
            acc[var] = acc.get(var, 0) + exp
        exps = tuple(sorted(acc.items(), key=_var_key))
    return MonomialClass(exps, p.mb + q.mb, p.mc + q.mc)


def repetition(p: MonomialClass) -> int:
    """Excess multiplicity of b and c in the canonical representative."""
    return p.repetition


class ZetaClass:
    """The divided generator attached to a monomial class.

    Torsion-free when the class avoids b and c; otherwise cyclic of
    order 2^{r+1}, since 2^r zeta = p and 2p = 0.
    """

    __slots__ = ("cls", "order", "degree", "_hash")

    def __init__(self, cls: MonomialClass):
        self.cls = cls
        self.order = 0 if cls.is_pure_a else 1 << (cls.repetition + 1)
        self.degree = cls.degree
        self._hash = hash(("zeta", cls._hash))

    def __eq__(self, other: object) -> bool:
        return type(other) is ZetaClass and self.cls == other.cls

    def __hash__(self) -> int:
        return self._hash

    def text(self) -> str:
        if self.cls.repetition == 0:
            return self.cls.text()
        return "Z{" + self.cls.text() + "}"

    def __str__(self) -> str:
        return self.text()

    def __repr__(self) -> str:
        return f"ZetaClass({self.text()})"


def zeta_order(z: ZetaClass) -> int:
    """Cyclic order of a zeta generator; 0 means infinite."""
    return z.order


class SeriesM:
    """A truncated element of the module: a finite zeta-term map.

    Immutable by convention; every operation returns a new series.
    Equality compares the reduced term maps (coefficients are unique
    normal forms, so this is exact).
    """

    __slots__ = ("truncation", "terms")

    truncation: int
    terms: dict[ZetaClass, int]

    def __init__(self, truncation: int, terms: Mapping[ZetaClass, int] | None = None):
        if truncation < 0:
            raise ValueError("truncation must be non-negative")
        reduced: dict[ZetaClass, int] = {}
        if terms:
            for z, coeff in terms.items():
                if z.degree > truncation:
                    raise DegreeOverflow(
                        f"term {z} of degree {z.degree} exceeds truncation {truncation}")
                if z.order:
                    coeff %= z.order
                if coeff:
                    reduced[z] = coeff
        self.truncation = truncation
        self.terms = reduced

    @classmethod
    def zero(cls, truncation: int) -> "SeriesM":
        return cls(truncation)

    @classmethod
    def one(cls, truncation: int) -> "SeriesM":
        return cls(truncation, {ZetaClass(MonomialClass.one()): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SeriesM) and self.terms == other.terms

    def __add__(self, other: "SeriesM") -> "SeriesM":
        return series_add(self, other)

    def __neg__(self) -> "SeriesM":
        return series_scale(-1, self)

    def __sub__(self, other: "SeriesM") -> "SeriesM":
        return series_add(self, series_scale(-1, other))

    def __rmul__(self, k: int) -> "SeriesM":
        return series_scale(k, self)

    def divisible_by_pow2(self, r: int) -> bool:
        """Whether every coefficient is a multiple of 2^r in its cyclic group.

        On a coordinate of order o, 2^r x = v is solvable iff
        gcd(2^r, o) divides v; on a free coordinate iff 2^r divides v.
        """
        if r <= 0:
            return True
        step = 1 << r
        for z, coeff in self.terms.items():
            # gcd of two powers of two is their minimum
            modulus = step if z.order == 0 else min(step, z.order)
            if coeff % modulus:
                return False
        return True

    def text(self) -> str:
        return format_series(self)

    def __str__(self) -> str:
        return self.text()

    def __repr__(self) -> str:
        return f"SeriesM(N={self.truncation}, {self.text()})"


def series_add(x: SeriesM, y: SeriesM) -> SeriesM:
    """Classwise sum, reduced modulo each class order."""
    if x.truncation != y.truncation:
        raise TruncationMismatch(
            f"truncation {x.truncation} vs {y.truncation}")
    acc = dict(x.terms)
    for z, coeff in y.terms.items():
        acc[z] = acc.get(z, 0) + coeff
    return SeriesM(x.truncation, acc)


def series_scale(k: int, x: SeriesM) -> SeriesM:
    return SeriesM(x.truncation, {z: k * c for z, c in x.terms.items()})


def embed_l_to_m(p: MonomialClass, coeff: int, truncation: int) -> SeriesM:
    """The ring element coeff * p viewed in the module: coeff * 2^r zeta_p."""
    if p.degree > truncation:
        raise DegreeOverflow(
            f"class {p} of degree {p.degree} exceeds truncation {truncation}")
    return SeriesM(truncation, {ZetaClass(p): coeff << p.repetition})


def _l_coefficients(x: SeriesM) -> dict[MonomialClass, int]:
    """Recover ring-level coefficients; reject terms outside the ring.

    A stored zeta coefficient on a torsion class must be exactly 2^r
    (the embedded image of an odd ring coefficient) to lie in L.
    """
    out: dict[MonomialClass, int] = {}
    for z, coeff in x.terms.items():
        cls = z.cls
        if cls.is_pure_a:
            out[cls] = coeff
        else:
            if coeff != 1 << cls.repetition:
                raise NotInL(
                    f"term {coeff}*{z} is not an embedded ring element")
            out[cls] = 1
    return out


def mul_l(x: SeriesM, y: SeriesM, truncation: int) -> SeriesM:
    """Product of two ring elements, truncated.

    Bilinear over classes; coefficients of classes containing b or c
    are reduced mod 2 at the ring level before re-embedding.
    """
    if x.truncation != truncation or y.truncation != truncation:
        raise TruncationMismatch(
            f"operands at {x.truncation}/{y.truncation}, product at {truncation}")
    ax = _l_coefficients(x)
    ay = _l_coefficients(y)
    prod: dict[MonomialClass, int] = {}
    for p, cp in ax.items():
        for q, cq in ay.items():
            s = class_mul(p, q)
            if s.degree > truncation:
                continue
            prod[s] = prod.get(s, 0) + cp * cq
    terms: dict[ZetaClass, int] = {}
    for cls, coeff in prod.items():
        if not cls.is_pure_a:
            coeff %= 2
        if coeff:
            terms[ZetaClass(cls)] = coeff << cls.repetition
    return SeriesM(truncation, terms)


def k_action(k: SeriesM, m: SeriesM, truncation: int) -> SeriesM:
    """Action of a b/c-free series on a module element.

    Monomialwise the action translates zeta indices: a * zeta_p is
    zeta_{a p}.  The multiplier must avoid b and c; letting all of the
    ring act would force 0 != b^2 = 2 zeta_{b^2} = 2b * zeta_b = 0.
    """
    if k.truncation != truncation or m.truncation != truncation:
        raise TruncationMismatch(
            f"operands at {k.truncation}/{m.truncation}, action at {truncation}")
    for z in k.terms:
        if not z.cls.is_pure_a:
            raise NotInK(f"multiplier term {z} involves b or c")
    acc: dict[ZetaClass, int] = {}
    for zk, ck in k.terms.items():
        for zm, cm in m.terms.items():
            cls = class_mul(zk.cls, zm.cls)
            if cls.degree > truncation:
                continue
            z = ZetaClass(cls)
            acc[z] = acc.get(z, 0) + ck * cm
    return SeriesM(truncation, acc)


def project_degree(x: SeriesM, n: int) -> SeriesM:
    """Retain exactly the degree-n terms."""
    if n > x.truncation:
        raise DegreeOverflow(f"degree {n} exceeds truncation {x.truncation}")
    return SeriesM(x.truncation, {z: c for z, c in x.terms.items() if z.degree == n})


def l1_to_series(l: L1Element, truncation: int) -> SeriesM:
    """A degree-1 group element as a (ring) series: generators to monomials."""
    terms: dict[ZetaClass, int] = {}
    for var, coeff in l.a_coeffs.items():
        terms[ZetaClass(MonomialClass.make({var: 1}))] = coeff
    if l.b_bit:
        terms[ZetaClass(MonomialClass.make((), mb=1))] = 1
    if l.c_bit:
        terms[ZetaClass(MonomialClass.make((), mc=1))] = 1
    return SeriesM(truncation, terms)


def format_series(x: SeriesM) -> str:
    """Canonical text: terms by degree then class, torsion terms as Z{...}."""
    if not x.terms:
        return "0"
    out: list[str] = []
    for z in sorted(x.terms, key=lambda z: z.cls.sort_key):
        coeff = x.terms[z]
        if z.cls.degree == 0:
            body = None
        else:
            body = z.text()
        mag = abs(coeff)
        if body is None:
            piece = str(mag)
        elif mag == 1:
            piece = body
        else:
            piece = f"{mag}*{body}"
        if not out:
            out.append(piece if coeff > 0 else f"-{piece}")
        else:
            out.append(("+ " if coeff > 0 else "- ") + piece)
    return " ".join(out)


_SERIES_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)"
    r"|(?P<var>t2\[\s*[+-]?\d+\s*\]|t3\[\s*[+-]?\d+\s*\]|h2|b|c)"
    r"|(?P<zopen>Z\{)"
    r"|(?P<close>\})"
    r"|(?P<op>[*^+\-]))"
)


class SeriesSyntaxError(ValueError):
    """Raised for unparseable series text."""


class _SeriesScanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.kind: str | None = None
        self.value: str | None = None
        self.advance()

    def advance(self):
        rest = self.text[self.pos:]
        if not rest.strip():
            self.kind, self.value = None, None
            self.pos = len(self.text)
            return
        m = _SERIES_TOKEN.match(self.text, self.pos)
        if not m:
            raise SeriesSyntaxError(f"bad token at {rest.strip()!r}")
        self.pos = m.end()
        for kind in ("int", "var", "zopen", "close", "op"):
            if m.group(kind) is not None:
                self.kind, self.value = kind, m.group(kind)
                return

    def at_end(self) -> bool:
        return self.kind is None


def _parse_var(tok: str) -> tuple[AVariable | None, str | None]:
    if tok == "b":
        return None, "b"
    if tok == "c":
        return None, "c"
    if tok == "h2":
        return AVariable.h2(), None
    level = int(tok[3:-1])
    return AVariable(tok[:2], level), None


def _parse_monomial(sc: _SeriesScanner) -> MonomialClass:
    exps: dict[AVariable, int] = {}
    mb = 0
    mc = 0
    while True:
        if sc.kind != "var":
            raise SeriesSyntaxError(f"expected variable, got {sc.value!r}")
        var, bc = _parse_var(sc.value)
        sc.advance()
        exp = 1
        if sc.kind == "op" and sc.value == "^":
            sc.advance()
            if sc.kind != "int":
                raise SeriesSyntaxError("expected exponent after '^'")
            exp = int(sc.value)
            sc.advance()
        if bc == "b":
            mb += exp
        elif bc == "c":
            mc += exp
        else:
            exps[var] = exps.get(var, 0) + exp
        if sc.kind == "op" and sc.value == "*" and _peek_is_var(sc):
            sc.advance()
            continue
        break
    return MonomialClass.make(exps, mb, mc)


def _peek_is_var(sc: _SeriesScanner) -> bool:
    m = _SERIES_TOKEN.match(sc.text, sc.pos)
    return bool(m and m.group("var"))


def parse_series(text: str, truncation: int) -> SeriesM:
    """Parse series text at a given truncation bound.

    A bare monomial denotes the embedded ring element (coefficient
    2^r on its zeta class); ``Z{...}`` denotes the zeta generator
    itself.  The two agree when r = 0, which is the only case the
    printer emits without ``Z{...}``.
    """
    s = text.strip()
    if s == "0":
        return SeriesM.zero(truncation)
    if not s:
        raise SeriesSyntaxError("empty series text (the zero series is '0')")
    sc = _SeriesScanner(s)
    total = SeriesM.zero(truncation)
    first = True
    while not sc.at_end():
        sign = 1
        if sc.kind == "op" and sc.value in "+-":
            sign = -1 if sc.value == "-" else 1
            sc.advance()
        elif not first:
            raise SeriesSyntaxError(f"missing sign before {sc.value!r}")
        coeff = 1
        if sc.kind == "int":
            coeff = int(sc.value)
            sc.advance()
            if sc.kind == "op" and sc.value == "*":
                sc.advance()
            else:
                # A bare integer term is the constant.
                total = series_add(total, SeriesM(
                    truncation, {ZetaClass(MonomialClass.one()): sign * coeff}))
                first = False
                continue
        if sc.kind == "zopen":
            sc.advance()
            cls = _parse_monomial(sc)
            if sc.kind != "close":
                raise SeriesSyntaxError("unterminated Z{...}")
            sc.advance()
            term = SeriesM(truncation, {ZetaClass(cls): sign * coeff})
        elif sc.kind == "var":
            cls = _parse_monomial(sc)
            term = embed_l_to_m(cls, sign * coeff, truncation)
        else:
            raise SeriesSyntaxError(f"expected term, got {sc.value!r}")
        total = series_add(total, term)
        first = False
    return total
