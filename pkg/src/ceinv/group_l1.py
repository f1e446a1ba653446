"""The universal degree-1 coefficient group and symbol expansion over Y.

The group is free abelian on the lowercase generators t2[m], t3[m]
(m ranging over all integers) and h2, extended by two order-two
generators b and c.  Every decorated symbol has a unique expansion as an
integer combination of the spanning symbols Y = {T2[m], T3[m], H2[0],
H1[0], Q2[0]}; the universal degree-1 value sends each Y-symbol to its
lowercase generator.

The expansion rules, with H abbreviating H2[0]:

* H1[m] and Q2[m] collapse to H1[0] and Q2[0].
* H2[m] = H + sum_{k=1..m} (T3[k] - T2[k]) for m >= 0, and
  H2[m] = H - sum_{k=m+1..0} (T3[k] - T2[k]) for m < 0.
* E2[m] = H2[m], E0[m] = -H2[m], E1[m] = H1[m].
* T0[m] = T3[m], T1[m] = T2[m].
* Q3[m] = Q2[m] + T2[m] - T2[m-1], Q4[m] = Q3[m] + T3[m] - T3[m-1].

Element text form: a signed sum such as ``3*t3[1] - t2[0] + b``; the
zero element prints as ``0``.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping

from .symbols import (
    CEType,
    DecoratedSymbol,
    H10,
    H20,
    Q20,
    membership,
    parse_symbol,
)


class L1SyntaxError(ValueError):
    """Raised for unparseable group-element text."""


_KIND_RANK = {"t2": 0, "t3": 1, "h2": 2}


class AVariable:
    """A free (torsion-less) generator: t2[m], t3[m] or h2."""

    __slots__ = ("kind", "level", "sort_key", "_hash")

    def __init__(self, kind: str, level: int = 0):
        if kind not in _KIND_RANK:
            raise ValueError(f"unknown variable kind {kind!r}")
        if kind == "h2" and level != 0:
            raise ValueError("h2 exists only at level 0")
        self.kind = kind
        self.level = level
        self.sort_key = (_KIND_RANK[kind], level)
        self._hash = hash(("avar", kind, level))

    @classmethod
    def t2(cls, m: int) -> "AVariable":
        return cls("t2", m)

    @classmethod
    def t3(cls, m: int) -> "AVariable":
        return cls("t3", m)

    @classmethod
    def h2(cls) -> "AVariable":
        return cls("h2", 0)

    def __eq__(self, other: object) -> bool:
        return type(other) is AVariable and self.sort_key == other.sort_key

    def __hash__(self) -> int:
        return self._hash

    def text(self) -> str:
        return "h2" if self.kind == "h2" else f"{self.kind}[{self.level}]"

    def __str__(self) -> str:
        return self.text()

    def __repr__(self) -> str:
        return f"AVariable({self.text()})"


class L1Element:
    """An element of the universal degree-1 group.

    Holds integer coefficients on the free generators plus one bit each
    for the order-two generators b and c.  Values are immutable;
    arithmetic returns new elements.
    """

    __slots__ = ("a_coeffs", "b_bit", "c_bit", "_key")

    def __init__(self, a_coeffs: Mapping[AVariable, int] | None = None,
                 b_bit: int = 0, c_bit: int = 0):
        coeffs = {v: int(c) for v, c in (a_coeffs or {}).items() if c != 0}
        self.a_coeffs = coeffs
        self.b_bit = b_bit % 2
        self.c_bit = c_bit % 2
        self._key = (
            tuple(sorted((v.sort_key, c) for v, c in coeffs.items())),
            self.b_bit,
            self.c_bit,
        )

    @classmethod
    def zero(cls) -> "L1Element":
        return cls()

    @classmethod
    def t2(cls, m: int, coeff: int = 1) -> "L1Element":
        return cls({AVariable.t2(m): coeff})

    @classmethod
    def t3(cls, m: int, coeff: int = 1) -> "L1Element":
        return cls({AVariable.t3(m): coeff})

    @classmethod
    def h2(cls, coeff: int = 1) -> "L1Element":
        return cls({AVariable.h2(): coeff})

    @classmethod
    def b(cls) -> "L1Element":
        return cls(b_bit=1)

    @classmethod
    def c(cls) -> "L1Element":
        return cls(c_bit=1)

    def is_zero(self) -> bool:
        return not self.a_coeffs and not self.b_bit and not self.c_bit

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, L1Element) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __add__(self, other: "L1Element") -> "L1Element":
        return l1_add(self, other)

    def __neg__(self) -> "L1Element":
        return L1Element({v: -c for v, c in self.a_coeffs.items()},
                         self.b_bit, self.c_bit)

    def __rmul__(self, k: int) -> "L1Element":
        return L1Element({v: k * c for v, c in self.a_coeffs.items()},
                         k * self.b_bit, k * self.c_bit)

    def text(self) -> str:
        return format_l1(self)

    def __str__(self) -> str:
        return self.text()

    def __repr__(self) -> str:
        return f"L1Element({self.text()})"


def l1_add(x: L1Element, y: L1Element) -> L1Element:
    """Group law: componentwise sums, bits mod 2, zero entries pruned."""
    coeffs = dict(x.a_coeffs)
    for v, c in y.a_coeffs.items():
        coeffs[v] = coeffs.get(v, 0) + c
    return L1Element(coeffs, x.b_bit + y.b_bit, x.c_bit + y.c_bit)


def decompose(x: L1Element) -> tuple[L1Element, L1Element]:
    """Split into the free part and the four-element b/c part."""
    return L1Element(x.a_coeffs), L1Element(b_bit=x.b_bit, c_bit=x.c_bit)


class YCombination:
    """An integer combination of Y-symbols.

    Coefficients on H1[0] and Q2[0] are reduced mod 2 at construction:
    any value those symbols ever multiply is annihilated by 2, so only
    the parity carries information.  Term order is preserved from
    construction (expansion order), which is cosmetic only; equality is
    order-insensitive.
    """

    __slots__ = ("terms",)

    terms: dict[DecoratedSymbol, int]

    def __init__(self, pairs: Iterable[tuple[DecoratedSymbol, int]]):
        acc: dict[DecoratedSymbol, int] = {}
        for sym, coeff in pairs:
            if not membership(sym).in_y:
                raise ValueError(f"{sym} is not a Y-symbol")
            acc[sym] = acc.get(sym, 0) + coeff
        for sym in (H10, Q20):
            if sym in acc:
                acc[sym] %= 2
        self.terms = {sym: c for sym, c in acc.items() if c != 0}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, YCombination) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def text(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for sym, coeff in self.terms.items():
            mag = abs(coeff)
            body = sym.text() if mag == 1 else f"{mag}*{sym.text()}"
            if not parts:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(("+ " if coeff > 0 else "- ") + body)
        return " ".join(parts)

    def __str__(self) -> str:
        return self.text()

    def __repr__(self) -> str:
        return f"YCombination({self.text()})"


_Y_TERM = re.compile(
    r"\s*(?P<sign>[+-])?\s*(?:(?P<coeff>\d+)\s*\*\s*)?"
    r"(?P<sym>[A-Za-z][A-Za-z0-9]*\[\s*[+-]?\d+\s*\])\s*"
)


def parse_ycombination(text: str) -> YCombination:
    """Parse the signed-sum text form of a Y-combination."""
    s = text.strip()
    if s == "0" or s == "":
        return YCombination([])
    pairs: list[tuple[DecoratedSymbol, int]] = []
    pos = 0
    first = True
    while pos < len(s):
        m = _Y_TERM.match(s, pos)
        if not m:
            raise L1SyntaxError(f"cannot parse combination text at {s[pos:]!r}")
        if not first and m.group("sign") is None:
            raise L1SyntaxError(f"missing sign before {s[pos:]!r}")
        sign = -1 if m.group("sign") == "-" else 1
        coeff = sign * int(m.group("coeff") or 1)
        pairs.append((parse_symbol(m.group("sym")), coeff))
        pos = m.end()
        first = False
    return YCombination(pairs)


def _h2_pairs(m: int) -> list[tuple[DecoratedSymbol, int]]:
    # Telescoping ladder from level 0; the sum is empty exactly at m = 0.
    pairs: list[tuple[DecoratedSymbol, int]] = [(H20, 1)]
    if m >= 0:
        for k in range(1, m + 1):
            pairs.append((DecoratedSymbol(CEType.T3, k), 1))
            pairs.append((DecoratedSymbol(CEType.T2, k), -1))
    else:
        for k in range(m + 1, 1):
            pairs.append((DecoratedSymbol(CEType.T3, k), -1))
            pairs.append((DecoratedSymbol(CEType.T2, k), 1))
    return pairs


def expand_to_y(s: DecoratedSymbol) -> YCombination:
    """The unique expansion of a symbol over the spanning set Y.

    Idempotent on Y-symbols and always finite.
    """
    tag, m = s.ce, s.degree
    if tag in (CEType.T2, CEType.T3):
        return YCombination([(s, 1)])
    if tag is CEType.T0:
        return YCombination([(DecoratedSymbol(CEType.T3, m), 1)])
    if tag is CEType.T1:
        return YCombination([(DecoratedSymbol(CEType.T2, m), 1)])
    if tag in (CEType.H1, CEType.E1):
        return YCombination([(H10, 1)])
    if tag is CEType.Q2:
        return YCombination([(Q20, 1)])
    if tag in (CEType.H2, CEType.E2):
        return YCombination(_h2_pairs(m))
    if tag is CEType.E0:
        return YCombination([(sym, -c) for sym, c in _h2_pairs(m)])
    if tag is CEType.Q3:
        return YCombination([
            (Q20, 1),
            (DecoratedSymbol(CEType.T2, m), 1),
            (DecoratedSymbol(CEType.T2, m - 1), -1),
        ])
    if tag is CEType.Q4:
        return YCombination([
            (Q20, 1),
            (DecoratedSymbol(CEType.T2, m), 1),
            (DecoratedSymbol(CEType.T2, m - 1), -1),
            (DecoratedSymbol(CEType.T3, m), 1),
            (DecoratedSymbol(CEType.T3, m - 1), -1),
        ])
    raise AssertionError(f"unhandled tag {tag}")


def g_u1(s: DecoratedSymbol) -> L1Element:
    """The universal degree-1 value of a symbol.

    Sends T2[m], T3[m], H2[0], H1[0], Q2[0] to t2[m], t3[m], h2, b, c
    respectively and extends through the Y-expansion.
    """
    coeffs: dict[AVariable, int] = {}
    b_bit = 0
    c_bit = 0
    for sym, coeff in expand_to_y(s).terms.items():
        if sym == H10:
            b_bit = coeff
        elif sym == Q20:
            c_bit = coeff
        elif sym == H20:
            coeffs[AVariable.h2()] = coeffs.get(AVariable.h2(), 0) + coeff
        else:
            var = AVariable(sym.ce.value.lower(), sym.degree)
            coeffs[var] = coeffs.get(var, 0) + coeff
    return L1Element(coeffs, b_bit, c_bit)


def format_l1(x: L1Element) -> str:
    """Canonical text: t2 terms by level, then t3, then h2, then b, c."""
    parts: list[tuple[str, int]] = []
    for var in sorted(x.a_coeffs, key=lambda v: v.sort_key):
        parts.append((var.text(), x.a_coeffs[var]))
    if x.b_bit:
        parts.append(("b", 1))
    if x.c_bit:
        parts.append(("c", 1))
    if not parts:
        return "0"
    out: list[str] = []
    for body, coeff in parts:
        mag = abs(coeff)
        piece = body if mag == 1 else f"{mag}*{body}"
        if not out:
            out.append(piece if coeff > 0 else f"-{piece}")
        else:
            out.append(("+ " if coeff > 0 else "- ") + piece)
    return " ".join(out)


_L1_TERM = re.compile(
    r"\s*(?P<sign>[+-])?\s*(?:(?P<coeff>\d+)\s*\*\s*)?"
    r"(?P<var>t2\[\s*[+-]?\d+\s*\]|t3\[\s*[+-]?\d+\s*\]|h2|b|c)\s*"
)
_LEVEL = re.compile(r"\[\s*([+-]?\d+)\s*\]")


def parse_l1(text: str) -> L1Element:
    """Parse the signed-sum text form of a group element."""
    s = text.strip()
    if s == "0":
        return L1Element.zero()
    if not s:
        raise L1SyntaxError("empty element text (the zero element is '0')")
    coeffs: dict[AVariable, int] = {}
    b_bit = 0
    c_bit = 0
    pos = 0
    first = True
    while pos < len(s):
        m = _L1_TERM.match(s, pos)
        if not m:
            raise L1SyntaxError(f"cannot parse element text at {s[pos:]!r}")
        if not first and m.group("sign") is None:
            raise L1SyntaxError(f"missing sign before {s[pos:]!r}")
        sign = -1 if m.group("sign") == "-" else 1
        coeff = sign * int(m.group("coeff") or 1)
        var = m.group("var")
        if var == "b":
            b_bit += coeff
        elif var == "c":
            c_bit += coeff
        elif var == "h2":
            coeffs[AVariable.h2()] = coeffs.get(AVariable.h2(), 0) + coeff
        else:
            level = int(_LEVEL.search(var).group(1))
            key = AVariable(var[:2], level)
            coeffs[key] = coeffs.get(key, 0) + coeff
        pos = m.end()
        first = False
    return L1Element(coeffs, b_bit, c_bit)
