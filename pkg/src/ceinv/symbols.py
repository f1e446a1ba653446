"""The decorated CE-symbol alphabet and its unordered multisets.

A CE point (a codimension-one self-intersection configuration of an
immersed surface in 3-space) has one of twelve local types.  A decorated
symbol pairs a type with an integer degree.  Invariant values of order n
are indexed by unordered n-tuples of decorated symbols, so tuples are
canonicalized multisets here.

Text syntax: a symbol is ``TAG[m]`` (e.g. ``T3[-2]``) and a tuple is a
bracketed comma-separated list, e.g. ``[T3[1], H2[0]]``; the empty tuple
is ``[]``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator


class SymbolSyntaxError(ValueError):
    """Raised for unparseable symbol or tuple text."""


class CEType(Enum):
    """The twelve local CE configuration types."""

    E0 = "E0"
    E1 = "E1"
    E2 = "E2"
    H1 = "H1"
    H2 = "H2"
    T0 = "T0"
    T1 = "T1"
    T2 = "T2"
    T3 = "T3"
    Q2 = "Q2"
    Q3 = "Q3"
    Q4 = "Q4"


_TAGS = {t.value: t for t in CEType}


@dataclass(frozen=True)
class DecoratedSymbol:
    """A CE type together with an integer degree decoration.

    >>> DecoratedSymbol(CEType.T3, 5).text()
    'T3[5]'
    """

    ce: CEType
    degree: int

    @property
    def sort_key(self) -> tuple[str, int]:
        return (self.ce.value, self.degree)

    def __lt__(self, other: "DecoratedSymbol") -> bool:
        return self.sort_key < other.sort_key

    def text(self) -> str:
        return f"{self.ce.value}[{self.degree}]"

    def __str__(self) -> str:
        return self.text()

    def __repr__(self) -> str:
        return f"DecoratedSymbol({self.ce.value}[{self.degree}])"


# The distinguished symbols spanning every other value.
H20 = DecoratedSymbol(CEType.H2, 0)
H10 = DecoratedSymbol(CEType.H1, 0)
Q20 = DecoratedSymbol(CEType.Q2, 0)


@dataclass(frozen=True)
class YMembership:
    """Membership flags of a symbol in the spanning sets X and Y.

    X holds T2[m], T3[m] for every m plus H2[0]; Y adds the two
    symmetric symbols H1[0] and Q2[0].
    """

    in_x: bool
    in_y: bool
    is_h10: bool
    is_q20: bool


def membership(s: DecoratedSymbol) -> YMembership:
    """Classify a symbol against X and Y."""
    in_x = s.ce in (CEType.T2, CEType.T3) or s == H20
    is_h10 = s == H10
    is_q20 = s == Q20
    return YMembership(in_x, in_x or is_h10 or is_q20, is_h10, is_q20)


class SymbolTuple:
    """An unordered multiset of decorated symbols, stored sorted.

    Two tuples are equal iff their sorted entry sequences agree, so any
    input ordering yields the same canonical value.
    """

    __slots__ = ("entries",)

    entries: tuple[DecoratedSymbol, ...]

    def __init__(self, entries: Iterable[DecoratedSymbol] = ()):
        object.__setattr__(self, "entries", tuple(sorted(entries, key=lambda s: s.sort_key)))

    @property
    def n(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[DecoratedSymbol]:
        return iter(self.entries)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SymbolTuple) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __lt__(self, other: "SymbolTuple") -> bool:
        return [s.sort_key for s in self.entries] < [s.sort_key for s in other.entries]

    def extended(self, extra: Iterable[DecoratedSymbol]) -> "SymbolTuple":
        return SymbolTuple(self.entries + tuple(extra))

    def text(self) -> str:
        return "[" + ", ".join(s.text() for s in self.entries) + "]"

    def __str__(self) -> str:
        return self.text()

    def __repr__(self) -> str:
        return f"SymbolTuple({self.text()})"


_SYMBOL_RE = re.compile(r"^\s*([A-Za-z][A-Za-z0-9]*)\[\s*([^\[\]]*?)\s*\]\s*$")


def parse_symbol(text: str) -> DecoratedSymbol:
    """Parse ``TAG[m]`` into a decorated symbol.

    >>> parse_symbol("Q4[-1]")
    DecoratedSymbol(Q4[-1])
    """
    m = _SYMBOL_RE.match(text)
    if not m:
        raise SymbolSyntaxError(f"malformed symbol: {text!r} (expected TAG[m])")
    tag, deg = m.group(1), m.group(2)
    if tag not in _TAGS:
        raise SymbolSyntaxError(f"unknown CE tag {tag!r} in {text!r}")
    try:
        degree = int(deg)
    except ValueError:
        raise SymbolSyntaxError(f"malformed degree {deg!r} in {text!r}") from None
    return DecoratedSymbol(_TAGS[tag], degree)


def format_symbol(s: DecoratedSymbol) -> str:
    return s.text()


def parse_tuple(text: str) -> SymbolTuple:
    """Parse a bracketed symbol list into a canonical multiset."""
    stripped = text.strip()
    if not (stripped.startswith("[") and stripped.endswith("]")):
        raise SymbolSyntaxError(f"malformed tuple: {text!r} (expected [sym, ...])")
    body = stripped[1:-1].strip()
    if not body:
        return SymbolTuple()
    # Symbols contain one bracket pair with no commas inside, so a flat
    # split on top-level commas is unambiguous.
    return SymbolTuple(parse_symbol(part) for part in body.split(","))


def repetition_of_tuple(z: SymbolTuple) -> int:
    """Excess multiplicity of H1[0] and Q2[0] in a tuple over Y.

    Counts max(0, multiplicity - 1) for each of the two symmetric
    symbols.  Every entry must lie in Y.
    """
    n_h = 0
    n_q = 0
    for s in z:
        flags = membership(s)
        if not flags.in_y:
            raise ValueError(f"tuple entry {s} lies outside Y")
        n_h += flags.is_h10
        n_q += flags.is_q20
    return max(0, n_h - 1) + max(0, n_q - 1)
