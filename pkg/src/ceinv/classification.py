"""Verification layer: relation checking, membership restrictions,
multilinear extension from seed assignments, and the repetition
collapse identity.

Assignments take values in finitely generated abelian groups whose
torsion is 2-primary; that covers every group the universal
construction produces, and arbitrary coefficient groups enter only
through homomorphisms from the universal one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .symbols import (
    CEType,
    DecoratedSymbol,
    H10,
    H20,
    Q20,
    SymbolTuple,
    membership,
    parse_tuple,
    repetition_of_tuple,
)
from .group_l1 import L1Element, expand_to_y, g_u1
from .series_kernel import SeriesM, zeta_order
from .universal_series import g_un, signed_subset_sum


class SeedConstraintError(ValueError):
    """A seed value violates the two-torsion constraint."""


class TableSyntaxError(ValueError):
    """Raised for unparseable assignment-table text."""


@dataclass(frozen=True)
class CoefficientGroup:
    """A direct sum of cyclic groups, one order per generator.

    Order 0 means an infinite cyclic summand; finite orders must be
    powers of two (the only torsion this theory produces).
    """

    orders: tuple[int, ...]

    def __post_init__(self):
        for o in self.orders:
            if o < 0 or (o > 0 and o & (o - 1)):
                raise ValueError(f"order {o} is not 0 or a power of two")

    @property
    def rank(self) -> int:
        return len(self.orders)


class GroupVector:
    """An element of a coefficient group, coordinates reduced per order."""

    __slots__ = ("group", "coords")

    def __init__(self, group: CoefficientGroup, coords: Iterable[int]):
        coords = tuple(coords)
        if len(coords) != group.rank:
            raise ValueError(f"expected {group.rank} coordinates, got {len(coords)}")
        self.group = group
        self.coords = tuple(
            c % o if o else c for c, o in zip(coords, group.orders))

    @classmethod
    def zero(cls, group: CoefficientGroup) -> "GroupVector":
        return cls(group, (0,) * group.rank)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, GroupVector)
                and self.group == other.group and self.coords == other.coords)

    def __hash__(self) -> int:
        return hash((self.group, self.coords))

    def __add__(self, other: "GroupVector") -> "GroupVector":
        if self.group != other.group:
            raise ValueError("vectors from different groups")
        return GroupVector(self.group,
                           (a + b for a, b in zip(self.coords, other.coords)))

    def __rmul__(self, k: int) -> "GroupVector":
        return GroupVector(self.group, (k * c for c in self.coords))

    def __neg__(self) -> "GroupVector":
        return (-1) * self

    def in_two_torsion(self) -> bool:
        return ((2 * self).is_zero())

    def divisible_by_pow2(self, r: int) -> bool:
        """Solvability of 2^r x = v per cyclic coordinate."""
        if r <= 0:
            return True
        step = 1 << r
        for c, o in zip(self.coords, self.group.orders):
            modulus = step if o == 0 else min(step, o)
            if c % modulus:
                return False
        return True

    def text(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"

    def __str__(self) -> str:
        return self.text()

    def __repr__(self) -> str:
        return f"GroupVector{self.text()}"


def parse_group_vector(text: str, group: CoefficientGroup) -> GroupVector:
    """Parse ``(v1, v2, ...)`` against a group; ``()`` is the rank-0 vector."""
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise ValueError(f"malformed vector {text!r} (expected (v, ...))")
    body = s[1:-1].strip().rstrip(",")
    try:
        coords = [int(t) for t in body.split(",")] if body else []
    except ValueError:
        raise ValueError(f"malformed vector {text!r}") from None
    return GroupVector(group, coords)


class AssignmentTable:
    """Seed values on Y-tuples, extendable to arbitrary tuples.

    Any seeded tuple containing H1[0] or Q2[0] must map into the
    two-torsion subgroup; unlisted Y-tuples are zero.
    """

    def __init__(self, group: CoefficientGroup, n: int,
                 seed: dict[SymbolTuple, GroupVector] | None = None):
        self.group = group
        self.n = n
        self.seed: dict[SymbolTuple, GroupVector] = {}
        for z, value in (seed or {}).items():
            self.set(z, value)

    def set(self, z: SymbolTuple, value: GroupVector) -> None:
        if z.n != self.n:
            raise ValueError(f"tuple {z} has arity {z.n}, table expects {self.n}")
        has_symmetric = False
        for s in z:
            flags = membership(s)
            if not flags.in_y:
                raise ValueError(f"seed tuple entry {s} lies outside Y")
            has_symmetric = has_symmetric or flags.is_h10 or flags.is_q20
        if value.group != self.group:
            raise ValueError("seed value from a different group")
        if has_symmetric and not value.in_two_torsion():
            raise SeedConstraintError(
                f"value {value} at {z} must be annihilated by 2")
        if value.is_zero():
            self.seed.pop(z, None)
        else:
            self.seed[z] = value

    def lookup(self, z: SymbolTuple) -> GroupVector:
        return self.seed.get(z, GroupVector.zero(self.group))


def extend(table: AssignmentTable, query: SymbolTuple) -> GroupVector:
    """Value of the unique relation-respecting extension at any tuple.

    Each entry is expanded over Y; the n-fold tensor of expansion
    coefficients weights the seeded values.  Symmetric in the entries
    by construction.
    """
    if query.n != table.n:
        raise ValueError(f"query arity {query.n} does not match table arity {table.n}")
    slots = [list(expand_to_y(s).terms.items()) for s in query.entries]
    total = GroupVector.zero(table.group)
    for combo in itertools.product(*slots):
        weight = 1
        for _, coeff in combo:
            weight *= coeff
        if weight == 0:
            continue
        ytuple = SymbolTuple(sym for sym, _ in combo)
        total = total + weight * table.lookup(ytuple)
    return total


# ---------------------------------------------------------------------------
# Relation checking

# Each family maps a degree m to (lhs, rhs): formal integer combinations
# of single symbols.  At arity n the family asserts, for every context of
# n - 1 symbols, equality of the weighted provider values.
_Side = list[tuple[int, DecoratedSymbol]]


def _sym(tag: CEType, m: int) -> DecoratedSymbol:
    return DecoratedSymbol(tag, m)


RELATION_FAMILIES: list[tuple[str, Callable[[int], tuple[_Side, _Side]]]] = [
    ("E2 = H2", lambda m: ([(1, _sym(CEType.E2, m))], [(1, _sym(CEType.H2, m))])),
    ("E0 = -H2", lambda m: ([(1, _sym(CEType.E0, m))], [(-1, _sym(CEType.H2, m))])),
    ("E1 = H1", lambda m: ([(1, _sym(CEType.E1, m))], [(1, _sym(CEType.H1, m))])),
    ("T0 = T3", lambda m: ([(1, _sym(CEType.T0, m))], [(1, _sym(CEType.T3, m))])),
    ("T1 = T2", lambda m: ([(1, _sym(CEType.T1, m))], [(1, _sym(CEType.T2, m))])),
    ("2*H1 = 0", lambda m: ([(2, _sym(CEType.H1, m))], [])),
    ("H1 shift", lambda m: ([(1, _sym(CEType.H1, m))], [(1, _sym(CEType.H1, m - 1))])),
    ("2*Q2 = 0", lambda m: ([(2, _sym(CEType.Q2, m))], [])),
    ("Q2 shift", lambda m: ([(1, _sym(CEType.Q2, m))], [(1, _sym(CEType.Q2, m - 1))])),
    ("H2 step", lambda m: ([(1, _sym(CEType.H2, m)), (-1, _sym(CEType.H2, m - 1))],
                           [(1, _sym(CEType.T3, m)), (-1, _sym(CEType.T2, m))])),
    ("Q4 step", lambda m: ([(1, _sym(CEType.Q4, m)), (-1, _sym(CEType.Q3, m))],
                           [(1, _sym(CEType.T3, m)), (-1, _sym(CEType.T3, m - 1))])),
    ("Q3 step", lambda m: ([(1, _sym(CEType.Q3, m)), (-1, _sym(CEType.Q2, m))],
                           [(1, _sym(CEType.T2, m)), (-1, _sym(CEType.T2, m - 1))])),
]


def y_pool(max_level: int) -> list[DecoratedSymbol]:
    """The Y-symbols with T-levels bounded by max_level."""
    pool = [H20, H10, Q20]
    for m in range(-max_level, max_level + 1):
        pool.append(_sym(CEType.T2, m))
        pool.append(_sym(CEType.T3, m))
    return pool


def default_context_pool(max_level: int = 2) -> list[DecoratedSymbol]:
    """Probe contexts: Y plus a non-Y representative of each formula branch."""
    pool = y_pool(max_level)
    for m in range(-max_level, max_level + 1):
        pool.append(_sym(CEType.E0, m))
        pool.append(_sym(CEType.T0, m))
        pool.append(_sym(CEType.Q4, m))
    return pool


@dataclass(frozen=True)
class RelationViolation:
    relation: str
    m: int
    context: SymbolTuple

    def text(self) -> str:
        return f"{self.relation} at m={self.m}, context {self.context.text()}"


@dataclass
class DeltaReport:
    checked: int = 0
    violations: list[RelationViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def sorted_violations(self) -> list[RelationViolation]:
        return sorted(self.violations, key=lambda v: (v.relation, v.m, v.context))


def check_delta_relations(provider: Callable[[SymbolTuple], object], n: int,
                          m_values: Iterable[int] | None = None,
                          context_pool: Sequence[DecoratedSymbol] | None = None,
                          ) -> DeltaReport:
    """Probe every relation family against a tuple-valued assignment.

    The provider must return values supporting +, integer scaling and
    an is_zero test (module series and group vectors both do).  For
    arity n, contexts of n - 1 pool symbols surround the relation slot.
    """
    if m_values is None:
        m_values = range(-3, 4)
    if context_pool is None:
        context_pool = default_context_pool()
    report = DeltaReport()
    cache: dict[SymbolTuple, object] = {}

    def value(z: SymbolTuple):
        if z not in cache:
            cache[z] = provider(z)
        return cache[z]

    contexts = (list(itertools.combinations_with_replacement(context_pool, n - 1))
                if n > 1 else [()])
    for name, family in RELATION_FAMILIES:
        for m in m_values:
            lhs, rhs = family(m)
            for ctx in contexts:
                delta = None
                for coeff, sym in lhs + [(-c, s) for c, s in rhs]:
                    term = coeff * value(SymbolTuple((sym,) + tuple(ctx)))
                    delta = term if delta is None else delta + term
                report.checked += 1
                if delta is not None and not delta.is_zero():
                    report.violations.append(
                        RelationViolation(name, m, SymbolTuple(ctx)))
    return report


@dataclass(frozen=True)
class EnViolation:
    restriction: int
    witness: SymbolTuple
    detail: str

    def text(self) -> str:
        return f"restriction ({self.restriction}) at {self.witness.text()}: {self.detail}"


@dataclass
class EnReport:
    checked: int = 0
    violations: list[EnViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def sorted_violations(self) -> list[EnViolation]:
        return sorted(self.violations, key=lambda v: (v.restriction, v.witness))


def check_en(provider: Callable[[SymbolTuple], object], n: int,
             pool: Sequence[DecoratedSymbol] | None = None) -> EnReport:
    """Check the two membership restrictions over a Y-symbol pool.

    (1) For n >= 3, the value on [H1, H1, Q2] plus any context equals
    the value on [H1, Q2, Q2] plus the same context.
    (2) The value on any Y-tuple z is divisible by 2^{r(z)} in the
    coefficient group, checked per cyclic coordinate.
    """
    if n < 1:
        raise ValueError("arity must be at least 1")
    if pool is None:
        pool = y_pool(2)
    report = EnReport()
    if n >= 3:
        for ctx in itertools.combinations_with_replacement(pool, n - 3):
            left = provider(SymbolTuple((H10, H10, Q20) + tuple(ctx)))
            right = provider(SymbolTuple((H10, Q20, Q20) + tuple(ctx)))
            report.checked += 1
            if left != right:
                report.violations.append(EnViolation(
                    1, SymbolTuple(ctx), "two-vs-one multiplicity values differ"))
    for combo in itertools.combinations_with_replacement(pool, n):
        z = SymbolTuple(combo)
        r = repetition_of_tuple(z)
        report.checked += 1
        if r == 0:
            continue
        if not provider(z).divisible_by_pow2(r):
            report.violations.append(EnViolation(
                2, z, f"value not divisible by 2^{r}"))
    return report


@dataclass(frozen=True)
class CollapseReport:
    """Both sides of the repetition collapse identity for one tuple."""

    repetition: int
    full: SeriesM
    reduced_scaled: SeriesM

    @property
    def ok(self) -> bool:
        return self.full == self.reduced_scaled


def collapse_check(base: L1Element, z: SymbolTuple,
                   truncation: int | None = None,
                   evaluator: Callable[..., SeriesM] = signed_subset_sum,
                   ) -> CollapseReport:
    """Compare the full alternating sum against its collapsed form.

    The reduced index set keeps all entries other than H1[0]/Q2[0] plus
    at most one of each; the full sum over all 2^n subsets must equal
    2^{r(z)} times the reduced sum (signs taken with the full arity).
    """
    n = z.n
    if truncation is None:
        truncation = n
    r = repetition_of_tuple(z)  # also validates entries lie in Y
    reduced_syms: list[DecoratedSymbol] = []
    seen_h = False
    seen_q = False
    for s in z:
        flags = membership(s)
        if flags.is_h10:
            if seen_h:
                continue
            seen_h = True
        elif flags.is_q20:
            if seen_q:
                continue
            seen_q = True
        reduced_syms.append(s)
    full = evaluator(base, [g_u1(s) for s in z], n, truncation)
    reduced = evaluator(base, [g_u1(s) for s in reduced_syms], n, truncation)
    return CollapseReport(r, full, (1 << r) * reduced)


# ---------------------------------------------------------------------------
# Bridging module series to vector presentations

def series_presentation(values: Iterable[SeriesM]):
    """Fix a coordinate order for the zeta classes seen across values.

    Returns (group, classes) with one cyclic generator per class, in
    canonical class order.
    """
    classes = sorted({z for v in values for z in v.terms},
                     key=lambda z: z.cls.sort_key)
    group = CoefficientGroup(tuple(zeta_order(z) for z in classes))
    return group, classes


def series_to_vector(x: SeriesM, group: CoefficientGroup, classes) -> GroupVector:
    index = {z: i for i, z in enumerate(classes)}
    coords = [0] * group.rank
    for z, coeff in x.terms.items():
        if z not in index:
            raise KeyError(f"class {z} absent from the presentation")
        coords[index[z]] = coeff
    return GroupVector(group, coords)


def universal_table(pool: Sequence[DecoratedSymbol], n: int):
    """Seed a table with the universal degree-n values on a Y-pool.

    Returns (table, classes); the coefficient group is the zeta
    presentation of the values' span.
    """
    tuples = [SymbolTuple(c)
              for c in itertools.combinations_with_replacement(pool, n)]
    values = {z: g_un(z) for z in tuples}
    group, classes = series_presentation(values.values())
    table = AssignmentTable(group, n)
    for z, v in values.items():
        table.set(z, series_to_vector(v, group, classes))
    return table, classes


# ---------------------------------------------------------------------------
# Assignment-table text format

def parse_assignment_table(text: str) -> AssignmentTable:
    """Line-oriented table format.

    Header lines ``group: o1, o2, ...`` and ``n: arity``; body lines
    ``[SYM, ...] = (v1, v2, ...)``; ``#`` starts a comment; unlisted
    tuples are zero.
    """
    group: CoefficientGroup | None = None
    arity: int | None = None
    entries: list[tuple[int, SymbolTuple, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("group:"):
            try:
                orders = tuple(int(t) for t in line[len("group:"):].split(","))
            except ValueError:
                raise TableSyntaxError(f"line {lineno}: bad group orders") from None
            group = CoefficientGroup(orders)
        elif line.startswith("n:"):
            try:
                arity = int(line[len("n:"):])
            except ValueError:
                raise TableSyntaxError(f"line {lineno}: bad arity") from None
        else:
            if "=" not in line:
                raise TableSyntaxError(f"line {lineno}: expected 'tuple = vector'")
            left, right = line.split("=", 1)
            ztuple = parse_tuple(left.strip())
            entries.append((lineno, ztuple, right.strip()))
    if group is None or arity is None:
        raise TableSyntaxError("missing 'group:' or 'n:' header")
    table = AssignmentTable(group, arity)
    for lineno, ztuple, vec in entries:
        try:
            table.set(ztuple, parse_group_vector(vec, group))
        except ValueError as exc:
            if isinstance(exc, SeedConstraintError):
                raise
            raise TableSyntaxError(f"line {lineno}: {exc}") from None
    return table


def format_assignment_table(table: AssignmentTable) -> str:
    lines = [
        "group: " + ", ".join(str(o) for o in table.group.orders),
        f"n: {table.n}",
    ]
    for z in sorted(table.seed):
        lines.append(f"{z.text()} = {table.seed[z].text()}")
    return "\n".join(lines) + "\n"
