"""The universal series map, its finite-difference operator, and the
universal order-n values.

The map F sends a degree-1 group element into the module: on a free
generator a it is the geometric series 1 + a + a^2 + ..., extended as a
homomorphism into the multiplicative group (so F(-a) = 1 - a); on the
four b/c combinations it is given by explicit zeta series; on a general
element k + s it is the action of F(k) on F(s).

The finite-difference operator F' takes a base element and a list of
increments and forms the signed sum of F over all increment subsets.
Its components below degree n vanish and its degree-n component is the
product of the increments, which is what makes the degree-n projection
an order-n invariant evaluator.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .group_l1 import L1Element, decompose, g_u1, l1_add
from .symbols import SymbolTuple
from .series_kernel import (
    MonomialClass,
    SeriesM,
    ZetaClass,
    k_action,
    l1_to_series,
    mul_l,
    project_degree,
)


def _geometric(var, truncation: int) -> SeriesM:
    terms = {}
    for j in range(truncation + 1):
        terms[ZetaClass(MonomialClass.make({var: j}))] = 1
    return SeriesM(truncation, terms)


def _one_minus(var, truncation: int) -> SeriesM:
    terms = {ZetaClass(MonomialClass.one()): 1}
    if truncation >= 1:
        terms[ZetaClass(MonomialClass.make({var: 1}))] = -1
    return SeriesM(truncation, terms)


def f_on_k1(k: L1Element, truncation: int) -> SeriesM:
    """F on the free part: product of geometric series per generator.

    A coefficient kappa on a generator contributes kappa factors of the
    geometric series (inverse factors 1 - a for negative kappa), so the
    result is 1 + k + higher-degree tail.
    """
    if k.b_bit or k.c_bit:
        raise ValueError("free-part map applied to an element with b or c")
    result = SeriesM.one(truncation)
    for var in sorted(k.a_coeffs, key=lambda v: v.sort_key):
        coeff = k.a_coeffs[var]
        factor = _geometric(var, truncation) if coeff > 0 else _one_minus(var, truncation)
        for _ in range(abs(coeff)):
            result = mul_l(result, factor, truncation)
    return result


def _zeta_power(mb: int, mc: int) -> ZetaClass:
    return ZetaClass(MonomialClass.make((), mb=mb, mc=mc))


def f_on_s(s: L1Element, truncation: int) -> SeriesM:
    """F on the four-element b/c part, by explicit series.

    F(0) = 1; F(b) and F(c) are the sums of zeta_{b^j} resp.
    zeta_{c^j}; F(b+c) = 1 + b + c + sum_{j>=2} of the three mixed
    zeta terms at each degree.
    """
    if s.a_coeffs:
        raise ValueError("b/c-part map applied to an element with free generators")
    terms: dict[ZetaClass, int] = {ZetaClass(MonomialClass.one()): 1}
    if s.b_bit and s.c_bit:
        if truncation >= 1:
            terms[_zeta_power(1, 0)] = 1
            terms[_zeta_power(0, 1)] = 1
        for j in range(2, truncation + 1):
            terms[_zeta_power(j, 0)] = 1
            terms[_zeta_power(0, j)] = 1
            terms[_zeta_power(1, j - 1)] = 1
    elif s.b_bit:
        for j in range(1, truncation + 1):
            terms[_zeta_power(j, 0)] = 1
    elif s.c_bit:
        for j in range(1, truncation + 1):
            terms[_zeta_power(0, j)] = 1
    return SeriesM(truncation, terms)


@lru_cache(maxsize=None)
def f_on_l1(l: L1Element, truncation: int) -> SeriesM:
    """F on an arbitrary degree-1 element, via the unique k + s split.

    Multiplicative over free summands: F(k + l') = F(k) acting on F(l').
    Cached; the subset sums below revisit the same arguments heavily.
    """
    k, s = decompose(l)
    return k_action(f_on_k1(k, truncation), f_on_s(s, truncation), truncation)


def signed_subset_sum(base: L1Element, deltas: Sequence[L1Element],
                      sign_arity: int, truncation: int) -> SeriesM:
    """Sum of (-1)^(sign_arity - |A|) F(base + sum of A) over subsets A.

    The subsets are enumerated by a binary counter over delta indices;
    the result does not depend on enumeration order.  Subset sums are
    built incrementally and coefficients accumulated raw, with a single
    reduction at the end.
    """
    n = len(deltas)
    sums = [base] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        sums[mask] = l1_add(sums[mask ^ low], deltas[low.bit_length() - 1])
    acc: dict = {}
    for mask in range(1 << n):
        term = f_on_l1(sums[mask], truncation)
        sign = -1 if (sign_arity - mask.bit_count()) % 2 else 1
        for z, coeff in term.terms.items():
            acc[z] = acc.get(z, 0) + sign * coeff
    return SeriesM(truncation, acc)


@dataclass(frozen=True)
class FPrimeInput:
    """A base element, an ordered list of increments, and a truncation."""

    base: L1Element
    deltas: tuple[L1Element, ...]
    truncation: int

    def __post_init__(self):
        if self.truncation < len(self.deltas):
            raise ValueError(
                f"truncation {self.truncation} below increment count {len(self.deltas)}")


def f_prime(inp: FPrimeInput) -> SeriesM:
    """The finite-difference operator: signed sum over increment subsets."""
    return signed_subset_sum(inp.base, inp.deltas, len(inp.deltas), inp.truncation)


def l1_product_embedded(factors: Sequence[L1Element], truncation: int) -> SeriesM:
    """Ring product of degree-1 elements, viewed in the module."""
    result = SeriesM.one(truncation)
    for f in factors:
        result = mul_l(result, l1_to_series(f, truncation), truncation)
    return result


def g_un(z: SymbolTuple, truncation: int | None = None) -> SeriesM:
    """Universal degree-n value of a tuple: product of the degree-1 values.

    Homogeneous of degree n = |z|; the empty tuple gives the unit.
    """
    if truncation is None:
        truncation = z.n
    return l1_product_embedded([g_u1(s) for s in z], truncation)


def f_un_evaluate(base: L1Element, z: SymbolTuple, n: int,
                  truncation: int | None = None) -> SeriesM:
    """Degree-n projection of the finite-difference sum over a tuple.

    With |z| = n this recovers the universal degree-n value of z; with
    |z| = n + 1 it vanishes, which is the order-n property.  The base
    element is a free parameter and does not affect either outcome.
    Truncating at n is exact: the arithmetic is degree-graded, so
    higher truncations cannot change the degree-n component.
    """
    if truncation is None:
        truncation = n
    full = signed_subset_sum(base, [g_u1(s) for s in z], z.n, truncation)
    return project_degree(full, n)


@dataclass(frozen=True)
class LowestTermReport:
    """Outcome of the lowest-term check for one (base, increments) input."""

    low_degrees_zero: bool
    degree_part_matches: bool
    lowest: SeriesM
    expected: SeriesM

    @property
    def ok(self) -> bool:
        return self.low_degrees_zero and self.degree_part_matches


def check_lowest_term(base: L1Element, deltas: Sequence[L1Element],
                      truncation: int | None = None) -> LowestTermReport:
    """Verify the finite-difference sum is the increment product plus tail.

    Components in degrees below n = len(deltas) must vanish and the
    degree-n component must equal the embedded product of the
    increments.
    """
    n = len(deltas)
    if truncation is None:
        truncation = n + 1
    full = signed_subset_sum(base, deltas, n, truncation)
    low_zero = all(z.degree >= n for z in full.terms)
    lowest = project_degree(full, n)
    expected = project_degree(l1_product_embedded(deltas, truncation), n)
    return LowestTermReport(low_zero, lowest == expected, lowest, expected)
