"""Acceptance suite: one test per exit criterion, exact tolerances.

Run with ``pytest tests/test_acceptance.py -v -s`` to get one printed
pass line per criterion (timing included); a failing criterion fails
its test.
"""

import itertools
import random
import time

import pytest

from ceinv.classification import (
    CoefficientGroup,
    check_delta_relations,
    check_en,
    collapse_check,
    series_to_vector,
    universal_table,
    y_pool,
)
from ceinv.group_l1 import AVariable, L1Element, g_u1, l1_add, parse_l1
from ceinv.series_kernel import (
    MonomialClass,
    SeriesM,
    ZetaClass,
    embed_l_to_m,
    k_action,
    mul_l,
    series_add,
    series_scale,
    zeta_order,
)
from ceinv.symbols import CEType, DecoratedSymbol, H10, Q20, SymbolTuple, parse_tuple
from ceinv.universal_series import (
    check_lowest_term,
    f_on_l1,
    f_un_evaluate,
    g_un,
    signed_subset_sum,
)
from _oracles import (
    naive_fprime,
    random_class,
    random_k_series,
    random_l1,
    random_l_series,
    random_m_series,
)


def _passed(num, name, elapsed, detail):
    print(f"criterion {num:02d} {name}: PASS ({elapsed:.2f}s, {detail})")


def _random_bases(seed, count=3):
    rng = random.Random(seed)
    return [random_l1(rng) for _ in range(count)]


def test_criterion_01_degree_one_relation_suite():
    start = time.perf_counter()
    report = check_delta_relations(lambda z: g_un(z), 1, m_values=range(-5, 6))
    elapsed = time.perf_counter() - start
    assert report.ok, report.sorted_violations()[:5]
    assert elapsed < 1.0
    _passed(1, "degree-1 relation suite", elapsed, f"{report.checked} probes")


def test_criterion_02_lowest_term_exhaustive():
    start = time.perf_counter()
    bases = [parse_l1(t) for t in ("0", "b", "c", "b + c", "t2[0]", "t2[0] + b")]
    pool = [parse_l1(t) for t in ("t2[0]", "-t2[0]", "t3[1]", "-t3[1]", "b", "c")]
    checked = 0
    for n in (1, 2, 3):
        for base in bases:
            for deltas in itertools.product(pool, repeat=n):
                report = check_lowest_term(base, list(deltas), n + 1)
                assert report.ok, (base.text(), [d.text() for d in deltas])
                checked += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    _passed(2, "lowest-term exhaustive sweep", elapsed, f"{checked} inputs")


def test_criterion_03_collapse_identities():
    start = time.perf_counter()
    s_bases = [L1Element.zero(), L1Element.b(), L1Element.c(),
               l1_add(L1Element.b(), L1Element.c())]
    b, c = L1Element.b(), L1Element.c()
    checked = 0
    for n in (1, 2, 3, 4):
        truncation = n + 1
        for base in s_bases:
            lhs = signed_subset_sum(base, (b,) * n, n, truncation)
            diff = series_add(f_on_l1(l1_add(base, b), truncation),
                              series_scale(-1, f_on_l1(base, truncation)))
            rhs = series_scale(1 << (n - 1), diff)
            assert lhs == rhs or lhs == series_scale(-1, rhs)
            checked += 1
            for k in range(1, n):
                deltas = (b,) * k + (c,) * (n - k)
                lhs = signed_subset_sum(base, deltas, n, truncation)
                four = series_add(
                    series_add(f_on_l1(l1_add(base, l1_add(b, c)), truncation),
                               series_scale(-1, f_on_l1(l1_add(base, b), truncation))),
                    series_add(series_scale(-1, f_on_l1(l1_add(base, c), truncation)),
                               f_on_l1(base, truncation)))
                rhs = series_scale(1 << (n - 2), four)
                assert lhs == rhs or lhs == series_scale(-1, rhs)
                checked += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    _passed(3, "collapse identities", elapsed, f"{checked} identities")


def test_criterion_04_order_n_vanishing():
    start = time.perf_counter()
    pool = y_pool(2)
    bases = _random_bases(101)
    checked = 0
    for n in (1, 2, 3):
        for combo in itertools.combinations_with_replacement(pool, n + 1):
            z = SymbolTuple(combo)
            for base in bases:
                value = f_un_evaluate(base, z, n)
                assert value.is_zero(), (n, z.text(), base.text())
                checked += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    _passed(4, "order-n vanishing", elapsed, f"{checked} evaluations")


def test_criterion_05_symbol_map_agreement():
    start = time.perf_counter()
    pool = y_pool(2)
    bases = _random_bases(101)
    checked = 0
    for n in (1, 2, 3):
        for combo in itertools.combinations_with_replacement(pool, n):
            z = SymbolTuple(combo)
            expected = g_un(z)
            for base in bases:
                assert f_un_evaluate(base, z, n) == expected, (n, z.text())
                checked += 1
    elapsed = time.perf_counter() - start
    _passed(5, "degree-n projection recovers universal value", elapsed,
            f"{checked} evaluations")


def test_criterion_06_membership_of_universal_values():
    start = time.perf_counter()
    checked = 0
    for n in (1, 2, 3):
        report = check_en(lambda z: g_un(z), n, pool=y_pool(2))
        assert report.ok, report.sorted_violations()[:5]
        checked += report.checked
    left = g_un(parse_tuple("[H1[0], H1[0], Q2[0]]"))
    right = g_un(parse_tuple("[H1[0], Q2[0], Q2[0]]"))
    assert left == right
    assert left.terms == {ZetaClass(MonomialClass.make((), mb=1, mc=2)): 2}
    elapsed = time.perf_counter() - start
    _passed(6, "membership restrictions of universal values", elapsed,
            f"{checked} probes")


def test_criterion_07_extension_fidelity():
    start = time.perf_counter()
    table, classes = universal_table(y_pool(3), 2)
    rng = random.Random(202)
    tags = list(CEType)
    from ceinv.classification import extend
    for i in range(200):
        query = SymbolTuple([
            DecoratedSymbol(rng.choice(tags), rng.randint(-2, 2))
            for _ in range(2)])
        got = extend(table, query)
        want = series_to_vector(g_un(query), table.group, classes)
        assert got == want, query.text()
    elapsed = time.perf_counter() - start
    _passed(7, "extension fidelity on mixed tuples", elapsed, "200 queries")


def test_criterion_08_repetition_collapse():
    start = time.perf_counter()
    pool = y_pool(2)
    rng = random.Random(303)
    bases = [L1Element.zero()] + _random_bases(304, 2)
    for i in range(50):
        n = rng.randint(1, 4)
        z = SymbolTuple(rng.choices(pool, k=n))
        base = rng.choice(bases)
        report = collapse_check(base, z, n)
        assert report.ok, (z.text(), base.text())
        # independent full-enumeration oracle for the left side
        oracle = naive_fprime(base, [g_u1(s) for s in z], n, sign_arity=n)
        assert report.full == oracle
    elapsed = time.perf_counter() - start
    _passed(8, "repetition collapse identity", elapsed, "50 tuples")


def test_criterion_09_kernel_laws():
    start = time.perf_counter()
    rng = random.Random(404)
    instances = 0
    for _ in range(100):
        n = rng.randint(2, 5)
        x = random_l_series(rng, n)
        y = random_l_series(rng, n)
        z = random_l_series(rng, n)
        assert mul_l(x, y, n) == mul_l(y, x, n)
        assert mul_l(mul_l(x, y, n), z, n) == mul_l(x, mul_l(y, z, n), n)
        assert (mul_l(x, series_add(y, z), n)
                == series_add(mul_l(x, y, n), mul_l(x, z, n)))
        instances += 3
    for _ in range(50):
        n = rng.randint(2, 5)
        k1 = random_k_series(rng, n)
        k2 = random_k_series(rng, n)
        m = random_m_series(rng, n)
        assert (k_action(mul_l(k1, k2, n), m, n)
                == k_action(k1, k_action(k2, m, n), n))
        assert (k_action(series_add(k1, k2), m, n)
                == series_add(k_action(k1, m, n), k_action(k2, m, n)))
        instances += 2
    checked = 0
    while checked < 100:
        n = rng.randint(2, 5)
        cls = random_class(rng, n)
        if cls.is_pure_a:
            continue
        zeta = ZetaClass(cls)
        unit = SeriesM(n, {zeta: 1})
        total = SeriesM.zero(n)
        for _ in range(zeta_order(zeta)):
            total = series_add(total, unit)
        assert total.is_zero()
        assert (1 << cls.repetition) * unit == embed_l_to_m(cls, 1, n)
        checked += 1
        instances += 1
    assert instances == 500
    elapsed = time.perf_counter() - start
    _passed(9, "kernel ring/action/torsion laws", elapsed, f"{instances} instances")


def test_criterion_10_fault_injection():
    start = time.perf_counter()
    z0 = SymbolTuple([DecoratedSymbol(CEType.T3, 0), DecoratedSymbol(CEType.T2, 0)])
    bump = SeriesM(2, {ZetaClass(MonomialClass.make(
        {AVariable.t2(0): 1, AVariable.t3(0): 1})): 1})

    def provider(z):
        value = g_un(z)
        if z == z0:
            value = series_add(value, bump)
        return value

    first = check_delta_relations(provider, 2, m_values=range(-2, 3))
    second = check_delta_relations(provider, 2, m_values=range(-2, 3))
    assert not first.ok
    assert first.sorted_violations() == second.sorted_violations()
    witnesses = first.sorted_violations()
    touched = {DecoratedSymbol(CEType.T3, 0), DecoratedSymbol(CEType.T2, 0)}
    assert any(set(v.context.entries) & touched for v in witnesses)
    elapsed = time.perf_counter() - start
    _passed(10, "fault injection is detected", elapsed,
            f"{len(witnesses)} witnesses")
