import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from ceinv.symbols import (
    CEType,
    DecoratedSymbol,
    H10,
    H20,
    Q20,
    SymbolSyntaxError,
    SymbolTuple,
    format_symbol,
    membership,
    parse_symbol,
    parse_tuple,
    repetition_of_tuple,
)

symbols_st = st.builds(DecoratedSymbol, st.sampled_from(list(CEType)),
                       st.integers(-50, 50))


def test_parse_examples():
    assert parse_symbol("T3[5]") == DecoratedSymbol(CEType.T3, 5)
    assert parse_symbol("H1[0]") == DecoratedSymbol(CEType.H1, 0)
    assert parse_symbol("Q4[-1]") == DecoratedSymbol(CEType.Q4, -1)


def test_parse_accepts_whitespace():
    assert parse_symbol("  T2[ -3 ] ") == DecoratedSymbol(CEType.T2, -3)


@pytest.mark.parametrize("bad", ["Z9[0]", "T3[]", "T3[x]", "T3", "[3]", "T3[1]extra"])
def test_parse_rejects(bad):
    with pytest.raises(SymbolSyntaxError):
        parse_symbol(bad)


def test_parse_format_round_trip_full_range():
    for ce in CEType:
        for m in range(-10, 11):
            s = DecoratedSymbol(ce, m)
            assert parse_symbol(format_symbol(s)) == s


def test_membership_examples():
    flags = membership(DecoratedSymbol(CEType.T2, -3))
    assert flags.in_x and flags.in_y
    flags = membership(H10)
    assert not flags.in_x and flags.in_y and flags.is_h10
    flags = membership(DecoratedSymbol(CEType.E0, 2))
    assert not flags.in_x and not flags.in_y
    assert membership(H20).in_x
    # the distinguished symbols restrict to level 0
    assert not membership(DecoratedSymbol(CEType.H2, 1)).in_y
    assert not membership(DecoratedSymbol(CEType.H1, 2)).in_y
    assert not membership(DecoratedSymbol(CEType.Q2, -1)).in_y


@given(symbols_st)
def test_in_x_implies_in_y(s):
    flags = membership(s)
    assert not flags.in_x or flags.in_y


@given(st.lists(symbols_st, max_size=6))
def test_multiset_canonicalization(entries):
    shuffled = list(entries)
    random.Random(0).shuffle(shuffled)
    assert SymbolTuple(entries) == SymbolTuple(shuffled)
    assert SymbolTuple(entries).entries == SymbolTuple(shuffled).entries


def test_repetition_examples():
    assert repetition_of_tuple(SymbolTuple([H10, H10, Q20])) == 1
    assert repetition_of_tuple(SymbolTuple([
        DecoratedSymbol(CEType.T3, 1), DecoratedSymbol(CEType.T2, 0)])) == 0
    z = SymbolTuple([H10, H10, H10, Q20, Q20])
    # oracle: brute-force multiset count
    counts = Counter(z.entries)
    assert repetition_of_tuple(z) == (counts[H10] - 1) + (counts[Q20] - 1) == 3


def test_repetition_rejects_non_y():
    with pytest.raises(ValueError):
        repetition_of_tuple(SymbolTuple([DecoratedSymbol(CEType.E0, 0)]))


y_symbols_st = st.one_of(
    st.sampled_from([H20, H10, Q20]),
    st.builds(DecoratedSymbol, st.sampled_from([CEType.T2, CEType.T3]),
              st.integers(-5, 5)),
)


@given(st.lists(y_symbols_st, max_size=6))
def test_repetition_permutation_invariant(entries):
    shuffled = list(entries)
    random.Random(1).shuffle(shuffled)
    assert (repetition_of_tuple(SymbolTuple(entries))
            == repetition_of_tuple(SymbolTuple(shuffled)))


def test_tuple_parse_format():
    z = parse_tuple("[T3[1], H2[0]]")
    assert z.n == 2
    assert parse_tuple(z.text()) == z
    assert parse_tuple("[]") == SymbolTuple()
    assert parse_tuple("[ ]").n == 0
    with pytest.raises(SymbolSyntaxError):
        parse_tuple("T3[1], H2[0]")
    with pytest.raises(SymbolSyntaxError):
        parse_tuple("[T3[1]; H2[0]]")


@given(st.lists(symbols_st, max_size=5))
def test_tuple_round_trip(entries):
    z = SymbolTuple(entries)
    assert parse_tuple(z.text()) == z
