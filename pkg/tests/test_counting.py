from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genuslab.counting import (
    CountTable,
    InexactDivisionError,
    catalan,
    cc_table,
    derived_counts,
    double_factorial,
    genus0_closed_form,
    odd_cycle_perm_counts,
    genus_step_violations,
    unicellular_count,
    unicellular_count_recursive,
)


@pytest.fixture(scope="module")
def table():
    return cc_table(12, 6)


def test_initial_conditions(table):
    assert table(0, 0) == 1
    assert table(0, 1) == 0


def test_small_values(table):
    expected = {(1, 0): 2, (2, 0): 9, (3, 0): 54, (2, 1): 1, (3, 1): 20, (4, 2): 21}
    assert {k: table(*k) for k in expected} == expected
    assert not table.inexact


def test_printed_variant_flagged():
    printed = cc_table(4, 2, "printed")
    assert printed(2, 1) == 2
    assert (2, 1) in printed.inexact or printed(2, 1) != cc_table(2, 1)(2, 1)
    with pytest.raises(InexactDivisionError):
        cc_table(4, 2, "printed", strict=True)


def test_zero_region(table):
    for (n, g), value in table.items():
        assert value >= 0
        if n + 2 - 2 * g < 2:
            assert value == 0


def test_genus0_closed_form(table):
    assert [table(n, 0) for n in range(13)] == [genus0_closed_form(n) for n in range(13)]


def test_table_json_round_trip(table):
    back = CountTable.from_json(table.to_json())
    assert back.rows == table.rows
    assert all(isinstance(v, str) for row in table.to_json()["counts"] for v in row)


def test_derived_counts(table):
    rep = derived_counts(table)
    assert rep.u_lab[(1, 0)] == 3
    assert rep.u_lab[(2, 1)] == 1
    assert rep.genus_step_holds[(4, 2)]
    assert 2 * 2 * 21 <= 8**3 * table(4, 1)
    assert isinstance(rep.shrink_ratio[(4, 1)], Fraction)


def test_genus_step_holds_to_200():
    assert genus_step_violations(cc_table(200, 100)) == []


def test_odd_cycle_counts():
    c = odd_cycle_perm_counts(8)
    assert c(0, 0) == 1 and c(1, 1) == 1
    assert c(3, 1) == 2 and c(4, 2) == 8
    assert c(4, 2) + c(4, 4) == 9 == double_factorial(3) ** 2
    for n in range(9):
        for k in range(9):
            if (n - k) % 2:
                assert c(n, k) == 0
        if n % 2 == 0:
            assert sum(c(n, k) for k in range(n + 1)) == double_factorial(n - 1) ** 2


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 9), st.integers(0, 4))
def test_unicellular_count_two_ways(n, g):
    assert unicellular_count(n, g) == unicellular_count_recursive(n, g)


def test_decorated_tree_identity():
    c = odd_cycle_perm_counts(7)
    for n in range(6):
        for g in range(n // 2 + 1):
            k = n + 1 - 2 * g
            assert 2 ** (n + 1) * unicellular_count(n, g) == catalan(n) * c(n + 1, k) * 2**k


def test_catalan():
    assert [catalan(n) for n in range(6)] == [1, 1, 2, 5, 14, 42]
    assert catalan(7) == comb(14, 7) // 8
