import pytest

from genuslab.counting import catalan, cc_table, odd_cycle_perm_counts
from genuslab.maps import fixture_f2, fixture_f3
from genuslab.oracle import (
    OracleLimitError,
    enumerate_quadrangulations,
    enumerate_unicellular,
    quadrangulation_counts,
)


def test_small_lists():
    one = enumerate_quadrangulations(1)
    assert len(one) == 2 and all(m.genus == 0 for m in one.maps)
    two = enumerate_quadrangulations(2).by_genus()
    assert len(two[0]) == 9 and len(two[1]) == 1
    assert two[1][0].code == fixture_f2().code


def test_empty_sentinel():
    zero = enumerate_quadrangulations(0)
    assert len(zero) == 1 and zero.maps[0].genus == 0


def test_counts_match_recurrence():
    table = cc_table(4, 2)
    for (n, g), count in quadrangulation_counts(4).items():
        assert table(n, g) == count


def test_listed_maps_validate_and_are_distinct():
    for n in range(1, 5):
        result = enumerate_quadrangulations(n)
        assert len(set(result.codes)) == len(result)
        for m in result.maps:
            m.with_profile("quadrangulation")


def test_unicellular_lists():
    one = enumerate_unicellular(1)
    assert len(one) == 1 and one.maps[0].genus == 0
    torus = enumerate_unicellular(2, 1)
    assert len(torus) == 1 and torus.maps[0].code == fixture_f3().code


def test_unicellular_decorated_identity():
    c = odd_cycle_perm_counts(7)
    for n in range(6):
        by_genus = enumerate_unicellular(n).by_genus()
        for g in range(n // 2 + 1):
            k = n + 1 - 2 * g
            assert 2 ** (n + 1) * len(by_genus.get(g, [])) == catalan(n) * c(n + 1, k) * 2**k


def test_size_limits():
    with pytest.raises(OracleLimitError):
        enumerate_quadrangulations(5)
    with pytest.raises(OracleLimitError):
        enumerate_unicellular(7)
