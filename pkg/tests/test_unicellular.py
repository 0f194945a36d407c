from collections import Counter
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import chisquare_pvalue
from genuslab.counting import catalan, odd_cycle_perm_counts
from genuslab.maps import fixture_f3
from genuslab.oracle import enumerate_unicellular
from genuslab.rng import make_rng
from genuslab.unicellular import (
    CDecoratedTree,
    LabeledUnicellular,
    PlaneTree,
    Trisection,
    all_plane_trees,
    all_well_labelings,
    assemble_unicellular,
    find_trisections,
    glue_three_corners,
    is_well_labelled,
    labelled_code,
    sample_c_permutation,
    sample_labelled_unicellular,
    sample_plane_tree,
    sample_unicellular,
    sample_well_labeling,
    slice_trisection,
    spanning_tree,
)

ALPHA = 0.01


def test_plane_tree_edge_cases():
    rng = make_rng(0)
    vertex = sample_plane_tree(0, rng).to_map()
    assert vertex.dart_count == 0 and vertex.genus == 0
    assert len(all_plane_trees(3)) == 5
    with pytest.raises(ValueError):
        PlaneTree((1, 1, -1))


def test_plane_tree_uniform_n2():
    rng = make_rng(1)
    draws = [sample_plane_tree(2, rng).steps for _ in range(100_000)]
    support = [t.steps for t in all_plane_trees(2)]
    assert chisquare_pvalue(draws, support) > ALPHA


def test_plane_tree_support_n3():
    rng = make_rng(2)
    seen = {sample_plane_tree(3, rng).steps for _ in range(2000)}
    assert len(seen) == 5


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 40), st.integers(0, 2**31))
def test_plane_tree_to_map_is_a_tree(n, seed):
    m = sample_plane_tree(n, make_rng(seed)).to_map()
    assert m.genus == 0 and m.num_edges == n
    assert m.num_faces == 1 or n == 0


def test_c_permutation_examples():
    rng = make_rng(3)
    cycles, signs = sample_c_permutation(3, 3, rng)
    assert sorted(cycles) == [(0,), (1,), (2,)] and len(signs) == 3
    three = [sample_c_permutation(3, 1, rng)[0][0] for _ in range(20_000)]
    assert chisquare_pvalue(three, [(0, 1, 2), (0, 2, 1)]) > ALPHA
    support = {frozenset(sample_c_permutation(5, 3, rng)[0]) for _ in range(20_000)}
    assert len(support) == 20
    with pytest.raises(ValueError):
        sample_c_permutation(4, 3, rng)


def test_assemble_f3_from_every_decoration():
    f3 = fixture_f3()
    count = 0
    for tree in all_plane_trees(2):
        for cyc in ((0, 1, 2), (0, 2, 1)):
            for sign in (1, -1):
                m = assemble_unicellular(CDecoratedTree(tree, (cyc,), (sign,)))
                assert m.code == f3.code
                count += 1
    assert count == 8 == 2**3 * len(enumerate_unicellular(2, 1))


def test_assemble_identity_is_the_tree():
    for tree in all_plane_trees(4):
        ident = tuple((i,) for i in range(5))
        m = assemble_unicellular(CDecoratedTree(tree, ident, (1,) * 5))
        assert m.code == tree.to_map().code


def test_assemble_shape_all_genera():
    rng = make_rng(4)
    for n, g in [(4, 2), (6, 3), (9, 2), (12, 4)]:
        for _ in range(50):
            cycles, signs = sample_c_permutation(n + 1, n + 1 - 2 * g, rng)
            m = assemble_unicellular(CDecoratedTree(sample_plane_tree(n, rng), cycles, signs))
            assert m.num_faces == 1 and m.genus == g and m.num_edges == n


def _assembled(n, g, draws, seed):
    rng = make_rng(seed)
    out = []
    for _ in range(draws):
        cycles, signs = sample_c_permutation(n + 1, n + 1 - 2 * g, rng)
        out.append(assemble_unicellular(CDecoratedTree(sample_plane_tree(n, rng), cycles, signs)).code)
    return out


@pytest.mark.parametrize("n,g", [(3, 1), (4, 1), (5, 1), (5, 0)])
def test_assemble_uniform_genus_at_most_one(n, g):
    support = enumerate_unicellular(n, g).codes
    assert chisquare_pvalue(_assembled(n, g, 30_000, 5), support) > ALPHA


@pytest.mark.xfail(strict=True, reason="sequential vertex merge is not uniform at genus >= 2 (see ledger)")
def test_assemble_uniform_genus_two():
    support = enumerate_unicellular(5, 2).codes
    assert chisquare_pvalue(_assembled(5, 2, 100_000, 6), support) > ALPHA


def test_decorated_identity():
    c = odd_cycle_perm_counts(6)
    for n in range(6):
        for g in range(n // 2 + 1):
            k = n + 1 - 2 * g
            assert 2 ** (n + 1) * len(enumerate_unicellular(n, g)) == catalan(n) * c(n + 1, k) * 2**k


@pytest.mark.parametrize("n,g,draws", [(2, 1, 1000), (3, 1, 20_000), (4, 1, 20_000), (4, 2, 20_000), (5, 1, 100_000), (5, 2, 100_000)])
def test_unicellular_sampler_uniform(n, g, draws):
    rng = make_rng(7, n, g)
    codes = [sample_unicellular(n, g, rng).code for _ in range(draws)]
    assert chisquare_pvalue(codes, enumerate_unicellular(n, g).codes) > ALPHA


def test_trisections_f3():
    f3 = fixture_f3()
    ts = find_trisections(f3)
    assert sorted((t.dart, t.next) for t in ts) == [(1, 2), (2, 3)]


def test_trisections_count_on_oracle():
    for n in range(6):
        for m in enumerate_unicellular(n).maps:
            assert len(find_trisections(m)) == 2 * m.genus


def test_trisections_count_sampled():
    rng = make_rng(8)
    for n, g in [(20, 2), (40, 4), (200, 7)]:
        for _ in range(20):
            assert len(find_trisections(sample_unicellular(n, g, rng))) == 2 * g


def test_slice_f3():
    f3 = fixture_f3()
    for t in find_trisections(f3):
        sliced, corners = slice_trisection(f3, t)
        assert sliced.genus == 0 and sliced.num_edges == 2 and sliced.num_faces == 1
        assert len({sliced.vertex_of[d] for d in corners}) == 3
        assert glue_three_corners(sliced, corners).code == f3.code


def test_slice_rejects_non_trisection():
    with pytest.raises(ValueError):
        slice_trisection(fixture_f3(), Trisection(0, 1))


def test_slice_round_trip_and_injective_on_oracle():
    for n in range(1, 6):
        keys = set()
        total = 0
        for m in enumerate_unicellular(n).maps:
            for t in find_trisections(m):
                sliced, corners = slice_trisection(m, t)
                assert sliced.genus == m.genus - 1
                assert glue_three_corners(sliced, corners) == m
                from genuslab.maps import canonical_relabelling

                r = canonical_relabelling(sliced)
                keys.add((sliced.code, tuple(r[d] for d in corners)))
                total += 1
        assert len(keys) == total


def test_slice_copies_labels():
    rng = make_rng(9)
    lu = sample_labelled_unicellular(8, 2, rng)
    t = find_trisections(lu.map)[0]
    sliced, corners, labels = slice_trisection(lu.map, t, lu.labels)
    assert is_well_labelled(sliced, labels)
    split = {labels[sliced.vertex_of[d]] for d in corners}
    assert split == {lu.labels[lu.map.vertex_of[t.dart]]}
    back, back_labels = glue_three_corners(sliced, corners, labels)
    assert back == lu.map and tuple(back_labels) == lu.labels


def test_well_labeling_f3_always_accepts():
    rng = make_rng(10)
    assert all(sample_well_labeling(fixture_f3(), rng) == (1,) for _ in range(100))


def test_well_labeling_one_edge_tree():
    edge = PlaneTree((1, -1)).to_map()
    assert all_well_labelings(edge) == [(1, 1), (1, 2), (2, 1)]
    rng = make_rng(11)
    draws = [sample_well_labeling(edge, rng) for _ in range(30_000)]
    assert None not in draws
    assert chisquare_pvalue(draws, [(1, 1), (1, 2), (2, 1)]) > ALPHA


def test_each_labelling_has_one_increment_vector():
    for n in range(1, 5):
        for m in enumerate_unicellular(n).maps:
            parent, order = spanning_tree(m)
            vo = m.vertex_of
            hits = Counter()
            for steps in product((-1, 0, 1), repeat=len(order) - 1):
                labels = [0] * m.num_vertices
                for v, s in zip(order[1:], steps):
                    labels[v] = labels[vo[m.alpha[parent[v]]]] + s
                if all(abs(labels[vo[d]] - labels[vo[m.alpha[d]]]) <= 1 for d in range(m.dart_count)):
                    low = min(labels)
                    hits[tuple(x + 1 - low for x in labels)] += 1
            # acceptance probability of each labelling is 3^-(V-1) = 3^-(n-2g)
            assert set(hits.values()) <= {1}
            assert len(order) - 1 == n - 2 * m.genus


def test_labelled_pairs_uniform_3_1():
    support = sorted(
        labelled_code(m, lab) for m in enumerate_unicellular(3, 1).maps for lab in all_well_labelings(m)
    )
    rng = make_rng(12)
    codes = [sample_labelled_unicellular(3, 1, rng).code for _ in range(100_000)]
    assert chisquare_pvalue(codes, support) > ALPHA


def test_labelled_unicellular_rejects_bad_labels():
    edge = PlaneTree((1, -1)).to_map()
    with pytest.raises(ValueError):
        LabeledUnicellular(edge, (1, 3))
    with pytest.raises(ValueError):
        LabeledUnicellular(edge, (2, 2))
