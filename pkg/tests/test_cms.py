import pytest

from conftest import chisquare_pvalue
from genuslab.cms import PointedQuadrangulation, cms_backward, cms_forward, distance_property
from genuslab.maps import fixture_f1, fixture_f2, fixture_f3
from genuslab.oracle import enumerate_quadrangulations, enumerate_unicellular
from genuslab.rng import make_rng
from genuslab.sampler import SamplerSpec, sample_exact
from genuslab.unicellular import LabeledUnicellular, PlaneTree, all_well_labelings, sample_labelled_unicellular


def _labelled(n):
    return [
        LabeledUnicellular(m, lab) for m in enumerate_unicellular(n).maps for lab in all_well_labelings(m)
    ]


def _pointed(n):
    return [PointedQuadrangulation(q, v) for q in enumerate_quadrangulations(n).maps for v in range(q.num_vertices)]


def test_forward_f3_gives_f2():
    for eps in (1, -1):
        pq = cms_forward(LabeledUnicellular(fixture_f3(), (1,)), eps)
        assert pq.map.code == fixture_f2().code
        assert distance_property(pq)


def test_forward_one_edge_tree_gives_f1_at_centre():
    edge = PlaneTree((1, -1)).to_map()
    pq = cms_forward(LabeledUnicellular(edge, (1, 1)), 1)
    assert pq.map.code == fixture_f1().code
    f1 = fixture_f1()
    assert pq.key == PointedQuadrangulation(f1, f1.vertex_of[1]).key


def test_backward_f2_and_f1():
    f2 = fixture_f2()
    for v in range(2):
        lu, eps = cms_backward((f2, v))
        assert lu.map.code == fixture_f3().code and lu.labels == (1,)
        assert eps in (1, -1)
    f1 = fixture_f1()
    lu, _ = cms_backward((f1, f1.vertex_of[1]))
    assert lu.map.num_edges == 1 and lu.map.genus == 0 and lu.labels == (1, 1)


def test_forward_rejects_bad_input():
    edge = PlaneTree((1, -1)).to_map()
    with pytest.raises(ValueError):
        cms_forward((edge, (1, 3)), 1)
    with pytest.raises(ValueError):
        cms_forward(LabeledUnicellular(edge, (1, 1)), 0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_round_trips_on_oracle(n):
    for lu in _labelled(n):
        for eps in (1, -1):
            pq = cms_forward(lu, eps)
            assert pq.map.genus == lu.map.genus
            assert distance_property(pq)
            back, back_eps = cms_backward(pq)
            assert (back.code, back_eps) == (lu.code, eps)
    for pq in _pointed(n):
        lu, eps = cms_backward(pq)
        assert lu.map.num_faces == 1 and lu.map.genus == pq.map.genus
        assert cms_forward(lu, eps).key == pq.key


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_counting_identity(n):
    labelled = _labelled(n)
    images = {cms_forward(lu, eps).key for lu in labelled for eps in (1, -1)}
    assert len(images) == 2 * len(labelled)
    for g in range(n // 2 + 1):
        lab_g = sum(1 for lu in labelled if lu.map.genus == g)
        q_g = len(enumerate_quadrangulations(n, g))
        assert 2 * lab_g == (n + 2 - 2 * g) * q_g
    assert images == {pq.key for pq in _pointed(n)}


def test_distance_property_on_samples():
    rng = make_rng(21)
    for n, g in [(10, 1), (20, 2), (30, 3)]:
        for _ in range(20):
            pq = cms_forward(sample_labelled_unicellular(n, g, rng), 1 if rng.integers(2) else -1)
            assert distance_property(pq)
            assert pq.map.num_vertices == n + 2 - 2 * g and pq.map.genus == g
            pq.map.with_profile("quadrangulation")


@pytest.mark.parametrize("n,g", [(2, 1), (3, 0), (3, 1)])
def test_pipeline_uniform(n, g):
    spec = SamplerSpec(n, g)
    rng = make_rng(22, n, g)
    codes = [sample_exact(spec, rng).code for _ in range(30_000)]
    assert chisquare_pvalue(codes, enumerate_quadrangulations(n, g).codes) > 0.01
