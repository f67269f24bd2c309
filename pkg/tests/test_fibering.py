import random
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from helpers import random_bundle
from surfbundle.construction import LabeledGraph, Vertex, Edge, line_graph_family, build_section_sum
from surfbundle.covers import cyclic_cover, free_action_from_cover, identity_cover
from surfbundle.errors import GenusTooSmall, GraphInvalid, NoDifferingVertex, NonIntegralFiberChi, TooManyVertices
from surfbundle.fibering import (
    CoverVertexData,
    _genus_from_chi,
    all_certificates,
    basic_construction,
    build_cover_construction,
    certify_distinct,
    check_descriptors,
    cover_euler_char,
    cover_fiber_genus_oracle,
    enumerate_cover_fiberings,
    enumerate_fiberings,
    fiberings,
    tower_construction,
    two_sheet_example,
    verify_certificate,
)
from surfbundle.surfaces import FiniteGroup, FreeActionData, euler_characteristic


def test_basic_construction_fiberings():
    b = basic_construction(2)
    fibs = enumerate_fiberings(b)
    assert [f.id for f in fibs] == ["11", "12", "21", "22"]
    assert all(f.base_genus == 2 and f.fiber_genus == 4 and f.check_euler() for f in fibs)


def test_basic_construction_genus_three():
    b = basic_construction(3)
    f = enumerate_fiberings(b)[0]
    assert f.fiber_genus == 6 and f.total_euler_characteristic == 40


def test_basic_construction_rejects_low_genus():
    with pytest.raises(GenusTooSmall):
        basic_construction(1)


def test_line_graph_fibering_counts():
    assert len(enumerate_fiberings(line_graph_family(3))) == 8
    assert len(enumerate_fiberings(line_graph_family(1))) == 2


def test_enumeration_guard():
    with pytest.raises(TooManyVertices):
        enumerate_fiberings(line_graph_family(21))


def test_fibering_ids_sorted_and_distinct():
    ids = [f.id for f in enumerate_fiberings(line_graph_family(4))]
    assert ids == sorted(ids) and len(set(ids)) == 16


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_every_descriptor_multiplies_euler(seed):
    b = random_bundle(random.Random(seed), max_vertices=5)
    for f in enumerate_fiberings(b):
        assert euler_characteristic(f.base_genus) * euler_characteristic(f.fiber_genus) == \
            f.total_euler_characteristic


def test_two_sheet_cover_fiber_genus():
    cc = two_sheet_example()
    fibs = {f.id: f for f in enumerate_cover_fiberings(cc)}
    assert set(fibs) == {"0", "1", "2"}
    assert fibs["1"].fiber_genus == 3 + 2 * 2
    assert fibs["1"].fiber_genus == cover_fiber_genus_oracle(cc, "1")
    check_descriptors(cc)


def test_single_vertex_cover_construction():
    data = [CoverVertexData(identity_cover(2), FreeActionData(FiniteGroup.trivial(), 2))]
    cc = build_cover_construction(LabeledGraph((Vertex("a", "+"),), ()), 2, data)
    fibs = enumerate_cover_fiberings(cc)
    assert len(fibs) == 2
    assert all(f.base_genus == 2 and f.fiber_genus == 2 for f in fibs)


def test_tower_two():
    cc = tower_construction(2)
    fibs = enumerate_cover_fiberings(cc)
    assert cover_euler_char(cc) == 64
    assert [(f.id, f.base_genus, f.fiber_genus) for f in fibs] == [("0", 5, 5), ("1", 3, 9), ("2", 2, 17)]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_tower_oracle_agreement(n):
    cc = tower_construction(n)
    assert len(enumerate_cover_fiberings(cc)) == n + 1
    for f in enumerate_cover_fiberings(cc):
        assert f.fiber_genus == cover_fiber_genus_oracle(cc, f.id)
        assert f.check_euler()


@pytest.mark.parametrize("d1, d2", [(1, 2), (2, 2), (3, 3), (2, 4)])
def test_two_vertex_covers_match_boundary_count(d1, d2):
    # both vertices cover the same surface: d1(h1-1) = d2(h2-1)
    base = d1 * d2 + 1
    h1, h2 = d2 + 1, d1 + 1
    trivial = FiniteGroup.trivial()
    data = [CoverVertexData(cyclic_cover(h1, d1), FreeActionData(trivial, h1)),
            CoverVertexData(cyclic_cover(h2, d2), FreeActionData(trivial, h2))]
    cc = build_cover_construction(LabeledGraph((Vertex("u", "+"), Vertex("w", "-")), (Edge(0, 1, 0, 0),)),
                                  base, data)
    fibs = {f.id: f for f in enumerate_cover_fiberings(cc)}
    assert fibs["u"].fiber_genus == base + d1 * h2
    assert fibs["w"].fiber_genus == base + d2 * h1
    assert fibs["0"].fiber_genus == h1 + h2
    check_descriptors(cc)


def test_cover_construction_validation():
    trivial = FiniteGroup.trivial()
    good = CoverVertexData(cyclic_cover(2, 2), FreeActionData(trivial, 2))
    graph = LabeledGraph((Vertex("0", "+"),), ())
    with pytest.raises(GraphInvalid):
        build_cover_construction(graph, 3, [good])
    graph = LabeledGraph((Vertex("a", "+"),), ())
    with pytest.raises(Exception):
        build_cover_construction(graph, 4, [good])
    with pytest.raises(GraphInvalid):
        build_cover_construction(graph, 3, [])


def test_non_integral_fiber_chi():
    with pytest.raises(NonIntegralFiberChi):
        _genus_from_chi(10, 3)
    with pytest.raises(NonIntegralFiberChi):
        _genus_from_chi(-6, 3)  # fiber chi would be odd


def test_certificate_basic():
    b = basic_construction(2)
    c = certify_distinct(b, "11", "22")
    assert c.image_vector == (1, 0, 0, 0) and c.valid
    assert verify_certificate(b, c)
    with pytest.raises(NoDifferingVertex):
        certify_distinct(b, "12", "12")


def test_line_graph_two_certificates():
    certs = all_certificates(line_graph_family(2))
    assert len(certs) == 6
    assert all(c.valid and c.image_vector[0] == 1 for c in certs)


def test_tampered_certificate_fails_verification():
    b = basic_construction(2)
    c = certify_distinct(b, "11", "21")
    assert not verify_certificate(b, replace(c, image_vector=(0, 0, 0, 0)))
    assert not verify_certificate(b, replace(c, image_vector=(2, 0, 0, 0)))
    assert not verify_certificate(b, replace(c, witness_vertex="nope"))


def test_cover_certificates_verify():
    for cc in (two_sheet_example(), tower_construction(2), tower_construction(3)):
        certs = all_certificates(cc)
        n = len(fiberings(cc))
        assert len(certs) == n * (n - 1) // 2
        assert all(c.valid and verify_certificate(cc, c) for c in certs)


def test_monodromy_handle_identifies_fibering():
    f = enumerate_fiberings(basic_construction(2))[1]
    assert f.monodromy_handle == ("section-sum", "12")
    assert f.assignment.values == (1, 2)


def test_cover_group_must_fit_valence():
    # vertex with valence 1 needs |G| >= 1 only; a label outside the trivial group fails
    trivial = FiniteGroup.trivial()
    data = [CoverVertexData(cyclic_cover(2, 2), free_action_from_cover(trivial, 2)) for _ in range(2)]
    graph = LabeledGraph((Vertex("1", "+"), Vertex("2", "-")), (Edge(0, 1, 1, 0),))
    with pytest.raises(GraphInvalid):
        build_cover_construction(graph, 3, data)


def test_section_sum_with_free_action_of_order_three():
    b = build_section_sum(LabeledGraph((Vertex("a", "+"), Vertex("b", "-")), (Edge(0, 1, 2, 1),)),
                          FreeActionData(FiniteGroup.cyclic(3), 4))
    assert len(all_certificates(b)) == 6
