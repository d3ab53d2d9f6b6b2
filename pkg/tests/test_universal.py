import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

import oracles
from epcodes import codes, galois, hypergraph as hg, universal
from epcodes.universal import UniversalGraph, UniversalVertex


def test_adjacency_examples():
    assert universal.gq_adjacent((0, 0, 1, 1), (0, 1, 0, 1))
    assert not universal.gq_adjacent((0, 0, 1, 1), (1, 1, 0, 0))
    u = UniversalVertex.from_shifts(3, (0, 0, 0))
    v = UniversalVertex.from_shifts(3, (0, 1, 2))
    assert oracles.distinct_pairs(u.data, v.data) >= 6
    assert universal.gq_adjacent(u, v, Fraction(1, 3))


def test_adjacency_requires_balanced_for_eps_zero():
    with pytest.raises(universal.UniversalError):
        universal.gq_adjacent((0, 0, 0, 1), (0, 1, 0, 1))


@pytest.mark.parametrize(
    "q,variant,count",
    [(2, "balanced", 6), (3, "balanced", 1680), (3, "cyclic", 27), (3, "perm-blocks", 216), (2, "unrestricted", 16), (5, "cyclic", 3125)],
)
def test_vertex_counts(q, variant, count):
    assert universal.vertex_count(q, variant) == count
    arr = universal.vertex_array(q, variant)
    assert len(arr) == count
    assert len({tuple(r) for r in arr.tolist()}) == count


def test_balanced_vertices_match_multiset_permutations():
    for q in (2, 3):
        got = {tuple(r) for r in universal.vertex_array(q, "balanced").tolist()}
        assert got == oracles.balanced_vectors(q, q)
        assert [tuple(r) for r in universal.vertex_array(q, "balanced").tolist()] == sorted(got)


def test_enumeration_caps():
    with pytest.raises(universal.CapExceeded):
        next(universal.enumerate_vertices(4, "balanced"))
    with pytest.raises(universal.CapExceeded):
        next(universal.enumerate_vertices(3, "unrestricted"))


def test_g2_is_octahedron():
    g = UniversalGraph(2, "balanced").to_hypergraph()
    assert len(g.edges) == 12
    assert {len(a) for a in hg.adjacency(g)} == {4}
    assert hg.strong_chromatic(g).colors_used == 3


def test_g3_degree_matches_brute_force():
    graph = UniversalGraph(3, "balanced")
    arr = graph.vertices.tolist()
    brute = sum(oracles.distinct_pairs(arr[0], v) == 9 for v in arr)
    assert graph.degree(0) == brute


@pytest.mark.parametrize(
    "q,family,size",
    [(2, "Gq", 3), (3, "Gq", 6), (3, "Hq", 3), (4, "Hq_cyclic_eps", 16), (3, "Hq_eps", 18), (4, "Hq_eps", 96)],
)
def test_cover_sizes(q, family, size):
    assert universal.cover_size(q, family) == size
    assert len(universal.canonical_cover(q, family)) == size


def test_gq_eps_cover_size():
    assert universal.cover_size(4, "Gq_eps") == math.comb(13, 10) * 945 == 270270
    assert len(list(universal._perfect_matchings(list(range(10))))) == 945
    cover = universal.canonical_cover(4, "Gq_eps")
    assert len(cover) == 270270
    assert all(len({i for p in s.data for i in p}) == 10 for s in cover[:1000])


@pytest.mark.parametrize("family,q", [("Gq_eps", 3), ("Hq_eps", 2), ("Hq_cyclic_eps", 2)])
def test_cover_rejects_small_q(family, q):
    with pytest.raises(universal.UniversalError):
        universal.canonical_cover(q, family)


def _independent(graph, s):
    members = graph.vertices[s.mask(graph.vertices)].tolist()
    for a, b in itertools.combinations(members, 2):
        if oracles.distinct_pairs(a, b) >= graph.threshold:
            return False
    return True


@pytest.mark.parametrize("q,family", [(2, "Gq"), (3, "Hq"), (3, "Hq_cyclic_eps"), (4, "Hq_cyclic_eps"), (3, "Hq_eps")])
def test_canonical_sets_are_independent_by_brute_force(q, family):
    graph = UniversalGraph.family(q, family)
    for s in universal.canonical_cover(q, family):
        assert _independent(graph, s)


def test_g3_canonical_sets_sampled_pairs():
    graph = UniversalGraph(3, "balanced")
    rng = np.random.default_rng(0)
    for s in universal.canonical_cover(3, "Gq"):
        members = graph.vertices[s.mask(graph.vertices)].tolist()
        for a, b in rng.integers(0, len(members), size=(300, 2)).tolist():
            assert oracles.distinct_pairs(members[a], members[b]) < 9


@pytest.mark.parametrize(
    "q,family,colors",
    [(2, "Gq", 3), (3, "Gq", 6), (3, "Hq", 3), (3, "Hq_cyclic", 3), (4, "Hq_cyclic_eps", 16), (5, "Hq_cyclic_eps", 25), (3, "Hq_eps", 18)],
)
def test_cover_colorings_are_valid(q, family, colors):
    graph = UniversalGraph.family(q, family)
    col = universal.coloring_from_cover(universal.canonical_cover(q, family), graph.vertices)
    assert col.c <= colors
    assert graph.validate_coloring(col)


def test_uncovered_vertex_reported():
    cover = universal.canonical_cover(3, "Gq")[:1]
    with pytest.raises(universal.UncoveredVertex):
        universal.coloring_from_cover(cover, universal.vertex_array(3, "balanced"))


@pytest.mark.parametrize("q", [2, 3, 4])
def test_cyclic_shortcut_matches_definition(q):
    vs = list(itertools.product(range(q), repeat=q))
    for r, s in itertools.product(vs, repeat=2):
        u, v = universal.expand_shifts(q, r), universal.expand_shifts(q, s)
        definitional = oracles.distinct_pairs(u, v) >= (q * q - q)
        assert universal.cyclic_adjacent(r, s, q) == definitional


@pytest.mark.parametrize("q", [2, 3])
def test_clique_from_mds(q):
    clique = universal.clique_from_mds(codes.rs_code(galois.field(q), q + 1, 2))
    assert len(clique) == q + 1
    assert all(universal.gq_adjacent(a, b) for a, b in itertools.combinations(clique, 2))


def test_clique_single_column_and_non_mds():
    one = codes.Code.from_columns(2, 2, [(0, 0, 1, 1)])
    assert len(universal.clique_from_mds(one)) == 1
    with pytest.raises(codes.CodeError):
        universal.clique_from_mds(codes.fixtures()["q4-n7"])


def test_hom_from_code_examples():
    c = codes.rs_code(galois.field(2), 3, 2)
    hom = universal.hom_from_code(c, hg.complete(3, 2))
    assert {u.digits() for u in hom.values()} == {"0011", "0101", "0110"}
    c = codes.Code.from_columns(2, 2, [(0, 0, 1, 1), (0, 0, 1, 0)])
    g = hg.Hypergraph(2, 2, ((0, 1),))
    hom = universal.hom_from_code(c, g, Fraction(1, 4))
    assert universal.gq_adjacent(hom[0], hom[1], Fraction(1, 4))
    with pytest.raises(codes.CodeError):
        universal.hom_from_code(c, g)


def test_hom_from_code_isolated_vertex_goes_to_first_vertex():
    c = codes.Code.from_columns(2, 2, [(0, 0, 1, 1), (0, 1, 0, 1), (1, 1, 0, 0)])
    hom = universal.hom_from_code(c, hg.Hypergraph(3, 2, ((0, 1),)))
    assert hom[2].digits() == "0011"


def test_find_canonical_home_examples():
    home = universal.find_canonical_home((0, 1, 2, 0, 1, 2, 0, 1, 2), "Gq", 3)
    assert home.data == (1, 4)
    assert universal.find_canonical_home((0, 0, 1, 1), "Gq", 2).data == (1, 2)


def test_gq_home_always_found():
    for row in universal.vertex_array(3, "balanced").tolist():
        home = universal.find_canonical_home(row, "Gq", 3)
        assert home is not None and home.contains(row)
        assert home.data[1] <= 4


def test_gq_eps_home_monte_carlo():
    rng = np.random.default_rng(0)
    for row in rng.integers(0, 4, size=(10_000, 16)).tolist():
        home = universal.find_canonical_home(row, "Gq_eps", 4)
        assert home is not None and home.contains(row)
        assert max(i for p in home.data for i in p) <= 13


@pytest.mark.parametrize("n,k", [(2, 2), (3, 3), (2, 3), (3, 2), (1, 4)])
def test_collision_probability_matches_enumeration(n, k):
    vs = oracles.balanced_vectors(n, k)
    enum = Fraction(sum(v[0] == v[1] for v in vs), len(vs))
    assert universal.balanced_collision_probability(n, k) == enum
    assert universal.balanced_collision_closed_form(n, k) == enum


def test_collision_probability_worked_values():
    assert universal.balanced_collision_probability(2, 2) == Fraction(1, 3)
    assert universal.balanced_collision_probability(3, 3) == Fraction(1, 4)
    assert universal.balanced_collision_probability(1, 7) == 0
    with pytest.raises(ValueError):
        universal.balanced_collision_probability(1, 1)


def test_vertex_validation():
    with pytest.raises(universal.UniversalError):
        UniversalVertex(2, (0, 0, 0, 1), "balanced")
    with pytest.raises(universal.UniversalError):
        UniversalVertex(3, (0, 1, 2, 0, 2, 1, 1, 2, 0), "cyclic")
    assert UniversalVertex.from_shifts(3, (0, 2, 1)).shifts == (0, 2, 1)
