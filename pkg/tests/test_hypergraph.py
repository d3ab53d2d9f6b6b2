import itertools

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from epcodes import galois, hypergraph as hg


def test_fano_complement_matches_xor_enumeration():
    g = hg.fano_complement()
    assert len(g.edges) == 28
    assert {frozenset(e) for e in g.edges} == oracles.fano_complement_edges(hg.fano_columns())
    assert (0, 1, 3) in g
    assert (0, 1, 2) not in g


def test_fano_strong_chromatic_number():
    res = hg.strong_chromatic(hg.fano_complement())
    assert (res.colors_used, res.status) == (7, "exact")


@pytest.mark.parametrize("n,k,edges", [(5, 2, 10), (7, 3, 35), (20, 2, 190), (6, 6, 1)])
def test_complete_edge_counts(n, k, edges):
    assert len(hg.complete(n, k).edges) == edges


def test_cycle_and_two_section():
    assert hg.cycle(5).edges == ((0, 1), (0, 4), (1, 2), (2, 3), (3, 4))
    sec = hg.two_section(hg.complete(4, 3))
    assert sec.k == 2 and len(sec.edges) == 6


@pytest.mark.parametrize("q,k,n", [(2, 3, 7), (3, 2, 4), (3, 3, 13), (4, 2, 5)])
def test_pg_hypergraph_is_complete_on_normalized_vectors(q, k, n):
    g = hg.pg_hypergraph(galois.field(q), k)
    assert g.n == n
    assert len(g.edges) == len(list(itertools.combinations(range(n), k))) - _dependent(q, k)


def _dependent(q, k):
    f = galois.field(q)
    vs = f.normalized_vectors(k)
    return sum(f.rank([vs[i] for i in e]) < k for e in itertools.combinations(range(len(vs)), k))


def test_pg_cap():
    with pytest.raises(hg.HypergraphError):
        hg.pg_hypergraph(galois.field(11), 3)


@pytest.mark.parametrize(
    "g,chi", [(hg.complete(5, 2), 5), (hg.cycle(5), 3), (hg.cycle(6), 2), (hg.complete(6, 3), 6)]
)
def test_known_chromatic_numbers(g, chi):
    assert hg.strong_chromatic(g).colors_used == chi


def random_hypergraphs(max_n=8):
    return st.integers(2, max_n).flatmap(
        lambda n: st.integers(2, min(3, n)).flatmap(
            lambda k: st.lists(
                st.sampled_from(list(itertools.combinations(range(n), k))), max_size=10
            ).map(lambda es: hg.Hypergraph(n, k, tuple(es)))
        )
    )


@settings(max_examples=80, deadline=None)
@given(random_hypergraphs())
def test_exact_solver_matches_brute_force(g):
    res = hg.strong_chromatic(g)
    assert res.status == "exact"
    assert hg.validate_coloring(g, res.coloring)
    assert res.colors_used == max(oracles.chromatic_number(g.n, g.edges), 1)


@settings(max_examples=50, deadline=None)
@given(random_hypergraphs(12))
def test_greedy_is_valid_upper_bound(g):
    greedy = hg.strong_chromatic(g, mode="greedy")
    exact = hg.strong_chromatic(g)
    assert hg.validate_coloring(g, greedy.coloring)
    assert greedy.lower_bound <= exact.colors_used <= greedy.colors_used


def test_budget_exhaustion_reports_bound_only():
    res = hg.strong_chromatic(hg.fano_complement(), budget=1)
    assert res.status in ("bound-only", "exact")
    assert hg.validate_coloring(hg.fano_complement(), res.coloring)


def test_edge_normalization_and_rejects():
    g = hg.Hypergraph(4, 2, ((1, 0), (0, 1), (3, 2)))
    assert g.edges == ((0, 1), (2, 3))
    with pytest.raises(hg.HypergraphError):
        hg.Hypergraph(3, 2, ((0, 0),))
    with pytest.raises(hg.HypergraphError):
        hg.Hypergraph(3, 2, ((0, 3),))


def test_parse_format_round_trip():
    g = hg.fano_complement()
    assert hg.parse_hypergraph(hg.format_hypergraph(g)) == g
    text = "# comment\n4 2\n1 2  # first\n\n3 4\n"
    assert hg.parse_hypergraph(text).edges == ((0, 1), (2, 3))


@pytest.mark.parametrize(
    "text,line",
    [("4 2\n1 2\n1 5\n", 3), ("4 2\n1 2 3\n", 2), ("4\n", 1), ("4 2\n2 2\n", 2), ("", 1), ("4 2\n1 a\n", 2)],
)
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(hg.HypergraphParseError) as err:
        hg.parse_hypergraph(text)
    assert err.value.line == line
    assert f"line {line}" in str(err.value)


@pytest.mark.parametrize("spec,n", [("complete:6:3", 6), ("cycle:7", 7), ("pg:2:3", 7), ("fano-complement", 7)])
def test_shorthands(spec, n):
    assert hg.load_hypergraph(spec).n == n


def test_unknown_shorthand():
    with pytest.raises(hg.HypergraphError):
        hg.load_hypergraph("nowhere.hg")
