import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from epcodes import codes, galois, hypergraph as hg


def _rows(c):
    return [tuple(r) for r in c.table.tolist()]


def test_messages_are_lexicographic():
    assert codes.messages(2, 2).tolist() == [[0, 0], [0, 1], [1, 0], [1, 1]]
    assert codes.message_index((1, 0, 2), 3) == 11


def test_fano_code_against_brute_force_success():
    c, g = codes.fano_code(), hg.fano_complement()
    for e in g.edges:
        assert codes.edge_success(c, e) == oracles.edge_success(_rows(c), e, 2, 3) == 1
    assert codes.verify_exact(c, g).valid


def test_fano_code_fails_on_first_line():
    cert = codes.verify_exact(codes.fano_code(), hg.complete(7, 3))
    assert not cert.valid
    assert cert.failing_edge == (0, 1, 2)
    a, b = cert.collision
    assert codes.encode(codes.fano_code(), a)[:3] == codes.encode(codes.fano_code(), b)[:3]
    assert (a, b) == ((0, 0, 0), (1, 0, 0))


@pytest.mark.parametrize("name", ["q3-n20", "q4-n7", "q6-n6"])
def test_fixtures_valid_at_their_eps(name):
    c = codes.fixtures()[name]
    target, eps = codes.FIXTURE_TARGETS[name]
    g = hg.load_hypergraph(target)
    rows = _rows(c)
    brute = [oracles.edge_success(rows, e, c.q, 2) for e in g.edges]
    assert min(brute) >= 1 - eps
    cert = codes.verify_eps(c, g, eps)
    assert cert.valid
    assert cert.successes == brute


@pytest.mark.parametrize("name", ["q3-n20", "q4-n7", "q6-n6"])
def test_fixtures_are_not_exact(name):
    c = codes.fixtures()[name]
    target, _ = codes.FIXTURE_TARGETS[name]
    assert not codes.verify_exact(c, hg.load_hypergraph(target)).valid


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11, 13])
def test_rs_code_is_mds_at_length_q_plus_one(q):
    c = codes.rs_code(galois.field(q), q + 1, 2)
    assert codes.verify_exact(c, hg.complete(q + 1, 2)).valid


@pytest.mark.parametrize("q,k", [(4, 3), (5, 3), (7, 4)])
def test_rs_code_general_k_is_mds(q, k):
    c = codes.rs_code(galois.field(q), q + 1, k)
    f = c.field
    for e in itertools.combinations(range(c.n), k):
        assert f.rank(c.generator[:, list(e)].T.tolist()) == k
    assert codes.verify_exact(c, hg.complete(q + 1, k)).valid


def test_rs_code_table_matches_polynomial_evaluation():
    f = galois.field(5)
    c = codes.rs_code(f, 6, 2)
    for m, row in zip(codes.messages(5, 2).tolist(), c.table.tolist()):
        expected = [(m[0] + m[1] * a) % 5 for a in range(5)] + [m[1]]
        assert row == expected


def test_gf19_length_20():
    assert codes.verify_exact(codes.rs_code(galois.field(19), 20, 2), hg.complete(20, 2)).valid


def test_rs_too_long():
    with pytest.raises(codes.CodeError):
        codes.rs_code(galois.field(3), 5, 2)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 3), st.integers(2, 5), st.data())
def test_rank_and_table_paths_agree(q, n, data):
    f = galois.field(q)
    gen = np.array([[data.draw(st.integers(0, q - 1)) for _ in range(n)] for _ in range(2)])
    c = codes.Code.linear(f, gen)
    for e in itertools.combinations(range(n), 2):
        rank = codes.edge_success(c, e, method="rank")
        table = codes.edge_success(c, e, method="table")
        assert rank == table == oracles.edge_success(_rows(c), e, q, 2)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 4), st.integers(2, 5), st.data())
def test_decoder_recovers_whenever_unique(q, n, data):
    table = np.array([[data.draw(st.integers(0, q - 1)) for _ in range(n)] for _ in range(q * q)])
    c = codes.Code.from_table(q, 2, table)
    e = (0, 1)
    dec = codes.edge_decoder(c, e)
    hits = 0
    for m in itertools.product(range(q), repeat=2):
        word = codes.erase(c, m, e)
        assert all(word[i] is None for i in range(n) if i not in e)
        hits += dec.decode(word) == m
    assert Fraction(hits, q * q) == codes.edge_success(c, e)


def test_verify_avg():
    c = codes.rs_code(galois.field(2), 3, 2)
    g = hg.complete(3, 2)
    cert = codes.verify_avg(c, g, Fraction(0))
    assert cert.valid and cert.average == 1
    with pytest.raises(codes.CodeError):
        codes.verify_avg(c, hg.Hypergraph(3, 2, ()), Fraction(0))


def test_dimension_mismatch():
    with pytest.raises(codes.CodeError):
        codes.verify_exact(codes.fano_code(), hg.complete(6, 3))


def test_parallel_verification_matches_serial():
    c = codes.fixtures()["q3-n20"]
    g = hg.complete(20, 2)
    assert codes.verify_eps(c, g, Fraction(1, 3), jobs=4).successes == codes.verify_eps(c, g, Fraction(1, 3)).successes


def test_certificate_lines():
    lines = codes.verify_exact(codes.fano_code(), hg.complete(7, 3)).lines()
    assert "verdict invalid" in lines
    assert "failing_edge {1,2,3}" in lines
    assert "collision 0 0 0 | 1 0 0" in lines


@pytest.mark.parametrize("name", ["fano", "q3-n20", "q4-n7", "q6-n6"])
def test_code_round_trip(name):
    c = codes.fixtures()[name]
    back = codes.parse_code(codes.format_code(c))
    assert back.same_values(c)
    assert back.is_linear == c.is_linear


@pytest.mark.parametrize(
    "text,line",
    [
        ("2 2 3\n0 0 0\n", 2),
        ("x 2 3\n", 1),
        ("2 2 3\n0 0 0\n0 1 1\n1 0 1\n1 1 2\n", 5),
        ("2 2 3\n0 0\n", 2),
        ("6 2 3 linear\n", 1),
    ],
)
def test_code_parse_errors_name_the_line(text, line):
    with pytest.raises(codes.CodeParseError) as err:
        codes.parse_code(text)
    assert err.value.line == line


def test_load_code_shorthands():
    assert codes.load_code("rs:5:6:2").n == 6
    assert codes.load_code("fano").q == 2
    with pytest.raises(codes.CodeError):
        codes.load_code("missing")


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_normalized_column_coloring_of_mds_code(q):
    c = codes.rs_code(galois.field(q), q + 1, 2)
    col = codes.normalized_column_coloring(c)
    assert col.c == q + 1
    assert hg.validate_coloring(hg.complete(q + 1, 2), col)
