"""Acceptance checks, shared by ``epcodes selftest`` and the test suite.

Each check returns an ``Outcome`` holding its verdict, wall time, runtime
limit and a few ``key value`` detail lines. Checks never write files except
into a temporary directory.
"""

from __future__ import annotations

import itertools
import tempfile
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np

from . import codes, construct, galois, hypergraph as hg, search, universal
from .report import fmt


@dataclass
class Outcome:
    id: int
    name: str
    limit: float
    passed: bool = True
    seconds: float = 0.0
    details: list[str] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)
    data: dict = field(default_factory=dict, repr=False)

    def check(self, ok: bool, what: str) -> bool:
        if not ok:
            self.passed = False
            self.failures.append(what)
        return ok

    def note(self, key: str, value) -> None:
        self.details.append(f"{key} {fmt(value)}")

    @property
    def within_time(self) -> bool:
        return self.seconds < self.limit

    @property
    def ok(self) -> bool:
        return self.passed and self.within_time

    def line(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        return f"{self.id} {self.name} {verdict} {self.seconds:.2f}s limit {self.limit:g}s"


CHECKS: list[tuple[int, str, float, Callable[[Outcome], None]]] = []


def check(id: int, name: str, limit: float):
    def register(fn):
        CHECKS.append((id, name, limit, fn))
        return fn

    return register


@check(1, "fano-separation", 1.0)
def fano_separation(out: Outcome) -> None:
    g = hg.fano_complement()
    out.check(len(g.edges) == 28, "28 edges")
    out.note("edges", len(g.edges))
    cert = codes.verify_exact(codes.fano_code(), g)
    out.check(cert.valid, "binary code exact on the Fano complement")
    out.note("binary_code_valid", cert.valid)
    res = hg.strong_chromatic(g)
    out.check(res.colors_used == 7 and res.status == "exact", "strong chromatic number 7")
    out.note("chromatic", res.colors_used)


@check(2, "eps-fixtures", 3.0)
def eps_fixtures(out: Outcome) -> None:
    fx = codes.fixtures()
    expected_edges = {"q3-n20": 190, "q4-n7": 21, "q6-n6": 15}
    for name, edges in expected_edges.items():
        start = time.perf_counter()
        target, eps = codes.FIXTURE_TARGETS[name]
        g = hg.load_hypergraph(target)
        cert = codes.verify_eps(fx[name], g, eps)
        took = time.perf_counter() - start
        out.check(len(g.edges) == edges, f"{name} edge count {edges}")
        out.check(cert.valid, f"{name} valid at eps {fmt(eps)}")
        out.check(took < 1.0, f"{name} under 1 s")
        out.note(f"{name}_min_success", cert.min_success)
        out.note(f"{name}_threshold", cert.threshold)
        out.data[name] = (cert.successes, cert.threshold)


@check(3, "mds-baselines", 2.0)
def mds_baselines(out: Outcome) -> None:
    cert = codes.verify_exact(codes.rs_code(galois.field(19), 20, 2), hg.complete(20, 2))
    out.check(cert.valid, "GF(19) length 20 exact on K20")
    out.note("gf19_n20", cert.valid)
    for q in (2, 3, 4, 5, 7, 8, 9):
        ok = codes.verify_exact(codes.rs_code(galois.field(q), q + 1, 2), hg.complete(q + 1, 2)).valid
        out.check(ok, f"GF({q}) length {q + 1} exact")
        out.note(f"n({q},2)>=", q + 1 if ok else "fail")


@check(4, "universal-small-q", 30.0)
def universal_small(out: Outcome) -> None:
    g2 = universal.UniversalGraph.family(2, "Gq")
    res = hg.strong_chromatic(g2.to_hypergraph())
    out.check(res.colors_used == 3 and res.status == "exact", "chromatic number of G_2 is 3")
    out.note("chi_G2", res.colors_used)
    g3 = universal.UniversalGraph.family(3, "Gq")
    out.check(len(g3) == 1680, "G_3 has 1680 vertices")
    coloring = universal.coloring_from_cover(universal.canonical_cover(3, "Gq"), g3.vertices)
    out.check(coloring.c == 6 and g3.validate_coloring(coloring), "cover gives a valid 6-coloring of G_3")
    clique = universal.clique_from_mds(codes.rs_code(galois.field(3), 4, 2))
    pairwise = all(universal.gq_adjacent(a, b) for a, b in itertools.combinations(clique, 2))
    out.check(len(clique) == 4 and pairwise, "4-clique in G_3")
    out.note("G3_upper", coloring.c)
    out.note("G3_lower", len(clique))
    out.data["G3"] = np.bincount(coloring.colors).tolist()


@check(5, "cover-colorings", 30.0)
def cover_colorings(out: Outcome) -> None:
    cases = [(3, "Hq", 216, 3), (4, "Hq_cyclic_eps", 256, 16), (5, "Hq_cyclic_eps", 3125, 25), (3, "Hq_eps", 216, 18)]
    for q, family, size, colors in cases:
        graph = universal.UniversalGraph.family(q, family)
        cover = universal.canonical_cover(q, family)
        coloring = universal.coloring_from_cover(cover, graph.vertices)
        label = f"{family}_q{q}"
        out.check(len(graph) == size, f"{label} has {size} vertices")
        out.check(len(cover) == colors == universal.cover_size(q, family), f"{label} cover has {colors} sets")
        out.check(graph.validate_coloring(coloring), f"{label} cover coloring valid")
        out.note(label, f"{len(graph)} vertices, {coloring.c} colors")
        out.data[label] = np.bincount(coloring.colors, minlength=len(cover)).tolist()


@check(6, "average-error", 5.0)
def average_error(out: Outcome) -> None:
    cert = codes.verify_avg(construct.average_error_code(2, 6), hg.complete(6, 2), Fraction(1, 3))
    out.check(cert.average == Fraction(9, 10), "p=2 n=6 average success 9/10")
    out.check(construct.average_error_bound(2, 6) == Fraction(4, 5), "p=2 n=6 bound 4/5")
    out.note("p2_n6_average", cert.average)
    rows = []
    for p in (2, 3, 5):
        floor = 1 - Fraction(1, p + 1)
        for n in range(2, 21):
            c = construct.average_error_code(p, n)
            avg = codes.verify_avg(c, hg.complete(n, 2), Fraction(1, p + 1)).average
            bound = construct.average_error_bound(p, n)
            out.check(avg >= floor, f"p={p} n={n} average above 1-1/(p+1)")
            out.check(avg >= bound, f"p={p} n={n} average above closed-form bound")
            rows.append((p, n, avg, bound))
    out.note("instances", len(rows))
    out.data["rows"] = rows


def random_valid_code(rng: np.random.Generator) -> tuple[codes.Code, hg.Hypergraph]:
    """A random k = 2 code together with a graph it is exactly valid for.

    Columns are random balanced vectors or relabeled columns of the
    length q+1 MDS code; the graph keeps a random subset of the pairs the
    code decodes exactly.
    """
    q = int(rng.integers(2, 4))
    n = int(rng.integers(2, 9))
    mds = codes.rs_code(galois.field(q), q + 1, 2)
    base = np.repeat(np.arange(q), q)
    cols = []
    for _ in range(n):
        if rng.random() < 0.5:
            col = rng.permutation(base)
        else:
            col = rng.permutation(q)[mds.table[:, int(rng.integers(q + 1))]]
        cols.append(col)
    code = codes.Code.from_columns(q, 2, cols)
    edges = [
        e
        for e in itertools.combinations(range(n), 2)
        if codes.edge_success(code, e) == 1 and rng.random() < 0.8
    ]
    return code, hg.Hypergraph(n, 2, tuple(edges))


@check(7, "oracle-agreement", 60.0)
def oracle_agreement(out: Outcome) -> None:
    expected = {"K3": (hg.complete(3, 2), 2), "K4": (hg.complete(4, 2), 3), "C4": (hg.cycle(4), 2), "C5": (hg.cycle(5), 2)}
    for name, (g, q) in expected.items():
        res = search.q_exact(g, 0, q_max=3)
        out.check(res.q == q, f"q({name}) = {q}")
        out.check(codes.verify_exact(res.witness, g).valid, f"{name} witness verifies")
        out.note(f"q_{name}", res.q)
    rng = np.random.default_rng(0)
    roundtrips = 0
    for _ in range(100):
        code, g = random_valid_code(rng)
        hom = universal.hom_from_code(code, g)
        back = construct.code_from_hom(hom, g)
        same = all(codes.edge_success(code, e) == codes.edge_success(back, e) for e in g.edges)
        roundtrips += out.check(same, "hom/code round trip keeps edge success")
    out.note("duality_roundtrips", roundtrips)


def _field_axioms(f: galois.FieldSpec) -> bool:
    a = np.arange(f.q)
    add, mul = f.add_table, f.mul_table
    x, y, z = a[:, None, None], a[None, :, None], a[None, None, :]
    ok = np.array_equal(add, add.T) and np.array_equal(mul, mul.T)
    ok &= bool((add[add[x, y], z] == add[x, add[y, z]]).all())
    ok &= bool((mul[mul[x, y], z] == mul[x, mul[y, z]]).all())
    ok &= bool((mul[x, add[y, z]] == add[mul[x, y], mul[x, z]]).all())
    ok &= bool((add[a, 0] == a).all() and (mul[a, 1] == a).all())
    ok &= bool((add == 0).sum(axis=1).min() == 1)
    nz = a[1:]
    ok &= bool((mul[nz, f.inv_table[nz]] == 1).all())
    ok &= all(f.pow(int(v), f.q - 1) == 1 for v in nz)
    return ok


@check(8, "property-suites", 60.0)
def property_suites(out: Outcome) -> None:
    fields = [q for q in range(2, 65) if galois.is_prime_power(q)]
    bad = [q for q in fields if not _field_axioms(galois.field(q))]
    out.check(not bad, f"field axioms fail for {bad}")
    out.note("fields_checked", len(fields))

    # canonical sets are independent: no adjacent pair inside one set
    for q, family in [(2, "Gq"), (3, "Gq"), (3, "Hq"), (3, "Hq_cyclic_eps"), (4, "Hq_cyclic_eps"), (5, "Hq_cyclic_eps"), (3, "Hq_eps")]:
        graph = universal.UniversalGraph.family(q, family)
        for idx, s in enumerate(universal.canonical_cover(q, family)):
            labels = np.where(s.mask(graph.vertices), 0, np.arange(1, len(graph) + 1))
            out.check(not graph.conflicts(labels), f"{family} q={q} set {s} independent")
    out.note("independence_families", 7)

    for q in (2, 3, 4):
        arr = universal.vertex_array(q, "cyclic")
        shifts = arr[:, ::q]
        graph = universal.UniversalGraph(q, "cyclic", Fraction(1, q))
        for i in range(len(arr)):
            definitional = graph.neighbours_mask(i)
            diffs = (shifts[i][None, :] - shifts) % q
            shortcut = np.array([len(set(row)) >= q - 1 for row in diffs.tolist()])
            out.check(bool((definitional == shortcut).all()), f"cyclic shortcut q={q} vertex {i}")
    out.note("cyclic_shortcut_q", "2,3,4")

    for n, k in [(2, 2), (3, 3)]:
        vectors = set(itertools.permutations([s for s in range(k) for _ in range(n)]))
        enum = Fraction(sum(v[0] == v[1] for v in vectors), len(vectors))
        formula = universal.balanced_collision_probability(n, k)
        out.check(enum == formula == universal.balanced_collision_closed_form(n, k), f"collision ({n},{k})")
        out.note(f"collision_{n}_{k}", formula)

    linear_cases = [(codes.rs_code(galois.field(q), q + 1, 2), hg.complete(q + 1, 2)) for q in (2, 3, 4, 5, 7)]
    rng = np.random.default_rng(1)
    for _ in range(10):
        n = int(rng.integers(3, 10))
        g = hg.Hypergraph(n, 2, tuple(e for e in itertools.combinations(range(n), 2) if rng.random() < 0.5))
        chi = hg.strong_chromatic(g)
        c = max(chi.colors_used, 2)
        base = codes.rs_code(galois.field(galois.next_prime_power(c - 1)), c, 2)
        linear_cases.append((construct.compose(g, chi.coloring, base), g))
    for code, g in linear_cases:
        col = codes.normalized_column_coloring(code)
        out.check(codes.verify_exact(code, g).valid, "linear case is valid")
        out.check(hg.validate_coloring(g, col), "normalized-column coloring valid")
        out.check(col.c <= code.q + 1, "at most q+1 normalized colors")
    out.note("linear_codes_checked", len(linear_cases))

    with tempfile.TemporaryDirectory() as tmp:
        for name, code in codes.fixtures().items():
            path = Path(tmp) / f"{name}.code"
            path.write_text(codes.format_code(code))
            out.check(codes.parse_code(path.read_text()).same_values(code), f"{name} round trip")
        g = hg.fano_complement()
        path = Path(tmp) / "fano.hg"
        path.write_text(hg.format_hypergraph(g))
        out.check(hg.parse_hypergraph(path.read_text()) == g, "hypergraph round trip")


def run_checks(only: set[int] | None = None) -> list[Outcome]:
    results = []
    for id, name, limit, fn in sorted(CHECKS):
        if only and id not in only:
            continue
        results.append(run_check(id))
    return results


def run_check(id: int) -> Outcome:
    for cid, name, limit, fn in CHECKS:
        if cid == id:
            out = Outcome(cid, name, limit)
            start = time.perf_counter()
            try:
                fn(out)
            except Exception as exc:  # a crash is a failed criterion, reported as such
                out.check(False, f"raised {type(exc).__name__}: {exc}")
            out.seconds = time.perf_counter() - start
            return out
    raise KeyError(id)
