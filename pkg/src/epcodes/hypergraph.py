"""Uniform hypergraphs of decoding sets and their strong colorings.

Vertices are 0-based in memory and 1-based in files and reports.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .galois import FieldSpec, field as galois_field

DEFAULT_BUDGET = 10**7
DEFAULT_PG_CAP = 120

# the three binary vectors spanning the Fano code; column i labels vertex i
FANO_VECTORS = (
    (0, 0, 0, 1, 1, 1, 1),
    (0, 1, 1, 1, 0, 0, 1),
    (1, 1, 0, 1, 1, 0, 0),
)


class HypergraphError(ValueError):
    pass


class HypergraphParseError(HypergraphError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Hypergraph:
    n: int
    k: int
    edges: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if self.n < 0 or self.k < 1:
            raise HypergraphError(f"bad dimensions n={self.n} k={self.k}")
        normalized = set()
        for e in self.edges:
            e = tuple(sorted(int(v) for v in e))
            if len(e) != self.k or len(set(e)) != self.k:
                raise HypergraphError(f"edge {e} is not a {self.k}-set")
            if e[0] < 0 or e[-1] >= self.n:
                raise HypergraphError(f"edge {e} has a vertex outside [0, {self.n})")
            normalized.add(e)
        object.__setattr__(self, "edges", tuple(sorted(normalized)))

    def __contains__(self, edge: Iterable[int]) -> bool:
        return tuple(sorted(edge)) in self._edge_set

    @property
    def _edge_set(self) -> frozenset:
        cached = self.__dict__.get("_edge_set_cache")
        if cached is None:
            cached = frozenset(self.edges)
            object.__setattr__(self, "_edge_set_cache", cached)
        return cached

    def non_isolated(self) -> list[int]:
        return sorted({v for e in self.edges for v in e})

    def add_edge(self, edge: Sequence[int]) -> Hypergraph:
        return Hypergraph(self.n, self.k, self.edges + (tuple(edge),))


@dataclass(frozen=True)
class Coloring:
    colors: tuple[int, ...]

    @property
    def c(self) -> int:
        return len(set(self.colors))

    def __len__(self) -> int:
        return len(self.colors)


@dataclass
class ChromaticResult:
    coloring: Coloring
    lower_bound: int
    status: str  # "exact" or "bound-only"
    nodes: int = 0

    @property
    def colors_used(self) -> int:
        return self.coloring.c


# builders


def complete(n: int, k: int) -> Hypergraph:
    if not 1 <= k <= n:
        raise HypergraphError(f"need 1 <= k <= n, got n={n} k={k}")
    return Hypergraph(n, k, tuple(itertools.combinations(range(n), k)))


def cycle(n: int) -> Hypergraph:
    if n < 3:
        raise HypergraphError("a cycle needs at least 3 vertices")
    return Hypergraph(n, 2, tuple((i, (i + 1) % n) for i in range(n)))


def fano_columns() -> list[tuple[int, int, int]]:
    return list(zip(*FANO_VECTORS))


def fano_complement() -> Hypergraph:
    """Triples of [7] that are not lines of the Fano plane."""
    cols = fano_columns()
    edges = [
        e
        for e in itertools.combinations(range(7), 3)
        if any(a ^ b ^ c for a, b, c in zip(*(cols[v] for v in e)))
    ]
    return Hypergraph(7, 3, tuple(edges))


def pg_hypergraph(f: FieldSpec, k: int, max_vertices: int = DEFAULT_PG_CAP) -> Hypergraph:
    """Normalized vectors of F^k; edges are the linearly independent k-sets."""
    if k < 2:
        raise HypergraphError("k must be at least 2")
    n = (f.q**k - 1) // (f.q - 1)
    if n > max_vertices:
        raise HypergraphError(f"instance too large: n={n} exceeds cap {max_vertices}")
    vectors = f.normalized_vectors(k)
    edges = [
        e for e in itertools.combinations(range(n), k) if f.rank([vectors[v] for v in e]) == k
    ]
    return Hypergraph(n, k, tuple(edges))


def two_section(g: Hypergraph) -> Hypergraph:
    pairs = {p for e in g.edges for p in itertools.combinations(e, 2)}
    return Hypergraph(g.n, 2, tuple(pairs))


def adjacency(g: Hypergraph) -> list[set[int]]:
    """Neighbour sets of the 2-section."""
    adj: list[set[int]] = [set() for _ in range(g.n)]
    for e in g.edges:
        for u, v in itertools.combinations(e, 2):
            adj[u].add(v)
            adj[v].add(u)
    return adj


# coloring


def validate_coloring(g: Hypergraph, c: Coloring | Sequence[int]) -> bool:
    colors = c.colors if isinstance(c, Coloring) else tuple(c)
    if len(colors) != g.n:
        raise HypergraphError(f"coloring has length {len(colors)}, expected {g.n}")
    return all(len({colors[v] for v in e}) == g.k for e in g.edges)


def greedy_coloring(g: Hypergraph, adj: list[set[int]] | None = None) -> Coloring:
    adj = adjacency(g) if adj is None else adj
    order = sorted(range(g.n), key=lambda v: (-len(adj[v]), v))
    colors = [-1] * g.n
    for v in order:
        taken = {colors[u] for u in adj[v]}
        colors[v] = next(c for c in itertools.count() if c not in taken)
    return Coloring(tuple(colors))


def greedy_clique(adj: list[set[int]]) -> list[int]:
    """Largest clique found by greedy growth from every start vertex."""
    n = len(adj)
    order = sorted(range(n), key=lambda v: (-len(adj[v]), v))
    best: list[int] = [order[0]] if n else []
    for start in order:
        if len(adj[start]) + 1 <= len(best):
            continue
        clique = [start]
        cand = set(adj[start])
        for v in order:
            if v in cand:
                clique.append(v)
                cand &= adj[v]
        if len(clique) > len(best):
            best = clique
    return best


class _BudgetExhausted(Exception):
    pass


class _Optimal(Exception):
    pass


def _dsatur_branch_and_bound(adj, lower, best_colors, budget):
    n = len(adj)
    best = [len(set(best_colors)), list(best_colors)]
    colors = [-1] * n
    # nbr_counts[v][c]: number of neighbours of v holding color c
    nbr_counts = [dict() for _ in range(n)]
    nodes = 0

    def pick():
        chosen, chosen_sat = -1, -1
        for v in range(n):
            if colors[v] < 0:
                sat = len(nbr_counts[v])
                if sat > chosen_sat:
                    chosen, chosen_sat = v, sat
        return chosen

    def assign(v, c):
        colors[v] = c
        for u in adj[v]:
            d = nbr_counts[u]
            d[c] = d.get(c, 0) + 1

    def unassign(v):
        c = colors[v]
        colors[v] = -1
        for u in adj[v]:
            d = nbr_counts[u]
            if d[c] == 1:
                del d[c]
            else:
                d[c] -= 1

    def search(done, used):
        nonlocal nodes
        if done == n:
            best[0], best[1] = used, list(colors)
            if used <= lower:
                raise _Optimal
            return
        nodes += 1
        if nodes > budget:
            raise _BudgetExhausted
        v = pick()
        for c in range(min(used + 1, best[0] - 1)):
            if c in nbr_counts[v]:
                continue
            assign(v, c)
            search(done + 1, max(used, c + 1))
            unassign(v)

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, n + 1000))
    try:
        search(0, 0)
        complete_search = True
    except _Optimal:
        complete_search = True
    except _BudgetExhausted:
        complete_search = False
    finally:
        sys.setrecursionlimit(limit)
    return best[1], complete_search, nodes


def strong_chromatic(g: Hypergraph, mode: str = "exact", budget: int = DEFAULT_BUDGET) -> ChromaticResult:
    """Strong chromatic number via the 2-section.

    In exact mode a DSATUR branch and bound runs until optimality is proved
    or ``budget`` search nodes are spent; in the latter case the best coloring
    found is returned with status ``bound-only``.
    """
    if mode not in ("exact", "greedy"):
        raise ValueError(f"unknown mode {mode!r}")
    if g.n == 0:
        return ChromaticResult(Coloring(()), 0, "exact")
    adj = adjacency(g)
    greedy = greedy_coloring(g, adj)
    lower = max(len(greedy_clique(adj)), 1)
    if greedy.c <= lower:
        return ChromaticResult(greedy, greedy.c, "exact")
    if mode == "greedy":
        return ChromaticResult(greedy, lower, "bound-only")
    colors, finished, nodes = _dsatur_branch_and_bound(adj, lower, greedy.colors, budget)
    coloring = Coloring(tuple(colors))
    if finished:
        return ChromaticResult(coloring, coloring.c, "exact", nodes)
    return ChromaticResult(coloring, lower, "bound-only", nodes)


# text format


def parse_hypergraph(text: str) -> Hypergraph:
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            values = [int(t) for t in line.split()]
        except ValueError:
            raise HypergraphParseError(lineno, f"non-integer token in {raw.strip()!r}") from None
        if header is None:
            if len(values) != 2:
                raise HypergraphParseError(lineno, "header must be '<n> <k>'")
            n, k = values
            if n < 1 or not 1 <= k <= n:
                raise HypergraphParseError(lineno, f"invalid header n={n} k={k}")
            header = (n, k, lineno)
            continue
        n, k, _ = header
        if len(values) != k:
            raise HypergraphParseError(lineno, f"expected {k} vertices, got {len(values)}")
        if len(set(values)) != k:
            raise HypergraphParseError(lineno, "repeated vertex in edge")
        if any(not 1 <= v <= n for v in values):
            raise HypergraphParseError(lineno, f"vertex outside 1..{n}")
        edges.append(tuple(v - 1 for v in values))
    if header is None:
        raise HypergraphParseError(1, "missing header")
    return Hypergraph(header[0], header[1], tuple(edges))


def format_hypergraph(g: Hypergraph) -> str:
    lines = [f"{g.n} {g.k}"]
    lines += [" ".join(str(v + 1) for v in e) for e in g.edges]
    return "\n".join(lines) + "\n"


def load_hypergraph(spec: str) -> Hypergraph:
    """Resolve a shorthand (``complete:n:k``, ``fano-complement``, ``pg:q:k``,
    ``cycle:n``) or read a hypergraph file."""
    parts = spec.split(":")
    try:
        if parts[0] == "complete" and len(parts) == 3:
            return complete(int(parts[1]), int(parts[2]))
        if parts[0] == "cycle" and len(parts) == 2:
            return cycle(int(parts[1]))
        if parts[0] == "pg" and len(parts) == 3:
            return pg_hypergraph(galois_field(int(parts[1])), int(parts[2]))
    except ValueError as exc:
        raise HypergraphError(f"bad shorthand {spec!r}: {exc}") from None
    if spec == "fano-complement":
        return fano_complement()
    path = Path(spec)
    if not path.is_file():
        raise HypergraphError(f"no such hypergraph file or shorthand: {spec}")
    return parse_hypergraph(path.read_text())
