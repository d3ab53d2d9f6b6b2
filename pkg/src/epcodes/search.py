"""Exhaustive oracles for the smallest alphabet of a hypergraph.

For k = 2 a code over [q] is the same thing as a homomorphism into the
universal graph, so the search runs there. For k >= 3 the column functions
themselves are assigned by backtracking, which is only feasible for tiny
instances.
"""

from __future__ import annotations

import math
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .codes import Code, verify_eps
from .construct import code_from_hom
from .hypergraph import Hypergraph, adjacency
from .universal import CapExceeded, UniversalGraph, UniversalVertex

DEFAULT_BUDGET = 5 * 10**6
HOM_CAPS = {"exact": 3, "eps": 2}
FUNCTION_CAPS = {"n": 5, "q": 2, "k": 3}


@dataclass
class HomResult:
    status: str  # found, absent or unknown
    mapping: dict[int, UniversalVertex] | None
    nodes: int


@dataclass
class QResult:
    status: str  # found, absent or unknown
    q: int | None
    witness: Code | None
    nodes: int = 0
    seconds: float = 0.0
    tried: list[tuple[int, str]] = field(default_factory=list)

    def lines(self) -> list[str]:
        return [
            f"verdict {self.status}",
            f"q {self.q if self.q is not None else '-'}",
            "tried " + " ".join(f"{q}:{s}" for q, s in self.tried),
            f"nodes {self.nodes}",
            f"seconds {self.seconds:.3f}",
        ]


class _Budget(Exception):
    pass


@lru_cache(maxsize=None)
def _target(q: int, eps: Fraction) -> UniversalGraph:
    variant = "balanced" if eps == 0 else "unrestricted"
    graph = UniversalGraph(q, variant, eps)
    graph.adjacency_bits()
    return graph


@lru_cache(maxsize=None)
def _orbit_representatives(q: int, eps: Fraction) -> int:
    """Bitmask of one vertex per orbit under coordinate and alphabet
    permutations; an orbit is fixed by the sorted symbol multiplicities."""
    graph = _target(q, eps)
    seen = set()
    mask = 0
    for i, row in enumerate(graph.vertices):
        profile = tuple(sorted(np.bincount(row, minlength=q).tolist()))
        if profile not in seen:
            seen.add(profile)
            mask |= 1 << i
    return mask


def _components(adj: list[set[int]]) -> list[int]:
    comp = [-1] * len(adj)
    for s in range(len(adj)):
        if comp[s] >= 0:
            continue
        comp[s] = s
        stack = [s]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if comp[u] < 0:
                    comp[u] = s
                    stack.append(u)
    return comp


def hom_search(g: Hypergraph, q: int, eps=0, budget: int = DEFAULT_BUDGET) -> HomResult:
    """Homomorphism from a graph into G_q (eps = 0) or G_{q,eps}.

    Vertices are tried in descending degree order with forward checking on
    neighbour domains. The first vertex of every component only ranges over
    orbit representatives of the target.
    """
    if g.k != 2:
        raise ValueError("homomorphism search needs k = 2")
    eps = Fraction(eps)
    cap = HOM_CAPS["exact" if eps == 0 else "eps"]
    if not 2 <= q <= cap:
        raise CapExceeded(f"target graph for q={q}, eps={eps} is outside the search caps")
    target = _target(q, eps)
    bits = target.adjacency_bits()
    adj = adjacency(g)
    order = sorted((v for v in range(g.n) if adj[v]), key=lambda v: (-len(adj[v]), v))
    comp = _components(adj)
    full = (1 << len(target)) - 1
    reps = _orbit_representatives(q, eps)
    dom = {v: full for v in order}
    started = set()
    for v in order:
        if comp[v] not in started:
            started.add(comp[v])
            dom[v] = reps
    image: dict[int, int] = {}
    nodes = 0

    def rec(pos: int) -> bool:
        nonlocal nodes
        if pos == len(order):
            return True
        v = order[pos]
        cand = dom[v]
        while cand:
            low = cand & -cand
            t = low.bit_length() - 1
            cand ^= low
            nodes += 1
            if nodes > budget:
                raise _Budget
            changed = []
            ok = True
            for u in adj[v]:
                if u not in image and u != v:
                    narrowed = dom[u] & bits[t]
                    if narrowed != dom[u]:
                        changed.append((u, dom[u]))
                        dom[u] = narrowed
                    if not narrowed:
                        ok = False
                        break
            if ok:
                image[v] = t
                if rec(pos + 1):
                    return True
                del image[v]
            for u, old in reversed(changed):
                dom[u] = old
        return False

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, len(order) + 1000))
    try:
        found = rec(0)
    except _Budget:
        return HomResult("unknown", None, nodes)
    finally:
        sys.setrecursionlimit(limit)
    if not found:
        return HomResult("absent", None, nodes)
    mapping = {v: target.vertex(image.get(v, 0)) for v in range(g.n)}
    return HomResult("found", mapping, nodes)


# function-assignment backtracking for general k


def _restricted_growth(length: int, q: int):
    """Sequences over [q] whose symbols first appear in the order 0, 1, 2, ..."""
    out = []
    seq = []

    def rec(top: int):
        if len(seq) == length:
            out.append(tuple(seq))
            return
        for s in range(min(top + 1, q)):
            seq.append(s)
            rec(max(top, s + 1))
            seq.pop()

    rec(0)
    return out


def _column_candidates(q: int, k: int, exact: bool):
    """(general candidates, sorted candidates for a component's first vertex)."""
    length = q**k
    general = _restricted_growth(length, q)
    if exact:
        general = [c for c in general if all(c.count(s) == length // q for s in range(q))]
    first = [c for c in general if list(c) == sorted(c)]
    return general, first


def _function_search(g: Hypergraph, q: int, eps: Fraction, budget: int):
    k = g.k
    length = q**k
    threshold = math.ceil((1 - eps) * length)
    general, first = _column_candidates(q, k, eps == 0)
    adj = adjacency(g)
    comp = _components(adj)
    order = sorted((v for v in range(g.n) if adj[v]), key=lambda v: (-len(adj[v]), v))
    incident = {v: [e for e in g.edges if v in e] for v in order}
    cols: dict[int, np.ndarray] = {}
    started: dict[int, int] = {}
    for v in order:
        started.setdefault(comp[v], v)
    nodes = 0

    def feasible(e) -> bool:
        placed = [v for v in e if v in cols]
        keys = np.zeros(length, dtype=np.int64)
        for v in placed:
            keys = keys * q + cols[v]
        _, counts = np.unique(keys, return_counts=True)
        room = q ** (k - len(placed))
        return int(np.minimum(counts, room).sum()) >= threshold

    def rec(pos: int) -> bool:
        nonlocal nodes
        if pos == len(order):
            return True
        v = order[pos]
        options = first if started[comp[v]] == v else general
        for col in options:
            nodes += 1
            if nodes > budget:
                raise _Budget
            cols[v] = np.array(col, dtype=np.int64)
            if all(feasible(e) for e in incident[v]) and rec(pos + 1):
                return True
            del cols[v]
        return False

    try:
        found = rec(0)
    except _Budget:
        return "unknown", None, nodes
    if not found:
        return "absent", None, nodes
    zero = np.zeros(length, dtype=np.int64)
    table = np.stack([cols.get(v, zero) for v in range(g.n)], axis=1)
    return "found", Code(q, k, g.n, table=table), nodes


def q_exact(
    g: Hypergraph,
    eps=0,
    q_max: int = 3,
    budget: int = DEFAULT_BUDGET,
    caps: dict[str, int] | None = None,
) -> QResult:
    """Smallest q in [2, q_max] admitting a code for g at error eps.

    A hypergraph without edges gets q = 2 by convention.
    """
    eps = Fraction(eps)
    if not 0 <= eps < 1:
        raise ValueError("eps must lie in [0, 1)")
    if q_max < 2:
        raise ValueError("q_max must be at least 2")
    caps = {**FUNCTION_CAPS, **(caps or {})}
    start = time.perf_counter()
    result = QResult("absent", None, None)
    if not g.edges:
        result.status, result.q = "found", 2
        result.witness = Code(2, g.k, g.n, table=np.zeros((2**g.k, g.n), dtype=np.int64))
        result.tried.append((2, "found"))
        result.seconds = time.perf_counter() - start
        return result
    for q in range(2, q_max + 1):
        if g.k == 2:
            hom = hom_search(g, q, eps, budget)
            status, nodes = hom.status, hom.nodes
            witness = code_from_hom(hom.mapping, g, eps) if status == "found" else None
        else:
            if g.n > caps["n"] or q > caps["q"] or g.k > caps["k"]:
                raise CapExceeded(
                    f"function search capped at n <= {caps['n']}, q <= {caps['q']}, k <= {caps['k']}"
                )
            status, witness, nodes = _function_search(g, q, eps, budget)
        result.nodes += nodes
        result.tried.append((q, status))
        if status == "found":
            if not verify_eps(witness, g, eps).valid:
                raise AssertionError("search witness failed verification")
            result.status, result.q, result.witness = "found", q, witness
            break
        if status == "unknown":
            result.status = "unknown"
            break
    result.seconds = time.perf_counter() - start
    return result
