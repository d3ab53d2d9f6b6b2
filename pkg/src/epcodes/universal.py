"""Universal graphs for k = 2 codes.

A vertex is a vector in [q]^(q*q), read as a function of the message pair
(m1, m2) at index m1*q + m2. Two vertices are adjacent when the pairs
(u_i, v_i) take at least (1 - eps) * q^2 distinct values; eps = 0 gives G_q.

Variants restrict the vertex set:

* ``balanced``      every symbol appears q times (G_q)
* ``unrestricted``  all of [q]^(q*q) (G_{q,eps})
* ``perm-blocks``   q consecutive blocks, each a permutation of [q] (H_q)
* ``cyclic``        blocks (r_i, r_i+1, ..., r_i+q-1) mod q, stored as r (H_q^cyclic)

Named families fix a variant and an error level:
Gq, Hq, Hq_cyclic (eps = 0) and Gq_eps, Hq_eps, Hq_cyclic_eps (eps = 1/q).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .codes import Code, CodeError, verify_eps
from .hypergraph import Coloring, Hypergraph, complete

VARIANTS = ("balanced", "unrestricted", "perm-blocks", "cyclic")
ENUM_CAPS = {"balanced": 3, "perm-blocks": 3, "cyclic": 6, "unrestricted": 2}
COVER_LIST_CAP = 10**6

FAMILIES = {
    "Gq": ("balanced", False),
    "Hq": ("perm-blocks", False),
    "Hq_cyclic": ("cyclic", False),
    "Gq_eps": ("unrestricted", True),
    "Hq_eps": ("perm-blocks", True),
    "Hq_cyclic_eps": ("cyclic", True),
}


class UniversalError(ValueError):
    pass


class CapExceeded(UniversalError):
    pass


def family_eps(family: str, q: int) -> Fraction:
    if family not in FAMILIES:
        raise UniversalError(f"unknown family {family!r}")
    return Fraction(1, q) if FAMILIES[family][1] else Fraction(0)


# vertices


def expand_shifts(q: int, shifts: Sequence[int]) -> tuple[int, ...]:
    return tuple((r + t) % q for r in shifts for t in range(q))


def is_balanced(data: Sequence[int], q: int) -> bool:
    return len(data) == q * q and all(list(data).count(s) == q for s in range(q))


def is_perm_blocks(data: Sequence[int], q: int) -> bool:
    return len(data) == q * q and all(
        sorted(data[b * q : (b + 1) * q]) == list(range(q)) for b in range(q)
    )


def is_cyclic(data: Sequence[int], q: int) -> bool:
    return len(data) == q * q and tuple(data) == expand_shifts(q, data[::q])


_VARIANT_CHECK = {
    "balanced": is_balanced,
    "perm-blocks": is_perm_blocks,
    "cyclic": is_cyclic,
    "unrestricted": lambda data, q: len(data) == q * q and all(0 <= x < q for x in data),
}


@dataclass(frozen=True)
class UniversalVertex:
    q: int
    data: tuple[int, ...]
    variant: str = "balanced"

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise UniversalError(f"unknown variant {self.variant!r}")
        object.__setattr__(self, "data", tuple(int(x) for x in self.data))
        if not _VARIANT_CHECK[self.variant](self.data, self.q):
            raise UniversalError(f"{self.digits()} is not a {self.variant} vertex for q={self.q}")

    @classmethod
    def from_shifts(cls, q: int, shifts: Sequence[int]) -> UniversalVertex:
        return cls(q, expand_shifts(q, shifts), "cyclic")

    @property
    def shifts(self) -> tuple[int, ...] | None:
        return self.data[:: self.q] if self.variant == "cyclic" else None

    def digits(self) -> str:
        if self.q <= 10:
            return "".join(map(str, self.data))
        return ",".join(map(str, self.data))

    def __str__(self) -> str:
        return self.digits()


def _as_data(u) -> tuple[int, ...]:
    return u.data if isinstance(u, UniversalVertex) else tuple(int(x) for x in u)


def distinct_pairs(u, v) -> int:
    return len(set(zip(_as_data(u), _as_data(v))))


def gq_adjacent(u, v, eps=0, q: int | None = None) -> bool:
    """Adjacency in G_q (eps = 0) or G_{q,eps}."""
    if isinstance(u, UniversalVertex) and isinstance(v, UniversalVertex) and u.q != v.q:
        raise UniversalError(f"mismatched alphabet sizes {u.q} and {v.q}")
    a, b = _as_data(u), _as_data(v)
    if q is None:
        q = u.q if isinstance(u, UniversalVertex) else math.isqrt(len(a))
    if len(a) != q * q or len(b) != q * q:
        raise UniversalError("vertex length is not q^2")
    eps = Fraction(eps)
    if eps == 0 and not (is_balanced(a, q) and is_balanced(b, q)):
        raise UniversalError("G_q adjacency requires balanced vertices")
    return distinct_pairs(a, b) >= (1 - eps) * q * q


def cyclic_adjacent(r: Sequence[int], s: Sequence[int], q: int) -> bool:
    """Adjacency in H^cyclic_{q,1/q} read off the shift tuples directly."""
    return len({(a - b) % q for a, b in zip(r, s)}) >= q - 1


def vertex_count(q: int, variant: str) -> int:
    if variant == "balanced":
        return math.factorial(q * q) // math.factorial(q) ** q
    if variant == "perm-blocks":
        return math.factorial(q) ** q
    if variant == "cyclic":
        return q**q
    if variant == "unrestricted":
        return q ** (q * q)
    raise UniversalError(f"unknown variant {variant!r}")


def _balanced_vectors(q: int) -> Iterator[tuple[int, ...]]:
    counts = [q] * q
    prefix: list[int] = []

    def rec():
        if len(prefix) == q * q:
            yield tuple(prefix)
            return
        for s in range(q):
            if counts[s]:
                counts[s] -= 1
                prefix.append(s)
                yield from rec()
                prefix.pop()
                counts[s] += 1

    yield from rec()


def _check_cap(q: int, variant: str):
    if variant not in ENUM_CAPS:
        raise UniversalError(f"unknown variant {variant!r}")
    if q < 2:
        raise UniversalError("alphabet size must be at least 2")
    if q > ENUM_CAPS[variant]:
        raise CapExceeded(f"{variant} enumeration capped at q <= {ENUM_CAPS[variant]}")


def _raw_vectors(q: int, variant: str) -> Iterator[tuple[int, ...]]:
    if variant == "balanced":
        return _balanced_vectors(q)
    if variant == "perm-blocks":
        perms = list(itertools.permutations(range(q)))
        return (sum(blocks, ()) for blocks in itertools.product(perms, repeat=q))
    if variant == "cyclic":
        return (expand_shifts(q, r) for r in itertools.product(range(q), repeat=q))
    return itertools.product(range(q), repeat=q * q)


def enumerate_vertices(q: int, variant: str) -> Iterator[UniversalVertex]:
    """Lexicographic vertex stream (cyclic vertices by shift tuple)."""
    _check_cap(q, variant)
    for data in _raw_vectors(q, variant):
        yield UniversalVertex(q, data, variant)


@lru_cache(maxsize=None)
def vertex_array(q: int, variant: str) -> np.ndarray:
    _check_cap(q, variant)
    arr = np.array(list(_raw_vectors(q, variant)), dtype=np.int64)
    if len(arr) != vertex_count(q, variant):
        raise AssertionError("enumeration disagrees with the closed-form count")
    arr.setflags(write=False)
    return arr


def first_vertex(q: int, variant: str) -> UniversalVertex:
    """First vertex in enumeration order, without enumerating."""
    if variant == "balanced":
        return UniversalVertex(q, tuple(s for s in range(q) for _ in range(q)), variant)
    if variant in ("perm-blocks", "cyclic"):
        return UniversalVertex(q, tuple(range(q)) * q, variant)
    return UniversalVertex(q, (0,) * (q * q), variant)


# vectorised adjacency


def _popcount(x: np.ndarray) -> np.ndarray:
    return np.bitwise_count(x.astype(np.uint64)).astype(np.int64)


def pair_counts(row: np.ndarray, block: np.ndarray, q: int) -> np.ndarray:
    """Number of distinct (row_i, other_i) pairs against every row of block."""
    codes = row[None, :] * q + block
    if q * q <= 63:
        masks = np.bitwise_or.reduce(np.left_shift(np.int64(1), codes), axis=1)
        return _popcount(masks)
    s = np.sort(codes, axis=1)
    return 1 + (np.diff(s, axis=1) != 0).sum(axis=1)


class UniversalGraph:
    """A universal graph with a materialised vertex array.

    Loops are kept in the adjacency bitsets: with eps > 0 a vertex can be
    adjacent to itself, meaning two code positions may share one function.
    """

    def __init__(self, q: int, variant: str, eps=0):
        self.q = q
        self.variant = variant
        self.eps = Fraction(eps)
        if self.eps == 0 and variant == "unrestricted":
            raise UniversalError("eps = 0 needs balanced vertices")
        self.vertices = vertex_array(q, variant)
        self.threshold = math.ceil((1 - self.eps) * q * q)
        self._bits: list[int] | None = None

    @classmethod
    def family(cls, q: int, family: str) -> UniversalGraph:
        return cls(q, FAMILIES[family][0], family_eps(family, q))

    def __len__(self) -> int:
        return len(self.vertices)

    def vertex(self, i: int) -> UniversalVertex:
        return UniversalVertex(self.q, tuple(self.vertices[i].tolist()), self.variant)

    def neighbours_mask(self, i: int) -> np.ndarray:
        return pair_counts(self.vertices[i], self.vertices, self.q) >= self.threshold

    def adjacency_bits(self) -> list[int]:
        if self._bits is None:
            bits = []
            for i in range(len(self)):
                packed = np.packbits(self.neighbours_mask(i), bitorder="little")
                bits.append(int.from_bytes(packed.tobytes(), "little"))
            self._bits = bits
        return self._bits

    def degree(self, i: int) -> int:
        mask = self.neighbours_mask(i)
        mask[i] = False
        return int(mask.sum())

    def to_hypergraph(self) -> Hypergraph:
        edges = []
        for i in range(len(self)):
            mask = self.neighbours_mask(i)
            edges += [(i, int(j)) for j in np.nonzero(mask[i + 1 :])[0] + i + 1]
        return Hypergraph(len(self), 2, tuple(edges))

    def conflicts(self, colors: Sequence[int], limit: int = 1) -> list[tuple[int, int]]:
        """Adjacent pairs of distinct vertices sharing a color."""
        colors = np.asarray(colors)
        if len(colors) != len(self):
            raise UniversalError("coloring length differs from vertex count")
        found = []
        for c in np.unique(colors):
            members = np.nonzero(colors == c)[0]
            block = self.vertices[members]
            for pos, i in enumerate(members[:-1]):
                counts = pair_counts(self.vertices[i], block[pos + 1 :], self.q)
                for j in members[pos + 1 :][counts >= self.threshold]:
                    found.append((int(i), int(j)))
                    if len(found) >= limit:
                        return found
        return found

    def validate_coloring(self, colors: Coloring | Sequence[int]) -> bool:
        colors = colors.colors if isinstance(colors, Coloring) else colors
        return not self.conflicts(colors)


# canonical independent sets


@dataclass(frozen=True)
class CanonicalSet:
    """One independent set of a cover.

    kind ``pair``  (i, j): u_i = u_j (1-based indices)
    kind ``pairs`` ((i1, j1), ...): every listed pair equal
    kind ``diff``  (i, j): on shift tuples r1 - r2 = i and r1 - r3 = j (mod q)
    kind ``perm``  (i_1, ..., i_q, i_{q+1}): u_a = u_{q+i_a}, u_1 = u_{2q+i_{q+1}}
    """

    kind: str
    q: int
    data: tuple

    def _pairs(self) -> list[tuple[int, int]]:
        q = self.q
        if self.kind == "pair":
            return [self.data]
        if self.kind == "pairs":
            return list(self.data)
        if self.kind == "perm":
            pairs = [(a + 1, q + i) for a, i in enumerate(self.data[:q])]
            return pairs + [(1, 2 * q + self.data[q])]
        raise UniversalError(f"kind {self.kind} has no index pairs")

    def mask(self, vertices: np.ndarray) -> np.ndarray:
        vertices = np.atleast_2d(vertices)
        out = np.ones(len(vertices), dtype=bool)
        if self.kind == "diff":
            q = self.q
            r = vertices[:, ::q]
            i, j = self.data
            return ((r[:, 0] - r[:, 1]) % q == i) & ((r[:, 0] - r[:, 2]) % q == j)
        for i, j in self._pairs():
            out &= vertices[:, i - 1] == vertices[:, j - 1]
        return out

    def contains(self, u) -> bool:
        return bool(self.mask(np.array([_as_data(u)]))[0])

    def __str__(self) -> str:
        if self.kind == "pair":
            return "{},{}".format(*self.data)
        if self.kind == "pairs":
            return " ".join(f"{i},{j}" for i, j in self.data)
        return " ".join(map(str, self.data))


def _perfect_matchings(items: Sequence[int]) -> Iterator[tuple[tuple[int, int], ...]]:
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for idx, partner in enumerate(rest):
        remaining = rest[:idx] + rest[idx + 1 :]
        for m in _perfect_matchings(remaining):
            yield ((first, partner),) + m


def cover_size(q: int, family: str) -> int:
    """Closed-form number of sets in the family's canonical cover."""
    if family in ("Gq",):
        return math.comb(q + 1, 2)
    if family in ("Hq", "Hq_cyclic"):
        return q
    if family == "Hq_cyclic_eps":
        return q * q
    if family == "Hq_eps":
        return math.factorial(q) * q
    if family == "Gq_eps":
        t = q + 1
        return math.comb(3 * q + 1, 2 * t) * math.factorial(2 * t) // (2**t * math.factorial(t))
    raise UniversalError(f"unknown family {family!r}")


def _iter_cover(q: int, family: str) -> Iterator[CanonicalSet]:
    if family == "Gq":
        for i, j in itertools.combinations(range(1, q + 2), 2):
            yield CanonicalSet("pair", q, (i, j))
    elif family in ("Hq", "Hq_cyclic"):
        for i in range(1, q + 1):
            yield CanonicalSet("pair", q, (1, q + i))
    elif family == "Hq_cyclic_eps":
        for i, j in itertools.product(range(q), repeat=2):
            yield CanonicalSet("diff", q, (i, j))
    elif family == "Hq_eps":
        for perm in itertools.permutations(range(1, q + 1)):
            for last in range(1, q + 1):
                yield CanonicalSet("perm", q, perm + (last,))
    elif family == "Gq_eps":
        for subset in itertools.combinations(range(1, 3 * q + 2), 2 * (q + 1)):
            for matching in _perfect_matchings(subset):
                yield CanonicalSet("pairs", q, matching)
    else:
        raise UniversalError(f"unknown family {family!r}")


def canonical_cover(q: int, family: str) -> list[CanonicalSet]:
    if q < 2:
        raise UniversalError("alphabet size must be at least 2")
    if family in ("Hq_cyclic_eps", "Hq_eps") and q < 3:
        raise UniversalError(f"{family} cover needs q >= 3")
    if family == "Gq_eps" and q < 4:
        raise UniversalError("Gq_eps cover needs q >= 4")
    if cover_size(q, family) > COVER_LIST_CAP:
        raise CapExceeded(f"cover of {cover_size(q, family)} sets exceeds {COVER_LIST_CAP}")
    return list(_iter_cover(q, family))


class UncoveredVertex(UniversalError):
    def __init__(self, vertex):
        super().__init__(f"vertex {vertex} is not covered")
        self.vertex = vertex


def coloring_from_cover(cover: Sequence[CanonicalSet], vertices) -> Coloring:
    """Color each vertex by the index of the first set containing it."""
    if isinstance(vertices, np.ndarray):
        arr = vertices
    else:
        arr = np.array([_as_data(u) for u in vertices], dtype=np.int64)
    colors = np.full(len(arr), -1, dtype=np.int64)
    for idx, s in enumerate(cover):
        todo = colors < 0
        if not todo.any():
            break
        hit = np.zeros(len(arr), dtype=bool)
        hit[todo] = s.mask(arr[todo])
        colors[hit] = idx
    if (colors < 0).any():
        bad = int(np.nonzero(colors < 0)[0][0])
        raise UncoveredVertex("".join(map(str, arr[bad].tolist())))
    return Coloring(tuple(int(c) for c in colors))


def _first_equal_pair(data: Sequence[int], window: Iterable[int]) -> tuple[int, int] | None:
    seen: dict[int, int] = {}
    for i in window:
        s = data[i]
        if s in seen:
            return seen[s], i
        seen[s] = i
    return None


def find_canonical_home(u, family: str, q: int | None = None) -> CanonicalSet | None:
    """A canonical set containing u, located by pigeonhole.

    For Gq the first repeated symbol among the first q+1 coordinates gives
    the pair. For Gq_eps, q+1 disjoint pairs are picked one at a time, each
    from the first q+1+2t coordinates not used yet; this stays inside
    [3q+1] and always succeeds when q >= 4.
    """
    data = _as_data(u)
    if q is None:
        q = u.q if isinstance(u, UniversalVertex) else math.isqrt(len(data))
    if family == "Gq":
        pair = _first_equal_pair(data, range(q + 1))
        return CanonicalSet("pair", q, (pair[0] + 1, pair[1] + 1)) if pair else None
    if family == "Gq_eps":
        used: set[int] = set()
        pairs = []
        for t in range(q + 1):
            stop = q + 1 + 2 * t
            if stop > len(data):
                return None
            pair = _first_equal_pair(data, (i for i in range(stop) if i not in used))
            if pair is None:
                return None
            used.update(pair)
            pairs.append((pair[0] + 1, pair[1] + 1))
        return CanonicalSet("pairs", q, tuple(sorted(pairs)))
    for s in _iter_cover(q, family):
        if s.contains(data):
            return s
    return None


# codes and cliques


def clique_from_mds(c: Code) -> list[UniversalVertex]:
    """Columns of a k = 2 MDS code, as pairwise adjacent vertices of G_q."""
    if c.k != 2 or c.table is None:
        raise CodeError("needs a k = 2 code with a materialized table")
    if c.n >= 2 and not verify_eps(c, complete(c.n, 2)).valid:
        raise CodeError("code is not MDS")
    try:
        return [UniversalVertex(c.q, col, "balanced") for col in c.columns()]
    except UniversalError:
        raise CodeError("code column is not balanced") from None


def hom_from_code(c: Code, g: Hypergraph, eps=0) -> dict[int, UniversalVertex]:
    """Map each position to its column function; isolated positions go to the
    first vertex of the target."""
    if g.k != 2 or c.k != 2:
        raise CodeError("homomorphisms are defined for k = 2")
    cert = verify_eps(c, g, eps)
    if not cert.valid:
        raise CodeError(f"code is not valid for the graph: {cert.failing_edge}")
    variant = "balanced" if Fraction(eps) == 0 else "unrestricted"
    busy = set(g.non_isolated())
    fallback = first_vertex(c.q, variant)
    return {
        v: UniversalVertex(c.q, c.column(v), variant) if v in busy else fallback
        for v in range(g.n)
    }


def balanced_collision_probability(n: int, k: int) -> Fraction:
    """Chance that two fixed coordinates of a uniform balanced vector in
    [k]^(n*k), each symbol used n times, carry the same symbol."""
    if n < 1 or k < 1 or n * k < 2:
        raise ValueError("need n, k >= 1 and n*k >= 2")

    def multinomial(total: int, parts: int) -> int:
        return math.factorial(total) // math.factorial(n) ** parts

    same = k * (math.comb(n * k - 2, n - 2) if n >= 2 else 0) * multinomial(n * k - n, k - 1)
    return Fraction(same, multinomial(n * k, k))


def balanced_collision_closed_form(n: int, k: int) -> Fraction:
    return Fraction(n - 1, n * k - 1)
