"""Erasure codes over a q-ary alphabet and their verifiers.

A code is an explicit table with one row per message, rows ordered
lexicographically over [q]^k. Linear codes also carry a k x n generator
matrix over a field; when q^k is beyond ``TABLE_CAP`` only the generator is
kept and verification falls back to submatrix ranks.

Every probability is an exact ``Fraction``.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .galois import FieldSpec, field as galois_field, is_prime_power
from .hypergraph import FANO_VECTORS, Coloring, Hypergraph

TABLE_CAP = 10**6


class CodeError(ValueError):
    pass


class CodeParseError(CodeError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _dtype(q: int):
    return np.uint8 if q <= 256 else np.int32


def messages(q: int, k: int) -> np.ndarray:
    """All of [q]^k as rows, in lexicographic order."""
    if q**k > TABLE_CAP:
        raise CodeError(f"q^k = {q}^{k} exceeds the table cap {TABLE_CAP}")
    grids = np.indices((q,) * k).reshape(k, -1).T
    return grids.astype(np.int64)


def message_index(m: Sequence[int], q: int) -> int:
    idx = 0
    for x in m:
        idx = idx * q + int(x)
    return idx


@dataclass(eq=False)
class Code:
    q: int
    k: int
    n: int
    table: np.ndarray | None = None
    generator: np.ndarray | None = None
    field: FieldSpec | None = None

    def __post_init__(self):
        if self.q < 2:
            raise CodeError("alphabet size must be at least 2")
        if self.table is None and self.generator is None:
            raise CodeError("a code needs a table or a generator")
        if self.table is not None:
            self.table = np.asarray(self.table, dtype=_dtype(self.q))
            if self.table.shape != (self.q**self.k, self.n):
                raise CodeError(
                    f"table has shape {self.table.shape}, expected {(self.q**self.k, self.n)}"
                )
            if self.table.size and int(self.table.max()) >= self.q:
                raise CodeError("table symbol outside the alphabet")
        if self.generator is not None:
            if self.field is None:
                self.field = galois_field(self.q)
            if self.field.q != self.q:
                raise CodeError("generator field size differs from q")
            self.generator = np.asarray(self.generator, dtype=np.int64)
            if self.generator.shape != (self.k, self.n):
                raise CodeError(f"generator must be {self.k} x {self.n}")
            if self.generator.size and int(self.generator.max()) >= self.q:
                raise CodeError("generator entry outside the field")

    @classmethod
    def from_table(cls, q: int, k: int, table) -> Code:
        table = np.asarray(table)
        return cls(q, k, table.shape[1], table=table)

    @classmethod
    def from_columns(cls, q: int, k: int, columns: Sequence[Sequence[int]]) -> Code:
        """Columns are functions of the lexicographically ordered messages."""
        return cls.from_table(q, k, np.array(columns, dtype=np.int64).T.reshape(q**k, len(columns)))

    @classmethod
    def linear(cls, f: FieldSpec, generator) -> Code:
        g = np.asarray(generator, dtype=np.int64)
        k, n = g.shape
        table = None
        if f.q**k <= TABLE_CAP:
            table = f.dot_array(messages(f.q, k), g)
        return cls(f.q, k, n, table=table, generator=g, field=f)

    @property
    def is_linear(self) -> bool:
        return self.generator is not None

    def column(self, i: int) -> tuple[int, ...]:
        if self.table is None:
            raise CodeError("code has no materialized table")
        return tuple(int(x) for x in self.table[:, i])

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(i) for i in range(self.n)]

    def check_generator(self) -> bool:
        """Every table row equals message times generator."""
        if self.generator is None or self.table is None:
            return True
        expected = self.field.dot_array(messages(self.q, self.k), self.generator)
        return bool(np.array_equal(expected, self.table.astype(np.int64)))

    def same_values(self, other: Code) -> bool:
        if (self.q, self.k, self.n) != (other.q, other.k, other.n):
            return False
        if self.table is not None and other.table is not None:
            return bool(np.array_equal(self.table, other.table))
        return (
            self.generator is not None
            and other.generator is not None
            and bool(np.array_equal(self.generator, other.generator))
        )


# encoding and decoding


def _check_message(c: Code, m: Sequence[int]) -> tuple[int, ...]:
    m = tuple(int(x) for x in m)
    if len(m) != c.k or any(not 0 <= x < c.q for x in m):
        raise CodeError(f"malformed message {m} for q={c.q}, k={c.k}")
    return m


def _check_edge(c: Code, e: Sequence[int]) -> tuple[int, ...]:
    e = tuple(sorted(int(v) for v in e))
    if len(e) != c.k or len(set(e)) != c.k or e[0] < 0 or e[-1] >= c.n:
        raise CodeError(f"malformed edge {e} for n={c.n}, k={c.k}")
    return e


def encode(c: Code, m: Sequence[int]) -> tuple[int, ...]:
    m = _check_message(c, m)
    if c.table is not None:
        return tuple(int(x) for x in c.table[message_index(m, c.q)])
    row = c.field.dot_array(np.array([m]), c.generator)[0]
    return tuple(int(x) for x in row)


def erase(c: Code, m: Sequence[int], e: Sequence[int]) -> tuple[int | None, ...]:
    """Codeword of m with every position outside e replaced by None."""
    keep = set(int(v) for v in e)
    if any(not 0 <= v < c.n for v in keep):
        raise CodeError(f"edge {sorted(keep)} outside [0, {c.n})")
    word = encode(c, m)
    return tuple(x if i in keep else None for i, x in enumerate(word))


def _edge_keys(c: Code, e: Sequence[int]) -> np.ndarray:
    keys = np.zeros(c.table.shape[0], dtype=np.int64)
    for v in e:
        keys = keys * c.q + c.table[:, v].astype(np.int64)
    return keys


@dataclass
class EdgeDecoder:
    edge: tuple[int, ...]
    mapping: dict[tuple[int, ...], tuple[int, ...]]

    def decode(self, word: Sequence[int | None]) -> tuple[int, ...] | None:
        observed = tuple(word[v] for v in self.edge)
        return self.mapping.get(observed)


def edge_decoder(c: Code, e: Sequence[int]) -> EdgeDecoder:
    """Optimal decoder for one edge; ambiguous tuples go to the smallest preimage."""
    e = _check_edge(c, e)
    if c.table is None:
        raise CodeError("decoder needs a materialized table")
    mapping: dict[tuple[int, ...], tuple[int, ...]] = {}
    for idx, m in enumerate(messages(c.q, c.k)):
        observed = tuple(int(c.table[idx, v]) for v in e)
        mapping.setdefault(observed, tuple(int(x) for x in m))
    return EdgeDecoder(e, mapping)


def _edge_rank(c: Code, e: Sequence[int]) -> int:
    return c.field.rank(c.generator[:, list(e)].T.tolist())


def edge_success(c: Code, e: Sequence[int], method: str = "auto") -> Fraction:
    """Best achievable decoding probability from the positions in e."""
    e = _check_edge(c, e)
    if method == "rank" or (method == "auto" and c.table is None):
        if c.generator is None:
            raise CodeError("rank method needs a linear code")
        return Fraction(c.q ** _edge_rank(c, e), c.q**c.k)
    if c.table is None:
        raise CodeError("table method needs a materialized table")
    distinct = len(np.unique(_edge_keys(c, e)))
    return Fraction(distinct, c.q**c.k)


def _first_collision(c: Code, e: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    if c.table is None:
        # kernel vector of the edge submatrix collides with the zero message
        sub = c.generator[:, list(e)]
        for m in itertools.product(range(c.q), repeat=c.k):
            if any(m) and not any(c.field.dot_array(np.array([m]), sub)[0]):
                return (0,) * c.k, m
        raise CodeError("no collision on this edge")  # pragma: no cover
    keys = _edge_keys(c, e)
    seen: dict[int, int] = {}
    msgs = messages(c.q, c.k)
    for idx, key in enumerate(keys.tolist()):
        if key in seen:
            first = msgs[seen[key]]
            return tuple(int(x) for x in first), tuple(int(x) for x in msgs[idx])
        seen[key] = idx
    raise CodeError("no collision on this edge")  # pragma: no cover


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, tuple):
        return "{" + ",".join(str(v + 1) for v in x) + "}"
    return str(x)


@dataclass
class Certificate:
    kind: str  # exact, eps or avg
    valid: bool
    edges: int
    threshold: Fraction = Fraction(1)
    failing_edge: tuple[int, ...] | None = None
    collision: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    min_edge: tuple[int, ...] | None = None
    min_success: Fraction | None = None
    average: Fraction | None = None
    successes: list[Fraction] = dc_field(default_factory=list, repr=False)

    def lines(self) -> list[str]:
        out = [f"verdict {'valid' if self.valid else 'invalid'}", f"mode {self.kind}", f"edges {self.edges}"]
        out.append(f"threshold {_fmt(self.threshold)}")
        if self.min_edge is not None:
            out.append(f"min_edge {_fmt(self.min_edge)}")
            out.append(f"min_success {_fmt(self.min_success)}")
        if self.average is not None:
            out.append(f"average_success {_fmt(self.average)}")
        if self.failing_edge is not None:
            out.append(f"failing_edge {_fmt(self.failing_edge)}")
        if self.collision is not None:
            a, b = self.collision
            out.append(f"collision {' '.join(map(str, a))} | {' '.join(map(str, b))}")
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())


def _check_dims(c: Code, g: Hypergraph):
    if c.n != g.n or c.k != g.k:
        raise CodeError(f"code (n={c.n}, k={c.k}) does not match hypergraph (n={g.n}, k={g.k})")


def edge_successes(c: Code, g: Hypergraph, jobs: int = 1) -> list[Fraction]:
    """Per-edge success in the hypergraph's edge order."""
    _check_dims(c, g)
    if jobs > 1 and len(g.edges) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(lambda e: edge_success(c, e), g.edges))
    return [edge_success(c, e) for e in g.edges]


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def verify_eps(c: Code, g: Hypergraph, eps=0, jobs: int = 1) -> Certificate:
    eps = _as_fraction(eps)
    if not 0 <= eps < 1:
        raise CodeError(f"eps must lie in [0, 1), got {eps}")
    threshold = 1 - eps
    successes = edge_successes(c, g, jobs)
    cert = Certificate("exact" if eps == 0 else "eps", True, len(g.edges), threshold, successes=successes)
    if successes:
        i = min(range(len(successes)), key=lambda j: (successes[j], j))
        cert.min_edge, cert.min_success = g.edges[i], successes[i]
    failing = next((j for j, s in enumerate(successes) if s < threshold), None)
    if failing is not None:
        cert.valid = False
        cert.failing_edge = g.edges[failing]
        cert.collision = _first_collision(c, cert.failing_edge)
    return cert


def verify_exact(c: Code, g: Hypergraph, jobs: int = 1) -> Certificate:
    return verify_eps(c, g, 0, jobs)


def verify_avg(c: Code, g: Hypergraph, eps_avg, jobs: int = 1) -> Certificate:
    eps_avg = _as_fraction(eps_avg)
    if not g.edges:
        raise CodeError("average success needs at least one edge")
    successes = edge_successes(c, g, jobs)
    average = sum(successes, Fraction(0)) / len(successes)
    cert = Certificate("avg", average >= 1 - eps_avg, len(g.edges), 1 - eps_avg, successes=successes)
    cert.average = average
    i = min(range(len(successes)), key=lambda j: (successes[j], j))
    cert.min_edge, cert.min_success = g.edges[i], successes[i]
    return cert


# constructions and fixtures


def rs_code(f: FieldSpec, n: int, k: int) -> Code:
    """Doubly extended Reed-Solomon code: Vandermonde columns over the field
    points in increasing order, plus (0,...,0,1) when n = q + 1."""
    if not 1 <= k <= n:
        raise CodeError(f"need 1 <= k <= n, got n={n} k={k}")
    if n > f.q + 1:
        raise CodeError(f"n={n} exceeds q+1={f.q + 1}")
    points = list(range(min(n, f.q)))
    cols = [[f.pow(a, i) for i in range(k)] for a in points]
    if n == f.q + 1:
        cols.append([0] * (k - 1) + [1])
    return Code.linear(f, np.array(cols, dtype=np.int64).T)


FIXTURE_COLUMNS = {
    "q3-n20": (
        3,
        [
            (0, 0, 0, 1, 1, 1, 2, 2, 2), (0, 1, 2, 0, 1, 2, 0, 1, 2),
            (0, 0, 1, 0, 1, 2, 1, 2, 2), (0, 0, 1, 1, 0, 2, 2, 1, 2),
            (0, 0, 1, 1, 2, 0, 2, 2, 1), (0, 0, 1, 2, 2, 1, 0, 1, 2),
            (0, 1, 0, 1, 2, 0, 2, 1, 2), (0, 1, 0, 2, 2, 1, 2, 0, 1),
            (0, 1, 1, 0, 2, 2, 2, 1, 0), (0, 1, 1, 2, 0, 2, 0, 2, 1),
            (0, 1, 1, 2, 1, 0, 2, 0, 2), (0, 1, 1, 2, 2, 0, 1, 2, 0),
            (0, 1, 2, 0, 1, 0, 2, 2, 1), (0, 1, 2, 0, 2, 1, 1, 0, 2),
            (0, 1, 2, 1, 0, 0, 1, 2, 2), (0, 1, 2, 1, 0, 2, 2, 0, 1),
            (0, 1, 2, 1, 2, 1, 0, 2, 0), (0, 1, 2, 2, 0, 1, 2, 1, 0),
            (0, 1, 2, 2, 1, 2, 1, 0, 0), (0, 1, 2, 2, 2, 0, 0, 1, 1),
        ],
    ),
    "q4-n7": (
        4,
        [
            (0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3, 3),
            (0, 1, 2, 3, 0, 1, 2, 3, 0, 1, 2, 3, 0, 1, 2, 3),
            (0, 1, 2, 3, 1, 2, 3, 0, 2, 3, 0, 1, 3, 0, 1, 2),
            (0, 1, 2, 3, 2, 3, 0, 1, 1, 2, 3, 0, 3, 0, 1, 2),
            (0, 1, 2, 3, 3, 0, 1, 2, 1, 2, 3, 0, 2, 3, 0, 1),
            (0, 1, 2, 3, 0, 1, 2, 3, 3, 0, 1, 2, 2, 3, 0, 1),
            (0, 1, 2, 3, 2, 3, 0, 1, 2, 3, 0, 1, 1, 2, 3, 0),
        ],
    ),
    "q6-n6": (
        6,
        [
            (0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2,
             3, 3, 3, 3, 3, 3, 4, 4, 4, 4, 4, 4, 5, 5, 5, 5, 5, 5),
            (0, 1, 2, 3, 4, 5, 0, 1, 2, 3, 4, 5, 0, 1, 2, 3, 4, 5,
             0, 1, 2, 3, 4, 5, 0, 1, 2, 3, 4, 5, 0, 1, 2, 3, 4, 5),
            (0, 1, 2, 3, 4, 5, 1, 2, 3, 4, 5, 0, 2, 3, 4, 5, 0, 1,
             3, 4, 5, 0, 1, 2, 4, 5, 0, 1, 2, 3, 5, 0, 1, 2, 3, 4),
            (0, 1, 2, 3, 4, 5, 2, 3, 4, 5, 0, 1, 4, 5, 0, 1, 2, 3, 1,
             2, 3, 4, 5, 0, 3, 4, 5, 0, 1, 2, 5, 0, 1, 2, 3, 4),
            (0, 1, 2, 3, 4, 5, 3, 4, 5, 0, 1, 2, 1, 2, 3, 4, 5, 0, 5,
             0, 1, 2, 3, 4, 2, 3, 4, 5, 0, 1, 0, 1, 2, 3, 4, 5),
            (0, 1, 2, 3, 4, 5, 4, 5, 0, 1, 2, 3, 3, 4, 5, 0, 1, 2, 2,
             3, 4, 5, 0, 1, 1, 2, 3, 4, 5, 0, 1, 2, 3, 4, 5, 0),
        ],
    ),
}

# name -> (hypergraph shorthand, eps at which the fixture is certified)
FIXTURE_TARGETS = {
    "fano": ("fano-complement", Fraction(0)),
    "q3-n20": ("complete:20:2", Fraction(1, 3)),
    "q4-n7": ("complete:7:2", Fraction(1, 4)),
    "q6-n6": ("complete:6:2", Fraction(1, 6)),
}


def fano_code() -> Code:
    return Code.linear(galois_field(2), np.array(FANO_VECTORS))


def fixtures() -> dict[str, Code]:
    out = {"fano": fano_code()}
    for name, (q, cols) in FIXTURE_COLUMNS.items():
        out[name] = Code.from_columns(q, 2, cols)
    return out


def normalized_column_coloring(c: Code) -> Coloring:
    """Color each position by the normalized form of its generator column.

    Zero columns share the first color; they can only sit on isolated vertices
    of a hypergraph the code is valid for.
    """
    if c.generator is None:
        raise CodeError("needs a linear code")
    index = {v: i for i, v in enumerate(c.field.normalized_vectors(c.k))}
    colors = []
    for i in range(c.n):
        col = tuple(int(x) for x in c.generator[:, i])
        colors.append(index[c.field.normalize(col)] if any(col) else 0)
    return Coloring(tuple(colors))


# text format


def format_code(c: Code) -> str:
    if c.is_linear:
        lines = [f"{c.q} {c.k} {c.n} linear"]
        lines += [" ".join(str(int(x)) for x in row) for row in c.generator]
    else:
        lines = [f"{c.q} {c.k} {c.n}"]
        lines += [" ".join(str(int(x)) for x in row) for row in c.table]
    return "\n".join(lines) + "\n"


def parse_code(text: str) -> Code:
    rows = []
    header = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if header is None:
            linear = tokens[-1] == "linear"
            if linear:
                tokens = tokens[:-1]
            try:
                q, k, n = (int(t) for t in tokens)
            except ValueError:
                raise CodeParseError(lineno, "header must be '<q> <k> <n> [linear]'") from None
            if q < 2 or k < 1 or n < 1:
                raise CodeParseError(lineno, f"invalid header q={q} k={k} n={n}")
            if linear and not is_prime_power(q):
                raise CodeParseError(lineno, f"linear code needs a prime power field size, got {q}")
            if not linear and q**k > TABLE_CAP:
                raise CodeParseError(lineno, f"q^k exceeds the table cap {TABLE_CAP}")
            header = (q, k, n, linear)
            continue
        q, k, n, _ = header
        try:
            values = [int(t) for t in tokens]
        except ValueError:
            raise CodeParseError(lineno, f"non-integer token in {raw.strip()!r}") from None
        if len(values) != n:
            raise CodeParseError(lineno, f"expected {n} symbols, got {len(values)}")
        if any(not 0 <= x < q for x in values):
            raise CodeParseError(lineno, f"symbol outside 0..{q - 1}")
        rows.append((lineno, values))
    if header is None:
        raise CodeParseError(1, "missing header")
    q, k, n, linear = header
    expected = k if linear else q**k
    if len(rows) != expected:
        last = rows[-1][0] if rows else 1
        raise CodeParseError(last, f"expected {expected} rows, got {len(rows)}")
    matrix = np.array([r for _, r in rows], dtype=np.int64)
    if linear:
        return Code.linear(galois_field(q), matrix)
    return Code(q, k, n, table=matrix)


def load_code(spec: str) -> Code:
    """A fixture name, ``rs:q:n:k``, or a code file."""
    fx = fixtures()
    if spec in fx:
        return fx[spec]
    parts = spec.split(":")
    if parts[0] == "rs" and len(parts) == 4:
        try:
            q, n, k = (int(x) for x in parts[1:])
            return rs_code(galois_field(q), n, k)
        except ValueError as exc:
            raise CodeError(f"bad shorthand {spec!r}: {exc}") from None
    path = Path(spec)
    if not path.is_file():
        raise CodeError(f"no such code file or fixture: {spec}")
    return parse_code(path.read_text())
