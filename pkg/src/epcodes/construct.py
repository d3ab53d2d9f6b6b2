"""Code constructions: coloring composition, projective codes, average-error
cliques and pull-back of universal-graph homomorphisms."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .codes import TABLE_CAP, Code, CodeError, rs_code
from .galois import FieldSpec, field as galois_field
from .hypergraph import Coloring, Hypergraph, validate_coloring
from .universal import UniversalVertex, distinct_pairs


def compose(g: Hypergraph, coloring: Coloring | Sequence[int], base: Code) -> Code:
    """Give vertex i the base column indexed by its color.

    The result is exact (or eps-valid) on g whenever the base code is exact
    (or eps-valid) on the complete k-uniform hypergraph over the colors used.
    """
    colors = coloring.colors if isinstance(coloring, Coloring) else tuple(coloring)
    if len(colors) != g.n:
        raise CodeError(f"coloring has length {len(colors)}, expected {g.n}")
    if not validate_coloring(g, colors):
        raise CodeError("coloring is not a valid strong coloring")
    if base.k != g.k:
        raise CodeError(f"base code has k={base.k}, hypergraph has k={g.k}")
    if colors and max(colors) >= base.n:
        raise CodeError(f"color {max(colors) + 1} exceeds base block length {base.n}")
    idx = list(colors)
    table = base.table[:, idx] if base.table is not None else None
    generator = base.generator[:, idx] if base.generator is not None else None
    return Code(base.q, base.k, g.n, table=table, generator=generator, field=base.field)


def pg_linear_code(f: FieldSpec, k: int) -> Code:
    """Linear code whose columns are all normalized vectors of F^k."""
    if k < 2:
        raise CodeError("k must be at least 2")
    if f.q**k > TABLE_CAP:
        raise CodeError(f"q^k = {f.q**k} exceeds the table cap {TABLE_CAP}")
    return Code.linear(f, np.array(f.normalized_vectors(k), dtype=np.int64).T)


def average_error_labels(p: int, n: int) -> list[tuple[int, int]]:
    """Labels (i, j), 1-based, for vertices 1..n in row-major order over i.

    Rows 1..r get alpha + 1 entries and the remaining rows get alpha, where
    alpha = n // (p+1) and r = n - alpha*(p+1).
    """
    alpha, r = divmod(n, p + 1)
    labels = []
    for i in range(1, p + 2):
        for j in range(1, alpha + 1 + (1 if i <= r else 0)):
            labels.append((i, j))
    return labels


def average_error_code(p: int, n: int) -> Code:
    """Code over alphabet p for the complete graph on n vertices, built by
    repeating the columns of a length p+1 MDS code."""
    if n < 2:
        raise CodeError("n must be at least 2")
    base = rs_code(galois_field(p), p + 1, 2)
    colors = [i - 1 for i, _ in average_error_labels(p, n)]
    generator = base.generator[:, colors]
    table = base.table[:, colors]
    return Code(base.q, 2, n, table=table, generator=generator, field=base.field)


def average_error_bound(p: int, n: int) -> Fraction:
    """Lower bound 1 - (C(alpha,2)(p+1) + r*alpha) / C(n,2) on the average success."""
    alpha, r = divmod(n, p + 1)
    bad = math.comb(alpha, 2) * (p + 1) + r * alpha
    return 1 - Fraction(bad, math.comb(n, 2))


class NotAHomomorphism(CodeError):
    def __init__(self, edge):
        super().__init__(f"edge {{{edge[0] + 1},{edge[1] + 1}}} is not mapped to an edge")
        self.edge = edge


def code_from_hom(hom: Mapping[int, UniversalVertex | Sequence[int]], g: Hypergraph, eps=0) -> Code:
    """Code whose column at v is the function represented by hom[v]."""
    if g.k != 2:
        raise CodeError("homomorphism codes need k = 2")
    cols = []
    for v in range(g.n):
        if v not in hom:
            raise CodeError(f"vertex {v + 1} has no image")
        u = hom[v]
        cols.append(u.data if isinstance(u, UniversalVertex) else tuple(int(x) for x in u))
    q = math.isqrt(len(cols[0])) if cols else 2
    if any(len(c) != q * q for c in cols):
        raise CodeError("images must all have length q^2")
    threshold = (1 - Fraction(eps)) * q * q
    for e in g.edges:
        if distinct_pairs(cols[e[0]], cols[e[1]]) < threshold:
            raise NotAHomomorphism(e)
    return Code.from_columns(q, 2, cols)
