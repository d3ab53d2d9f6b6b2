"""Brute-force reference implementations used to check the library.

Nothing here imports epcodes; every routine is the slowest obvious way to
compute its answer.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def primes_upto(n: int) -> list[int]:
    sieve = [True] * (n + 1)
    sieve[:2] = [False, False]
    for i in range(2, int(n**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = [False] * len(sieve[i * i :: i])
    return [i for i, ok in enumerate(sieve) if ok]


def prime_powers_upto(n: int) -> set[int]:
    out = set()
    for p in primes_upto(n):
        x = p
        while x <= n:
            out.add(x)
            x *= p
    return out


def next_prime_power(x: int, limit: int = 5000) -> int:
    return min(q for q in prime_powers_upto(limit) if q >= max(x, 2))


def _poly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def _poly_reduce(a, mod, p):
    a = list(a)
    m = len(mod) - 1
    for top in range(len(a) - 1, m - 1, -1):
        c = a[top]
        if c:
            for i in range(m + 1):
                a[top - m + i] = (a[top - m + i] - c * mod[i]) % p
    return (a + [0] * m)[:m]


def field_mul(p: int, mod, a: int, b: int) -> int:
    """Product in GF(p)[x]/(mod) with elements encoded as base-p digits."""
    m = len(mod) - 1

    def digits(x):
        return [(x // p**i) % p for i in range(m)]

    r = _poly_reduce(_poly_mul(digits(a), digits(b), p), mod, p)
    return sum(c * p**i for i, c in enumerate(r))


def field_add(p: int, m: int, a: int, b: int) -> int:
    return sum((((a // p**i) + (b // p**i)) % p) * p**i for i in range(m))


def is_irreducible(poly, p: int) -> bool:
    """A monic polynomial is reducible iff it is a product of two monic
    polynomials of positive degree."""
    deg = len(poly) - 1
    for d in range(1, deg):
        for low_a in itertools.product(range(p), repeat=d):
            for low_b in itertools.product(range(p), repeat=deg - d):
                if _poly_mul(list(low_a) + [1], list(low_b) + [1], p) == list(poly):
                    return False
    return True


def fano_complement_edges(columns) -> set[frozenset[int]]:
    """Triples of distinct nonzero GF(2)^3 columns whose XOR is nonzero."""
    ints = [sum(b << i for i, b in enumerate(col)) for col in columns]
    return {
        frozenset(t)
        for t in itertools.combinations(range(len(ints)), 3)
        if ints[t[0]] ^ ints[t[1]] ^ ints[t[2]]
    }


def chromatic_number(n: int, edges) -> int:
    """Strong chromatic number by trying every assignment with c colors."""
    pairs = {(a, b) for e in edges for a, b in itertools.combinations(sorted(e), 2)}
    if not pairs:
        return 1
    for c in range(1, n + 1):
        for colors in itertools.product(range(c), repeat=n):
            if all(colors[a] != colors[b] for a, b in pairs):
                return c
    return n


def edge_success(rows, e, q: int, k: int) -> Fraction:
    """Fraction of messages decoded uniquely, by counting restricted tuples."""
    restricted = [tuple(r[i] for i in e) for r in rows]
    return Fraction(len(set(restricted)), q**k)


def code_rows(q: int, k: int, columns) -> list[tuple[int, ...]]:
    """Rows of a code given column functions as lists indexed by message rank."""
    return [tuple(col[i] for col in columns) for i in range(q**k)]


def balanced_vectors(n: int, k: int) -> set[tuple[int, ...]]:
    return set(itertools.permutations([s for s in range(k) for _ in range(n)]))


def distinct_pairs(u, v) -> int:
    return len(set(zip(u, v)))


def smallest_alphabet_q2(n: int, edges, eps=Fraction(0)) -> bool:
    """Whether some binary k = 2 code of length n satisfies every edge at eps."""
    functions = list(itertools.product(range(2), repeat=4))
    need = (1 - Fraction(eps)) * 4
    good = {(a, b) for a in range(16) for b in range(16) if distinct_pairs(functions[a], functions[b]) >= need}
    for assignment in itertools.product(range(16), repeat=n):
        if all((assignment[a], assignment[b]) in good for a, b in edges):
            return True
    return False
