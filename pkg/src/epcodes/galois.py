"""Small finite fields GF(p^m) with elements encoded as integers 0..q-1.

An element with value ``sum(c_i * p**i)`` stands for the polynomial
``sum(c_i * x**i)`` reduced modulo a fixed monic irreducible of degree m.
"""

from __future__ import annotations

import itertools
import math
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

MAX_FIELD_SIZE = 2**16
TABLE_LIMIT = 256


class FieldError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


def prime_power_decomposition(x: int) -> tuple[int, int] | None:
    """Return ``(p, m)`` with ``x == p**m``, or None if x is not a prime power."""
    if x < 2:
        return None
    p = next(d for d in itertools.count(2) if x % d == 0)
    m = 0
    while x % p == 0:
        x //= p
        m += 1
    return (p, m) if x == 1 else None


def is_prime_power(x: int) -> bool:
    return prime_power_decomposition(x) is not None


def next_prime_power(x: int) -> int:
    """Smallest prime power q with q >= max(x, 2)."""
    q = max(x, 2)
    while not is_prime_power(q):
        q += 1
    return q


# polynomial helpers over GF(p); coefficient lists, lowest degree first


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _trim(list(a))
    b = _trim(list(b))
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        factor = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - factor * c) % p
        _trim(a)
    return a


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _polymod(poly, list(low) + [1], p):
                return False
    return True


def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree m over GF(p).

    Candidates are compared on their coefficient tuples taken from the
    constant term upward.
    """
    for low in itertools.product(range(p), repeat=m):
        poly = low + (1,)
        if is_irreducible(poly, p):
            return poly
    raise FieldError(f"no irreducible polynomial of degree {m} over GF({p})")


class FieldSpec:
    """The field GF(p^m). Immutable once built."""

    def __init__(self, p: int, m: int = 1, reduction_polynomial: Sequence[int] | None = None):
        if not _is_prime(p):
            raise FieldError(f"{p} is not prime")
        if m < 1:
            raise FieldError("extension degree must be >= 1")
        if p**m > MAX_FIELD_SIZE:
            raise FieldError(f"field size {p}**{m} exceeds {MAX_FIELD_SIZE}")
        if reduction_polynomial is None:
            reduction_polynomial = smallest_irreducible(p, m)
        poly = tuple(int(c) % p for c in reduction_polynomial)
        if len(poly) != m + 1 or poly[-1] != 1:
            raise FieldError("reduction polynomial must be monic of degree m")
        if not is_irreducible(poly, p):
            raise FieldError(f"{poly} is reducible over GF({p})")
        self.p = p
        self.m = m
        self.q = p**m
        self.reduction_polynomial = poly

    def __repr__(self) -> str:
        return f"FieldSpec(p={self.p}, m={self.m}, poly={self.reduction_polynomial})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FieldSpec)
            and self.p == other.p
            and self.m == other.m
            and self.reduction_polynomial == other.reduction_polynomial
        )

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.reduction_polynomial))

    @property
    def elements(self) -> range:
        return range(self.q)

    def check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise FieldError(f"element {a} out of range for GF({self.q})")
        return a

    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.m):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def from_digits(self, digits: Sequence[int]) -> int:
        return sum(int(c) * self.p**i for i, c in enumerate(digits))

    def _poly_mul(self, a: int, b: int) -> int:
        p = self.p
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * self.m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        return self.from_digits(_polymod(prod, self.reduction_polynomial, p))

    @cached_property
    def _exp_log(self) -> tuple[np.ndarray, np.ndarray]:
        q = self.q
        if self.m == 1:
            mul = lambda a, b: a * b % q  # noqa: E731
        else:
            mul = self._poly_mul
        order = q - 1
        for g in range(2 if q > 2 else 1, q):
            exp = np.zeros(order, dtype=np.int64)
            x = 1
            for i in range(order):
                exp[i] = x
                x = mul(x, g)
            if len(set(exp.tolist())) == order:
                log = np.full(q, -1, dtype=np.int64)
                log[exp] = np.arange(order)
                return exp, log
        raise FieldError("no primitive element found")  # pragma: no cover

    @cached_property
    def add_table(self) -> np.ndarray | None:
        if self.q > TABLE_LIMIT:
            return None
        a = np.arange(self.q)
        return self.add_array(a[:, None], a[None, :], use_table=False)

    @cached_property
    def mul_table(self) -> np.ndarray | None:
        if self.q > TABLE_LIMIT:
            return None
        a = np.arange(self.q)
        return self.mul_array(a[:, None], a[None, :], use_table=False)

    @cached_property
    def inv_table(self) -> np.ndarray | None:
        if self.q > TABLE_LIMIT:
            return None
        exp, log = self._exp_log
        out = np.zeros(self.q, dtype=np.int64)
        nz = np.arange(1, self.q)
        out[nz] = exp[(-log[nz]) % (self.q - 1)]
        return out

    # scalar arithmetic

    def add(self, a: int, b: int) -> int:
        self.check(a), self.check(b)
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return self.from_digits([(x + y) % self.p for x, y in zip(self.digits(a), self.digits(b))])

    def neg(self, a: int) -> int:
        self.check(a)
        if self.m == 1:
            return -a % self.p
        return self.from_digits([-x % self.p for x in self.digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        self.check(a), self.check(b)
        if self.m == 1:
            return a * b % self.p
        if self.mul_table is not None:
            return int(self.mul_table[a, b])
        if a == 0 or b == 0:
            return 0
        exp, log = self._exp_log
        return int(exp[(log[a] + log[b]) % (self.q - 1)])

    def inv(self, a: int) -> int:
        self.check(a)
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        exp, log = self._exp_log
        return int(exp[(-log[a]) % (self.q - 1)])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        self.check(a)
        if e < 0:
            a, e = self.inv(a), -e
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    # vectorised arithmetic on integer arrays

    def add_array(self, a, b, use_table: bool = True) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if use_table and self.add_table is not None:
            return self.add_table[a, b]
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        scale = 1
        for _ in range(self.m):
            out += ((a // scale % self.p + b // scale % self.p) % self.p) * scale
            scale *= self.p
        return out

    def mul_array(self, a, b, use_table: bool = True) -> np.ndarray:
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if use_table and self.mul_table is not None:
            return self.mul_table[a, b]
        if self.m == 1:
            return a * b % self.p
        exp, log = self._exp_log
        a, b = np.broadcast_arrays(a, b)
        out = exp[(log[a] + log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def dot_array(self, messages: np.ndarray, matrix: np.ndarray) -> np.ndarray:
        """Row-vector times matrix for every row of ``messages``."""
        messages = np.asarray(messages, dtype=np.int64)
        matrix = np.asarray(matrix, dtype=np.int64)
        out = np.zeros((messages.shape[0], matrix.shape[1]), dtype=np.int64)
        for i in range(matrix.shape[0]):
            out = self.add_array(out, self.mul_array(messages[:, i : i + 1], matrix[i][None, :]))
        return out

    # linear algebra

    def rank(self, rows: Sequence[Sequence[int]]) -> int:
        """Rank of a matrix over this field by Gaussian elimination."""
        a = [list(map(int, r)) for r in rows]
        if not a:
            return 0
        n_cols = len(a[0])
        rank = 0
        for col in range(n_cols):
            pivot = next((r for r in range(rank, len(a)) if a[r][col]), None)
            if pivot is None:
                continue
            a[rank], a[pivot] = a[pivot], a[rank]
            scale = self.inv(a[rank][col])
            a[rank] = [self.mul(scale, x) for x in a[rank]]
            for r in range(len(a)):
                if r != rank and a[r][col]:
                    f = a[r][col]
                    a[r] = [self.sub(x, self.mul(f, y)) for x, y in zip(a[r], a[rank])]
            rank += 1
            if rank == len(a):
                break
        return rank

    def normalize(self, vector: Sequence[int]) -> tuple[int, ...]:
        """Scale a nonzero vector so its leading nonzero entry is 1."""
        lead = next((x for x in vector if x), None)
        if lead is None:
            raise FieldError("the zero vector cannot be normalized")
        s = self.inv(lead)
        return tuple(self.mul(s, x) for x in vector)

    def normalized_vectors(self, k: int) -> list[tuple[int, ...]]:
        """All normalized vectors of F^k in lexicographic order."""
        return [
            v
            for v in itertools.product(range(self.q), repeat=k)
            if any(v) and next(x for x in v if x) == 1
        ]


@lru_cache(maxsize=None)
def field(q: int) -> FieldSpec:
    """The default field of size q."""
    pm = prime_power_decomposition(q)
    if pm is None:
        raise FieldError(f"{q} is not a prime power")
    return FieldSpec(*pm)


def add(a: int, b: int, f: FieldSpec) -> int:
    return f.add(a, b)


def mul(a: int, b: int, f: FieldSpec) -> int:
    return f.mul(a, b)


def inv(a: int, f: FieldSpec) -> int:
    return f.inv(a)
