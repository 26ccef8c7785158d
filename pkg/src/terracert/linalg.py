"""Exact rank computations: dense elimination over F_p and fraction-free
elimination over the rationals."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

import numpy as np

from . import _kernels

#: Mersenne prime 2**61 - 1, the default field for rank witnesses.
DEFAULT_PRIME = 2**61 - 1

#: The eight consecutive primes directly below 2**61 - 1, used in order for
#: witness retries.
RETRY_PRIMES = (
    2305843009213693921,
    2305843009213693907,
    2305843009213693723,
    2305843009213693693,
    2305843009213693669,
    2305843009213693613,
    2305843009213693561,
    2305843009213693549,
)

#: Smallest prime accepted for witness computations.
MIN_WITNESS_PRIME = 2**31
#: Exclusive upper bound imposed by the int64 kernel.
MAX_PRIME = 2**62

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


@lru_cache(maxsize=256)
def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with the first 13 prime bases (deterministic below 3.3e24)."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_prime(p: int, *, witness: bool = False) -> int:
    """Validate a modulus and return it as a Python int.

    With ``witness=True`` the prime must also be at least 2**31.
    """
    p = int(p)
    if not 2 <= p < MAX_PRIME:
        raise ValueError(f"modulus {p} outside [2, 2**62)")
    if witness and p < MIN_WITNESS_PRIME:
        raise ValueError(f"prime {p} is smaller than 2**31")
    if not is_probable_prime(p):
        raise ValueError(f"{p} is not prime")
    return p


def retry_primes(prime: int) -> tuple[int, ...]:
    """Retry schedule for ``prime``: RETRY_PRIMES with ``prime`` skipped."""
    return tuple(q for q in RETRY_PRIMES if q != prime)


@dataclass(frozen=True, eq=False)
class PrimeFieldMatrix:
    """Dense row-major matrix with entries reduced into [0, p)."""

    entries: np.ndarray
    p: int

    def __post_init__(self):
        p = check_prime(self.p)
        a = np.asarray(self.entries)
        if a.ndim != 2:
            raise ValueError("entries must be two-dimensional")
        if a.dtype != np.int64 or a.size and (a.min() < 0 or a.max() >= p):
            a = np.array([[int(x) % p for x in row] for row in a.tolist()],
                         dtype=np.int64).reshape(a.shape)
        object.__setattr__(self, "entries", np.ascontiguousarray(a))
        object.__setattr__(self, "p", p)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], p: int) -> PrimeFieldMatrix:
        rows = [[int(x) % p for x in r] for r in rows]
        width = len(rows[0]) if rows else 0
        return cls(np.array(rows, dtype=np.int64).reshape(len(rows), width), p)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


class IncrementalRank:
    """Row echelon basis over F_p that grows as rows are appended.

    ``add_rows`` returns the rank after each appended row, so the ranks of
    every prefix of a stacked matrix come out of a single elimination.
    """

    def __init__(self, cols: int, p: int, capacity: int = 64):
        self.cols = int(cols)
        self.p = check_prime(p)
        self.rank = 0
        self._owner = -np.ones(self.cols, dtype=np.int64)
        self._alloc(min(max(capacity, 1), max(self.cols, 1)))

    def _alloc(self, cap: int):
        old = getattr(self, "_hi", None)
        hi = np.zeros((cap, self.cols), dtype=np.int64)
        lo = np.zeros((cap, self.cols), dtype=np.int64)
        hf = np.zeros((cap, self.cols), dtype=np.float64)
        lf = np.zeros((cap, self.cols), dtype=np.float64)
        if old is not None:
            r = self.rank
            hi[:r], lo[:r] = self._hi[:r], self._lo[:r]
            hf[:r], lf[:r] = self._hf[:r], self._lf[:r]
        self._hi, self._lo, self._hf, self._lf = hi, lo, hf, lf

    def add_rows(self, rows) -> np.ndarray:
        a = np.ascontiguousarray(rows, dtype=np.int64)
        if a.ndim == 1:
            a = a.reshape(1, -1)
        if a.shape[1] != self.cols:
            raise ValueError(f"expected {self.cols} columns, got {a.shape[1]}")
        if a.size and (a.min() < 0 or a.max() >= self.p):
            raise ValueError("entries must be reduced into [0, p)")
        need = min(self.rank + a.shape[0], self.cols)
        if need > self._hi.shape[0]:
            self._alloc(min(max(need, 2 * self._hi.shape[0]), self.cols))
        out = np.empty(a.shape[0], dtype=np.int64)
        self.rank = int(_kernels.absorb_rows(
            a, self.p, self._hi, self._lo, self._hf, self._lf,
            self._owner, self.rank, out))
        return out

    def basis(self) -> np.ndarray:
        """The normalized echelon rows found so far."""
        r = self.rank
        return (self._hi[:r] << 32) | self._lo[:r]


def rank_mod_p(m: PrimeFieldMatrix) -> int:
    """Exact rank of ``m`` over F_p."""
    if m.rows == 0 or m.cols == 0:
        return 0
    eng = IncrementalRank(m.cols, m.p, capacity=min(m.rows, m.cols))
    eng.add_rows(m.entries)
    return eng.rank


def rank_profile_mod_p(m: PrimeFieldMatrix) -> np.ndarray:
    """Ranks of the leading row blocks: entry t is the rank of rows 0..t."""
    eng = IncrementalRank(m.cols, m.p, capacity=min(m.rows, m.cols))
    return eng.add_rows(m.entries)


@dataclass(frozen=True)
class RationalMatrix:
    """Matrix of exact fractions stored as a tuple of row tuples."""

    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in r) for r in self.entries)
        if len({len(r) for r in rows}) > 1:
            raise ValueError("ragged rows")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence]) -> RationalMatrix:
        return cls(tuple(tuple(r) for r in rows))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), len(self.entries[0]) if self.entries else 0

    def integer_rows(self) -> list[list[int]]:
        """Each row scaled by the lcm of its denominators."""
        out = []
        for r in self.entries:
            den = lcm(*(x.denominator for x in r)) if r else 1
            out.append([int(x * den) for x in r])
        return out

    def transpose(self) -> RationalMatrix:
        return RationalMatrix(tuple(zip(*self.entries)))


def bareiss_rank(rows: list[list[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    a = [list(r) for r in rows]
    if not a or not a[0]:
        return 0
    m, n = len(a), len(a[0])
    r, prev = 0, 1
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pr = a[r]
        pv = pr[c]
        for i in range(r + 1, m):
            row = a[i]
            f = row[c]
            # exact by Sylvester's identity
            for j in range(c + 1, n):
                row[j] = (pv * row[j] - f * pr[j]) // prev
            row[c] = 0
        prev = pv
        r += 1
        if r == m:
            break
    return r


def rank_exact_rational(m: RationalMatrix) -> int:
    """Exact rank of ``m`` over the rationals."""
    return bareiss_rank(m.integer_rows())
