"""Tangent frames, Terracini matrices and exact rank witnesses.

The affine cone over X at an embedded point is spanned by the point itself
and its partial derivatives in the chart coordinates.  Stacking these frames
for k random points gives the Terracini matrix, whose rank is the affine
dimension of the span of k tangent spaces.  Over F_p a full-rank result is a
certificate in characteristic 0 (a nonzero minor mod p is a nonzero integer
minor); a rank drop is only evidence.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .linalg import (DEFAULT_PRIME, IncrementalRank, PrimeFieldMatrix, RationalMatrix,
                     check_prime, rank_exact_rational, rank_mod_p, retry_primes, RETRY_PRIMES)
from .varieties import (GaussianMoment1D, ParameterPoint, VarietySpec, ambient, embed,
                        gaussian_moments, kron_all, monomial_block, sample_point)

__all__ = [
    "Dual", "TangentFrame", "TerraciniMatrix", "Witness", "WitnessProvider",
    "gaussian_moments", "jet_check", "secant_dim_witness", "tangent_frame",
    "terracini_matrix", "witness_point",
]


def _gaussian_frame(mu, var, d, modulus):
    red = (lambda x: x % modulus) if modulus is not None else (lambda x: x)
    m = gaussian_moments(mu, var, d, modulus)
    dm = [0, 1][: d + 1]
    dv = [0, 0][: d + 1]
    for j in range(2, d + 1):
        dm.append(red(m[j - 1] + mu * dm[j - 1] + (j - 1) * var * dm[j - 2]))
        dv.append(red(mu * dv[j - 1] + (j - 1) * m[j - 2] + (j - 1) * var * dv[j - 2]))
    return [m, dm, dv]


@dataclass(frozen=True, eq=False)
class TangentFrame:
    """Row 0 is the embedded point, row 1 + j the derivative in flat chart coordinate j."""

    point: ParameterPoint
    vectors: np.ndarray


def tangent_frame(spec: VarietySpec, point: ParameterPoint) -> TangentFrame:
    mod = point.modulus
    if isinstance(spec, GaussianMoment1D):
        (mu, var), = point.coords
        rows = _gaussian_frame(mu, var, spec.d, mod)
        fast = mod is not None and type(mu) is int and type(var) is int
        return TangentFrame(point, np.array(rows, dtype=np.int64 if fast else object))
    blocks = [monomial_block(c, d_i, mod) for c, d_i in zip(point.coords, spec.degs)]
    base = [b[0] for b in blocks]
    rows = [kron_all(base, mod)]
    for i, b in enumerate(blocks):
        for j in range(1, b.shape[0]):
            rows.append(kron_all(base[:i] + [b[j]] + base[i + 1:], mod))
    dtype = np.int64 if all(r.dtype == np.int64 for r in rows) else object
    return TangentFrame(point, np.array(rows, dtype=dtype))


@dataclass(frozen=True, eq=False)
class TerraciniMatrix:
    """k stacked tangent frames; ``seeds`` records how the points were drawn, if known."""

    spec: VarietySpec
    points: tuple[ParameterPoint, ...]
    rows: np.ndarray
    modulus: int | None
    seeds: tuple | None = None

    @property
    def k(self) -> int:
        return len(self.points)

    def rank(self) -> int:
        if self.modulus is not None:
            return rank_mod_p(PrimeFieldMatrix(self.rows, self.modulus))
        return rank_exact_rational(RationalMatrix.from_rows(self.rows.tolist()))


def terracini_matrix(spec: VarietySpec, points, seeds=None) -> TerraciniMatrix:
    points = tuple(points)
    if not points:
        raise ValueError("at least one point is required")
    mods = {p.modulus for p in points}
    if len(mods) != 1:
        raise ValueError(f"points over different fields: {sorted(mods, key=str)}")
    mod = mods.pop()
    frames = [tangent_frame(spec, p).vectors for p in points]
    rows = np.vstack(frames)
    return TerraciniMatrix(spec, points, rows, mod, None if seeds is None else tuple(seeds))


def witness_point(spec: VarietySpec, seed: int, attempt: int, index: int,
                  prime: int) -> ParameterPoint:
    """Point ``index`` of witness attempt ``attempt``; seeded by (seed, attempt, index)."""
    return sample_point(spec, (seed, attempt, index), prime)


@dataclass(frozen=True)
class Witness:
    spec: VarietySpec
    level: int
    prime: int
    seed: int
    rank: int
    expected: int
    achieved: bool
    retries_used: int
    attempt: int = 0  # attempt that produced ``rank``

    @property
    def deficit(self) -> int:
        return self.expected - self.rank

    def to_record(self) -> dict:
        return {
            "prime": self.prime, "seed": self.seed, "level": self.level,
            "rank": self.rank, "expected": self.expected, "achieved": self.achieved,
            "retries": self.retries_used, "attempt": self.attempt,
        }


class _Run:
    """Prefix ranks of the Terracini matrices along one seeded point stream."""

    def __init__(self, spec, prime, seed, attempt):
        a = ambient(spec)
        self.spec, self.prime, self.seed, self.attempt = spec, prime, seed, attempt
        self.N = a.N
        self.eng = IncrementalRank(a.N, prime, capacity=min(a.N, 16 * (a.n + 1)))
        self.ranks: list[int] = []

    def rank_at(self, level: int) -> int:
        while len(self.ranks) < level:
            if self.eng.rank < self.N:
                pt = witness_point(self.spec, self.seed, self.attempt, len(self.ranks), self.prime)
                self.eng.add_rows(tangent_frame(self.spec, pt).vectors)
            self.ranks.append(self.eng.rank)
        return self.ranks[level - 1]


class WitnessProvider:
    """Callable ``(spec, level) -> Witness`` with a fixed prime, seed and retry budget.

    Attempt 0 uses ``prime``; attempt i >= 1 uses the i-th entry of
    ``retry_primes(prime)``.  Point j of attempt i is seeded by
    ``(seed, i, j)``, so the points for level k are a prefix of those for
    level k + 1, and results are cached per (spec, attempt).
    """

    def __init__(self, prime: int = DEFAULT_PRIME, seed: int = 0, max_retries: int = 3):
        self.prime = check_prime(prime, witness=True)
        if seed < 0:
            raise ValueError("seed must be nonnegative")
        if not 0 <= max_retries <= len(RETRY_PRIMES) - 1:
            raise ValueError(f"max_retries must be in [0, {len(RETRY_PRIMES) - 1}]")
        self.seed = int(seed)
        self.max_retries = int(max_retries)
        self.primes = (self.prime,) + retry_primes(self.prime)[: self.max_retries]
        self._runs: dict = {}
        self._lock = threading.Lock()

    def config(self) -> dict:
        return {"prime_list": list(self.primes), "max_retries": self.max_retries,
                "seed": self.seed}

    def _rank(self, spec, attempt, level):
        key = (spec, attempt)
        with self._lock:
            run = self._runs.get(key)
            if run is None:
                run = self._runs[key] = _Run(spec, self.primes[attempt], self.seed, attempt)
            return run.rank_at(level)

    def __call__(self, spec: VarietySpec, level: int) -> Witness:
        if level < 1:
            raise ValueError("level must be positive")
        a = ambient(spec)
        expected = min(level * (a.n + 1), a.N)
        best, best_attempt, used = -1, 0, 0
        for attempt in range(self.max_retries + 1):
            used = attempt
            r = self._rank(spec, attempt, level)
            if r > best:
                best, best_attempt = r, attempt
            if best == expected:
                break
        return Witness(spec, level, self.primes[best_attempt], self.seed, best, expected,
                       best == expected, used, best_attempt)


def secant_dim_witness(spec: VarietySpec, k: int, prime: int = DEFAULT_PRIME,
                       seed: int = 0, max_retries: int = 3) -> Witness:
    """Exact rank of the Terracini matrix of k random points, with retries."""
    return WitnessProvider(prime, seed, max_retries)(spec, k)


@dataclass(frozen=True)
class Dual:
    """a + b*t with t**2 = 0."""

    a: object
    b: object = 0

    def __add__(self, o):
        if isinstance(o, Dual):
            return Dual(self.a + o.a, self.b + o.b)
        return Dual(self.a + o, self.b)

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.a, -self.b)

    def __sub__(self, o):
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, Dual):
            return Dual(self.a * o.a, self.a * o.b + self.b * o.a)
        return Dual(self.a * o, self.b * o)

    __rmul__ = __mul__

    def __mod__(self, p):
        return Dual(self.a % p, self.b % p)


def _eps(x):
    return x.b if isinstance(x, Dual) else 0


def _val(x):
    return x.a if isinstance(x, Dual) else x


def jet_check(spec: VarietySpec, point: ParameterPoint, index: int) -> bool:
    """Compare the frame row for coordinate ``index`` with a dual-number derivative of ``embed``."""
    x = point.flat()[index]
    jet = embed(spec, point.replace(index, Dual(x, 1)))
    frame = tangent_frame(spec, point).vectors
    mod = point.modulus
    deriv = [_eps(e) for e in jet]
    value = [_val(e) for e in jet]
    if mod is not None:
        deriv = [v % mod for v in deriv]
        value = [v % mod for v in value]
    same = lambda u, v: all(Fraction(s) == Fraction(t) for s, t in zip(u, v)) and len(u) == len(v)
    return same(value, frame[0].tolist()) and same(deriv, frame[1 + index].tolist())
