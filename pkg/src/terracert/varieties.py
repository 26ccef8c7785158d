"""Embedded varieties: Segre-Veronese products and the Gaussian moment surface.

Every ``VarietySpec`` is one of two canonical classes.  ``Segre`` and
``Veronese`` are constructors returning ``SegreVeronese`` instances, so
``Veronese(n, d) == SegreVeronese((n,), (d,))`` and
``Segre(*dims) == SegreVeronese(dims, (1,) * len(dims))``.

Parameter points live in the affine chart where the leading homogeneous
coordinate of every factor is 1.  Veronese blocks use plain monomials (no
multinomial weights) in the order of
``itertools.combinations_with_replacement``, which is descending
lexicographic order on exponent vectors; the first monomial is always 1.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb, prod
from typing import Sequence, Union

import numpy as np

from . import _kernels
from .linalg import DEFAULT_PRIME, check_prime

#: Coordinate counts must fit a signed 64-bit integer.
MAX_AMBIENT = 2**63 - 1

#: Rational sample points draw integer coordinates from [-RATIONAL_BOX, RATIONAL_BOX].
RATIONAL_BOX = 1000


class SpecError(ValueError):
    pass


class FormatTooLarge(SpecError):
    pass


class SpecParseError(SpecError):
    def __init__(self, message: str, text: str, offset: int):
        super().__init__(f"{message} at offset {offset} in {text!r}")
        self.text = text
        self.offset = offset


@dataclass(frozen=True)
class SegreVeronese:
    """P^{n_1} x ... x P^{n_s} embedded by O(d_1, ..., d_s)."""

    dims: tuple[int, ...]
    degs: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(x) for x in self.dims)
        degs = tuple(int(x) for x in self.degs)
        if not dims:
            raise SpecError("at least one factor is required")
        if len(dims) != len(degs):
            raise SpecError(f"{len(dims)} dimensions but {len(degs)} degrees")
        if min(dims) < 1 or min(degs) < 1:
            raise SpecError("dimensions and degrees must be positive")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "degs", degs)

    @property
    def s(self) -> int:
        return len(self.dims)

    @property
    def is_segre(self) -> bool:
        return all(d == 1 for d in self.degs)

    @property
    def is_veronese(self) -> bool:
        return self.s == 1 and self.degs[0] >= 2

    def __str__(self) -> str:
        return format_spec(self)


@dataclass(frozen=True)
class GaussianMoment1D:
    """Moments m_0..m_d of a univariate Gaussian, a surface in P^d."""

    d: int

    def __post_init__(self):
        if int(self.d) < 3:
            raise SpecError("the moment surface needs d >= 3")
        object.__setattr__(self, "d", int(self.d))

    def __str__(self) -> str:
        return format_spec(self)


VarietySpec = Union[SegreVeronese, GaussianMoment1D]


def Segre(*dims) -> SegreVeronese:
    if len(dims) == 1 and not isinstance(dims[0], int):
        dims = tuple(dims[0])
    return SegreVeronese(tuple(dims), (1,) * len(dims))


def Veronese(n: int, d: int) -> SegreVeronese:
    return SegreVeronese((n,), (d,))


def normalize(spec: VarietySpec) -> VarietySpec:
    """Canonical form of ``spec``; idempotent."""
    if isinstance(spec, SegreVeronese):
        return SegreVeronese(spec.dims, spec.degs)
    if isinstance(spec, GaussianMoment1D):
        return GaussianMoment1D(spec.d)
    raise SpecError(f"not a variety spec: {spec!r}")


@dataclass(frozen=True)
class AmbientInfo:
    n: int  # intrinsic dimension
    r: int  # projective ambient dimension
    N: int  # affine cone coordinates, r + 1


def ambient(spec: VarietySpec) -> AmbientInfo:
    if isinstance(spec, GaussianMoment1D):
        return AmbientInfo(2, spec.d, spec.d + 1)
    N = 1
    for n_i, d_i in zip(spec.dims, spec.degs):
        N *= comb(n_i + d_i, d_i)
        if N > MAX_AMBIENT:
            raise FormatTooLarge(f"{format_spec(spec)} has more than 2**63 - 1 coordinates")
    n = sum(spec.dims)
    if N < n + 2:
        raise SpecError(f"{format_spec(spec)} fills its ambient space")
    return AmbientInfo(n, N - 1, N)


def expected_secant_dim(spec: VarietySpec, k: int) -> int:
    """Expected projective dimension of the k-th secant variety."""
    if k < 1:
        raise ValueError("k must be positive")
    a = ambient(spec)
    return min(k * (a.n + 1) - 1, a.r)


def is_uniruled_by_lines(spec: VarietySpec) -> bool:
    """Conservative: True unless the variety is known to carry no covering family of lines."""
    if isinstance(spec, GaussianMoment1D):
        # the non-ruledness argument needs d >= 4
        return spec.d < 4
    return any(d == 1 for d in spec.degs)


@dataclass(frozen=True)
class ParameterPoint:
    """Affine chart coordinates, one tuple per factor.

    For the moment surface ``coords == ((mu, var),)``.  ``modulus`` is the
    prime of the field the coordinates live in, or None for the rationals.
    """

    coords: tuple[tuple, ...]
    modulus: int | None = None

    def flat(self) -> list:
        return [x for block in self.coords for x in block]

    def replace(self, index: int, value) -> ParameterPoint:
        """Copy with flat coordinate ``index`` set to ``value``."""
        blocks, seen = [], 0
        for block in self.coords:
            b = list(block)
            if seen <= index < seen + len(b):
                b[index - seen] = value
            seen += len(b)
            blocks.append(tuple(b))
        if not 0 <= index < seen:
            raise IndexError(index)
        return ParameterPoint(tuple(blocks), self.modulus)


def factor_sizes(spec: VarietySpec) -> tuple[int, ...]:
    if isinstance(spec, GaussianMoment1D):
        return (2,)
    return spec.dims


def sample_point(spec: VarietySpec, seed, modulus: int | None = DEFAULT_PRIME,
                 box: int = RATIONAL_BOX) -> ParameterPoint:
    """Uniform random point; deterministic in ``seed``.

    ``seed`` is anything ``numpy.random.default_rng`` accepts (an int or a
    sequence of ints).  Over F_p coordinates are uniform in [0, p); with
    ``modulus=None`` they are uniform integers in [-box, box].
    """
    rng = np.random.default_rng(seed)
    sizes = factor_sizes(spec)
    if modulus is None:
        draw = lambda m: tuple(int(x) for x in rng.integers(-box, box + 1, size=m))
    else:
        p = check_prime(modulus, witness=True)
        draw = lambda m: tuple(int(x) for x in rng.integers(0, p, size=m))
    return ParameterPoint(tuple(draw(m) for m in sizes), modulus)


@lru_cache(maxsize=None)
def monomial_exponents(n: int, d: int) -> np.ndarray:
    """Exponents of x_1..x_n (x_0 = 1) over all degree-d monomials in n + 1 variables."""
    rows = []
    for c in combinations_with_replacement(range(n + 1), d):
        e = [0] * n
        for v in c:
            if v:
                e[v - 1] += 1
        rows.append(e)
    a = np.array(rows, dtype=np.int64).reshape(len(rows), n)
    a.setflags(write=False)
    return a


def monomial_block(coords: Sequence, d: int, modulus: int | None = None):
    """Monomial vector of (1, *coords) in degree d, with its first partials.

    Returns an array of shape (len(coords) + 1, binom(n + d, d)): row 0 is
    the vector and row 1 + j its derivative in coords[j].
    """
    n = len(coords)
    exps = monomial_exponents(n, d)
    if modulus is not None and all(type(x) is int for x in coords):
        c = np.array([x % modulus for x in coords], dtype=np.int64)
        return _kernels.monomial_frame(c, exps, modulus)
    out = np.zeros((n + 1, exps.shape[0]), dtype=object)
    pw = [[1] * (d + 1) for _ in range(n)]
    for j, x in enumerate(coords):
        for e in range(1, d + 1):
            pw[j][e] = pw[j][e - 1] * x
    for m, e in enumerate(exps.tolist()):
        out[0, m] = prod((pw[j][e[j]] for j in range(n)), start=1)
        for j in range(n):
            if e[j]:
                out[1 + j, m] = e[j] * prod(
                    (pw[l][e[l] - (l == j)] for l in range(n)), start=1)
    if modulus is not None:
        out %= modulus
    return out


def kron(a, b, modulus: int | None = None):
    if modulus is not None and a.dtype == np.int64 and b.dtype == np.int64:
        return _kernels.kron_mod(a, b, modulus)
    out = np.multiply.outer(a, b).ravel()
    if modulus is not None:
        out %= modulus
    return out


def kron_all(vectors, modulus: int | None = None):
    out = vectors[0]
    for v in vectors[1:]:
        out = kron(out, v, modulus)
    return out


def gaussian_moments(mu, var, d: int, modulus: int | None = None) -> list:
    """Raw moments E[X^j], j = 0..d, of X ~ N(mu, var)."""
    if d < 0:
        raise ValueError("d must be nonnegative")
    red = (lambda x: x % modulus) if modulus is not None else (lambda x: x)
    m = [red(1 + 0 * mu)]
    if d >= 1:
        m.append(red(mu))
    for j in range(2, d + 1):
        m.append(red(mu * m[j - 1] + (j - 1) * var * m[j - 2]))
    return m


def _as_vector(values, modulus):
    if modulus is not None and all(type(x) is int for x in values):
        return np.array(values, dtype=np.int64)
    return np.array(values, dtype=object)


def embed(spec: VarietySpec, point: ParameterPoint):
    """Affine cone coordinates of the image of ``point`` (length N)."""
    mod = point.modulus
    if isinstance(spec, GaussianMoment1D):
        (mu, var), = point.coords
        return _as_vector(gaussian_moments(mu, var, spec.d, mod), mod)
    if len(point.coords) != spec.s:
        raise SpecError("point does not match the number of factors")
    blocks = []
    for c, n_i, d_i in zip(point.coords, spec.dims, spec.degs):
        if len(c) != n_i:
            raise SpecError("point does not match the factor dimension")
        blocks.append(monomial_block(c, d_i, mod)[0])
    return kron_all(blocks, mod)


_SPEC_RE = re.compile(r"[a-z]+")


def _int_list(text: str, start: int, end: int, sep: str, full: str) -> list[int]:
    out, pos = [], start
    for part in text[start:end].split(sep):
        if not part.isdigit():
            raise SpecParseError(f"expected a positive integer, found {part!r}", full, pos)
        value = int(part)
        if value < 1:
            raise SpecParseError("entries must be positive", full, pos)
        out.append(value)
        pos += len(part) + 1
    return out


def parse_spec(text: str) -> VarietySpec:
    """Parse ``segre:n1,..`` | ``veronese:n,d`` | ``sv:n1,../d1,..`` | ``gauss:d`` | ``shape:a1x..``.

    ``shape`` takes tensor side lengths a_i = n_i + 1 and yields a Segre spec.
    """
    m = _SPEC_RE.match(text)
    if not m or m.end() >= len(text) or text[m.end()] != ":":
        raise SpecParseError("expected '<family>:'", text, m.end() if m else 0)
    family, start = m.group(), m.end() + 1
    if start == len(text):
        raise SpecParseError("missing parameters", text, start)
    try:
        if family == "segre":
            spec = Segre(_int_list(text, start, len(text), ",", text))
        elif family == "veronese":
            vals = _int_list(text, start, len(text), ",", text)
            if len(vals) != 2:
                raise SpecParseError("veronese takes exactly n,d", text, start)
            spec = Veronese(*vals)
        elif family == "sv":
            slash = text.find("/", start)
            if slash < 0:
                raise SpecParseError("expected '/' between dimensions and degrees", text, len(text))
            dims = _int_list(text, start, slash, ",", text)
            degs = _int_list(text, slash + 1, len(text), ",", text)
            if len(dims) != len(degs):
                raise SpecParseError(
                    f"{len(dims)} dimensions but {len(degs)} degrees", text, slash + 1)
            spec = SegreVeronese(tuple(dims), tuple(degs))
        elif family == "gauss":
            vals = _int_list(text, start, len(text), ",", text)
            if len(vals) != 1:
                raise SpecParseError("gauss takes exactly d", text, start)
            spec = GaussianMoment1D(vals[0])
        elif family == "shape":
            sizes = _int_list(text, start, len(text), "x", text)
            pos = start
            for a in sizes:
                if a < 2:
                    raise SpecParseError("tensor sides must be at least 2", text, pos)
                pos += len(str(a)) + 1
            spec = Segre([a - 1 for a in sizes])
        else:
            raise SpecParseError(f"unknown family {family!r}", text, 0)
        ambient(spec)
    except SpecParseError:
        raise
    except SpecError as exc:
        raise SpecParseError(str(exc), text, start) from None
    return spec


def format_spec(spec: VarietySpec) -> str:
    """Canonical spec string; ``parse_spec(format_spec(x)) == x``."""
    if isinstance(spec, GaussianMoment1D):
        return f"gauss:{spec.d}"
    dims = ",".join(map(str, spec.dims))
    if spec.is_segre:
        return f"segre:{dims}"
    if spec.s == 1:
        return f"veronese:{spec.dims[0]},{spec.degs[0]}"
    return f"sv:{dims}/{','.join(map(str, spec.degs))}"
