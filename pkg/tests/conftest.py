import random

import pytest

from terracert import Segre, secant_dim_witness


def brute_rank(rows, p=None):
    """Plain Gaussian elimination on Python ints (mod p) or Fractions."""
    from fractions import Fraction
    a = [[(x % p) if p else Fraction(x) for x in r] for r in rows]
    rank, cols = 0, len(a[0]) if a else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][c], -1, p) if p else 1 / a[rank][c]
        a[rank] = [(x * inv) % p if p else x * inv for x in a[rank]]
        for i in range(len(a)):
            if i != rank and a[i][c] != 0:
                f = a[i][c]
                a[i] = [((x - f * y) % p) if p else x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def random_lowrank(rng, m, n, r, bound):
    """Integer m x n matrix of rank <= r with entries of moderate size."""
    left = [[rng.randint(-bound, bound) for _ in range(r)] for _ in range(m)]
    right = [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(r)]
    return [[sum(left[i][t] * right[t][j] for t in range(r)) for j in range(n)] for i in range(m)]


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # trigger numba compilation outside any timed region
    secant_dim_witness(Segre(1, 1), 2, max_retries=0)


@pytest.fixture
def rng():
    return random.Random(20240611)
