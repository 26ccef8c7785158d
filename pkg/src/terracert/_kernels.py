"""numba kernels for arithmetic modulo a prime p < 2**62.

Elements are stored as int64 in [0, p).  Products of two residues need up
to 124 bits, so a product is never formed directly: the right operand is
split as ``b = b1 * 2**32 + b0`` and ``a * 2**32 mod p`` is computed once per
left operand.  The quotient of the two-term sum by p is estimated in double
precision and the remainder is recovered with wrapping int64 arithmetic; the
estimate is off by at most one, so one reduction per entry suffices.
"""
import numpy as np
import numba as nb

TWO32 = 4294967296.0
LOW32 = 0xFFFFFFFF


@nb.njit(inline="always", cache=True)
def _fix(r, p):
    # r in (-2p, 2p) -> [0, p)
    if r < 0:
        r += p
        if r < 0:
            r += p
    elif r >= p:
        r -= p
    return r


@nb.njit(inline="always", cache=True)
def shl32mod(a, p, pinv):
    q = np.int64(float(a) * TWO32 * pinv)
    return _fix((a << 32) - q * p, p)


@nb.njit(inline="always", cache=True)
def mulmod(a, b, p, pinv):
    b1 = b >> 32
    b0 = b & LOW32
    g = shl32mod(a, p, pinv)
    q = np.int64(float(g) * (float(b1) * pinv) + float(a) * (float(b0) * pinv))
    return _fix(g * b1 + a * b0 - q * p, p)


@nb.njit(cache=True)
def powmod(a, e, p, pinv):
    r = np.int64(1)
    while e > 0:
        if e & 1:
            r = mulmod(r, a, p, pinv)
        a = mulmod(a, a, p, pinv)
        e >>= 1
    return r


@nb.njit(cache=True)
def mul_vec(a, b, p):
    pinv = 1.0 / p
    out = np.empty_like(a)
    for i in range(a.shape[0]):
        out[i] = mulmod(a[i], b[i], p, pinv)
    return out


@nb.njit(cache=True)
def kron_mod(a, b, p):
    pinv = 1.0 / p
    nb_ = b.shape[0]
    out = np.empty(a.shape[0] * nb_, dtype=np.int64)
    for i in range(a.shape[0]):
        x = a[i]
        base = i * nb_
        for j in range(nb_):
            out[base + j] = mulmod(x, b[j], p, pinv)
    return out


@nb.njit(cache=True)
def monomial_frame(coords, exps, p):
    """Values and first partials of the monomials ``exps`` at ``coords``.

    Row 0 holds the monomial values, row 1 + j the partials in coords[j].
    """
    pinv = 1.0 / p
    nvar = coords.shape[0]
    nmon = exps.shape[0]
    dmax = 0
    for m in range(nmon):
        for j in range(nvar):
            if exps[m, j] > dmax:
                dmax = exps[m, j]
    pw = np.empty((nvar, dmax + 1), dtype=np.int64)
    for j in range(nvar):
        pw[j, 0] = 1
        for e in range(1, dmax + 1):
            pw[j, e] = mulmod(pw[j, e - 1], coords[j], p, pinv)
    out = np.zeros((nvar + 1, nmon), dtype=np.int64)
    for m in range(nmon):
        v = np.int64(1)
        for j in range(nvar):
            v = mulmod(v, pw[j, exps[m, j]], p, pinv)
        out[0, m] = v
        for j in range(nvar):
            e = exps[m, j]
            if e == 0:
                continue
            w = np.int64(e % p)
            for l in range(nvar):
                if l == j:
                    w = mulmod(w, pw[l, e - 1], p, pinv)
                else:
                    w = mulmod(w, pw[l, exps[m, l]], p, pinv)
            out[1 + j, m] = w
    return out


@nb.njit(cache=True)
def absorb_rows(rows, p, hi, lo, hf, lf, owner, rank, out):
    """Sweep ``rows`` one at a time against an echelon basis.

    The basis is stored split: ``hi``/``lo`` are the 32-bit halves of each
    normalized basis row and ``hf``/``lf`` the same halves scaled by 1/p.
    ``owner[c]`` is the basis row whose pivot is column c, or -1.  Writes the
    rank after each row into ``out`` and returns the final rank.
    """
    nrows, cols = rows.shape
    pinv = 1.0 / p
    v = np.empty(cols, dtype=np.int64)
    for t in range(nrows):
        if rank == cols:
            out[t] = rank
            continue
        for c in range(cols):
            v[c] = rows[t, c]
        for c in range(cols):
            x = v[c]
            if x == 0:
                continue
            i = owner[c]
            if i < 0:
                inv = powmod(x, p - 2, p, pinv)
                for cc in range(c, cols):
                    b = mulmod(v[cc], inv, p, pinv)
                    h = b >> 32
                    l = b & LOW32
                    hi[rank, cc] = h
                    lo[rank, cc] = l
                    hf[rank, cc] = float(h) * pinv
                    lf[rank, cc] = float(l) * pinv
                owner[c] = rank
                rank += 1
                break
            g = shl32mod(x, p, pinv)
            gf = float(g)
            xf = float(x)
            hrow = hi[i]
            lrow = lo[i]
            hfr = hf[i]
            lfr = lf[i]
            for cc in range(c, cols):
                q = np.int64(gf * hfr[cc] + xf * lfr[cc])
                r = v[cc] - (g * hrow[cc] + x * lrow[cc] - q * p)
                r = r + p * (r < 0)
                r = r + p * (r < 0)
                r = r - p * (r >= p)
                v[cc] = r
        out[t] = rank
    return rank
