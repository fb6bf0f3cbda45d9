"""Pure-Python (numpy) implementations of the hot kernels.

Mirror of the compiled extension ``_kernels``; selected at import time when
the extension is unavailable or ``KLOOSTERLAB_PURE=1``.  Every function here
must stay value-identical to its compiled twin (see tests/test_kernels.py).

Inputs m, n are expected reduced to [0, q) so products fit in int64.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "python"

_CHUNK = 4096


def inverse_table(q: int) -> np.ndarray:
    """inv[x] = x^{-1} mod q for units, 0 for non-units (int64, length q)."""
    if q == 1:
        return np.zeros(1, dtype=np.int64)
    inv = np.zeros(q, dtype=np.int64)
    units = np.nonzero(np.gcd(np.arange(q, dtype=np.int64), q) == 1)[0]
    out = inv  # alias for the fill loop below
    for x in units.tolist():
        out[x] = pow(x, -1, q)
    return inv


def unit_sum(m: int, n: int, q: int, xs: np.ndarray, xinvs: np.ndarray,
             ret: np.ndarray, imt: np.ndarray) -> complex:
    """Sum of e_q(m*x + n*x^{-1}) over the units x listed in xs."""
    idx = (m * xs + n * xinvs) % q
    return complex(ret[idx].sum(), imt[idx].sum())


def unit_sum_many(ms: np.ndarray, ns: np.ndarray, q: int, xs: np.ndarray,
                  xinvs: np.ndarray, ret: np.ndarray, imt: np.ndarray) -> np.ndarray:
    out = np.empty(len(ms), dtype=np.complex128)
    for i in range(len(ms)):
        out[i] = unit_sum(int(ms[i]), int(ns[i]), q, xs, xinvs, ret, imt)
    return out


def signed_unit_sum(m: int, n: int, q: int, xs: np.ndarray, xinvs: np.ndarray,
                    signs: np.ndarray, ret: np.ndarray, imt: np.ndarray) -> complex:
    idx = (m * xs + n * xinvs) % q
    return complex((signs * ret[idx]).sum(), (signs * imt[idx]).sum())


def gauss_full(m: int, n: int, q: int, ret: np.ndarray, imt: np.ndarray) -> complex:
    a = np.arange(q, dtype=np.int64)
    idx = (m * (a * a % q) + n * a) % q
    return complex(ret[idx].sum(), imt[idx].sum())


def gauss_units(m: int, n: int, q: int, xs: np.ndarray,
                ret: np.ndarray, imt: np.ndarray) -> complex:
    idx = (m * (xs * xs % q) + n * xs) % q
    return complex(ret[idx].sum(), imt[idx].sum())


def j_brute(q: int, a: int, K: int, inv: np.ndarray) -> int:
    """#{(k1,k2) in [1,K]^2 coprime to q with k1^{-1}-k2^{-1} == a} by pair loop."""
    ks = np.arange(1, K + 1, dtype=np.int64)
    invs = inv[ks % q]
    invs = invs[invs > 0] if q > 1 else np.zeros(K, dtype=np.int64)
    if q == 1:
        return K * K
    total = 0
    for i in range(0, len(invs), _CHUNK):
        block = invs[i:i + _CHUNK]
        total += int(np.count_nonzero((block[:, None] - invs[None, :]) % q == a % q))
    return total


def j_fast(q: int, a: int, K: int, inv: np.ndarray) -> int:
    """Same count as j_brute via the inverse-lookup map, O(K)."""
    if q == 1:
        return K * K
    ks = np.arange(1, K + 1, dtype=np.int64)
    invs = inv[ks % q]
    invs = invs[invs > 0]
    want = (invs - a) % q
    k2 = inv[want]
    return int(np.count_nonzero((k2 > 0) & (k2 <= K)))


def j_hist_brute(q: int, K: int, inv: np.ndarray) -> np.ndarray:
    """Histogram over a of the j_brute count, via all pairs."""
    out = np.zeros(q, dtype=np.int64)
    if q == 1:
        out[0] = K * K
        return out
    ks = np.arange(1, K + 1, dtype=np.int64)
    invs = inv[ks % q]
    invs = invs[invs > 0]
    for i in range(0, len(invs), _CHUNK):
        block = invs[i:i + _CHUNK]
        d = (block[:, None] - invs[None, :]) % q
        out += np.bincount(d.ravel(), minlength=q)
    return out


def j_hist_fast(q: int, K: int, inv: np.ndarray) -> np.ndarray:
    """Histogram over a via the lookup route (independent of j_hist_brute)."""
    out = np.zeros(q, dtype=np.int64)
    if q == 1:
        out[0] = K * K
        return out
    ks = np.arange(1, K + 1, dtype=np.int64)
    invs = inv[ks % q]
    invs = invs[invs > 0]
    a = np.arange(q, dtype=np.int64)
    for i in range(0, len(invs), 256):
        block = invs[i:i + 256]
        k2 = inv[(block[:, None] - a[None, :]) % q]
        out += ((k2 > 0) & (k2 <= K)).sum(axis=0)
    return out


def diff_hist(elems: np.ndarray, p: int) -> np.ndarray:
    """r[d] = #{(x,y) in elems^2 : x - y == d mod p}."""
    out = np.zeros(p, dtype=np.int64)
    for i in range(0, len(elems), _CHUNK):
        block = elems[i:i + _CHUNK]
        d = (block[:, None] - elems[None, :]) % p
        out += np.bincount(d.ravel(), minlength=p)
    return out


def sparse_product_pair_count(vals: np.ndarray, cnts: np.ndarray, p: int) -> int:
    """Given multiplicities cnts at values vals, count weighted coincidences
    of pairwise products: sum_v f(v)^2 with f(v) = sum over (i,j) with
    vals_i * vals_j == v of cnts_i * cnts_j."""
    f = np.zeros(p, dtype=np.int64)
    n = len(vals)
    step = max(1, _CHUNK // max(1, n) + 1)
    for i in range(0, n, step):
        v = vals[i:i + step, None] * vals[None, :] % p
        w = cnts[i:i + step, None] * cnts[None, :]
        np.add.at(f, v, w)
    return int(np.dot(f, f))


def interval_product_count(a0: int, A: int, b0: int, B: int, p: int) -> int:
    """#{(a1,a2,b1,b2) in A^2 x B^2 : a1 b1 == a2 b2 mod p} for intervals."""
    av = (a0 + 1 + np.arange(A, dtype=np.int64)) % p
    bv = (b0 + 1 + np.arange(B, dtype=np.int64)) % p
    h = np.zeros(p, dtype=np.int64)
    for i in range(0, A, _CHUNK):
        prod = av[i:i + _CHUNK, None] * bv[None, :] % p
        h += np.bincount(prod.ravel(), minlength=p)
    return int(np.dot(h, h))


def mixed_product_count(a0: int, A: int, cs: np.ndarray, p: int) -> int:
    """#{(a1,a2,c1..c4) : a1(c1-c2) == a2(c3-c4) != 0 mod p}, interval x set."""
    av = (a0 + 1 + np.arange(A, dtype=np.int64)) % p
    d = (cs[:, None] - cs[None, :]) % p
    d = d[d > 0]
    g = np.zeros(p, dtype=np.int64)
    for i in range(0, len(d), _CHUNK):
        prod = av[:, None] * d[None, i:i + _CHUNK] % p
        g += np.bincount(prod.ravel(), minlength=p)
    g[0] = 0
    return int(np.dot(g, g))


def tau_sieve(X: int) -> np.ndarray:
    """tau(n) for 0 <= n <= X (index 0 unused, set to 0)."""
    out = np.zeros(X + 1, dtype=np.int32)
    for d in range(1, X + 1):
        out[d::d] += 1
    return out


def gcd_table(q: int) -> np.ndarray:
    return np.gcd(np.arange(q, dtype=np.int64), q)


def gcd(a: int, b: int) -> int:
    return math.gcd(a, b)
