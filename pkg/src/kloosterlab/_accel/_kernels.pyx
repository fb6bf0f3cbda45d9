# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: brute exponential sums and counting loops.

Value-identical twin of ``_kernels_py``; the package selects whichever
imports (see ``kloosterlab._accel``).  Inputs m, n are expected reduced to
[0, q) so products fit in 64 bits.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"

ctypedef cnp.int64_t i64


cdef inline long long _egcd_inv(long long x, long long q) noexcept:
    # inverse of x mod q, or 0 when gcd(x, q) != 1
    cdef long long a = x, b = q, u0 = 1, u1 = 0, t, quo
    while b:
        quo = a / b
        t = a - quo * b; a = b; b = t
        t = u0 - quo * u1; u0 = u1; u1 = t
    if a != 1:
        return 0
    u0 %= q
    if u0 < 0:
        u0 += q
    return u0


def inverse_table(long long q):
    """inv[x] = x^{-1} mod q for units, 0 for non-units (int64, length q)."""
    out = np.zeros(q if q > 1 else 1, dtype=np.int64)
    cdef i64[::1] inv = out
    cdef long long x
    if q == 1:
        return out
    for x in range(1, q):
        inv[x] = _egcd_inv(x, q)
    return out


def unit_sum(long long m, long long n, long long q,
             i64[::1] xs, i64[::1] xinvs,
             double[::1] ret, double[::1] imt):
    """Sum of e_q(m*x + n*x^{-1}) over the units x listed in xs."""
    cdef double sre = 0.0, sim = 0.0
    cdef Py_ssize_t i
    cdef long long idx
    for i in range(xs.shape[0]):
        idx = (m * xs[i] + n * xinvs[i]) % q
        sre += ret[idx]
        sim += imt[idx]
    return complex(sre, sim)


def unit_sum_many(i64[::1] ms, i64[::1] ns, long long q,
                  i64[::1] xs, i64[::1] xinvs,
                  double[::1] ret, double[::1] imt):
    out = np.empty(ms.shape[0], dtype=np.complex128)
    cdef cnp.complex128_t[::1] ov = out
    cdef double sre, sim
    cdef Py_ssize_t i, k
    cdef long long idx, m, n
    for k in range(ms.shape[0]):
        m = ms[k]; n = ns[k]
        sre = 0.0; sim = 0.0
        for i in range(xs.shape[0]):
            idx = (m * xs[i] + n * xinvs[i]) % q
            sre += ret[idx]
            sim += imt[idx]
        ov[k] = sre + 1j * sim
    return out


def signed_unit_sum(long long m, long long n, long long q,
                    i64[::1] xs, i64[::1] xinvs, i64[::1] signs,
                    double[::1] ret, double[::1] imt):
    cdef double sre = 0.0, sim = 0.0
    cdef Py_ssize_t i
    cdef long long idx
    for i in range(xs.shape[0]):
        idx = (m * xs[i] + n * xinvs[i]) % q
        sre += signs[i] * ret[idx]
        sim += signs[i] * imt[idx]
    return complex(sre, sim)


def gauss_full(long long m, long long n, long long q,
               double[::1] ret, double[::1] imt):
    cdef double sre = 0.0, sim = 0.0
    cdef long long a, idx
    for a in range(q):
        idx = (m * ((a * a) % q) + n * a) % q
        sre += ret[idx]
        sim += imt[idx]
    return complex(sre, sim)


def gauss_units(long long m, long long n, long long q, i64[::1] xs,
                double[::1] ret, double[::1] imt):
    cdef double sre = 0.0, sim = 0.0
    cdef Py_ssize_t i
    cdef long long a, idx
    for i in range(xs.shape[0]):
        a = xs[i]
        idx = (m * ((a * a) % q) + n * a) % q
        sre += ret[idx]
        sim += imt[idx]
    return complex(sre, sim)


def j_brute(long long q, long long a, long long K, i64[::1] inv):
    """#{(k1,k2) in [1,K]^2 coprime to q, k1^{-1}-k2^{-1} == a} by pair loop."""
    if q == 1:
        return K * K
    cdef long long k1, k2, v1, d, total = 0
    a %= q
    if a < 0:
        a += q
    for k1 in range(1, K + 1):
        v1 = inv[k1 % q]
        if v1 == 0:
            continue
        for k2 in range(1, K + 1):
            if inv[k2 % q] == 0:
                continue
            d = (v1 - inv[k2 % q]) % q
            if d < 0:
                d += q
            if d == a:
                total += 1
    return total


def j_fast(long long q, long long a, long long K, i64[::1] inv):
    """Same count as j_brute via the inverse-lookup map, O(K)."""
    if q == 1:
        return K * K
    cdef long long k1, v1, w, k2, total = 0
    a %= q
    if a < 0:
        a += q
    for k1 in range(1, K + 1):
        v1 = inv[k1 % q]
        if v1 == 0:
            continue
        w = (v1 - a) % q
        if w < 0:
            w += q
        k2 = inv[w]
        if 1 <= k2 <= K:
            total += 1
    return total


def j_hist_brute(long long q, long long K, i64[::1] inv):
    out = np.zeros(q, dtype=np.int64)
    cdef i64[::1] hist = out
    if q == 1:
        out[0] = K * K
        return out
    invs_obj = np.empty(K, dtype=np.int64)
    cdef i64[::1] invs = invs_obj
    cdef long long k, v, d, cnt = 0
    cdef Py_ssize_t i, j
    for k in range(1, K + 1):
        v = inv[k % q]
        if v:
            invs[cnt] = v
            cnt += 1
    for i in range(cnt):
        for j in range(cnt):
            d = (invs[i] - invs[j]) % q
            if d < 0:
                d += q
            hist[d] += 1
    return out


def j_hist_fast(long long q, long long K, i64[::1] inv):
    out = np.zeros(q, dtype=np.int64)
    cdef i64[::1] hist = out
    if q == 1:
        out[0] = K * K
        return out
    cdef long long k1, v1, a, w, k2
    for k1 in range(1, K + 1):
        v1 = inv[k1 % q]
        if v1 == 0:
            continue
        for a in range(q):
            w = (v1 - a) % q
            if w < 0:
                w += q
            k2 = inv[w]
            if 1 <= k2 <= K:
                hist[a] += 1
    return out


def diff_hist(i64[::1] elems, long long p):
    """r[d] = #{(x,y) in elems^2 : x - y == d mod p}."""
    out = np.zeros(p, dtype=np.int64)
    cdef i64[::1] hist = out
    cdef Py_ssize_t i, j
    cdef long long d
    for i in range(elems.shape[0]):
        for j in range(elems.shape[0]):
            d = (elems[i] - elems[j]) % p
            if d < 0:
                d += p
            hist[d] += 1
    return out


def sparse_product_pair_count(i64[::1] vals, i64[::1] cnts, long long p):
    """sum_v f(v)^2 with f(v) = sum over (i,j), vals_i*vals_j == v, of cnts_i*cnts_j."""
    f_obj = np.zeros(p, dtype=np.int64)
    cdef i64[::1] f = f_obj
    cdef Py_ssize_t i, j
    cdef long long total = 0, v
    for i in range(vals.shape[0]):
        for j in range(vals.shape[0]):
            f[(vals[i] * vals[j]) % p] += cnts[i] * cnts[j]
    for v in range(p):
        total += f[v] * f[v]
    return total


def interval_product_count(long long a0, long long A, long long b0, long long B,
                           long long p):
    """#{(a1,a2,b1,b2) in A^2 x B^2 : a1 b1 == a2 b2 mod p} for intervals."""
    h_obj = np.zeros(p, dtype=np.int64)
    cdef i64[::1] h = h_obj
    cdef long long i, j, a, b, total = 0, v
    for i in range(1, A + 1):
        a = (a0 + i) % p
        if a < 0:
            a += p
        for j in range(1, B + 1):
            b = (b0 + j) % p
            if b < 0:
                b += p
            h[(a * b) % p] += 1
    for v in range(p):
        total += h[v] * h[v]
    return total


def mixed_product_count(long long a0, long long A, i64[::1] cs, long long p):
    """#{(a1,a2,c1..c4) : a1(c1-c2) == a2(c3-c4) != 0 mod p}, interval x set."""
    g_obj = np.zeros(p, dtype=np.int64)
    cdef i64[::1] g = g_obj
    cdef Py_ssize_t i, j
    cdef long long a, k, d, total = 0, v
    for i in range(cs.shape[0]):
        for j in range(cs.shape[0]):
            d = (cs[i] - cs[j]) % p
            if d < 0:
                d += p
            if d == 0:
                continue
            for k in range(1, A + 1):
                a = (a0 + k) % p
                if a < 0:
                    a += p
                g[(a * d) % p] += 1
    g[0] = 0
    for v in range(p):
        total += g[v] * g[v]
    return total


def tau_sieve(long long X):
    """tau(n) for 0 <= n <= X (index 0 unused, set to 0)."""
    out = np.zeros(X + 1, dtype=np.int32)
    cdef cnp.int32_t[::1] t = out
    cdef long long d, n
    for d in range(1, X + 1):
        for n in range(d, X + 1, d):
            t[n] += 1
    return out


def gcd_table(long long q):
    out = np.empty(q, dtype=np.int64)
    cdef i64[::1] g = out
    cdef long long x, a, b, t
    for x in range(q):
        a = x; b = q
        while b:
            t = a % b; a = b; b = t
        g[x] = a
    return out


def gcd(a, b):
    import math
    return math.gcd(a, b)
