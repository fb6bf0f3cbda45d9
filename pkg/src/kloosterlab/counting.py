"""Exact counting functions: reciprocal differences and additive counts.

The central object is the count of pairs (k1, k2) in [1, K]^2, both coprime
to q, with k1^{-1} - k2^{-1} == a (mod q), together with its restriction to
units selected by a divisor condition, and the additive-combinatorial counts
over F_p (additive energy, equal products of differences, multiplicative
congruences on intervals, and the mixed interval-times-set count).

Both k1 and k2 are restricted to residues coprime to q: the inverse is
undefined otherwise, and the restricted variant is explicitly a count over
pairs of units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from kloosterlab._accel import kernels
from kloosterlab.modarith import FactoredModulus, as_modulus, mod_inv
from kloosterlab.weights import Interval


class TooLarge(ValueError):
    """Input exceeds the documented desk-scale cap."""


DP_SET_CAP = 200


@dataclass(frozen=True)
class CountQuery:
    """Parameters of one reciprocal-difference count."""

    q: FactoredModulus
    a: int
    K: int
    r: int | None = None
    c: int | None = None

    def __post_init__(self) -> None:
        if not 1 <= self.K <= self.q.q:
            raise ValueError(f"need 1 <= K <= q, got K={self.K}, q={self.q.q}")
        if (self.r is None) != (self.c is None):
            raise ValueError("r and c must be given together")
        if self.r is not None:
            if self.q.q % self.r:
                raise ValueError(f"r={self.r} does not divide q={self.q.q}")
            if math.gcd(self.c, self.r) != 1:
                raise ValueError(f"gcd(c={self.c}, r={self.r}) > 1")
            if self.K > self.r:
                raise ValueError(f"need K <= r, got K={self.K}, r={self.r}")

    @classmethod
    def of(cls, q: "int | FactoredModulus", a: int, K: int,
           r: int | None = None, c: int | None = None) -> "CountQuery":
        return cls(as_modulus(q), a, K, r, c)


def _inv_table(q: int) -> np.ndarray:
    from kloosterlab.expsums import tables
    return tables(q).inv


def j_count_brute(qr: CountQuery) -> int:
    """Pair-loop evaluation of the reciprocal-difference count; oracle."""
    q = qr.q.q
    return int(kernels.j_brute(q, qr.a % q if q > 1 else 0, qr.K, _inv_table(q)))


def j_count_fast(qr: CountQuery) -> int:
    """Lookup evaluation: for each k1 find the unique candidate k2 with
    k2^{-1} == k1^{-1} - a; exact, O(K) after the inverse table."""
    q = qr.q.q
    return int(kernels.j_fast(q, qr.a % q if q > 1 else 0, qr.K, _inv_table(q)))


def j_hist_brute(q: "int | FactoredModulus", K: int) -> np.ndarray:
    """The counts for every a at once, by the pair loop."""
    qi = as_modulus(q).q
    return kernels.j_hist_brute(qi, K, _inv_table(qi))


def j_hist_fast(q: "int | FactoredModulus", K: int) -> np.ndarray:
    """The counts for every a at once, by the lookup route."""
    qi = as_modulus(q).q
    return kernels.j_hist_fast(qi, K, _inv_table(qi))


def admissible_units(q: int, r: int, c: int, K: int) -> np.ndarray:
    """Units k of Z_q whose representative of c*k in [1, r] is at most K."""
    inv = _inv_table(q)
    ks = np.nonzero(inv)[0].astype(np.int64) if q > 1 else np.zeros(1, np.int64)
    rep = (c * ks - 1) % r + 1
    return ks[rep <= K]


def j_count_restricted(qr: CountQuery) -> int:
    """Count over pairs of units of Z_q with the reciprocal-difference
    condition and both c*k_i landing in [1, K] mod r."""
    if qr.r is None:
        raise ValueError("restricted count needs (r, c)")
    q = qr.q.q
    inv = _inv_table(q)
    ks = admissible_units(q, qr.r, qr.c, qr.K)
    if len(ks) == 0:
        return 0
    invs = inv[ks]
    present = np.zeros(q, dtype=np.int64)
    np.add.at(present, invs, 1)
    want = (invs - qr.a) % q
    return int(present[want].sum())


def bound_j_hb(qr: CountQuery) -> float:
    """Structured pointwise envelope K^{3/2}/q^{1/2} + K^2 gcd(a,q)/q + 1;
    strongest for small K."""
    q, K = qr.q.q, qr.K
    g = math.gcd(qr.a, q)
    return K**1.5 / math.sqrt(q) + K * K * g / q + 1.0


def bound_j_new(qr: CountQuery) -> float:
    """Structured pointwise envelope K^2/q + K gcd(a,q)^{1/2}/q^{1/2} + q^{1/2};
    overtakes bound_j_hb once K > q^{2/3}."""
    q, K = qr.q.q, qr.K
    g = math.gcd(qr.a, q)
    return K * K / q + K * math.sqrt(g) / math.sqrt(q) + math.sqrt(q)


def bound_j_avg(q: "int | FactoredModulus", a: int, N: int, K: int) -> float:
    """Structured envelope K^2 N^{1/2} / q^{1/2} + K for the average of the
    counts at a*n over 1 <= n <= N; needs gcd(a, q) = 1."""
    qi = as_modulus(q).q
    if math.gcd(a, qi) != 1:
        raise ValueError("averaged bound needs gcd(a, q) = 1")
    if not (1 <= N <= qi and 1 <= K <= qi):
        raise ValueError("need 1 <= N, K <= q")
    return K * K * math.sqrt(N) / math.sqrt(qi) + K


def j_avg(q: "int | FactoredModulus", a: int, N: int, K: int) -> int:
    """sum over 1 <= n <= N of the count at a*n (exact)."""
    qi = as_modulus(q).q
    hist = j_hist_fast(qi, K)
    idx = (a * np.arange(1, N + 1, dtype=np.int64)) % qi
    return int(hist[idx].sum())


def additive_energy(A: np.ndarray, B: np.ndarray, p: int) -> int:
    """#{(a1,a2,b1,b2): a1-a2 == b1-b2 in F_p} via difference histograms."""
    A = np.asarray(A, dtype=np.int64) % p
    B = np.asarray(B, dtype=np.int64) % p
    ra = kernels.diff_hist(A, p)
    rb = ra if A is B or (len(A) == len(B) and np.array_equal(A, B)) \
        else kernels.diff_hist(B, p)
    return int(np.dot(ra, rb))


def dp_count(A: np.ndarray, p: int) -> int:
    """#{(a1..a8) in A^8: (a1-a2)(a3-a4) == (a5-a6)(a7-a8) in F_p}, exact.

    Histogram of products of difference pairs; O(|A|^4) time, O(p) memory.
    """
    A = np.asarray(A, dtype=np.int64) % p
    if len(A) > DP_SET_CAP:
        raise TooLarge(f"set size {len(A)} above the cap {DP_SET_CAP}")
    r = kernels.diff_hist(A, p)
    vals = np.nonzero(r)[0].astype(np.int64)
    cnts = r[vals]
    return int(kernels.sparse_product_pair_count(vals, cnts, p))


def dp_bound_rhs(size: int) -> float:
    """Structured envelope size^{84/13} for dp_count when size <= p^{1/2}."""
    return float(size) ** (84.0 / 13.0)


def product_congruence_count(A: Interval, B: Interval, p: int) -> int:
    """#{(a1,a2,b1,b2) in A^2 x B^2 : a1 b1 == a2 b2 in F_p} for intervals
    inside F_p^*."""
    for iv in (A, B):
        res = iv.residues(p)
        if np.any(res == 0):
            raise ValueError("interval must avoid 0 mod p")
    return int(kernels.interval_product_count(A.offset, A.length,
                                              B.offset, B.length, p))


def product_bound_rhs(A: int, B: int, p: int) -> float:
    """Structured envelope (AB/p + 1) * AB for the product-congruence count."""
    return (A * B / p + 1.0) * A * B


def mixed_count_N(A: Interval, C: np.ndarray, p: int) -> int:
    """#{(a1,a2,c1..c4): a1(c1-c2) == a2(c3-c4) != 0 in F_p} for an interval
    A inside F_p^* and an arbitrary set C."""
    res = A.residues(p)
    if np.any(res == 0):
        raise ValueError("interval must avoid 0 mod p")
    C = np.asarray(C, dtype=np.int64) % p
    return int(kernels.mixed_product_count(A.offset, A.length, C, p))


def mixed_main_term(A: int, C: int, p: int) -> float:
    """Expected main term A^2 C^4 / p of the mixed count."""
    return A * A * float(C) ** 4 / p


def mixed_error_rhs(A: int, C: int) -> float:
    """Structured envelope A * C^{42/13} for the mixed-count error term."""
    return A * float(C) ** (42.0 / 13.0)
