"""Bilinear forms with complete and incomplete Kloosterman sums.

Each form has a direct path (literal double sum, the cross-check oracle)
and an accelerated path that batches one side through a single length-q
transform.  The accelerated identities used:

  sum_m sum_n a_m b_n K_q(m, an)    = sum_{x unit} A(x) B(a x^{-1})
  sum_m sum_k a_m g_k e_q(a m/k)    = sum_k g_k A(a k^{-1})
  sum_m sum_n a_m K_q(m n, a)       = sum_w C(w) P(w),   C = mult. convolution
  sum_m sum_n a_m K_p(m, n)         = sum_{x unit} A(x) g(x^{-1})

where A, B are weight transforms, P(t) = K_q(t, a), and g is the geometric
interval sum.  The right-hand-side evaluators for every bound family live
here as well; implied q^{o(1)} factors are replaced by q^epsilon times a
calibrated constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from kloosterlab import expsums, modarith
from kloosterlab.dft import dft, interval_character_sums_all
from kloosterlab.expsums import SumValue, kloosterman_fast, kloosterman_profile, tables
from kloosterlab.weights import Interval, WeightVector


class OutOfRange(ValueError):
    """A bound was requested outside its stated parameter range."""


class ZeroInSupport(ValueError):
    """An interval contains 0 mod p where an inverse is required."""


def _fold(w: WeightVector, q: int) -> np.ndarray:
    """Weights folded onto [0, q); supports longer than q are rejected
    rather than silently truncated."""
    if w.size > q:
        raise ValueError(f"support of size {w.size} exceeds the modulus {q}")
    arr = np.zeros(q, dtype=np.complex128)
    np.add.at(arr, w.points() % q, w.values)
    return arr


def _weight_transform(w: WeightVector, q: int) -> np.ndarray:
    """A[x] = sum_m w_m e_q(m x) for all x in [0, q)."""
    return dft(_fold(w, q), 1)


def type2_sum(alpha: WeightVector, beta: WeightVector, a: int,
              q: "int | modarith.FactoredModulus", path: str = "dft") -> SumValue:
    """sum_m sum_n alpha_m beta_n K_q(m, a n)."""
    qi = modarith.as_modulus(q).q
    if path == "direct":
        total = 0j
        for m, am in zip(alpha.points().tolist(), alpha.values):
            for n, bn in zip(beta.points().tolist(), beta.values):
                total += am * bn * kloosterman_fast(m, a * n, qi).value
        return SumValue(total, "direct", alpha.size * beta.size)
    if path != "dft":
        raise ValueError(f"unknown path {path!r}")
    t = tables(qi)
    A = _weight_transform(alpha, qi)
    B = _weight_transform(beta, qi)
    idx = (a % qi) * t.unit_invs % qi
    val = complex((A[t.units] * B[idx]).sum())
    return SumValue(val, "dft", alpha.size * beta.size)


def type1_sum(alpha: WeightVector, J: Interval, a: int,
              q: "int | modarith.FactoredModulus", path: str = "dft") -> SumValue:
    """Type I specialization: beta is the indicator of the interval J."""
    qi = modarith.as_modulus(q).q
    if path == "direct":
        return type2_sum(alpha, WeightVector.ones(J), a, qi, "direct")
    if path != "dft":
        raise ValueError(f"unknown path {path!r}")
    if J.length > qi:
        raise ValueError(f"interval of length {J.length} exceeds the modulus {qi}")
    t = tables(qi)
    A = _weight_transform(alpha, qi)
    gv = interval_character_sums_all(J, qi)
    idx = (a % qi) * t.unit_invs % qi
    val = complex((A[t.units] * gv[idx]).sum())
    return SumValue(val, "dft", alpha.size * J.length)


@lru_cache(maxsize=16)
def _dlog_table(p: int) -> tuple[int, np.ndarray]:
    """(g, dlog) for the cyclic group mod prime p: dlog[g^s mod p] = s."""
    fac = modarith.factorize(p - 1)
    prime_factors = [f for f, _ in fac.factors]
    g = 2
    while any(pow(g, (p - 1) // f, p) == 1 for f in prime_factors):
        g += 1
    dlog = np.zeros(p, dtype=np.int64)
    x = 1
    for s in range(p - 1):
        dlog[x] = s
        x = x * g % p
    return g, dlog


def product_type1_sum(alpha: WeightVector, J: Interval, a: int,
                      q: "int | modarith.FactoredModulus",
                      path: str = "auto") -> SumValue:
    """sum_m sum_n alpha_m K_q(m n, a), the product-argument variant."""
    qi = modarith.as_modulus(q).q
    ms = alpha.points()
    ns = J.values()
    if path == "auto":
        prime = modarith.as_modulus(qi).is_prime
        unit_supports = not (np.any(ms % qi == 0) or np.any(ns % qi == 0))
        path = "dlog" if prime and unit_supports and alpha.size * J.length > 1 << 22 \
            else "profile"
    if path == "direct":
        total = 0j
        for m, am in zip(ms.tolist(), alpha.values):
            for n in ns.tolist():
                total += am * kloosterman_fast(m * n, a, qi).value
        return SumValue(total, "direct", alpha.size * J.length)
    if J.length > qi:
        raise ValueError(f"interval of length {J.length} exceeds the modulus {qi}")
    P = kloosterman_profile(a, qi)
    if path == "profile":
        total = 0j
        mres = ms % qi
        if J.length == qi:
            # full inner period: m*n covers each multiple of g = gcd(m, q)
            # exactly g times, so the inner sum depends on m only through g
            gs = np.gcd(mres, qi)
            for g in np.unique(gs).tolist():
                total += g * complex(P[::g].sum()) * alpha.values[gs == g].sum()
            return SumValue(complex(total), "profile", alpha.size * J.length)
        nres = ns % qi
        step = max(1, (1 << 22) // max(1, len(nres)))
        for i in range(0, len(mres), step):
            idx = mres[i:i + step, None] * nres[None, :] % qi
            total += np.dot(alpha.values[i:i + step], P[idx].sum(axis=1))
        return SumValue(complex(total), "profile", alpha.size * J.length)
    if path != "dlog":
        raise ValueError(f"unknown path {path!r}")
    p = qi
    if not modarith.as_modulus(p).is_prime:
        raise ValueError("dlog path needs a prime modulus")
    if np.any(ms % p == 0) or np.any(ns % p == 0):
        raise ZeroInSupport("dlog path needs supports inside the units")
    _, dlog = _dlog_table(p)
    u = np.zeros(p - 1, dtype=np.complex128)
    v = np.zeros(p - 1, dtype=np.complex128)
    np.add.at(u, dlog[ms % p], alpha.values)
    np.add.at(v, dlog[ns % p], 1.0)
    conv = np.fft.ifft(np.fft.fft(u) * np.fft.fft(v))
    units = np.nonzero(np.arange(p))[0]
    val = complex((conv[dlog[units]] * P[units]).sum())
    return SumValue(val, "dlog", alpha.size * J.length)


def incomplete_sum(alpha: WeightVector, gamma: WeightVector, a: int,
                   q: "int | modarith.FactoredModulus", path: str = "dft") -> SumValue:
    """sum_m sum_k alpha_m gamma_k e_q(a m k^{-1}) with gamma supported on
    an explicit set of units of Z_q (the restricted-k bilinear form)."""
    qi = modarith.as_modulus(q).q
    t = tables(qi)
    ks = gamma.points() % qi
    if qi > 1 and np.any(t.inv[ks] == 0):
        raise ValueError("gamma support must consist of units of q")
    kinv = t.inv[ks] if qi > 1 else np.zeros(len(ks), dtype=np.int64)
    if path == "direct":
        total = 0j
        ms = alpha.points()
        for k_i, gk in zip(kinv.tolist(), gamma.values):
            idx = (a % qi) * (ms % qi) % qi * k_i % qi
            total += gk * (alpha.values * (t.re[idx] + 1j * t.im[idx])).sum()
        return SumValue(complex(total), "direct", alpha.size * gamma.size)
    if path != "dft":
        raise ValueError(f"unknown path {path!r}")
    A = _weight_transform(alpha, qi)
    idx = (a % qi) * kinv % qi
    val = complex((gamma.values * A[idx]).sum())
    return SumValue(val, "dft", alpha.size * gamma.size)


def set_incomplete_sum(alpha: WeightVector, gamma: WeightVector, a: int,
                       p: int, path: str = "dft") -> SumValue:
    """sum over m in a set M and k in an interval K of
    alpha_m gamma_k e_p(a m k^{-1}) over the prime field F_p."""
    K = gamma.support
    if not isinstance(K, Interval):
        raise ValueError("gamma must be supported on an interval")
    ks = K.residues(p)
    if np.any(ks == 0):
        raise ZeroInSupport("interval for k contains 0 mod p")
    gamma_units = WeightVector(ks, gamma.values)
    return incomplete_sum(alpha, gamma_units, a, p, path)


def set_type1_sum(alpha: WeightVector, J: Interval, p: int,
                  path: str = "dft") -> SumValue:
    """sum over m in a set M and n in the interval J of alpha_m K_p(m, n)."""
    if path == "direct":
        total = 0j
        for m, am in zip(alpha.points().tolist(), alpha.values):
            for n in J.values().tolist():
                total += am * kloosterman_fast(m, n, p).value
        return SumValue(total, "direct", alpha.size * J.length)
    if path != "dft":
        raise ValueError(f"unknown path {path!r}")
    t = tables(p)
    A = _weight_transform(alpha, p)
    gv = interval_character_sums_all(J, p)
    val = complex((A[t.units] * gv[t.unit_invs]).sum())
    return SumValue(val, "dft", alpha.size * J.length)


# ---------------------------------------------------------------------------
# bound right-hand sides


def delta1(M: float, N: float, q: float, d: float, variant: str) -> float:
    """The three interchangeable envelope factors of the complete Type I
    bound family; d = gcd(a, q)."""
    if variant == "a":
        return (M**-0.25 * q**0.5 * d**-0.25 / N + q**0.5 / (N * M**0.5)
                + N**-0.5)
    if variant == "b":
        return M**-0.5 * (N**-0.75 * q**0.5 + d**0.5) + N**-0.5
    if variant == "c":
        return M**-0.5 * (q**0.5 / N + (q * d) ** 0.25) + N**-0.5
    raise ValueError(f"unknown variant {variant!r}")


def delta2(M: float, K: float, q: float, r: float, variant: str) -> float:
    """The three envelope factors of the incomplete Type II bound family."""
    if variant == "a":
        return (M * q / r) ** -0.25 + M**-0.5 + (K * q / r) ** -0.5
    if variant == "b":
        return M**-0.5 * (1 + (K / r) ** -0.25 + r**0.5 / K) + (K * q / r) ** -0.5
    if variant == "c":
        return M**-0.5 * (1 + r**0.25 / K**0.5 + r**0.75 / K) + (K * q / r) ** -0.5
    raise ValueError(f"unknown variant {variant!r}")


@dataclass(frozen=True)
class BoundSpec:
    """A bound family tag plus the epsilon standing in for o(1) exponents
    and the calibrated leading constant."""

    theorem: str
    epsilon: float
    constant: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.epsilon <= 0.25:
            raise ValueError(f"epsilon {self.epsilon} outside [0, 0.25]")
        if self.constant <= 0:
            raise ValueError("constant must be positive")


def _check(cond: bool, name: str) -> None:
    if not cond:
        raise OutOfRange(name)


def bound_rhs(spec: BoundSpec, params: dict) -> float:
    """Numeric right-hand side of the tagged bound at the given parameters.

    Raises OutOfRange naming the violated precondition.  Integer power
    comparisons (K^r >= p and friends) keep the range checks exact.
    """
    eps, C = spec.epsilon, spec.constant
    tag = spec.theorem
    g = params.get
    if tag.startswith("type1-") and tag != "type1-product":
        variant = tag[-1]
        q, M, N, d = g("q"), g("M"), g("N"), g("d", 1)
        return (C * g("norm2_alpha") * math.sqrt(M) * N * q ** (0.5 + eps)
                * delta1(M, N, q, d, variant))
    if tag == "type1-product":
        q, M, N = g("q"), g("M"), g("N")
        return (C * g("norm2_alpha") * math.sqrt(M) * N * q ** (0.5 + eps)
                * delta1(M, N, q, 1, "a"))
    if tag.startswith("type2-incomplete-"):
        variant = tag[-1]
        q, r, M, K = g("q"), g("r"), g("M"), g("K")
        _check(q % r == 0, "r | q")
        _check(K <= r, "K <= r")
        return (C * g("norm2_alpha") * g("norminf_gamma") * math.sqrt(M) * K
                * q ** (1 + eps) / r * delta2(M, K, q, r, variant))
    if tag == "set-incomplete":
        p, M, K, r = g("p"), g("M"), g("K"), g("r")
        _check(K**r >= p, "K >= p^(1/r)")
        inner = 1.0 / M + p ** (1 + 1 / r) / (M * K * K)
        return (C * g("norminf_alpha") * g("norminf_gamma") * M * K * p**eps
                * inner ** (7 / (24 * r)))
    if tag == "set-incomplete-smallm":
        p, M, K, r = g("p"), g("M"), g("K"), g("r")
        _check(K**r >= p, "K >= p^(1/r)")
        _check(M * M <= p, "M <= p^(1/2)")
        inner = M ** (-2.0 * r) + 1.0 / K + p ** (1 + 1 / r) / (M ** (10 / 13) * K * K)
        return (C * g("norminf_alpha") * g("norminf_gamma") * M * K * p**eps
                * inner ** (1 / (4 * r)))
    if tag == "set-type1":
        p, M, N, r = g("p"), g("M"), g("N"), g("r")
        _check(N**r <= p ** (r - 1), "N <= p^(1-1/r)")
        inner = (p**0.5 / (M ** (7 / (24 * r)) * N)
                 + p ** (0.5 - 7 * (r - 1) / (24 * r * r))
                 / (M ** (7 / (24 * r)) * N ** (1 - 7 / (12 * r))))
        return C * g("norminf_alpha") * M * N * p ** (0.5 + eps) * inner
    if tag == "set-type1-smallm":
        p, M, N, r = g("p"), g("M"), g("N"), g("r")
        _check(N**r <= p ** (r - 1), "N <= p^(1-1/r)")
        _check(M * M <= p, "M <= p^(1/2)")
        inner = (p**0.5 / (math.sqrt(M) * N)
                 + p ** (0.5 - 1 / (4 * r)) / N ** (1 - 1 / (4 * r))
                 + p ** (0.5 - (r - 1) / (4 * r * r))
                 / (M ** (13 / (40 * r)) * N ** (1 - 1 / (2 * r))))
        return C * g("norminf_alpha") * M * N * p ** (0.5 + eps) * inner
    if tag == "trivial":
        q, M, N = g("q"), g("M"), g("N")
        return (C * g("norminf_alpha") * g("norminf_beta", 1.0) * M * N
                * q ** (0.5 + eps))
    if tag == "polya-vinogradov":
        q, M, N = g("q"), g("M"), g("N")
        inner = q**0.25 / math.sqrt(M) + q**-0.25 + N**-0.5
        return (C * g("norminf_alpha") * g("norminf_beta", 1.0) * M * N
                * q ** (0.5 + eps) * inner)
    raise ValueError(f"unknown bound tag {tag!r}")
