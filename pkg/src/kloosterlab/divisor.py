"""Divisor sums in arithmetic progressions.

Exact sums over a sieve of divisor counts, the heuristic main term, the
pointwise and family error terms, and the calibrated family bound.
"""

from __future__ import annotations

import math

import numpy as np

from kloosterlab._accel import kernels
from kloosterlab.counting import TooLarge
from kloosterlab.modarith import FactoredModulus, NonCoprime, as_modulus, mobius
from kloosterlab.weights import Interval

SIEVE_CAP = 10**8

EULER_GAMMA = 0.57721566490153286060651209008240243


def tau_sieve(X: int) -> np.ndarray:
    """Divisor counts tau(n) for n <= X (index 0 unused)."""
    if X > SIEVE_CAP:
        raise TooLarge(f"X={X} above the sieve cap {SIEVE_CAP}")
    if X < 1:
        raise ValueError("X must be positive")
    return kernels.tau_sieve(X)


class DivisorSieve:
    """A sieve of divisor counts up to X with progression-sum queries."""

    def __init__(self, X: int):
        self.X = X
        self.tau = tau_sieve(X)

    def total(self) -> int:
        return int(self.tau.sum())

    def class_sum(self, a: int, q: int) -> int:
        """Sum of tau(n) over n <= X with n == a (mod q); any class a."""
        a %= q
        start = a if a >= 1 else q
        if start > self.X:
            return 0
        return int(self.tau[start::q].sum(dtype=np.int64))


def divisor_sum_ap(sieve: DivisorSieve, a: int, q: "int | FactoredModulus") -> int:
    """S(X; a, q): exact divisor sum over the progression, gcd(a, q) = 1."""
    qi = as_modulus(q).q
    if math.gcd(a, qi) != 1:
        raise NonCoprime(f"gcd({a}, {qi}) > 1")
    return sieve.class_sum(a, qi)


def main_term(X: int, q: "int | FactoredModulus") -> float:
    """Heuristic main term: (phi(q)/q^2) X (log X + 2 gamma - 1)
    - (2/q) X sum_{d|q} mu(d) log(d) / d; independent of the class a."""
    fq = as_modulus(q)
    qi = fq.q
    lead = fq.phi / qi**2 * X * (math.log(X) + 2 * EULER_GAMMA - 1)
    tail = 0.0
    for d in fq.divisors():
        mu = mobius(d)
        if mu and d > 1:
            tail += mu * math.log(d) / d
    return lead - 2.0 * X * tail / qi


def error_term(sieve: DivisorSieve, a: int, q: "int | FactoredModulus") -> float:
    """R(X; a, q) = S(X; a, q) - main term."""
    return divisor_sum_ap(sieve, a, q) - main_term(sieve.X, q)


def family_residues(I: Interval, q: int) -> np.ndarray:
    """The residue set I intersected with the units of Z_q."""
    res = np.unique(I.values() % q)
    keep = np.gcd(res, q) == 1
    return res[keep]


def family_error(sieve: DivisorSieve, I: Interval, q: "int | FactoredModulus") -> float:
    """Sum of R(X; a, q) over a in I meeting the units of Z_q."""
    qi = as_modulus(q).q
    res = family_residues(I, qi)
    if len(res) == 0:
        return 0.0
    total = sum(sieve.class_sum(int(a), qi) for a in res)
    return float(total - len(res) * main_term(sieve.X, qi))


def family_bound_rhs(X: int, A: int, q: int, epsilon: float, constant: float) -> float:
    """Calibrated family bound (E + A^{2/3} X^{1/3}) X^epsilon with
    E = min(q^{1/2} X^{1/4} + X^{1/2},
            X^{1/2} (A^{1/4} + A q^{-1/2}),
            X^{1/2} (1 + A q^{-1/4})).

    Raises OutOfRange-style errors naming the violated precondition.
    """
    from kloosterlab.bilinear import OutOfRange

    if X < q:
        raise OutOfRange("X >= q")
    if 8 * q**3 >= A * X * X:
        raise OutOfRange("q^3 < A X^2 / 8")
    e = min(math.sqrt(q) * X**0.25 + math.sqrt(X),
            math.sqrt(X) * (A**0.25 + A / math.sqrt(q)),
            math.sqrt(X) * (1.0 + A / q**0.25))
    return constant * (e + A ** (2.0 / 3.0) * X ** (1.0 / 3.0)) * X**epsilon


def pointwise_bound_rhs(X: int, q: int, constant: float) -> float:
    """Calibrated pointwise regime bound C X^{0.99} / q, asserted for
    q <= X^{2/3 - 0.05}."""
    return constant * X**0.99 / q


def pointwise_regime(X: int, q: int) -> bool:
    return q <= X ** (2.0 / 3.0 - 0.05)
