"""Complete exponential sums modulo arbitrary positive integers.

Kloosterman, Ramanujan, Salie and quadratic Gauss sums, plus the normalized
Fourier transform of products of two Kloosterman sums.  Every sum has a
brute-force path (the reference oracle, direct summation over the residue
ring) and, where structure allows, a fast path built from twisted
multiplicativity across coprime factors and the closed-form evaluation
modulo odd prime powers.

Fast-path ladder for K_q(m, n) with q = p^j, p odd, j >= 2:

  1. strip d = gcd(m, n, q):  K_q(m, n) = d * K_{q/d}(m/d, n/d);
  2. one argument divisible by q: the sum degenerates to a Ramanujan sum;
  3. p divides exactly one argument: the sum vanishes;
  4. otherwise K_q(m, n) = (ln/q) * sqrt(q) * Re{eps_q * e_q(2ln)} where
     l solves m = l^2 n (mod q), (./q) is the Jacobi symbol, and
     eps_q = 1 or i according to q = 1 or 3 (mod 4); no solution l means
     the sum vanishes.

Primes (j = 1) and powers of two have no closed form here and fall back to
direct summation over the 2^{j-1} odd residues, which stays cheap at desk
scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from kloosterlab._accel import kernels
from kloosterlab import modarith
from kloosterlab.dft import dft
from kloosterlab.modarith import (
    EvenModulus,
    FactoredModulus,
    as_modulus,
    jacobi,
    sqrt_mod_prime_power,
)

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class SumValue:
    """A complex sum value, the evaluation method, and the number of
    elementary summands the value stands for (drives error budgets)."""

    value: complex
    method: str
    terms: int

    @property
    def real(self) -> float:
        return self.value.real

    def __abs__(self) -> float:
        return abs(self.value)


class _Tables:
    """Per-modulus lookup tables shared by all kernel calls."""

    def __init__(self, q: int):
        self.q = q
        self.fq = as_modulus(q)
        self.inv = kernels.inverse_table(q)
        if q == 1:
            self.units = np.zeros(1, dtype=np.int64)
            self.unit_invs = np.zeros(1, dtype=np.int64)
        else:
            self.units = np.nonzero(self.inv)[0].astype(np.int64)
            self.unit_invs = self.inv[self.units]
        angles = TWO_PI * np.arange(q, dtype=np.float64) / q
        self.re = np.cos(angles)
        self.im = np.sin(angles)
        self._jac: np.ndarray | None = None

    @property
    def jac(self) -> np.ndarray:
        """Jacobi symbol of each unit (odd q only), aligned with units."""
        if self._jac is None:
            q = self.q
            self._jac = np.array([jacobi(int(x), q) for x in self.units],
                                 dtype=np.int64)
        return self._jac


@lru_cache(maxsize=160)
def tables(q: int) -> _Tables:
    return _Tables(q)


def _q_of(q: "int | FactoredModulus") -> tuple[int, FactoredModulus]:
    fq = as_modulus(q)
    return fq.q, fq


def kloosterman_brute(m: int, n: int, q: "int | FactoredModulus") -> SumValue:
    """K_q(m, n) = sum over units x of e_q(m*x + n*x^{-1}), direct summation.

    Reference oracle for every fast path.
    """
    qi, fq = _q_of(q)
    t = tables(qi)
    if qi == 1:
        return SumValue(1 + 0j, "brute", 1)
    val = kernels.unit_sum(m % qi, n % qi, qi, t.units, t.unit_invs, t.re, t.im)
    return SumValue(val, "brute", fq.phi)


def ramanujan(m: int, q: "int | FactoredModulus") -> int:
    """Ramanujan sum c_q(m) = sum_{d | gcd(m,q)} d * mu(q/d), exact."""
    qi, fq = _q_of(q)
    g = math.gcd(m % qi if qi > 1 else 0, qi)
    total = 0
    for d in fq.divisors():
        if g % d == 0:
            total += d * modarith.mobius(qi // d)
    return total


def _odd_prime_power_closed_form(n: int, q: int, l: int) -> float:
    """Closed-form value 2 * (ln/q) * sqrt(q) * Re{eps_q * e_q(2ln)} for
    q = p^j, p odd, j >= 2, where l solves m = l^2 n (mod q).

    The leading 2 accounts for the two stationary points +-l of the phase.
    Exposed separately so the root-choice invariance (l vs q - l) is
    directly testable.
    """
    jac = jacobi((l * n) % q, q)
    angle = TWO_PI * ((2 * l * n) % q) / q
    if q % 4 == 1:
        re_part = math.cos(angle)
    else:
        re_part = -math.sin(angle)
    return 2.0 * jac * math.sqrt(q) * re_part


def _k_prime_power(m: int, n: int, p: int, j: int) -> tuple[complex, str]:
    """K_{p^j}(m, n) by the fastest applicable route; returns (value, tag)."""
    q = p**j
    if j == 1 or p == 2:
        t = tables(q)
        val = kernels.unit_sum(m % q, n % q, q, t.units, t.unit_invs, t.re, t.im)
        return val, "brute"
    m %= q
    n %= q
    d = math.gcd(math.gcd(m, n), q)
    if d == q:
        return complex((p - 1) * p ** (j - 1)), "closed-form"
    if d > 1:
        k = 0
        dd = d
        while dd % p == 0:
            dd //= p
            k += 1
        sub, _ = _k_prime_power(m // d, n // d, p, j - k)
        return d * sub, "reduced"
    # gcd(m, n, q) = 1 from here on
    if m == 0:
        return complex(ramanujan(n, q)), "closed-form"
    if n == 0:
        return complex(ramanujan(m, q)), "closed-form"
    if m % p == 0 or n % p == 0:
        # exactly one argument divisible by p: the sum vanishes
        return 0j, "closed-form"
    s = m * modarith.mod_inv(n, q) % q
    l = sqrt_mod_prime_power(s, p, j)
    if l is None:
        return 0j, "closed-form"
    return complex(_odd_prime_power_closed_form(n, q, l)), "closed-form"


def kloosterman_fast(m: int, n: int, q: "int | FactoredModulus") -> SumValue:
    """K_q(m, n) via coprime splitting and prime-power closed forms.

    Agrees with kloosterman_brute within 1e-6 * q.
    """
    qi, fq = _q_of(q)
    if qi == 1:
        return SumValue(1 + 0j, "closed-form", 1)
    value = 1 + 0j
    tags = set()
    for p, j in fq.factors:
        f = p**j
        c = (qi // f) % f
        if c == 1 or f == 1:
            mm, nn = m % f, n % f
        else:
            cinv = modarith.mod_inv(c, f)
            mm, nn = m * cinv % f, n * cinv % f
        sub, tag = _k_prime_power(mm, nn, p, j)
        tags.add(tag)
        value *= sub
    if len(fq.factors) > 1:
        method = "crt"
    else:
        method = tags.pop()
    return SumValue(value, method, fq.phi)


def kloosterman_profile(a: int, q: "int | FactoredModulus") -> np.ndarray:
    """K_q(t, a) for every t in [0, q) at once.

    Direct summation reordered as a single length-q transform of
    x -> e_q(a * x^{-1}) supported on the units.
    """
    qi, _ = _q_of(q)
    if qi == 1:
        return np.array([1 + 0j])
    t = tables(qi)
    f = np.zeros(qi, dtype=np.complex128)
    idx = (a % qi) * t.unit_invs % qi
    f[t.units] = t.re[idx] + 1j * t.im[idx]
    return dft(f, 1)


def salie(m: int, n: int, q: "int | FactoredModulus") -> SumValue:
    """Jacobi-twisted Kloosterman sum over units, odd q, direct summation."""
    qi, fq = _q_of(q)
    if qi % 2 == 0:
        raise EvenModulus(f"Salie sums need odd q, got {qi}")
    if qi == 1:
        return SumValue(1 + 0j, "brute", 1)
    t = tables(qi)
    val = kernels.signed_unit_sum(m % qi, n % qi, qi, t.units, t.unit_invs,
                                  t.jac, t.re, t.im)
    return SumValue(val, "brute", fq.phi)


def gauss(m: int, n: int, q: "int | FactoredModulus") -> SumValue:
    """Quadratic Gauss sum G(m, n; q) = sum over all a of e_q(m*a^2 + n*a)."""
    qi, _ = _q_of(q)
    t = tables(qi)
    val = kernels.gauss_full(m % qi, n % qi, qi, t.re, t.im)
    return SumValue(val, "brute", qi)


def gauss_star(m: int, n: int, q: "int | FactoredModulus") -> SumValue:
    """Unit-restricted quadratic Gauss sum over a in Z_q^*."""
    qi, fq = _q_of(q)
    if qi == 1:
        return SumValue(1 + 0j, "brute", 1)
    t = tables(qi)
    val = kernels.gauss_units(m % qi, n % qi, qi, t.units, t.re, t.im)
    return SumValue(val, "brute", fq.phi)


def gauss_star_mobius(m: int, n: int, q: "int | FactoredModulus") -> complex:
    """G*(m, n; q) through the Moebius expansion over divisors of q;
    an independent route used to cross-check gauss_star."""
    qi, fq = _q_of(q)
    total = 0j
    for d in fq.divisors():
        mu = modarith.mobius(d)
        if mu:
            total += mu * gauss(m * d, n, qi // d).value
    return total


def t_transform_brute(x: int, y: int, z: int, q: "int | FactoredModulus") -> SumValue:
    """(1/q) * sum over t in Z_q of K_q(x,t) * K_q(y,t) * e_q(-z*t).

    The two inner Kloosterman profiles are direct summations (reordered as
    length-q transforms); this is the oracle for t_transform_fast.
    """
    qi, fq = _q_of(q)
    px = kloosterman_profile(x, qi)
    py = px if (y - x) % qi == 0 else kloosterman_profile(y, qi)
    t = tables(qi)
    idx = (-z) % qi * np.arange(qi, dtype=np.int64) % qi
    w = t.re[idx] + 1j * t.im[idx]
    val = complex((px * py * w).sum() / qi)
    return SumValue(val, "brute", qi * (2 * fq.phi + 1))


def _t_prime(x: int, y: int, z: int, p: int) -> complex:
    """T(x, y, z; p) for prime p: a Ramanujan sum when p | z, otherwise
    K_p(x/z, y/z) * e_p((x+y)/z) - 1."""
    if z % p == 0:
        return complex(ramanujan(x - y, p))
    zinv = modarith.mod_inv(z, p)
    kv = kloosterman_fast(x * zinv % p, y * zinv % p, p).value
    phase = TWO_PI * ((x + y) * zinv % p) / p
    return kv * complex(math.cos(phase), math.sin(phase)) - 1


def t_transform_fast(x: int, y: int, z: int, q: "int | FactoredModulus") -> SumValue:
    """T(x, y, z; q) via coprime splitting; prime factors use the exact
    one-line identity, prime-power factors fall back to the brute sum.

    Agrees with t_transform_brute within 1e-6 * q^{3/2}.
    """
    qi, fq = _q_of(q)
    if qi == 1:
        return SumValue(t_transform_brute(x, y, z, 1).value, "closed-form", 1)
    value = 1 + 0j
    used_brute = False
    for p, j in fq.factors:
        f = p**j
        c = (qi // f) % f
        if c == 1 or f == 1:
            xx, yy = x % f, y % f
        else:
            cinv = modarith.mod_inv(c, f)
            xx, yy = x * cinv % f, y * cinv % f
        if j == 1:
            value *= _t_prime(xx, yy, z, p)
        else:
            value *= t_transform_brute(xx, yy, z, f).value
            used_brute = True
    if len(fq.factors) > 1:
        method = "crt"
    elif used_brute:
        method = "brute"
    else:
        method = "closed-form"
    return SumValue(value, method, qi)


def weil_bound_rhs(m: int, n: int, q: "int | FactoredModulus") -> float:
    """Explicit-constant square-root bound d(q) * gcd(m,n,q)^{1/2} * q^{1/2}."""
    qi, fq = _q_of(q)
    g = math.gcd(math.gcd(m % qi if qi > 1 else 0, n % qi if qi > 1 else 0), qi)
    return fq.divisor_count * math.sqrt(g * qi)


def gauss_unit_bound_rhs(m: int, n: int, q: "int | FactoredModulus") -> float:
    """Structured right side d(q) * sqrt(q * gcd(m,n,q)) for the
    unit-restricted Gauss sum; the constant in front is calibrated."""
    return weil_bound_rhs(m, n, q)


def t_bound_rhs(x: int, y: int, z: int, q: "int | FactoredModulus") -> float:
    """Structured right side for the product-transform bound:
    d(q)^2 * gcd(x,y,q)^{1/2} * gcd(x-y, z, q/gcd(x,y,q))^{1/2} * q^{1/2}."""
    qi, fq = _q_of(q)
    g1 = math.gcd(math.gcd(x % qi if qi > 1 else 0, y % qi if qi > 1 else 0), qi)
    rest = qi // g1
    g2 = math.gcd(math.gcd((x - y) % rest if rest > 1 else 0,
                           z % rest if rest > 1 else 0), rest)
    return fq.divisor_count**2 * math.sqrt(g1 * g2 * qi)
