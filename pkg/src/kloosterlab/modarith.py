"""Integer and modular arithmetic kernel.

Factorization (deterministic for 63-bit inputs), modular inverses, Jacobi
symbols, square roots modulo odd prime powers, and CRT recombination.  All
residues are normalized to ``[0, m)``; negative inputs are reduced on entry.
Everything here is a pure function on immutable data and safe to share
between workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache


class NotInvertible(ValueError):
    """gcd(x, m) > 1, so x has no inverse mod m."""


class EvenModulus(ValueError):
    """An odd modulus was required."""


class BadInput(ValueError):
    """Argument violates a precondition that callers must handle first."""


class NonCoprime(ValueError):
    """CRT moduli share a common factor."""


# Deterministic Miller-Rabin base set; correct for all n < 3.3 * 10^24,
# comfortably covering the 63-bit input range.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_TRIAL_LIMIT = 10**6


def is_prime(n: int) -> bool:
    """Deterministic primality check for 0 <= n < 2**63."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int) -> int:
    """One nontrivial factor of composite n via Brent-cycle Pollard rho."""
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = 0
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed to split {n}")  # pragma: no cover


@dataclass(frozen=True)
class FactoredModulus:
    """A positive integer together with its prime-power factorization.

    ``factors`` is sorted by prime, each exponent >= 1, and the product of
    p**j reproduces ``q``.  ``q = 1`` carries an empty factor list.
    """

    q: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if not 1 <= self.q < 2**63:
            raise BadInput(f"modulus {self.q} outside [1, 2^63)")
        prod = 1
        prev = 0
        for p, j in self.factors:
            if p <= prev or j < 1:
                raise BadInput("factors must be sorted with exponents >= 1")
            prev = p
            prod *= p**j
        if prod != self.q:
            raise BadInput(f"factors do not multiply to {self.q}")

    @property
    def phi(self) -> int:
        """Euler totient."""
        out = 1
        for p, j in self.factors:
            out *= (p - 1) * p ** (j - 1)
        return out

    @property
    def mobius(self) -> int:
        if any(j > 1 for _, j in self.factors):
            return 0
        return -1 if len(self.factors) % 2 else 1

    @property
    def divisor_count(self) -> int:
        out = 1
        for _, j in self.factors:
            out *= j + 1
        return out

    def divisors(self) -> list[int]:
        """All positive divisors, ascending."""
        divs = [1]
        for p, j in self.factors:
            divs = [d * p**e for d in divs for e in range(j + 1)]
        return sorted(divs)

    @property
    def is_prime(self) -> bool:
        return len(self.factors) == 1 and self.factors[0][1] == 1


@lru_cache(maxsize=65536)
def factorize(n: int) -> FactoredModulus:
    """Complete factorization of 1 <= n < 2**63.

    Trial division up to 10^6 followed by Brent-rho with deterministic
    Miller-Rabin; deterministic over the whole input range.
    """
    if not 1 <= n < 2**63:
        raise BadInput(f"{n} outside [1, 2^63)")
    counts: dict[int, int] = {}
    rem = n
    for p in (2, 3, 5):
        while rem % p == 0:
            counts[p] = counts.get(p, 0) + 1
            rem //= p
    # 2/3/5 wheel
    d = 7
    offs = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while d * d <= rem and d < _TRIAL_LIMIT:
        while rem % d == 0:
            counts[d] = counts.get(d, 0) + 1
            rem //= d
        d += offs[i]
        i = (i + 1) % 8
    stack = [rem] if rem > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            counts[m] = counts.get(m, 0) + 1
            continue
        g = _brent_rho(m)
        stack.extend((g, m // g))
    return FactoredModulus(n, tuple(sorted(counts.items())))


def as_modulus(q: "int | FactoredModulus") -> FactoredModulus:
    return q if isinstance(q, FactoredModulus) else factorize(q)


def mod_inv(x: int, m: "int | FactoredModulus") -> int:
    """y with x*y == 1 (mod m); raises NotInvertible when gcd(x, m) > 1."""
    mm = m.q if isinstance(m, FactoredModulus) else m
    try:
        return pow(x % mm, -1, mm) if mm > 1 else 0
    except ValueError:
        raise NotInvertible(f"gcd({x}, {mm}) > 1") from None


def mod_pow(x: int, e: int, m: int) -> int:
    return pow(x, e, m)


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1."""
    if n < 1 or n % 2 == 0:
        raise EvenModulus(f"Jacobi symbol needs odd n >= 1, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def sqrt_mod_prime(a: int, p: int) -> int | None:
    """Tonelli-Shanks square root of a mod an odd prime p, or None.

    Requires gcd(a, p) = 1; returns some l with l*l == a (mod p).
    """
    a %= p
    if jacobi(a, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while jacobi(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t * t % p, 1
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def sqrt_mod_prime_power(a: int, p: int, j: int) -> int | None:
    """Some l with l*l == a (mod p**j) for odd p with p not dividing a.

    Mod-p root by Tonelli-Shanks lifted by Newton/Hensel iteration; returns
    the smaller of the two roots {l, p**j - l}, or None when a is a
    quadratic non-residue mod p.  Raises BadInput when p | a or p = 2
    (callers strip common factors first).
    """
    if p == 2 or not is_prime(p):
        raise BadInput(f"p={p} must be an odd prime")
    if a % p == 0:
        raise BadInput(f"p={p} divides a={a}; strip common factors first")
    root = sqrt_mod_prime(a, p)
    if root is None:
        return None
    mod = p
    while mod < p**j:
        mod = min(mod * mod, p**j)
        # Newton step for l^2 - a = 0; 2l is a unit since p is odd.
        root = (root - (root * root - a) * pow(2 * root, -1, mod)) % mod
    return min(root, p**j - root)


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> int:
    """The unique x mod m1*m2 with x == r1 (m1) and x == r2 (m2)."""
    if math.gcd(m1, m2) != 1:
        raise NonCoprime(f"gcd({m1}, {m2}) > 1")
    r1 %= m1
    r2 %= m2
    if m1 == 1:
        return r2
    if m2 == 1:
        return r1
    return (r1 + m1 * ((r2 - r1) * pow(m1, -1, m2) % m2)) % (m1 * m2)


def phi(q: "int | FactoredModulus") -> int:
    return as_modulus(q).phi


def mobius(q: "int | FactoredModulus") -> int:
    return as_modulus(q).mobius


def divisor_count(q: "int | FactoredModulus") -> int:
    return as_modulus(q).divisor_count


def gcd(*args: int) -> int:
    return math.gcd(*args)
