"""Identity suite: exact and tolerance checks behind the `suite` command.

Every check runs a deterministic battery up to the modulus budget and
reports its worst normalized deviation against a fixed tolerance.  A check
passes when worst <= 1.  The optional fault name perturbs one check's
deviation, which lets tests confirm the suite actually detects violations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from kloosterlab import bilinear, counting, divisor, expsums, moments
from kloosterlab.counting import CountQuery
from kloosterlab.harness.rng import rng_for
from kloosterlab.modarith import as_modulus, factorize, mod_inv
from kloosterlab.weights import Interval, WeightVector

SUITE_SEED = 20240601


@dataclass
class CheckResult:
    name: str
    scope: str
    cases: int
    worst: float   # normalized: deviation / tolerance
    passed: bool


def _moduli(budget: int, rng, dense_to: int = 120, samples: int = 80) -> list[int]:
    qs = set(range(2, min(budget, dense_to) + 1))
    while len(qs) < min(samples, budget - 1) and budget > dense_to:
        qs.add(int(rng.integers(2, budget + 1)))
    return sorted(qs)


def _strata_pairs(q: int, rng, count: int = 8) -> list[tuple[int, int]]:
    fq = factorize(q)
    pairs = [(int(rng.integers(0, q)), int(rng.integers(0, q)))
             for _ in range(count)]
    pairs += [(0, int(rng.integers(0, q))), (0, 0), (1, 1)]
    for p, j in fq.factors[:2]:
        for d in {p, p**j, p ** max(1, j - 1)}:
            pairs.append((d * int(rng.integers(1, max(2, q // d + 1))) % q,
                          d * int(rng.integers(1, max(2, q // d + 1))) % q))
            pairs.append((d * int(rng.integers(1, max(2, q // d + 1))) % q,
                          int(rng.integers(0, q))))
    return pairs


def check_kloosterman_oracle(budget: int, fault: str | None = None) -> CheckResult:
    rng = rng_for(SUITE_SEED, "kloosterman-oracle", budget)
    worst = 0.0
    cases = 0
    for q in _moduli(budget, rng):
        for m, n in _strata_pairs(q, rng):
            b = expsums.kloosterman_brute(m, n, q).value
            f = expsums.kloosterman_fast(m, n, q).value
            worst = max(worst, abs(b - f) / (1e-6 * q))
            cases += 1
    if fault == "kloosterman-oracle":
        worst += 2.0
    return CheckResult("kloosterman-oracle", "expsums", cases, worst, worst <= 1)


def check_weil(budget: int, fault: str | None = None) -> CheckResult:
    rng = rng_for(SUITE_SEED, "weil", budget)
    worst = 0.0
    cases = 0
    for q in _moduli(budget, rng):
        for m, n in _strata_pairs(q, rng):
            lhs = abs(expsums.kloosterman_fast(m, n, q).value)
            rhs = expsums.weil_bound_rhs(m, n, q)
            worst = max(worst, lhs / rhs if rhs else math.inf)
            cases += 1
    if fault == "weil":
        worst += 2.0
    return CheckResult("weil", "expsums", cases, worst, worst <= 1)


def check_symmetry_scaling(budget: int, fault: str | None = None) -> CheckResult:
    rng = rng_for(SUITE_SEED, "symmetry", budget)
    worst = 0.0
    cases = 0
    for q in _moduli(budget, rng, dense_to=60, samples=50):
        for _ in range(6):
            m, n = int(rng.integers(0, q)), int(rng.integers(0, q))
            tol = 1e-6 * q
            kmn = expsums.kloosterman_fast(m, n, q)
            worst = max(worst, abs(kmn.value - expsums.kloosterman_fast(n, m, q).value) / tol)
            worst = max(worst, abs(kmn.value.imag) / (1e-6 * max(1, kmn.terms)))
            c = 1 + int(rng.integers(0, q - 1)) if q > 2 else 1
            while math.gcd(c, q) != 1:
                c = 1 + int(rng.integers(0, q - 1))
            lhs = expsums.kloosterman_fast(c * m, n, q).value
            rhs = expsums.kloosterman_fast(m, c * n, q).value
            worst = max(worst, abs(lhs - rhs) / tol)
            cases += 3
    if fault == "symmetry":
        worst += 2.0
    return CheckResult("symmetry", "expsums", cases, worst, worst <= 1)


def check_divisor_expansion(budget: int, fault: str | None = None) -> CheckResult:
    """Expansion of K_q(m, n) over divisors of gcd(m, n, q) into sums with
    second argument 1; every modulus up to the budget, constructed gcds."""
    rng = rng_for(SUITE_SEED, "divisor-expansion", budget)
    worst = 0.0
    cases = 0
    for q in range(2, budget + 1):
        fq = factorize(q)
        gs = sorted({1, *(p for p, _ in fq.factors), *(p**j for p, j in fq.factors),
                     q})
        for g in gs:
            m = g * int(rng.integers(1, max(2, q // g + 1))) % q
            n = g * int(rng.integers(1, max(2, q // g + 1))) % q
            lhs = expsums.kloosterman_fast(m, n, q).value
            total = 0j
            for d in fq.divisors():
                if m % d == 0 and n % d == 0 and q % d == 0:
                    total += d * expsums.kloosterman_fast(
                        (m // d) * (n // d), 1, q // d).value
            worst = max(worst, abs(lhs - total) / (1e-6 * q))
            cases += 1
    if fault == "divisor-expansion":
        worst += 2.0
    return CheckResult("divisor-expansion", "expsums", cases, worst, worst <= 1)


def check_multiplicativity(budget: int, fault: str | None = None) -> CheckResult:
    rng = rng_for(SUITE_SEED, "multiplicativity", budget)
    worst = 0.0
    cases = 0
    for _ in range(60):
        q1 = int(rng.integers(2, max(3, int(math.isqrt(budget)))))
        q2 = int(rng.integers(2, max(3, budget // max(q1, 1) + 1)))
        if q1 * q2 > budget or math.gcd(q1, q2) != 1:
            continue
        q = q1 * q2
        m, n = int(rng.integers(0, q)), int(rng.integers(0, q))
        lhs = expsums.kloosterman_brute(m, n, q).value
        rhs = (expsums.kloosterman_brute(m * mod_inv(q2, q1), n * mod_inv(q2, q1), q1).value
               * expsums.kloosterman_brute(m * mod_inv(q1, q2), n * mod_inv(q1, q2), q2).value)
        worst = max(worst, abs(lhs - rhs) / (1e-6 * q))
        cases += 1
    if fault == "multiplicativity":
        worst += 2.0
    return CheckResult("multiplicativity", "expsums", cases, worst, worst <= 1)


def check_ramanujan(budget: int, fault: str | None = None) -> CheckResult:
    rng = rng_for(SUITE_SEED, "ramanujan", budget)
    worst = 0.0
    cases = 0
    for q in _moduli(budget, rng, dense_to=80, samples=60):
        for _ in range(4):
            m = int(rng.integers(0, 3 * q))
            c = expsums.ramanujan(m, q)
            g = math.gcd(m, q)
            worst = max(worst, abs(c) / g if g else math.inf)
            direct = expsums.kloosterman_fast(m, 0, q).value
            worst = max(worst, abs(direct - c) / (1e-6 * q))
            cases += 2
    if fault == "ramanujan":
        worst += 2.0
    return CheckResult("ramanujan", "expsums", cases, worst, worst <= 1)


def check_gauss_mobius(budget: int, fault: str | None = None) -> CheckResult:
    rng = rng_for(SUITE_SEED, "gauss-mobius", budget)
    worst = 0.0
    cases = 0
    for q in _moduli(budget, rng, dense_to=60, samples=50):
        for _ in range(3):
            m, n = int(rng.integers(0, q)), int(rng.integers(0, q))
            direct = expsums.gauss_star(m, n, q).value
            expanded = expsums.gauss_star_mobius(m, n, q)
            worst = max(worst, abs(direct - expanded) / (1e-8 * q))
            cases += 1
    if fault == "gauss-mobius":
        worst += 2.0
    return CheckResult("gauss-mobius", "expsums", cases, worst, worst <= 1)


def check_gauss_vanishing(budget: int, fault: str | None = None) -> CheckResult:
    """The full quadratic Gauss sum vanishes unless gcd(m, q) divides n."""
    rng = rng_for(SUITE_SEED, "gauss-vanishing", budget)
    worst = 0.0
    cases = 0
    for q in _moduli(budget, rng, dense_to=60, samples=50):
        for _ in range(4):
            m = int(rng.integers(0, q))
            n = int(rng.integers(0, q))
            d = math.gcd(m, q)
            if d > 1 and n % d != 0:
                val = expsums.gauss(m, n, q).value
                worst = max(worst, abs(val) / (1e-8 * q))
                cases += 1
    if fault == "gauss-vanishing":
        worst += 2.0
    return CheckResult("gauss-vanishing", "expsums", cases, worst, worst <= 1)


def check_vanishing(budget: int, fault: str | None = None) -> CheckResult:
    """Prime-power vanishing: p | m forces K_{p^j}(m, 1) = 0 for j >= 2, and
    mismatched argument gcds force K_{p^j}(m, n) = 0."""
    rng = rng_for(SUITE_SEED, "vanishing", budget)
    worst = 0.0
    cases = 0
    for p in (2, 3, 5, 7, 11, 13):
        j = 2
        while p**j <= budget:
            q = p**j
            for _ in range(4):
                m = p * int(rng.integers(1, max(2, q // p)))
                worst = max(worst, abs(expsums.kloosterman_brute(m, 1, q).value)
                            / (1e-6 * q))
                k = int(rng.integers(1, j))
                m2 = p**k * int(rng.integers(1, max(2, q // p**k)))
                while m2 % q == 0:
                    m2 += p**k
                n2 = int(rng.integers(1, q))
                while n2 % p == 0:
                    n2 = int(rng.integers(1, q))
                worst = max(worst, abs(expsums.kloosterman_brute(m2, n2, q).value)
                            / (1e-6 * q))
                cases += 2
            j += 1
    if fault == "vanishing":
        worst += 2.0
    return CheckResult("vanishing", "expsums", cases, worst, worst <= 1)


def check_gcd_pullout(budget: int, fault: str | None = None) -> CheckResult:
    """K_{p^j}(dm, dn) = d K_{p^j/d}(m, n) for d = gcd(dm, dn, p^j) < p^j."""
    rng = rng_for(SUITE_SEED, "gcd-pullout", budget)
    worst = 0.0
    cases = 0
    for p in (3, 5, 7, 11):
        j = 2
        while p**j <= budget:
            q = p**j
            for k in range(1, j):
                d = p**k
                m = int(rng.integers(1, q // d))
                n = int(rng.integers(1, q // d))
                if m % p == 0 and n % p == 0:
                    m += 1
                lhs = expsums.kloosterman_brute(d * m, d * n, q).value
                rhs = d * expsums.kloosterman_brute(m, n, q // d).value
                worst = max(worst, abs(lhs - rhs) / (1e-6 * q))
                cases += 1
            j += 1
    if fault == "gcd-pullout":
        worst += 2.0
    return CheckResult("gcd-pullout", "expsums", cases, worst, worst <= 1)


def check_root_choice(budget: int, fault: str | None = None) -> CheckResult:
    """The closed form gives the same value for either square root l."""
    rng = rng_for(SUITE_SEED, "root-choice", budget)
    worst = 0.0
    cases = 0
    for p in (3, 5, 7, 11, 13):
        j = 2
        while p**j <= budget:
            q = p**j
            for _ in range(6):
                n = int(rng.integers(1, q))
                l = int(rng.integers(1, q))
                if n % p == 0 or l % p == 0:
                    continue
                v1 = expsums._odd_prime_power_closed_form(n, q, l)
                v2 = expsums._odd_prime_power_closed_form(n, q, q - l)
                worst = max(worst, abs(v1 - v2) / (1e-10 * math.sqrt(q)))
                cases += 1
            j += 1
    if fault == "root-choice":
        worst += 2.0
    return CheckResult("root-choice", "expsums", cases, worst, worst <= 1)


def check_t_oracle(budget: int, fault: str | None = None) -> CheckResult:
    rng = rng_for(SUITE_SEED, "t-oracle", budget)
    worst = 0.0
    cases = 0
    for q in _moduli(min(budget, 500), rng, dense_to=50, samples=60):
        for _ in range(4):
            x, y, z = (int(v) for v in rng.integers(0, q, 3))
            tb = expsums.t_transform_brute(x, y, z, q).value
            tf = expsums.t_transform_fast(x, y, z, q).value
            worst = max(worst, abs(tb - tf) / (1e-6 * q**1.5))
            cases += 1
        # zero frequency degenerates to a Ramanujan sum
        x, y = int(rng.integers(0, q)), int(rng.integers(0, q))
        tb = expsums.t_transform_brute(x, y, 0, q).value
        worst = max(worst, abs(tb - expsums.ramanujan(x - y, q)) / (1e-6 * q**1.5))
        cases += 1
    if fault == "t-oracle":
        worst += 2.0
    return CheckResult("t-oracle", "expsums", cases, worst, worst <= 1)


def check_j_oracle(budget: int, fault: str | None = None) -> CheckResult:
    rng = rng_for(SUITE_SEED, "j-oracle", budget)
    worst = 0.0
    cases = 0
    for q in _moduli(min(budget, 200), rng, dense_to=60, samples=40):
        for _ in range(6):
            K = int(rng.integers(1, q + 1))
            a = int(rng.integers(0, q))
            qr = CountQuery.of(q, a, K)
            dev = abs(counting.j_count_fast(qr) - counting.j_count_brute(qr))
            worst = max(worst, float(dev))
            sym = abs(counting.j_count_fast(qr)
                      - counting.j_count_fast(CountQuery.of(q, (-a) % q, K)))
            worst = max(worst, float(sym))
            cases += 2
    if fault == "j-oracle":
        worst += 2.0
    return CheckResult("j-oracle", "counting", cases, worst, worst <= 1)


def check_j_restricted(budget: int, fault: str | None = None) -> CheckResult:
    rng = rng_for(SUITE_SEED, "j-restricted", budget)
    worst = 0.0
    cases = 0
    for q in _moduli(min(budget, 300), rng, dense_to=40, samples=30):
        divs = [r for r in factorize(q).divisors() if r > 1]
        for r in divs[:4]:
            c = 1 + int(rng.integers(0, r))
            while math.gcd(c, r) != 1:
                c = 1 + int(rng.integers(0, r))
            K = int(rng.integers(1, r + 1))
            a = int(rng.integers(0, q))
            lhs = counting.j_count_restricted(CountQuery.of(q, a, K, r, c))
            rhs = (q // r) * counting.j_count_fast(
                CountQuery.of(r, mod_inv(c, r) * a % r, K))
            worst = max(worst, 0.0 if lhs <= rhs else float(lhs - rhs))
            cases += 1
    if fault == "j-restricted":
        worst += 2.0
    return CheckResult("j-restricted", "counting", cases, worst, worst <= 1)


def check_energy(budget: int, fault: str | None = None) -> CheckResult:
    rng = rng_for(SUITE_SEED, "energy", budget)
    worst = 0.0
    cases = 0
    for p in (101, 211, 499):
        if p > max(budget, 101):
            continue
        for size in (5, 12, 25):
            A = np.sort(rng.choice(p, size=size, replace=False))
            B = np.sort(rng.choice(p, size=size, replace=False))
            eab = counting.additive_energy(A, B, p)
            ea = counting.additive_energy(A, A, p)
            eb = counting.additive_energy(B, B, p)
            worst = max(worst, 0.0 if eab * eab <= ea * eb else 1.5)
            worst = max(worst, 0.0 if ea <= size**3 else 1.5)
            cases += 2
    if fault == "energy":
        worst += 2.0
    return CheckResult("energy", "counting", cases, worst, worst <= 1)


def check_bilinear_paths(budget: int, fault: str | None = None) -> CheckResult:
    rng = rng_for(SUITE_SEED, "bilinear-paths", budget)
    worst = 0.0
    cases = 0
    rng_np = rng
    for _ in range(20):
        q = int(rng.integers(16, min(budget, 400) + 1))
        M, N = int(rng.integers(1, 10)), int(rng.integers(1, 10))
        a = int(rng.integers(0, q))
        alpha = WeightVector.rademacher(Interval(int(rng.integers(0, q)), M), rng_np)
        beta = WeightVector.unit_phase(Interval(int(rng.integers(0, q)), N), rng_np)
        tol = 1e-6 * q**1.5 * max(alpha.norm_inf(), 1) * max(beta.norm_inf(), 1)
        d1 = bilinear.type2_sum(alpha, beta, a, q, "direct").value
        d2 = bilinear.type2_sum(alpha, beta, a, q, "dft").value
        worst = max(worst, abs(d1 - d2) / tol)
        # scaling covariance
        scaled = bilinear.type2_sum(alpha.scaled(2.5 - 1j), beta, a, q, "dft").value
        worst = max(worst, abs(scaled - (2.5 - 1j) * d2) / tol)
        # triangle ceiling with the crude unit-count envelope
        ceiling = alpha.norm1() * beta.norm1() * as_modulus(q).phi
        worst = max(worst, 0.0 if abs(d2) <= ceiling * (1 + 1e-9) else 1.5)
        cases += 3
    if fault == "bilinear-paths":
        worst += 2.0
    return CheckResult("bilinear-paths", "bilinear", cases, worst, worst <= 1)


def check_moment_profile(budget: int, fault: str | None = None) -> CheckResult:
    worst = 0.0
    cases = 0
    for p, N in ((101, 10), (211, 9)):
        J = Interval(2, N)
        prof = moments.short_sum_profile(p, J)
        for lam in range(1, p, 7):
            direct = abs(moments.short_sum_direct(p, J, lam))
            worst = max(worst, abs(direct - prof.values[lam - 1]) / (1e-6 * p * N))
            cases += 1
        d1, d2 = moments.second_moment_full(p, J)
        worst = max(worst, abs(d1 - d2) / (1e-6 * max(d1, 1.0)))
        cases += 1
    if fault == "moment-profile":
        worst += 2.0
    return CheckResult("moment-profile", "moments", cases, worst, worst <= 1)


def check_divisor_partition(budget: int, fault: str | None = None) -> CheckResult:
    sieve = divisor.DivisorSieve(20000)
    worst = 0.0
    cases = 0
    for q in (7, 12, 101):
        total = sum(sieve.class_sum(a, q) for a in range(q))
        worst = max(worst, float(abs(total - sieve.total())))
        cases += 1
    if fault == "divisor-partition":
        worst += 2.0
    return CheckResult("divisor-partition", "divisor", cases, worst, worst <= 1)


ALL_CHECKS = (
    ("expsums", check_kloosterman_oracle),
    ("expsums", check_weil),
    ("expsums", check_symmetry_scaling),
    ("expsums", check_divisor_expansion),
    ("expsums", check_multiplicativity),
    ("expsums", check_ramanujan),
    ("expsums", check_gauss_mobius),
    ("expsums", check_gauss_vanishing),
    ("expsums", check_vanishing),
    ("expsums", check_gcd_pullout),
    ("expsums", check_root_choice),
    ("expsums", check_t_oracle),
    ("counting", check_j_oracle),
    ("counting", check_j_restricted),
    ("counting", check_energy),
    ("bilinear", check_bilinear_paths),
    ("moments", check_moment_profile),
    ("divisor", check_divisor_partition),
)


def run_identity_suite(budget: int, scope: str | None = None,
                       fault: str | None = None) -> list[CheckResult]:
    """Run every check whose scope matches; budget is the max modulus."""
    if budget < 2:
        return []
    return [fn(budget, fault) for chk_scope, fn in ALL_CHECKS
            if scope is None or chk_scope == scope]
