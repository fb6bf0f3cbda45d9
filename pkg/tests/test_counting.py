import itertools
import math

import numpy as np
import pytest

from kloosterlab import counting as ct
from kloosterlab.counting import CountQuery, TooLarge
from kloosterlab.modarith import factorize, mod_inv
from kloosterlab.weights import Interval


def test_count_query_validation():
    with pytest.raises(ValueError):
        CountQuery.of(10, 1, 11)
    with pytest.raises(ValueError):
        CountQuery.of(12, 1, 3, 5, 1)       # r does not divide q
    with pytest.raises(ValueError):
        CountQuery.of(12, 1, 3, 6, 2)       # c not a unit mod r
    with pytest.raises(ValueError):
        CountQuery.of(12, 1, 5, 4, 1)       # K > r
    with pytest.raises(ValueError):
        CountQuery.of(12, 1, 3, r=6, c=None)


def test_j_examples():
    assert ct.j_count_brute(CountQuery.of(5, 2, 2)) == 1
    assert ct.j_count_brute(CountQuery.of(5, 1, 2)) == 0
    # a = 0 over a prime larger than K counts only the diagonal
    assert ct.j_count_fast(CountQuery.of(101, 0, 17)) == 17
    # a = 0 generally counts the k <= K coprime to q
    assert ct.j_count_fast(CountQuery.of(12, 0, 9)) == \
        sum(1 for k in range(1, 10) if math.gcd(k, 12) == 1)
    assert ct.j_count_fast(CountQuery.of(101, 0, 100)) == 100


def test_fast_equals_brute_exhaustive_small():
    for q in range(1, 72):
        for K in range(1, q + 1):
            hb = ct.j_hist_brute(q, K)
            hf = ct.j_hist_fast(q, K)
            assert np.array_equal(hb, hf), (q, K)


def test_fast_equals_brute_random_larger():
    rng = np.random.default_rng(20)
    for _ in range(1000):
        q = int(rng.integers(72, 2000))
        K = int(rng.integers(1, q + 1))
        a = int(rng.integers(0, q))
        qr = CountQuery.of(q, a, K)
        assert ct.j_count_fast(qr) == ct.j_count_brute(qr)


def test_j_symmetry():
    rng = np.random.default_rng(21)
    for _ in range(200):
        q = int(rng.integers(2, 500))
        K = int(rng.integers(1, q + 1))
        a = int(rng.integers(0, q))
        assert ct.j_count_fast(CountQuery.of(q, a, K)) == \
            ct.j_count_fast(CountQuery.of(q, (-a) % q, K))


def test_restricted_reduces_to_plain():
    for q in (12, 30, 45):
        for K in range(1, q + 1):
            for a in range(0, q, 3):
                assert ct.j_count_restricted(CountQuery.of(q, a, K, q, 1)) == \
                    ct.j_count_brute(CountQuery.of(q, a, K))


def test_restricted_example_exhaustive():
    q, a, K, r, c = 12, 1, 3, 6, 5
    units = [k for k in range(q) if math.gcd(k, q) == 1]
    want = sum(1 for k1 in units for k2 in units
               if ((c * k1 - 1) % r + 1) <= K and ((c * k2 - 1) % r + 1) <= K
               and (mod_inv(k1, q) - mod_inv(k2, q)) % q == a)
    assert ct.j_count_restricted(CountQuery.of(q, a, K, r, c)) == want


def test_restriction_inequality_exact():
    rng = np.random.default_rng(22)
    cases = 0
    while cases < 500:
        q = int(rng.integers(4, 700))
        divs = [r for r in factorize(q).divisors() if 1 < r]
        if not divs:
            continue
        r = int(rng.choice(divs))
        c = int(rng.integers(1, r + 1))
        if math.gcd(c, r) != 1:
            continue
        K = int(rng.integers(1, r + 1))
        a = int(rng.integers(0, q))
        lhs = ct.j_count_restricted(CountQuery.of(q, a, K, r, c))
        rhs = (q // r) * ct.j_count_fast(
            CountQuery.of(r, mod_inv(c, r) * a % r, K))
        assert lhs <= rhs
        cases += 1


def test_pointwise_bounds_dominate_small_grid():
    # structured envelopes with constant 2 cover every exact count here
    for q in range(2, 120):
        for K in range(1, q + 1):
            hist = ct.j_hist_fast(q, K)
            for a in range(q):
                qr = CountQuery.of(q, a, K)
                assert hist[a] <= 2 * ct.bound_j_hb(qr)
                assert hist[a] <= 2 * ct.bound_j_new(qr)


def test_bound_crossover():
    # the large-K envelope wins beyond K around q^(2/3)
    for q in (10**3, 10**4):
        K = math.ceil(q**0.7)
        hb = ct.bound_j_hb(CountQuery.of(q, 1, K))
        new = ct.bound_j_new(CountQuery.of(q, 1, K))
        assert new < hb


def test_bound_j_scale_checks():
    assert ct.bound_j_hb(CountQuery.of(97, 1, 1)) >= 1
    qr = CountQuery.of(97, 1, 97)
    assert ct.bound_j_new(qr) == pytest.approx(97 + math.sqrt(97) + math.sqrt(97))


def test_j_avg_bound_preconditions():
    with pytest.raises(ValueError):
        ct.bound_j_avg(12, 2, 5, 5)   # gcd(a, q) > 1
    with pytest.raises(ValueError):
        ct.bound_j_avg(12, 1, 13, 5)  # N > q


def test_additive_energy_against_quadruple_loop():
    rng = np.random.default_rng(23)
    p = 101
    A = np.sort(rng.choice(p, 20, replace=False))
    B = np.sort(rng.choice(p, 15, replace=False))
    def quad(X, Y):
        return sum(1 for a1, a2, b1, b2 in itertools.product(X, X, Y, Y)
                   if (a1 - a2 - b1 + b2) % p == 0)
    assert ct.additive_energy(A, B, p) == quad(A.tolist(), B.tolist())
    assert ct.additive_energy(A, A, p) == quad(A.tolist(), A.tolist())
    # singleton energy
    assert ct.additive_energy(np.array([5]), np.array([5]), p) == 1


def test_energy_ceiling_and_cauchy_schwarz():
    rng = np.random.default_rng(24)
    p = 211
    for size in (2, 8, 20):
        A = np.sort(rng.choice(p, size, replace=False))
        B = np.sort(rng.choice(p, size, replace=False))
        ea = ct.additive_energy(A, A, p)
        eb = ct.additive_energy(B, B, p)
        eab = ct.additive_energy(A, B, p)
        assert ea <= size**3
        assert eab * eab <= ea * eb


def test_dp_count_small_cases():
    assert ct.dp_count(np.array([3]), 7) == 1
    p = 11
    A = [3, 7]
    want = sum(1 for t in itertools.product(A, repeat=8)
               if ((t[0] - t[1]) * (t[2] - t[3])
                   - (t[4] - t[5]) * (t[6] - t[7])) % p == 0)
    assert ct.dp_count(np.array(A), p) == want
    with pytest.raises(TooLarge):
        ct.dp_count(np.arange(201), 100003)


def test_dp_three_elements_enumeration():
    p = 13
    A = [1, 5, 11]
    want = sum(1 for t in itertools.product(A, repeat=8)
               if ((t[0] - t[1]) * (t[2] - t[3])
                   - (t[4] - t[5]) * (t[6] - t[7])) % p == 0)
    assert ct.dp_count(np.array(A), p) == want


def test_product_congruence_examples():
    assert ct.product_congruence_count(Interval(0, 1), Interval(0, 1), 7) == 1
    p = 7
    want = sum(1 for a1, a2, b1, b2 in itertools.product([1, 2], repeat=4)
               if (a1 * b1 - a2 * b2) % p == 0)
    assert ct.product_congruence_count(Interval(0, 2), Interval(0, 2), p) == want
    # diagonal lower bound
    got = ct.product_congruence_count(Interval(2, 50), Interval(10, 40), 101)
    assert got >= 50 * 40
    with pytest.raises(ValueError):
        ct.product_congruence_count(Interval(0, 7), Interval(0, 3), 7)


def test_mixed_count_examples():
    # no nonzero differences from a singleton
    assert ct.mixed_count_N(Interval(0, 3), np.array([4]), 11) == 0
    # exhaustive enumeration on a tiny instance
    p = 5
    want = 0
    for c in itertools.product([0, 1], repeat=4):
        v1 = (c[0] - c[1]) % p
        v2 = (c[2] - c[3]) % p
        if v1 == v2 and v1 != 0:
            want += 1
    assert ct.mixed_count_N(Interval(0, 1), np.array([0, 1]), p) == want
    # larger instance against a direct loop
    rng = np.random.default_rng(25)
    p = 101
    cs = np.sort(rng.choice(p, 6, replace=False))
    A = Interval(3, 7)
    direct = 0
    avals = [v % p for v in range(4, 11)]
    for a1, a2 in itertools.product(avals, repeat=2):
        for c1, c2, c3, c4 in itertools.product(cs.tolist(), repeat=4):
            if (a1 * (c1 - c2) - a2 * (c3 - c4)) % p == 0 and (c1 - c2) % p != 0:
                direct += 1
    assert ct.mixed_count_N(A, cs, p) == direct
