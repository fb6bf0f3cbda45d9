import math

import numpy as np
import pytest

from kloosterlab import bilinear as bl
from kloosterlab.bilinear import BoundSpec, OutOfRange, ZeroInSupport, bound_rhs
from kloosterlab.counting import admissible_units
from kloosterlab.expsums import kloosterman_fast
from kloosterlab.modarith import factorize
from kloosterlab.weights import Interval, WeightVector


def test_zero_weights_and_single_term():
    q = 101
    zero = WeightVector(Interval(0, 4), np.zeros(4))
    assert bl.type2_sum(zero, WeightVector.ones(Interval(0, 3)), 1, q).value == 0
    al = WeightVector.ones(Interval(4, 1))
    got = bl.type1_sum(al, Interval(9, 1), 3, q).value
    want = kloosterman_fast(5, 30, q).value
    assert abs(got - want) < 1e-9 * q


def test_full_period_interval_collapses():
    # J covering a full period: each inner sum is a complete character sum
    q = 60
    rng = np.random.default_rng(0)
    al = WeightVector.rademacher(Interval(2, 10), rng)
    direct = bl.type1_sum(al, Interval(7, q), 5, q, "direct").value
    dft = bl.type1_sum(al, Interval(7, q), 5, q, "dft").value
    assert abs(direct - dft) < 1e-6 * q**1.5


def test_paths_agree_across_sum_types():
    rng = np.random.default_rng(1)
    for _ in range(30):
        q = int(rng.integers(16, 600))
        M, N = int(rng.integers(1, 11)), int(rng.integers(1, 11))
        a = int(rng.integers(0, q))
        al = WeightVector.rademacher(Interval(int(rng.integers(-q, q)), M), rng)
        be = WeightVector.unit_phase(Interval(int(rng.integers(-q, q)), N), rng)
        tol = 1e-6 * q**1.5
        assert abs(bl.type2_sum(al, be, a, q, "direct").value
                   - bl.type2_sum(al, be, a, q, "dft").value) < tol
        J = Interval(int(rng.integers(-q, q)), N)
        assert abs(bl.type1_sum(al, J, a, q, "direct").value
                   - bl.type1_sum(al, J, a, q, "dft").value) < tol
        assert abs(bl.product_type1_sum(al, J, a, q, "direct").value
                   - bl.product_type1_sum(al, J, a, q, "profile").value) < tol


def test_product_dlog_path():
    rng = np.random.default_rng(2)
    for p in (101, 1009):
        al = WeightVector.rademacher(Interval(3, 9), rng)
        J = Interval(5, 11)
        d = bl.product_type1_sum(al, J, 7, p, "direct").value
        assert abs(bl.product_type1_sum(al, J, 7, p, "dlog").value - d) < 1e-6 * p**1.5
    with pytest.raises(ZeroInSupport):
        bl.product_type1_sum(WeightVector.ones(Interval(-1, 3)), Interval(0, 2),
                             1, 11, "dlog")


def test_incomplete_sum_paths_and_admissible_set():
    q, r, c, K = 60, 6, 5, 2
    ks = admissible_units(q, r, c, K)
    want = [k for k in range(q) if math.gcd(k, q) == 1
            and (c * k - 1) % r + 1 <= K]
    assert ks.tolist() == want
    rng = np.random.default_rng(3)
    al = WeightVector.rademacher(Interval(0, 8), rng)
    ga = WeightVector.unit_phase(ks, rng)
    d1 = bl.incomplete_sum(al, ga, 7, q, "direct").value
    d2 = bl.incomplete_sum(al, ga, 7, q, "dft").value
    assert abs(d1 - d2) < 1e-6 * q**1.5
    with pytest.raises(ValueError):
        bl.incomplete_sum(al, WeightVector.ones(np.array([2])), 7, q)


def test_incomplete_trivial_ceiling():
    q, r, c, K = 360, 12, 5, 7
    ks = admissible_units(q, r, c, K)
    rng = np.random.default_rng(4)
    al = WeightVector.rademacher(Interval(0, 12), rng)
    ga = WeightVector.rademacher(ks, rng)
    w = abs(bl.incomplete_sum(al, ga, 7, q).value)
    assert w <= al.norm2() * ga.norm_inf() * math.sqrt(12) * len(ks) + 1e-9


def test_set_sums_match_loops_and_reject_zero():
    rng = np.random.default_rng(5)
    p = 211
    mset = np.sort(rng.choice(p, 30, replace=False))
    al = WeightVector.rademacher(mset, rng)
    ga = WeightVector.unit_phase(Interval(2, 40), rng)
    assert abs(bl.set_incomplete_sum(al, ga, 5, p, "direct").value
               - bl.set_incomplete_sum(al, ga, 5, p, "dft").value) < 1e-6 * p**1.5
    with pytest.raises(ZeroInSupport):
        bl.set_incomplete_sum(al, WeightVector.ones(Interval(p - 2, 3)), 5, p)
    J = Interval(0, 17)
    assert abs(bl.set_type1_sum(al, J, p, "direct").value
               - bl.set_type1_sum(al, J, p, "dft").value) < 1e-6 * p**1.5
    # a singleton set reduces to a plain interval specialization
    one = WeightVector.ones(np.array([13]))
    got = bl.set_type1_sum(one, J, p).value
    want = bl.type1_sum(WeightVector.ones(Interval(12, 1)), J, 1, p).value
    assert abs(got - want) < 1e-9 * p


def test_scaling_covariance():
    rng = np.random.default_rng(6)
    q = 97
    al = WeightVector.rademacher(Interval(0, 9), rng)
    be = WeightVector.unit_phase(Interval(0, 7), rng)
    base = bl.type2_sum(al, be, 3, q).value
    scaled = bl.type2_sum(al.scaled(2.5 - 1j), be, 3, q).value
    assert abs(scaled - (2.5 - 1j) * base) < 1e-9 * q**1.5


def test_support_longer_than_modulus_rejected():
    with pytest.raises(ValueError):
        bl.type1_sum(WeightVector.ones(Interval(0, 13)), Interval(0, 3), 1, 12)
    with pytest.raises(ValueError):
        bl.type1_sum(WeightVector.ones(Interval(0, 3)), Interval(0, 13), 1, 12)


def test_delta_shapes():
    # variants a and b share their leading terms on the diagonal M = N
    for q in (10**4, 10**6):
        M = N = math.isqrt(q)
        da = bl.delta1(M, N, q, 1, "a")
        db = bl.delta1(M, N, q, 1, "b")
        assert da == pytest.approx(M**-0.25 * math.sqrt(q) / N
                                   + math.sqrt(q) / (N * math.sqrt(M))
                                   + N**-0.5)
        # the shared stationary term dominates both on the diagonal
        lead = M**-0.25 * math.sqrt(q) / N
        assert abs(da - db) <= da and lead <= min(da, db)
    # variant c wins for skewed shapes M N^2 >= q^{1+delta}, M >= q^{1/2+delta};
    # the crossover against variant b happens near q ~ 4e6 for these exponents
    q = 10**6
    M, N = math.ceil(q**0.6), math.ceil(q**0.3)
    assert bl.delta1(M, N, q, 1, "c") < bl.delta1(M, N, q, 1, "a")
    q = 10**8
    M, N = math.ceil(q**0.6), math.ceil(q**0.3)
    dc = bl.delta1(M, N, q, 1, "c")
    assert dc < bl.delta1(M, N, q, 1, "a")
    assert dc < bl.delta1(M, N, q, 1, "b")


def test_delta2_substitution():
    q = 4096
    val = bl.delta2(64, q, q, q, "a")
    assert val == pytest.approx(64**-0.25 + 0.125 + q**-0.5)


def test_bound_rhs_preconditions():
    spec = BoundSpec("set-incomplete", 0.05, 1.0)
    with pytest.raises(OutOfRange, match="K >= p"):
        bound_rhs(spec, {"p": 101, "M": 5, "K": 9, "r": 1,
                         "norminf_alpha": 1, "norminf_gamma": 1})
    spec = BoundSpec("set-incomplete-smallm", 0.05, 1.0)
    with pytest.raises(OutOfRange, match="M <= p"):
        bound_rhs(spec, {"p": 101, "M": 30, "K": 100, "r": 2,
                         "norminf_alpha": 1, "norminf_gamma": 1})
    spec = BoundSpec("set-type1", 0.05, 1.0)
    with pytest.raises(OutOfRange, match="N <= p"):
        bound_rhs(spec, {"p": 101, "M": 5, "N": 100, "r": 2,
                         "norminf_alpha": 1})
    spec = BoundSpec("type2-incomplete-a", 0.05, 1.0)
    with pytest.raises(OutOfRange, match="r"):
        bound_rhs(spec, {"q": 100, "r": 7, "M": 5, "K": 3,
                         "norm2_alpha": 1, "norminf_gamma": 1})
    with pytest.raises(OutOfRange, match="K <= r"):
        bound_rhs(spec, {"q": 100, "r": 4, "M": 5, "K": 9,
                         "norm2_alpha": 1, "norminf_gamma": 1})


def test_bound_rhs_trivial_shape():
    spec = BoundSpec("trivial", 0.05, 1.0)
    got = bound_rhs(spec, {"q": 100, "M": 1, "N": 1,
                           "norminf_alpha": 2.0, "norminf_beta": 3.0})
    assert got == pytest.approx(6.0 * 100**0.55)


def test_boundspec_validation():
    with pytest.raises(ValueError):
        BoundSpec("trivial", 0.3, 1.0)
    with pytest.raises(ValueError):
        BoundSpec("trivial", 0.05, 0.0)


def test_exact_preconditions_use_integer_powers():
    # K = p^{1/r} boundary accepted exactly, K just below rejected
    p, r = 10**4 + 7, 2
    K = math.isqrt(p) + 1          # K^2 >= p
    spec = BoundSpec("set-incomplete", 0.0, 1.0)
    bound_rhs(spec, {"p": p, "M": 4, "K": K, "r": r,
                     "norminf_alpha": 1, "norminf_gamma": 1})
    with pytest.raises(OutOfRange):
        bound_rhs(spec, {"p": p, "M": 4, "K": K - 1, "r": r,
                         "norminf_alpha": 1, "norminf_gamma": 1})
