"""Backend parity: the compiled kernels must agree with the numpy fallback."""

import numpy as np
import pytest

from kloosterlab._accel import load_backend

try:
    compiled = load_backend("compiled")
except ImportError:  # pragma: no cover
    compiled = None
pure = load_backend("python")

pytestmark = pytest.mark.skipif(compiled is None,
                                reason="compiled extension not built")


def _tables(q):
    inv = pure.inverse_table(q)
    xs = np.nonzero(inv)[0].astype(np.int64)
    xinvs = inv[xs]
    ang = 2 * np.pi * np.arange(q) / q
    return inv, xs, xinvs, np.cos(ang), np.sin(ang)


@pytest.mark.parametrize("q", [2, 3, 4, 12, 49, 97, 360, 1009])
def test_inverse_table_parity(q):
    assert np.array_equal(compiled.inverse_table(q), pure.inverse_table(q))


@pytest.mark.parametrize("q", [5, 12, 49, 97, 360])
def test_unit_and_gauss_sums_parity(q):
    rng = np.random.default_rng(q)
    _, xs, xinvs, re, im = _tables(q)
    for _ in range(20):
        m, n = (int(v) for v in rng.integers(0, q, 2))
        a = compiled.unit_sum(m, n, q, xs, xinvs, re, im)
        b = pure.unit_sum(m, n, q, xs, xinvs, re, im)
        assert abs(a - b) < 1e-9 * q
        a = compiled.gauss_full(m, n, q, re, im)
        b = pure.gauss_full(m, n, q, re, im)
        assert abs(a - b) < 1e-9 * q
        a = compiled.gauss_units(m, n, q, xs, re, im)
        b = pure.gauss_units(m, n, q, xs, re, im)
        assert abs(a - b) < 1e-9 * q
    signs = np.where(rng.random(len(xs)) < 0.5, -1, 1).astype(np.int64)
    a = compiled.signed_unit_sum(3, 4, q, xs, xinvs, signs, re, im)
    b = pure.signed_unit_sum(3, 4, q, xs, xinvs, signs, re, im)
    assert abs(a - b) < 1e-9 * q


def test_unit_sum_many_parity():
    q = 101
    _, xs, xinvs, re, im = _tables(q)
    rng = np.random.default_rng(0)
    ms = rng.integers(0, q, 50).astype(np.int64)
    ns = rng.integers(0, q, 50).astype(np.int64)
    a = compiled.unit_sum_many(ms, ns, q, xs, xinvs, re, im)
    b = pure.unit_sum_many(ms, ns, q, xs, xinvs, re, im)
    assert np.allclose(a, b, atol=1e-9 * q)


@pytest.mark.parametrize("q", [2, 7, 12, 60, 211])
def test_j_kernels_parity(q):
    inv = pure.inverse_table(q)
    for K in {1, 2, q // 2, q}:
        K = max(1, K)
        assert np.array_equal(compiled.j_hist_brute(q, K, inv),
                              pure.j_hist_brute(q, K, inv))
        assert np.array_equal(compiled.j_hist_fast(q, K, inv),
                              pure.j_hist_fast(q, K, inv))
        for a in range(0, q, max(1, q // 7)):
            assert compiled.j_brute(q, a, K, inv) == pure.j_brute(q, a, K, inv)
            assert compiled.j_fast(q, a, K, inv) == pure.j_fast(q, a, K, inv)


def test_counting_kernels_parity():
    rng = np.random.default_rng(5)
    p = 211
    elems = np.sort(rng.choice(p, 25, replace=False)).astype(np.int64)
    assert np.array_equal(compiled.diff_hist(elems, p), pure.diff_hist(elems, p))
    r = pure.diff_hist(elems, p)
    vals = np.nonzero(r)[0].astype(np.int64)
    cnts = r[vals]
    assert compiled.sparse_product_pair_count(vals, cnts, p) == \
        pure.sparse_product_pair_count(vals, cnts, p)
    assert compiled.interval_product_count(3, 20, 5, 30, p) == \
        pure.interval_product_count(3, 20, 5, 30, p)
    cs = np.sort(rng.choice(p, 12, replace=False)).astype(np.int64)
    assert compiled.mixed_product_count(2, 15, cs, p) == \
        pure.mixed_product_count(2, 15, cs, p)


def test_tau_sieve_parity():
    assert np.array_equal(compiled.tau_sieve(500), pure.tau_sieve(500))
