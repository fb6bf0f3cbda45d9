"""Sweep targets: one entry per verified bound family.

A target knows how to (a) run its deterministic calibration grid, returning
the maximum of |LHS| / structured-RHS so the harness can fix the explicit
constant, and (b) evaluate one sweep grid point into a RatioRecord.

Column conventions for non-bilinear targets (the record schema is fixed):
the product-transform target stores (x, y, z) in (M, N, K); the divisor
targets store X in N and the family length A in M; the counting targets
store interval sizes in (M, N); moment targets put alpha into `variant`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from kloosterlab import bilinear, counting, divisor, expsums, moments
from kloosterlab.bilinear import BoundSpec, OutOfRange, bound_rhs
from kloosterlab.counting import CountQuery
from kloosterlab.harness.reports import RatioRecord, make_record, skipped_record
from kloosterlab.harness.rng import rng_for
from kloosterlab.modarith import as_modulus, factorize, is_prime
from kloosterlab.weights import Interval, WeightVector, make_weights

POLYGON_VERTICES = ((0.0, 0.5), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0),
                    (0.5, 0.25), (0.5, 1.0 / 3.0), (0.4, 0.4))

CORNER_DELTA = 0.1   # recorded by the set-type1-corner calibration entry


def next_prime(n: int) -> int:
    n = max(n, 2)
    while not is_prime(n):
        n += 1
    return n


def _pow_len(q: int, e: float) -> int:
    return max(1, min(q, math.ceil(q**e)))


def _unit(q: int, rng) -> int:
    while True:
        a = int(rng.integers(1, q)) if q > 2 else 1
        if math.gcd(a, q) == 1:
            return a


@dataclass(frozen=True)
class TargetSpec:
    name: str
    kind: str                       # "bound" | "structured" | "parameter"
    calibrate: Callable             # (cap, epsilon, seed) -> float
    grid: Callable                  # (block: dict) -> list[dict]
    evaluate: Callable              # (point, seed, epsilon, constant, scheme)
    block_keys: frozenset


def _check_block(block: dict, allowed: frozenset, name: str) -> None:
    unknown = set(block) - allowed - {"target", "samples"}
    if unknown:
        raise ValueError(f"unknown keys {sorted(unknown)} in sweep block "
                         f"for target {name!r}")


# ---------------------------------------------------------------------------
# complete Type I family and its relatives (type2 trivial / polya-vinogradov)


def _cal_moduli(cap: int) -> list[int]:
    """Deterministic modulus mix for calibration: primes, prime powers,
    smooth composites, scaled to the cap."""
    qs = {next_prime(max(3, cap // 4)), next_prime(max(5, cap // 2)),
          next_prime(max(7, cap - 10))}
    smooth = 60
    while smooth * 2 <= cap:
        smooth *= 2
    qs.update({smooth, 2 * (cap // 2), 36, 64, 125})
    p2 = int(math.isqrt(cap))
    qs.add(next_prime(max(3, p2)) ** 2)
    return sorted(x for x in qs if 4 <= x <= cap)


def _bilinear_point_list(block: dict, name: str, need_prime: bool,
                         gcd_extra: bool) -> list[dict]:
    moduli = [next_prime(x) for x in block.get("primes_near", [])]
    moduli += [int(x) for x in block.get("moduli", [])]
    if need_prime:
        bad = [q for q in moduli if not is_prime(q)]
        if bad:
            raise ValueError(f"{name} needs prime moduli, got {bad}")
    exps = [tuple(e) for e in block["exponents"]]
    samples = int(block.get("samples", 1))
    pts = []
    for q in sorted(set(moduli)):
        d_list = [1]
        if gcd_extra and block.get("gcd_extra", name.startswith("type1-")):
            fq = factorize(q)
            if fq.factors and fq.factors[0][0] < q:
                d_list.append(fq.factors[0][0])
        for mu, nu in exps:
            for d in d_list:
                for s in range(samples):
                    pts.append({"q": q, "M": _pow_len(q, mu), "N": _pow_len(q, nu),
                                "d": d, "sample": s})
    return pts


def _type1_eval(variant: str):
    tag = f"type1-{variant}"

    def evaluate(point, seed, epsilon, constant, scheme) -> RatioRecord:
        q, M, N, d, s = point["q"], point["M"], point["N"], point["d"], point["sample"]
        rng = rng_for(seed, tag, q, M, N, d, s, scheme)
        a = d * _unit(q // d, rng) % q if d > 1 else _unit(q, rng)
        alpha = make_weights(scheme, Interval(int(rng.integers(0, q)), M), rng)
        J = Interval(int(rng.integers(0, q)), N)
        lhs = abs(bilinear.type1_sum(alpha, J, a, q, "dft").value)
        rhs = bound_rhs(BoundSpec(tag, epsilon, constant),
                        {"q": q, "M": M, "N": N, "d": math.gcd(a, q),
                         "norm2_alpha": alpha.norm2()})
        return make_record(tag, lhs=lhs, rhs=rhs, q=q, M=M, N=N, a=a,
                           variant=variant, sample=s)

    return evaluate


def _type1_grid(variant: str):
    name = f"type1-{variant}"

    def grid(block: dict) -> list[dict]:
        _check_block(block, frozenset({"moduli", "primes_near", "exponents",
                                       "gcd_extra"}), name)
        return _bilinear_point_list(block, name, need_prime=False, gcd_extra=True)

    return grid


def _type1_calibrate(variant: str):
    evaluate = _type1_eval(variant)

    def calibrate(cap: int, epsilon: float, seed: int) -> float:
        block = {"moduli": _cal_moduli(cap), "exponents": POLYGON_VERTICES,
                 "gcd_extra": True, "samples": 2}
        pts = _type1_grid(variant)(block)
        worst = 0.0
        for pt in pts:
            for scheme in ("rademacher", "ones"):
                rec = evaluate(pt, seed, epsilon, 1.0, scheme)
                worst = max(worst, rec.ratio)
        return worst

    return calibrate


def _product_eval(point, seed, epsilon, constant, scheme) -> RatioRecord:
    tag = "type1-product"
    q, M, N, s = point["q"], point["M"], point["N"], point["sample"]
    rng = rng_for(seed, tag, q, M, N, s, scheme)
    a = _unit(q, rng)
    # supports kept inside the units so every evaluation path applies
    m0 = int(rng.integers(0, q - M)) if q > M else 0
    n0 = int(rng.integers(0, q - N)) if q > N else 0
    alpha = make_weights(scheme, Interval(m0, M), rng)
    lhs = abs(bilinear.product_type1_sum(alpha, Interval(n0, N), a, q).value)
    rhs = bound_rhs(BoundSpec(tag, epsilon, constant),
                    {"q": q, "M": M, "N": N, "norm2_alpha": alpha.norm2()})
    return make_record(tag, lhs=lhs, rhs=rhs, q=q, M=M, N=N, a=a, sample=s)


def _product_grid(block: dict) -> list[dict]:
    _check_block(block, frozenset({"primes_near", "moduli", "exponents"}),
                 "type1-product")
    return _bilinear_point_list(block, "type1-product", need_prime=True,
                                gcd_extra=False)


def _product_calibrate(cap, epsilon, seed) -> float:
    qs = sorted({next_prime(max(11, cap // 4)), next_prime(max(13, cap // 2)),
                 next_prime(max(17, cap - 10))})
    block = {"moduli": qs, "exponents": POLYGON_VERTICES, "samples": 2}
    worst = 0.0
    for pt in _product_grid(block):
        for scheme in ("rademacher", "ones"):
            worst = max(worst, _product_eval(pt, seed, epsilon, 1.0, scheme).ratio)
    return worst


def _type2_eval(tag: str):
    def evaluate(point, seed, epsilon, constant, scheme) -> RatioRecord:
        q, M, N, s = point["q"], point["M"], point["N"], point["sample"]
        rng = rng_for(seed, tag, q, M, N, s, scheme)
        a = _unit(q, rng)
        alpha = make_weights(scheme, Interval(int(rng.integers(0, q)), M), rng)
        beta = make_weights(scheme, Interval(int(rng.integers(0, q)), N), rng)
        lhs = abs(bilinear.type2_sum(alpha, beta, a, q, "dft").value)
        rhs = bound_rhs(BoundSpec(tag, epsilon, constant),
                        {"q": q, "M": M, "N": N,
                         "norminf_alpha": alpha.norm_inf(),
                         "norminf_beta": beta.norm_inf()})
        return make_record(tag, lhs=lhs, rhs=rhs, q=q, M=M, N=N, a=a, sample=s)

    return evaluate


def _type2_grid(tag: str):
    def grid(block: dict) -> list[dict]:
        _check_block(block, frozenset({"moduli", "primes_near", "exponents"}), tag)
        return _bilinear_point_list(block, tag, need_prime=False, gcd_extra=False)

    return grid


def _type2_calibrate(tag: str):
    evaluate = _type2_eval(tag)
    grid = _type2_grid(tag)

    def calibrate(cap, epsilon, seed) -> float:
        block = {"moduli": _cal_moduli(cap), "exponents": POLYGON_VERTICES,
                 "samples": 2}
        worst = 0.0
        for pt in grid(block):
            for scheme in ("rademacher", "ones"):
                worst = max(worst, evaluate(pt, seed, epsilon, 1.0, scheme).ratio)
        return worst

    return calibrate


# ---------------------------------------------------------------------------
# incomplete Type II family over divisor-restricted units


def _incomplete_eval(variant: str):
    tag = f"type2-incomplete-{variant}"

    def evaluate(point, seed, epsilon, constant, scheme) -> RatioRecord:
        q, r, K, M, s = (point["q"], point["r"], point["K"], point["M"],
                         point["sample"])
        rng = rng_for(seed, tag, q, r, K, M, s, scheme)
        c = _unit(r, rng)
        a = _unit(q, rng)
        try:
            rhs = bound_rhs(BoundSpec(tag, epsilon, constant),
                            {"q": q, "r": r, "M": M, "K": K,
                             "norm2_alpha": math.sqrt(M), "norminf_gamma": 1.0})
        except OutOfRange as exc:
            return skipped_record(tag, str(exc), q=q, M=M, K=K, r=r, c=c, a=a,
                                  variant=variant, sample=s)
        ks = counting.admissible_units(q, r, c, K)
        if len(ks) == 0:
            return skipped_record(tag, "no admissible k", q=q, M=M, K=K, r=r,
                                  c=c, a=a, variant=variant, sample=s)
        alpha = make_weights(scheme, Interval(int(rng.integers(0, q)), M), rng)
        gamma = make_weights(scheme, ks, rng)
        lhs = abs(bilinear.incomplete_sum(alpha, gamma, a, q, "dft").value)
        rhs = bound_rhs(BoundSpec(tag, epsilon, constant),
                        {"q": q, "r": r, "M": M, "K": K,
                         "norm2_alpha": alpha.norm2(),
                         "norminf_gamma": gamma.norm_inf()})
        return make_record(tag, lhs=lhs, rhs=rhs, q=q, M=M, K=K, r=r, c=c, a=a,
                           variant=variant, sample=s)

    return evaluate


def _incomplete_grid(variant: str):
    name = f"type2-incomplete-{variant}"

    def grid(block: dict) -> list[dict]:
        _check_block(block, frozenset({"moduli", "r_divs", "k_exponents",
                                       "m_exponents"}), name)
        pts = []
        samples = int(block.get("samples", 1))
        for q in sorted(set(int(x) for x in block["moduli"])):
            divs = factorize(q).divisors()
            for f in block.get("r_divs", [1, 2]):
                if q % f:
                    continue
                r = q // f
                if r < 2 or r not in divs:
                    continue
                for kappa in block.get("k_exponents", [0.5, 1.0]):
                    K = _pow_len(r, kappa)
                    for mu in block.get("m_exponents", [0.5]):
                        for s in range(samples):
                            pts.append({"q": q, "r": r, "K": K,
                                        "M": _pow_len(q, mu), "sample": s})
        return pts

    return grid


def _incomplete_calibrate(variant: str):
    evaluate = _incomplete_eval(variant)
    grid = _incomplete_grid(variant)

    def calibrate(cap, epsilon, seed) -> float:
        moduli = [q for q in _cal_moduli(cap) if not is_prime(q)]
        block = {"moduli": moduli, "r_divs": [1, 2, 4, 8],
                 "k_exponents": [0.3, 0.6, 1.0],
                 "m_exponents": [0.25, 0.5, 1.0], "samples": 2}
        worst = 0.0
        for pt in grid(block):
            for scheme in ("rademacher", "ones"):
                rec = evaluate(pt, seed, epsilon, 1.0, scheme)
                if rec.status != "skipped":
                    worst = max(worst, rec.ratio)
        return worst

    return calibrate


# ---------------------------------------------------------------------------
# arbitrary-set bilinear forms over prime fields (per fixed r)


def _set_incomplete_eval(tag: str, r: int, small_m: bool):
    def evaluate(point, seed, epsilon, constant, scheme) -> RatioRecord:
        p, M, K, s = point["q"], point["M"], point["K"], point["sample"]
        rng = rng_for(seed, tag, p, M, K, s, scheme)
        a = _unit(p, rng)
        try:
            rhs = bound_rhs(BoundSpec(tag.rsplit("-r", 1)[0], epsilon, constant),
                            {"p": p, "M": M, "K": K, "r": r,
                             "norminf_alpha": 1.0, "norminf_gamma": 1.0})
        except OutOfRange as exc:
            return skipped_record(tag, str(exc), q=p, M=M, K=K, r=r, a=a, sample=s)
        mset = np.sort(rng.choice(p, size=M, replace=False)).astype(np.int64)
        alpha = make_weights(scheme, mset, rng)
        k0 = int(rng.integers(0, p - 1 - K)) if p - 1 > K else 0
        gamma = make_weights(scheme, Interval(k0, K), rng)
        lhs = abs(bilinear.set_incomplete_sum(alpha, gamma, a, p, "dft").value)
        return make_record(tag, lhs=lhs, rhs=rhs, q=p, M=M, K=K, r=r, a=a, sample=s)

    return evaluate


def _set_incomplete_grid(tag: str, r: int, small_m: bool):
    def grid(block: dict) -> list[dict]:
        _check_block(block, frozenset({"primes_near", "m_exponents",
                                       "k_exponents"}), tag)
        pts = []
        samples = int(block.get("samples", 1))
        for x in block["primes_near"]:
            p = next_prime(int(x))
            mu_list = block.get("m_exponents", [0.3, 0.45])
            for mu in mu_list:
                M = _pow_len(p, min(mu, 0.5) if small_m else mu)
                for kappa in block.get("k_exponents", [1.0 / max(r, 1), 0.6]):
                    K = min(_pow_len(p, kappa), p - 1)
                    for s in range(samples):
                        pts.append({"q": p, "M": M, "K": K, "sample": s})
        return pts

    return grid


def _set_incomplete_calibrate(tag: str, r: int, small_m: bool):
    evaluate = _set_incomplete_eval(tag, r, small_m)
    grid = _set_incomplete_grid(tag, r, small_m)

    def calibrate(cap, epsilon, seed) -> float:
        block = {"primes_near": [max(11, cap // 4), max(13, cap // 2),
                                 max(17, cap - 10)],
                 "m_exponents": [0.3, 0.45],
                 "k_exponents": sorted({1.0 / r if r > 1 else 1.0, 0.6, 0.9}),
                 "samples": 2}
        worst = 0.0
        for pt in grid(block):
            for scheme in ("rademacher", "ones"):
                rec = evaluate(pt, seed, epsilon, 1.0, scheme)
                if rec.status != "skipped":
                    worst = max(worst, rec.ratio)
        return worst

    return calibrate


def _set_type1_eval(tag: str, r: int, small_m: bool):
    def evaluate(point, seed, epsilon, constant, scheme) -> RatioRecord:
        p, M, N, s = point["q"], point["M"], point["N"], point["sample"]
        rng = rng_for(seed, tag, p, M, N, s, scheme)
        try:
            rhs = bound_rhs(BoundSpec(tag.rsplit("-r", 1)[0], epsilon, constant),
                            {"p": p, "M": M, "N": N, "r": r, "norminf_alpha": 1.0})
        except OutOfRange as exc:
            return skipped_record(tag, str(exc), q=p, M=M, N=N, r=r, sample=s)
        mset = np.sort(rng.choice(p, size=M, replace=False)).astype(np.int64)
        alpha = make_weights(scheme, mset, rng)
        n0 = int(rng.integers(0, p - 1 - N)) if p - 1 > N else 0
        lhs = abs(bilinear.set_type1_sum(alpha, Interval(n0, N), p, "dft").value)
        return make_record(tag, lhs=lhs, rhs=rhs, q=p, M=M, N=N, r=r, sample=s)

    return evaluate


def _set_type1_grid(tag: str, r: int, small_m: bool):
    def grid(block: dict) -> list[dict]:
        _check_block(block, frozenset({"primes_near", "m_exponents", "n_fracs"}),
                     tag)
        pts = []
        samples = int(block.get("samples", 1))
        for x in block["primes_near"]:
            p = next_prime(int(x))
            for mu in block.get("m_exponents", [0.3, 0.45]):
                M = _pow_len(p, min(mu, 0.5) if small_m else mu)
                for frac in block.get("n_fracs", [0.5, 1.0]):
                    # floor keeps the frac = 1 boundary inside the valid range
                    N = max(1, min(p - 1, math.floor(p ** ((1 - 1 / r) * frac))))
                    for s in range(samples):
                        pts.append({"q": p, "M": M, "N": N, "sample": s})
        return pts

    return grid


def _set_type1_calibrate(tag: str, r: int, small_m: bool):
    evaluate = _set_type1_eval(tag, r, small_m)
    grid = _set_type1_grid(tag, r, small_m)

    def calibrate(cap, epsilon, seed) -> float:
        block = {"primes_near": [max(11, cap // 4), max(13, cap // 2),
                                 max(17, cap - 10)],
                 "m_exponents": [0.3, 0.45], "n_fracs": [0.4, 0.7, 1.0],
                 "samples": 2}
        worst = 0.0
        for pt in grid(block):
            for scheme in ("rademacher", "ones"):
                rec = evaluate(pt, seed, epsilon, 1.0, scheme)
                if rec.status != "skipped":
                    worst = max(worst, rec.ratio)
        return worst

    return calibrate


# ---------------------------------------------------------------------------
# moments of short Kloosterman averages (per fixed r)


def _moment_eval(tag: str, r: int):
    def evaluate(point, seed, epsilon, constant, scheme) -> RatioRecord:
        p, N, s = point["q"], point["N"], point["sample"]
        alpha = point["alpha"]
        variant = f"alpha={alpha:.6g}"
        try:
            rhs = moments.moment_bound_rhs(p, N, r, alpha, epsilon, constant)
        except (OutOfRange, moments.OutOfRange) as exc:
            return skipped_record(tag, str(exc), q=p, N=N, r=r,
                                  variant=variant, sample=s)
        prof = _moment_profile_cached(p, N)
        lhs = moments.moment(prof, alpha)
        return make_record(tag, lhs=lhs, rhs=rhs, q=p, N=N, r=r,
                           variant=variant, sample=s)

    return evaluate


@lru_cache(maxsize=64)
def _moment_profile_cached(p: int, N: int) -> moments.MomentProfile:
    return moments.short_sum_profile(p, Interval(0, N))


def _moment_grid(tag: str, r: int):
    def grid(block: dict) -> list[dict]:
        _check_block(block, frozenset({"primes_near", "n_fracs", "alpha_points"}),
                     tag)
        pts = []
        n_alpha = int(block.get("alpha_points", 5))
        alphas = np.linspace(1.0, 12.0 * r / 7.0, n_alpha)
        for x in block["primes_near"]:
            p = next_prime(int(x))
            if p == 2:
                continue
            for frac in block.get("n_fracs", [0.5, 1.0]):
                N = max(1, min(p - 1, math.floor(p ** ((1 - 1 / r) * frac))))
                for alpha in alphas:
                    pts.append({"q": p, "N": N, "alpha": float(alpha), "sample": 0})
        return pts

    return grid


def _moment_calibrate(tag: str, r: int):
    evaluate = _moment_eval(tag, r)
    grid = _moment_grid(tag, r)

    def calibrate(cap, epsilon, seed) -> float:
        block = {"primes_near": [max(11, cap // 4), max(13, cap // 2),
                                 max(17, cap - 10)],
                 "n_fracs": [0.4, 0.7, 1.0], "alpha_points": 5}
        worst = 0.0
        for pt in grid(block):
            rec = evaluate(pt, seed, epsilon, 1.0, "ones")
            if rec.status != "skipped":
                worst = max(worst, rec.ratio)
        return worst

    return calibrate


# ---------------------------------------------------------------------------
# product-transform bound (structured: no epsilon factor)


def _t_points(q: int, rng, count: int) -> list[tuple[int, int, int]]:
    """Gcd-stratified (x, y, z) triples for one modulus."""
    fq = factorize(q)
    pts = [(int(rng.integers(0, q)), int(rng.integers(0, q)),
            int(rng.integers(0, q))) for _ in range(count)]
    x = int(rng.integers(0, q))
    pts += [(x, x, 0), (x, x, int(rng.integers(0, q)))]
    for p, j in fq.factors[:2]:
        d = p ** max(1, j // 2)
        pts.append((d * int(rng.integers(1, max(2, q // d))) % q,
                    d * int(rng.integers(1, max(2, q // d))) % q,
                    int(rng.integers(0, q))))
        pts.append((int(rng.integers(0, q)), int(rng.integers(0, q)),
                    d * int(rng.integers(0, max(1, q // d)))))
    return pts


def _t_eval(point, seed, epsilon, constant, scheme) -> RatioRecord:
    q, x, y, z, s = point["q"], point["M"], point["N"], point["K"], point["sample"]
    lhs = abs(expsums.t_transform_fast(x, y, z, q).value)
    rhs = constant * expsums.t_bound_rhs(x, y, z, q)
    return make_record("t-bound", lhs=lhs, rhs=rhs, q=q, M=x, N=y, K=z, sample=s)


def _t_grid(block: dict) -> list[dict]:
    _check_block(block, frozenset({"q_max", "count", "q_min"}), "t-bound")
    q_max = int(block["q_max"])
    q_min = int(block.get("q_min", 2))
    count = int(block.get("count", 1000))
    rng = rng_for(0, "t-grid", q_min, q_max, count)
    pts = []
    for i in range(count):
        q = int(rng.integers(q_min, q_max + 1))
        x, y, z = (int(v) for v in rng.integers(0, q, 3))
        pts.append({"q": q, "M": x, "N": y, "K": z, "sample": i})
    return pts


def _t_prime_exhaustive(p: int) -> float:
    """Exact max ratio over all (x, y, z) with z a unit mod prime p.

    With a = x/z and b = y/z the transform is K_p(a, b) e_p(a + b) - 1;
    scaling folds K_p(a, b) with unit a, b into K_p(1, ab), so scanning
    (a, t = ab) covers every unit case exactly.
    """
    prof = expsums.kloosterman_profile(1, p)  # K_p(1, t) for all t
    t = np.arange(p, dtype=np.int64)
    rhs_unit = 4.0 * math.sqrt(p)  # d(p)^2 sqrt(p) with unit gcds
    worst = 0.0
    inv = expsums.tables(p).inv
    for a in range(1, p):
        s = (a + t * int(inv[a])) % p
        cand = np.abs(prof * np.exp(2j * np.pi * s / p) - 1.0)
        # only t in (0, p) arises as a product of two units
        worst = max(worst, float(cand[1:].max()) / rhs_unit)
    return worst


def _t_prime_power_exhaustive(q: int) -> float:
    """Exact max ratio over all (x, y, z) mod a prime power q: for each
    (x, y) one transform yields T(x, y, z) for every z at once."""
    worst = 0.0
    profiles = [expsums.kloosterman_profile(x, q) for x in range(q)]
    zarr = np.arange(q, dtype=np.int64)
    dsq = float(as_modulus(q).divisor_count ** 2)
    for x in range(q):
        for y in range(x, q):
            vals = np.abs(np.fft.fft(profiles[x] * profiles[y])) / q
            g1 = math.gcd(math.gcd(x, y), q)
            rest = q // g1
            g2 = np.gcd(np.gcd((x - y) % rest, zarr % rest), rest) if rest > 1 \
                else np.ones(q, dtype=np.int64)
            rhs = dsq * np.sqrt(g1 * g2 * float(q))
            worst = max(worst, float((vals / rhs).max()))
    return worst


def _t_calibrate(cap, epsilon, seed) -> float:
    worst = 0.0
    for p in range(2, cap + 1):
        if is_prime(p):
            worst = max(worst, _t_prime_exhaustive(p))
    for p in (2, 3, 5, 7, 11):
        j = 2
        while p**j <= min(cap, 128):
            worst = max(worst, _t_prime_power_exhaustive(p**j))
            j += 1
    for q in range(2, cap + 1):
        rng = rng_for(seed, "t-bound-cal", q)
        for x, y, z in _t_points(q, rng, 6):
            rec = _t_eval({"q": q, "M": x % q, "N": y % q, "K": z % q,
                           "sample": 0}, seed, epsilon, 1.0, "ones")
            worst = max(worst, rec.ratio)
    return worst


# ---------------------------------------------------------------------------
# unit-restricted Gauss sum bound (structured)


def _gauss_eval(point, seed, epsilon, constant, scheme) -> RatioRecord:
    q, m, n, s = point["q"], point["M"], point["N"], point["sample"]
    lhs = abs(expsums.gauss_star(m, n, q).value)
    rhs = constant * expsums.gauss_unit_bound_rhs(m, n, q)
    return make_record("gauss-unit-bound", lhs=lhs, rhs=rhs, q=q, M=m, N=n,
                       sample=s)


def _gauss_grid(block: dict) -> list[dict]:
    _check_block(block, frozenset({"q_max", "count", "q_min"}), "gauss-unit-bound")
    rng = rng_for(0, "gauss-grid", block.get("q_min", 2), block["q_max"])
    pts = []
    for i in range(int(block.get("count", 500))):
        q = int(rng.integers(int(block.get("q_min", 2)), int(block["q_max"]) + 1))
        m, n = (int(v) for v in rng.integers(0, q, 2))
        pts.append({"q": q, "M": m, "N": n, "sample": i})
    return pts


def _gauss_exhaustive(q: int) -> float:
    """Exact max ratio over ALL (m, n) mod q: one row-wise transform per m
    produces the unit-restricted Gauss sum at every n."""
    a = np.arange(q, dtype=np.int64)
    units = a[np.gcd(a, q) == 1]
    rows = np.zeros((q, q), dtype=np.complex128)
    sq = (units * units % q).astype(np.int64)
    for m in range(q):
        rows[m, units] = np.exp(2j * np.pi * (m * sq % q) / q)
    vals = np.abs(np.fft.fft(rows, axis=1))  # entry (m, k) = |G*(m, -k; q)|
    gq = np.gcd(a, q)
    g = np.gcd.outer(gq, gq)  # gcd(m, n, q)
    rhs = as_modulus(q).divisor_count * np.sqrt(g * float(q))
    return float((vals / rhs).max())


def _gauss_calibrate(cap, epsilon, seed) -> float:
    worst = 0.0
    for q in range(2, min(cap, 192) + 1):
        worst = max(worst, _gauss_exhaustive(q))
    for q in range(2, cap + 1):
        rng = rng_for(seed, "gauss-cal", q)
        fq = factorize(q)
        cases = [(int(rng.integers(0, q)), int(rng.integers(0, q)))
                 for _ in range(5)]
        cases += [(0, int(rng.integers(0, q))), (int(rng.integers(0, q)), 0)]
        for p, j in fq.factors[:2]:
            d = p ** max(1, j // 2)
            cases.append((d * int(rng.integers(1, max(2, q // d))) % q,
                          d * int(rng.integers(1, max(2, q // d))) % q))
        for m, n in cases:
            rec = _gauss_eval({"q": q, "M": m, "N": n, "sample": 0},
                              seed, epsilon, 1.0, "ones")
            worst = max(worst, rec.ratio)
    return worst


# ---------------------------------------------------------------------------
# reciprocal-difference counting bounds (structured)


@lru_cache(maxsize=4)
def _jcount_scan(cap: int) -> tuple[float, float]:
    """Exhaustive max of count/RHS over all q <= cap, all a, all K, for the
    small-K and large-K pointwise envelopes in one incremental pass."""
    from kloosterlab._accel import kernels

    worst_small = 0.0
    worst_large = 0.0
    for q in range(2, cap + 1):
        inv = kernels.inverse_table(q)
        gcds = np.gcd(np.arange(q, dtype=np.int64), q).astype(np.float64)
        root_g = np.sqrt(gcds)
        sq = math.sqrt(q)
        cnt = np.zeros(q, dtype=np.int64)
        invs = np.empty(q, dtype=np.int64)
        n_inv = 0
        for K in range(1, q + 1):
            v = int(inv[K % q]) if K % q else 0
            if v:
                if n_inv:
                    dpos = (v - invs[:n_inv]) % q
                    np.add.at(cnt, dpos, 1)
                    np.add.at(cnt, (q - dpos) % q, 1)
                cnt[0] += 1
                invs[n_inv] = v
                n_inv += 1
            rhs_small = K**1.5 / sq + K * K * gcds / q + 1.0
            rhs_large = K * K / q + K * root_g / sq + sq
            worst_small = max(worst_small, float((cnt / rhs_small).max()))
            worst_large = max(worst_large, float((cnt / rhs_large).max()))
    return worst_small, worst_large


def _jcount_eval(which: str):
    tag = f"jcount-{which}"
    bound = counting.bound_j_hb if which == "small-k" else counting.bound_j_new

    def evaluate(point, seed, epsilon, constant, scheme) -> RatioRecord:
        q, a, K, s = point["q"], point["a"], point["K"], point["sample"]
        qr = CountQuery.of(q, a, K)
        lhs = float(counting.j_count_fast(qr))
        rhs = constant * bound(qr)
        return make_record(tag, lhs=lhs, rhs=rhs, q=q, K=K, a=a, sample=s)

    return evaluate


def _jcount_grid(which: str):
    tag = f"jcount-{which}"

    def grid(block: dict) -> list[dict]:
        _check_block(block, frozenset({"q_min", "q_max", "q_count",
                                       "k_exponents"}), tag)
        rng = rng_for(0, tag + "-grid", block.get("q_min", 2), block["q_max"])
        pts = []
        qs = sorted(int(rng.integers(int(block.get("q_min", 2)),
                                     int(block["q_max"]) + 1))
                    for _ in range(int(block.get("q_count", 30))))
        for i, q in enumerate(qs):
            fq = factorize(q)
            a_list = [0, 1, _unit(q, rng) if q > 2 else 1]
            if fq.factors:
                a_list.append(fq.factors[0][0] % q)
            for kappa in block.get("k_exponents", [0.3, 0.5, 0.7, 1.0]):
                K = _pow_len(q, kappa)
                for a in sorted(set(a_list)):
                    pts.append({"q": q, "a": a, "K": K, "sample": i})
        return pts

    return grid


def _jcount_calibrate(which: str):
    def calibrate(cap, epsilon, seed) -> float:
        small, large = _jcount_scan(cap)
        return small if which == "small-k" else large

    return calibrate


def _javg_eval(point, seed, epsilon, constant, scheme) -> RatioRecord:
    q, a, N, K, s = point["q"], point["a"], point["N"], point["K"], point["sample"]
    lhs = float(counting.j_avg(q, a, N, K))
    rhs = constant * counting.bound_j_avg(q, a, N, K)
    return make_record("jcount-average", lhs=lhs, rhs=rhs, q=q, N=N, K=K, a=a,
                       sample=s)


def _javg_grid(block: dict) -> list[dict]:
    _check_block(block, frozenset({"moduli", "k_exponents", "n_exponents"}),
                 "jcount-average")
    pts = []
    for q in sorted(set(int(x) for x in block["moduli"])):
        rng = rng_for(0, "javg-grid", q)
        for kappa in block.get("k_exponents", [0.4, 0.7, 1.0]):
            for ne in block.get("n_exponents", [0.4, 0.8]):
                for i in range(2):
                    pts.append({"q": q, "a": _unit(q, rng), "N": _pow_len(q, ne),
                                "K": _pow_len(q, kappa), "sample": i})
    return pts


def _javg_calibrate(cap, epsilon, seed) -> float:
    qs = sorted({max(2, cap // 8), max(3, cap // 4), max(5, cap // 2),
                 max(7, cap - 1), next_prime(max(5, cap // 2)),
                 next_prime(max(7, cap - 10))})
    block = {"moduli": [q for q in qs if q <= cap],
             "k_exponents": [0.3, 0.5, 0.7, 1.0],
             "n_exponents": [0.3, 0.6, 1.0]}
    worst = 0.0
    for pt in _javg_grid(block):
        worst = max(worst, _javg_eval(pt, seed, epsilon, 1.0, "ones").ratio)
    return worst


# ---------------------------------------------------------------------------
# additive-combinatorics counting bounds over F_p


def _dp_eval(point, seed, epsilon, constant, scheme) -> RatioRecord:
    p, M, s = point["q"], point["M"], point["sample"]
    rng = rng_for(seed, "dp-bound", p, M, s)
    aset = np.sort(rng.choice(p, size=M, replace=False)).astype(np.int64)
    lhs = float(counting.dp_count(aset, p))
    rhs = constant * counting.dp_bound_rhs(M) * p**epsilon
    return make_record("dp-bound", lhs=lhs, rhs=rhs, q=p, M=M, sample=s)


def _dp_grid(block: dict) -> list[dict]:
    _check_block(block, frozenset({"primes_near", "sizes", "count"}), "dp-bound")
    pts = []
    for x in block["primes_near"]:
        p = next_prime(int(x))
        cap_size = min(counting.DP_SET_CAP, math.isqrt(p))
        sizes = block.get("sizes") or sorted({2, max(3, cap_size // 2), cap_size})
        for M in sizes:
            if M > cap_size:
                continue
            for s in range(int(block.get("count", 2))):
                pts.append({"q": p, "M": int(M), "sample": s})
    return pts


def _dp_calibrate(cap, epsilon, seed) -> float:
    block = {"primes_near": [max(7, cap // 4), max(11, cap // 2),
                             max(13, cap - 10)], "count": 3}
    worst = 0.0
    for pt in _dp_grid(block):
        worst = max(worst, _dp_eval(pt, seed, epsilon, 1.0, "ones").ratio)
    return worst


def _prod_eval(point, seed, epsilon, constant, scheme) -> RatioRecord:
    p, A, B, s = point["q"], point["M"], point["N"], point["sample"]
    rng = rng_for(seed, "prod-bound", p, A, B, s)
    a0 = int(rng.integers(0, p - A))
    b0 = int(rng.integers(0, p - B))
    lhs = float(counting.product_congruence_count(Interval(a0, A),
                                                  Interval(b0, B), p))
    rhs = constant * counting.product_bound_rhs(A, B, p) * p**epsilon
    return make_record("prod-bound", lhs=lhs, rhs=rhs, q=p, M=A, N=B, sample=s)


def _prod_grid(block: dict) -> list[dict]:
    _check_block(block, frozenset({"primes_near", "exponents", "count"}),
                 "prod-bound")
    pts = []
    for x in block["primes_near"]:
        p = next_prime(int(x))
        for ea, eb in block.get("exponents", [(0.4, 0.4), (0.5, 0.7)]):
            A, B = _pow_len(p - 1, ea), _pow_len(p - 1, eb)
            for s in range(int(block.get("count", 2))):
                pts.append({"q": p, "M": A, "N": B, "sample": s})
    return pts


def _prod_calibrate(cap, epsilon, seed) -> float:
    block = {"primes_near": [max(7, cap // 4), max(11, cap // 2),
                             max(13, cap - 10)],
             "exponents": [(0.3, 0.3), (0.5, 0.5), (0.7, 0.7), (0.4, 0.8),
                           (1.0, 1.0)],
             "count": 2}
    worst = 0.0
    for pt in _prod_grid(block):
        worst = max(worst, _prod_eval(pt, seed, epsilon, 1.0, "ones").ratio)
    return worst


def _mixed_eval(point, seed, epsilon, constant, scheme) -> RatioRecord:
    p, A, C, s = point["q"], point["M"], point["N"], point["sample"]
    rng = rng_for(seed, "mixed-bound", p, A, C, s)
    a0 = int(rng.integers(0, p - A))
    cset = np.sort(rng.choice(p, size=C, replace=False)).astype(np.int64)
    count = counting.mixed_count_N(Interval(a0, A), cset, p)
    lhs = abs(count - counting.mixed_main_term(A, C, p))
    rhs = constant * counting.mixed_error_rhs(A, C)
    return make_record("mixed-bound", lhs=lhs, rhs=rhs, q=p, M=A, N=C, sample=s)


def _mixed_grid(block: dict) -> list[dict]:
    _check_block(block, frozenset({"primes_near", "exponents", "count"}),
                 "mixed-bound")
    pts = []
    for x in block["primes_near"]:
        p = next_prime(int(x))
        for ea, ec in block.get("exponents", [(0.4, 0.4), (0.6, 0.45)]):
            A = _pow_len(p - 1, ea)
            C = max(2, min(math.isqrt(p), _pow_len(p, ec)))
            for s in range(int(block.get("count", 2))):
                pts.append({"q": p, "M": A, "N": C, "sample": s})
    return pts


def _mixed_calibrate(cap, epsilon, seed) -> float:
    block = {"primes_near": [max(7, cap // 4), max(11, cap // 2),
                             max(13, cap - 10)],
             "exponents": [(0.3, 0.3), (0.5, 0.45), (0.7, 0.5), (1.0, 0.5)],
             "count": 2}
    worst = 0.0
    for pt in _mixed_grid(block):
        worst = max(worst, _mixed_eval(pt, seed, epsilon, 1.0, "ones").ratio)
    return worst


# ---------------------------------------------------------------------------
# divisor sums in progressions


@lru_cache(maxsize=4)
def _sieve_cached(X: int) -> divisor.DivisorSieve:
    return divisor.DivisorSieve(X)


def _divfam_eval(point, seed, epsilon, constant, scheme) -> RatioRecord:
    X, q, A, s = point["N"], point["q"], point["M"], point["sample"]
    try:
        rhs = divisor.family_bound_rhs(X, A, q, epsilon, constant)
    except OutOfRange as exc:
        return skipped_record("divisor-family", str(exc), q=q, M=A, N=X, sample=s)
    rng = rng_for(seed, "divisor-family", X, q, A, s)
    I = Interval(int(rng.integers(0, q - A)), A)
    lhs = abs(divisor.family_error(_sieve_cached(X), I, q))
    return make_record("divisor-family", lhs=lhs, rhs=rhs, q=q, M=A, N=X, sample=s)


def _divfam_grid(block: dict) -> list[dict]:
    _check_block(block, frozenset({"X", "a_exponents", "count"}), "divisor-family")
    pts = []
    for X in block["X"]:
        X = int(X)
        q = next_prime(math.ceil(X ** (2.0 / 3.0)))
        for e in block.get("a_exponents", [0.4, 0.45, 0.6]):
            A = max(2, math.ceil(q**e))
            for s in range(int(block.get("count", 1))):
                pts.append({"q": q, "M": A, "N": X, "sample": s})
    return pts


def _divfam_calibrate(cap, epsilon, seed) -> float:
    qs = [next_prime(max(50, cap // 2)), next_prime(max(60, cap - 10))]
    worst = 0.0
    for q in qs:
        X = math.ceil(q**1.5)
        for e in (0.4, 0.45, 0.6, 0.9):
            A = max(2, math.ceil(q**e))
            rec = _divfam_eval({"q": q, "M": A, "N": X, "sample": 0},
                               seed, epsilon, 1.0, "ones")
            if rec.status != "skipped":
                worst = max(worst, rec.ratio)
    return worst


def _divpoint_eval(point, seed, epsilon, constant, scheme) -> RatioRecord:
    X, q, a, s = point["N"], point["q"], point["a"], point["sample"]
    if not divisor.pointwise_regime(X, q):
        return skipped_record("divisor-pointwise", "q <= X^(2/3 - 0.05)",
                              q=q, N=X, a=a, sample=s)
    lhs = abs(divisor.error_term(_sieve_cached(X), a, q))
    rhs = constant * divisor.pointwise_bound_rhs(X, q, 1.0)
    return make_record("divisor-pointwise", lhs=lhs, rhs=rhs, q=q, N=X, a=a,
                       sample=s)


def _divpoint_grid(block: dict) -> list[dict]:
    _check_block(block, frozenset({"X", "q_count"}), "divisor-pointwise")
    pts = []
    for X in block["X"]:
        X = int(X)
        q_hi = math.floor(X ** (2.0 / 3.0 - 0.05))
        rng = rng_for(0, "divpoint-grid", X)
        qs = sorted({next_prime(max(3, q_hi // 8)), next_prime(max(5, q_hi // 2)),
                     next_prime(max(7, q_hi - 20))}
                    | {int(rng.integers(10, q_hi))
                       for _ in range(int(block.get("q_count", 3)))})
        for q in qs:
            if q > q_hi:
                continue
            for i in range(3):
                pts.append({"q": q, "N": X, "a": _unit(q, rng), "sample": i})
    return pts


def _divpoint_calibrate(cap, epsilon, seed) -> float:
    """Max of |R(X; a, q)| q / X^{0.99} with every residue class scanned.

    The ratio peaks at q near the regime boundary X^{2/3 - 0.05}, which
    outgrows any fixed q cap as X grows; calibrating on small X alone
    therefore undershoots.  The scan covers the desk-scale X range directly
    (one sieve pass per X makes the full-residue scan cheap).
    """
    worst = 0.0
    for X in sorted({math.ceil(cap**1.5), 10**5, 10**6}):
        X = min(X, 10**6)
        sieve = _sieve_cached(X)
        q_hi = math.floor(X ** (2.0 / 3.0 - 0.05))
        qs = {max(3, q_hi // 2**k) for k in range(4)}
        qs |= {next_prime(max(3, q_hi // 2**k)) for k in range(4)}
        qs |= {101, next_prime(max(3, cap // 2))}
        mt_cache: dict[int, float] = {}
        for q in sorted(q for q in qs if q <= q_hi):
            mt = mt_cache.setdefault(q, divisor.main_term(X, q))
            scale = q / X**0.99
            for a in range(1, q):
                if math.gcd(a, q) != 1:
                    continue
                r = abs(sieve.class_sum(a, q) - mt)
                worst = max(worst, r * scale)
    return worst


# ---------------------------------------------------------------------------
# corner-trend parameter (stores the exponent offset delta, not a max ratio)


def _corner_calibrate(cap, epsilon, seed) -> float:
    return CORNER_DELTA


def _corner_eval(point, seed, epsilon, constant, scheme) -> RatioRecord:
    p, s = point["q"], point["sample"]
    delta = constant
    M = max(2, math.ceil(p**epsilon))
    N = max(1, min(p - 1, math.ceil(p ** (0.5 - delta))))
    rng = rng_for(seed, "set-type1-corner", p, s)
    mset = np.sort(rng.choice(p, size=M, replace=False)).astype(np.int64)
    alpha = make_weights(scheme, mset, rng)
    lhs = abs(bilinear.set_type1_sum(alpha, Interval(0, N), p, "dft").value)
    scale = M * N * math.sqrt(p)
    return RatioRecord("set-type1-corner", q=p, M=M, N=N, lhs=lhs, rhs=scale,
                       ratio=lhs / scale, status="ok", sample=s)


def _corner_grid(block: dict) -> list[dict]:
    _check_block(block, frozenset({"primes_near"}), "set-type1-corner")
    return [{"q": next_prime(int(x)), "sample": s}
            for x in block["primes_near"] for s in range(int(block.get("samples", 1)))]


# ---------------------------------------------------------------------------
# registry


def _make_targets() -> dict[str, TargetSpec]:
    out: dict[str, TargetSpec] = {}

    def add(name, kind, calibrate, grid, evaluate, keys):
        out[name] = TargetSpec(name, kind, calibrate, grid, evaluate,
                               frozenset(keys))

    for v in "abc":
        add(f"type1-{v}", "bound", _type1_calibrate(v), _type1_grid(v),
            _type1_eval(v), {"moduli", "primes_near", "exponents", "gcd_extra"})
        add(f"type2-incomplete-{v}", "bound", _incomplete_calibrate(v),
            _incomplete_grid(v), _incomplete_eval(v),
            {"moduli", "r_divs", "k_exponents", "m_exponents"})
    add("type1-product", "bound", _product_calibrate, _product_grid,
        _product_eval, {"primes_near", "moduli", "exponents"})
    for tag in ("trivial", "polya-vinogradov"):
        add(tag, "bound", _type2_calibrate(tag), _type2_grid(tag),
            _type2_eval(tag), {"moduli", "primes_near", "exponents"})
    for r in (1, 2, 3):
        add(f"set-incomplete-r{r}", "bound",
            _set_incomplete_calibrate(f"set-incomplete-r{r}", r, False),
            _set_incomplete_grid(f"set-incomplete-r{r}", r, False),
            _set_incomplete_eval(f"set-incomplete-r{r}", r, False),
            {"primes_near", "m_exponents", "k_exponents"})
        add(f"set-incomplete-smallm-r{r}", "bound",
            _set_incomplete_calibrate(f"set-incomplete-smallm-r{r}", r, True),
            _set_incomplete_grid(f"set-incomplete-smallm-r{r}", r, True),
            _set_incomplete_eval(f"set-incomplete-smallm-r{r}", r, True),
            {"primes_near", "m_exponents", "k_exponents"})
        add(f"set-type1-r{r}", "bound",
            _set_type1_calibrate(f"set-type1-r{r}", r, False),
            _set_type1_grid(f"set-type1-r{r}", r, False),
            _set_type1_eval(f"set-type1-r{r}", r, False),
            {"primes_near", "m_exponents", "n_fracs"})
        add(f"set-type1-smallm-r{r}", "bound",
            _set_type1_calibrate(f"set-type1-smallm-r{r}", r, True),
            _set_type1_grid(f"set-type1-smallm-r{r}", r, True),
            _set_type1_eval(f"set-type1-smallm-r{r}", r, True),
            {"primes_near", "m_exponents", "n_fracs"})
        add(f"moment-bound-r{r}", "bound", _moment_calibrate(f"moment-bound-r{r}", r),
            _moment_grid(f"moment-bound-r{r}", r), _moment_eval(f"moment-bound-r{r}", r),
            {"primes_near", "n_fracs", "alpha_points"})
    add("t-bound", "structured", _t_calibrate, _t_grid, _t_eval,
        {"q_max", "q_min", "count"})
    add("gauss-unit-bound", "structured", _gauss_calibrate, _gauss_grid,
        _gauss_eval, {"q_max", "q_min", "count"})
    add("jcount-small-k", "structured", _jcount_calibrate("small-k"),
        _jcount_grid("small-k"), _jcount_eval("small-k"),
        {"q_min", "q_max", "q_count", "k_exponents"})
    add("jcount-large-k", "structured", _jcount_calibrate("large-k"),
        _jcount_grid("large-k"), _jcount_eval("large-k"),
        {"q_min", "q_max", "q_count", "k_exponents"})
    add("jcount-average", "structured", _javg_calibrate, _javg_grid, _javg_eval,
        {"moduli", "k_exponents", "n_exponents"})
    add("dp-bound", "bound", _dp_calibrate, _dp_grid, _dp_eval,
        {"primes_near", "sizes", "count"})
    add("prod-bound", "bound", _prod_calibrate, _prod_grid, _prod_eval,
        {"primes_near", "exponents", "count"})
    add("mixed-bound", "structured", _mixed_calibrate, _mixed_grid, _mixed_eval,
        {"primes_near", "exponents", "count"})
    add("divisor-family", "bound", _divfam_calibrate, _divfam_grid, _divfam_eval,
        {"X", "a_exponents", "count"})
    add("divisor-pointwise", "structured", _divpoint_calibrate, _divpoint_grid,
        _divpoint_eval, {"X", "q_count"})
    add("set-type1-corner", "parameter", _corner_calibrate, _corner_grid,
        _corner_eval, {"primes_near"})
    return out


TARGETS = _make_targets()


def get_target(name: str) -> TargetSpec:
    if name not in TARGETS:
        raise KeyError(f"unknown target {name!r}; known: {sorted(TARGETS)}")
    return TARGETS[name]


def all_target_names() -> list[str]:
    return sorted(TARGETS)
