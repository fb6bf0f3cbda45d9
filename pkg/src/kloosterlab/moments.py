"""Moments of short Kloosterman-sum averages over a prime field.

For a prime p and an interval J, the profile maps every multiplier lambda
to sum over n in J of K_p(lambda, n).  One length-p transform of
x -> (geometric sum of J at x^{-1}) produces the whole profile at once;
the per-lambda direct summation stays available as the oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from kloosterlab.dft import dft, interval_character_sum, interval_character_sums_all
from kloosterlab.expsums import kloosterman_brute, tables
from kloosterlab.weights import Interval


class OutOfRange(ValueError):
    """Moment bound requested outside its stated parameter range."""


@dataclass(frozen=True)
class MomentProfile:
    """Magnitudes |profile(lambda)| for lambda in F_p^*, in order 1..p-1."""

    p: int
    J: Interval
    values: np.ndarray

    def __post_init__(self) -> None:
        if len(self.values) != self.p - 1:
            raise ValueError(f"profile needs exactly {self.p - 1} magnitudes")
        if np.any(self.values < 0):
            raise ValueError("magnitudes must be nonnegative")


def profile_complex(p: int, J: Interval) -> np.ndarray:
    """Complex profile over all lambda in [0, p), one length-p transform."""
    t = tables(p)
    h = np.zeros(p, dtype=np.complex128)
    gv = interval_character_sums_all(J, p)
    h[t.units] = gv[t.unit_invs]
    return dft(h, 1)


def short_sum_profile(p: int, J: Interval) -> MomentProfile:
    """Profile of |sum over n in J of K_p(lambda, n)| for lambda in F_p^*."""
    if J.length > p:
        raise ValueError("interval longer than p")
    prof = profile_complex(p, J)
    return MomentProfile(p, J, np.abs(prof[1:]))


def short_sum_direct(p: int, J: Interval, lam: int) -> complex:
    """Per-lambda direct summation over n in J; the profile oracle."""
    total = 0j
    for n in J.values().tolist():
        total += kloosterman_brute(lam, n, p).value
    return total


def moment(profile: MomentProfile, alpha: float) -> float:
    """sum over lambda in F_p^* of |profile(lambda)|^(2*alpha).

    Real powers go through exp/log, so magnitudes below 1e-12 are floored
    to zero first (true zeros occur); compensated summation keeps the
    accumulation exact to double precision.
    """
    if alpha < 1:
        raise OutOfRange("alpha >= 1")
    v = profile.values.copy()
    v[v < 1e-12] = 0.0
    nz = v[v > 0]
    return math.fsum(np.exp(2.0 * alpha * np.log(nz)).tolist())


def second_moment_full(p: int, J: Interval) -> tuple[float, float]:
    """The full second moment over all lambda in F_p, twice.

    Route one sums |profile|^2 from the transform; route two evaluates the
    same quantity by orthogonality as p * sum over units y of |g(y)|^2 with
    g the geometric interval sum.  Both are exact up to roundoff.
    """
    prof = profile_complex(p, J)
    direct = float((np.abs(prof) ** 2).sum())
    t = tables(p)
    gv = interval_character_sums_all(J, p)
    parseval = float(p * (np.abs(gv[t.units]) ** 2).sum())
    return direct, parseval


def holder_exponents(alpha: float, r: int) -> tuple[float, float]:
    """Split alpha = a1 + a2 with a1 + 7*a2/(12r) = 1 for interpolation
    between the first moment and the endpoint moment."""
    a1 = (12 * r - 7 * alpha) / (12 * r - 7)
    a2 = 12 * r * (alpha - 1) / (12 * r - 7)
    return a1, a2


def moment_bound_rhs(p: int, N: int, r: int, alpha: float,
                     epsilon: float, constant: float) -> float:
    """Calibrated right-hand side of the moment bound:
    p^{2 alpha + eps} N^{(12r-7a)/(12r-7)} (1 + N^2/p^{1-1/r})^{7(a-1)/(12r-7)}."""
    if r < 1:
        raise OutOfRange("r >= 1")
    if not 1.0 <= alpha <= 12.0 * r / 7.0 + 1e-12:
        raise OutOfRange("1 <= alpha <= 12r/7")
    if N**r > p ** (r - 1):
        raise OutOfRange("N <= p^(1-1/r)")
    shape = (float(N) ** ((12 * r - 7 * alpha) / (12 * r - 7))
             * (1.0 + N * N / p ** (1 - 1 / r)) ** (7 * (alpha - 1) / (12 * r - 7)))
    return constant * p ** (2 * alpha + epsilon) * shape
