"""Arbitrary-length DFT and closed-form geometric character sums.

Conventions: ``dft(v, +1)[k] = sum_j v[j] * e(jk/L)`` and sign -1 conjugates
the kernel.  Any length is accepted (numpy's pocketfft uses Bluestein for
prime lengths), with error well under the documented 1e-9 * L * max|v|
budget at desk scale.
"""

from __future__ import annotations

import numpy as np

from kloosterlab.weights import Interval

TWO_PI = 2.0 * np.pi


def dft(v: np.ndarray, sign: int = 1) -> np.ndarray:
    """out[k] = sum_j v[j] * exp(sign * 2*pi*i*j*k / len(v))."""
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1 or len(v) < 1:
        raise ValueError("dft expects a nonempty 1-d vector")
    if sign == 1:
        return np.fft.ifft(v) * len(v)
    if sign == -1:
        return np.fft.fft(v)
    raise ValueError("sign must be +1 or -1")


def idft(v: np.ndarray) -> np.ndarray:
    """Inverse of dft(., +1): sign -1 transform divided by the length."""
    return dft(v, -1) / len(v)


def dft_naive(v: np.ndarray, sign: int = 1) -> np.ndarray:
    """O(L^2) reference evaluation; test oracle for dft()."""
    v = np.asarray(v, dtype=np.complex128)
    L = len(v)
    j = np.arange(L)
    kernel = np.exp(sign * 2j * np.pi * np.outer(j, j) / L)
    return kernel @ v


def interval_character_sum(J: Interval, y: int, q: int) -> complex:
    """sum over n in J of e_q(n*y) via the geometric closed form.

    Exactly J.length when y == 0 (mod q).
    """
    if q < 1:
        raise ValueError("modulus must be positive")
    y %= q
    if y == 0 or q == 1:
        return complex(J.length)
    n0, N = J.offset, J.length
    # phases reduced mod q before the trig keeps angles O(1) accurate
    first = TWO_PI * ((n0 + 1) * y % q) / q
    ratio_num = np.exp(2j * np.pi * (N * y % q) / q) - 1.0
    ratio_den = np.exp(2j * np.pi * y / q) - 1.0
    return complex(np.exp(1j * first) * ratio_num / ratio_den)


def interval_character_sums_all(J: Interval, q: int) -> np.ndarray:
    """Vector over y in [0, q) of interval_character_sum(J, y, q)."""
    if q == 1:
        return np.array([complex(J.length)])
    n0, N = J.offset, J.length
    y = np.arange(q, dtype=np.int64)
    out = np.empty(q, dtype=np.complex128)
    out[0] = N
    ynz = y[1:]
    first = np.exp(2j * np.pi * ((n0 + 1) * ynz % q) / q)
    num = np.exp(2j * np.pi * (N * ynz % q) / q) - 1.0
    den = np.exp(2j * np.pi * ynz / q) - 1.0
    out[1:] = first * num / den
    return out
