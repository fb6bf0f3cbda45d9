"""Intervals and complex weight vectors used by the bilinear forms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Interval:
    """The block {offset+1, ..., offset+length} of consecutive integers."""

    offset: int
    length: int

    def __post_init__(self) -> None:
        if self.length < 1:
            raise ValueError(f"interval length must be >= 1, got {self.length}")

    def values(self) -> np.ndarray:
        return np.arange(self.offset + 1, self.offset + self.length + 1, dtype=np.int64)

    def residues(self, q: int) -> np.ndarray:
        return self.values() % q

    def __contains__(self, n: int) -> bool:
        return self.offset + 1 <= n <= self.offset + self.length


class WeightVector:
    """Complex coefficients on an interval or an explicit residue set."""

    def __init__(self, support: "Interval | np.ndarray", values: np.ndarray):
        if isinstance(support, Interval):
            size = support.length
        else:
            support = np.asarray(support, dtype=np.int64)
            size = len(support)
        values = np.asarray(values, dtype=np.complex128)
        if len(values) != size:
            raise ValueError(f"{len(values)} values for support of size {size}")
        if not np.all(np.isfinite(values)):
            raise ValueError("weight values must be finite")
        self.support = support
        self.values = values

    @property
    def size(self) -> int:
        return len(self.values)

    def points(self) -> np.ndarray:
        if isinstance(self.support, Interval):
            return self.support.values()
        return self.support

    def norm_inf(self) -> float:
        return float(np.abs(self.values).max()) if self.size else 0.0

    def norm2(self) -> float:
        return float(np.sqrt((np.abs(self.values) ** 2).sum()))

    def norm1(self) -> float:
        return float(np.abs(self.values).sum())

    def scaled(self, c: complex) -> "WeightVector":
        return WeightVector(self.support, c * self.values)

    @classmethod
    def ones(cls, support: "Interval | np.ndarray") -> "WeightVector":
        size = support.length if isinstance(support, Interval) else len(support)
        return cls(support, np.ones(size, dtype=np.complex128))

    @classmethod
    def rademacher(cls, support: "Interval | np.ndarray",
                   rng: np.random.Generator) -> "WeightVector":
        size = support.length if isinstance(support, Interval) else len(support)
        vals = rng.integers(0, 2, size=size) * 2.0 - 1.0
        return cls(support, vals.astype(np.complex128))

    @classmethod
    def unit_phase(cls, support: "Interval | np.ndarray",
                   rng: np.random.Generator) -> "WeightVector":
        size = support.length if isinstance(support, Interval) else len(support)
        return cls(support, np.exp(2j * np.pi * rng.random(size)))


def make_weights(scheme: str, support: "Interval | np.ndarray",
                 rng: np.random.Generator) -> WeightVector:
    """Weight factory for the sweep schemes: ones | rademacher | phase."""
    if scheme == "ones":
        return WeightVector.ones(support)
    if scheme == "rademacher":
        return WeightVector.rademacher(support, rng)
    if scheme == "phase":
        return WeightVector.unit_phase(support, rng)
    raise ValueError(f"unknown weight scheme {scheme!r}")
