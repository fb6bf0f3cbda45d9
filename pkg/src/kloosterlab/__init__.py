"""Exponential sums modulo integers: evaluators, counting functions,
bilinear forms, and calibrated bound verification sweeps."""

from kloosterlab._accel import BACKEND

__all__ = ["BACKEND"]
__version__ = "0.1.0"
