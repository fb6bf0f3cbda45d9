"""Kernel backend selection: compiled extension with pure-Python fallback.

The compiled module is preferred; set ``KLOOSTERLAB_PURE=1`` to force the
numpy fallback (used by the parity tests and the benchmark).
"""

import os

if os.environ.get("KLOOSTERLAB_PURE") == "1":
    from kloosterlab._accel import _kernels_py as kernels
else:
    try:
        from kloosterlab._accel import _kernels as kernels  # type: ignore
    except ImportError:  # extension not built
        from kloosterlab._accel import _kernels_py as kernels

BACKEND = kernels.BACKEND


def load_backend(name: str):
    """Explicitly load one backend ("compiled" or "python"); for benchmarks."""
    if name == "python":
        from kloosterlab._accel import _kernels_py
        return _kernels_py
    from kloosterlab._accel import _kernels  # type: ignore
    return _kernels
