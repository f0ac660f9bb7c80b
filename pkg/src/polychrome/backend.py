"""Kernel backend selection and exact int64 scaling.

POLYCHROME_BACKEND=numba|numpy picks the kernel lane; default is numba when
importable.  Coordinates are rescaled to a common denominator so kernels work
on exact integers; inputs that cannot fit int64 with headroom fall back to
the pure-Python exact path in ranges.py.
"""

import os
from math import gcd
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import EnumerationError

INT64_GUARD = 1 << 58

_cached = {}


def backend_name() -> str:
    env = os.environ.get("POLYCHROME_BACKEND", "").strip().lower()
    if env in ("numba", "numpy"):
        return env
    if env:
        raise EnumerationError("unknown POLYCHROME_BACKEND %r (use numba or numpy)" % env)
    try:
        import numba  # noqa: F401

        return "numba"
    except ImportError:
        return "numpy"


def get_kernels():
    name = backend_name()
    if name not in _cached:
        if name == "numba":
            from . import kernels_numba as mod
        else:
            from . import kernels_numpy as mod
        _cached[name] = mod
    return _cached[name]


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def integer_coordinates(points) -> Tuple[list, list, int]:
    """Rescale rational points to integers by the common denominator.

    Returns (xs, ys, denominator) with Python ints (arbitrary precision).
    """
    den = 1
    for p in points:
        den = _lcm(den, p.x.denominator)
        den = _lcm(den, p.y.denominator)
    xs = [int(p.x * den) for p in points]
    ys = [int(p.y * den) for p in points]
    return xs, ys, den


def int64_arrays(xs: Sequence[int], ys: Sequence[int]) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """int64 views of exact integer coordinates, or None if out of range."""
    hi = max((max(map(abs, xs), default=0), max(map(abs, ys), default=0)))
    if hi >= INT64_GUARD:
        return None
    return (
        np.asarray(xs, dtype=np.int64),
        np.asarray(ys, dtype=np.int64),
    )
