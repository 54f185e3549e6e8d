"""Complex array <-> JSON-friendly list conversion."""

from __future__ import annotations

import numpy as np


def _clean(x: float) -> float:
    # -0.0 would break byte-identical output across platforms
    x = float(x)
    return 0.0 if x == 0.0 else x


def complex_to_pairs(values) -> list[list[float]]:
    """Flatten ``values`` in row-major order into ``[[re, im], ...]``."""
    flat = np.asarray(values, dtype=complex).ravel(order="C")
    return [[_clean(z.real), _clean(z.imag)] for z in flat]


def pairs_to_complex(pairs, shape=None) -> np.ndarray:
    arr = np.array([complex(re, im) for re, im in pairs], dtype=complex)
    if shape is not None:
        arr = arr.reshape(shape, order="C")
    return arr


def frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr)
    arr.setflags(write=False)
    return arr
