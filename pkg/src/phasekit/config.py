"""Numerical tolerances shared by every check in the package."""

from __future__ import annotations

import os
from dataclasses import dataclass

ENV_VAR = "PHASEKIT_TOLERANCE"


@dataclass(frozen=True)
class Tolerances:
    """Pair of thresholds.

    ``matrix`` bounds entrywise residuals of matrix identities, ``composite``
    bounds derived quantities such as overlap moduli and closures.
    """

    matrix: float = 1e-12
    composite: float = 1e-10

    @classmethod
    def from_env(cls, environ=None) -> "Tolerances":
        """Read ``PHASEKIT_TOLERANCE`` as ``"matrix"`` or ``"matrix,composite"``."""
        environ = os.environ if environ is None else environ
        raw = environ.get(ENV_VAR, "").strip()
        if not raw:
            return cls()
        parts = [p.strip() for p in raw.split(",")]
        if len(parts) > 2:
            raise ValueError(f"{ENV_VAR} takes one or two numbers, got {raw!r}")
        values = [float(p) for p in parts]
        if any(v <= 0 for v in values):
            raise ValueError(f"{ENV_VAR} values must be positive, got {raw!r}")
        if len(values) == 1:
            return cls(matrix=values[0])
        return cls(matrix=values[0], composite=values[1])


DEFAULT = Tolerances()


def matrix_tol(tol: float | None) -> float:
    return DEFAULT.matrix if tol is None else tol


def composite_tol(tol: float | None) -> float:
    return DEFAULT.composite if tol is None else tol
