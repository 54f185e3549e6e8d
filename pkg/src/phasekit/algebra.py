"""Generalized oscillator algebra and its truncation as explicit matrices.

The algebra is fixed by one rational deformation parameter ``kappa``::

    [a-, a+] = I + 2 kappa N,   [N, a+-] = +-a+-,   (a-)^dagger = a+

Its structure function ``F(n) = n (1 + kappa (n - 1))`` is kept as an exact
:class:`fractions.Fraction`; matrices are materialized in complex double
precision only in :func:`build_representation`.

For ``kappa >= 0`` the representation space is infinite. Such cases are only
available at a finite numerical cutoff, either as a genuine truncation
(``truncated=True``) or as an "open-top" surrogate whose last row of ``a+``
is cut by the cutoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._jsonio import complex_to_pairs, frozen, pairs_to_complex
from .config import matrix_tol


class RepresentationError(ValueError):
    """Raised when a parameter choice admits no Hilbertian representation."""


@dataclass(frozen=True)
class KappaParam:
    """Reduced rational ``numerator / denominator``."""

    numerator: int
    denominator: int = 1

    def __post_init__(self):
        if self.denominator == 0:
            raise ValueError("kappa denominator must be nonzero")
        value = Fraction(self.numerator, self.denominator)
        object.__setattr__(self, "numerator", value.numerator)
        object.__setattr__(self, "denominator", value.denominator)

    @classmethod
    def of(cls, value) -> "KappaParam":
        """Coerce an int, Fraction, ``"p/q"`` string or KappaParam."""
        if isinstance(value, KappaParam):
            return value
        if isinstance(value, float):
            raise TypeError("kappa must be exact; pass a Fraction or a 'p/q' string")
        frac = Fraction(value.strip()) if isinstance(value, str) else Fraction(value)
        return cls(frac.numerator, frac.denominator)

    @classmethod
    def for_dimension(cls, d: int) -> "KappaParam":
        """The finite-regime parameter ``-1/(d-1)`` for a ``d``-dimensional space."""
        if d < 2:
            raise RepresentationError("finite regime needs d >= 2")
        return cls(-1, d - 1)

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    @property
    def is_finite_regime(self) -> bool:
        return self.numerator < 0

    def __str__(self) -> str:
        return str(self.value)

    def to_json(self) -> dict:
        return {"num": self.numerator, "den": self.denominator}


def structure_value(kappa: KappaParam, n: int) -> Fraction:
    """``F(n) = n (1 + kappa (n - 1))`` with no range check."""
    return n * (1 + kappa.value * (n - 1))


def _require_representable(kappa: KappaParam) -> None:
    if kappa.numerator < 0 and kappa.numerator != -1:
        raise RepresentationError(
            f"kappa = {kappa} < 0 but -1/kappa = {-1 / kappa.value} is not a "
            "positive integer; no finite representation exists"
        )


def dimension_of(kappa: KappaParam) -> int | float:
    """Dimension ``d = 1 - 1/kappa`` of the representation space.

    Returns ``math.inf`` for ``kappa >= 0``.
    """
    _require_representable(kappa)
    if kappa.numerator >= 0:
        return math.inf
    return 1 + kappa.denominator


@dataclass(frozen=True)
class StructureFunction:
    kappa: KappaParam
    values: tuple[Fraction, ...]

    def __getitem__(self, n: int) -> Fraction:
        return self.values[n]

    def __len__(self) -> int:
        return len(self.values)


def structure_function(kappa, n_max: int) -> StructureFunction:
    """Exact values ``F(0), ..., F(n_max)``.

    In the finite regime ``n_max`` may not exceed ``d - 1``; the boundary
    ``n = d`` where ``F`` vanishes is excluded.
    """
    kappa = KappaParam.of(kappa)
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    d = dimension_of(kappa)
    if n_max > d - 1:
        raise RepresentationError(
            f"n_max = {n_max} exceeds d - 1 = {d - 1} for kappa = {kappa}; "
            "positivity 1 + kappa (n - 1) > 0 fails"
        )
    return StructureFunction(kappa, tuple(structure_value(kappa, n) for n in range(n_max + 1)))


@dataclass(frozen=True)
class Representation:
    """Dense matrices of the ladder, number and Hamiltonian operators.

    ``levels`` holds the exact ``F(0..dim-1)``. ``truncated`` marks the
    truncated algebra (with ``b+ |s-1> = 0`` imposed); ``open_top`` marks an
    infinite-regime cutoff surrogate where the vanishing top row of ``a+`` is
    an artifact of the cutoff.
    """

    kappa: KappaParam
    phi: float
    dim: int
    a_plus: np.ndarray = field(repr=False)
    a_minus: np.ndarray = field(repr=False)
    number_op: np.ndarray = field(repr=False)
    hamiltonian: np.ndarray = field(repr=False)
    levels: tuple[Fraction, ...] = field(repr=False)
    truncated: bool = False
    open_top: bool = False

    @property
    def regime(self) -> str:
        if self.open_top:
            return "infinite_cutoff"
        return "truncated" if self.truncated else "finite"

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "phi": float(self.phi),
            "kappa": self.kappa.to_json(),
            "truncated": self.truncated,
            "open_top": self.open_top,
            "a_plus": complex_to_pairs(self.a_plus),
            "a_minus": complex_to_pairs(self.a_minus),
            "number_op": complex_to_pairs(self.number_op),
            "hamiltonian": complex_to_pairs(self.hamiltonian),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Representation":
        """Rebuild from :meth:`to_json` output, keeping the stored matrices."""
        kappa = KappaParam(data["kappa"]["num"], data["kappa"]["den"])
        dim = int(data["dim"])
        shape = (dim, dim)
        return cls(
            kappa=kappa,
            phi=float(data["phi"]),
            dim=dim,
            a_plus=frozen(pairs_to_complex(data["a_plus"], shape)),
            a_minus=frozen(pairs_to_complex(data["a_minus"], shape)),
            number_op=frozen(pairs_to_complex(data["number_op"], shape)),
            hamiltonian=frozen(pairs_to_complex(data["hamiltonian"], shape)),
            levels=tuple(structure_value(kappa, n) for n in range(dim)),
            truncated=bool(data["truncated"]),
            open_top=bool(data.get("open_top", False)),
        )


def build_representation(
    kappa, phi: float, size: int, truncated: bool = False, open_top: bool = False
) -> Representation:
    """Matrix representation on the basis ``|0>, ..., |size-1>``.

    Entries follow::

        <n+1| a+ |n> = sqrt(F(n+1)) exp(-i [F(n+1) - F(n)] phi)
        <n-1| a- |n> = sqrt(F(n))   exp(+i [F(n) - F(n-1)] phi)

    Parameters
    ----------
    kappa : KappaParam or coercible
    phi : float
        Free real phase label.
    size : int
        ``d`` for the untruncated finite regime, the truncation order ``s``
        otherwise.
    truncated : bool
        Build the truncated algebra.
    open_top : bool
        Infinite regime only: build a cutoff surrogate of the untruncated
        algebra rather than the truncated one.
    """
    kappa = KappaParam.of(kappa)
    if size < 1:
        raise ValueError("size must be a positive integer")
    if truncated and open_top:
        raise ValueError("truncated and open_top are mutually exclusive")
    d = dimension_of(kappa)
    if d == math.inf:
        if not (truncated or open_top):
            raise RepresentationError(
                "kappa >= 0 has an infinite-dimensional space; pass truncated=True "
                "or open_top=True together with a cutoff size"
            )
    else:
        if open_top:
            raise RepresentationError("open_top applies only to kappa >= 0")
        if not truncated and size != d:
            raise RepresentationError(f"untruncated finite regime needs size = d = {d}, got {size}")
    levels = structure_function(kappa, size - 1).values
    # positivity of F(1..size-1) is guaranteed by structure_function

    a_minus = np.zeros((size, size), dtype=complex)
    a_plus = np.zeros((size, size), dtype=complex)
    for n in range(1, size):
        gap = float(levels[n] - levels[n - 1])
        amp = math.sqrt(levels[n])
        a_minus[n - 1, n] = amp * np.exp(1j * gap * phi)
        a_plus[n, n - 1] = amp * np.exp(-1j * gap * phi)
    number_op = np.diag(np.arange(size)).astype(complex)
    hamiltonian = np.diag([float(f) for f in levels]).astype(complex)
    return Representation(
        kappa=kappa,
        phi=float(phi),
        dim=size,
        a_plus=frozen(a_plus),
        a_minus=frozen(a_minus),
        number_op=frozen(number_op),
        hamiltonian=frozen(hamiltonian),
        levels=levels,
        truncated=truncated,
        open_top=open_top,
    )


@dataclass(frozen=True)
class CommutatorCheck:
    residual: float
    trace: complex
    rhs: str
    # diagonal indices left out because the cutoff, not the algebra, fixes them
    excluded: tuple[int, ...] = ()


def commutator_rhs(rep: Representation, rhs: str) -> np.ndarray:
    k = float(rep.kappa.value)
    target = np.eye(rep.dim, dtype=complex) + 2 * k * rep.number_op
    if rhs == "truncated":
        target = target.copy()
        target[-1, -1] -= float(structure_value(rep.kappa, rep.dim))
    elif rhs != "algebra":
        raise ValueError(f"unknown rhs {rhs!r}")
    return target


def commutator_residual(rep: Representation, rhs: str | None = None) -> CommutatorCheck:
    """``max |[a-, a+] - RHS|`` together with ``trace [a-, a+]``.

    ``rhs`` is ``"algebra"`` for ``I + 2 kappa N`` or ``"truncated"`` for
    ``I + 2 kappa N - F(s) |s-1><s-1|``. The default follows the
    representation. For open-top surrogates the last diagonal entry is
    cutoff-limited and excluded from the residual.
    """
    if rhs is None:
        rhs = "truncated" if rep.truncated else "algebra"
    comm = rep.a_minus @ rep.a_plus - rep.a_plus @ rep.a_minus
    diff = np.abs(comm - commutator_rhs(rep, rhs))
    excluded: tuple[int, ...] = ()
    if rep.open_top and rhs == "algebra":
        excluded = (rep.dim - 1,)
        diff[-1, -1] = 0.0
    return CommutatorCheck(float(diff.max()), complex(np.trace(comm)), rhs, excluded)


@dataclass(frozen=True)
class DegeneracyReport:
    dim: int
    classes: tuple[tuple[Fraction, tuple[int, ...]], ...]

    @property
    def singlets(self) -> list[int]:
        return [idx[0] for _, idx in self.classes if len(idx) == 1]


def degeneracy_report(kappa) -> DegeneracyReport:
    """Group the levels ``0..d-1`` of ``F(N)`` by exact energy.

    Only the finite regime is accepted; for ``kappa >= 0`` the spectrum is
    strictly increasing and has no degeneracy to report.
    """
    kappa = KappaParam.of(kappa)
    d = dimension_of(kappa)
    if d == math.inf:
        raise RepresentationError("kappa >= 0: spectrum of F(N) is nondegenerate")
    groups: dict[Fraction, list[int]] = {}
    for n, f in enumerate(structure_function(kappa, d - 1).values):
        groups.setdefault(f, []).append(n)
    return DegeneracyReport(d, tuple((f, tuple(idx)) for f, idx in groups.items()))


def nilpotency_check(rep: Representation, tol: float | None = None) -> bool:
    """True iff ``(a-)^s`` and ``(a+)^s`` vanish.

    Open-top surrogates always return False: there the vanishing power is an
    artifact of the cutoff, not a relation of the algebra.
    """
    if rep.open_top:
        return False
    tol = matrix_tol(tol)
    s = rep.dim
    lo = np.linalg.matrix_power(rep.a_minus, s)
    hi = np.linalg.matrix_power(rep.a_plus, s)
    return bool(np.abs(lo).max() < tol and np.abs(hi).max() < tol)
