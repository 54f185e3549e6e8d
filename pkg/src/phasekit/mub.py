"""Mutually unbiased bases from quantized phase states.

Two routes produce ``dim`` bases ``B_p`` which, joined with the computational
basis, form a candidate set of ``dim + 1`` MUBs:

* ``finite``    kappa = -1/(d-1), phi = -pi (d-1) p / d,
* ``truncated`` kappa with 1/kappa an integer, phi = 2 pi p / (s kappa).

Overlaps reduce to generalized quadratic Gauss sums, which are evaluated by
direct summation only. Completeness is claimed only for prime dimensions and
only after every cross-basis overlap has been checked.
"""

from __future__ import annotations

import csv
import functools
import io
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._jsonio import frozen
from .algebra import KappaParam, build_representation, structure_function
from .config import composite_tol, matrix_tol
from .phase import PhaseState, phase_operator, phase_states, root_of_unity_power, unitarity_residual


def is_prime(n: int) -> bool:
    """Deterministic trial division."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    return all(n % k for k in range(3, math.isqrt(n) + 1, 2))


def quantize_phi_finite(d: int, p: int) -> float:
    return -math.pi * (d - 1) * p / d


def quantize_phi_truncated(kappa, s: int, p: int) -> float:
    kappa = KappaParam.of(kappa)
    if kappa.numerator == 0:
        raise ValueError("phi = 2 pi p / (s kappa) is undefined for kappa = 0")
    return 2 * math.pi * p / (s * float(kappa.value))


def _levels_float(kappa: KappaParam, dim: int) -> np.ndarray:
    return np.array([float(f) for f in structure_function(kappa, dim - 1).values])


def mub_state_finite(d: int, p: int, m: int) -> PhaseState:
    """``|m, p> = d^(-1/2) sum_n q^(n (d - n) p / 2 + n m) |n>``.

    The exponent is half-integral for even ``d`` and is kept as a Fraction.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    kappa = KappaParam.for_dimension(d)
    amps = np.array([
        root_of_unity_power(Fraction(n * (d - n) * p, 2) + n * m, d) for n in range(d)
    ]) / math.sqrt(d)
    return PhaseState("m", m, quantize_phi_finite(d, p), frozen(amps), frozen(_levels_float(kappa, d)), kappa)


def mub_state_finite_relabeled(d: int, p: int, m: int) -> np.ndarray:
    """Amplitudes of ``|m, p>`` on the reversed basis ``|k> = |d - k - 1>``:
    ``d^(-1/2) q^((k+1)(d-k-1) p / 2 - (k+1) m)``.
    """
    return np.array([
        root_of_unity_power(Fraction((k + 1) * (d - k - 1) * p, 2) - (k + 1) * m, d) for k in range(d)
    ]) / math.sqrt(d)


def _delta(kappa: KappaParam) -> int:
    if kappa.numerator == 0:
        raise ValueError("truncated route excludes kappa = 0 (phi quantization divides by kappa)")
    inv = 1 / kappa.value
    if inv.denominator != 1:
        raise ValueError(f"truncated route needs 1/kappa to be an integer, got 1/kappa = {inv}")
    return 1 - int(inv)


def mub_state_truncated(kappa, s: int, p: int, m: int) -> PhaseState:
    """``|m, p> = s^(-1/2) sum_n q_s^(n (delta - n) p + n m) |n>``, ``delta = 1 - 1/kappa``."""
    kappa = KappaParam.of(kappa)
    delta = _delta(kappa)
    if s < 2:
        raise ValueError("s must be at least 2")
    levels = _levels_float(kappa, s)
    amps = np.array([root_of_unity_power(n * (delta - n) * p + n * m, s) for n in range(s)]) / math.sqrt(s)
    return PhaseState("m", m, quantize_phi_truncated(kappa, s, p), frozen(amps), frozen(levels), kappa)


@dataclass(frozen=True)
class GaussSumParams:
    u: int
    v: int
    w: int

    def __post_init__(self):
        if self.w == 0:
            raise ValueError("w must be nonzero")

    @property
    def parity_ok(self) -> bool:
        """``u w + v`` even.

        This makes the summand periodic in ``k`` with period ``|w|``, so the
        sum runs over a full period. It does not decide whether the sum
        vanishes: ``S(1, 0, 3) = 1`` although ``u w + v`` is odd.
        """
        return (self.u * self.w + self.v) % 2 == 0


def gauss_sum(u: int, v: int, w: int) -> complex:
    """``S(u, v, w) = sum_{k=0}^{|w|-1} exp(i pi (u k^2 + v k) / w)`` by direct summation."""
    params = GaussSumParams(u, v, w)
    period = 2 * abs(params.w)
    return _gauss_reduced(u % period, v % period, w)


@functools.lru_cache(maxsize=65536)
def _gauss_reduced(u: int, v: int, w: int) -> complex:
    period = 2 * abs(w)
    k = np.arange(abs(w), dtype=np.int64)
    # exact integer reduction modulo 2|w| before the float exp
    x = (u * k * k + v * k) % period
    return complex(np.exp(1j * np.pi * x / w).sum())


def overlap_via_gauss(d: int, p: int, m: int, p2: int, m2: int) -> complex:
    """``<m, p | m2, p2> = S(u, v, d) / d`` with
    ``u = p - p2`` and ``v = -(p - p2) d + 2 (m2 - m)``.
    """
    u = p - p2
    v = -(p - p2) * d + 2 * (m2 - m)
    return gauss_sum(u, v, d) / d


def overlap_via_gauss_truncated(kappa, s: int, p: int, m: int, p2: int, m2: int) -> complex:
    """Truncated-route overlap with ``u = 2 (p - p2)``,
    ``v = 2 delta (p2 - p) + 2 (m2 - m)``, ``w = s``.
    """
    delta = _delta(KappaParam.of(kappa))
    u = 2 * (p - p2)
    v = 2 * delta * (p2 - p) + 2 * (m2 - m)
    return gauss_sum(u, v, s) / s


@dataclass(frozen=True)
class MubBasis:
    """One basis; ``p = dim`` labels the computational basis."""

    p: int
    dim: int
    vectors: tuple[PhaseState, ...] = field(repr=False)

    @property
    def matrix(self) -> np.ndarray:
        """Vectors as columns."""
        return np.column_stack([v.amplitudes for v in self.vectors])

    @property
    def is_computational(self) -> bool:
        return self.p == self.dim


@dataclass(frozen=True)
class PairOverlap:
    p: int
    p2: int
    min: float
    max: float


@dataclass(frozen=True)
class MubSet:
    dim: int
    route: str
    kappa: KappaParam
    bases: tuple[MubBasis, ...] = field(repr=False)
    overlap_report: tuple[PairOverlap, ...] = field(repr=False)
    orthonormality: float
    prime: bool
    complete: bool
    tol: float

    def __len__(self) -> int:
        return len(self.bases)

    @property
    def computational(self) -> MubBasis:
        return self.bases[-1]

    def max_deviation(self) -> float:
        """Largest ``| |<a|b>| - 1/sqrt(dim) |`` over cross-basis pairs."""
        target = 1 / math.sqrt(self.dim)
        return max(max(abs(r.min - target), abs(r.max - target)) for r in self.overlap_report)

    def violations(self) -> list[PairOverlap]:
        target = 1 / math.sqrt(self.dim)
        return [r for r in self.overlap_report
                if abs(r.min - target) > self.tol or abs(r.max - target) > self.tol]

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "route": self.route,
            "kappa": self.kappa.to_json(),
            "prime": self.prime,
            "complete": self.complete,
            "bases": [
                {"p": b.p, "computational": b.is_computational, "vectors": [v.to_json() for v in b.vectors]}
                for b in self.bases
            ],
            "overlap_report": [{"p": r.p, "p2": r.p2, "min": r.min, "max": r.max} for r in self.overlap_report],
        }

    def overlap_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["p", "p2", "min_abs_overlap", "max_abs_overlap"])
        for r in self.overlap_report:
            writer.writerow([r.p, r.p2, repr(r.min), repr(r.max)])
        return buf.getvalue()


def _computational_basis(dim: int, kappa: KappaParam, levels: np.ndarray) -> MubBasis:
    vectors = []
    for n in range(dim):
        e = np.zeros(dim, dtype=complex)
        e[n] = 1.0
        vectors.append(PhaseState("m", n, 0.0, frozen(e), frozen(levels), kappa))
    return MubBasis(dim, dim, tuple(vectors))


def build_mub_set(dim: int, route: str = "finite", kappa=None, tol: float | None = None) -> MubSet:
    """Bases ``B_0..B_{dim-1}`` plus the computational basis, with overlaps.

    ``route="finite"`` fixes kappa = -1/(dim-1); ``route="truncated"`` needs
    ``kappa`` with integer ``1/kappa``. The set is flagged complete only when
    ``dim`` is prime and every cross overlap equals ``1/sqrt(dim)`` within
    ``tol``.
    """
    tol = composite_tol(tol)
    if route == "finite":
        if kappa is not None and KappaParam.of(kappa) != KappaParam.for_dimension(dim):
            raise ValueError("finite route fixes kappa = -1/(dim-1)")
        kappa = KappaParam.for_dimension(dim)
        make = lambda p, m: mub_state_finite(dim, p, m)  # noqa: E731
    elif route == "truncated":
        if kappa is None:
            raise ValueError("truncated route needs kappa")
        kappa = KappaParam.of(kappa)
        make = lambda p, m: mub_state_truncated(kappa, dim, p, m)  # noqa: E731
    else:
        raise ValueError(f"unknown route {route!r}")

    bases = [MubBasis(p, dim, tuple(make(p, m) for m in range(dim))) for p in range(dim)]
    levels = bases[0].vectors[0].energies
    bases.append(_computational_basis(dim, kappa, levels))
    mats = [b.matrix for b in bases]

    ortho = max(unitarity_residual(M) for M in mats)
    report = []
    for i, j in itertools.combinations(range(len(bases)), 2):
        moduli = np.abs(mats[i].conj().T @ mats[j])
        report.append(PairOverlap(bases[i].p, bases[j].p, float(moduli.min()), float(moduli.max())))

    prime = is_prime(dim)
    target = 1 / math.sqrt(dim)
    unbiased = all(abs(r.min - target) <= tol and abs(r.max - target) <= tol for r in report)
    complete = prime and unbiased and ortho <= matrix_tol(None)
    return MubSet(dim, route, kappa, tuple(bases), tuple(report), ortho, prime, complete, tol)


@dataclass(frozen=True)
class PseudoCommutationReport:
    decomposition: float  # E_d - U_phi V
    pseudo_commutation: float  # U_phi V - exp(2 i phi / (d-1)) V U_phi
    quantized_commutation: float  # V U_phi - q^p U_phi V
    v_power: float  # V^d - I
    u_power: float  # U_phi^d - exp(i pi (d-1) p) I

    def max(self) -> float:
        return max(self.decomposition, self.pseudo_commutation, self.quantized_commutation,
                   self.v_power, self.u_power)


def pseudo_commutation_check(d: int, p: int) -> PseudoCommutationReport:
    """Residuals of the ``E_d = U_phi V`` factorization at quantized ``phi``.

    ``U_phi = exp(i [F(N+1) - F(N)] phi)`` with ``N + 1`` read modulo ``d``
    and ``V = sum_n |n-1><n|``.
    """
    kappa = KappaParam.for_dimension(d)
    phi = quantize_phi_finite(d, p)
    F = structure_function(kappa, d - 1).values
    u_diag = [np.exp(1j * float(F[(n + 1) % d] - F[n]) * phi) for n in range(d)]
    U = np.diag(u_diag)
    V = np.zeros((d, d), dtype=complex)
    for n in range(d):
        V[(n - 1) % d, n] = 1.0
    E = phase_operator(build_representation(kappa, phi, d)).matrix
    q = root_of_unity_power(1, d)
    eye = np.eye(d)
    sign = np.exp(1j * np.pi * ((d - 1) * p % 2))
    return PseudoCommutationReport(
        decomposition=float(np.abs(E - U @ V).max()),
        pseudo_commutation=float(np.abs(U @ V - np.exp(2j * phi / (d - 1)) * V @ U).max()),
        quantized_commutation=float(np.abs(V @ U - q**p * U @ V).max()),
        v_power=float(np.abs(np.linalg.matrix_power(V, d) - eye).max()),
        u_power=float(np.abs(np.linalg.matrix_power(U, d) - sign * eye).max()),
    )


def states_at_quantized_phi(d: int, p: int) -> list[PhaseState]:
    """Generic phase states evaluated at the finite-route quantized ``phi``."""
    return phase_states(d, KappaParam.for_dimension(d), quantize_phi_finite(d, p))


def same_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float | None = None) -> bool:
    """Unit vectors ``a, b`` agree up to a global phase."""
    return abs(abs(np.vdot(a, b)) - 1.0) <= matrix_tol(tol)
