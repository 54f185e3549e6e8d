"""E_d, E_s and cutoff E_inf, their eigenstates, and the V_s / U_s pair.

Three state families are produced here, all carried by :class:`PhaseState`:

* ``"m"``     eigenvectors of the unitary phase operator E_d or E_s,
* ``"theta"`` non-normalized eigenvectors of the cutoff E_inf,
* ``"mu"``    eigenvectors of V_s = b- + (b+)^(s-1) / E(s-1).

Every state remembers the spectrum that generates its time evolution, so
:func:`evolve` multiplies amplitude ``n`` by ``exp(-i e_n t)`` and shifts the
``phi`` label by ``t``. For algebraic states the spectrum is ``F(n)``; the
potentials module reuses the same machinery with physical energies.

Global phases: normalization constants are taken real and positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._jsonio import complex_to_pairs, frozen
from .algebra import (
    KappaParam,
    Representation,
    RepresentationError,
    dimension_of,
    structure_function,
)

LOG_DOMAIN_THRESHOLD = 30


def root_of_unity_power(k, dim: int) -> complex:
    """``q^k`` with ``q = exp(2 pi i / dim)``; ``k`` may be a Fraction.

    The exponent is reduced modulo ``dim`` exactly before the float exp.
    """
    k = Fraction(k) % dim
    return complex(np.exp(2j * np.pi * float(k) / dim))


@dataclass(frozen=True)
class PhaseOperator:
    matrix: np.ndarray = field(repr=False)
    kind: str  # finite_Ed | truncated_Es | infinite_cutoff_Einf
    phi: float
    kappa: KappaParam

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def phase_operator(rep: Representation) -> PhaseOperator:
    """Cyclic phase operator E_d (finite regime) or E_s (truncated).

    ``<n-1| E |n> = exp(i [F(n) - F(n-1)] phi)`` with the index taken modulo
    ``dim``, so ``E |0> = exp(i [F(0) - F(dim-1)] phi) |dim-1>``.
    """
    if rep.open_top:
        raise RepresentationError("open-top surrogate: use phase_operator_infinite_cutoff")
    dim, phi, F = rep.dim, rep.phi, rep.levels
    E = np.zeros((dim, dim), dtype=complex)
    for n in range(dim):
        prev = (n - 1) % dim
        E[prev, n] = np.exp(1j * float(F[n] - F[prev]) * phi)
    kind = "truncated_Es" if rep.truncated else "finite_Ed"
    return PhaseOperator(frozen(E), kind, phi, rep.kappa)


def polar_residual(rep: Representation, op: PhaseOperator | None = None) -> float:
    """``max |a- - E sqrt(F(N))|``."""
    op = phase_operator(rep) if op is None else op
    sqrt_f = np.diag([math.sqrt(f) for f in rep.levels])
    return float(np.abs(rep.a_minus - op.matrix @ sqrt_f).max())


def unitarity_residual(matrix: np.ndarray) -> float:
    eye = np.eye(matrix.shape[0])
    return float(max(np.abs(matrix.conj().T @ matrix - eye).max(),
                     np.abs(matrix @ matrix.conj().T - eye).max()))


def power_identity_residual(matrix: np.ndarray, power: int | None = None) -> float:
    """``max |M^k - I|`` with ``k`` defaulting to the dimension."""
    k = matrix.shape[0] if power is None else power
    return float(np.abs(np.linalg.matrix_power(matrix, k) - np.eye(matrix.shape[0])).max())


def phase_operator_infinite_cutoff(kappa, phi: float, n_max: int) -> PhaseOperator:
    """Upper shift ``sum_n exp(i [F(n+1) - F(n)] phi) |n><n+1|`` on ``|0>..|n_max>``."""
    kappa = KappaParam.of(kappa)
    if kappa.is_finite_regime:
        raise RepresentationError("E_inf exists only for kappa >= 0")
    F = structure_function(kappa, n_max).values
    E = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    for n in range(n_max):
        E[n, n + 1] = np.exp(1j * float(F[n + 1] - F[n]) * phi)
    return PhaseOperator(frozen(E), "infinite_cutoff_Einf", float(phi), kappa)


@dataclass(frozen=True)
class CutoffIdentities:
    # E^dagger E = I - |0><0| holds on the whole cutoff space
    left: float
    # E E^dagger = I holds except at the last diagonal entry
    right: float
    right_last_entry: complex


def cutoff_identities(op: PhaseOperator) -> CutoffIdentities:
    E = op.matrix
    dim = op.dim
    target = np.eye(dim)
    target[0, 0] = 0.0
    left = float(np.abs(E.conj().T @ E - target).max())
    right_mat = E @ E.conj().T - np.eye(dim)
    last = complex(right_mat[-1, -1]) + 1.0
    right_mat[-1, -1] = 0.0
    return CutoffIdentities(left, float(np.abs(right_mat).max()), last)


@dataclass(frozen=True)
class PhaseState:
    """Labelled amplitude vector on ``|0>, ..., |dim-1>``.

    ``index`` is ``m`` or ``mu`` (an integer mod ``dim``) or ``theta`` (a
    real angle) depending on ``kind``. ``energies`` is the spectrum that
    drives :func:`evolve`.
    """

    kind: str
    index: int | float
    phi: float
    amplitudes: np.ndarray = field(repr=False)
    energies: np.ndarray = field(repr=False)
    kappa: KappaParam | None = None
    normalized: bool = True

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def label(self) -> dict:
        key = {"m": "m", "mu": "mu", "theta": "theta"}[self.kind]
        return {"type": self.kind, key: self.index, "phi": float(self.phi)}

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "amplitudes": complex_to_pairs(self.amplitudes),
            "dim": self.dim,
            "kappa": None if self.kappa is None else self.kappa.to_json(),
        }


def _levels_for(kappa: KappaParam, dim: int) -> tuple[Fraction, ...]:
    d = dimension_of(kappa)
    if dim < 1:
        raise ValueError("dim must be positive")
    if dim > d:
        raise RepresentationError(f"dim = {dim} exceeds the space dimension d = {d} for kappa = {kappa}")
    return structure_function(kappa, dim - 1).values


def fourier_states(energies: Sequence, phi: float, kappa: KappaParam | None = None) -> list[PhaseState]:
    """``|m, phi> = dim^(-1/2) sum_n exp(-i e_n phi) q^(m n) |n>`` for all ``m``."""
    energies = np.array([float(e) for e in energies])
    dim = len(energies)
    temporal = np.exp(-1j * energies * phi)
    states = []
    for m in range(dim):
        fourier = np.array([root_of_unity_power(m * n, dim) for n in range(dim)])
        amps = temporal * fourier / math.sqrt(dim)
        states.append(PhaseState("m", m, float(phi), frozen(amps), frozen(energies), kappa))
    return states


def phase_states(dim: int, kappa, phi: float) -> list[PhaseState]:
    """Eigenstates ``|m, phi>``, ``m = 0..dim-1``, of E_d (``dim = d``) or E_s."""
    kappa = KappaParam.of(kappa)
    return fourier_states(_levels_for(kappa, dim), phi, kappa)


def theta_phase_state(theta: float, phi: float, kappa, n_max: int) -> PhaseState:
    """Non-normalized ``|theta, phi> = sum_n exp(i n theta) exp(-i F(n) phi) |n>``."""
    kappa = KappaParam.of(kappa)
    if kappa.is_finite_regime:
        raise RepresentationError("|theta, phi> states belong to kappa >= 0")
    if not -math.pi <= theta <= math.pi:
        raise ValueError("theta must lie in [-pi, pi]")
    energies = np.array([float(f) for f in structure_function(kappa, n_max).values])
    n = np.arange(n_max + 1)
    amps = np.exp(1j * n * theta) * np.exp(-1j * energies * phi)
    return PhaseState("theta", float(theta), float(phi), frozen(amps), frozen(energies), kappa, normalized=False)


def theta_grid(n_max: int, points: int | None = None) -> np.ndarray:
    """Uniform grid on ``[-pi, pi)``, by default ``4 (n_max + 1)`` points."""
    points = 4 * (n_max + 1) if points is None else points
    return -np.pi + 2 * np.pi * np.arange(points) / points


def theta_closure_residual(kappa, phi: float, n_max: int, points: int | None = None) -> float:
    """``max |(1/M) sum_j |theta_j><theta_j| - I|`` over a uniform grid.

    The grid average is exact once ``points > n_max``.
    """
    grid = theta_grid(n_max, points)
    acc = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    for theta in grid:
        v = theta_phase_state(float(theta), phi, kappa, n_max).amplitudes
        acc += np.outer(v, v.conj())
    acc /= len(grid)
    return float(np.abs(acc - np.eye(n_max + 1)).max())


def evolve(state: PhaseState, t: float) -> PhaseState:
    """Apply ``exp(-i H t)``; for these states it only shifts ``phi`` by ``t``."""
    amps = state.amplitudes * np.exp(-1j * state.energies * t)
    return replace(state, phi=float(state.phi + t), amplitudes=frozen(amps))


def overlap(state1: PhaseState, state2: PhaseState) -> complex:
    """Inner product ``<state1|state2>``."""
    if state1.dim != state2.dim:
        raise ValueError(f"dimension mismatch: {state1.dim} vs {state2.dim}")
    if state1.kappa is not None and state2.kappa is not None and state1.kappa != state2.kappa:
        raise ValueError(f"kappa mismatch: {state1.kappa} vs {state2.kappa}")
    return complex(np.vdot(state1.amplitudes, state2.amplitudes))


def rho_sum_overlap(dim: int, kappa, m: int, phi: float, m2: int, phi2: float) -> complex:
    """``<m, phi | m2, phi2>`` as ``(1/d) sum_n q^rho(n)`` with
    ``rho = -(m - m2) n + d (phi - phi2) F(n) / (2 pi)``.
    """
    kappa = KappaParam.of(kappa)
    F = _levels_for(kappa, dim)
    total = 0j
    for n in range(dim):
        rho = -(m - m2) * n + dim * (phi - phi2) * float(F[n]) / (2 * np.pi)
        total += np.exp(2j * np.pi * rho / dim)
    return complex(total / dim)


@dataclass(frozen=True)
class WeightTable:
    """``E(0) = 1``, ``E(n) = e_1 e_2 ... e_n`` over a level sequence.

    ``exact`` holds Fractions when the levels are exact and ``len <= 30``;
    ``log_values`` is always filled.
    """

    log_values: tuple[float, ...]
    exact: tuple[Fraction, ...] | None = None

    def __len__(self) -> int:
        return len(self.log_values)

    @property
    def values(self) -> np.ndarray:
        if self.exact is not None:
            return np.array([float(x) for x in self.exact])
        return np.exp(np.array(self.log_values))

    def inv_sqrt(self) -> np.ndarray:
        """``E(n)^(-1/2)`` evaluated from the log domain."""
        return np.exp(-0.5 * np.array(self.log_values))


def _log(x) -> float:
    if isinstance(x, Fraction):
        return math.log(x.numerator) - math.log(x.denominator)
    return math.log(x)


def weights_from_levels(levels: Sequence) -> WeightTable:
    """Weights for ``levels = (e_0, e_1, ..., e_{s-1})``; ``e_0`` is unused."""
    s = len(levels)
    if any(e <= 0 for e in levels[1:]):
        bad = next(n for n in range(1, s) if levels[n] <= 0)
        raise RepresentationError(f"level {bad} is not positive; weights undefined")
    logs = [0.0]
    for e in levels[1:]:
        logs.append(logs[-1] + _log(e))
    exact = None
    if s <= LOG_DOMAIN_THRESHOLD and all(isinstance(e, (int, Fraction)) for e in levels):
        exact = [Fraction(1)]
        for e in levels[1:]:
            exact.append(exact[-1] * e)
        exact = tuple(exact)
    return WeightTable(tuple(logs), exact)


def build_weights(kappa, s: int) -> WeightTable:
    """``E(n) = F(1) ... F(n)`` for ``n < s``."""
    kappa = KappaParam.of(kappa)
    return weights_from_levels(_levels_for(kappa, s))


@dataclass(frozen=True)
class WeylCandidatePair:
    U: np.ndarray = field(repr=False)
    V: np.ndarray = field(repr=False)
    q: complex
    s: int

    def nonunitarity(self) -> float:
        """``max |V^dagger V - I|``; zero only for constant weights."""
        return float(np.abs(self.V.conj().T @ self.V - np.eye(self.s)).max())

    def s_commutation_residual(self) -> float:
        return float(np.abs(self.V @ self.U - self.q * self.U @ self.V).max())


def build_vs_us(rep: Representation, weights: WeightTable | None = None) -> WeylCandidatePair:
    """``V_s = b- + (b+)^(s-1) / E(s-1)`` and ``U_s = q_s^N``."""
    s = rep.dim
    if s < 2:
        raise ValueError("V_s needs s >= 2")
    if rep.open_top:
        raise RepresentationError("V_s is defined on a truncated or finite representation")
    weights = weights_from_levels(rep.levels) if weights is None else weights
    top = np.linalg.matrix_power(rep.a_plus, s - 1)
    V = rep.a_minus + top * math.exp(-weights.log_values[s - 1])
    q = root_of_unity_power(1, s)
    U = np.diag([root_of_unity_power(n, s) for n in range(s)])
    return WeylCandidatePair(frozen(U), frozen(V), q, s)


def weighted_states(
    energies: Sequence, weights: WeightTable, phi: float, kappa: KappaParam | None = None
) -> list[PhaseState]:
    """``|mu, phi> = C_0 sum_n E(n)^(-1/2) q_s^(n mu) exp(-i e_n phi) |n>``."""
    energies = np.array([float(e) for e in energies])
    s = len(energies)
    inv_sqrt = weights.inv_sqrt()
    c0 = 1.0 / math.sqrt(float(np.sum(inv_sqrt**2)))
    temporal = np.exp(-1j * energies * phi)
    states = []
    for mu in range(s):
        fourier = np.array([root_of_unity_power(n * mu, s) for n in range(s)])
        amps = c0 * inv_sqrt * fourier * temporal
        states.append(PhaseState("mu", mu, float(phi), frozen(amps), frozen(energies), kappa))
    return states


def vs_phase_states(rep: Representation, weights: WeightTable | None = None) -> list[PhaseState]:
    """Eigenstates of ``V_s`` with eigenvalues ``q_s^mu``."""
    if weights is None:
        weights = weights_from_levels(rep.levels)
    elif len(weights) != rep.dim:
        raise ValueError("weights length does not match the representation")
    return weighted_states(rep.levels, weights, rep.phi, rep.kappa)


def vs_overlap_formula(
    energies: Sequence, weights: WeightTable, mu: int, phi: float, mu2: int, phi2: float
) -> complex:
    """``C_0^2 sum_n E(n)^-1 q_s^(n (mu2 - mu)) exp(-i e_n (phi2 - phi))``."""
    energies = np.array([float(e) for e in energies])
    s = len(energies)
    inv = np.exp(-np.array(weights.log_values))
    c0sq = 1.0 / float(inv.sum())
    phases = np.array([root_of_unity_power(n * (mu2 - mu), s) for n in range(s)])
    return complex(c0sq * np.sum(inv * phases * np.exp(-1j * energies * (phi2 - phi))))


def closure_residual(states: Sequence[PhaseState], target: np.ndarray | None = None, scale: float = 1.0) -> float:
    """``max |scale * sum |psi><psi| - target|``, target defaulting to ``I``."""
    dim = states[0].dim
    acc = np.zeros((dim, dim), dtype=complex)
    for st in states:
        acc += np.outer(st.amplitudes, st.amplitudes.conj())
    target = np.eye(dim) if target is None else target
    return float(np.abs(scale * acc - target).max())


def weighted_closure_target(weights: WeightTable) -> np.ndarray:
    """``C_0^2 sum_n E(n)^-1 |n><n|``."""
    inv = np.exp(-np.array(weights.log_values))
    return np.diag(inv / inv.sum())


def eigen_residual(matrix: np.ndarray, state: PhaseState, eigenvalue: complex) -> float:
    v = state.amplitudes
    return float(np.linalg.norm(matrix @ v - eigenvalue * v))


def states_for(rep: Representation) -> list[PhaseState]:
    """The ``|m, phi>`` family matching a representation."""
    return fourier_states(rep.levels, rep.phi, rep.kappa)

