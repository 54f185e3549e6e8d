"""Exactly solvable systems with a level gap linear in ``n``.

A spectrum with ``e_{n+1} - e_n = a n + b`` gives ``e_n = a n (n-1) / 2 + b n``
and realizes the oscillator algebra with ``kappa = a / (2 b)`` after
rescaling the ladder operators by ``sqrt(b)``. Three systems are covered:

================  ========  ===============  =================
system            a         b                kappa
================  ========  ===============  =================
harmonic          0         1                0
Poschl-Teller     1         (u + v + 1) / 2  1 / (u + v + 1)
Morse             -1        l - 1/2          -1 / (2 l - 1)
================  ========  ===============  =================

Everything here lives at the level of spectra and matrix elements in the
energy eigenbasis; the x-space potentials are carried as text only.

The weights used by the discrete phase states are products of the
*physical* energies, ``E(n) = e_1 ... e_n = b^n F(1) ... F(n)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import KappaParam, structure_value
from .phase import PhaseState, WeightTable, fourier_states, weighted_states, weights_from_levels

DEFAULT_CUTOFF = 32


def _exact(x, name: str) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError(f"{name} must be a number")
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        # decimal literal rather than binary expansion
        return Fraction(repr(x))
    raise TypeError(f"{name} must be a number, got {type(x).__name__}")


@dataclass(frozen=True)
class HarmonicOscillator:
    name = "ho"
    potential_text = "v0(x) = (x^2 - 1) / 2"
    superpotential_text = "w(x) = x"

    def compact(self) -> str:
        return "ho"


@dataclass(frozen=True)
class PoschlTeller:
    u: Fraction
    v: Fraction
    name = "pt"
    potential_text = (
        "v0(x) = [u(u-1)/sin^2(x/2) + v(v-1)/cos^2(x/2)] / 8 - (u+v)^2 / 8"
    )
    superpotential_text = "w(x) = (u cot(x/2) - v tan(x/2)) / 2"

    def __post_init__(self):
        u, v = _exact(self.u, "u"), _exact(self.v, "v")
        if not (u > 1 and v > 1):
            raise ValueError(f"Poschl-Teller needs u > 1 and v > 1, got u={u}, v={v}")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    def compact(self) -> str:
        return f"pt:u={self.u},v={self.v}"


@dataclass(frozen=True)
class Morse:
    l: int  # noqa: E741
    name = "morse"
    potential_text = "v0(x) = [exp(-2x) - (2l+1) exp(-x) + l^2] / 2"
    superpotential_text = "w(x) = l - exp(-x)"

    def __post_init__(self):
        if isinstance(self.l, bool) or int(self.l) != self.l or self.l < 1:
            raise ValueError(f"Morse needs a positive integer l, got {self.l!r}")
        object.__setattr__(self, "l", int(self.l))

    def compact(self) -> str:
        return f"morse:l={self.l}"


PotentialSpec = HarmonicOscillator | PoschlTeller | Morse

_KV = re.compile(r"^\s*(\w+)\s*=\s*([^,]+?)\s*$")


def parse_potential(text: str) -> PotentialSpec:
    """Parse ``"ho"``, ``"pt:u=2,v=3"`` or ``"morse:l=4"``."""
    head, _, tail = text.strip().partition(":")
    head = head.strip().lower()
    params = {}
    if tail.strip():
        for item in tail.split(","):
            match = _KV.match(item)
            if not match:
                raise ValueError(f"cannot parse potential parameter {item!r}")
            params[match.group(1).lower()] = match.group(2)
    try:
        if head == "ho":
            if params:
                raise ValueError("ho takes no parameters")
            return HarmonicOscillator()
        if head == "pt":
            if set(params) != {"u", "v"}:
                raise ValueError("pt needs exactly u and v")
            return PoschlTeller(Fraction(params["u"]), Fraction(params["v"]))
        if head == "morse":
            if set(params) != {"l"}:
                raise ValueError("morse needs exactly l")
            return Morse(int(params["l"]))
    except (ZeroDivisionError, ValueError) as exc:
        raise ValueError(f"bad potential {text!r}: {exc}") from None
    raise ValueError(f"unknown potential {head!r}; expected ho, pt or morse")


@dataclass(frozen=True)
class SpectrumParams:
    """``e_n = a n (n-1) / 2 + b n`` on ``n < levels``."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        a, b = Fraction(self.a), Fraction(self.b)
        if b <= 0:
            raise ValueError("b must be positive")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def kappa_equiv(self) -> Fraction:
        return self.a / (2 * self.b)

    @property
    def kappa(self) -> KappaParam:
        return KappaParam.of(self.kappa_equiv)

    @property
    def levels(self) -> int | float:
        return truncation_order(self)


def to_spectrum_params(spec: PotentialSpec) -> SpectrumParams:
    if isinstance(spec, HarmonicOscillator):
        return SpectrumParams(Fraction(0), Fraction(1))
    if isinstance(spec, PoschlTeller):
        return SpectrumParams(Fraction(1), (spec.u + spec.v + 1) / 2)
    if isinstance(spec, Morse):
        return SpectrumParams(Fraction(-1), Fraction(2 * spec.l - 1, 2))
    raise TypeError(f"not a potential spec: {spec!r}")


def truncation_order(params: SpectrumParams) -> int | float:
    """Number of nondegenerate levels, ``math.inf`` when ``a >= 0``.

    For ``a < 0`` with ``r = -2 b / a`` an integer::

        s = -b/a + 3/2   (r odd)
        s = -b/a + 1     (r even)

    Other ``a < 0`` combinations are rejected as unsupported.
    """
    a, b = params.a, params.b
    if a >= 0:
        return math.inf
    r = -2 * b / a
    if r.denominator != 1:
        raise ValueError(f"a < 0 with -2b/a = {r} not an integer: no truncation rule")
    if r.numerator % 2:
        s = -b / a + Fraction(3, 2)
    else:
        s = -b / a + 1
    return int(s)


def energy(params: SpectrumParams, n: int) -> Fraction:
    """``e_n = a n (n-1) / 2 + b n`` (exact)."""
    if n < 0 or n >= truncation_order(params):
        raise ValueError(f"level {n} outside the admitted range")
    return params.a * n * (n - 1) / 2 + params.b * n


def energies(params: SpectrumParams, count: int) -> tuple[Fraction, ...]:
    return tuple(energy(params, n) for n in range(count))


def energy_via_structure(params: SpectrumParams, n: int) -> Fraction:
    """``b F(n)`` with ``F`` taken at ``kappa = a / (2 b)``."""
    return params.b * structure_value(params.kappa, n)


def gamma_weight(spec: PotentialSpec, n: int) -> float:
    """Closed-form ``E(n)`` through Gamma functions, via ``lgamma``."""
    if isinstance(spec, HarmonicOscillator):
        log = math.lgamma(n + 1)
    elif isinstance(spec, PoschlTeller):
        w = float(spec.u + spec.v)
        log = math.lgamma(n + 1) + math.lgamma(n + w + 1) - n * math.log(2) - math.lgamma(w + 1)
    elif isinstance(spec, Morse):
        log = math.lgamma(n + 1) + math.lgamma(2 * spec.l) - n * math.log(2) - math.lgamma(2 * spec.l - n)
    else:
        raise TypeError(f"not a potential spec: {spec!r}")
    return math.exp(log)


@dataclass(frozen=True)
class WeightReport:
    spec: PotentialSpec
    weights: WeightTable
    gamma_values: tuple[float, ...]
    max_rel_err: float


def weight_table(spec: PotentialSpec, n_max: int) -> WeightReport:
    """``E(0..n_max)`` as products of physical energies, checked against Gamma forms."""
    params = to_spectrum_params(spec)
    if n_max < 0 or n_max >= truncation_order(params):
        raise ValueError(f"n_max = {n_max} outside the admitted range")
    table = weights_from_levels(energies(params, n_max + 1))
    gammas = tuple(gamma_weight(spec, n) for n in range(n_max + 1))
    rel = np.abs(table.values - np.array(gammas)) / np.array(gammas)
    return WeightReport(spec, table, gammas, float(rel.max()))


def _check_size(spec: PotentialSpec, s: int, cutoff: int) -> SpectrumParams:
    params = to_spectrum_params(spec)
    limit = truncation_order(params)
    if s < 1:
        raise ValueError("s must be positive")
    if limit != math.inf and s > limit:
        raise ValueError(f"s = {s} exceeds the truncation order {limit}")
    if limit == math.inf and s > cutoff:
        raise ValueError(f"s = {s} exceeds the numerical cutoff {cutoff}")
    return params


@dataclass(frozen=True)
class PhysicalStates:
    fourier: list[PhaseState]
    weighted: list[PhaseState]


def physical_phase_states(spec: PotentialSpec, s: int, phi: float, cutoff: int = DEFAULT_CUTOFF) -> PhysicalStates:
    """Both discrete phase-state families in the energy eigenbasis ``|Psi_n>``.

    ``fourier``: ``s^(-1/2) sum_n exp(-i e_n phi) q_s^(n m) |Psi_n>``.
    ``weighted``: ``C_0 sum_n E(n)^(-1/2) exp(-i e_n phi) q_s^(n mu) |Psi_n>``.
    """
    params = _check_size(spec, s, cutoff)
    levels = energies(params, s)
    kappa = params.kappa
    return PhysicalStates(
        fourier=fourier_states(levels, phi, kappa),
        weighted=weighted_states(levels, weights_from_levels(levels), phi, kappa),
    )


def physical_ladder(spec: PotentialSpec, s: int, phi: float, cutoff: int = DEFAULT_CUTOFF):
    """``(a-, a+)`` with ``<Psi_{n-1}| a- |Psi_n> = sqrt(e_n) exp(i (e_n - e_{n-1}) phi)``."""
    params = _check_size(spec, s, cutoff)
    e = energies(params, s)
    a_minus = np.zeros((s, s), dtype=complex)
    for n in range(1, s):
        a_minus[n - 1, n] = math.sqrt(e[n]) * np.exp(1j * float(e[n] - e[n - 1]) * phi)
    return a_minus, a_minus.conj().T


def quantized_physical_phi(spec: PotentialSpec, s: int, p: int) -> float:
    """Physical ``phi`` reproducing the truncated-route MUB states.

    The algebraic quantization ``2 pi p / (s kappa)`` multiplies ``F(n)``;
    physical phases multiply ``e_n = b F(n)``, hence the extra ``1/b``.
    """
    params = to_spectrum_params(spec)
    kappa = params.kappa_equiv
    if kappa == 0 or (1 / kappa).denominator != 1:
        raise ValueError(f"MUB hand-off needs 1/kappa integer, got kappa = {kappa}")
    return 2 * math.pi * p / (s * float(kappa * params.b))


def report(spec: PotentialSpec, s: int | None = None) -> dict:
    """JSON-ready summary of the spectrum, weights and Gamma cross-check."""
    params = to_spectrum_params(spec)
    limit = truncation_order(params)
    if s is None:
        s = DEFAULT_CUTOFF if limit == math.inf else int(limit)
    _check_size(spec, s, max(s, DEFAULT_CUTOFF))
    levels = energies(params, s)
    weights = weight_table(spec, s - 1)
    return {
        "variant": spec.compact(),
        "a": str(params.a),
        "b": str(params.b),
        "kappa": KappaParam.of(params.kappa_equiv).to_json(),
        "s": s,
        "truncation_order": None if limit == math.inf else int(limit),
        "energies": [float(e) for e in levels],
        "weights": [float(x) for x in weights.weights.values],
        "gamma_check": {"max_rel_err": weights.max_rel_err},
        "potential": spec.potential_text,
        "superpotential": spec.superpotential_text,
    }
