"""Invariant suite over the built-in parameter grid.

Each check reduces a family of identities to one number: the worst residual
over its grid cells (or, for lower-bound checks, the smallest witness).
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import mub, phase, potentials
from .algebra import (
    KappaParam,
    build_representation,
    commutator_residual,
    degeneracy_report,
    structure_function,
)
from .config import Tolerances

FINITE_DIMS = tuple(range(2, 13))
PHIS = (0.0, 0.3, 1.7)
TIMES = (0.0, 0.7, -2.1)
PRIMES = (2, 3, 5, 7, 11, 13)
TRUNCATED_KAPPAS = (Fraction(1), Fraction(1, 2), Fraction(-1, 3), Fraction(-1, 5))
TRUNCATED_SIZES = tuple(range(2, 9))
THETA_NMAX = 24


@dataclass
class CheckResult:
    name: str
    value: float
    threshold: float
    passed: bool
    cells: int
    # "max": value is a worst residual that must stay below threshold;
    # "min": value is a smallest witness that must exceed threshold
    mode: str = "max"
    note: str = ""


def truncated_grid():
    """``(kappa, s)`` pairs of the default grid that admit a representation."""
    for k in TRUNCATED_KAPPAS:
        kappa = KappaParam.of(k)
        for s in TRUNCATED_SIZES:
            if kappa.is_finite_regime and s > 1 + kappa.denominator:
                continue
            yield kappa, s


def finite_reps():
    for d in FINITE_DIMS:
        for phi in PHIS:
            yield build_representation(KappaParam.for_dimension(d), phi, d)


def truncated_reps():
    for kappa, s in truncated_grid():
        for phi in PHIS:
            yield build_representation(kappa, phi, s, truncated=True)


def _worst(values) -> tuple[float, int]:
    values = list(values)
    return (float(max(values)) if values else 0.0), len(values)


def check_algebra(tol: Tolerances) -> list[CheckResult]:
    out = []
    comm = [commutator_residual(r) for r in finite_reps()]
    v, n = _worst(max(c.residual, abs(c.trace)) for c in comm)
    out.append(CheckResult("commutator_finite", v, tol.matrix, v < tol.matrix, n))

    comm = [commutator_residual(r) for r in truncated_reps()]
    v, n = _worst(c.residual for c in comm)
    out.append(CheckResult("commutator_truncated", v, tol.matrix, v < tol.matrix, n))

    def nil(r):
        s = r.dim
        return max(np.abs(np.linalg.matrix_power(r.a_minus, s)).max(),
                   np.abs(np.linalg.matrix_power(r.a_plus, s)).max())

    v, n = _worst(nil(r) for r in truncated_reps())
    out.append(CheckResult("nilpotency_truncated", v, tol.matrix, v < tol.matrix, n))

    reps = list(finite_reps()) + list(truncated_reps())
    v, n = _worst(float(np.abs(r.a_plus - r.a_minus.conj().T).max()) for r in reps)
    out.append(CheckResult("adjointness", v, tol.matrix, v < tol.matrix, n))

    cells = []
    for kappa in [KappaParam.for_dimension(d) for d in FINITE_DIMS] + [KappaParam.of(k) for k in (0, 1, Fraction(1, 2), Fraction(1, 3))]:
        n_max = 20 if not kappa.is_finite_regime else kappa.denominator
        F = structure_function(kappa, n_max).values
        cells.extend(abs(F[j + 1] - F[j] - (1 + 2 * kappa.value * j)) for j in range(n_max))
    v, n = _worst(float(c) for c in cells)
    out.append(CheckResult("recurrence_exact", v, 0.0, v == 0.0, n, note="exact rational"))

    bad = 0
    for d in FINITE_DIMS:
        kappa = KappaParam.for_dimension(d)
        F = structure_function(kappa, d - 1).values
        bad += sum(F[j] != F[d - j] for j in range(1, d))
        rep = degeneracy_report(kappa)
        expected = [0, d // 2] if d % 2 == 0 else [0]
        bad += sorted(rep.singlets) != expected
        bad += [i for f, idx in rep.classes for i in idx if f == min(F)] != [0]
    out.append(CheckResult("degeneracy_pattern", float(bad), 0.0, bad == 0, len(FINITE_DIMS), note="count of failures"))
    return out


def check_phase_operators(tol: Tolerances) -> list[CheckResult]:
    reps = list(finite_reps()) + list(truncated_reps())
    uni, pw, pol, eig, clo = [], [], [], [], []
    for rep in reps:
        E = phase.phase_operator(rep)
        uni.append(phase.unitarity_residual(E.matrix))
        pw.append(phase.power_identity_residual(E.matrix))
        pol.append(phase.polar_residual(rep, E))
        states = phase.states_for(rep)
        for st in states:
            eig.append(phase.eigen_residual(E.matrix, st, phase.root_of_unity_power(st.index, rep.dim)))
        clo.append(phase.closure_residual(states))
    out = []
    for name, vals in [("phase_unitary", uni), ("phase_power", pw), ("polar_decomposition", pol),
                       ("phase_eigen", eig), ("phase_closure", clo)]:
        v, n = _worst(vals)
        out.append(CheckResult(name, v, tol.matrix, v < tol.matrix, n))

    cut = []
    for k in (0, Fraction(1, 2), 1):
        for phi in PHIS:
            ids = phase.cutoff_identities(phase.phase_operator_infinite_cutoff(k, phi, THETA_NMAX))
            cut.append(max(ids.left, ids.right))
    v, n = _worst(cut)
    out.append(CheckResult("cutoff_identities", v, tol.matrix, v < tol.matrix, n, note="E E^dagger last entry excluded"))

    theta = [phase.theta_closure_residual(k, phi, THETA_NMAX, THETA_NMAX + 1 + extra)
             for k in (0, Fraction(1, 2), 1) for phi in PHIS for extra in (0, 7)]
    v, n = _worst(theta)
    out.append(CheckResult("theta_closure", v, tol.matrix, v < tol.matrix, n))
    return out


def check_temporal(tol: Tolerances) -> list[CheckResult]:
    res = []
    for rep in list(finite_reps()) + list(truncated_reps()):
        for t in TIMES:
            later = phase.fourier_states(rep.levels, rep.phi + t, rep.kappa)
            for st, ref in zip(phase.states_for(rep), later):
                res.append(np.abs(phase.evolve(st, t).amplitudes - ref.amplitudes).max())
            if rep.dim >= 2:
                rebuilt = build_representation(rep.kappa, rep.phi + t, rep.dim, truncated=rep.truncated)
                for st, ref in zip(phase.vs_phase_states(rep), phase.vs_phase_states(rebuilt)):
                    res.append(np.abs(phase.evolve(st, t).amplitudes - ref.amplitudes).max())
    for k in (0, Fraction(1, 2), 1):
        for phi in PHIS:
            for t in TIMES:
                for theta in (-math.pi, -1.0, 0.0, 2.5):
                    st = phase.theta_phase_state(theta, phi, k, THETA_NMAX)
                    ref = phase.theta_phase_state(theta, phi + t, k, THETA_NMAX)
                    res.append(np.abs(phase.evolve(st, t).amplitudes - ref.amplitudes).max())
    v, n = _worst(float(x) for x in res)
    return [CheckResult("temporal_stability", v, tol.matrix, v < tol.matrix, n)]


def _gram(states) -> np.ndarray:
    """All direct inner products ``<a|b>`` at once."""
    A = np.column_stack([st.amplitudes for st in states])
    return A.conj().T @ A


def check_overlaps(tol: Tolerances) -> list[CheckResult]:
    rho = []
    for d in range(2, 14):
        kappa = KappaParam.for_dimension(d)
        for phi, phi2 in [(0.0, 0.0), (0.3, 1.7), (-1.1, 0.4)]:
            a = phase.phase_states(d, kappa, phi)
            b = phase.phase_states(d, kappa, phi2)
            for m, m2 in itertools.product(range(d), repeat=2):
                direct = phase.overlap(a[m], b[m2])
                rho.append(abs(direct - phase.rho_sum_overlap(d, kappa, m, phi, m2, phi2)))
    v, n = _worst(rho)
    out = [CheckResult("overlap_rho_sum", v, tol.matrix, v < tol.matrix, n)]

    gauss = []
    for d in range(2, 14):
        labels = [(p, m) for p in range(d) for m in range(d)]
        gram = _gram([mub.mub_state_finite(d, p, m) for p, m in labels])
        for (i, (p, m)), (j, (p2, m2)) in itertools.product(enumerate(labels), repeat=2):
            gauss.append(abs(gram[i, j] - mub.overlap_via_gauss(d, p, m, p2, m2)))
    v, n = _worst(gauss)
    out.append(CheckResult("overlap_gauss_finite", v, tol.matrix, v < tol.matrix, n))

    gauss = []
    for s in range(2, 14):
        labels = [(p, m) for p in range(s) for m in range(s)]
        for k in (1, Fraction(-1, s - 1)):
            gram = _gram([mub.mub_state_truncated(k, s, p, m) for p, m in labels])
            for (i, (p, m)), (j, (p2, m2)) in itertools.product(enumerate(labels), repeat=2):
                gauss.append(abs(gram[i, j] - mub.overlap_via_gauss_truncated(k, s, p, m, p2, m2)))
    v, n = _worst(gauss)
    out.append(CheckResult("overlap_gauss_truncated", v, tol.matrix, v < tol.matrix, n))
    return out


def check_mubs(tol: Tolerances) -> list[CheckResult]:
    out = []
    sets = [mub.build_mub_set(d, tol=tol.composite) for d in PRIMES]
    v, n = _worst(s.max_deviation() for s in sets)
    ok = all(s.complete and len(s) == s.dim + 1 for s in sets)
    out.append(CheckResult("mub_finite_primes", v, tol.composite, ok and v < tol.composite, n))

    odd = [d for d in PRIMES if d > 2]
    sets = [mub.build_mub_set(d, "truncated", k, tol=tol.composite) for d in odd for k in (1, Fraction(-1, d - 1))]
    v, n = _worst(s.max_deviation() for s in sets)
    ok = all(s.complete and len(s) == s.dim + 1 for s in sets)
    out.append(CheckResult("mub_truncated_odd_primes", v, tol.composite, ok and v < tol.composite, n))

    # negative controls: the construction must visibly fail here
    sets = [mub.build_mub_set(d, tol=tol.composite) for d in (4, 6)]
    sets += [mub.build_mub_set(2, "truncated", k, tol=tol.composite) for k in (1, -1)]
    witness = min(s.max_deviation() for s in sets)
    ok = all(not s.complete and s.violations() for s in sets)
    out.append(CheckResult("mub_negative_controls", witness, tol.composite, ok, len(sets), mode="min",
                           note="d=4,6 finite and s=2 truncated must be biased"))

    ortho, _ = _worst(s.orthonormality for s in [mub.build_mub_set(d) for d in range(2, 14)])
    out.append(CheckResult("mub_orthonormal", ortho, tol.matrix, ortho < tol.matrix, 12))

    pc = [mub.pseudo_commutation_check(d, p).max() for d in FINITE_DIMS for p in range(d)]
    v, n = _worst(pc)
    out.append(CheckResult("pseudo_commutation", v, tol.matrix, v < tol.matrix, n))

    gs = []
    for w in (3, 5, 7, 11, 13):
        for u in range(1, 2 * w):
            if u % w == 0:
                continue
            for v_ in range(-2 * w, 2 * w + 1):
                if (u * w + v_) % 2 == 0:
                    gs.append(abs(abs(mub.gauss_sum(u, v_, w)) - math.sqrt(w)))
    v, n = _worst(gs)
    out.append(CheckResult("gauss_modulus_odd_primes", v, tol.composite, v < tol.composite, n))
    return out


def check_vs_us(tol: Tolerances) -> list[CheckResult]:
    vp, up, sc, eig, wclo, ovl, witness = [], [], [], [], [], [], []
    for rep in truncated_reps():
        pair = phase.build_vs_us(rep)
        vp.append(phase.power_identity_residual(pair.V))
        up.append(phase.power_identity_residual(pair.U))
        sc.append(pair.s_commutation_residual())
        weights = phase.weights_from_levels(rep.levels)
        states = phase.vs_phase_states(rep, weights)
        for st in states:
            eig.append(phase.eigen_residual(pair.V, st, phase.root_of_unity_power(st.index, rep.dim)))
        wclo.append(phase.closure_residual(states, phase.weighted_closure_target(weights), 1 / rep.dim))
        for a, b in itertools.product(states, repeat=2):
            f = phase.vs_overlap_formula(rep.levels, weights, a.index, a.phi, b.index, b.phi)
            ovl.append(abs(phase.overlap(a, b) - f))
        if len(set(weights.values)) > 1:
            witness.append(pair.nonunitarity())
    out = []
    for name, vals in [("vs_power", vp), ("us_power", up), ("s_commutation", sc), ("vs_eigen", eig),
                       ("vs_weighted_closure", wclo), ("vs_overlap_formula", ovl)]:
        v, n = _worst(vals)
        out.append(CheckResult(name, v, tol.matrix, v < tol.matrix, n))
    out.append(CheckResult("vs_nonunitarity", min(witness), 0.1, min(witness) > 0.1, len(witness), mode="min"))
    return out


def _default_potentials():
    yield potentials.HarmonicOscillator(), 16
    yield potentials.PoschlTeller(2, 2), 12
    for l in range(2, 7):  # noqa: E741
        yield potentials.Morse(l), l + 1


def check_potentials(tol: Tolerances) -> list[CheckResult]:
    out = []
    link = []
    for spec, s in _default_potentials():
        params = potentials.to_spectrum_params(spec)
        link.extend(abs(float(potentials.energy(params, n) - potentials.energy_via_structure(params, n)))
                    for n in range(s))
    v, n = _worst(link)
    out.append(CheckResult("energy_structure_link", v, tol.matrix, v < tol.matrix, n))

    rel = [potentials.weight_table(potentials.HarmonicOscillator(), 20).max_rel_err]
    rel += [potentials.weight_table(potentials.PoschlTeller(u, v_), 15).max_rel_err
            for u in range(2, 6) for v_ in range(2, 6)]
    rel += [potentials.weight_table(potentials.Morse(l), l).max_rel_err for l in range(1, 11)]  # noqa: E741
    v, n = _worst(rel)
    out.append(CheckResult("gamma_weights", v, tol.composite, v < tol.composite, n, note="relative error"))

    bad = 0
    for l in range(1, 11):  # noqa: E741
        params = potentials.to_spectrum_params(potentials.Morse(l))
        s = potentials.truncation_order(params)
        bad += s != l + 1
        levels = potentials.energies(params, s)
        bad += len(set(levels)) != len(levels)
        if l >= 2:
            # negative control: past the truncation e_n = e_{2l-n} collides
            ext = [params.a * n * (n - 1) / 2 + params.b * n for n in range(2 * l)]
            bad += len(set(ext)) == len(ext)
    out.append(CheckResult("morse_truncation", float(bad), 0.0, bad == 0, 10, note="count of failures"))

    stab, veig = [], []
    for spec, s in _default_potentials():
        for phi in PHIS:
            fam = potentials.physical_phase_states(spec, s, phi)
            a_minus, a_plus = potentials.physical_ladder(spec, s, phi)
            weights = phase.weights_from_levels(potentials.energies(potentials.to_spectrum_params(spec), s))
            V = a_minus + np.linalg.matrix_power(a_plus, s - 1) * math.exp(-weights.log_values[-1])
            for st in fam.weighted:
                veig.append(phase.eigen_residual(V, st, phase.root_of_unity_power(st.index, s)))
            for t in TIMES:
                later = potentials.physical_phase_states(spec, s, phi + t)
                for a, b in zip(fam.fourier + fam.weighted, later.fourier + later.weighted):
                    stab.append(float(np.abs(phase.evolve(a, t).amplitudes - b.amplitudes).max()))
    v, n = _worst(stab)
    out.append(CheckResult("physical_temporal_stability", v, tol.matrix, v < tol.matrix, n))
    v, n = _worst(veig)
    out.append(CheckResult("physical_vs_eigen", v, tol.matrix, v < tol.matrix, n))

    hand = []
    for spec in [potentials.Morse(2), potentials.Morse(4), potentials.PoschlTeller(2, 2)]:
        params = potentials.to_spectrum_params(spec)
        s = 3 if isinstance(spec, potentials.PoschlTeller) else potentials.truncation_order(params)
        for p in range(s):
            fam = potentials.physical_phase_states(spec, s, potentials.quantized_physical_phi(spec, s, p))
            for m, st in enumerate(fam.fourier):
                ref = mub.mub_state_truncated(params.kappa, s, p, m)
                hand.append(abs(abs(np.vdot(st.amplitudes, ref.amplitudes)) - 1.0))
    v, n = _worst(hand)
    out.append(CheckResult("mub_handoff", v, tol.matrix, v < tol.matrix, n))
    return out


SECTIONS: dict[str, Callable[[Tolerances], list[CheckResult]]] = {
    "algebra": check_algebra,
    "phase_operators": check_phase_operators,
    "temporal": check_temporal,
    "overlaps": check_overlaps,
    "mub": check_mubs,
    "vs_us": check_vs_us,
    "potentials": check_potentials,
}


def run_suite(tol: Tolerances | None = None) -> list[CheckResult]:
    tol = Tolerances.from_env() if tol is None else tol
    results = []
    for section in SECTIONS.values():
        results.extend(section(tol))
    return results


def format_table(results: list[CheckResult]) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"{'check':<{width}}  {'status':<6}  {'value':>10}  {'bound':>10}  cells"]
    for r in results:
        bound = (">" if r.mode == "min" else "<") + f"{r.threshold:.1e}"
        lines.append(f"{r.name:<{width}}  {'PASS' if r.passed else 'FAIL':<6}  {r.value:>10.3e}  {bound:>10}  {r.cells}")
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    return "\n".join(lines)


def to_rows(results: list[CheckResult]) -> list[dict]:
    return [asdict(r) for r in results]


def format_csv(results: list[CheckResult]) -> str:
    buf = io.StringIO()
    rows = to_rows(results)
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()
