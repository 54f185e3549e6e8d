import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from conftest import finite_dims, nonneg_kappas, phis, times, truncated_kappa_size
from hypothesis import given
from hypothesis import strategies as st

import oracles
from phasekit import phase
from phasekit.algebra import KappaParam, RepresentationError, build_representation


def _rep(kappa, phi, s):
    kappa = KappaParam.of(kappa)
    if kappa.is_finite_regime and s == 1 + kappa.denominator:
        return build_representation(kappa, phi, s)
    return build_representation(kappa, phi, s, truncated=True)


class TestPhaseOperator:
    def test_qubit_shift(self):
        E = phase.phase_operator(build_representation(-1, 0.0, 2))
        np.testing.assert_allclose(E.matrix, [[0, 1], [1, 0]], atol=1e-15)
        assert E.kind == "finite_Ed"

    def test_d4(self):
        E = phase.phase_operator(build_representation(Fraction(-1, 3), 0.3, 4)).matrix
        assert phase.unitarity_residual(E) < 1e-12
        assert phase.power_identity_residual(E) < 1e-12

    def test_polar_kappa1(self):
        rep = build_representation(1, 2.3, 3, truncated=True)
        E = phase.phase_operator(rep)
        assert E.kind == "truncated_Es"
        assert phase.polar_residual(rep, E) < 1e-12

    def test_open_top_rejected(self):
        with pytest.raises(ValueError):
            phase.phase_operator(build_representation(1, 0, 4, open_top=True))

    @given(truncated_kappa_size(), phis)
    def test_identities(self, ks, phi):
        rep = _rep(ks[0], phi, ks[1])
        E = phase.phase_operator(rep)
        assert phase.unitarity_residual(E.matrix) < 1e-12
        assert phase.power_identity_residual(E.matrix) < 1e-12
        assert phase.polar_residual(rep, E) < 1e-12
        for st_ in phase.states_for(rep):
            lam = cmath.exp(2j * math.pi * st_.index / rep.dim)
            assert phase.eigen_residual(E.matrix, st_, lam) < 1e-12


class TestInfiniteCutoff:
    def test_ho_shift(self):
        E = phase.phase_operator_infinite_cutoff(0, 0.0, 3).matrix
        np.testing.assert_array_equal(E, np.eye(4, k=1))

    def test_left_identity(self):
        E = phase.phase_operator_infinite_cutoff(1, 0.5, 6).matrix
        G = E.conj().T @ E
        assert abs(G[0, 0]) == 0
        np.testing.assert_allclose(np.diag(G)[1:], 1, atol=1e-15)

    @given(nonneg_kappas, phis, st.integers(min_value=1, max_value=20))
    def test_cutoff_identities(self, kappa, phi, n_max):
        ids = phase.cutoff_identities(phase.phase_operator_infinite_cutoff(kappa, phi, n_max))
        assert ids.left < 1e-12 and ids.right < 1e-12
        assert ids.right_last_entry == 0

    @given(nonneg_kappas, phis, st.floats(min_value=-math.pi, max_value=math.pi), st.integers(2, 20))
    def test_theta_eigen_minus_last(self, kappa, phi, theta, n_max):
        E = phase.phase_operator_infinite_cutoff(kappa, phi, n_max).matrix
        v = phase.theta_phase_state(theta, phi, kappa, n_max).amplitudes
        res = E @ v - cmath.exp(1j * theta) * v
        assert np.abs(res[:-1]).max() < 1e-12

    def test_negative_kappa_rejected(self):
        with pytest.raises(RepresentationError):
            phase.phase_operator_infinite_cutoff(Fraction(-1, 2), 0, 3)


class TestPhaseStates:
    def test_qubit(self):
        s0, s1 = phase.phase_states(2, -1, 0.0)
        np.testing.assert_allclose(s0.amplitudes, np.array([1, 1]) / math.sqrt(2), atol=1e-15)
        np.testing.assert_allclose(s1.amplitudes, np.array([1, -1]) / math.sqrt(2), atol=1e-15)

    def test_d3_is_dft(self):
        states = phase.phase_states(3, Fraction(-1, 2), 0.0)
        dft = np.array([[cmath.exp(2j * math.pi * m * n / 3) for n in range(3)] for m in range(3)]) / math.sqrt(3)
        np.testing.assert_allclose(np.array([s.amplitudes for s in states]), dft, atol=1e-15)

    @given(finite_dims, phis)
    def test_against_oracle(self, d, phi):
        kappa = KappaParam.for_dimension(d)
        F = oracles.structure_by_recurrence(kappa.value, d - 1)
        for m, st_ in enumerate(phase.phase_states(d, kappa, phi)):
            assert np.abs(st_.amplitudes - oracles.fourier_vector(F, phi, m)).max() < 1e-13

    @given(finite_dims, phis)
    def test_equiprobable_and_closure(self, d, phi):
        states = phase.phase_states(d, KappaParam.for_dimension(d), phi)
        for st_ in states:
            np.testing.assert_allclose(np.abs(st_.amplitudes), 1 / math.sqrt(d), atol=1e-15)
        assert phase.closure_residual(states) < 1e-12

    def test_too_large(self):
        with pytest.raises(RepresentationError):
            phase.phase_states(5, Fraction(-1, 3), 0)

    def test_json(self):
        data = phase.phase_states(2, -1, 0.25)[1].to_json()
        assert data["label"] == {"type": "m", "m": 1, "phi": 0.25}
        assert data["dim"] == 2 and data["kappa"] == {"num": -1, "den": 1}


class TestTheta:
    def test_trivial(self):
        st_ = phase.theta_phase_state(0.0, 0.0, 1, 5)
        np.testing.assert_array_equal(st_.amplitudes, np.ones(6))
        assert not st_.normalized

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            phase.theta_phase_state(4.0, 0.0, 1, 3)

    def test_default_grid(self):
        assert len(phase.theta_grid(5)) == 24

    @given(nonneg_kappas, phis, st.integers(1, 24), st.integers(1, 10))
    def test_closure_exact_above_nmax(self, kappa, phi, n_max, extra):
        assert phase.theta_closure_residual(kappa, phi, n_max, n_max + extra) < 1e-12

    def test_closure_fails_below(self):
        # aliasing: too few points cannot resolve e^{i (n - n') theta}
        assert phase.theta_closure_residual(0, 0.0, 6, 4) > 0.5


class TestEvolve:
    def test_zero(self):
        st_ = phase.phase_states(4, Fraction(-1, 3), 0.2)[1]
        np.testing.assert_array_equal(phase.evolve(st_, 0.0).amplitudes, st_.amplitudes)

    def test_rebuild_d4(self):
        kappa = Fraction(-1, 3)
        for m in range(4):
            a = phase.evolve(phase.phase_states(4, kappa, 0.2)[m], 1.1)
            b = phase.phase_states(4, kappa, 1.3)[m]
            assert np.abs(a.amplitudes - b.amplitudes).max() < 1e-12
            assert a.phi == pytest.approx(1.3)

    def test_rebuild_mu(self):
        a = phase.vs_phase_states(build_representation(1, 0.4, 3, truncated=True))
        b = phase.vs_phase_states(build_representation(1, 1.1, 3, truncated=True))
        for x, y in zip(a, b):
            assert np.abs(phase.evolve(x, 0.7).amplitudes - y.amplitudes).max() < 1e-12

    @given(truncated_kappa_size(), phis, times)
    def test_temporal_stability(self, ks, phi, t):
        kappa, s = ks
        before, after = _rep(kappa, phi, s), _rep(kappa, phi + t, s)
        for fam in (phase.states_for, phase.vs_phase_states):
            for x, y in zip(fam(before), fam(after)):
                assert np.abs(phase.evolve(x, t).amplitudes - y.amplitudes).max() < 1e-12

    @given(nonneg_kappas, phis, times, st.floats(-math.pi, math.pi))
    def test_theta_family(self, kappa, phi, t, theta):
        a = phase.evolve(phase.theta_phase_state(theta, phi, kappa, 12), t)
        b = phase.theta_phase_state(theta, phi + t, kappa, 12)
        assert np.abs(a.amplitudes - b.amplitudes).max() < 1e-12


class TestOverlap:
    def test_self(self):
        st_ = phase.phase_states(5, Fraction(-1, 4), 0.9)[3]
        assert abs(phase.overlap(st_, st_) - 1) < 1e-14

    @given(finite_dims, phis)
    def test_orthonormal(self, d, phi):
        states = phase.phase_states(d, KappaParam.for_dimension(d), phi)
        gram = np.array([[phase.overlap(a, b) for b in states] for a in states])
        assert np.abs(gram - np.eye(d)).max() < 1e-12

    def test_rho_example(self):
        kappa = Fraction(-1, 2)
        a = phase.phase_states(3, kappa, 0.0)[0]
        b = phase.phase_states(3, kappa, 0.4)[1]
        direct = phase.overlap(a, b)
        F = oracles.structure_by_recurrence(kappa, 2)
        ref = oracles.inner(oracles.fourier_vector(F, 0.0, 0), oracles.fourier_vector(F, 0.4, 1))
        assert abs(direct - phase.rho_sum_overlap(3, kappa, 0, 0.0, 1, 0.4)) < 1e-12
        assert abs(direct - ref) < 1e-12

    @given(finite_dims, phis, phis, st.data())
    def test_rho_sum(self, d, phi, phi2, data):
        kappa = KappaParam.for_dimension(d)
        m, m2 = data.draw(st.integers(0, d - 1)), data.draw(st.integers(0, d - 1))
        direct = phase.overlap(phase.phase_states(d, kappa, phi)[m], phase.phase_states(d, kappa, phi2)[m2])
        assert abs(direct - phase.rho_sum_overlap(d, kappa, m, phi, m2, phi2)) < 1e-12

    def test_mismatch(self):
        with pytest.raises(ValueError):
            phase.overlap(phase.phase_states(2, -1, 0)[0], phase.phase_states(3, Fraction(-1, 2), 0)[0])
        a = phase.phase_states(3, Fraction(-1, 2), 0)[0]
        b = phase.phase_states(3, 1, 0)[0]
        with pytest.raises(ValueError):
            phase.overlap(a, b)


class TestWeights:
    @pytest.mark.parametrize("kappa,s,expected", [
        (0, 4, [1, 1, 2, 6]),
        (1, 3, [1, 1, 4]),
        (Fraction(-1, 3), 3, [1, 1, Fraction(4, 3)]),
    ])
    def test_examples(self, kappa, s, expected):
        w = phase.build_weights(kappa, s)
        assert list(w.exact) == expected
        F = oracles.structure_by_recurrence(Fraction(kappa), s - 1)
        assert oracles.factorial_products(F) == expected

    def test_log_domain_large(self):
        w = phase.build_weights(1, 60)
        assert w.exact is None
        F = oracles.structure_by_recurrence(Fraction(1), 59)
        ref = sum(math.log(f) for f in F[1:])
        assert w.log_values[-1] == pytest.approx(ref, rel=1e-13)
        assert np.all(np.isfinite(w.inv_sqrt()))

    def test_nonpositive_level(self):
        with pytest.raises(RepresentationError):
            phase.weights_from_levels([0, 1, 0])


class TestVsUs:
    def test_ho_s2(self):
        pair = phase.build_vs_us(build_representation(0, 0.0, 2, truncated=True))
        np.testing.assert_allclose(pair.V, [[0, 1], [1, 0]], atol=1e-15)
        assert sorted(np.linalg.eigvals(pair.V).real) == pytest.approx([-1, 1])

    def test_power_kappa1(self):
        pair = phase.build_vs_us(build_representation(1, 0.6, 3, truncated=True))
        assert phase.power_identity_residual(pair.V) < 1e-12

    def test_commutation_ho(self):
        pair = phase.build_vs_us(build_representation(0, 0.0, 3, truncated=True))
        assert pair.s_commutation_residual() < 1e-12

    def test_ho_s2_states(self):
        states = phase.vs_phase_states(build_representation(0, 0.0, 2, truncated=True))
        np.testing.assert_allclose(states[0].amplitudes, np.array([1, 1]) / math.sqrt(2))
        np.testing.assert_allclose(states[1].amplitudes, np.array([1, -1]) / math.sqrt(2))

    def test_not_orthogonal(self):
        a, b, _ = phase.vs_phase_states(build_representation(1, 0.0, 3, truncated=True))
        assert abs(phase.overlap(a, b)) > 0.01

    @given(truncated_kappa_size(), phis)
    def test_structure(self, ks, phi):
        kappa, s = ks
        rep = _rep(kappa, phi, s)
        pair = phase.build_vs_us(rep)
        assert phase.power_identity_residual(pair.V) < 1e-12
        assert phase.power_identity_residual(pair.U) < 1e-12
        assert pair.s_commutation_residual() < 1e-12
        weights = phase.weights_from_levels(rep.levels)
        states = phase.vs_phase_states(rep)
        for st_ in states:
            assert phase.eigen_residual(pair.V, st_, phase.root_of_unity_power(st_.index, s)) < 1e-12
            assert abs(np.linalg.norm(st_.amplitudes) - 1) < 1e-12
        target = phase.weighted_closure_target(weights)
        assert phase.closure_residual(states, target, 1 / s) < 1e-12
        if len(set(weights.values)) > 1:
            assert pair.nonunitarity() > 0.1

    @given(truncated_kappa_size(), phis, phis, st.data())
    def test_overlap_formula(self, ks, phi, phi2, data):
        kappa, s = ks
        mu, mu2 = data.draw(st.integers(0, s - 1)), data.draw(st.integers(0, s - 1))
        a = phase.vs_phase_states(_rep(kappa, phi, s))[mu]
        b = phase.vs_phase_states(_rep(kappa, phi2, s))[mu2]
        rep = _rep(kappa, phi, s)
        f = phase.vs_overlap_formula(rep.levels, phase.weights_from_levels(rep.levels), mu, phi, mu2, phi2)
        assert abs(phase.overlap(a, b) - f) < 1e-12

    def test_c0_real_positive(self):
        st_ = phase.vs_phase_states(build_representation(1, 0.0, 4, truncated=True))[2]
        assert st_.amplitudes[0].real > 0 and st_.amplitudes[0].imag == 0
