import math
from fractions import Fraction

import numpy as np
import pytest
from conftest import finite_dims, nonneg_kappas, phis, truncated_kappa_size
from hypothesis import given
from hypothesis import strategies as st

import oracles
from phasekit import algebra
from phasekit.algebra import (
    KappaParam,
    Representation,
    RepresentationError,
    build_representation,
    commutator_residual,
    degeneracy_report,
    dimension_of,
    nilpotency_check,
    structure_function,
)


class TestKappaParam:
    def test_reduces(self):
        k = KappaParam(2, -6)
        assert (k.numerator, k.denominator) == (-1, 3)

    @pytest.mark.parametrize("raw", ["-1/3", Fraction(-1, 3), KappaParam(-1, 3), " -2/6 "])
    def test_coercion(self, raw):
        assert KappaParam.of(raw) == KappaParam(-1, 3)

    def test_float_rejected(self):
        with pytest.raises(TypeError):
            KappaParam.of(0.5)

    def test_zero_denominator(self):
        with pytest.raises(ValueError):
            KappaParam(1, 0)

    def test_json(self):
        assert KappaParam.of("-1/3").to_json() == {"num": -1, "den": 3}


class TestStructureFunction:
    @pytest.mark.parametrize("kappa,n_max,expected", [
        (0, 3, [0, 1, 2, 3]),
        (Fraction(-1, 3), 3, [0, 1, Fraction(4, 3), 1]),
        (1, 2, [0, 1, 4]),
    ])
    def test_examples(self, kappa, n_max, expected):
        assert list(structure_function(kappa, n_max).values) == expected
        assert expected == oracles.structure_by_recurrence(Fraction(kappa), n_max)

    def test_closed_form_d4(self):
        d = 4
        F = structure_function(KappaParam.for_dimension(d), d - 1)
        assert all(F[n] == Fraction(n * (d - n), d - 1) for n in range(d))

    def test_boundary_n_equals_d_excluded(self):
        with pytest.raises(RepresentationError):
            structure_function(Fraction(-1, 3), 4)

    def test_non_representable_negative(self):
        with pytest.raises(RepresentationError):
            structure_function(Fraction(-2, 3), 1)

    @given(nonneg_kappas, st.integers(min_value=0, max_value=40))
    def test_recurrence_infinite(self, kappa, n_max):
        assert list(structure_function(kappa, n_max).values) == oracles.structure_by_recurrence(kappa, n_max)

    @given(finite_dims)
    def test_recurrence_and_symmetry_finite(self, d):
        kappa = KappaParam.for_dimension(d)
        F = structure_function(kappa, d - 1).values
        assert list(F) == oracles.structure_by_recurrence(kappa.value, d - 1)
        # F(d) = 0 closes the symmetry F(n) = F(d - n)
        full = list(F) + [Fraction(0)]
        assert all(full[n] == full[d - n] for n in range(1, d))

    @given(finite_dims)
    def test_ground_level_unique_minimum(self, d):
        F = structure_function(KappaParam.for_dimension(d), d - 1).values
        assert [n for n, f in enumerate(F) if f == min(F)] == [0]


class TestDimension:
    @pytest.mark.parametrize("kappa,expected", [("-1/3", 4), ("0", math.inf), ("-1", 2), ("5/2", math.inf)])
    def test_examples(self, kappa, expected):
        assert dimension_of(KappaParam.of(kappa)) == expected
        assert oracles.dim_formula(Fraction(kappa)) == expected

    def test_non_integer_rejected(self):
        with pytest.raises(RepresentationError, match="not a"):
            dimension_of(KappaParam.of("-2/5"))

    @given(finite_dims)
    def test_roundtrip(self, d):
        assert dimension_of(KappaParam.for_dimension(d)) == d


class TestBuildRepresentation:
    def test_qubit(self):
        rep = build_representation(-1, 0.0, 2)
        np.testing.assert_array_equal(rep.a_minus, [[0, 1], [0, 0]])
        np.testing.assert_array_equal(rep.a_plus, [[0, 0], [1, 0]])

    def test_ho_number_operator(self):
        rep = build_representation(0, 0.0, 3, truncated=True)
        np.testing.assert_allclose(rep.a_plus @ rep.a_minus, np.diag([0, 1, 2]), atol=1e-14)

    def test_d4_commutator(self):
        rep = build_representation(Fraction(-1, 3), 0.7, 4)
        assert commutator_residual(rep).residual < 1e-12

    def test_matches_oracle_entries(self):
        F = oracles.structure_by_recurrence(Fraction(1, 2), 5)
        rep = build_representation(Fraction(1, 2), 1.3, 6, truncated=True)
        assert oracles.max_abs_diff(rep.a_minus.tolist(), oracles.ladder_lists(F, 1.3)) < 1e-14

    def test_matrices_read_only(self):
        rep = build_representation(-1, 0.0, 2)
        with pytest.raises(ValueError):
            rep.a_minus[0, 1] = 2

    def test_size_one(self):
        rep = build_representation(0, 0.2, 1, truncated=True)
        assert rep.a_minus.shape == (1, 1) and rep.a_minus[0, 0] == 0

    @pytest.mark.parametrize("kwargs", [
        dict(kappa=0, phi=0, size=3),
        dict(kappa=Fraction(-1, 3), phi=0, size=5),
        dict(kappa=Fraction(-1, 3), phi=0, size=5, truncated=True),
        dict(kappa=Fraction(-1, 3), phi=0, size=4, open_top=True),
        dict(kappa=1, phi=0, size=3, truncated=True, open_top=True),
        dict(kappa=1, phi=0, size=0, truncated=True),
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            build_representation(**kwargs)

    @given(finite_dims, phis)
    def test_adjoint(self, d, phi):
        rep = build_representation(KappaParam.for_dimension(d), phi, d)
        assert np.abs(rep.a_plus - rep.a_minus.conj().T).max() < 1e-14
        np.testing.assert_allclose(rep.a_plus @ rep.a_minus, rep.hamiltonian, atol=1e-12)


class TestCommutator:
    @given(finite_dims, phis)
    def test_finite_regime(self, d, phi):
        check = commutator_residual(build_representation(KappaParam.for_dimension(d), phi, d))
        assert check.residual < 1e-12
        assert abs(check.trace) < 1e-12

    def test_truncated_ho_against_plain_rhs(self):
        rep = build_representation(0, 0.0, 4, truncated=True)
        comm = rep.a_minus @ rep.a_plus - rep.a_plus @ rep.a_minus
        diff = comm - algebra.commutator_rhs(rep, "algebra")
        assert abs(diff[3, 3] + 4) < 1e-12
        assert commutator_residual(rep, "algebra").residual == pytest.approx(4.0)

    def test_truncated_half(self):
        rep = build_representation(Fraction(1, 2), 0.4, 3, truncated=True)
        assert commutator_residual(rep).residual < 1e-12

    @given(truncated_kappa_size(), phis)
    def test_truncated_grid(self, ks, phi):
        kappa, s = ks
        rep = build_representation(kappa, phi, s, truncated=True)
        assert commutator_residual(rep).residual < 1e-12
        assert commutator_residual(rep).rhs == "truncated"

    def test_open_top_excludes_last(self):
        rep = build_representation(1, 0.3, 6, open_top=True)
        check = commutator_residual(rep)
        assert check.excluded == (5,)
        assert check.residual < 1e-12

    def test_unknown_rhs(self):
        with pytest.raises(ValueError):
            commutator_residual(build_representation(-1, 0, 2), "other")


class TestDegeneracy:
    def test_d4(self):
        rep = degeneracy_report(Fraction(-1, 3))
        assert rep.classes == ((0, (0,)), (1, (1, 3)), (Fraction(4, 3), (2,)))

    def test_d3(self):
        rep = degeneracy_report(Fraction(-1, 2))
        assert rep.singlets == [0]
        assert rep.classes[1] == (1, (1, 2))

    def test_d2(self):
        assert degeneracy_report(-1).singlets == [0, 1]

    def test_infinite_rejected(self):
        with pytest.raises(RepresentationError):
            degeneracy_report(0)

    @given(finite_dims)
    def test_pairs(self, d):
        rep = degeneracy_report(KappaParam.for_dimension(d))
        expected = [0, d // 2] if d % 2 == 0 else [0]
        assert rep.singlets == expected
        assert all(len(idx) <= 2 for _, idx in rep.classes)


class TestNilpotency:
    def test_ho_s2(self):
        assert nilpotency_check(build_representation(0, 0.0, 2, truncated=True))

    def test_kappa1_s5(self):
        assert nilpotency_check(build_representation(1, 0.9, 5, truncated=True))

    def test_open_top_flagged(self):
        assert not nilpotency_check(build_representation(1, 0.0, 5, open_top=True))

    @given(truncated_kappa_size(), phis)
    def test_grid(self, ks, phi):
        kappa, s = ks
        assert nilpotency_check(build_representation(kappa, phi, s, truncated=True))


class TestJson:
    @given(truncated_kappa_size(), phis)
    def test_roundtrip(self, ks, phi):
        kappa, s = ks
        rep = build_representation(kappa, phi, s, truncated=True)
        back = Representation.from_json(rep.to_json())
        assert back.kappa == rep.kappa and back.dim == rep.dim
        np.testing.assert_array_equal(back.a_minus, rep.a_minus)
        assert commutator_residual(back).residual < 1e-12

    def test_schema(self):
        data = build_representation(Fraction(-1, 3), 0.7, 4).to_json()
        assert {"dim", "phi", "kappa", "a_plus", "a_minus"} <= set(data)
        assert data["kappa"] == {"num": -1, "den": 3}
        assert len(data["a_plus"]) == 16 and len(data["a_plus"][0]) == 2
