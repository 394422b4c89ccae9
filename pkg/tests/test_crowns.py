"""Crown closed forms, generating functions, and the n-gon formulas."""

from __future__ import annotations

from fractions import Fraction

import pytest
from mpmath import mp, mpf

from crownvol.crowns import (crown_gf_coefficients, crown_total_volume,
                             crown_volume_eval, crown_volume_fixed_neck,
                             crown_volume_zero, double_factorial,
                             ngon_conjecture_volume, ngon_gf_coefficients,
                             ngon_upper_bound)
from crownvol.moments import DenomKind
from crownvol.precision import PrecisionValue, eval_symbolic
from crownvol.ring import PiPolynomial, SymbolicValue


class TestDoubleFactorial:
    def test_conventions(self):
        assert double_factorial(-1) == 1
        assert double_factorial(0) == 1
        assert double_factorial(1) == 1
        assert double_factorial(5) == 15
        assert double_factorial(6) == 48


class TestClosedForms:
    def test_one_tine(self):
        cv = crown_volume_fixed_neck(1)
        assert cv.denom_kind == DenomKind.COSH_HALF
        assert cv.prefactor == Fraction(1, 2)
        assert cv.numerator == PiPolynomial.constant("d", 1)

    def test_two_tines(self):
        cv = crown_volume_fixed_neck(2)
        assert cv.denom_kind == DenomKind.SINH_HALF
        assert cv.prefactor == Fraction(1, 2)
        assert cv.numerator == PiPolynomial("d", {(0, 1): 1})

    def test_three_tines(self):
        cv = crown_volume_fixed_neck(3)
        assert cv.prefactor == Fraction(1, 4)
        assert cv.numerator == PiPolynomial("d", {(0, 2): 1, (1, 0): 1})

    def test_four_tines(self):
        cv = crown_volume_fixed_neck(4)
        assert cv.prefactor == Fraction(1, 12)
        assert cv.numerator == PiPolynomial("d", {(0, 3): 1, (1, 1): 4})

    def test_invalid(self):
        with pytest.raises(ValueError):
            crown_volume_fixed_neck(0)

    @pytest.mark.parametrize("n", range(1, 31))
    def test_structure_all_n(self, n):
        cv = crown_volume_fixed_neck(n)
        assert all(c > 0 for _, c in cv.numerator.items())
        assert cv.numerator.homogeneous_degree() == n - 1
        if n % 2 == 0:
            assert cv.denom_kind == DenomKind.SINH_HALF
            assert all(vp % 2 == 1 for vp in cv.numerator.var_degrees())
            assert min(cv.numerator.var_degrees()) >= 1
        else:
            assert cv.denom_kind == DenomKind.COSH_HALF
            assert cv.numerator.is_even_in_var()


class TestEvaluation:
    def test_two_tines_at_zero(self):
        out = crown_volume_eval(crown_volume_fixed_neck(2), 0)
        assert out.contains(1)
        assert out.abs_error < mpf("1e-30")

    def test_three_tines_at_zero(self):
        out = crown_volume_eval(crown_volume_fixed_neck(3), 0, 113)
        with mp.workdps(40):
            assert abs(out.value - mp.pi ** 2 / 4) <= out.abs_error
        assert str(out.value).startswith("2.4674011")

    def test_one_tine_at_two(self):
        out = crown_volume_eval(crown_volume_fixed_neck(1), 2, 113)
        with mp.workdps(40):
            assert abs(out.value - 1 / (2 * mp.cosh(1))) <= out.abs_error
        assert str(out.value).startswith("0.3240271368")

    def test_negative_neck_rejected(self):
        with pytest.raises(ValueError):
            crown_volume_eval(crown_volume_fixed_neck(2), -1)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_zero_limit_matches_symbolic(self, n):
        numeric = crown_volume_eval(crown_volume_fixed_neck(n), 0, 128)
        exact = eval_symbolic(crown_volume_zero(n), None, 128)
        assert abs(numeric.value - exact.value) <= numeric.abs_error + exact.abs_error


class TestTotalVolume:
    @pytest.mark.parametrize("n", [1, 2, 4, 7])
    def test_half_pi_power(self, n):
        assert crown_total_volume(n) == SymbolicValue.pi_power(n, Fraction(1, 2))

    def test_invalid(self):
        with pytest.raises(ValueError):
            crown_total_volume(0)


class TestCrownGeneratingFunction:
    def test_at_zero_first_coefficients(self):
        coeffs = crown_gf_coefficients(3, 0, 128)
        with mp.workdps(60):
            assert abs(coeffs[0].value - mpf(1) / 2) <= coeffs[0].abs_error
            assert abs(coeffs[1].value - 1) <= coeffs[1].abs_error
            assert abs(coeffs[2].value - mp.pi ** 2 / 4) <= coeffs[2].abs_error * 2

    @pytest.mark.parametrize("d", [0, 1, 5])
    def test_matches_closed_forms(self, d):
        coeffs = crown_gf_coefficients(12, d, 128)
        for n, got in enumerate(coeffs, start=1):
            closed = crown_volume_eval(crown_volume_fixed_neck(n), d, 160)
            with mp.workprec(180):
                rel = abs(got.value - closed.value) / abs(closed.value)
            assert rel <= mpf("1e-20"), f"n={n}, d={d}: rel dev {rel}"

    def test_error_bounds_honest(self):
        coeffs = crown_gf_coefficients(8, Fraction(1, 2), 128)
        for n, got in enumerate(coeffs, start=1):
            closed = crown_volume_eval(crown_volume_fixed_neck(n), Fraction(1, 2), 200)
            assert abs(got.value - closed.value) <= got.abs_error + closed.abs_error


class TestNgonConjectureAndBound:
    def test_table_values(self):
        assert ngon_conjecture_volume(3) == SymbolicValue.rational(1)
        assert ngon_conjecture_volume(4) == SymbolicValue.rational(1)
        assert ngon_conjecture_volume(5) == SymbolicValue.pi_power(2, Fraction(1, 6))
        assert ngon_conjecture_volume(6) == SymbolicValue.pi_power(2, Fraction(1, 3))
        assert ngon_conjecture_volume(7) == SymbolicValue.pi_power(4, Fraction(3, 40))
        assert ngon_conjecture_volume(8) == SymbolicValue.pi_power(4, Fraction(8, 45))
        assert ngon_conjecture_volume(9) == SymbolicValue.pi_power(6, Fraction(5, 112))

    def test_bound_values(self):
        assert ngon_upper_bound(6) == SymbolicValue.pi_power(2, Fraction(2, 3))
        assert ngon_upper_bound(5) == SymbolicValue.pi_power(2, Fraction(1, 4))
        assert ngon_upper_bound(4) == SymbolicValue.rational(1)

    def test_invalid(self):
        with pytest.raises(ValueError):
            ngon_conjecture_volume(2)
        with pytest.raises(ValueError):
            ngon_upper_bound(2)

    @pytest.mark.parametrize("n", range(3, 41))
    def test_bound_to_conjecture_ratio(self, n):
        assert ngon_conjecture_volume(n) * Fraction(n - 2, 2) == ngon_upper_bound(n)

    @pytest.mark.parametrize("n", range(3, 31))
    def test_bound_equals_crown_at_zero(self, n):
        assert ngon_upper_bound(n) == crown_volume_zero(n - 2)


class TestNgonGeneratingFunction:
    def test_first_coefficients(self):
        gf = ngon_gf_coefficients(5)
        assert gf[0] == SymbolicValue.rational(1)               # 3-gon
        assert gf[2] == SymbolicValue.pi_power(2, Fraction(1, 6))  # 5-gon
        assert gf[5] == SymbolicValue.pi_power(4, Fraction(8, 45))  # 8-gon

    def test_matches_conjecture_through_twenty(self):
        gf = ngon_gf_coefficients(17)
        for n in range(3, 21):
            assert gf[n - 3] == ngon_conjecture_volume(n), f"n={n}"


class TestEvenness:
    @pytest.mark.parametrize("n", range(1, 16))
    def test_numerator_even_after_removing_explicit_factor(self, n):
        cv = crown_volume_fixed_neck(n)
        if n % 2 == 0:
            # remove the explicit d: remaining powers are even
            assert all((vp - 1) % 2 == 0 for (_, vp), _ in cv.numerator.items())
        else:
            assert cv.numerator.is_even_in_var()
