"""Moment table: closed forms against the quadrature oracle, and the reducer."""

from __future__ import annotations

from fractions import Fraction

import pytest
from mpmath import mp

from crownvol.moments import (DenomKind, DivergentMomentError, ParityError,
                              moment, moment_quadrature, reduce_integral)
from crownvol.precision import eval_symbolic
from crownvol.ring import GradedMonomial, PiPolynomial, SymbolicValue


def _sym(coeff, log2=0, zeta=(), beta=()):
    return SymbolicValue.monomial(
        GradedMonomial.make(log2_exp=log2, zeta=dict(zeta), beta=dict(beta)), coeff)


# every supported (power <= 9, denominator) combination
SUPPORTED = [(k, p)
             for k in (DenomKind.SINH_FULL, DenomKind.SINH_HALF_COSH_HALF,
                       DenomKind.SINH_HALF)
             for p in (2, 4, 6, 8)] + \
            [(k, p)
             for k in (DenomKind.COSH_SQ_HALF, DenomKind.COSH_HALF)
             for p in (1, 3, 5, 7, 9)] + \
            [(DenomKind.SINH_SQ_HALF, p) for p in (3, 5, 7, 9)]


class TestMomentValues:
    def test_even_power_over_full_sinh(self):
        assert moment(2, DenomKind.SINH_FULL) == _sym(Fraction(7, 2), zeta={3: 1})

    def test_first_power_over_cosh_sq_half(self):
        assert moment(1, DenomKind.COSH_SQ_HALF) == _sym(4, log2=1)

    def test_first_power_over_cosh_half(self):
        assert moment(1, DenomKind.COSH_HALF) == _sym(8, beta={2: 1})

    def test_cube_over_sinh_sq_half(self):
        assert moment(3, DenomKind.SINH_SQ_HALF) == _sym(24, zeta={3: 1})

    def test_half_argument_substitution_coherence(self):
        for k in (1, 2, 3, 4):
            lhs = moment(2 * k, DenomKind.SINH_HALF)
            rhs = moment(2 * k, DenomKind.SINH_FULL) * Fraction(2 ** (2 * k + 1))
            assert lhs == rhs

    def test_double_angle_reduction(self):
        for p in (2, 4, 6):
            assert moment(p, DenomKind.SINH_HALF_COSH_HALF) == \
                moment(p, DenomKind.SINH_FULL) * 2

    @pytest.mark.parametrize("kind,power", SUPPORTED,
                             ids=[f"{k.name}-p{p}" for k, p in SUPPORTED])
    def test_against_quadrature_oracle(self, kind, power):
        exact = eval_symbolic(moment(power, kind), None, 128)
        numeric = moment_quadrature(power, kind, 113)
        with mp.workprec(160):
            rel = abs(exact.value - numeric.value) / abs(exact.value)
            assert rel <= mp.mpf("1e-20")
            assert abs(exact.value - numeric.value) <= exact.abs_error + numeric.abs_error


class TestMomentErrors:
    def test_divergent_combinations(self):
        with pytest.raises(DivergentMomentError):
            moment(0, DenomKind.SINH_FULL)
        with pytest.raises(DivergentMomentError):
            moment(1, DenomKind.SINH_SQ_HALF)
        with pytest.raises(DivergentMomentError):
            moment(0, DenomKind.SINH_HALF)

    def test_wrong_parity(self):
        with pytest.raises(ParityError):
            moment(3, DenomKind.SINH_FULL)
        with pytest.raises(ParityError):
            moment(2, DenomKind.COSH_HALF)
        with pytest.raises(ParityError):
            moment(4, DenomKind.SINH_SQ_HALF)


class TestReduceIntegral:
    def test_single_monomial_pass_through(self):
        p = PiPolynomial("l", {(0, 2): 1})
        assert reduce_integral(p, DenomKind.SINH_FULL) == _sym(Fraction(7, 2), zeta={3: 1})

    def test_linearity(self):
        p = PiPolynomial("l", {(0, 3): Fraction(2, 3)})
        q = PiPolynomial("l", {(1, 1): Fraction(5)})
        combined = reduce_integral(p + q, DenomKind.COSH_SQ_HALF)
        assert combined == (reduce_integral(p, DenomKind.COSH_SQ_HALF)
                            + reduce_integral(q, DenomKind.COSH_SQ_HALF))

    def test_mixed_polynomial_against_quadrature(self):
        # int (l^3 + pi^2 l) / cosh^2(l/2) dl, checked numerically
        p = PiPolynomial("l", {(0, 3): 1, (1, 1): 1})
        exact = eval_symbolic(reduce_integral(p, DenomKind.COSH_SQ_HALF), None, 128)
        with mp.workprec(160):
            numeric = mp.quad(
                lambda l: (l ** 3 + mp.pi ** 2 * l) / mp.cosh(l / 2) ** 2, [0, 200])
            assert abs(exact.value - numeric) / abs(numeric) <= mp.mpf("1e-20")

    def test_divergent_monomial_named(self):
        p = PiPolynomial("l", {(2, 0): 1})
        with pytest.raises(DivergentMomentError, match=r"pi\^4\*l\^0"):
            reduce_integral(p, DenomKind.SINH_FULL)
