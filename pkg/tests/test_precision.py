"""Constant evaluation, the dual-route cross-check, and interval arithmetic."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from mpmath import mp, mpf

from crownvol.precision import (PrecisionValue, UnassignedVariableError,
                                constant_crosscheck, eval_constant,
                                eval_symbolic, pv_cosh, pv_sinh)
from crownvol.ring import GradedMonomial, SymbolicValue

ALL_KINDS = ["pi", "log2", ("zeta", 3), ("zeta", 5), ("zeta", 7),
             ("beta", 2), ("beta", 4), ("beta", 6)]


class TestEvalConstant:
    def test_pi(self):
        v = eval_constant("pi", 64)
        with mp.workdps(40):
            assert abs(v.value - mp.pi) <= v.abs_error
            assert v.abs_error <= abs(v.value) * (mpf(2) ** -64) * mpf("1.001")

    def test_beta2_is_catalan(self):
        v = eval_constant(("beta", 2), 64)
        with mp.workdps(40):
            assert abs(v.value - mp.catalan) <= v.abs_error
        assert str(v.value).startswith("0.915965594")

    def test_zeta3(self):
        v = eval_constant(("zeta", 3), 64)
        assert str(v.value).startswith("1.202056903")

    def test_unsupported_kinds(self):
        with pytest.raises(ValueError):
            eval_constant(("zeta", 2), 64)   # even zeta folds into pi powers
        with pytest.raises(ValueError):
            eval_constant(("zeta", 4), 64)
        with pytest.raises(ValueError):
            eval_constant(("beta", 3), 64)
        with pytest.raises(ValueError):
            eval_constant("e", 64)
        with pytest.raises(ValueError):
            eval_constant("pi", 8)

    def test_deterministic(self):
        for kind in ALL_KINDS:
            a = eval_constant(kind, 96)
            b = eval_constant(kind, 96)
            assert a.value == b.value and a.abs_error == b.abs_error

    @pytest.mark.parametrize("kind", ALL_KINDS, ids=str)
    def test_dual_route_agreement_128_bits(self, kind):
        primary = eval_constant(kind, 128)
        independent = constant_crosscheck(kind, 128)
        with mp.workprec(200):
            assert abs(primary.value - independent.value) <= (
                primary.abs_error + independent.abs_error)
            # both routes really deliver ~128 bits
            assert abs(primary.value - independent.value) <= abs(primary.value) * mpf(2) ** -120

    def test_error_bound_honest_vs_higher_precision(self):
        for kind in ALL_KINDS:
            lo = eval_constant(kind, 64)
            hi = eval_constant(kind, 192)
            assert abs(lo.value - hi.value) <= lo.abs_error


class TestPrecisionValueArithmetic:
    def _rand_pv(self, rng):
        with mp.workprec(80):
            v = mpf(rng.uniform(-4, 4))
            e = mpf(abs(rng.uniform(0, 1e-6)))
            return PrecisionValue(v, e), (v, e)

    def test_interval_containment_random_ops(self):
        rng = random.Random(31415)
        with mp.workprec(80):
            for _ in range(300):
                a, (av, ae) = self._rand_pv(rng)
                b, (bv, be) = self._rand_pv(rng)
                # true values anywhere inside the operand intervals
                ta = av + ae * rng.uniform(-1, 1)
                tb = bv + be * rng.uniform(-1, 1)
                assert (a + b).contains(ta + tb)
                assert (a - b).contains(ta - tb)
                assert (a * b).contains(ta * tb)
                if abs(bv) > 2 * be + mpf("0.01"):
                    assert (a / b).contains(ta / tb)

    def test_pow_int(self):
        with mp.workprec(80):
            x = PrecisionValue(mpf(3), mpf("1e-10"))
            assert x.pow_int(5).contains(mpf(3) ** 5)
            assert x.pow_int(0).value == 1

    def test_division_by_interval_containing_zero(self):
        with mp.workprec(64):
            with pytest.raises(ZeroDivisionError):
                PrecisionValue(mpf(1), mpf(0)) / PrecisionValue(mpf("1e-9"), mpf(1))

    def test_hyperbolic_wrappers(self):
        with mp.workprec(80):
            x = PrecisionValue(mpf(2), mpf("1e-12"))
            assert pv_sinh(x).contains(mp.sinh(2))
            assert pv_cosh(x).contains(mp.cosh(2))


class TestEvalSymbolic:
    def test_pi_squared_over_six(self):
        v = SymbolicValue.pi_power(2, Fraction(1, 6))
        out = eval_symbolic(v, None, 113)
        assert str(out.value).startswith("1.644934066")

    def test_empty_sum_is_exact_zero(self):
        out = eval_symbolic(SymbolicValue.zero(), None, 64)
        assert out.value == 0 and out.abs_error == 0

    def test_log2_value(self):
        v = SymbolicValue.monomial(GradedMonomial.make(log2_exp=1), 1)
        out = eval_symbolic(v, None, 113)
        assert str(out.value).startswith("0.693147180")

    def test_unassigned_variable(self):
        v = SymbolicValue.variable("d")
        with pytest.raises(UnassignedVariableError):
            eval_symbolic(v, None, 64)
        with pytest.raises(UnassignedVariableError):
            eval_symbolic(v, {"x": PrecisionValue(mpf(1), mpf(0))}, 64)

    def test_eval_respects_products(self):
        rng = random.Random(999)
        zeta3 = GradedMonomial.make(zeta={3: 1})
        with mp.workprec(140):
            for _ in range(25):
                a = (SymbolicValue.pi_power(rng.randint(0, 2), Fraction(rng.randint(1, 5)))
                     + SymbolicValue.monomial(zeta3, Fraction(rng.randint(-5, 5))))
                b = (SymbolicValue.monomial(GradedMonomial.make(log2_exp=1),
                                            Fraction(rng.randint(-4, 4)))
                     + SymbolicValue.rational(Fraction(rng.randint(1, 3), 2)))
                lhs = eval_symbolic(a * b, None, 113)
                ra = eval_symbolic(a, None, 113)
                rb = eval_symbolic(b, None, 113)
                rhs = ra * rb
                assert abs(lhs.value - rhs.value) <= lhs.abs_error + rhs.abs_error
