"""Ring axioms, canonicalization, and serialization of symbolic values."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crownvol.ring import (GradedMonomial, PiPolynomial, SymbolicValue,
                           from_json, homogeneous_degree, render_latex,
                           render_plain, ring_add, ring_mul, to_json)


def mono(pi=0, log2=0, zeta=(), beta=(), variables=()):
    return GradedMonomial.make(pi, log2, dict(zeta), dict(beta), dict(variables))


class TestGradedMonomial:
    def test_degree_grading(self):
        m = mono(pi=2, log2=1, zeta={3: 1, 5: 2}, beta={2: 1}, variables={"d": 3})
        assert m.degree == 2 + 1 + 3 + 10 + 2 + 3

    def test_zero_exponents_dropped(self):
        assert mono(zeta={3: 0}) == mono()

    def test_invalid_zeta_key(self):
        with pytest.raises(ValueError):
            mono(zeta={4: 1})
        with pytest.raises(ValueError):
            mono(zeta={1: 1})

    def test_invalid_beta_key(self):
        with pytest.raises(ValueError):
            mono(beta={3: 1})

    def test_mul_adds_exponents(self):
        a = mono(pi=1, zeta={3: 1})
        b = mono(pi=1, zeta={3: 2}, variables={"d": 1})
        assert a.mul(b) == mono(pi=2, zeta={3: 3}, variables={"d": 1})


class TestSymbolicValue:
    def test_additive_identity(self):
        v = SymbolicValue.pi_power(2, Fraction(1, 6))
        assert SymbolicValue.zero() + v == v

    def test_cancellation(self):
        z3 = mono(zeta={3: 1})
        a = SymbolicValue.monomial(z3, Fraction(7, 4))
        b = SymbolicValue.monomial(z3, Fraction(-7, 4))
        assert (a + b).is_zero

    def test_two_term_sum(self):
        # V of the (1,3)-annulus: both terms present after the sum
        a = SymbolicValue.monomial(mono(pi=2, log2=1), Fraction(1, 2))
        b = SymbolicValue.monomial(mono(zeta={3: 1}), Fraction(9, 4))
        total = ring_add(a, b)
        assert len(total) == 2
        assert total.coefficient(mono(pi=2, log2=1)) == Fraction(1, 2)
        assert total.coefficient(mono(zeta={3: 1})) == Fraction(9, 4)

    def test_scalar_multiply(self):
        x = SymbolicValue.variable("x")
        assert SymbolicValue.rational(3) * x == SymbolicValue.variable("x", 3)

    def test_pi_exponent_addition(self):
        pi1 = SymbolicValue.pi_power(1)
        assert ring_mul(pi1, pi1) == SymbolicValue.pi_power(2)

    def test_product_example(self):
        d = SymbolicValue.variable("d")
        z = SymbolicValue.monomial(mono(zeta={3: 1}), 6)
        out = ring_mul(d, z)
        assert out == SymbolicValue.monomial(mono(zeta={3: 1}, variables={"d": 1}), 6)

    def test_mul_against_hand_expansion(self):
        # independent oracle: expand coefficient lists by hand
        a = (SymbolicValue.pi_power(1, 2)
             + SymbolicValue.monomial(mono(log2=1), Fraction(1, 3)))
        b = (SymbolicValue.pi_power(1, 5)
             + SymbolicValue.monomial(mono(zeta={3: 1}), Fraction(-1, 2)))
        got = a * b
        expected = SymbolicValue({
            mono(pi=2): Fraction(10),
            mono(pi=1, zeta={3: 1}): Fraction(-1),
            mono(pi=1, log2=1): Fraction(5, 3),
            mono(log2=1, zeta={3: 1}): Fraction(-1, 6),
        })
        assert got == expected

    def test_homogeneous_degree(self):
        v = (SymbolicValue.monomial(mono(pi=2, log2=1), Fraction(1, 2))
             + SymbolicValue.monomial(mono(zeta={3: 1}), Fraction(9, 4)))
        assert homogeneous_degree(v) == 3
        assert homogeneous_degree(SymbolicValue.rational(5)) == 0
        mixed = SymbolicValue.pi_power(1) + SymbolicValue.pi_power(2)
        assert homogeneous_degree(mixed) is None

    def test_substitute(self):
        v = SymbolicValue.monomial(mono(pi=2, variables={"d": 2}), Fraction(1, 2))
        assert v.substitute("d", 3) == SymbolicValue.pi_power(2, Fraction(9, 2))


# Random small values for the property tests.
_monomials = st.builds(
    mono,
    pi=st.integers(0, 3),
    log2=st.integers(0, 2),
    zeta=st.dictionaries(st.sampled_from([3, 5]), st.integers(1, 2), max_size=2),
    variables=st.dictionaries(st.sampled_from(["d", "b1"]), st.integers(1, 2), max_size=2),
)
_coeffs = st.fractions(min_value=-6, max_value=6).filter(lambda c: c != 0)
_values = st.dictionaries(_monomials, _coeffs, max_size=4).map(SymbolicValue)


class TestRingAxioms:
    @settings(max_examples=60, deadline=None)
    @given(_values, _values, _values)
    def test_add_associative_commutative(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a

    @settings(max_examples=60, deadline=None)
    @given(_values, _values, _values)
    def test_mul_associative_distributive(self, a, b, c):
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c

    @settings(max_examples=40, deadline=None)
    @given(_values, _values)
    def test_product_degrees_add(self, a, b):
        da, db = homogeneous_degree(a), homogeneous_degree(b)
        if da is None or db is None or a.is_zero or b.is_zero:
            return
        if len(a.degrees()) == 1 and len(b.degrees()) == 1:
            prod = a * b
            if not prod.is_zero:
                assert homogeneous_degree(prod) == da + db


class TestSerialization:
    @settings(max_examples=80, deadline=None)
    @given(_values)
    def test_json_round_trip_property(self, v):
        assert from_json(to_json(v)) == v

    def test_canonical_order_is_graded(self):
        v = SymbolicValue.pi_power(3) + SymbolicValue.rational(1) + SymbolicValue.pi_power(1)
        degrees = [m.degree for m, _ in v.terms()]
        assert degrees == sorted(degrees)

    def test_json_round_trip(self):
        v = (SymbolicValue.monomial(mono(pi=2, log2=1, zeta={3: 1}, beta={2: 2},
                                         variables={"d": 1}), Fraction(-7, 12))
             + SymbolicValue.pi_power(4, Fraction(1, 2)))
        assert from_json(to_json(v)) == v

    def test_json_deterministic(self):
        v = SymbolicValue.pi_power(2, Fraction(1, 6)) + SymbolicValue.variable("d")
        assert to_json(v) == to_json(SymbolicValue.variable("d")
                                     + SymbolicValue.pi_power(2, Fraction(1, 6)))

    def test_render_plain(self):
        v = SymbolicValue.monomial(mono(zeta={3: 1}), Fraction(7, 4))
        assert render_plain(v) == "7/4 * zeta(3)"
        assert render_plain(SymbolicValue.pi_power(2, Fraction(1, 2))) == "pi^2/2"

    def test_render_latex_smoke(self):
        v = SymbolicValue.monomial(mono(pi=2, log2=1), Fraction(1, 2))
        assert "\\pi" in render_latex(v) and "\\log 2" in render_latex(v)


class TestPiPolynomial:
    def test_mul_and_degree(self):
        p = PiPolynomial("d", {(0, 2): 1, (1, 0): 4})   # d^2 + 4 pi^2
        q = PiPolynomial("d", {(0, 1): 1})              # d
        assert (p * q).coeffs() == {(0, 3): 1, (1, 1): 4}
        assert p.homogeneous_degree() == 2

    def test_to_symbolic(self):
        p = PiPolynomial("d", {(1, 1): Fraction(1, 3)})
        assert p.to_symbolic() == SymbolicValue.monomial(
            mono(pi=2, variables={"d": 1}), Fraction(1, 3))

    def test_variable_mismatch(self):
        with pytest.raises(ValueError):
            PiPolynomial("d", {(0, 1): 1}) * PiPolynomial("l", {(0, 1): 1})
