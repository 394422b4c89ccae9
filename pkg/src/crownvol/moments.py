"""Closed-form hyperbolic moment integrals and the integrand reducer.

The volumes of moduli spaces with free necks reduce to integrals of the form

    int_0^inf  l^p / D(l)  dl

for the six hyperbolic denominators D that arise from products of crown
closed forms.  The full-argument identities

    int_0^inf l^(2k)   / sinh(l)    dl = 2 (2k)! (1 - 2^-(2k+1)) zeta(2k+1)
    int_0^inf l        / cosh(l)^2  dl = log 2
    int_0^inf l^(2k+1) / cosh(l)^2  dl = (2k+1)!/2^(2k) (1 - 2^-2k) zeta(2k+1)
    int_0^inf l^(2k+1) / sinh(l)^2  dl = (2k+1)!/2^(2k) zeta(2k+1)
    int_0^inf l^(2k-1) / cosh(l/2)  dl = 2^(2k+1) (2k-1)! beta(2k)

are the single source of truth; every half-argument moment is obtained from
them by the substitution l = 2t (Jacobian 2, so a factor 2^(p+1)), and
1/(sinh(l/2) cosh(l/2)) reduces to 2/sinh(l) by the double-angle identity
before integration.

Divergent or wrong-parity requests are hard errors, never limits: the volume
integrals served here are all absolutely convergent, so a divergent request
indicates caller misuse.
"""

from __future__ import annotations

import math
from enum import Enum
from fractions import Fraction

from mpmath import mp, mpf

from .precision import PrecisionValue, _slop
from .ring import GradedMonomial, PiPolynomial, SymbolicValue


class DenomKind(Enum):
    """Hyperbolic denominators appearing in neck integrals."""

    SINH_FULL = "1/sinh(l)"
    SINH_SQ_HALF = "1/sinh(l/2)^2"
    COSH_SQ_HALF = "1/cosh(l/2)^2"
    SINH_HALF = "1/sinh(l/2)"
    COSH_HALF = "1/cosh(l/2)"
    SINH_HALF_COSH_HALF = "1/(sinh(l/2)cosh(l/2))"


class DivergentMomentError(ValueError):
    """The requested moment integral diverges."""


class ParityError(ValueError):
    """The requested power has the wrong parity for this denominator."""


def _zeta_term(coeff: Fraction, s: int) -> SymbolicValue:
    return SymbolicValue.monomial(GradedMonomial.make(zeta={s: 1}), coeff)


def _require(cond_divergent_ok: bool, cond_parity_ok: bool, power: int, kind: DenomKind):
    if not cond_parity_ok:
        raise ParityError(f"moment power {power} has the wrong parity for {kind.value}")
    if not cond_divergent_ok:
        raise DivergentMomentError(f"moment of l^{power} against {kind.value} diverges")


def moment(power: int, denom: DenomKind) -> SymbolicValue:
    """Exact value of int_0^inf l^power / denom(l) dl as a ring element.

    Admissible combinations: SINH_FULL and SINH_HALF_COSH_HALF need even
    power >= 2; SINH_HALF needs even power >= 2; SINH_SQ_HALF needs odd
    power >= 3; COSH_SQ_HALF and COSH_HALF need odd power >= 1.
    """
    if power < 0:
        raise ValueError("moment power must be nonnegative")
    if denom == DenomKind.SINH_FULL:
        _require(power >= 2, power % 2 == 0, power, denom)
        k = power // 2
        c = 2 * Fraction(math.factorial(2 * k)) * (1 - Fraction(1, 2 ** (2 * k + 1)))
        return _zeta_term(c, 2 * k + 1)
    if denom == DenomKind.SINH_HALF_COSH_HALF:
        # 1/(sinh(l/2)cosh(l/2)) = 2/sinh(l)
        _require(power >= 2, power % 2 == 0, power, denom)
        return moment(power, DenomKind.SINH_FULL) * 2
    if denom == DenomKind.SINH_HALF:
        _require(power >= 2, power % 2 == 0, power, denom)
        return moment(power, DenomKind.SINH_FULL) * Fraction(2 ** (power + 1))
    if denom == DenomKind.SINH_SQ_HALF:
        _require(power >= 3, power % 2 == 1, power, denom)
        k = (power - 1) // 2
        c = Fraction(2 ** (power + 1)) * Fraction(math.factorial(2 * k + 1), 2 ** (2 * k))
        return _zeta_term(c, 2 * k + 1)
    if denom == DenomKind.COSH_SQ_HALF:
        _require(power >= 1, power % 2 == 1, power, denom)
        if power == 1:
            return SymbolicValue.monomial(GradedMonomial.make(log2_exp=1), 4)
        k = (power - 1) // 2
        c = (Fraction(2 ** (power + 1)) * Fraction(math.factorial(2 * k + 1), 2 ** (2 * k))
             * (1 - Fraction(1, 2 ** (2 * k))))
        return _zeta_term(c, 2 * k + 1)
    if denom == DenomKind.COSH_HALF:
        _require(power >= 1, power % 2 == 1, power, denom)
        k = (power + 1) // 2
        c = Fraction(2 ** (2 * k + 1) * math.factorial(2 * k - 1))
        return SymbolicValue.monomial(GradedMonomial.make(beta={2 * k: 1}), c)
    raise ValueError(f"unknown denominator kind {denom!r}")


def reduce_integral(numerator: PiPolynomial, denom: DenomKind) -> SymbolicValue:
    """Integrate a Q[pi^2, l]-polynomial numerator against a denominator.

    Linearity over the monomials of the numerator; the error message for a
    divergent or wrong-parity monomial names the offender.
    """
    total = SymbolicValue.zero()
    for (p2, vp), coeff in numerator.items():
        try:
            m = moment(vp, denom)
        except (DivergentMomentError, ParityError) as exc:
            raise type(exc)(
                f"monomial pi^{2 * p2}*{numerator.variable}^{vp} of the numerator: {exc}"
            ) from exc
        total = total + SymbolicValue.pi_power(2 * p2, coeff) * m
    return total


# ---------------------------------------------------------------------------
# Numeric oracle: adaptive tanh-sinh quadrature on [0, L] plus an analytic
# exponential tail bound on [L, inf), with L grown until the tail bound is
# below the target.

def _tail_bound(power: int, denom: DenomKind, L) -> mpf:
    # For l >= L each denominator is bounded by C(L) e^(-c l); the tail is
    # then C * Gamma(power+1, c L) / c^(power+1).
    if denom == DenomKind.SINH_FULL:
        C, c = 2 / (1 - mp.e ** (-2 * L)), mpf(1)
    elif denom == DenomKind.SINH_HALF_COSH_HALF:
        C, c = 4 / (1 - mp.e ** (-2 * L)), mpf(1)
    elif denom == DenomKind.SINH_SQ_HALF:
        C, c = 4 / (1 - mp.e ** (-L)) ** 2, mpf(1)
    elif denom == DenomKind.COSH_SQ_HALF:
        C, c = mpf(4), mpf(1)
    elif denom == DenomKind.SINH_HALF:
        C, c = 2 / (1 - mp.e ** (-L)), mpf("0.5")
    else:
        C, c = mpf(2), mpf("0.5")
    return C * mp.gammainc(power + 1, c * L) / c ** (power + 1)


_DENOM_FUNCS = {
    DenomKind.SINH_FULL: lambda l: mp.sinh(l),
    DenomKind.SINH_SQ_HALF: lambda l: mp.sinh(l / 2) ** 2,
    DenomKind.COSH_SQ_HALF: lambda l: mp.cosh(l / 2) ** 2,
    DenomKind.SINH_HALF: lambda l: mp.sinh(l / 2),
    DenomKind.COSH_HALF: lambda l: mp.cosh(l / 2),
    DenomKind.SINH_HALF_COSH_HALF: lambda l: mp.sinh(l / 2) * mp.cosh(l / 2),
}


def moment_quadrature(power: int, denom: DenomKind,
                      precision_bits: int = 113) -> PrecisionValue:
    """Direct numeric evaluation of the defining moment integral.

    This is the independent validation oracle for `moment`; it never calls
    the closed forms.  The admissibility preconditions are the same.
    """
    moment(power, denom)  # reuse the precondition checks
    f = _DENOM_FUNCS[denom]
    with mp.workprec(precision_bits + 40):
        target = mpf(2) ** (-precision_bits - 8)
        L = mpf(40)
        while _tail_bound(power, denom, L) > target and L < 10 ** 6:
            L *= 2
        tail = _tail_bound(power, denom, L)
        val, quad_err = mp.quad(lambda l: l ** power / f(l), [0, L], error=True)
        err = abs(quad_err) * 10 + tail + _slop(val)
        return PrecisionValue(val, err)
