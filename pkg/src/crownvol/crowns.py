"""Closed-form Mirzakhani volumes for n-crowns and ideal n-gons.

The fixed-neck volume of the moduli space of n-crowns is the n-fold
convolution of the hyperbolic-secant kernel 1/(2 cosh(s/2)) evaluated at the
neck length d, which factors as

    V_An(d) = d / sinh(d/2) * prod_{j=1}^{k-1} (d^2 + (2j)^2 pi^2) / (2 (n-1)!)
                                                          for even n = 2k,
    V_An(d) = 1 / cosh(d/2) * prod_{j=1}^{k} (d^2 + (2j-1)^2 pi^2) / (2 (n-1)!)
                                                          for odd n = 2k+1,

with empty products equal to 1.  Integrating out the neck gives the total
crown volume pi^n / 2.  The generating function sum_n V_An(d) x^n equals

    x / sqrt(1 - pi^2 x^2) * sinh(d/2 + (d/pi) arcsin(pi x)) / sinh(d),

computed here by exact power-series composition over Q[pi^2, d] before any
floating-point evaluation.  For ideal n-gons the volume is only known in
closed form for n <= 8; the conjectural general formula, its generating
function arcsin(pi x)/(pi x) + x (arcsin(pi x)/(pi x))^2, and the proven
upper bound V_Dn <= V_A(n-2)(0) are provided exactly, with conjectural
outputs labelled as such by callers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from .moments import DenomKind
from .precision import (PrecisionValue, as_precision_value, eval_symbolic,
                        pv_cosh, pv_sinh)
from .ring import PiPolynomial, SymbolicValue


def double_factorial(m: int) -> int:
    """m!! with the conventions (-1)!! = 0!! = 1."""
    if m < -1:
        raise ValueError("double factorial needs m >= -1")
    out = 1
    while m > 1:
        out *= m
        m -= 2
    return out


@dataclass(frozen=True)
class CrownVolume:
    """Factored closed form of V_An(d): prefactor * numerator / hyp(d/2).

    For even n the numerator carries the explicit factor of d (so it is an
    odd polynomial in d) and the denominator is sinh(d/2); for odd n the
    numerator is even in d and the denominator is cosh(d/2).  The numerator
    is homogeneous of graded degree n-1 with strictly positive coefficients.
    """

    n: int
    numerator: PiPolynomial
    denom_kind: DenomKind
    prefactor: Fraction

    @property
    def variable(self) -> str:
        return self.numerator.variable


def crown_volume_fixed_neck(n: int, var: str = "d") -> CrownVolume:
    """Exact factored V_An(d) for n >= 1."""
    if n < 1:
        raise ValueError("a crown needs at least one tine")
    prefactor = Fraction(1, 2 * math.factorial(n - 1))
    num = PiPolynomial.constant(var, 1)
    if n % 2 == 0:
        k = n // 2
        for j in range(1, k):
            num = num * PiPolynomial(var, {(0, 2): 1, (1, 0): (2 * j) ** 2})
        num = num.shift_var(1)
        kind = DenomKind.SINH_HALF
    else:
        k = (n - 1) // 2
        for j in range(1, k + 1):
            num = num * PiPolynomial(var, {(0, 2): 1, (1, 0): (2 * j - 1) ** 2})
        kind = DenomKind.COSH_HALF
    return CrownVolume(n=n, numerator=num, denom_kind=kind, prefactor=prefactor)


def crown_volume_zero(n: int) -> SymbolicValue:
    """Exact V_An(0), using the limit d/sinh(d/2) -> 2 for even n."""
    cv = crown_volume_fixed_neck(n)
    terms = {}
    if n % 2 == 0:
        for (p2, vp), c in cv.numerator.items():
            if vp == 1:
                terms[p2] = c * 2 * cv.prefactor
    else:
        for (p2, vp), c in cv.numerator.items():
            if vp == 0:
                terms[p2] = c * cv.prefactor
    out = SymbolicValue.zero()
    for p2, c in terms.items():
        out = out + SymbolicValue.pi_power(2 * p2, c)
    return out


def _is_exact_zero(d) -> bool:
    if isinstance(d, PrecisionValue):
        return d.value == 0 and d.abs_error == 0
    return d == 0


def crown_volume_eval(cv: CrownVolume, d, precision_bits: int = 113) -> PrecisionValue:
    """Numeric V_An(d) for d >= 0; d = 0 goes through the analytic limit.

    The removable singularity of d/sinh(d/2) at d = 0 is never evaluated by
    numeric division: the exact limit value is used instead.
    """
    if _is_exact_zero(d):
        return eval_symbolic(crown_volume_zero(cv.n), None, precision_bits)
    dv = as_precision_value(d, precision_bits)
    if dv.value < 0:
        raise ValueError("neck length must be nonnegative")
    with mp.workprec(precision_bits + 20):
        num_sym = cv.numerator.to_symbolic() * cv.prefactor
        num = eval_symbolic(num_sym, {cv.variable: dv}, precision_bits)
        half = dv * Fraction(1, 2)
        hyp = pv_sinh(half) if cv.denom_kind == DenomKind.SINH_HALF else pv_cosh(half)
        return num / hyp


def crown_total_volume(n: int) -> SymbolicValue:
    """Total volume pi^n / 2 of the moduli space of n-crowns (free neck)."""
    if n < 1:
        raise ValueError("a crown needs at least one tine")
    return SymbolicValue.pi_power(n, Fraction(1, 2))


# ---------------------------------------------------------------------------
# Power series over Q[pi^2, d]: a series is a list, indexed by the power of
# x, of {(pi^2-power, d-power): Fraction} coefficient dicts.

def _series_mul(s1, s2, N):
    out = [dict() for _ in range(N + 1)]
    for i, c1 in enumerate(s1):
        if i > N or not c1:
            continue
        for j, c2 in enumerate(s2):
            if i + j > N or not c2:
                continue
            tgt = out[i + j]
            for k1, v1 in c1.items():
                for k2, v2 in c2.items():
                    key = (k1[0] + k2[0], k1[1] + k2[1])
                    tgt[key] = tgt.get(key, Fraction(0)) + v1 * v2
    return out


def _series_scale(s, c):
    return [{k: v * c for k, v in term.items()} for term in s]


def _series_add(s1, s2):
    out = []
    for t1, t2 in zip(s1, s2):
        d = dict(t1)
        for k, v in t2.items():
            d[k] = d.get(k, Fraction(0)) + v
        out.append(d)
    return out


def _arcsin_scaled_series(N: int, with_d: bool):
    """(d/pi) arcsin(pi x) as a series in x, coefficients in Q[pi^2, d].

    With `with_d` false this is arcsin(pi x)/pi instead (the d -> 0 limit
    shape); the x^(2j+1) coefficient is (2j-1)!!/((2j)!! (2j+1)) pi^(2j).
    """
    s = [dict() for _ in range(N + 1)]
    dpow = 1 if with_d else 0
    for j in range(0, (N - 1) // 2 + 1):
        c = Fraction(double_factorial(2 * j - 1),
                     double_factorial(2 * j) * (2 * j + 1))
        s[2 * j + 1][(j, dpow)] = c
    return s


def _inv_sqrt_series(N: int):
    """(1 - pi^2 x^2)^(-1/2) as a series in x over Q[pi^2]."""
    s = [dict() for _ in range(N + 1)]
    for j in range(0, N // 2 + 1):
        s[2 * j][(j, 0)] = Fraction(math.comb(2 * j, j), 4 ** j)
    return s


def _series_shift(s, by, N):
    out = [dict() for _ in range(N + 1)]
    for i, term in enumerate(s):
        if i + by <= N:
            out[i + by] = dict(term)
    return out


def _cosh_sinh_of_series(s, N):
    """cosh(S) and sinh(S) for a series S with zero constant term."""
    cosh_out = [dict() for _ in range(N + 1)]
    cosh_out[0][(0, 0)] = Fraction(1)
    sinh_out = [dict() for _ in range(N + 1)]
    power = [dict() for _ in range(N + 1)]
    power[0][(0, 0)] = Fraction(1)
    for m in range(1, N + 1):
        power = _series_mul(power, s, N)
        if all(not t for t in power):
            break
        scaled = _series_scale(power, Fraction(1, math.factorial(m)))
        if m % 2 == 0:
            cosh_out = _series_add(cosh_out, scaled)
        else:
            sinh_out = _series_add(sinh_out, scaled)
    return cosh_out, sinh_out


def crown_gf_coefficients(N: int, d, precision_bits: int = 113) -> list[PrecisionValue]:
    """First N Taylor coefficients (of x^1..x^N) of the crown volume GF.

    The coefficient of x^n equals V_An(d).  Series composition is exact over
    Q[pi^2, d] up to order N; floating-point enters only when the resulting
    coefficient polynomials are evaluated at the given d.  At d = 0 the
    analytic limit (x/sqrt(1-pi^2 x^2)) (1/2 + arcsin(pi x)/pi) is used.
    """
    if N < 1:
        raise ValueError("need N >= 1")
    inv = _inv_sqrt_series(N)
    x_inv = _series_shift(inv, 1, N)
    with mp.workprec(precision_bits + 20):
        if _is_exact_zero(d):
            half = [dict() for _ in range(N + 1)]
            half[0][(0, 0)] = Fraction(1, 2)
            arc = _arcsin_scaled_series(N, with_d=False)
            total = _series_mul(x_inv, _series_add(half, arc), N)
            out = []
            for n in range(1, N + 1):
                sym = SymbolicValue.zero()
                for (p2, _), c in total[n].items():
                    sym = sym + SymbolicValue.pi_power(2 * p2, c)
                out.append(eval_symbolic(sym, None, precision_bits))
            return out

        dv = as_precision_value(d, precision_bits)
        if dv.value < 0:
            raise ValueError("neck length must be nonnegative")
        arc = _arcsin_scaled_series(N, with_d=True)
        cosh_s, sinh_s = _cosh_sinh_of_series(arc, N)
        even_part = _series_mul(x_inv, cosh_s, N)   # pairs with 1/(2 cosh(d/2))
        odd_part = _series_mul(x_inv, sinh_s, N)    # pairs with 1/(2 sinh(d/2))
        half = dv * Fraction(1, 2)
        inv_2cosh = PrecisionValue.exact(1) / (pv_cosh(half) * 2)
        inv_2sinh = PrecisionValue.exact(1) / (pv_sinh(half) * 2)

        def eval_coeff(term) -> PrecisionValue:
            poly = PiPolynomial("d", term)
            return eval_symbolic(poly.to_symbolic(), {"d": dv}, precision_bits)

        out = []
        for n in range(1, N + 1):
            a = eval_coeff(even_part[n])
            b = eval_coeff(odd_part[n])
            out.append(a * inv_2cosh + b * inv_2sinh)
        return out


# ---------------------------------------------------------------------------
# Ideal n-gons: conjectural closed form, generating function, upper bound.

def ngon_conjecture_volume(n: int) -> SymbolicValue:
    """Conjectural V_Dn as an exact rational multiple of a power of pi.

    Exact theorems cover n <= 8; for n >= 9 this is a conjecture and must
    never be used as ground truth.  Callers are expected to label it.
    """
    if n < 3:
        raise ValueError("an ideal polygon needs at least 3 vertices")
    if n % 2 == 0:
        c = Fraction(2 * double_factorial(n - 4), (n - 2) * double_factorial(n - 3))
        return SymbolicValue.pi_power(n - 4, c)
    c = Fraction(double_factorial(n - 4), (n - 2) * double_factorial(n - 3))
    return SymbolicValue.pi_power(n - 3, c)


def ngon_gf_coefficients(N: int) -> list[SymbolicValue]:
    """Exact coefficients of x^0..x^N of arcsin(pi x)/(pi x) + x (arcsin(pi x)/(pi x))^2.

    The square is formed by an explicit Cauchy product of the arcsin series,
    so agreement with `ngon_conjecture_volume` (coefficient of x^(n-3)
    against V_Dn) is a nontrivial identity rather than a restatement.
    """
    if N < 0:
        raise ValueError("need N >= 0")
    # f = arcsin(pi x)/(pi x): rational coefficient of pi^k x^k at even k.
    f = [Fraction(0)] * (N + 1)
    for j in range(0, N // 2 + 1):
        f[2 * j] = Fraction(double_factorial(2 * j - 1),
                            double_factorial(2 * j) * (2 * j + 1))
    f2 = [Fraction(0)] * (N + 1)
    for i in range(N + 1):
        if f[i] == 0:
            continue
        for j in range(N + 1 - i):
            if f[j]:
                f2[i + j] += f[i] * f[j]
    out = []
    for k in range(N + 1):
        sym = SymbolicValue.zero()
        if f[k]:
            sym = sym + SymbolicValue.pi_power(k, f[k])
        if k >= 1 and f2[k - 1]:
            sym = sym + SymbolicValue.pi_power(k - 1, f2[k - 1])
        out.append(sym)
    return out


def ngon_upper_bound(n: int) -> SymbolicValue:
    """Proven upper bound for V_Dn, equal to V_A(n-2)(0).

    Exceeds the conjectural volume by exactly the factor (n-2)/2.
    """
    if n < 3:
        raise ValueError("an ideal polygon needs at least 3 vertices")
    if n % 2 == 0:
        c = Fraction(double_factorial(n - 4), double_factorial(n - 3))
        return SymbolicValue.pi_power(n - 4, c)
    c = Fraction(double_factorial(n - 4), 2 * double_factorial(n - 3))
    return SymbolicValue.pi_power(n - 3, c)
