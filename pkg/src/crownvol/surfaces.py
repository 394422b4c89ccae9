"""Volumes of annuli and general crowned surfaces from crown factors.

A crowned surface decomposes along its necks into a core surface of genus g
with m + l boundary components and a collection of crowns.  With necks held
at fixed lengths the volume is the product

    V(b | d) = V_{g,m+l}(b, d) * prod_k d_k V_A(a_k)(d_k),

where V_{g,m+l} is the Weil-Petersson polynomial of the core -- an external
input here, supplied in a strict JSON format and validated, never computed.
Freeing the necks integrates each d_k against its crown factor, which the
moment table converts into zeta values (even tine counts) or Dirichlet beta
values (odd tine counts); the result is a homogeneous polynomial in the ring
generators and the cuff lengths of degree dim M = 6g - 6 + 2m + 3l + sum a_k.

The two-crown annulus A_(a1,a2) is the special case with no core: its fixed
neck volume is d V_A(a1)(d) V_A(a2)(d) and its total volume reduces to a
single moment integral whose denominator is fixed by the tine parities
(both odd -> cosh^2(l/2), both even -> sinh^2(l/2), mixed -> sinh(l/2)cosh(l/2)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from .crowns import CrownVolume, crown_volume_fixed_neck
from .moments import DenomKind, moment
from .precision import (PrecisionValue, as_precision_value, eval_symbolic,
                        pv_cosh, pv_sinh)
from .ring import GradedMonomial, PiPolynomial, SymbolicValue, render_plain


class WpValidationError(ValueError):
    """A supplied Weil-Petersson polynomial violates the schema or invariants."""

    def __init__(self, pointer: str, message: str):
        self.pointer = pointer
        super().__init__(f"{pointer}: {message}")


class SurfaceSpecError(ValueError):
    """The surface specification is invalid or must use a special-case operation."""


@dataclass(frozen=True)
class WpPolynomial:
    """Externally supplied Weil-Petersson volume polynomial V_{g,n}(b).

    An element of Q_{>=0}[pi^2, b_1^2, ..., b_n^2], homogeneous of degree
    6g - 6 + 2n in the grading where pi and every b_i have degree 1.
    """

    genus: int
    variables: tuple[str, ...]
    terms: tuple[tuple[tuple[int, tuple[int, ...]], Fraction], ...]

    @staticmethod
    def create(genus: int, variables, terms) -> "WpPolynomial":
        variables = tuple(str(v) for v in variables)
        if genus < 0:
            raise WpValidationError("/genus", "genus must be nonnegative")
        if len(set(variables)) != len(variables):
            raise WpValidationError("/vars", "duplicate variable names")
        target = 6 * genus - 6 + 2 * len(variables)
        if target < 0:
            raise WpValidationError("/genus", f"no such moduli space: 6g-6+2n = {target} < 0")
        canon: dict[tuple[int, tuple[int, ...]], Fraction] = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for i, ((pi2, pows), coeff) in enumerate(items):
            ptr = f"/terms/{i}"
            pows = tuple(int(p) for p in pows)
            if len(pows) != len(variables):
                raise WpValidationError(f"{ptr}/pows",
                                        f"expected {len(variables)} entries, got {len(pows)}")
            if any(p < 0 for p in pows) or pi2 < 0:
                raise WpValidationError(f"{ptr}", "exponents must be nonnegative")
            for j, p in enumerate(pows):
                if p % 2 != 0:
                    raise WpValidationError(f"{ptr}/pows/{j}",
                                            f"odd power {p} of {variables[j]}")
            coeff = Fraction(coeff)
            if coeff < 0:
                raise WpValidationError(f"{ptr}/coeff", "coefficients must be nonnegative")
            if coeff == 0:
                continue
            deg = 2 * pi2 + sum(pows)
            if deg != target:
                raise WpValidationError(
                    f"{ptr}", f"term has degree {deg}, but 6g-6+2n = {target}: not homogeneous")
            key = (int(pi2), pows)
            canon[key] = canon.get(key, Fraction(0)) + coeff
        return WpPolynomial(genus=genus, variables=variables,
                            terms=tuple(sorted(canon.items())))

    @property
    def degree(self) -> int:
        return 6 * self.genus - 6 + 2 * len(self.variables)

    def to_symbolic(self) -> SymbolicValue:
        out = SymbolicValue.zero()
        for (pi2, pows), c in self.terms:
            mono = GradedMonomial.make(
                pi_exp=2 * pi2,
                variables={v: p for v, p in zip(self.variables, pows) if p})
            out = out + SymbolicValue.monomial(mono, c)
        return out


#: The one WP polynomial shipped built in: V_{0,3} = 1, the volume of the
#: point moduli space of thrice-bordered spheres.
WP_V03 = WpPolynomial.create(0, ("b1", "b2", "b3"), {(0, (0, 0, 0)): Fraction(1)})


def load_wp_polynomial(document) -> WpPolynomial:
    """Validate a parsed WP JSON document.

    Schema: {"genus": int, "vars": [names], "terms": [{"pi2": int,
    "pows": [even ints], "coeff": "p/q"}]}.
    """
    if not isinstance(document, dict):
        raise WpValidationError("", "document must be a JSON object")
    for field in ("genus", "vars", "terms"):
        if field not in document:
            raise WpValidationError(f"/{field}", "missing required field")
    genus = document["genus"]
    if not isinstance(genus, int) or isinstance(genus, bool):
        raise WpValidationError("/genus", "must be an integer")
    variables = document["vars"]
    if (not isinstance(variables, list) or not variables
            or not all(isinstance(v, str) for v in variables)):
        raise WpValidationError("/vars", "must be a nonempty list of names")
    if not isinstance(document["terms"], list):
        raise WpValidationError("/terms", "must be a list")
    terms = []
    for i, t in enumerate(document["terms"]):
        ptr = f"/terms/{i}"
        if not isinstance(t, dict):
            raise WpValidationError(ptr, "term must be an object")
        for field in ("pi2", "pows", "coeff"):
            if field not in t:
                raise WpValidationError(f"{ptr}/{field}", "missing required field")
        if not isinstance(t["pi2"], int) or isinstance(t["pi2"], bool):
            raise WpValidationError(f"{ptr}/pi2", "must be an integer")
        if not isinstance(t["pows"], list):
            raise WpValidationError(f"{ptr}/pows", "must be a list of integers")
        try:
            coeff = Fraction(str(t["coeff"]))
        except (ValueError, ZeroDivisionError) as exc:
            raise WpValidationError(f"{ptr}/coeff", f"not a rational: {exc}") from exc
        terms.append(((t["pi2"], tuple(t["pows"])), coeff))
    return WpPolynomial.create(genus, variables, terms)


@dataclass(frozen=True)
class SurfaceSpec:
    """Topological type: genus, number of cuffs, and tine count per crown."""

    genus: int
    cuffs: int
    crowns: tuple[int, ...]

    @staticmethod
    def create(genus: int, cuffs: int, crowns) -> "SurfaceSpec":
        spec = SurfaceSpec(genus=genus, cuffs=cuffs, crowns=tuple(int(a) for a in crowns))
        spec.validate()
        return spec

    def validate(self):
        g, m, l = self.genus, self.cuffs, len(self.crowns)
        if g < 0 or m < 0:
            raise SurfaceSpecError("genus and cuff count must be nonnegative")
        if any(a < 1 for a in self.crowns):
            raise SurfaceSpecError("every crown needs at least one tine")
        if g == 0 and m == 0 and l == 1:
            raise SurfaceSpecError(
                "a single crown with no cuffs is an n-crown (or n-gon): "
                "use the crown operations")
        if g == 0 and m == 0 and l == 2:
            raise SurfaceSpecError(
                "two crowns with no cuffs form an (a1,a2)-annulus: "
                "use the annulus operations")
        if 2 * g - 2 + m + l < 1:
            raise SurfaceSpecError(
                f"no hyperbolic structure: core surface of genus {g} with "
                f"{m + l} boundary components is not hyperbolic")

    @property
    def neck_count(self) -> int:
        return len(self.crowns)

    @property
    def dim_moduli(self) -> int:
        """Real dimension of the moduli space with free necks, fixed cuffs."""
        g, m, l = self.genus, self.cuffs, len(self.crowns)
        return 6 * g - 6 + 2 * m + 3 * l + sum(self.crowns)


# ---------------------------------------------------------------------------
# Factored symbolic functions: polynomial part over hyperbolic denominators.

@dataclass(frozen=True)
class FactoredForm:
    """poly / prod_v sinh(v/2)^s_v cosh(v/2)^c_v, with poly a ring element.

    This is the representation of fixed-neck volumes as symbolic functions
    of the neck lengths; conversion to numbers happens only at evaluation.
    """

    poly: SymbolicValue
    denoms: tuple[tuple[str, tuple[int, int]], ...]  # var -> (sinh_pow, cosh_pow)

    @staticmethod
    def create(poly: SymbolicValue, denoms: dict[str, tuple[int, int]]) -> "FactoredForm":
        return FactoredForm(poly=poly,
                            denoms=tuple(sorted((v, (s, c)) for v, (s, c) in denoms.items()
                                                if s or c)))

    def denom_map(self) -> dict[str, tuple[int, int]]:
        return dict(self.denoms)

    def evaluate(self, assignments: dict, precision_bits: int = 113) -> PrecisionValue:
        """Numeric value at the given variable assignments.

        Assignments may be PrecisionValues, Fractions, ints or floats.  A
        variable assigned exactly 0 whose denominator contains sinh powers
        is evaluated through the analytic limit (d/2)^s / sinh(d/2)^s -> 1,
        which requires the polynomial part to vanish to matching order.
        """
        with mp.workprec(precision_bits + 20):
            poly = self.poly
            hyp = PrecisionValue.exact(1)
            pv_assign: dict[str, PrecisionValue] = {}
            for var in poly.variables():
                if var not in assignments:
                    raise KeyError(f"no assignment for variable {var!r}")
            denmap = self.denom_map()
            for var, value in assignments.items():
                s, c = denmap.pop(var, (0, 0))
                if not isinstance(value, PrecisionValue) and value == 0:
                    # analytic limit: each sinh(v/2) contributes v/2, cosh -> 1
                    lowered: dict[GradedMonomial, Fraction] = {}
                    for mono, coeff in poly.terms():
                        p = dict(mono.var_exps).get(var, 0)
                        if p < s:
                            raise ZeroDivisionError(
                                f"pole at {var}=0: polynomial part has {var}-order "
                                f"{p} < sinh power {s}")
                        if p > s:
                            continue
                        rest = GradedMonomial.make(
                            mono.pi_exp, mono.log2_exp, mono.zeta_exps, mono.beta_exps,
                            [(v, e) for v, e in mono.var_exps if v != var])
                        lowered[rest] = lowered.get(rest, Fraction(0)) + coeff * 2 ** s
                    poly = SymbolicValue(lowered)
                else:
                    dv = as_precision_value(value, precision_bits)
                    pv_assign[var] = dv
                    half = dv * Fraction(1, 2)
                    if s:
                        hyp = hyp * pv_sinh(half).pow_int(s)
                    if c:
                        hyp = hyp * pv_cosh(half).pow_int(c)
            if denmap:
                missing = ", ".join(sorted(denmap))
                raise KeyError(f"no assignment for denominator variable(s) {missing}")
            num = eval_symbolic(poly, pv_assign, precision_bits)
            return num / hyp

    def _display_parts(self):
        # pull out the common denominator of the coefficients for readability
        num = self.poly
        den_lcm = 1
        for _, c in num.terms():
            den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
        num_scaled = num * den_lcm
        g = 0
        for _, c in num_scaled.terms():
            g = math.gcd(g, abs(c.numerator))
        if g > 1 and den_lcm % g == 0:
            num_scaled = num_scaled * Fraction(1, g)
            den_lcm //= g
        return num_scaled, den_lcm

    def __str__(self) -> str:
        num_scaled, den_lcm = self._display_parts()
        parts = []
        if den_lcm > 1:
            parts.append(str(den_lcm))
        for var, (s, c) in self.denoms:
            if s:
                parts.append(f"sinh({var}/2)" + (f"^{s}" if s > 1 else ""))
            if c:
                parts.append(f"cosh({var}/2)" + (f"^{c}" if c > 1 else ""))
        num_str = render_plain(num_scaled)
        if not parts:
            return num_str
        if len(num_scaled) > 1:
            num_str = f"({num_str})"
        return f"{num_str} / ({' '.join(parts)})"

    def latex(self) -> str:
        from .ring import render_latex
        num_scaled, den_lcm = self._display_parts()
        parts = []
        if den_lcm > 1:
            parts.append(str(den_lcm))
        for var, (s, c) in self.denoms:
            if s:
                parts.append(f"\\sinh({var}/2)" + (f"^{{{s}}}" if s > 1 else ""))
            if c:
                parts.append(f"\\cosh({var}/2)" + (f"^{{{c}}}" if c > 1 else ""))
        if not parts:
            return render_latex(num_scaled)
        return f"\\frac{{{render_latex(num_scaled)}}}{{{' '.join(parts)}}}"


def crown_to_factored(cv: CrownVolume) -> FactoredForm:
    s = 1 if cv.denom_kind == DenomKind.SINH_HALF else 0
    c = 1 - s
    return FactoredForm.create(cv.numerator.to_symbolic() * cv.prefactor,
                               {cv.variable: (s, c)})


# ---------------------------------------------------------------------------
# Annuli.

def _check_tines(a1: int, a2: int):
    if a1 < 1 or a2 < 1:
        raise ValueError("each side of the annulus needs at least one tine")


def annulus_volume_fixed_neck(a1: int, a2: int, var: str = "d") -> FactoredForm:
    """Fixed-neck volume d V_A(a1)(d) V_A(a2)(d), kept factored."""
    _check_tines(a1, a2)
    c1 = crown_volume_fixed_neck(a1, var)
    c2 = crown_volume_fixed_neck(a2, var)
    poly = (c1.numerator * c2.numerator).shift_var(1).to_symbolic()
    poly = poly * (c1.prefactor * c2.prefactor)
    sinh_pow = (1 if a1 % 2 == 0 else 0) + (1 if a2 % 2 == 0 else 0)
    cosh_pow = 2 - sinh_pow
    return FactoredForm.create(poly, {var: (sinh_pow, cosh_pow)})


def _annulus_denom_kind(a1: int, a2: int) -> DenomKind:
    odd = (a1 % 2, a2 % 2)
    if odd == (1, 1):
        return DenomKind.COSH_SQ_HALF
    if odd == (0, 0):
        return DenomKind.SINH_SQ_HALF
    return DenomKind.SINH_HALF_COSH_HALF


def annulus_volume(a1: int, a2: int) -> SymbolicValue:
    """Exact total volume of the moduli space of (a1,a2)-annuli.

    Computed as int_0^inf l V_A(a1)(l) V_A(a2)(l) dl: the crown numerators
    are multiplied exactly and reduced against the moment whose denominator
    matches the tine parities.  For n = a1 + a2 odd the result is a positive
    combination of pi^(2i) zeta(n-2i); for even n it is a combination of
    pi^(2i) zeta(n-1-2i) plus a pi^(n-2) log2 term exactly when both tine
    counts are odd.
    """
    _check_tines(a1, a2)
    c1 = crown_volume_fixed_neck(a1, "l")
    c2 = crown_volume_fixed_neck(a2, "l")
    numerator = (c1.numerator * c2.numerator).shift_var(1)
    reduced = _reduce_poly(numerator, _annulus_denom_kind(a1, a2))
    return reduced * (c1.prefactor * c2.prefactor)


def _reduce_poly(numerator: PiPolynomial, kind: DenomKind) -> SymbolicValue:
    from .moments import reduce_integral
    return reduce_integral(numerator, kind)


# ---------------------------------------------------------------------------
# General crowned surfaces.

def _split_vars(spec: SurfaceSpec, wp: WpPolynomial) -> tuple[tuple[str, ...], tuple[str, ...]]:
    m, l = spec.cuffs, spec.neck_count
    if wp.genus != spec.genus:
        raise SurfaceSpecError(
            f"WP polynomial has genus {wp.genus}, surface has genus {spec.genus}")
    if len(wp.variables) != m + l:
        raise SurfaceSpecError(
            f"WP polynomial has {len(wp.variables)} boundary variables, "
            f"surface needs cuffs + necks = {m + l}")
    return wp.variables[:m], wp.variables[m:]


def surface_volume_fixed(spec: SurfaceSpec, wp: WpPolynomial) -> FactoredForm:
    """Fixed-neck volume V(b | d) = V_{g,m+l}(b, d) prod_k d_k V_A(a_k)(d_k).

    The first m WP variables are the cuff lengths, the remaining l (in
    order) are the neck lengths; hyperbolic denominators stay symbolic.
    """
    spec.validate()
    _, neck_vars = _split_vars(spec, wp)
    poly = wp.to_symbolic()
    denoms: dict[str, tuple[int, int]] = {}
    for a, var in zip(spec.crowns, neck_vars):
        cv = crown_volume_fixed_neck(a, var)
        poly = poly * cv.numerator.shift_var(1).to_symbolic() * cv.prefactor
        denoms[var] = (1, 0) if a % 2 == 0 else (0, 1)
    return FactoredForm.create(poly, denoms)


def surface_volume_free(spec: SurfaceSpec, wp: WpPolynomial) -> SymbolicValue:
    """Volume with free necks: each neck is integrated against its crown.

    Integration proceeds in ascending crown order (the result is order
    independent because the integrand factorizes over the necks).  Even
    tine counts reduce against 1/sinh(l/2) moments and contribute zeta
    values; odd counts reduce against 1/cosh(l/2) and contribute beta
    values.  The output is homogeneous of degree dim M(b).
    """
    spec.validate()
    _, neck_vars = _split_vars(spec, wp)
    value = wp.to_symbolic()
    for a, var in zip(spec.crowns, neck_vars):
        cv = crown_volume_fixed_neck(a, var)
        value = value * cv.numerator.shift_var(1).to_symbolic() * cv.prefactor
        kind = DenomKind.SINH_HALF if a % 2 == 0 else DenomKind.COSH_HALF
        value = _integrate_out(value, var, kind)
    return value


def _integrate_out(value: SymbolicValue, var: str, kind: DenomKind) -> SymbolicValue:
    out = SymbolicValue.zero()
    for mono, coeff in value.terms():
        p = dict(mono.var_exps).get(var, 0)
        rest = GradedMonomial.make(
            mono.pi_exp, mono.log2_exp, mono.zeta_exps, mono.beta_exps,
            [(v, e) for v, e in mono.var_exps if v != var])
        out = out + SymbolicValue.monomial(rest, coeff) * moment(p, kind)
    return out
