"""Exact arithmetic in the graded constant ring of crowned-surface volumes.

Every exact volume computed by this package is a homogeneous element of

    Q[pi, log2, zeta(3), zeta(5), ..., beta(2), beta(4), ..., v_1, v_2, ...]

graded so that pi and log2 have degree 1, zeta(j) has degree j, beta(k) has
degree k, and each formal variable (cuff lengths b_i, neck lengths d or l)
has degree 1.  Zeta generators carry odd arguments >= 3 only: even zeta
values are rational multiples of powers of pi and must be folded into pi
powers by the caller, which keeps the generator set (conjecturally)
linearly independent over Q -- the property constant recognition relies on.
Beta generators carry even arguments >= 2; beta(2) is Catalan's constant.

Coefficients are `fractions.Fraction` throughout, so arithmetic is exact
and never rounds.  All values are immutable after construction and every
operation is a pure function.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

RationalLike = Fraction | int


def _as_fraction(c: RationalLike) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"expected an exact rational, got {type(c).__name__}")


def _sorted_exponents(exps: Mapping[int, int] | Iterable[tuple[int, int]],
                      *, parity: int, minimum: int, label: str) -> tuple[tuple[int, int], ...]:
    items = exps.items() if isinstance(exps, Mapping) else exps
    out = []
    for key, e in items:
        if e == 0:
            continue
        if e < 0:
            raise ValueError(f"{label} exponent must be nonnegative, got {label}({key})^{e}")
        if key < minimum or key % 2 != parity % 2:
            raise ValueError(f"invalid {label} argument {key}: need "
                             f"{'odd' if parity else 'even'} integer >= {minimum}")
        out.append((key, e))
    out.sort()
    if len({k for k, _ in out}) != len(out):
        raise ValueError(f"duplicate {label} argument")
    return tuple(out)


@dataclass(frozen=True)
class GradedMonomial:
    """A monomial pi^a log2^b prod zeta(j)^e_j prod beta(k)^f_k prod v^p_v."""

    pi_exp: int = 0
    log2_exp: int = 0
    zeta_exps: tuple[tuple[int, int], ...] = ()
    beta_exps: tuple[tuple[int, int], ...] = ()
    var_exps: tuple[tuple[str, int], ...] = ()

    @staticmethod
    def make(pi_exp: int = 0, log2_exp: int = 0,
             zeta: Mapping[int, int] | Iterable[tuple[int, int]] = (),
             beta: Mapping[int, int] | Iterable[tuple[int, int]] = (),
             variables: Mapping[str, int] | Iterable[tuple[str, int]] = ()) -> "GradedMonomial":
        if pi_exp < 0 or log2_exp < 0:
            raise ValueError("pi and log2 exponents must be nonnegative")
        var_items = variables.items() if isinstance(variables, Mapping) else variables
        var_out = []
        for name, e in var_items:
            if e == 0:
                continue
            if e < 0:
                raise ValueError(f"variable exponent must be nonnegative, got {name}^{e}")
            var_out.append((str(name), e))
        var_out.sort()
        if len({n for n, _ in var_out}) != len(var_out):
            raise ValueError("duplicate variable name")
        return GradedMonomial(
            pi_exp=pi_exp,
            log2_exp=log2_exp,
            zeta_exps=_sorted_exponents(zeta, parity=1, minimum=3, label="zeta"),
            beta_exps=_sorted_exponents(beta, parity=0, minimum=2, label="beta"),
            var_exps=tuple(var_out),
        )

    @property
    def degree(self) -> int:
        return (self.pi_exp + self.log2_exp
                + sum(j * e for j, e in self.zeta_exps)
                + sum(k * e for k, e in self.beta_exps)
                + sum(e for _, e in self.var_exps))

    @property
    def is_constant(self) -> bool:
        """True when no formal variable occurs (transcendental constants allowed)."""
        return not self.var_exps

    def sort_key(self):
        # Graded lexicographic: degree first, then pi, log2, zeta keys
        # ascending, beta keys ascending, variable names ascending.  Fixing
        # this order makes serialization deterministic.
        return (self.degree, self.pi_exp, self.log2_exp,
                self.zeta_exps, self.beta_exps, self.var_exps)

    def mul(self, other: "GradedMonomial") -> "GradedMonomial":
        def merge(a, b):
            d = dict(a)
            for k, e in b:
                d[k] = d.get(k, 0) + e
            return sorted(d.items())

        return GradedMonomial(
            pi_exp=self.pi_exp + other.pi_exp,
            log2_exp=self.log2_exp + other.log2_exp,
            zeta_exps=tuple(merge(self.zeta_exps, other.zeta_exps)),
            beta_exps=tuple(merge(self.beta_exps, other.beta_exps)),
            var_exps=tuple(merge(self.var_exps, other.var_exps)),
        )

    def __str__(self) -> str:
        parts = []
        if self.pi_exp:
            parts.append("pi" if self.pi_exp == 1 else f"pi^{self.pi_exp}")
        if self.log2_exp:
            parts.append("log2" if self.log2_exp == 1 else f"log2^{self.log2_exp}")
        for j, e in self.zeta_exps:
            parts.append(f"zeta({j})" if e == 1 else f"zeta({j})^{e}")
        for k, e in self.beta_exps:
            parts.append(f"beta({k})" if e == 1 else f"beta({k})^{e}")
        for v, e in self.var_exps:
            parts.append(v if e == 1 else f"{v}^{e}")
        return "*".join(parts) if parts else "1"

    def latex(self) -> str:
        parts = []
        if self.pi_exp:
            parts.append("\\pi" if self.pi_exp == 1 else f"\\pi^{{{self.pi_exp}}}")
        if self.log2_exp:
            base = "\\log 2" if self.log2_exp == 1 else f"(\\log 2)^{{{self.log2_exp}}}"
            parts.append(base)
        for j, e in self.zeta_exps:
            parts.append(f"\\zeta({j})" + (f"^{{{e}}}" if e > 1 else ""))
        for k, e in self.beta_exps:
            parts.append(f"\\beta({k})" + (f"^{{{e}}}" if e > 1 else ""))
        for v, e in self.var_exps:
            name = v if len(v) == 1 else f"{v[0]}_{{{v[1:].lstrip('_')}}}"
            parts.append(name + (f"^{{{e}}}" if e > 1 else ""))
        return " ".join(parts) if parts else "1"


MONOMIAL_ONE = GradedMonomial.make()


class SymbolicValue:
    """A finite Q-linear combination of graded monomials, kept canonical.

    Zero coefficients are never stored, so equality is plain term-map
    equality and the zero element has an empty term map.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[GradedMonomial, RationalLike] | None = None):
        canon: dict[GradedMonomial, Fraction] = {}
        if terms:
            for mono, c in terms.items():
                c = _as_fraction(c)
                if c != 0:
                    canon[mono] = canon.get(mono, Fraction(0)) + c
        self._terms = {m: c for m, c in canon.items() if c != 0}

    @staticmethod
    def zero() -> "SymbolicValue":
        return SymbolicValue()

    @staticmethod
    def rational(c: RationalLike) -> "SymbolicValue":
        return SymbolicValue({MONOMIAL_ONE: _as_fraction(c)})

    @staticmethod
    def monomial(mono: GradedMonomial, coeff: RationalLike = 1) -> "SymbolicValue":
        return SymbolicValue({mono: _as_fraction(coeff)})

    @staticmethod
    def pi_power(exp: int, coeff: RationalLike = 1) -> "SymbolicValue":
        return SymbolicValue({GradedMonomial.make(pi_exp=exp): _as_fraction(coeff)})

    @staticmethod
    def variable(name: str, coeff: RationalLike = 1, exp: int = 1) -> "SymbolicValue":
        return SymbolicValue({GradedMonomial.make(variables={name: exp}): _as_fraction(coeff)})

    def terms(self) -> tuple[tuple[GradedMonomial, Fraction], ...]:
        """Terms in canonical (graded lexicographic) order."""
        return tuple(sorted(self._terms.items(), key=lambda mc: mc[0].sort_key()))

    def coefficient(self, mono: GradedMonomial) -> Fraction:
        return self._terms.get(mono, Fraction(0))

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymbolicValue):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "SymbolicValue") -> "SymbolicValue":
        if not isinstance(other, SymbolicValue):
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return SymbolicValue(out)

    def __neg__(self) -> "SymbolicValue":
        return SymbolicValue({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "SymbolicValue") -> "SymbolicValue":
        return self + (-other)

    def __mul__(self, other) -> "SymbolicValue":
        if isinstance(other, (Fraction, int)):
            c = _as_fraction(other)
            return SymbolicValue({m: cc * c for m, cc in self._terms.items()})
        if not isinstance(other, SymbolicValue):
            return NotImplemented
        out: dict[GradedMonomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = m1.mul(m2)
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return SymbolicValue(out)

    __rmul__ = __mul__

    def degrees(self) -> tuple[int, ...]:
        return tuple(sorted({m.degree for m in self._terms}))

    def homogeneous_degree(self) -> int | None:
        """Common degree of all terms, or None when the value is not homogeneous.

        The zero element is homogeneous of every degree; by convention it
        reports degree 0.
        """
        degs = self.degrees()
        if not degs:
            return 0
        if len(degs) == 1:
            return degs[0]
        return None

    def variables(self) -> tuple[str, ...]:
        return tuple(sorted({v for m in self._terms for v, _ in m.var_exps}))

    def substitute(self, name: str, value: RationalLike) -> "SymbolicValue":
        """Exactly substitute a rational value for a formal variable."""
        value = _as_fraction(value)
        out: dict[GradedMonomial, Fraction] = {}
        for m, c in self._terms.items():
            exp = dict(m.var_exps).get(name, 0)
            if exp:
                c = c * value ** exp
                m = GradedMonomial.make(m.pi_exp, m.log2_exp, m.zeta_exps, m.beta_exps,
                                        [(v, e) for v, e in m.var_exps if v != name])
            out[m] = out.get(m, Fraction(0)) + c
        return SymbolicValue(out)

    def __str__(self) -> str:
        return render_plain(self)

    def __repr__(self) -> str:
        return f"SymbolicValue({render_plain(self)})"


def ring_add(a: SymbolicValue, b: SymbolicValue) -> SymbolicValue:
    """Term-wise sum, canonicalized."""
    return a + b


def ring_mul(a: SymbolicValue, b: SymbolicValue) -> SymbolicValue:
    """Distributive product; degrees of product terms add."""
    return a * b


def homogeneous_degree(v: SymbolicValue) -> int | None:
    return v.homogeneous_degree()


# ---------------------------------------------------------------------------
# Polynomials in Q[pi^2, v] for one formal variable v (d or l).  These carry
# the numerators of the crown closed forms, where pi only ever appears in
# even powers.

class PiPolynomial:
    """Element of Q[pi^2, v]: coefficient map (pi^2-power, v-power) -> Q."""

    __slots__ = ("variable", "_coeffs")

    def __init__(self, variable: str,
                 coeffs: Mapping[tuple[int, int], RationalLike] | None = None):
        self.variable = variable
        canon: dict[tuple[int, int], Fraction] = {}
        if coeffs:
            for (p2, vp), c in coeffs.items():
                if p2 < 0 or vp < 0:
                    raise ValueError("exponents must be nonnegative")
                c = _as_fraction(c)
                if c != 0:
                    canon[(int(p2), int(vp))] = canon.get((int(p2), int(vp)), Fraction(0)) + c
        self._coeffs = {k: c for k, c in canon.items() if c != 0}

    @staticmethod
    def constant(variable: str, c: RationalLike) -> "PiPolynomial":
        return PiPolynomial(variable, {(0, 0): c})

    def coeffs(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._coeffs)

    def items(self) -> tuple[tuple[tuple[int, int], Fraction], ...]:
        return tuple(sorted(self._coeffs.items()))

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    def __eq__(self, other) -> bool:
        if not isinstance(other, PiPolynomial):
            return NotImplemented
        return self.variable == other.variable and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.variable, frozenset(self._coeffs.items())))

    def __add__(self, other: "PiPolynomial") -> "PiPolynomial":
        self._check_var(other)
        out = dict(self._coeffs)
        for k, c in other._coeffs.items():
            out[k] = out.get(k, Fraction(0)) + c
        return PiPolynomial(self.variable, out)

    def __mul__(self, other) -> "PiPolynomial":
        if isinstance(other, (Fraction, int)):
            return PiPolynomial(self.variable,
                                {k: c * other for k, c in self._coeffs.items()})
        self._check_var(other)
        out: dict[tuple[int, int], Fraction] = {}
        for (a1, b1), c1 in self._coeffs.items():
            for (a2, b2), c2 in other._coeffs.items():
                k = (a1 + a2, b1 + b2)
                out[k] = out.get(k, Fraction(0)) + c1 * c2
        return PiPolynomial(self.variable, out)

    __rmul__ = __mul__

    def _check_var(self, other: "PiPolynomial"):
        if self.variable != other.variable:
            raise ValueError(f"variable mismatch: {self.variable} vs {other.variable}")

    def shift_var(self, by: int) -> "PiPolynomial":
        """Multiply by v^by."""
        return PiPolynomial(self.variable,
                            {(p2, vp + by): c for (p2, vp), c in self._coeffs.items()})

    def var_degrees(self) -> tuple[int, ...]:
        return tuple(sorted({vp for _, vp in self._coeffs}))

    def homogeneous_degree(self) -> int | None:
        """Graded degree with pi of degree 1 and v of degree 1, or None."""
        degs = {2 * p2 + vp for p2, vp in self._coeffs}
        if not degs:
            return 0
        if len(degs) == 1:
            return degs.pop()
        return None

    def is_even_in_var(self) -> bool:
        return all(vp % 2 == 0 for _, vp in self._coeffs)

    def to_symbolic(self) -> SymbolicValue:
        return SymbolicValue({
            GradedMonomial.make(pi_exp=2 * p2, variables={self.variable: vp}): c
            for (p2, vp), c in self._coeffs.items()
        })

    def substitute_var(self, value: RationalLike) -> "PiPolynomial":
        value = _as_fraction(value)
        out: dict[tuple[int, int], Fraction] = {}
        for (p2, vp), c in self._coeffs.items():
            k = (p2, 0)
            out[k] = out.get(k, Fraction(0)) + c * value ** vp
        return PiPolynomial(self.variable, out)

    def __str__(self) -> str:
        return render_plain(self.to_symbolic())

    def __repr__(self) -> str:
        return f"PiPolynomial({self.variable!r}, {self!s})"


# ---------------------------------------------------------------------------
# Rendering and canonical serialization.

def _coeff_mono_plain(c: Fraction, mono: GradedMonomial) -> str:
    mono_s = str(mono)
    if mono_s == "1":
        return str(c)
    if c == 1:
        return mono_s
    if c == -1:
        return f"-{mono_s}"
    if c.denominator == 1:
        return f"{c.numerator} * {mono_s}"
    if abs(c.numerator) == 1:
        s = f"{mono_s}/{c.denominator}"
        return s if c.numerator > 0 else f"-{s}"
    return f"{c} * {mono_s}"


def render_plain(v: SymbolicValue) -> str:
    if v.is_zero:
        return "0"
    parts = []
    for mono, c in v.terms():
        s = _coeff_mono_plain(c, mono)
        if parts:
            parts.append(f"- {s[1:]}" if s.startswith("-") else f"+ {s}")
        else:
            parts.append(s)
    return " ".join(parts)


def render_latex(v: SymbolicValue) -> str:
    if v.is_zero:
        return "0"
    parts = []
    for mono, c in v.terms():
        mono_s = mono.latex()
        sign = "-" if c < 0 else "+"
        c = abs(c)
        if c.denominator == 1:
            body = mono_s if (c == 1 and mono_s != "1") else (
                str(c) if mono_s == "1" else f"{c} {mono_s}")
        else:
            num = mono_s if c.numerator == 1 and mono_s != "1" else (
                f"{c.numerator}" if mono_s == "1" else f"{c.numerator} {mono_s}")
            body = f"\\frac{{{num}}}{{{c.denominator}}}"
        if not parts:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


def to_json_obj(v: SymbolicValue) -> list[dict]:
    """Canonical JSON form: term objects in canonical order, all keys present."""
    out = []
    for mono, c in v.terms():
        out.append({
            "coeff": f"{c.numerator}/{c.denominator}",
            "pi": mono.pi_exp,
            "log2": mono.log2_exp,
            "zeta": {str(j): e for j, e in mono.zeta_exps},
            "beta": {str(k): e for k, e in mono.beta_exps},
            "vars": {name: e for name, e in mono.var_exps},
        })
    return out


def to_json(v: SymbolicValue) -> str:
    return json.dumps(to_json_obj(v), separators=(",", ":"))


def from_json_obj(obj: list[dict]) -> SymbolicValue:
    terms: dict[GradedMonomial, Fraction] = {}
    for t in obj:
        num, _, den = t["coeff"].partition("/")
        c = Fraction(int(num), int(den) if den else 1)
        mono = GradedMonomial.make(
            pi_exp=int(t.get("pi", 0)),
            log2_exp=int(t.get("log2", 0)),
            zeta={int(j): int(e) for j, e in t.get("zeta", {}).items()},
            beta={int(k): int(e) for k, e in t.get("beta", {}).items()},
            variables={str(n): int(e) for n, e in t.get("vars", {}).items()},
        )
        terms[mono] = terms.get(mono, Fraction(0)) + c
    return SymbolicValue(terms)


def from_json(s: str) -> SymbolicValue:
    return from_json_obj(json.loads(s))
