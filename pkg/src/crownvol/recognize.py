"""Recover exact closed forms from high-precision numeric volumes.

A numeric volume known to d digits is matched against the homogeneous
monomial basis of its expected degree: an integer-relation search (PSLQ)
over [x, g_1, ..., g_m] looks for c_0 x = sum c_i g_i with bounded integer
coefficients.  Lattice search is the right tool here -- one equation, many
unknowns -- because it certifies a bounded coefficient height, which least
squares cannot.

Guards against spurious lattice relations, all mandatory:

* a precision precondition (`required_digits`), which puts the search
  tolerance well below the residual floor ~height^-m of junk relations
  over an m-element basis;
* a persistence check: the relation must reappear unchanged when the
  working precision is increased by 25%;
* a residual check at full precision: found values must reproduce the
  input within 100 times its error bound, with coefficient heights within
  the requested bound.  Anything less is reported as not-found, never as a
  low-confidence guess.

The module also runs the finite-k coefficient checks for the (1,k)-annulus
volume conjectures (exact arithmetic, so genuine theorems at each finite k)
and the numeric consistency report for the n-gon volume conjecture, which
is labelled consistency evidence and never treated as ground truth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from .crowns import double_factorial, ngon_conjecture_volume
from .ngon import QuadratureSpec, ngon_volume_quadrature
from .precision import PrecisionValue, eval_monomial, eval_symbolic
from .ring import GradedMonomial, SymbolicValue, render_plain
from .surfaces import annulus_volume
from .tables import NGON_VOLUMES


class InsufficientPrecisionError(ValueError):
    """The input carries too few correct digits for a trustworthy search."""


@dataclass(frozen=True)
class BasisFlags:
    """Controls which monomials enter the recognition basis.

    The defaults admit log2 to the first power only and keep it unmixed
    with zeta or beta factors, and leave beta out entirely: no known
    volume needs more.  The flags exist for exploration.
    """

    include_log2: bool = True
    include_beta: bool = False
    max_log2_exp: int = 1
    allow_log2_mixing: bool = False


DEFAULT_FLAGS = BasisFlags()


@dataclass(frozen=True)
class MonomialBasis:
    degree: int
    monomials: tuple[GradedMonomial, ...]
    flags: BasisFlags = DEFAULT_FLAGS

    def __len__(self) -> int:
        return len(self.monomials)


def _weighted_multisets(gens: list[int], budget: int):
    """All exponent assignments over gens (weights) with total weight <= budget."""
    if not gens:
        yield ()
        return
    w = gens[0]
    for e in range(budget // w + 1):
        for rest in _weighted_multisets(gens[1:], budget - w * e):
            yield (e,) + rest


def enumerate_basis(degree: int, flags: BasisFlags = DEFAULT_FLAGS) -> MonomialBasis:
    """All variable-free monomials of the exact degree, canonically ordered."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    zeta_gens = list(range(3, degree + 1, 2))
    beta_gens = list(range(2, degree + 1, 2)) if flags.include_beta else []
    monos: set[GradedMonomial] = set()
    max_log2 = min(flags.max_log2_exp, degree) if flags.include_log2 else 0
    for log2_e in range(0, max_log2 + 1):
        rem = degree - log2_e
        if log2_e > 0 and not flags.allow_log2_mixing:
            monos.add(GradedMonomial.make(pi_exp=rem, log2_exp=log2_e))
            continue
        for z_exps in _weighted_multisets(zeta_gens, rem):
            used_z = sum(w * e for w, e in zip(zeta_gens, z_exps))
            for b_exps in _weighted_multisets(beta_gens, rem - used_z):
                used = used_z + sum(w * e for w, e in zip(beta_gens, b_exps))
                monos.add(GradedMonomial.make(
                    pi_exp=rem - used, log2_exp=log2_e,
                    zeta={w: e for w, e in zip(zeta_gens, z_exps) if e},
                    beta={w: e for w, e in zip(beta_gens, b_exps) if e}))
    ordered = tuple(sorted(monos, key=lambda m: m.sort_key()))
    return MonomialBasis(degree=degree, monomials=ordered, flags=flags)


@dataclass(frozen=True)
class RecognitionResult:
    status: str  # "found" | "not-found"
    value: SymbolicValue | None = None
    residual: PrecisionValue | None = None
    coefficient_height: int | None = None
    digits_used: int = 0

    @property
    def found(self) -> bool:
        return self.status == "found"


def required_digits(basis_size: int, max_height: int) -> int:
    """Correct digits needed before a height-bounded search is trustworthy.

    Junk lattice relations over m basis constants at height H have residuals
    around H^-m, so the search tolerance (set a few digits above the input's
    accuracy) must sit well below m * digits(H); six guard digits on top.
    """
    return 6 + basis_size * len(str(abs(max_height)))


def _available_digits(x: PrecisionValue) -> int:
    return x.decimal_digits()


def _normalize_relation(rel: list[int]) -> tuple[int, ...] | None:
    g = 0
    for c in rel:
        g = math.gcd(g, abs(c))
    if g == 0:
        return None
    rel = [c // g for c in rel]
    for c in rel:
        if c != 0:
            return tuple(rel) if c > 0 else tuple(-v for v in rel)
    return None


def _pslq_at(x: PrecisionValue, monomials, digits: int, max_height: int):
    with mp.workdps(digits + 10):
        bits = int(digits * 3.33) + 30
        vals = [mpf(x.value)]
        for mono in monomials:
            vals.append(eval_monomial(mono, None, bits).value)
        # headroom above max_height: the search needs slack to land on
        # relations whose coefficients sit exactly at the bound; the strict
        # height check on the result is the caller's
        rel = mp.pslq(vals, tol=mpf(10) ** (-(digits - 4)),
                      maxcoeff=32 * max_height, maxsteps=50000)
    if rel is None:
        return None
    return _normalize_relation(list(rel))


def recognize_value(x: PrecisionValue, basis: MonomialBasis,
                    max_height: int = 1000) -> RecognitionResult:
    """Search for x as a bounded-height rational combination of the basis.

    Raises InsufficientPrecisionError when x does not carry
    `required_digits(len(basis), max_height)` correct digits; otherwise
    returns a found value only when the integer relation persists under a
    25% precision increase, reproduces x within 100 times its error bound,
    and keeps every coefficient's numerator and denominator within
    max_height.
    """
    if not basis.monomials:
        raise ValueError("empty basis")
    if max_height < 1:
        raise ValueError("max_height must be positive")
    if x.abs_error > 0 and abs(x.value) <= 100 * x.abs_error:
        # indistinguishable from zero at the input's own accuracy
        return RecognitionResult(
            status="found", value=SymbolicValue.zero(),
            residual=PrecisionValue(abs(x.value), x.abs_error),
            coefficient_height=0, digits_used=0)
    digits = _available_digits(x)
    need = required_digits(len(basis), max_height)
    if digits < need:
        raise InsufficientPrecisionError(
            f"{digits} correct digits available, but {len(basis)} basis elements "
            f"at height {max_height} need at least {need} "
            f"(supply more digits or lower max_height)")

    d_lo = max(need, int(digits / 1.25))
    rel_lo = _pslq_at(x, basis.monomials, d_lo, max_height)
    if rel_lo is None:
        return RecognitionResult(status="not-found", digits_used=digits)
    rel_hi = _pslq_at(x, basis.monomials, digits, max_height) if digits > d_lo else rel_lo
    if rel_hi is None or rel_hi != rel_lo:
        # the candidate did not persist under increased precision: spurious
        return RecognitionResult(status="not-found", digits_used=digits)
    c0, rest = rel_hi[0], rel_hi[1:]
    if c0 == 0:
        return RecognitionResult(status="not-found", digits_used=digits)

    coeffs = [Fraction(-c, c0) for c in rest]
    height = max(max(abs(c.numerator), c.denominator) for c in coeffs) if any(coeffs) else 0
    height = max(height, abs(c0))
    if height > max_height:
        return RecognitionResult(status="not-found", digits_used=digits)
    value = SymbolicValue.zero()
    for mono, c in zip(basis.monomials, coeffs):
        if c:
            value = value + SymbolicValue.monomial(mono, c)

    with mp.workdps(digits + 15):
        bits = int(digits * 3.33) + 40
        ev = eval_symbolic(value, None, bits)
        eff_err = x.abs_error if x.abs_error > 0 else abs(x.value) * mpf(10) ** (-digits)
        resid = abs(ev.value - x.value) + ev.abs_error
        if resid >= 100 * eff_err:
            return RecognitionResult(status="not-found", digits_used=digits)
        return RecognitionResult(status="found", value=value,
                                 residual=PrecisionValue(resid, eff_err),
                                 coefficient_height=height, digits_used=digits)


# ---------------------------------------------------------------------------
# Coefficient conjectures for (1,k)-annuli, checked in exact arithmetic.

def _one_minus_pow2(e: int) -> Fraction:
    # 1 - 2^e for e <= 0
    return Fraction(2 ** (-e) - 1, 2 ** (-e)) if e < 0 else 1 - Fraction(2 ** e)


def _conjectured_leading(k: int) -> tuple[int, GradedMonomial, Fraction]:
    """Leading term of V_A(1,k) as a polynomial in pi^2."""
    c = Fraction(double_factorial(k - 2), double_factorial(k - 1))
    if k % 2 == 1:
        return k - 1, GradedMonomial.make(pi_exp=k - 1, log2_exp=1), c
    return k - 2, GradedMonomial.make(pi_exp=k - 2, zeta={3: 1}), c * Fraction(7, 4)


#: (name, m-th last zeta term, first valid k, coefficient formulas)
_TAIL_CONJECTURES: list[tuple[str, int, int]] = [
    ("last-term", 1, 2),
    ("second-last-term", 2, 4),
    ("third-last-term", 3, 6),
    ("fourth-last-term", 4, 8),
    ("fifth-last-term", 5, 10),
    ("sixth-last-term", 6, 12),
]


def _conjectured_tail_coeff(m: int, k: int) -> Fraction:
    """Conjectured coefficient of the m-th last zeta term of V_A(1,k)."""
    if m == 1:
        base, gap = Fraction(k), 1
    elif m == 2:
        base, gap = Fraction(k * (k - 2), 6), 3
    elif m == 3:
        base, gap = Fraction(2 * k * (k - 4) * (5 * k + 2), math.factorial(6)), 5
    elif m == 4:
        base, gap = Fraction(8 * k * (k - 6) * (35 * k ** 2 + 42 * k + 16),
                             math.factorial(9)), 7
    elif m == 5:
        base, gap = Fraction(88 * k * (k - 8) * (5 * k + 4) * (35 * k ** 2 + 56 * k + 36),
                             math.factorial(12)), 9
    elif m == 6:
        base, gap = Fraction(
            3640 * k * (k - 10)
            * (385 * k ** 4 + 1540 * k ** 3 + 2684 * k ** 2 + 2288 * k + 768),
            math.factorial(15)), 11
    else:
        raise ValueError("only the last six coefficients have conjectured forms")
    exp = (gap - k) if k % 2 == 1 else (gap - 2 - k)
    return base * _one_minus_pow2(exp)


def _zeta_terms_ascending(v: SymbolicValue) -> list[tuple[int, int, Fraction]]:
    """(pi_exp, zeta_arg, coeff) for the single-zeta terms, lowest pi power first."""
    out = []
    for mono, c in v.terms():
        if mono.log2_exp or mono.beta_exps or mono.var_exps:
            continue
        if len(mono.zeta_exps) == 1 and mono.zeta_exps[0][1] == 1:
            out.append((mono.pi_exp, mono.zeta_exps[0][0], c))
    out.sort()
    return out


def verify_annuli_conjectures(k_max: int) -> list[dict]:
    """Check the conjectured (1,k)-annulus coefficients for k <= k_max.

    Exact arithmetic throughout: over the finite range each conjecture is a
    theorem of the computation.  Returns one report entry per conjecture
    with the first counterexample, if any.
    """
    if k_max < 2:
        raise ValueError("need k_max >= 2")
    volumes = {k: annulus_volume(1, k) for k in range(1, k_max + 1)}
    reports: list[dict] = []

    checked, counter = [], None
    for k in range(1, k_max + 1):
        pi_exp, mono, coeff = _conjectured_leading(k)
        terms = volumes[k].terms()
        lead_mono, lead_coeff = max(terms, key=lambda mc: mc[0].pi_exp)
        ok = (lead_mono == mono and lead_coeff == coeff)
        checked.append(k)
        if not ok and counter is None:
            counter = {"k": k, "expected": render_plain(SymbolicValue.monomial(mono, coeff)),
                       "got": render_plain(SymbolicValue.monomial(lead_mono, lead_coeff))}
    reports.append({"conjecture": "leading-term", "k_checked": checked,
                    "passed": counter is None, "first_counterexample": counter})

    for name, m, k_min in _TAIL_CONJECTURES:
        checked, counter = [], None
        for k in range(k_min, k_max + 1):
            zterms = _zeta_terms_ascending(volumes[k])
            expected_coeff = _conjectured_tail_coeff(m, k)
            expected_pi = 2 * (m - 1)
            expected_arg = (k if k % 2 == 1 else k + 1) - 2 * (m - 1)
            if len(zterms) < m:
                got = None
            else:
                got = zterms[m - 1]
            ok = got == (expected_pi, expected_arg, expected_coeff)
            checked.append(k)
            if not ok and counter is None:
                counter = {"k": k,
                           "expected": f"pi^{expected_pi} zeta({expected_arg}) * {expected_coeff}",
                           "got": "missing" if got is None else
                                  f"pi^{got[0]} zeta({got[1]}) * {got[2]}"}
        reports.append({"conjecture": name, "k_checked": checked,
                        "passed": counter is None, "first_counterexample": counter})
    return reports


def verify_ngon_conjecture(n_values, tolerance_digits: int = 4,
                           spec: QuadratureSpec | None = None) -> list[dict]:
    """Compare quadrature estimates of V_Dn with the conjectural closed form.

    Consistency evidence only, never proof: the closed form is a theorem
    for n <= 8 and open beyond, so entries are labelled CONSISTENT or
    INCONSISTENT and the caller must not treat them as ground truth.
    """
    spec = spec or QuadratureSpec(target=1e-7, max_refinements=7)
    reports = []
    for n in n_values:
        conj = ngon_conjecture_volume(n)
        conj_num = eval_symbolic(conj, None, 80)
        if n in (3, 4):
            exact = NGON_VOLUMES[n]
            ok = conj == exact
            reports.append({
                "n": n, "method": "exact", "estimate": render_plain(exact),
                "conjecture": render_plain(conj), "agreement_digits": None,
                "status": "CONSISTENT" if ok else "INCONSISTENT",
            })
            continue
        est = ngon_volume_quadrature(n, spec)
        with mp.workdps(30):
            diff = abs(est.value - conj_num.value)
            rel = diff / abs(conj_num.value)
            digits = float(mp.floor(-mp.log10(rel))) if rel > 0 else float("inf")
        reports.append({
            "n": n, "method": "quadrature",
            "estimate": float(est.value), "estimate_error": float(est.abs_error),
            "conjecture": render_plain(conj), "conjecture_value": float(conj_num.value),
            "agreement_digits": digits,
            "status": "CONSISTENT" if digits >= tolerance_digits else "INCONSISTENT",
        })
    return reports
