"""Verification suites: exact table replays, numeric oracles, conjectures.

Each check compares an independently computed quantity against a frozen
expected value or a stated identity, at a pinned tolerance, and reports
{check, status, expected, got, tolerance} entries.  Conjecture consistency
checks are non-blocking: they report CONSISTENT / INCONSISTENT and never
affect the exit status.  The finite-range coefficient checks for the
(1,k)-annulus conjectures run in exact arithmetic and are blocking.
"""

from __future__ import annotations

import random as _random
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from . import recognize as _rec
from .crowns import (crown_volume_eval, crown_volume_fixed_neck,
                     crown_volume_zero, crown_gf_coefficients,
                     ngon_conjecture_volume, ngon_gf_coefficients,
                     ngon_upper_bound)
from .ngon import (McSpec, QuadratureSpec, chekhov_corrected_crown_integral,
                   crown_convolution_check, crown_marginal_total,
                   ngon_volume_mc, ngon_volume_quadrature, ngon_volume_series,
                   ngon_volume_u_mc, two_crown_lambda_integral)
from .precision import eval_symbolic
from .recognize import (BasisFlags, enumerate_basis, recognize_value,
                        verify_annuli_conjectures, verify_ngon_conjecture)
from .ring import SymbolicValue, render_plain
from .surfaces import (SurfaceSpec, WpPolynomial, annulus_volume,
                       surface_volume_free)
from .tables import ANNULUS_VOLUMES, NGON_VOLUMES


@dataclass(frozen=True)
class CheckResult:
    check: str
    status: str  # PASS | FAIL | CONSISTENT | INCONSISTENT
    expected: str
    got: str
    tolerance: str
    blocking: bool = True

    @property
    def ok(self) -> bool:
        return (not self.blocking) or self.status == "PASS"

    def to_dict(self) -> dict:
        return {"check": self.check, "status": self.status, "expected": self.expected,
                "got": self.got, "tolerance": self.tolerance}


def _pass_fail(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


# --- criterion 1: exact n-gon table -----------------------------------------

def check_ngon_table() -> list[CheckResult]:
    out = []
    for n in range(3, 9):
        ok = ngon_conjecture_volume(n) == NGON_VOLUMES[n]
        out.append(CheckResult(
            f"ngon-table-closed-form-n{n}", _pass_fail(ok),
            render_plain(NGON_VOLUMES[n]), render_plain(ngon_conjecture_volume(n)),
            "exact"))
    for n, tol in [(5, 1e-4), (6, 1e-4)]:
        est = ngon_volume_series(n, K=16384, extrapolate=True)
        exact = eval_symbolic(NGON_VOLUMES[n], None, 80)
        diff = abs(est.value - exact.value)
        out.append(CheckResult(
            f"ngon-table-series-n{n}", _pass_fail(diff <= tol),
            mp.nstr(exact.value, 12), mp.nstr(est.value, 12), f"abs {tol}"))
    for n in (5, 6, 7, 8):
        est = ngon_volume_quadrature(n, QuadratureSpec(target=1e-8))
        exact = eval_symbolic(NGON_VOLUMES[n], None, 80)
        diff = abs(est.value - exact.value)
        out.append(CheckResult(
            f"ngon-table-quadrature-n{n}", _pass_fail(diff <= 1e-6),
            mp.nstr(exact.value, 14), mp.nstr(est.value, 14), "abs 1e-6"))
    return out


# --- criterion 2: annulus table ----------------------------------------------

def check_annulus_table() -> list[CheckResult]:
    out = []
    for (a1, a2), expected in sorted(ANNULUS_VOLUMES.items()):
        got = annulus_volume(a1, a2)
        out.append(CheckResult(
            f"annulus-table-A{a1},{a2}", _pass_fail(got == expected),
            render_plain(expected), render_plain(got), "exact term-map equality"))
    return out


# --- criterion 3: convolution oracle for the crown closed form ---------------

def check_crown_convolution() -> list[CheckResult]:
    out = []
    for n in range(1, 7):
        cv = crown_volume_fixed_neck(n)
        for d in (0, Fraction(1, 10), 1, 5):
            closed = crown_volume_eval(cv, d, 160)
            conv = crown_convolution_check(n, d, 80)
            with mp.workdps(40):
                rel = abs(conv.value - closed.value) / abs(closed.value)
            out.append(CheckResult(
                f"crown-convolution-n{n}-d{d}", _pass_fail(rel <= 1e-10),
                mp.nstr(closed.value, 18), mp.nstr(conv.value, 18), "rel 1e-10"))
    return out


# --- criterion 4: marginalization over the neck ------------------------------

def check_marginalization() -> list[CheckResult]:
    out = []
    for n in range(1, 7):
        total = crown_marginal_total(n, 80)
        with mp.workprec(120):
            expected = mp.pi ** n / 2
            diff = abs(total.value - expected)
        out.append(CheckResult(
            f"crown-marginal-n{n}", _pass_fail(diff <= 1e-8),
            mp.nstr(expected, 16), mp.nstr(total.value, 16), "abs 1e-8"))
    return out


# --- criterion 5: corrected cyclic simplex integral ---------------------------

def check_chekhov() -> list[CheckResult]:
    out = []
    for n in (2, 3):
        cv = crown_volume_fixed_neck(n)
        for P in (1, 5):
            closed = crown_volume_eval(cv, P, 80)
            simplex = chekhov_corrected_crown_integral(n, P, 53)
            diff = abs(simplex.value - closed.value)
            out.append(CheckResult(
                f"chekhov-simplex-n{n}-P{P}", _pass_fail(diff <= 1e-6),
                mp.nstr(closed.value, 14), mp.nstr(simplex.value, 14), "abs 1e-6"))
    return out


# --- criterion 6: two-tine lambda-length integral -----------------------------

def check_appendix_integral() -> list[CheckResult]:
    out = []
    for d in (Fraction(1, 10), 1, 10):
        got = two_crown_lambda_integral(d, 80)
        with mp.workprec(120):
            dd = mpf(d.numerator) / d.denominator if isinstance(d, Fraction) else mpf(d)
            expected = dd / (2 * mp.sinh(dd / 2))
            diff = abs(got.value - expected)
        out.append(CheckResult(
            f"two-crown-lambda-d{d}", _pass_fail(diff <= 1e-10),
            mp.nstr(expected, 16), mp.nstr(got.value, 16), "abs 1e-10"))
    return out


# --- criterion 7: generating functions ----------------------------------------

def check_generating_functions() -> list[CheckResult]:
    out = []
    for d in (0, 1):
        coeffs = crown_gf_coefficients(12, d, 128)
        worst = mpf(0)
        with mp.workprec(160):
            for n, got in enumerate(coeffs, start=1):
                closed = crown_volume_eval(crown_volume_fixed_neck(n), d, 160)
                rel = abs(got.value - closed.value) / abs(closed.value)
                worst = max(worst, rel)
        out.append(CheckResult(
            f"crown-gf-first-12-d{d}", _pass_fail(worst <= mpf("1e-20")),
            "closed forms, rel 1e-20", f"worst rel dev {mp.nstr(worst, 3)}",
            "rel 1e-20 at 128 bits"))
    gf = ngon_gf_coefficients(17)
    bad = [n for n in range(3, 21) if gf[n - 3] != ngon_conjecture_volume(n)]
    out.append(CheckResult(
        "ngon-gf-matches-closed-form-n<=20", _pass_fail(not bad),
        "exact equality for all n <= 20",
        "all equal" if not bad else f"mismatch at n={bad}", "exact"))
    return out


# --- criterion 8: structural shape of annuli volumes; surface homogeneity -----

def _annulus_shape_ok(a1: int, a2: int) -> tuple[bool, str]:
    n = a1 + a2
    v = annulus_volume(a1, a2)
    zeta_args = set()
    has_log2 = False
    for mono, c in v.terms():
        if c <= 0:
            return False, f"nonpositive coefficient on {mono}"
        if mono.var_exps or mono.beta_exps:
            return False, f"unexpected factor in {mono}"
        if mono.log2_exp:
            if mono.log2_exp != 1 or mono.zeta_exps or mono.pi_exp != n - 2:
                return False, f"malformed log2 term {mono}"
            has_log2 = True
            continue
        if len(mono.zeta_exps) != 1 or mono.zeta_exps[0][1] != 1:
            return False, f"non-simple zeta monomial {mono}"
        s = mono.zeta_exps[0][0]
        expected = (n if n % 2 == 1 else n - 1) - mono.pi_exp
        if s != expected:
            return False, f"zeta argument {s} does not match pi power in {mono}"
        zeta_args.add(s)
    if n % 2 == 1:
        if has_log2:
            return False, "log2 term in odd-dimensional case"
        expected_count = (n - 1) // 2   # i = 0..(n-3)/2, all strictly positive
    else:
        both_odd = a1 % 2 == 1 and a2 % 2 == 1
        if has_log2 != both_odd:
            return False, f"log2 term present={has_log2}, expected={both_odd}"
        expected_count = (n - 2) // 2   # i = 0..(n-4)/2
    if len(zeta_args) != expected_count:
        return False, f"{len(zeta_args)} zeta terms, expected {expected_count}"
    return True, "ok"


def _random_wp(rng: _random.Random, genus: int, variables: tuple[str, ...]) -> WpPolynomial:
    degree = 6 * genus - 6 + 2 * len(variables)
    terms = {}
    for _ in range(rng.randint(1, 3)):
        # random even-power monomial of the target degree
        budget = degree
        pows = []
        for _ in variables:
            p = 2 * rng.randint(0, budget // 2)
            pows.append(p)
            budget -= p
        if budget % 2:  # degree is even, so budget stays even
            raise AssertionError("odd leftover in even budget")
        key = (budget // 2, tuple(pows))
        terms[key] = terms.get(key, Fraction(0)) + Fraction(rng.randint(1, 9), rng.randint(1, 9))
    return WpPolynomial.create(genus, variables, terms)


def check_shape_homogeneity(seed: int = 20240314, wp_trials: int = 12) -> list[CheckResult]:
    out = []
    bad = []
    for n in range(2, 13):
        for a1 in range(1, n // 2 + 1):
            ok, why = _annulus_shape_ok(a1, n - a1)
            if not ok:
                bad.append(f"A({a1},{n - a1}): {why}")
    out.append(CheckResult(
        "annulus-shape-a1+a2<=12", _pass_fail(not bad),
        "zeta-only odd case; log2 term iff both tine counts odd; positive coefficients",
        "all conform" if not bad else "; ".join(bad[:3]), "exact"))

    rng = _random.Random(seed)
    configs = [(0, 2, (1,)), (0, 2, (2,)), (0, 2, (3,)), (0, 1, (2, 2)),
               (0, 3, (1,)), (1, 1, (1,)), (1, 0, (2,)), (0, 2, (1, 2))]
    bad = []
    for _ in range(wp_trials):
        g, m, crowns = configs[rng.randrange(len(configs))]
        nvars = m + len(crowns)
        names = tuple(f"b{i+1}" for i in range(m)) + tuple(f"d{k+1}" for k in range(len(crowns)))
        if 6 * g - 6 + 2 * nvars < 0:
            continue
        wp = _random_wp(rng, g, names)
        spec = SurfaceSpec.create(g, m, crowns)
        vol = surface_volume_free(spec, wp)
        deg = vol.homogeneous_degree()
        if deg != spec.dim_moduli:
            bad.append(f"{spec}: degree {deg} != dim {spec.dim_moduli}")
        per_b_cap = 6 * g - 6 + 2 * nvars
        for mono, _ in vol.terms():
            for var, e in mono.var_exps:
                if e > per_b_cap:
                    bad.append(f"{spec}: deg_{var} = {e} > {per_b_cap}")
    out.append(CheckResult(
        "surface-free-homogeneity", _pass_fail(not bad),
        "homogeneous of degree dim M; per-cuff degree bounded",
        "all conform" if not bad else "; ".join(bad[:3]), "exact"))
    return out


# --- criterion 9: proven upper bound ------------------------------------------

def check_upper_bound() -> list[CheckResult]:
    out = []
    bad_sym = [n for n in range(3, 31) if ngon_upper_bound(n) != crown_volume_zero(n - 2)]
    out.append(CheckResult(
        "upper-bound-equals-crown-at-zero", _pass_fail(not bad_sym),
        "bound = V_A(n-2)(0) exactly, n <= 30",
        "all equal" if not bad_sym else f"mismatch at n={bad_sym}", "exact"))
    ratio_bad = [n for n in range(3, 31)
                 if ngon_conjecture_volume(n) * Fraction(n - 2, 2) != ngon_upper_bound(n)]
    out.append(CheckResult(
        "conjecture-to-bound-ratio", _pass_fail(not ratio_bad),
        "conjecture = 2/(n-2) * bound exactly, n <= 30",
        "all equal" if not ratio_bad else f"mismatch at n={ratio_bad}", "exact"))

    bad = []
    for n in range(4, 13):
        bound = eval_symbolic(ngon_upper_bound(n), None, 80).value
        estimates = []
        if n >= 5:
            target = 1e-6 if n <= 10 else 1e-5
            estimates.append(("quadrature", ngon_volume_quadrature(
                n, QuadratureSpec(target=target, max_refinements=7))))
            estimates.append(("series", ngon_volume_series(n, K=8192)))
            est, _ = ngon_volume_u_mc(n, McSpec(sample_count=200_000, seed=5))
            estimates.append(("u-mc", est))
        est, _ = ngon_volume_mc(n, McSpec(sample_count=200_000, seed=5))
        estimates.append(("mc", est))
        for label, est in estimates:
            if not est.value <= bound + 3 * est.abs_error:
                bad.append(f"n={n} {label}: {mp.nstr(est.value, 10)} > {mp.nstr(bound, 10)}")
    out.append(CheckResult(
        "ngon-estimates-below-bound", _pass_fail(not bad),
        "estimate <= V_A(n-2)(0) + 3 sigma for n <= 12",
        "all below" if not bad else "; ".join(bad[:3]), "3 sigma"))
    return out


# --- criterion 10: annulus coefficient conjectures (exact, finite range) -------

def check_annuli_conjectures(k_max: int = 12) -> list[CheckResult]:
    out = []
    for report in verify_annuli_conjectures(k_max):
        ce = report["first_counterexample"]
        out.append(CheckResult(
            f"annuli-conjecture-{report['conjecture']}",
            _pass_fail(report["passed"]),
            f"conjectured coefficients for k <= {k_max}",
            "all match" if report["passed"] else
            f"k={ce['k']}: expected {ce['expected']}, got {ce['got']}",
            "exact"))
    return out


# --- criterion 11: recognition round-trip and n-gon recognition ----------------

def check_recognition_roundtrip(trials: int = 200, seed: int = 7) -> list[CheckResult]:
    rng = _random.Random(seed)
    flags = BasisFlags(include_beta=True)
    failures = []
    for t in range(trials):
        degree = rng.randint(1, 6)
        basis = enumerate_basis(degree, flags)
        k = rng.randint(1, min(4, len(basis)))
        monos = rng.sample(list(basis.monomials), k)
        q = rng.randint(1, 100)
        value = SymbolicValue.zero()
        for mono in monos:
            p = rng.choice([i for i in range(-100, 101) if i != 0])
            value = value + SymbolicValue.monomial(mono, Fraction(p, q))
        x = eval_symbolic(value, None, 200)
        rec = recognize_value(x, basis, max_height=100)
        if not (rec.found and rec.value == value):
            failures.append(f"trial {t}: degree {degree}")
    return [CheckResult(
        "recognition-round-trip", _pass_fail(not failures),
        f"{trials}/{trials} exact recoveries at 60 digits, height <= 100",
        f"{trials - len(failures)}/{trials}" + ("" if not failures else
                                                f" (first: {failures[0]})"),
        "exact recovery")]


def check_recognition_ngon() -> list[CheckResult]:
    out = []
    basis = enumerate_basis(4, BasisFlags(include_log2=False, include_beta=False))
    spec = QuadratureSpec(nodes_per_panel=48, num_panels=48, target=1e-10)
    for n, expected in ((7, ngon_conjecture_volume(7)), (8, ngon_conjecture_volume(8))):
        est = ngon_volume_quadrature(n, spec)
        rec = recognize_value(est, basis, max_height=50)
        ok = rec.found and rec.value == expected
        out.append(CheckResult(
            f"recognize-ngon-quadrature-n{n}", _pass_fail(ok),
            render_plain(expected),
            render_plain(rec.value) if rec.found else "NOT FOUND",
            "recognized exactly"))
    return out


# --- criterion 12: n-gon conjecture consistency (non-blocking) ------------------

def check_ngon_conjecture_consistency() -> list[CheckResult]:
    out = []
    reports = verify_ngon_conjecture(range(9, 11), tolerance_digits=4,
                                     spec=QuadratureSpec(target=1e-8))
    for r in reports:
        out.append(CheckResult(
            f"ngon-conjecture-consistency-n{r['n']}",
            r["status"],
            f"{r['conjecture']} = {r['conjecture_value']:.8g} [CONJECTURE]",
            f"quadrature {r['estimate']:.10g} (agreement: {r['agreement_digits']} digits)",
            ">= 4 digits", blocking=False))
    return out


# ---------------------------------------------------------------------------

SUITES: dict[str, tuple] = {
    "paper-tables": (check_ngon_table, check_annulus_table),
    "oracles": (check_crown_convolution, check_marginalization, check_chekhov,
                check_appendix_integral, check_generating_functions,
                check_shape_homogeneity, check_upper_bound,
                check_recognition_roundtrip, check_recognition_ngon),
    "conjectures": (check_annuli_conjectures, check_ngon_conjecture_consistency),
}


def run_suite(name: str) -> tuple[list[CheckResult], bool]:
    """Run one of the named suites (or 'all'); ok means no blocking failure."""
    if name == "all":
        checks = [fn for suite in SUITES.values() for fn in suite]
    elif name in SUITES:
        checks = list(SUITES[name])
    else:
        raise ValueError(f"unknown suite {name!r}; choose from "
                         f"{', '.join([*SUITES, 'all'])}")
    results: list[CheckResult] = []
    for fn in checks:
        results.extend(fn())
    return results, all(r.ok for r in results)
