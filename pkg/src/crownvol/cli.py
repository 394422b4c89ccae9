"""Command-line front end.

Subcommands: crown, annulus, ngon, surface, verify, recognize.  Every
command builds one result document; --format selects the rendering (json is
canonical and byte-deterministic for a fixed configuration, latex/csv/plain
are views of the same document).  Conjectural values always carry a visible
CONJECTURE tag.  All randomness is seeded (--seed, default 0); there are no
entropy sources.

Exit codes: 0 success, 1 verify-suite failure, 2 usage or input error,
3 convergence failure, 4 insufficient precision for recognition.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction

from mpmath import mp, mpf

from .crowns import (crown_total_volume, crown_volume_eval,
                     crown_volume_fixed_neck, crown_volume_zero,
                     ngon_conjecture_volume)
from .ngon import (ConvergenceError, McSpec, QuadratureSpec,
                   ngon_volume_mc, ngon_volume_quadrature, ngon_volume_series,
                   ngon_volume_u_mc)
from .precision import PrecisionValue, eval_symbolic
from .recognize import (BasisFlags, InsufficientPrecisionError,
                        enumerate_basis, recognize_value)
from .ring import SymbolicValue, render_latex, render_plain, to_json_obj
from .surfaces import (SurfaceSpecError, SurfaceSpec, WpValidationError,
                       annulus_volume, annulus_volume_fixed_neck,
                       crown_to_factored, load_wp_polynomial,
                       surface_volume_fixed, surface_volume_free)
from .verify import run_suite

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_NO_CONVERGENCE = 3
EXIT_INSUFFICIENT_PRECISION = 4


@dataclass(frozen=True)
class RunConfig:
    precision_bits: int = 128
    output_format: str = "plain"
    seed: int = 0
    workers: int = 1


class CliError(Exception):
    def __init__(self, message: str, exit_code: int = EXIT_USAGE):
        super().__init__(message)
        self.exit_code = exit_code


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise CliError(f"environment variable {name} must be an integer, got {raw!r}")


def _parse_exact_or_decimal(text: str):
    """Fractions and integers stay exact; decimals become PrecisionValue
    with a half-ulp error bound on the last given place."""
    text = text.strip()
    if "/" in text:
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise CliError(f"not a rational: {text!r} ({exc})")
    try:
        return int(text)
    except ValueError:
        pass
    try:
        dec = Decimal(text)
    except InvalidOperation:
        raise CliError(f"not a number: {text!r}")
    if not dec.is_finite():
        raise CliError(f"not a finite number: {text!r}")
    places = max(0, -dec.as_tuple().exponent)
    with mp.workdps(max(places + 12, 30)):
        return PrecisionValue(mpf(text), mpf(10) ** (-places) / 2)


def _symbolic_doc(value: SymbolicValue, conjectural: bool = False) -> dict:
    plain = render_plain(value)
    latexed = render_latex(value)
    if conjectural:
        plain += " [CONJECTURE]"
        latexed += r" \quad\text{[CONJECTURE]}"
    return {"value": to_json_obj(value), "plain": plain, "latex": latexed,
            **({"conjectural": True} if conjectural else {})}


def _numeric_doc(pv: PrecisionValue, conjectural: bool = False) -> dict:
    # print no more digits than the error bound supports, so that piping a
    # numeric result into `recognize` carries an honest precision claim
    digits = min(30, max(6, pv.decimal_digits()))
    plain = f"{mp.nstr(pv.value, digits)} +/- {mp.nstr(pv.abs_error, 3)}"
    if conjectural:
        plain += " [CONJECTURE]"
    return {"numeric": mp.nstr(pv.value, digits), "abs_error": mp.nstr(pv.abs_error, 5),
            "plain": plain, "latex": mp.nstr(pv.value, digits),
            **({"conjectural": True} if conjectural else {})}


# --- subcommand implementations ----------------------------------------------


def _cmd_crown(args, cfg: RunConfig) -> dict:
    n = args.n
    if n < 1:
        raise CliError("--n must be at least 1")
    if args.total:
        doc = _symbolic_doc(crown_total_volume(n))
        return {"command": "crown", "n": n, "total": True, **doc}
    cv = crown_volume_fixed_neck(n)
    if args.d is None:
        form = crown_to_factored(cv)
        return {"command": "crown", "n": n, "plain": str(form),
                "latex": form.latex(),
                "value": to_json_obj(form.poly),
                "denominators": {v: {"sinh_half": s, "cosh_half": c}
                                 for v, (s, c) in form.denoms}}
    d = _parse_exact_or_decimal(args.d)
    if isinstance(d, (int, Fraction)) and d == 0:
        exact = crown_volume_zero(n)
        num = eval_symbolic(exact, None, cfg.precision_bits)
        sym = _symbolic_doc(exact)
        sym["plain"] = f"{render_plain(exact)} = {mp.nstr(num.value, 12)}"
        return {"command": "crown", "n": n, "d": "0", **sym,
                "numeric": mp.nstr(num.value, 17)}
    pv = crown_volume_eval(cv, d, cfg.precision_bits)
    return {"command": "crown", "n": n, "d": args.d, **_numeric_doc(pv)}


def _cmd_annulus(args, cfg: RunConfig) -> dict:
    a1, a2 = args.a1, args.a2
    if a1 < 1 or a2 < 1:
        raise CliError("--a1 and --a2 must be at least 1")
    if args.d is None:
        value = annulus_volume(a1, a2)
        return {"command": "annulus", "a1": a1, "a2": a2, **_symbolic_doc(value)}
    form = annulus_volume_fixed_neck(a1, a2)
    d = _parse_exact_or_decimal(args.d)
    pv = form.evaluate({"d": d}, cfg.precision_bits)
    return {"command": "annulus", "a1": a1, "a2": a2, "d": args.d,
            "fixed_neck_form": str(form), **_numeric_doc(pv)}


def _cmd_ngon(args, cfg: RunConfig) -> dict:
    n, method = args.n, args.method
    if method == "conjecture":
        if n < 3:
            raise CliError("--n must be at least 3")
        return {"command": "ngon", "n": n, "method": method,
                **_symbolic_doc(ngon_conjecture_volume(n), conjectural=True)}
    if n in (3, 4) and method in ("quadrature", "series", "u-mc"):
        raise CliError(f"V of the {n}-gon moduli space is exactly 1; "
                       "numeric estimation starts at n = 5")
    if method == "quadrature":
        spec = QuadratureSpec(target=args.target)
        pv = ngon_volume_quadrature(n, spec)
        return {"command": "ngon", "n": n, "method": method,
                "target": args.target, **_numeric_doc(pv)}
    if method == "series":
        pv = ngon_volume_series(n, K=args.series_depth,
                                extrapolate=not args.no_extrapolate)
        return {"command": "ngon", "n": n, "method": method,
                "depth": args.series_depth, **_numeric_doc(pv)}
    spec = McSpec(sample_count=args.samples, seed=cfg.seed, stream_count=args.streams)
    fn = ngon_volume_mc if method == "mc" else ngon_volume_u_mc
    est, stderr = fn(n, spec, workers=cfg.workers)
    doc = _numeric_doc(est)
    doc["plain"] = (f"{mp.nstr(est.value, 12)} +/- {mp.nstr(stderr.value, 4)} "
                    f"(stderr, {args.samples} samples, seed {cfg.seed})")
    return {"command": "ngon", "n": n, "method": method, "samples": args.samples,
            "seed": cfg.seed, "stderr": mp.nstr(stderr.value, 5), **doc}


def _cmd_surface(args, cfg: RunConfig) -> dict:
    crowns = tuple(int(x) for x in args.crowns.split(",") if x)
    spec = SurfaceSpec.create(args.genus, args.cuffs, crowns)
    try:
        with open(args.wp, "r", encoding="utf-8") as fh:
            document = json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read WP file: {exc}")
    except json.JSONDecodeError as exc:
        raise CliError(f"WP file is not valid JSON: {exc}")
    wp = load_wp_polynomial(document)
    if args.necks is None and not args.fixed:
        value = surface_volume_free(spec, wp)
        return {"command": "surface", "genus": args.genus, "cuffs": args.cuffs,
                "crowns": list(crowns), "necks": "free", **_symbolic_doc(value)}
    form = surface_volume_fixed(spec, wp)
    if args.necks is None:
        return {"command": "surface", "genus": args.genus, "cuffs": args.cuffs,
                "crowns": list(crowns), "necks": "symbolic",
                "plain": str(form), "latex": form.latex(),
                "value": to_json_obj(form.poly),
                "denominators": {v: {"sinh_half": s, "cosh_half": c}
                                 for v, (s, c) in form.denoms}}
    neck_values = [_parse_exact_or_decimal(x) for x in args.necks.split(",") if x]
    if len(neck_values) != len(crowns):
        raise CliError(f"--necks needs {len(crowns)} values, got {len(neck_values)}")
    cuff_values = []
    if args.cuff_lengths:
        cuff_values = [_parse_exact_or_decimal(x) for x in args.cuff_lengths.split(",") if x]
        if len(cuff_values) != args.cuffs:
            raise CliError(f"--cuff-lengths needs {args.cuffs} values")
    assignments = dict(zip(wp.variables[args.cuffs:], neck_values))
    assignments.update(zip(wp.variables[:args.cuffs], cuff_values))
    needed = set(form.poly.variables()) | set(form.denom_map())
    missing = sorted(needed - set(assignments))
    if missing:
        raise CliError(f"missing values for variables: {', '.join(missing)} "
                       "(pass --cuff-lengths)")
    pv = form.evaluate(assignments, cfg.precision_bits)
    return {"command": "surface", "genus": args.genus, "cuffs": args.cuffs,
            "crowns": list(crowns), "necks": args.necks, **_numeric_doc(pv)}


def _cmd_verify(args, cfg: RunConfig) -> tuple[dict, int]:
    results, ok = run_suite(args.suite)
    doc = {
        "command": "verify", "suite": args.suite,
        "checks": [r.to_dict() for r in results],
        "passed": ok,
        "plain": "\n".join(f"{r.status:12s} {r.check}  (expected {r.expected}; "
                           f"got {r.got}; tol {r.tolerance})" for r in results)
        + f"\nsuite {args.suite}: {'PASS' if ok else 'FAIL'}",
    }
    first_fail = next((r for r in results if not r.ok), None)
    if first_fail is not None:
        doc["first_failure"] = first_fail.check
        doc["plain"] += f"\nfirst failing check: {first_fail.check}"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump({k: v for k, v in doc.items() if k != "plain"}, fh, indent=2)
    return doc, EXIT_OK if ok else EXIT_VERIFY_FAILED


def _cmd_recognize(args, cfg: RunConfig) -> tuple[dict, int]:
    text = args.value
    if text.startswith("@"):
        try:
            with open(text[1:], "r", encoding="utf-8") as fh:
                text = fh.read().strip()
        except OSError as exc:
            raise CliError(f"cannot read value file: {exc}")
    parsed = _parse_exact_or_decimal(text)
    if isinstance(parsed, (int, Fraction)):
        raise CliError("recognition needs a decimal value with enough digits, "
                       "not an exact rational")
    flags = BasisFlags(include_log2=not args.no_log2,
                       include_beta=args.include_beta,
                       max_log2_exp=args.max_log2_exp,
                       allow_log2_mixing=args.allow_log2_mixing)
    basis = enumerate_basis(args.degree, flags)
    result = recognize_value(parsed, basis, max_height=args.max_height)
    doc = {"command": "recognize", "degree": args.degree,
           "basis_size": len(basis), "digits_used": result.digits_used,
           "status": result.status.upper()}
    if result.found:
        doc.update(_symbolic_doc(result.value))
        doc["residual"] = mp.nstr(result.residual.value, 5)
        doc["coefficient_height"] = result.coefficient_height
    else:
        doc["plain"] = "NOT FOUND"
        doc["latex"] = r"\text{NOT FOUND}"
    return doc, EXIT_OK


# --- rendering ----------------------------------------------------------------


def _flatten(doc: dict, prefix: str = "") -> list[tuple[str, str]]:
    rows = []
    for key, val in doc.items():
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            rows.extend(_flatten(val, f"{name}."))
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            for i, item in enumerate(val):
                rows.extend(_flatten(item, f"{name}[{i}]."))
        else:
            rows.append((name, json.dumps(val) if isinstance(val, list) else str(val)))
    return rows


def _render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({k: v for k, v in doc.items() if k not in ("plain", "latex")},
                          indent=2, sort_keys=False)
    if fmt == "plain":
        return doc.get("plain", json.dumps(doc, indent=2))
    if fmt == "latex":
        return doc.get("latex", doc.get("plain", ""))
    if fmt == "csv":
        if "checks" in doc:
            lines = ["check,status,expected,got,tolerance"]
            for c in doc["checks"]:
                lines.append(",".join(
                    '"' + str(c[k]).replace('"', '""') + '"'
                    for k in ("check", "status", "expected", "got", "tolerance")))
            return "\n".join(lines)
        rows = _flatten({k: v for k, v in doc.items() if k not in ("plain", "latex")})
        return "\n".join(["key,value"] + [
            f'"{k}","{str(v).replace(chr(34), chr(34) * 2)}"' for k, v in rows])
    raise CliError(f"unknown format {fmt!r}")


# --- argument parsing -----------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crownvol",
        description="Mirzakhani volumes of moduli spaces of crowned hyperbolic "
                    "surfaces: exact closed forms, high-precision estimation, "
                    "and constant recognition.")
    parser.add_argument("--format", choices=("json", "latex", "csv", "plain"),
                        default="plain", help="output rendering (json is canonical)")
    parser.add_argument("--precision-bits", type=int,
                        default=_env_int("CROWNVOL_PRECISION_BITS", 128))
    parser.add_argument("--seed", type=int, default=_env_int("CROWNVOL_SEED", 0))
    parser.add_argument("--workers", type=int, default=_env_int("CROWNVOL_WORKERS", 1))
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("crown", help="n-crown volumes V_An(d) and totals")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=str, default=None,
                   help="neck length (rational or decimal); omit for the closed form")
    p.add_argument("--total", action="store_true",
                   help="total volume pi^n/2 with the neck integrated out")

    p = sub.add_parser("annulus", help="(a1,a2)-annulus volumes")
    p.add_argument("--a1", type=int, required=True)
    p.add_argument("--a2", type=int, required=True)
    p.add_argument("--d", type=str, default=None,
                   help="fixed neck length; omit for the exact free-neck value")

    p = sub.add_parser("ngon", help="ideal n-gon volume estimation")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", required=True,
                   choices=("quadrature", "series", "mc", "u-mc", "conjecture"))
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--streams", type=int, default=8)
    p.add_argument("--target", type=float, default=1e-9,
                   help="absolute error target for quadrature")
    p.add_argument("--series-depth", type=int, default=16384,
                   help="index truncation K for the series method")
    p.add_argument("--no-extrapolate", action="store_true")

    p = sub.add_parser("surface", help="general crowned-surface volumes")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--cuffs", type=int, required=True)
    p.add_argument("--crowns", type=str, required=True,
                   help="comma-separated tine counts, one per crown")
    p.add_argument("--wp", type=str, required=True,
                   help="path to the Weil-Petersson polynomial JSON file")
    p.add_argument("--necks", type=str, default=None,
                   help="comma-separated neck lengths; omit to integrate them out")
    p.add_argument("--fixed", action="store_true",
                   help="keep necks symbolic instead of integrating them out")
    p.add_argument("--cuff-lengths", type=str, default=None,
                   help="comma-separated cuff lengths for numeric evaluation")

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", required=True,
                   choices=("paper-tables", "oracles", "conjectures", "all"))
    p.add_argument("--out", type=str, default=None,
                   help="also write the JSON report to this path")

    p = sub.add_parser("recognize", help="recognize a numeric constant")
    p.add_argument("--value", type=str, required=True,
                   help="decimal string, or @file containing one")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--max-height", type=int, default=1000)
    p.add_argument("--include-beta", action="store_true")
    p.add_argument("--no-log2", action="store_true")
    p.add_argument("--allow-log2-mixing", action="store_true")
    p.add_argument("--max-log2-exp", type=int, default=1)
    return parser


def main(argv=None) -> int:
    try:
        parser = _build_parser()
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    args = parser.parse_args(argv)
    cfg = RunConfig(precision_bits=args.precision_bits, output_format=args.format,
                    seed=args.seed, workers=args.workers)
    if cfg.precision_bits < 16:
        print("error: --precision-bits must be at least 16", file=sys.stderr)
        return EXIT_USAGE
    try:
        exit_code = EXIT_OK
        if args.command == "crown":
            doc = _cmd_crown(args, cfg)
        elif args.command == "annulus":
            doc = _cmd_annulus(args, cfg)
        elif args.command == "ngon":
            doc = _cmd_ngon(args, cfg)
        elif args.command == "surface":
            doc = _cmd_surface(args, cfg)
        elif args.command == "verify":
            doc, exit_code = _cmd_verify(args, cfg)
        else:
            doc, exit_code = _cmd_recognize(args, cfg)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except InsufficientPrecisionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT_PRECISION
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except (SurfaceSpecError, WpValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(_render(doc, cfg.output_format))
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
