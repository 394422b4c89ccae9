"""High-precision numerical estimation of ideal n-gon volumes, plus oracles.

Three independent routes to V_Dn are implemented.

Quadrature.  In the substituted coordinates y_i the volume is a chain
integral over (0,1)^(n-3) of prod_i 1/(1 - y_i y_{i+1}).  Because the
integrand is a nearest-neighbour product, tensor-product quadrature
collapses to a transfer-kernel contraction: with nodes/weights (t_a, w_a),
build M[a][b] = sqrt(w_a w_b) / (1 - t_a t_b) and e[a] = sqrt(w_a); the
estimate is e^T M^(n-4) e at cost O(n Q^2) instead of O(Q^(n-3)).  The
kernel's corner singularity at y = y' = 1 (mild, of zeta(2) type) is
handled by geometrically graded panels toward 1 with a Gauss rule on each;
the error is estimated by doubling the node count until successive
estimates differ by less than the target.

Series.  V_Dn = sum over k_1..k_(n-4) >= 1 of
1/(k_1 (k_1+k_2-1) ... (k_(n-5)+k_(n-4)-1) k_(n-4)), evaluated by the same
chain trick on the truncated index range (a Hankel matrix-vector product,
done via FFT convolution).  Plain truncation converges like O(1/K) with
logarithmic factors; a three-level Richardson extrapolation in 1/K is
applied by default and the last correction is reported as a heuristic
error bound (heuristic, unlike the interval bounds elsewhere).

Monte Carlo.  In shearing coordinates the integrand factors against the
normalized hyperbolic-secant density p(s) = 1/(2 pi cosh(s/2)), sampled by
inverse CDF s = 2 log tan(pi u / 2); the importance weight
W = exp(sum s_i / 2) / (1 + sum_j exp(s_1 + ... + s_j)) is bounded by 1/2.
A second sampler integrates 1/Q_(n-3)(u) uniformly over the cube, where
Q_j is the combinatorial polynomial with Q_1 = 1 and
Q_j = u_1 Q_(j-1)(u_2..u_j) + (1-u_1)...(1-u_j).  Streams use counter-based
(Philox) generators, so estimates depend only on (seed, stream_count,
sample_count), never on the worker count.

The module also hosts the numeric oracles that validate the crown closed
forms: the n-fold secant convolution (via its Fourier transform
pi^n / cosh^n(2 pi^2 xi)), the corrected cyclic simplex integral

    int_{delta_i > 0, sum = P} e^(P/2)(e^P - 1) / prod_i (e^(delta_i + delta_{i+1}) - 1),

the two-tine lambda-length integral

    int_0^inf dx / ((x + cosh(d/2))^2 - sinh^2(d/2)) = d / (2 sinh(d/2)),

and the marginalization int_0^inf V_An(d) dd = pi^n / 2.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from mpmath import mp, mpf
from numpy.polynomial.legendre import leggauss
from scipy.signal import fftconvolve

from .crowns import CrownVolume, crown_volume_fixed_neck
from .precision import PrecisionValue, _slop, as_precision_value

_MC_CHUNK = 1 << 17  # fixed so that summation order never depends on memory


class ConvergenceError(RuntimeError):
    """An estimator failed to reach its target within its refinement budget."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Graded-panel Gauss quadrature parameters for the transfer contraction.

    Panels subdivide (0,1) at the breakpoints 1 - panel_ratio^i, grading
    geometrically toward the singular corner at 1; each panel carries a
    Gauss-Legendre rule with nodes_per_panel nodes.  Refinement multiplies
    the node count by ~2 per step.  The contraction runs in hardware
    doubles; precision_bits caps the representable target.
    """

    nodes_per_panel: int = 24
    num_panels: int = 24
    panel_ratio: float = 0.5
    precision_bits: int = 53
    target: float = 1e-9
    max_refinements: int = 6

    def __post_init__(self):
        if self.nodes_per_panel < 2 or self.num_panels < 1:
            raise ValueError("need at least 2 nodes and 1 panel")
        if not (0 < self.panel_ratio < 1):
            raise ValueError("panel_ratio must lie in (0, 1)")
        if self.target < 2.0 ** (-min(self.precision_bits, 48)):
            raise ValueError("target below what the working precision can support")


@dataclass(frozen=True)
class McSpec:
    """Deterministic Monte Carlo parameters: (seed, stream_count, sample_count)
    fully determine the estimate."""

    sample_count: int = 1_000_000
    seed: int = 0
    stream_count: int = 8

    def __post_init__(self):
        if self.sample_count < 2 or self.stream_count < 1:
            raise ValueError("need at least 2 samples and 1 stream")


def _gauss_nodes(nodes_per_panel: int, num_panels: int, ratio: float):
    # Grading deeper than float64 can represent would round nodes onto the
    # kernel pole at 1: cap the panel count so the smallest node gap to 1
    # (panel width times the Gauss edge gap) stays above one ulp.
    edge_gap = (2.405 / (2 * nodes_per_panel)) ** 2 / 2
    max_panels = int(math.floor(math.log(1e-16 / edge_gap) / math.log(ratio))) + 1
    num_panels = min(num_panels, max(max_panels, 4))
    x, w = leggauss(nodes_per_panel)
    bps = [0.0] + [1.0 - ratio ** i for i in range(1, num_panels)] + [1.0]
    ts, ws = [], []
    for a, b in zip(bps[:-1], bps[1:]):
        if b <= a:
            continue
        ts.append(0.5 * (b - a) * x + 0.5 * (a + b))
        ws.append(0.5 * (b - a) * w)
    t, w = np.concatenate(ts), np.concatenate(ws)
    keep = t < 1.0 - 0.9e-16
    return t[keep], w[keep]


def _chain_contract(t: np.ndarray, w: np.ndarray, n: int) -> float:
    e = np.sqrt(w)
    v = e.copy()
    block = 2048
    for _ in range(n - 4):
        ev = e * v
        out = np.empty_like(v)
        for i0 in range(0, len(t), block):
            rows = 1.0 / (1.0 - np.outer(t[i0:i0 + block], t))
            out[i0:i0 + block] = e[i0:i0 + block] * (rows @ ev)
        v = out
    return float(e @ v)


def ngon_volume_quadrature(n: int, spec: QuadratureSpec | None = None) -> PrecisionValue:
    """Estimate V_Dn by transfer-kernel quadrature, n >= 5.

    Refines until the last two levels differ by less than the target; the
    returned abs_error is that difference, floored at the double-precision
    contraction plateau.  Raises ConvergenceError if the target is not met
    within the refinement budget; n = 3, 4 are exact constants handled by
    the closed-form paths, not here.
    """
    if n < 5:
        raise ValueError("quadrature route needs n >= 5 (n = 3, 4 are exactly 1)")
    spec = spec or QuadratureSpec()
    npp, npan = spec.nodes_per_panel, spec.num_panels
    prev = None
    for _ in range(spec.max_refinements + 1):
        t, w = _gauss_nodes(npp, npan, spec.panel_ratio)
        cur = _chain_contract(t, w, n)
        if prev is not None:
            diff = abs(cur - prev)
            if diff < spec.target:
                # floor covers the double-precision contraction plateau, which
                # successive-rung differences alone understate
                err = max(diff, abs(cur) * 5e-12)
                return PrecisionValue(mpf(cur), mpf(err))
        prev = cur
        npp = int(math.ceil(npp * math.sqrt(2)))
        npan = int(math.ceil(npan * math.sqrt(2)))
    raise ConvergenceError(
        f"quadrature for n={n} did not reach target {spec.target} "
        f"within {spec.max_refinements} refinements")


# ---------------------------------------------------------------------------
# Series route.

def ngon_series_partial_sum(n: int, K: int) -> float:
    """Truncated chain sum with all indices at most K (all terms positive)."""
    if n < 5:
        raise ValueError("series route needs n >= 5")
    if K < 2:
        raise ValueError("need K >= 2")
    k = np.arange(1, K + 1, dtype=float)
    v = 1.0 / k
    f = v.copy()
    if n > 5:
        g = 1.0 / np.arange(1, 2 * K, dtype=float)  # g[m-1] = 1/m
        for _ in range(n - 5):
            full = fftconvolve(g, f[::-1])
            f = full[K - 1:2 * K - 1]
    return float(v @ f)


def ngon_volume_series(n: int, K: int = 16384, extrapolate: bool = True) -> PrecisionValue:
    """Series estimate of V_Dn, optionally Richardson-extrapolated in 1/K.

    With extrapolation the truncations at K/4, K/2 and K are combined twice
    with first-order weights (which cancels both the 1/K and the
    (log K)/K tail terms); the reported abs_error is twice the last
    correction plus the plain-to-extrapolated gap scale -- a heuristic, as
    the exact tail shape carries logarithms.
    """
    if extrapolate:
        if K < 8:
            raise ValueError("extrapolation needs K >= 8")
        s0 = ngon_series_partial_sum(n, K // 4)
        s1 = ngon_series_partial_sum(n, K // 2)
        s2 = ngon_series_partial_sum(n, K)
        t1, t2 = 2 * s1 - s0, 2 * s2 - s1
        u = 2 * t2 - t1
        err = 2 * abs(u - t2) + abs(u) * 1e-13
        return PrecisionValue(mpf(u), mpf(err))
    s1 = ngon_series_partial_sum(n, K // 2)
    s2 = ngon_series_partial_sum(n, K)
    # plain truncation: tail comparable to the last halving gap
    return PrecisionValue(mpf(s2), mpf(4 * abs(s2 - s1) + abs(s2) * 1e-13))


# ---------------------------------------------------------------------------
# Monte Carlo in shearing coordinates.

def _mc_shear_weights(u: np.ndarray) -> np.ndarray:
    # u = 0 maps to s = -inf, whose weight limit is 0; the log-sum-exp
    # arithmetic below produces exactly that without special-casing
    with np.errstate(divide="ignore"):
        s = 2.0 * np.log(np.tan(0.5 * np.pi * u))
    c = np.cumsum(s, axis=1)
    m = np.maximum(c.max(axis=1), 0.0)
    lse = m + np.log(np.exp(-m) + np.sum(np.exp(c - m[:, None]), axis=1))
    return np.exp(0.5 * c[:, -1] - lse)


def _mc_cube_weights(u: np.ndarray) -> np.ndarray:
    # 1/Q_j(u) via prefix products of u and suffix products of (1-u)
    N = u.shape[0]
    P = np.concatenate([np.ones((N, 1)), np.cumprod(u, axis=1)], axis=1)
    S = np.concatenate(
        [np.cumprod((1.0 - u)[:, ::-1], axis=1)[:, ::-1], np.ones((N, 1))], axis=1)
    q = np.sum(P * S, axis=1)
    return 1.0 / q


def _mc_stream(seed: int, stream: int, count: int, dim: int, weight_fn) -> tuple[float, float]:
    rng = np.random.Generator(np.random.Philox(key=seed).jumped(stream))
    s = s2 = 0.0
    done = 0
    sums, sqs = [], []
    while done < count:
        take = min(_MC_CHUNK, count - done)
        w = weight_fn(rng.random((take, dim)))
        sums.append(float(np.sum(w)))
        sqs.append(float(np.sum(w * w)))
        done += take
    return math.fsum(sums), math.fsum(sqs)


def _mc_run(n_vars: int, spec: McSpec, weight_fn, scale: float,
            workers: int = 1) -> tuple[PrecisionValue, PrecisionValue]:
    counts = [spec.sample_count // spec.stream_count] * spec.stream_count
    for i in range(spec.sample_count % spec.stream_count):
        counts[i] += 1
    jobs = [(spec.seed, i, c, n_vars) for i, c in enumerate(counts) if c]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda j: _mc_stream(*j, weight_fn), jobs))
    else:
        parts = [_mc_stream(*j, weight_fn) for j in jobs]
    # fsum is exact, so the reduction is independent of worker scheduling
    total = math.fsum(p[0] for p in parts)
    total_sq = math.fsum(p[1] for p in parts)
    N = spec.sample_count
    mean = total / N
    var = max(0.0, (total_sq / N - mean * mean)) * N / (N - 1)
    stderr = scale * math.sqrt(var / N)
    est = scale * mean
    return (PrecisionValue(mpf(est), mpf(stderr)),
            PrecisionValue(mpf(stderr), mpf(stderr) * mpf("0.1")))


def ngon_volume_mc(n: int, spec: McSpec | None = None,
                   workers: int = 1) -> tuple[PrecisionValue, PrecisionValue]:
    """Importance-sampled estimate of V_Dn in shearing coordinates, n >= 4.

    Returns (estimate, stderr); the estimate's abs_error is one standard
    error, a statistical (not worst-case) bound.
    """
    if n < 4:
        raise ValueError("Monte Carlo route needs n >= 4 (n = 3 is exactly 1)")
    spec = spec or McSpec()
    return _mc_run(n - 3, spec, _mc_shear_weights, math.pi ** (n - 3), workers)


def ngon_volume_u_mc(n: int, spec: McSpec | None = None,
                     workers: int = 1) -> tuple[PrecisionValue, PrecisionValue]:
    """Uniform-cube estimate of V_Dn via 1/Q_(n-3), n >= 5.

    An independent cross-check of the other estimators; the weight is
    heavier-tailed than the shear sampler's, and the reported stderr
    reflects that honestly.
    """
    if n < 5:
        raise ValueError("cube route needs n >= 5")
    spec = spec or McSpec()
    return _mc_run(n - 3, spec, _mc_cube_weights, 1.0, workers)


def mc_weight_at_origin(n: int) -> Fraction:
    """The shear-sampler weight W at s = 0: 1/(n - 2).  Sanity value."""
    return Fraction(1, n - 2)


# ---------------------------------------------------------------------------
# The combinatorial cube polynomials Q_j.

@dataclass(frozen=True)
class QPolynomial:
    """Exact multilinear polynomial Q_j(u_1..u_j); terms map exponent
    vectors to integer coefficients."""

    j: int
    terms: tuple[tuple[tuple[int, ...], Fraction], ...]

    def term_map(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self.terms)

    def evaluate(self, point) -> Fraction:
        point = [Fraction(p) for p in point]
        if len(point) != self.j:
            raise ValueError(f"expected {self.j} coordinates")
        total = Fraction(0)
        for exps, c in self.terms:
            v = c
            for p, e in zip(point, exps):
                v *= p ** e
            total += v
        return total


def _poly_from_dict(j: int, d: dict[tuple[int, ...], Fraction]) -> QPolynomial:
    return QPolynomial(j=j, terms=tuple(sorted((k, v) for k, v in d.items() if v != 0)))


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict[tuple[int, ...], Fraction] = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            out[k] = out.get(k, Fraction(0)) + va * vb
    return out


def _one_minus_u_product(j: int, start: int) -> dict:
    """prod_{t=start..j} (1 - u_t) as a dict over j variables (1-indexed)."""
    out = {tuple([0] * j): Fraction(1)}
    for t in range(start, j + 1):
        factor = {tuple([0] * j): Fraction(1),
                  tuple(1 if i == t - 1 else 0 for i in range(j)): Fraction(-1)}
        out = _poly_mul(out, factor)
    return out


def q_polynomial(j: int) -> QPolynomial:
    """Q_j by the recursion Q_j = u_1 Q_(j-1)(u_2..u_j) + (1-u_1)...(1-u_j).

    Q_1 = 1, and Q_j(1/2, ..., 1/2) = (j+1)/2^j.
    """
    if j < 1:
        raise ValueError("need j >= 1")
    if j == 1:
        return _poly_from_dict(1, {(0,): Fraction(1)})
    prev = q_polynomial(j - 1)
    shifted = {}
    for exps, c in prev.terms:
        shifted[(0,) + exps] = c
    u1 = {tuple(1 if i == 0 else 0 for i in range(j)): Fraction(1)}
    first = _poly_mul(u1, shifted)
    rest = _one_minus_u_product(j, 1)
    out = dict(first)
    for k, v in rest.items():
        out[k] = out.get(k, Fraction(0)) + v
    return _poly_from_dict(j, out)


def q_polynomial_closed(j: int) -> QPolynomial:
    """The explicit sum of staircase products u_1..u_i (1-u_(i+1))..(1-u_j)."""
    if j < 1:
        raise ValueError("need j >= 1")
    out: dict[tuple[int, ...], Fraction] = {}
    for i in range(j + 1):
        term = {tuple(1 if t < i else 0 for t in range(j)): Fraction(1)}
        term = _poly_mul(term, _one_minus_u_product(j, i + 1))
        for k, v in term.items():
            out[k] = out.get(k, Fraction(0)) + v
    return _poly_from_dict(j, out)


# ---------------------------------------------------------------------------
# Numeric oracles for the crown closed forms.

def crown_convolution_check(n: int, d, precision_bits: int = 80) -> PrecisionValue:
    """n-fold convolution of 1/(2 cosh(s/2)) at d, via the Fourier side.

    Evaluates int_R pi^n e^(2 pi i xi d) / cosh^n(2 pi^2 xi) d xi as a real
    cosine integral truncated where the integrand's exponential envelope
    2^n pi^n e^(-2 pi^2 n xi) drops below the target; the truncation bound
    is added to the reported error.  Must agree with the closed form
    V_An(d).
    """
    if n < 1:
        raise ValueError("need n >= 1")
    dv = as_precision_value(d, precision_bits)
    if dv.value < 0:
        raise ValueError("need d >= 0")
    with mp.workprec(precision_bits + 30):
        dd = dv.value
        target = mpf(2) ** (-precision_bits - 6)
        # envelope: |integrand| <= pi^n 2^n e^(-2 pi^2 n xi)
        X = (mp.log(mpf(2) ** n * mp.pi ** n / (target * 2 * mp.pi ** 2 * n))
             / (2 * mp.pi ** 2 * n))
        X = max(X, mpf(1))
        # split at the cosine's half-periods: tanh-sinh is spectrally fast on
        # each smooth piece but crawls on the oscillatory whole
        points = [mpf(0)]
        if dd > 0:
            step = 1 / (2 * dd)
            k = 1
            while k * step < X and k < 4096:
                points.append(k * step)
                k += 1
        points.append(X)
        f = lambda xi: mp.cos(2 * mp.pi * xi * dd) / mp.cosh(2 * mp.pi ** 2 * xi) ** n
        val, quad_err = mp.quad(f, points, error=True)
        val = 2 * mp.pi ** n * val
        tail = 2 * mp.pi ** n * mpf(2) ** n * mp.e ** (-2 * mp.pi ** 2 * n * X) / (2 * mp.pi ** 2 * n)
        # the phase derivative in d is bounded by 2 pi X on the kept range
        d_sensitivity = 2 * mp.pi * X * abs(2 * mp.pi ** n) * dv.abs_error
        err = 2 * mp.pi ** n * abs(quad_err) * 10 + tail + d_sensitivity + _slop(val)
        return PrecisionValue(val, err)


def chekhov_corrected_crown_integral(n: int, P, precision_bits: int = 53) -> PrecisionValue:
    """Cyclic simplex integral for the fixed-neck crown volume.

    Integrates e^(P/2)(e^P - 1) / prod_{i=1}^n (e^(delta_i + delta_{i+1}) - 1)
    over delta_i > 0 with delta_1 + ... + delta_n = P (indices cyclic),
    by nested adaptive quadrature over the (n-1)-simplex.  Cost grows
    exponentially with n: intended for the small-n consistency checks.
    Must equal V_An(P).
    """
    if n < 2:
        raise ValueError("need n >= 2")
    Pv = as_precision_value(P, precision_bits)
    if not Pv.value > 0:
        raise ValueError("need P > 0")
    with mp.workprec(precision_bits + 24):
        PP = Pv.value
        C = mp.e ** (PP / 2) * (mp.e ** PP - 1)

        def integrand(ds):
            full = ds + [PP - mp.fsum(ds)]
            prod = mpf(1)
            for i in range(n):
                prod *= mp.e ** (full[i] + full[(i + 1) % n]) - 1
            return 1 / prod

        errors = []

        def level(fixed):
            if len(fixed) == n - 1:
                return integrand(fixed)
            rem = PP - mp.fsum(fixed)
            val, e = mp.quad(lambda x: level(fixed + [x]), [0, rem], error=True)
            if not fixed:
                errors.append(e)
            return val

        val = C * level([])
        err = C * (abs(errors[0]) * 20 if errors else mpf(0)) + _slop(val)
        err += abs(val) * Pv.rel_error * (n + 2)
        return PrecisionValue(val, err)


def two_crown_lambda_integral(d, precision_bits: int = 80) -> PrecisionValue:
    """Lambda-length route to the 2-crown volume:
    int_0^inf dx / ((x + cosh(d/2))^2 - sinh^2(d/2)), equal to d/(2 sinh(d/2))."""
    dv = as_precision_value(d, precision_bits)
    if not dv.value > 0:
        raise ValueError("need d > 0")
    with mp.workprec(precision_bits + 24):
        ch, sh = mp.cosh(dv.value / 2), mp.sinh(dv.value / 2)
        f = lambda x: 1 / ((x + ch) ** 2 - sh ** 2)
        val, quad_err = mp.quad(f, [0, mp.inf], error=True)
        err = abs(quad_err) * 10 + dv.abs_error + _slop(val)
        return PrecisionValue(val, err)


def _crown_mpf_func(cv: CrownVolume):
    pref = mpf(cv.prefactor.numerator) / cv.prefactor.denominator
    items = cv.numerator.items()
    sinh_kind = cv.denom_kind.name == "SINH_HALF"

    def f(dd):
        total = mpf(0)
        for (p2, vp), c in items:
            total += (mpf(c.numerator) / c.denominator) * mp.pi ** (2 * p2) * dd ** vp
        hyp = mp.sinh(dd / 2) if sinh_kind else mp.cosh(dd / 2)
        return pref * total / hyp

    return f


def crown_marginal_total(n: int, precision_bits: int = 80) -> PrecisionValue:
    """Numeric int_0^inf V_An(d) dd; must equal the exact total pi^n / 2."""
    cv = crown_volume_fixed_neck(n)
    f = _crown_mpf_func(cv)
    with mp.workprec(precision_bits + 24):
        val, quad_err = mp.quad(f, [0, mp.inf], error=True)
        return PrecisionValue(val, abs(quad_err) * 10 + _slop(val))
