"""Mirzakhani volumes of moduli spaces of crowned hyperbolic surfaces.

Exact closed forms where they exist (crowns, annuli, general crowned
surfaces over supplied Weil-Petersson polynomials), three independent
high-precision estimators for ideal n-gon volumes, and lattice-based
recognition of numeric results as rational combinations of pi powers,
log 2, odd zeta values and even Dirichlet beta values.
"""

from .crowns import (CrownVolume, crown_gf_coefficients, crown_total_volume,
                     crown_volume_eval, crown_volume_fixed_neck,
                     crown_volume_zero, double_factorial,
                     ngon_conjecture_volume, ngon_gf_coefficients,
                     ngon_upper_bound)
from .moments import (DenomKind, DivergentMomentError, ParityError, moment,
                      moment_quadrature, reduce_integral)
from .ngon import (ConvergenceError, McSpec, QPolynomial, QuadratureSpec,
                   chekhov_corrected_crown_integral, crown_convolution_check,
                   crown_marginal_total, ngon_series_partial_sum,
                   ngon_volume_mc, ngon_volume_quadrature, ngon_volume_series,
                   ngon_volume_u_mc, q_polynomial, q_polynomial_closed,
                   two_crown_lambda_integral)
from .precision import (PrecisionValue, UnassignedVariableError,
                        constant_crosscheck, eval_constant, eval_symbolic)
from .recognize import (BasisFlags, InsufficientPrecisionError, MonomialBasis,
                        RecognitionResult, enumerate_basis, recognize_value,
                        required_digits, verify_annuli_conjectures,
                        verify_ngon_conjecture)
from .ring import (GradedMonomial, PiPolynomial, SymbolicValue, from_json,
                   from_json_obj, homogeneous_degree, render_latex,
                   render_plain, ring_add, ring_mul, to_json, to_json_obj)
from .surfaces import (FactoredForm, SurfaceSpec, SurfaceSpecError,
                       WP_V03, WpPolynomial, WpValidationError,
                       annulus_volume, annulus_volume_fixed_neck,
                       crown_to_factored, load_wp_polynomial,
                       surface_volume_fixed, surface_volume_free)

__version__ = "0.1.0"
