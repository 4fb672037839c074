"""Numerical inverse spectral theory for reflectionless Jacobi matrices.

Krein step functions and their exponential Herglotz representations, the
gap-modification flow to the canonical class, spectral measures by
Stieltjes inversion, half-line coefficient reconstruction, and the
extremal constant of a finite-gap compact set.
"""

from .errors import ConfigError, NumericError
from .sets import CompactSet
from .krein import (StepFunction, HerglotzRep, free_krein, extend_krein,
                    herglotz_eval, boundary_value, abs_boundary,
                    hilbert_transform, correction_factor)
from .operators import (Tail, JacobiCoefficients, HalfLineRestriction, shift,
                        coefficient_metric, green_diag, reflectionless_residual)
from .gapflow import (CanonicalKrein, gap_modify, flow_to_canonical,
                      flow_steps, is_canonical, gap_jump_masses)
from .measures import (AcPiece, SpectralMeasure, FSelector, stieltjes_invert,
                       half_line_measure, total_mass, moments,
                       quadrature_discretize, nodes_weights_csv)
from .inverse import (reconstruct_coefficients, coefficient_deviation,
                      lanczos_tridiag, reconstruction_report, coefficients_csv)
from .extremal import (GapJumps, ExtremalResult, canonical_krein_from_jumps,
                       default_bound, mass_objective, minimize_mass,
                       grid_min_mass)
from .experiments import (ExperimentConfig, approximate_omega_limit,
                          random_compact_set, random_admissible_krein,
                          random_f_selector)

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "NumericError",
    "CompactSet",
    "StepFunction", "HerglotzRep", "free_krein", "extend_krein",
    "herglotz_eval", "boundary_value", "abs_boundary", "hilbert_transform",
    "correction_factor",
    "Tail", "JacobiCoefficients", "HalfLineRestriction", "shift",
    "coefficient_metric", "green_diag", "reflectionless_residual",
    "CanonicalKrein", "gap_modify", "flow_to_canonical", "flow_steps",
    "is_canonical", "gap_jump_masses",
    "AcPiece", "SpectralMeasure", "FSelector", "stieltjes_invert",
    "half_line_measure", "total_mass", "moments", "quadrature_discretize",
    "nodes_weights_csv",
    "reconstruct_coefficients", "coefficient_deviation", "lanczos_tridiag",
    "reconstruction_report", "coefficients_csv",
    "GapJumps", "ExtremalResult", "canonical_krein_from_jumps",
    "default_bound", "mass_objective", "minimize_mass", "grid_min_mass",
    "ExperimentConfig", "approximate_omega_limit",
    "random_compact_set", "random_admissible_krein", "random_f_selector",
]
