"""Eigenvector statistics of deformed GUE random-matrix ensembles.

The package covers both sides of the comparison: closed-form mean-field
predictions for the moments and distributions of eigenvector components
(:mod:`dgue.meanfield`, :mod:`dgue.analytic`) and direct Monte Carlo
diagonalization of sampled matrices (:mod:`dgue.ensemble`,
:mod:`dgue.experiment`).  Profiles describing the deformation live in
:mod:`dgue.profiles`; the ``dgue`` command wires everything together.
"""

__version__ = "0.1.0"

from .analytic import (ComponentLaw, MomentPrediction, QuadratureError,
                       ScalingLaw, component_law, finite_n_oracle,
                       moment_prediction, scaling_regime,
                       zero_energy_moments)
from .ensemble import (EigenSystem, EquivalenceReport, deform, eigensystem,
                       fix_phases, generalized_equivalence_check, sample_gue)
from .experiment import (DistributionCheck, FitResult, FractalDimension,
                         MomentEstimate, ScanResult, WindowPolicy,
                         bootstrap_stderr, default_realizations,
                         default_window, distribution_check,
                         estimate_moments, fit_loglog, fractal_dimension,
                         ks_critical, moment_realizations, parse_window,
                         scan_sizes)
from .meanfield import (MeanFieldError, NoBulkSolution, NonConvergence,
                        SaddlePoint, SpectralDensity, density_of_states,
                        gue_closed_form, residuals, solve_saddle)
from .profiles import (DeformationProfile, ProfileError, ProfileSpec,
                       build_profile, constant_profile, exponential_profile,
                       explicit_profile, load_profile, power_law_profile,
                       validity_ratio)

__all__ = [
    "__version__",
    "ComponentLaw", "MomentPrediction", "QuadratureError", "ScalingLaw",
    "component_law", "finite_n_oracle", "moment_prediction",
    "scaling_regime", "zero_energy_moments",
    "EigenSystem", "EquivalenceReport", "deform", "eigensystem",
    "fix_phases", "generalized_equivalence_check", "sample_gue",
    "DistributionCheck", "FitResult", "FractalDimension", "MomentEstimate",
    "ScanResult", "WindowPolicy", "bootstrap_stderr",
    "default_realizations", "default_window", "distribution_check",
    "estimate_moments", "fit_loglog", "fractal_dimension", "ks_critical",
    "moment_realizations", "parse_window", "scan_sizes",
    "MeanFieldError", "NoBulkSolution", "NonConvergence", "SaddlePoint",
    "SpectralDensity", "density_of_states", "gue_closed_form", "residuals",
    "solve_saddle",
    "DeformationProfile", "ProfileError", "ProfileSpec", "build_profile",
    "constant_profile", "exponential_profile", "explicit_profile",
    "load_profile", "power_law_profile", "validity_ratio",
]
