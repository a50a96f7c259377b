"""Numerical laboratory for difference-defined Besov and Triebel-Lizorkin quasi-norms."""

from .corpus import smooth_corpus, standard_corpus
from .dilation import FitResult, dilate, fit_loglog, homogeneity_experiment, scale_commutation_check
from .errors import (DomainError, ExperimentError, FslabError, ResolutionError, ResolutionWarning,
                     ResourceError, UsageError)
from .grid import GridFunction, lp_norm, make_bump
from .multiplier import (LambdaSweep, MultiplierSpec, derivative_bound_check, make_multiplier,
                         mother_bump, multiplier_bound_experiment, multiplier_sweep, multiply)
from .norms import (QuasiNormReport, SmoothnessParams, besov_norm, embedding_margin,
                    embedding_probe, equivalence_probe, quasi_norm, tl_norm)
from .seqspace import (EntropyEstimate, SeqElement, SeqSpaceParams, embedding_map,
                       entropy_calculus_check, entropy_curve, entropy_estimate, entropy_rate_fit,
                       map_entropy_numbers, seq_norm)
from .smoothness import (ModulusCurve, ball_means, iterated_difference, modulus, modulus_curve)

__version__ = "0.1.0"

__all__ = [
    "GridFunction", "make_bump", "lp_norm",
    "iterated_difference", "modulus", "ball_means", "modulus_curve", "ModulusCurve",
    "SmoothnessParams", "QuasiNormReport", "besov_norm", "tl_norm", "quasi_norm",
    "embedding_margin", "embedding_probe", "equivalence_probe",
    "dilate", "fit_loglog", "FitResult", "homogeneity_experiment", "scale_commutation_check",
    "SeqSpaceParams", "SeqElement", "EntropyEstimate", "seq_norm", "embedding_map",
    "entropy_estimate", "entropy_curve", "entropy_rate_fit", "map_entropy_numbers",
    "entropy_calculus_check",
    "MultiplierSpec", "LambdaSweep", "mother_bump", "make_multiplier", "multiply",
    "derivative_bound_check", "multiplier_bound_experiment", "multiplier_sweep",
    "standard_corpus", "smooth_corpus",
    "FslabError", "UsageError", "DomainError", "ResolutionError", "ExperimentError",
    "ResourceError", "ResolutionWarning",
]
