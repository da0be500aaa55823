"""Puiseux asymptotics and r-log-convexity certificates for P-recursive sequences."""

from .asymptotics import (Branch, RatioExpansion, dominant_branch, leading_balance,
                          ratio_expansion, ratio_to_s, validate_expansion)
from .certifier import (BoundPair, Certificate, CertifyConfig, CheckResult, certify,
                        check_certificate, make_bounds)
from .convexity import ConvexityReport, Direction, asymptotic_r, lemma_transform, s_tower
from .exact import Poly, RationalFunction, positivity_threshold, real_roots_in
from .puiseux import PuiseuxSeries, render
from .recurrence import (Recurrence, SequenceValues, evaluate_terms, first_r_log_convex_index,
                         load_recurrence_file, parse_recurrence, parse_recurrence_json)

__version__ = "0.1.0"

__all__ = [
    "Branch", "RatioExpansion", "dominant_branch", "leading_balance", "ratio_expansion",
    "ratio_to_s", "validate_expansion",
    "BoundPair", "Certificate", "CertifyConfig", "CheckResult", "certify", "check_certificate",
    "make_bounds",
    "ConvexityReport", "Direction", "asymptotic_r", "lemma_transform", "s_tower",
    "Poly", "RationalFunction", "positivity_threshold", "real_roots_in",
    "PuiseuxSeries", "render",
    "Recurrence", "SequenceValues", "evaluate_terms", "first_r_log_convex_index",
    "load_recurrence_file", "parse_recurrence", "parse_recurrence_json",
]
