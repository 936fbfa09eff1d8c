"""Unavoidable flats in matroids represented over small prime fields."""

from .catalog import ag, build_catalog, direct_sum, free, pg, random_matroid, reid
from .certify import validate_certificate
from .errors import (FlatforgeError, HypothesisError, LemmaViolation, PreconditionError,
                     ScaleRefusal, UsageError)
from .flats import Flat, classify_flat, enumerate_flats, find_two_point_line, is_affine_restriction
from .io import emit_matroid, parse_matroid
from .kernels import backend_name
from .lemmas import (SearchParams, extend_affine_to_flat, kelly2_trichotomy, lift_affine,
                     restriction_trichotomy, unavoidable_search, verify_reid1, verify_reid2,
                     verify_reid_characteristic)
from .matroid import Matroid
from .ramsey import (Coloring, all_colorings_mono, enumerate_simple_binary, max_flatfree_set,
                     mono_flat_search, small_hj_report, small_ramsey_report, theorem_census)

__version__ = "0.1.0"

__all__ = [
    "Coloring", "Flat", "FlatforgeError", "HypothesisError", "LemmaViolation", "Matroid",
    "PreconditionError", "ScaleRefusal", "SearchParams", "UsageError", "ag", "all_colorings_mono",
    "backend_name", "build_catalog", "classify_flat", "direct_sum", "emit_matroid",
    "enumerate_flats", "enumerate_simple_binary", "extend_affine_to_flat", "find_two_point_line",
    "free", "is_affine_restriction", "kelly2_trichotomy", "lift_affine", "max_flatfree_set",
    "mono_flat_search", "parse_matroid", "pg", "random_matroid", "reid", "restriction_trichotomy",
    "small_hj_report", "small_ramsey_report", "theorem_census", "unavoidable_search",
    "validate_certificate", "verify_reid1", "verify_reid2", "verify_reid_characteristic",
]
