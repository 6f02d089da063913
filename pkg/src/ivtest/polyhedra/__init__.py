"""Exact polyhedral machinery: LP membership, Farkas certificates,
vertex/facet conversion and sufficiency of test suites."""

from .dd import Polytope, UnboundedError, extreme_rays, facet_enum, vertex_enum
from .lp import LPOutcome, solve_nonneg
from .membership import (
    FeasibilityResult,
    SeparatingInequality,
    canonical_form,
    certificate_inequality,
    implied_by_test,
    in_convex_hull,
    lp_feasible,
)
from .sufficiency import (
    SufficiencyResult,
    compatible_polytope,
    facet_classes,
    reduced_facets,
    sufficiency_check,
    suite_polytope,
)

__all__ = [
    "FeasibilityResult",
    "LPOutcome",
    "Polytope",
    "SeparatingInequality",
    "SufficiencyResult",
    "UnboundedError",
    "canonical_form",
    "certificate_inequality",
    "compatible_polytope",
    "extreme_rays",
    "facet_classes",
    "facet_enum",
    "implied_by_test",
    "in_convex_hull",
    "lp_feasible",
    "reduced_facets",
    "solve_nonneg",
    "sufficiency_check",
    "suite_polytope",
    "vertex_enum",
]
