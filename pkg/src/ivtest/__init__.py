"""Exact tests for instrumental variables with finite discrete domains."""

from .core import (
    CapacityError,
    CondDist,
    ConsistencyError,
    Dims,
    ShapeError,
    index,
    validate,
)
from .counting import (
    count_extreme_ambient,
    count_extreme_compatible,
    count_maps_with_image_size,
    finite_difference,
    trend_report,
    vertex_ratio,
)
from .kernels import BACKEND
from .linear_tests import (
    LinearTest,
    evaluate,
    extend,
    five_term_test,
    nontrivial,
    pearl_statistic,
    pearl_suite,
    variations,
)
from .polyhedra import (
    certificate_inequality,
    facet_enum,
    lp_feasible,
    sufficiency_check,
    vertex_enum,
)
from .response import (
    ResponseDist,
    ResponsePair,
    composite_matrix,
    distinct_columns,
    enumerate_pairs,
    pearl_matrix,
    response_matrix,
    sample_compatible,
)

__version__ = "0.1.0"
