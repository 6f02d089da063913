"""Facets of the compatible set and exact sufficiency of test suites."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from ..core import CondDist, Dims, block
from ..linear_tests import LinearTest, variations
from ..response import distinct_columns
from .dd import Polytope, facet_enum, vertex_enum
from .linalg import rank
from .membership import canonical_form, lp_feasible

__all__ = [
    "SufficiencyResult",
    "compatible_polytope",
    "facet_classes",
    "reduced_facets",
    "sufficiency_check",
    "suite_polytope",
]


def _block_equalities(dims: Dims):
    eqs = []
    for k in range(1, dims.l + 1):
        c = [Fraction(0)] * dims.dim_f
        for o in block(dims, k):
            c[o] = Fraction(1)
        eqs.append((tuple(c), Fraction(1)))
    return eqs


def _nonneg(dims: Dims):
    out = []
    for o in range(dims.dim_f):
        c = [Fraction(0)] * dims.dim_f
        c[o] = Fraction(-1)
        out.append((tuple(c), Fraction(0)))
    return out


def suite_polytope(dims: Dims, tests: Sequence[LinearTest]) -> Polytope:
    """H-representation of {F valid : F passes every test}."""
    ineqs = _nonneg(dims) + [(tuple(Fraction(t) for t in x.tau), Fraction(x.alpha)) for x in tests]
    return Polytope(dims.dim_f, equalities=_block_equalities(dims), inequalities=ineqs)


@lru_cache(maxsize=16)
def compatible_polytope(dims: Dims) -> Polytope:
    """Facet description of the compatible set from its vertices."""
    verts = [tuple(Fraction(int(o in set(col))) for o in range(dims.dim_f)) for col, _ in distinct_columns(dims)]
    return facet_enum(verts)


def _hull_is_blocks(dims: Dims, poly: Polytope) -> bool:
    return len(poly.equalities) == dims.l and rank(
        [list(c) + [b] for c, b in poly.equalities] + [list(c) + [b] for c, b in _block_equalities(dims)]
    ) == dims.l


def reduced_facets(dims: Dims) -> list[tuple[tuple[int, ...], int]]:
    """Facets of the compatible set in canonical form, minus non-negativity.

    Canonical form shifts each z-block to minimum coefficient zero, which
    is unique once the affine hull is cut out by the block sums alone.
    """
    poly = compatible_polytope(dims)
    if not _hull_is_blocks(dims, poly):
        raise ValueError(f"compatible set for {dims} is not full-dimensional in the simplex product")
    nonneg = {canonical_form(dims, c, b) for c, b in _nonneg(dims)}
    out = []
    for c, b in poly.inequalities:
        cf = canonical_form(dims, c, b)
        if cf not in nonneg:
            out.append(cf)
    return sorted(set(out))


def facet_classes(dims: Dims) -> list[list[tuple[tuple[int, ...], int]]]:
    """Reduced facets grouped into orbits under relabeling of values."""
    remaining = set(reduced_facets(dims))
    classes = []
    for f in sorted(remaining):
        if f not in remaining:
            continue
        tau, alpha = f
        orbit = {(v.tau, v.alpha) for v in variations(LinearTest(dims, tau, alpha))}
        classes.append(sorted(orbit))
        remaining -= orbit
    return classes


@dataclass(frozen=True)
class SufficiencyResult:
    """``equal`` when the suite carves out exactly the compatible set.

    Otherwise ``counterexample`` is a vertex of the suite polytope outside
    the compatible set (``kind == "insufficient"``), or a compatible vertex
    that fails the suite (``kind == "not-necessary"``).
    """

    dims: Dims
    equal: bool
    kind: str
    counterexample: CondDist | None
    suite_vertices: int
    compatible_vertices: int


def sufficiency_check(dims: Dims, suite: Sequence[LinearTest]) -> SufficiencyResult:
    """Compare {F valid : suite passes} with the compatible set, exactly."""
    compat = [col for col, _ in distinct_columns(dims)]
    compat_pts = {tuple(Fraction(int(o in set(c))) for o in range(dims.dim_f)) for c in compat}
    poly = suite_polytope(dims, suite)
    for pt in sorted(compat_pts):
        if not poly.contains(pt):
            return SufficiencyResult(dims, False, "not-necessary", CondDist(dims, pt), -1, len(compat_pts))
    verts = vertex_enum(poly)
    for v in verts:
        if v not in compat_pts:
            cex = CondDist(dims, v)
            if lp_feasible(cex).feasible:
                # a vertex of the larger set lying in the smaller set must be
                # one of its vertices
                raise AssertionError("suite vertex inside the compatible set but not a vertex of it")
            return SufficiencyResult(dims, False, "insufficient", cex, len(verts), len(compat_pts))
    return SufficiencyResult(dims, True, "equal", None, len(verts), len(compat_pts))
