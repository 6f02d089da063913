"""Double description: vertices <-> facets of bounded polyhedra, exactly.

Both directions reduce to one routine, :func:`extreme_rays`, which lists
the extreme rays of a pointed cone {u : A u >= 0}.  Constraints are added
one at a time in the given order; adjacency is decided combinatorially
from the sets of tight constraints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .. import kernels
from ..core import CapacityError, ConsistencyError, ShapeError
from .linalg import integerize, nullspace, rank, rref

__all__ = [
    "Constraint",
    "Polytope",
    "UnboundedError",
    "extreme_rays",
    "facet_enum",
    "vertex_enum",
]

# Abort a conversion once the intermediate ray list grows past this.
RAY_BUDGET = 200_000


class UnboundedError(ValueError):
    """The H-representation does not describe a bounded set."""


Constraint = tuple[tuple[Fraction, ...], Fraction]


def _int_row(row) -> list[int]:
    fr = [Fraction(v) for v in row]
    den = lcm(*(v.denominator for v in fr)) if fr else 1
    return [int(v * den) for v in fr]


def extreme_rays(A: Sequence[Sequence], budget: int = RAY_BUDGET) -> list[list[int]]:
    """Extreme rays of {u : A u >= 0}, as primitive integer vectors.

    The cone must be pointed, i.e. A must have full column rank.
    """
    rows = []
    seen = set()
    for row in A:
        ir = tuple(_int_row(row))
        if any(ir) and ir not in seen:
            seen.add(ir)
            rows.append(list(ir))
    if not rows:
        raise ShapeError("no constraints")
    dim = len(rows[0])

    # Greedy independent starting set, in input order.
    start: list[int] = []
    for i in range(len(rows)):
        if rank([rows[s] for s in start] + [rows[i]]) > len(start):
            start.append(i)
            if len(start) == dim:
                break
    if len(start) < dim:
        raise UnboundedError(f"constraint matrix has rank {len(start)} < {dim}; cone not pointed")

    # Columns of the inverse of the starting block are its extreme rays.
    aug = [[Fraction(v) for v in rows[s]] + [Fraction(int(r == c)) for c in range(dim)]
           for r, s in enumerate(start)]
    R, _ = rref(aug)
    inv_cols = [[R[i][dim + c] for i in range(dim)] for c in range(dim)]
    rays = [integerize(v) for v in inv_cols]
    bits = [1 << s for s in start]
    full = sum(bits)
    zsets = [full & ~bits[c] for c in range(dim)]

    rest = [i for i in range(len(rows)) if i not in set(start)]
    for i in rest:
        rays, zsets = kernels.dd_add_row(rays, zsets, rows[i], 1 << i, dim)
        if len(rays) > budget:
            raise CapacityError(f"double description exceeded {budget} intermediate rays")
    return rays


@dataclass
class Polytope:
    """A bounded polyhedron in V- and/or H-representation.

    ``equalities`` hold (c, b) meaning c @ x == b; ``inequalities`` hold
    (c, b) meaning c @ x <= b.
    """

    dim: int
    vertices: list[tuple[Fraction, ...]] | None = None
    equalities: list[Constraint] = field(default_factory=list)
    inequalities: list[Constraint] = field(default_factory=list)

    def contains(self, x: Sequence) -> bool:
        return all(_dot(c, x) == b for c, b in self.equalities) and all(
            _dot(c, x) <= b for c, b in self.inequalities
        )

    def tight(self, x: Sequence) -> list[int]:
        return [t for t, (c, b) in enumerate(self.inequalities) if _dot(c, x) == b]


def _dot(c, x) -> Fraction:
    return sum((a * v for a, v in zip(c, x) if a), Fraction(0))


def _frac_vec(v) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)


def _parametrize(equalities: Sequence[Constraint], dim: int):
    """Affine parametrization of {x : E x = e} by its free coordinates.

    Returns (free, pivots, R) with R the rref of [E | e]; a point is
    recovered as x[p] = R[t][-1] - sum_f R[t][f] x[f].  Raises ShapeError
    if the equalities are inconsistent.
    """
    if not equalities:
        return list(range(dim)), [], []
    R, piv = rref([list(c) + [b] for c, b in equalities])
    if dim in piv:
        raise ShapeError("equalities are inconsistent")
    free = [c for c in range(dim) if c not in piv]
    return free, piv, R


def _lift(x_free, free, piv, R, dim) -> tuple[Fraction, ...]:
    x = [Fraction(0)] * dim
    for f, v in zip(free, x_free):
        x[f] = v
    for row, p in zip(R, piv):
        x[p] = row[dim] - sum(row[f] * x[f] for f in free)
    return tuple(x)


def affine_hull(points: Sequence[Sequence]) -> list[Constraint]:
    """Equalities (reduced row echelon form, integer, primitive) cutting out
    the affine hull of ``points``."""
    dim = len(points[0])
    ns = _nullspace_rows([list(p) + [-1] for p in points], dim + 1)
    eqs = []
    for v in ns:
        iv = integerize(v)
        eqs.append((tuple(Fraction(x) for x in iv[:dim]), Fraction(iv[dim])))
    return eqs


def _nullspace_rows(rows, n_cols):
    basis = nullspace(rows, n_cols)
    if not basis:
        return []
    R, _ = rref(basis)
    return R


def facet_enum(vertices: Sequence[Sequence], verify: bool = True, budget: int = RAY_BUDGET) -> Polytope:
    """H-representation of the convex hull of ``vertices``.

    The affine hull comes back as equalities; each facet is an inequality
    with zero coefficients on the pivot coordinates of those equalities.
    With ``verify`` every facet is checked to be supported by enough
    affinely independent vertices, and the H-rep is converted back to
    vertices which must be exactly the input's extreme points.
    """
    pts = sorted({_frac_vec(v) for v in vertices})
    if not pts:
        raise ShapeError("need at least one vertex")
    dim = len(pts[0])
    eqs = affine_hull(pts)
    free, piv, _ = _parametrize(eqs, dim)
    hull_dim = len(free)
    poly = Polytope(dim, equalities=eqs)
    if hull_dim == 0:
        poly.vertices = pts
        return poly

    cone_rows = [[1] + [p[f] for f in free] for p in pts]
    rays = extreme_rays(cone_rows, budget)
    for u in rays:
        coeffs = [Fraction(0)] * dim
        for f, a in zip(free, u[1:]):
            coeffs[f] = Fraction(-a)
        poly.inequalities.append((tuple(coeffs), Fraction(u[0])))
    poly.inequalities.sort()

    if verify:
        for c, b in poly.inequalities:
            on = [p for p in pts if _dot(c, p) == b]
            if any(_dot(c, p) > b for p in pts):
                raise ConsistencyError("facet violated by an input vertex")
            if rank([list(p) + [1] for p in on]) != hull_dim:
                raise ConsistencyError("inequality is not facet-defining")
        back = vertex_enum(poly)
        if not set(back) <= set(pts):
            raise ConsistencyError("H-representation has vertices outside the input")
    poly.vertices = [p for p in pts if _is_extreme(p, poly)] if verify else pts
    return poly


def _is_extreme(p, poly: Polytope) -> bool:
    tight = [list(c) for c, b in poly.inequalities if _dot(c, p) == b]
    eq = [list(c) for c, _ in poly.equalities]
    return rank(eq + tight) == poly.dim if (eq or tight) else poly.dim == 0


def vertex_enum(poly: Polytope, budget: int = RAY_BUDGET) -> list[tuple[Fraction, ...]]:
    """Vertices of the bounded set {x : E x = e, C x <= c}, sorted.

    Raises UnboundedError if the set is unbounded.  An empty set gives [].
    """
    dim = poly.dim
    try:
        free, piv, R = _parametrize(poly.equalities, dim)
    except ShapeError:
        return []
    if not free:
        x = _lift([], free, piv, R, dim)
        return [x] if poly.contains(x) else []

    # Substitute the pivots: c @ x <= b becomes a @ x_free <= b'.
    cone_rows = [[1] + [0] * len(free)]
    for c, b in poly.inequalities:
        a = [Fraction(c[f]) for f in free]
        bb = Fraction(b)
        for row, p in zip(R, piv):
            if c[p]:
                bb -= c[p] * row[dim]
                for t, f in enumerate(free):
                    a[t] -= c[p] * row[f]
        cone_rows.append([bb] + [-v for v in a])
    rays = extreme_rays(cone_rows, budget)
    out = []
    for u in rays:
        if u[0] <= 0:
            raise UnboundedError("polyhedron has a recession direction")
        x_free = [Fraction(v, u[0]) for v in u[1:]]
        out.append(_lift(x_free, free, piv, R, dim))
    return sorted(set(out))
