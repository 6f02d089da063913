"""Response functions and the 0/1 matrices built from them.

The latent variable selects a pair of deterministic maps ``g: Z -> X`` and
``h: X -> Y``.  Three matrices are built here:

* ``response_matrix``  rows are coordinates (x, y, z), columns are pairs
  (g, h); entry 1 iff g(z) = x and h(x) = y.  A distribution is
  compatible with the model iff it is a convex combination of columns.
* ``pearl_matrix``     one row per instrumental inequality, columns are
  coordinates.
* ``composite_matrix`` the product of the two.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import (
    DEFAULT_CAP,
    CapacityError,
    CondDist,
    ConsistencyError,
    Dims,
    ShapeError,
    index,
    unindex,
)

__all__ = [
    "BinaryMatrix",
    "ResponseDist",
    "ResponsePair",
    "composite_matrix",
    "distinct_columns",
    "duplicate_key",
    "enumerate_pairs",
    "pair_column",
    "pearl_matrix",
    "random_cond_dist",
    "random_simplex_point",
    "response_matrix",
    "sample_compatible",
    "sample_response_dist",
    "vertex_dist",
]


@dataclass(frozen=True, order=True)
class ResponsePair:
    """``g[k-1]`` is the X-value chosen at z_k; ``h[i-1]`` the Y-value at x_i."""

    g: tuple[int, ...]
    h: tuple[int, ...]

    def column(self, dims: Dims) -> tuple[int, ...]:
        return pair_column(dims, self)

    def __str__(self):
        return f"g={list(self.g)} h={list(self.h)}"


def _check_cap(dims: Dims, cap: int | None):
    cap = DEFAULT_CAP if cap is None else cap
    if dims.n_pairs > cap:
        raise CapacityError(
            f"{dims} has {dims.n_pairs} response pairs, above the cap of {cap}"
        )


def enumerate_pairs(dims: Dims, cap: int | None = None) -> list[ResponsePair]:
    """All n**l * m**n pairs, ordered lexicographically by (g, h)."""
    _check_cap(dims, cap)
    gs = itertools.product(range(1, dims.n + 1), repeat=dims.l)
    hs = list(itertools.product(range(1, dims.m + 1), repeat=dims.n))
    return [ResponsePair(g, h) for g in gs for h in hs]


def pair_column(dims: Dims, pair: ResponsePair) -> tuple[int, ...]:
    """Row positions of the ones in the pair's column, one per z value."""
    return tuple(index(dims, x, pair.h[x - 1], k) for k, x in enumerate(pair.g, 1))


def duplicate_key(pair: ResponsePair) -> tuple:
    """Two pairs share a column iff they share this key.

    The column only depends on g and on h restricted to the image of g.
    """
    image = sorted(set(pair.g))
    return pair.g, tuple(pair.h[x - 1] for x in image)


@dataclass(frozen=True)
class BinaryMatrix:
    """A 0/1 matrix stored sparsely by column.

    ``cols[c]`` is the sorted tuple of row positions holding a one.
    """

    n_rows: int
    cols: tuple[tuple[int, ...], ...]
    row_labels: tuple = ()
    col_labels: tuple = ()

    @property
    def n_cols(self) -> int:
        return len(self.cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_rows, self.n_cols

    def rows(self) -> list[tuple[int, ...]]:
        out: list[list[int]] = [[] for _ in range(self.n_rows)]
        for c, col in enumerate(self.cols):
            for r in col:
                out[r].append(c)
        return [tuple(r) for r in out]

    def dense(self) -> list[list[int]]:
        grid = [[0] * self.n_cols for _ in range(self.n_rows)]
        for c, col in enumerate(self.cols):
            for r in col:
                grid[r][c] = 1
        return grid

    def column_vector(self, c: int) -> tuple[int, ...]:
        v = [0] * self.n_rows
        for r in self.cols[c]:
            v[r] = 1
        return tuple(v)

    def format(self) -> str:
        """Plain-text grid with row and column labels (debug export)."""
        rl = [str(x) for x in self.row_labels] or [str(r) for r in range(self.n_rows)]
        cl = [str(x) for x in self.col_labels] or [str(c) for c in range(self.n_cols)]
        width = max(len(s) for s in rl) if rl else 0
        lines = ["# columns:"]
        lines += [f"#  {c:>4d}  {lab}" for c, lab in enumerate(cl)]
        for r, row in enumerate(self.dense()):
            lines.append(f"{rl[r]:<{width}}  " + " ".join(str(v) for v in row))
        return "\n".join(lines)


def _coord_labels(dims: Dims) -> tuple[str, ...]:
    return tuple(f"P(x{i},y{j}|z{k})" for i, j, k in (unindex(dims, o) for o in range(dims.dim_f)))


def response_matrix(dims: Dims, cap: int | None = None) -> BinaryMatrix:
    """Coordinates by response pairs; every column has exactly l ones."""
    pairs = enumerate_pairs(dims, cap)
    cols = tuple(tuple(sorted(pair_column(dims, p))) for p in pairs)
    return BinaryMatrix(dims.dim_f, cols, _coord_labels(dims), tuple(pairs))


def pearl_assignments(dims: Dims, cap: int | None = None) -> list[tuple[int, tuple[int, ...]]]:
    """(i, (k_1..k_m)) for every instrumental inequality, in row order."""
    cap = DEFAULT_CAP if cap is None else cap
    if dims.dim_t > cap:
        raise CapacityError(f"{dims} has {dims.dim_t} instrumental inequalities, above the cap of {cap}")
    ks = list(itertools.product(range(1, dims.l + 1), repeat=dims.m))
    return [(i, kk) for i in range(1, dims.n + 1) for kk in ks]


def pearl_matrix(dims: Dims, cap: int | None = None) -> BinaryMatrix:
    """One row per (x_i, choice of z for each y); rows ordered as the
    usual listing (x major, then the z chosen for y_1, y_2, ...)."""
    assignments = pearl_assignments(dims, cap)
    rows = [tuple(index(dims, i, j, k) for j, k in enumerate(kk, 1)) for i, kk in assignments]
    cols: list[list[int]] = [[] for _ in range(dims.dim_f)]
    for r, row in enumerate(rows):
        for c in row:
            cols[c].append(r)
    labels = tuple(
        " + ".join(f"P(x{i},y{j}|z{k})" for j, k in enumerate(kk, 1)) for i, kk in assignments
    )
    return BinaryMatrix(len(rows), tuple(tuple(c) for c in cols), labels, _coord_labels(dims))


def composite_matrix(dims: Dims, cap: int | None = None) -> BinaryMatrix:
    """Product of the instrumental-inequality matrix and the response matrix.

    Each term of an inequality is reached by disjoint sets of response
    pairs, so the product must be 0/1; anything else is reported as a
    :class:`ConsistencyError`.
    """
    a1 = pearl_matrix(dims, cap)
    a2 = response_matrix(dims, cap)
    row_sets = [set(r) for r in a1.rows()]
    cols = []
    for col in a2.cols:
        hits = []
        for r, rs in enumerate(row_sets):
            c = sum(1 for x in col if x in rs)
            if c > 1:
                raise ConsistencyError(f"product entry {c} > 1 at row {r}")
            if c:
                hits.append(r)
        cols.append(tuple(hits))
    return BinaryMatrix(a1.n_rows, tuple(cols), a1.row_labels, a2.col_labels)


def distinct_columns(dims: Dims, cap: int | None = None) -> list[tuple[tuple[int, ...], ResponsePair]]:
    """Distinct columns of the response matrix with their first pair.

    These are the vertices of the compatible set.  The grouping from raw
    column equality is checked against :func:`duplicate_key`.
    """
    a2 = response_matrix(dims, cap)
    seen: dict[tuple[int, ...], ResponsePair] = {}
    key_of: dict[tuple[int, ...], tuple] = {}
    for col, pair in zip(a2.cols, a2.col_labels):
        key = duplicate_key(pair)
        if col in seen:
            if key_of[col] != key:
                raise ConsistencyError(f"{pair} equals {seen[col]} but has a different key")
        else:
            seen[col] = pair
            key_of[col] = key
    if len(set(key_of.values())) != len(seen):
        raise ConsistencyError("duplicate keys for different columns")
    return list(seen.items())


def vertex_dist(dims: Dims, col: Sequence[int]) -> CondDist:
    ones = set(col)
    return CondDist(dims, tuple(Fraction(int(o in ones)) for o in range(dims.dim_f)))


@dataclass(frozen=True)
class ResponseDist:
    """A distribution over response pairs, in :func:`enumerate_pairs` order."""

    dims: Dims
    q: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.q) != self.dims.n_pairs:
            raise ShapeError(f"expected {self.dims.n_pairs} weights, got {len(self.q)}")
        support = [v for v in self.q if v]
        if any(v < 0 for v in support):
            raise ShapeError("response weights must be non-negative")
        total = sum(support, Fraction(0))
        if total != 1:
            raise ShapeError(f"response weights sum to {total}, not 1")

    def support(self) -> dict[int, Fraction]:
        return {i: v for i, v in enumerate(self.q) if v}

    @classmethod
    def point_mass(cls, dims: Dims, pos: int) -> "ResponseDist":
        q = [Fraction(0)] * dims.n_pairs
        q[pos] = Fraction(1)
        return cls(dims, tuple(q))

    @classmethod
    def uniform(cls, dims: Dims) -> "ResponseDist":
        w = Fraction(1, dims.n_pairs)
        return cls(dims, (w,) * dims.n_pairs)


def sample_compatible(q: ResponseDist, cap: int | None = None) -> CondDist:
    """Push a response distribution through the response matrix."""
    dims = q.dims
    values = [Fraction(0)] * dims.dim_f
    for pair, w in zip(enumerate_pairs(dims, cap), q.q):
        if w:
            for r in pair_column(dims, pair):
                values[r] += w
    return CondDist(dims, tuple(values))


# Resolution of the grid used for exact simplex sampling.
SIMPLEX_GRID = 2**32


def random_simplex_point(rng: random.Random, size: int, grid: int = SIMPLEX_GRID) -> list[Fraction]:
    """Exact, (nearly) uniform point of the probability simplex.

    Uses the spacings of sorted uniform integers on ``[0, grid]``, which is
    the discrete counterpart of normalizing i.i.d. exponentials and keeps
    every draw integer-only and platform independent.
    """
    cuts = sorted(rng.randrange(grid + 1) for _ in range(size - 1))
    edges = [0, *cuts, grid]
    return [Fraction(b - a, grid) for a, b in zip(edges, edges[1:])]


def sample_response_dist(dims: Dims, rng: random.Random, cap: int | None = None) -> ResponseDist:
    _check_cap(dims, cap)
    return ResponseDist(dims, tuple(random_simplex_point(rng, dims.n_pairs)))


def random_cond_dist(dims: Dims, rng: random.Random) -> CondDist:
    """A valid but arbitrary distribution: each z-block uniform on its simplex."""
    values = [Fraction(0)] * dims.dim_f
    for k in range(1, dims.l + 1):
        pts = random_simplex_point(rng, dims.n * dims.m)
        offs = [index(dims, i, j, k) for i in range(1, dims.n + 1) for j in range(1, dims.m + 1)]
        for o, v in zip(offs, pts):
            values[o] = v
    return CondDist(dims, tuple(values))
