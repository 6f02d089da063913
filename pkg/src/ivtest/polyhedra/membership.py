"""Exact compatibility decision with re-verified witnesses and certificates."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Sequence

from ..core import CondDist, ConsistencyError, Dims, ShapeError, block, validate
from ..linear_tests import LinearTest
from ..response import (
    ResponseDist,
    _check_cap,
    distinct_columns,
    enumerate_pairs,
    pair_column,
)
from .lp import solve_nonneg

__all__ = [
    "FeasibilityResult",
    "SeparatingInequality",
    "certificate_inequality",
    "in_convex_hull",
    "implied_by_test",
    "lp_feasible",
]


@lru_cache(maxsize=32)
def _distinct(dims: Dims) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Distinct columns with the position of their first response pair."""
    return tuple((col, pair_position(dims, pair)) for col, pair in distinct_columns(dims))


@lru_cache(maxsize=32)
def _all_columns(dims: Dims) -> tuple[tuple[int, ...], ...]:
    return tuple(pair_column(dims, p) for p in enumerate_pairs(dims))


def pair_position(dims: Dims, pair) -> int:
    """Position of ``pair`` in :func:`enumerate_pairs` order."""
    gi = 0
    for x in pair.g:
        gi = gi * dims.n + (x - 1)
    hi = 0
    for y in pair.h:
        hi = hi * dims.m + (y - 1)
    return gi * dims.m**dims.n + hi


@dataclass(frozen=True)
class FeasibilityResult:
    """Either a response distribution reproducing the input, or (pi0, pi)
    with pi0 + pi @ column <= 0 for every response column and
    pi0 + pi @ F > 0."""

    dims: Dims
    feasible: bool
    witness: ResponseDist | None = None
    certificate: tuple[Fraction, tuple[Fraction, ...]] | None = None
    pivots: int = 0

    def support(self) -> dict[int, Fraction]:
        return {} if self.witness is None else self.witness.support()


def lp_feasible(dist: CondDist, cap: int | None = None, rule: str = "bland") -> FeasibilityResult:
    """Decide exactly whether ``dist`` is compatible with the IV model.

    Solves sum(q) = 1, (response matrix) q = F, q >= 0 over the distinct
    response columns.  The returned witness or certificate has been
    re-checked by direct arithmetic.
    """
    dims = dist.dims
    problems = validate(dist)
    if problems:
        raise ShapeError(f"not a valid conditional distribution: {problems[0]}")
    _check_cap(dims, cap)
    cols = _distinct(dims)
    total = dims.dim_f
    lp_cols = [[(r, 1) for r in col] + [(total, 1)] for col, _ in cols]
    out = solve_nonneg(lp_cols, list(dist.values) + [1], rule=rule)
    if out.feasible:
        q = [Fraction(0)] * dims.n_pairs
        for j, w in out.x.items():
            q[cols[j][1]] += w
        result = FeasibilityResult(dims, True, witness=ResponseDist(dims, tuple(q)), pivots=out.pivots)
    else:
        y = out.y
        result = FeasibilityResult(dims, False, certificate=(y[total], tuple(y[:total])), pivots=out.pivots)
    verify(dist, result)
    return result


def verify(dist: CondDist, result: FeasibilityResult) -> None:
    """Raise ConsistencyError unless the result proves its verdict."""
    dims = dist.dims
    cols = _all_columns(dims)
    if result.feasible:
        support = result.witness.support()
        if any(v < 0 for v in support.values()) or sum(support.values()) != 1:
            raise ConsistencyError("witness is not a probability vector")
        f = [Fraction(0)] * dims.dim_f
        for pos, w in support.items():
            for r in cols[pos]:
                f[r] += w
        if tuple(f) != dist.values:
            raise ConsistencyError("witness does not reproduce the distribution")
        return
    pi0, pi = result.certificate
    scale = lcm(pi0.denominator, *(v.denominator for v in pi))
    ipi0 = int(pi0 * scale)
    ipi = [int(v * scale) for v in pi]
    for col in cols:
        s = ipi0
        for r in col:
            s += ipi[r]
        if s > 0:
            raise ConsistencyError("certificate is positive on a response column")
    if pi0 + sum((a * v for a, v in zip(pi, dist.values) if a), Fraction(0)) <= 0:
        raise ConsistencyError("certificate does not separate the distribution")


@dataclass(frozen=True)
class SeparatingInequality:
    """coeffs @ F <= bound, in primitive integer form with every z-block's
    smallest coefficient shifted to zero."""

    dims: Dims
    coeffs: tuple[int, ...]
    bound: int

    def value(self, dist: CondDist) -> Fraction:
        return sum((c * v for c, v in zip(self.coeffs, dist.values) if c), Fraction(0))

    def as_test(self, name: str = "certificate") -> LinearTest:
        if self.bound <= 0:
            raise ShapeError("bound is not positive; not expressible as a test")
        return LinearTest(self.dims, self.coeffs, self.bound, name)


def canonical_form(dims: Dims, coeffs: Sequence, bound) -> tuple[tuple[int, ...], int]:
    """Normalize c @ F <= b modulo the z-block sums and positive scaling.

    Each block is shifted so its minimum coefficient is zero (using
    sum of the block = 1), then everything is scaled to coprime integers.
    """
    c = [Fraction(v) for v in coeffs]
    b = Fraction(bound)
    for k in range(1, dims.l + 1):
        offs = block(dims, k)
        s = min(c[o] for o in offs)
        if s:
            for o in offs:
                c[o] -= s
            b -= s
    den = lcm(*(v.denominator for v in c), b.denominator)
    ints = [int(v * den) for v in c]
    ib = int(b * den)
    g = gcd(*ints, ib)
    if g > 1:
        ints = [v // g for v in ints]
        ib //= g
    return tuple(ints), ib


def certificate_inequality(
    certificate: tuple, dims: Dims, dist: CondDist | None = None
) -> SeparatingInequality:
    """Turn a Farkas certificate into the valid inequality it encodes.

    pi0 + pi @ F <= 0 holds on every compatible F; the result is that
    inequality in canonical form.  It is re-checked on every response
    column and, if ``dist`` is given, must be violated by it.
    """
    pi0, pi = certificate
    pi = [Fraction(v) for v in pi]
    if len(pi) != dims.dim_f:
        raise ShapeError(f"certificate has {len(pi)} coefficients, want {dims.dim_f}")
    coeffs, bound = canonical_form(dims, pi, -Fraction(pi0))
    if not any(coeffs):
        raise ConsistencyError("certificate reduces to a trivial inequality")
    ineq = SeparatingInequality(dims, coeffs, bound)
    for col, _ in _distinct(dims):
        if sum(coeffs[r] for r in col) > bound:
            raise ConsistencyError("certificate inequality fails on a response column")
    if dist is not None and ineq.value(dist) <= bound:
        raise ConsistencyError("certificate inequality does not separate the distribution")
    return ineq


def implied_by_test(ineq: SeparatingInequality, test: LinearTest) -> bool:
    """Does test (plus F being a distribution) imply ``ineq``?

    By duality this holds iff some lam >= 0 gives
    lam * alpha + sum_k max_{block k} (c - lam * tau) <= bound; the
    left side is convex piecewise linear in lam, so checking 0 and every
    breakpoint suffices.
    """
    dims = ineq.dims
    if test.dims != dims:
        raise ShapeError("dimension mismatch")
    blocks = [block(dims, k) for k in range(1, dims.l + 1)]

    def f(lam: Fraction) -> Fraction:
        return lam * test.alpha + sum(max(ineq.coeffs[o] - lam * test.tau[o] for o in b) for b in blocks)

    candidates = {Fraction(0)}
    for b in blocks:
        for o in b:
            for p in b:
                dt = test.tau[o] - test.tau[p]
                if dt > 0:
                    lam = Fraction(ineq.coeffs[o] - ineq.coeffs[p], dt)
                    if lam > 0:
                        candidates.add(lam)
    top = max(candidates)
    candidates.add(top + 1)
    return min(f(lam) for lam in candidates) <= ineq.bound


def in_convex_hull(point: Sequence, generators: Sequence[Sequence]) -> bool:
    """Exact test of point in conv(generators)."""
    point = [Fraction(v) for v in point]
    d = len(point)
    cols = [[(r, v) for r, v in enumerate(g) if v] + [(d, 1)] for g in generators]
    return solve_nonneg(cols, point + [1]).feasible
