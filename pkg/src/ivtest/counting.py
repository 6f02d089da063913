"""Closed-form counts of extreme points and their ratio.

Everything is integer or Fraction valued; counts grow far past 64 bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable

from .core import CapacityError, ConsistencyError, Dims

__all__ = [
    "ExtremeCounts",
    "count_extreme_ambient",
    "count_extreme_compatible",
    "count_maps_with_image_size",
    "extreme_counts",
    "finite_difference",
    "finite_difference_recursive",
    "trend_report",
    "vertex_ratio",
]


def finite_difference(k: int, l: int) -> int:
    """(Delta^k x^l)(0) = sum_j C(k, j) (-1)^(k-j) j^l.

    Cross-checked against the recursive definition of the forward
    difference operator.
    """
    if k < 0 or l < 0:
        raise ValueError("k and l must be non-negative")
    value = sum(comb(k, j) * (-1) ** (k - j) * j**l for j in range(k + 1))
    if value != finite_difference_recursive(k, l):
        raise ConsistencyError(f"difference forms disagree at k={k}, l={l}")
    return value


def finite_difference_recursive(k: int, l: int, x: int = 0) -> int:
    """(Delta^k f)(x) for f(t) = t^l, by repeated forward differencing.

    Applies Delta g(t) = g(t+1) - g(t) k times to the table f(x..x+k).
    """
    table = [(x + t) ** l for t in range(k + 1)]
    for _ in range(k):
        table = [b - a for a, b in zip(table, table[1:])]
    return table[0]


def count_maps_with_image_size(n: int, l: int, k: int) -> int:
    """Number of maps from an l-set to an n-set whose image has exactly k elements.

    Zero when k > n or k > l (and for k = 0 unless l = 0).
    """
    if n < 0 or l < 0 or k < 0:
        raise ValueError("n, l and k must be non-negative")
    return comb(n, k) * finite_difference(k, l)


def _alternating_form(d: Dims) -> int:
    total = 0
    for k in range(1, d.n + 1):
        inner = sum(comb(k, j) * (-1) ** j * j**d.l for j in range(k + 1))
        total += comb(d.n, k) * (-1) ** k * d.m**k * inner
    return total


def _difference_form(d: Dims) -> int:
    return sum(comb(d.n, k) * d.m**k * finite_difference(k, d.l) for k in range(1, min(d.n, d.l) + 1))


def _image_size_form(d: Dims) -> int:
    return sum(d.m**k * count_maps_with_image_size(d.n, d.l, k) for k in range(1, d.n + 1))


def count_extreme_compatible(dims: Dims) -> int:
    """Number of vertices of the compatible set (distinct response columns)."""
    forms = (_alternating_form(dims), _difference_form(dims), _image_size_form(dims))
    if len(set(forms)) != 1:
        raise ConsistencyError(f"vertex-count forms disagree for {dims}: {forms}")
    return forms[0]


def count_extreme_ambient(dims: Dims) -> int:
    """Vertices of the product of l simplices with n*m corners each."""
    return (dims.n * dims.m) ** dims.l


def vertex_ratio(dims: Dims) -> Fraction:
    return Fraction(count_extreme_compatible(dims), count_extreme_ambient(dims))


@dataclass(frozen=True)
class ExtremeCounts:
    dims: Dims
    ext_b: int
    ext_f: int
    ratio: Fraction


def extreme_counts(dims: Dims) -> ExtremeCounts:
    b, f = count_extreme_compatible(dims), count_extreme_ambient(dims)
    return ExtremeCounts(dims, b, f, Fraction(b, f))


# Largest domain size trend_report will evaluate; the sums are cheap but
# the integers are not.
TREND_LIMIT = 500


@dataclass(frozen=True)
class TrendRow:
    value: int
    dims: Dims
    ratio: Fraction


@dataclass(frozen=True)
class TrendReport:
    axis: str
    rows: tuple[TrendRow, ...]
    strictly_increasing: bool
    strictly_decreasing: bool

    @property
    def expected(self) -> str:
        """Direction the large-domain limits predict along this axis."""
        if self.axis == "n":
            return "increasing"
        if self.axis == "l":
            return "decreasing"
        d = self.rows[0].dims
        return "decreasing" if d.n < d.l else "bounded"

    @property
    def consistent(self) -> bool:
        if self.expected == "increasing":
            return self.strictly_increasing
        if self.expected == "decreasing":
            return self.strictly_decreasing
        return all(0 < r.ratio <= 1 for r in self.rows)

    def csv(self) -> str:
        lines = ["value,l,m,n,ext_B,ext_F,R,R_approx"]
        for r in self.rows:
            lines.append(
                f"{r.value},{r.dims.l},{r.dims.m},{r.dims.n},"
                f"{count_extreme_compatible(r.dims)},{count_extreme_ambient(r.dims)},"
                f"{r.ratio},{float(r.ratio):.6g}"
            )
        return "\n".join(lines)


def trend_report(axis: str, fixed: dict[str, int], values: Iterable[int]) -> TrendReport:
    """Exact ratios along one axis with the other two sizes held fixed."""
    if axis not in ("l", "m", "n"):
        raise ValueError(f"axis must be one of l, m, n; got {axis!r}")
    values = list(values)
    if not values:
        raise ValueError("empty range")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError("range must be strictly increasing")
    if max(values) > TREND_LIMIT:
        raise CapacityError(f"axis value {max(values)} above the limit {TREND_LIMIT}")
    rows = []
    for v in values:
        d = Dims(**{**fixed, axis: v})
        rows.append(TrendRow(v, d, vertex_ratio(d)))
    ratios = [r.ratio for r in rows]
    inc = all(b > a for a, b in zip(ratios, ratios[1:]))
    dec = all(b < a for a, b in zip(ratios, ratios[1:]))
    return TrendReport(axis, tuple(rows), inc, dec)
