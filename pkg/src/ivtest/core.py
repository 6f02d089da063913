"""Exact scalars, domain sizes and conditional-distribution vectors.

A conditional distribution P(x, y | z) over finite domains of sizes
``n`` (X), ``m`` (Y) and ``l`` (Z) is stored as a flat vector of
:class:`fractions.Fraction` of length ``m * n * l``.  Coordinates are
ordered x-major, then z, then y::

    P(x1,y1|z1), ..., P(x1,ym|z1), P(x1,y1|z2), ..., P(xn,ym|zl)
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

__all__ = [
    "CapacityError",
    "CondDist",
    "ConsistencyError",
    "Dims",
    "ShapeError",
    "DEFAULT_CAP",
    "as_fraction",
    "dist_from_json",
    "dist_to_json",
    "index",
    "load_dists",
    "unindex",
    "validate",
]

# Upper bound on the number of response pairs n**l * m**n any operation
# will materialize.
DEFAULT_CAP = 10**6


class ShapeError(ValueError):
    """Input has the wrong length, wrong dimensions, or is malformed."""


class CapacityError(ValueError):
    """A requested construction exceeds the configured size cap."""


class ConsistencyError(RuntimeError):
    """An internal invariant failed (a bug, or a false mathematical claim)."""


def as_fraction(value) -> Fraction:
    """Convert ``value`` to an exact Fraction.

    Strings may be integers, decimals ("0.25") or ratios ("1/4").  Floats
    are rejected because their binary expansion is almost never what was
    meant.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ShapeError(f"not a number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ShapeError(f"cannot parse {value!r} as a rational") from exc
    if isinstance(value, float):
        raise ShapeError(f"float {value!r} is ambiguous; pass a string")
    raise ShapeError(f"not a number: {value!r}")


@dataclass(frozen=True, order=True)
class Dims:
    """Domain sizes: ``l`` values of Z, ``m`` of Y, ``n`` of X."""

    l: int
    m: int
    n: int

    def __post_init__(self):
        for name in ("l", "m", "n"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise ShapeError(f"{name} must be a positive integer, got {v!r}")

    @property
    def dim_f(self) -> int:
        return self.m * self.n * self.l

    @property
    def dim_t(self) -> int:
        return self.n * self.l**self.m

    @property
    def n_pairs(self) -> int:
        return self.n**self.l * self.m**self.n

    def fits(self, other: "Dims") -> bool:
        """True if every domain of ``self`` is no larger than in ``other``."""
        return self.l <= other.l and self.m <= other.m and self.n <= other.n

    def coords(self) -> Iterator[tuple[int, int, int]]:
        """Yield (i, j, k) labels, 1-based, in coordinate order."""
        for i in range(1, self.n + 1):
            for k in range(1, self.l + 1):
                for j in range(1, self.m + 1):
                    yield i, j, k

    def __str__(self):
        return f"(l={self.l}, m={self.m}, n={self.n})"


def index(dims: Dims, i: int, j: int, k: int) -> int:
    """0-based offset of P(x_i, y_j | z_k); all labels 1-based."""
    if not (1 <= i <= dims.n and 1 <= j <= dims.m and 1 <= k <= dims.l):
        raise IndexError(f"label (i={i}, j={j}, k={k}) out of range for {dims}")
    return (i - 1) * dims.l * dims.m + (k - 1) * dims.m + (j - 1)


def unindex(dims: Dims, offset: int) -> tuple[int, int, int]:
    """Inverse of :func:`index`: offset -> (i, j, k)."""
    if not 0 <= offset < dims.dim_f:
        raise IndexError(f"offset {offset} out of range for {dims}")
    i, rest = divmod(offset, dims.l * dims.m)
    k, j = divmod(rest, dims.m)
    return i + 1, j + 1, k + 1


def block(dims: Dims, k: int) -> list[int]:
    """Offsets of the z_k block (all (x, y) pairs for one value of Z)."""
    return [index(dims, i, j, k) for i in range(1, dims.n + 1) for j in range(1, dims.m + 1)]


@dataclass(frozen=True)
class CondDist:
    """The vector of conditionals P(x, y | z), exact."""

    dims: Dims
    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(as_fraction(v) for v in self.values)
        if len(vals) != self.dims.dim_f:
            raise ShapeError(
                f"expected {self.dims.dim_f} values for {self.dims}, got {len(vals)}"
            )
        object.__setattr__(self, "values", vals)

    def __getitem__(self, ijk: tuple[int, int, int]) -> Fraction:
        return self.values[index(self.dims, *ijk)]

    def __len__(self):
        return len(self.values)

    @classmethod
    def from_nested(cls, dims: Dims, p) -> "CondDist":
        """Build from ``p[k][i][j]`` (0-based nesting, as in the JSON format)."""
        if len(p) != dims.l or any(len(pk) != dims.n for pk in p):
            raise ShapeError(f"nested table does not match {dims}")
        values = [Fraction(0)] * dims.dim_f
        for k, pk in enumerate(p, 1):
            for i, row in enumerate(pk, 1):
                if len(row) != dims.m:
                    raise ShapeError(f"row p[{k - 1}][{i - 1}] has length {len(row)}, want {dims.m}")
                for j, v in enumerate(row, 1):
                    values[index(dims, i, j, k)] = as_fraction(v)
        return cls(dims, tuple(values))

    def nested(self) -> list[list[list[Fraction]]]:
        d = self.dims
        return [
            [[self[i, j, k] for j in range(1, d.m + 1)] for i in range(1, d.n + 1)]
            for k in range(1, d.l + 1)
        ]

    def mix(self, other: "CondDist", weight) -> "CondDist":
        """Return ``weight * self + (1 - weight) * other``."""
        if other.dims != self.dims:
            raise ShapeError("cannot mix distributions of different dims")
        w = as_fraction(weight)
        return CondDist(self.dims, tuple(w * a + (1 - w) * b for a, b in zip(self.values, other.values)))


def validate(dist: CondDist) -> list[str]:
    """Return constraint violations of ``dist``, first violation first.

    An empty list means every entry lies in [0, 1] and every z-block sums
    to exactly one.
    """
    d = dist.dims
    problems = []
    for off, v in enumerate(dist.values):
        if v < 0 or v > 1:
            i, j, k = unindex(d, off)
            problems.append(f"P(x{i},y{j}|z{k}) = {v} is outside [0, 1]")
    for k in range(1, d.l + 1):
        s = sum(dist.values[o] for o in block(d, k))
        if s != 1:
            problems.append(f"z-block k={k} sums to {s}, not 1")
    return problems


def _fmt(v: Fraction) -> str:
    return str(v)


def dist_to_json(dist: CondDist) -> dict:
    d = dist.dims
    return {
        "l": d.l,
        "m": d.m,
        "n": d.n,
        "p": [[[_fmt(v) for v in row] for row in pk] for pk in dist.nested()],
    }


def dist_from_json(obj) -> CondDist:
    try:
        dims = Dims(int(obj["l"]), int(obj["m"]), int(obj["n"]))
        p = obj["p"]
    except (KeyError, TypeError) as exc:
        raise ShapeError(f"distribution object needs keys l, m, n, p: {exc}") from exc
    return CondDist.from_nested(dims, p)


def load_dists(text: str) -> list[CondDist]:
    """Parse one distribution object or a JSON array of them.

    Numbers are read exactly: JSON floats go through Fraction, never float.
    """
    try:
        obj = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise ShapeError(f"malformed JSON: {exc}") from exc
    if isinstance(obj, list):
        return [dist_from_json(o) for o in obj]
    return [dist_from_json(obj)]


def dot(coeffs: Sequence, values: Sequence) -> Fraction:
    return sum((c * v for c, v in zip(coeffs, values) if c), Fraction(0))


def product(it: Iterable[int]) -> int:
    out = 1
    for v in it:
        out *= v
    return out
