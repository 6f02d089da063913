"""Instrumental inequality for a discrete treatment and continuous Z, Y.

The outcome line is cut into finitely many cells and Z is probed at a
finite set of values, giving a table ``p[cell][x][probe]`` of
P(Y in cell, X = x | Z = probe).  The statistic

    max_x  sum_cells  max_probes  p[cell][x][probe]

is at most 1 for every instrumental model.  Using finitely many probes
instead of the whole range of Z can only lower the statistic, so a value
above 1 is still a sound rejection; a value at or below 1 proves nothing.

Cells need not cover the whole line.  The mass a probe leaves outside the
listed cells forms a remainder cell whose contribution is bounded above by
the largest such leftover, and reports carry both figures.
"""

from __future__ import annotations

import json
import random
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import CondDist, ShapeError, as_fraction
from .response import random_simplex_point

__all__ = [
    "PartitionTable",
    "StatisticReport",
    "RefinementReport",
    "ThresholdModel",
    "partition_statistic",
    "refine_partition",
    "table_from_dist",
    "table_to_json",
    "table_from_json",
    "random_threshold_model",
    "random_table",
]


@dataclass(frozen=True)
class PartitionTable:
    x_count: int
    cells: tuple[str, ...]
    probes: tuple[str, ...]
    p: tuple[tuple[tuple[Fraction, ...], ...], ...]

    def __post_init__(self):
        if not self.cells or not self.probes:
            raise ShapeError("a table needs at least one cell and one probe")
        if self.x_count < 1:
            raise ShapeError("x_count must be positive")
        if len(self.p) != len(self.cells):
            raise ShapeError(f"{len(self.p)} cell rows for {len(self.cells)} cells")
        rows = []
        for c, row in enumerate(self.p):
            if len(row) != self.x_count:
                raise ShapeError(f"cell {c} has {len(row)} x rows, want {self.x_count}")
            new = []
            for x, vals in enumerate(row):
                if len(vals) != len(self.probes):
                    raise ShapeError(f"p[{c}][{x}] has {len(vals)} entries, want {len(self.probes)}")
                vals = tuple(as_fraction(v) for v in vals)
                if any(v < 0 or v > 1 for v in vals):
                    raise ShapeError(f"p[{c}][{x}] has an entry outside [0, 1]")
                new.append(vals)
            rows.append(tuple(new))
        object.__setattr__(self, "p", tuple(rows))
        object.__setattr__(self, "cells", tuple(self.cells))
        object.__setattr__(self, "probes", tuple(self.probes))
        for z in range(len(self.probes)):
            if self.accounted(z) > 1:
                raise ShapeError(f"probe {self.probes[z]!r} carries total mass {self.accounted(z)} > 1")

    def accounted(self, probe: int) -> Fraction:
        """Mass of ``probe`` that falls in the listed cells."""
        return sum((vals[probe] for row in self.p for vals in row), Fraction(0))

    def remainder(self, probe: int) -> Fraction:
        return 1 - self.accounted(probe)

    @property
    def complete(self) -> bool:
        return all(self.remainder(z) == 0 for z in range(len(self.probes)))


@dataclass(frozen=True)
class StatisticReport:
    value: Fraction
    with_remainder: Fraction
    per_x: tuple[Fraction, ...]
    argmax_x: int
    # argmax[cell][x]: index of the first probe attaining the cell maximum
    argmax: tuple[tuple[int, ...], ...]

    @property
    def rejects(self) -> bool:
        return self.value > 1

    def as_dict(self, table: PartitionTable) -> dict:
        return {
            "statistic": str(self.value),
            "statistic_with_remainder": str(self.with_remainder),
            "rejects": self.rejects,
            "argmax_x": self.argmax_x + 1,
            "per_x": [str(v) for v in self.per_x],
            "maximizing_probe": [
                [table.probes[z] for z in row] for row in self.argmax
            ],
        }


def partition_statistic(table: PartitionTable) -> StatisticReport:
    per_x = []
    argmax = []
    for row in table.p:
        argmax.append(tuple(max(range(len(vals)), key=lambda z, v=vals: (v[z], -z)) for vals in row))
    for x in range(table.x_count):
        per_x.append(sum((table.p[c][x][argmax[c][x]] for c in range(len(table.cells))), Fraction(0)))
    best = max(range(table.x_count), key=lambda x: (per_x[x], -x))
    slack = max(table.remainder(z) for z in range(len(table.probes)))
    return StatisticReport(per_x[best], per_x[best] + slack, tuple(per_x), best, tuple(argmax))


@dataclass(frozen=True)
class RefinementReport:
    coarse: StatisticReport
    fine: StatisticReport
    coarse_table: PartitionTable

    @property
    def monotone(self) -> bool:
        return self.coarse.value <= self.fine.value


def refine_partition(table: PartitionTable, mapping: Sequence[int], labels: Sequence[str] | None = None) -> RefinementReport:
    """Compare ``table`` with the coarser table obtained by merging cells.

    ``mapping[c]`` is the coarse cell (0-based) that fine cell ``c`` falls
    into; every coarse cell must receive at least one fine cell.
    """
    if len(mapping) != len(table.cells):
        raise ShapeError(f"mapping has {len(mapping)} entries for {len(table.cells)} cells")
    if any(not isinstance(t, int) or t < 0 for t in mapping):
        raise ShapeError("mapping entries must be non-negative integers")
    k = max(mapping) + 1
    if set(mapping) != set(range(k)):
        raise ShapeError("mapping leaves a coarse cell empty")
    if labels is None:
        labels = tuple("+".join(table.cells[c] for c in range(len(mapping)) if mapping[c] == t) for t in range(k))
    elif len(labels) != k:
        raise ShapeError(f"{len(labels)} labels for {k} coarse cells")
    nz = len(table.probes)
    p = [[[Fraction(0)] * nz for _ in range(table.x_count)] for _ in range(k)]
    for c, t in enumerate(mapping):
        for x in range(table.x_count):
            for z in range(nz):
                p[t][x][z] += table.p[c][x][z]
    coarse = PartitionTable(table.x_count, tuple(labels), table.probes, tuple(tuple(map(tuple, r)) for r in p))
    return RefinementReport(partition_statistic(coarse), partition_statistic(table), coarse)


def table_from_dist(dist: CondDist) -> PartitionTable:
    """Cells are the values of Y and probes the values of Z."""
    d = dist.dims
    p = tuple(
        tuple(tuple(dist[i, j, k] for k in range(1, d.l + 1)) for i in range(1, d.n + 1))
        for j in range(1, d.m + 1)
    )
    return PartitionTable(
        d.n, tuple(f"y{j}" for j in range(1, d.m + 1)), tuple(f"z{k}" for k in range(1, d.l + 1)), p
    )


def table_to_json(table: PartitionTable) -> dict:
    return {
        "x_count": table.x_count,
        "cells": list(table.cells),
        "probes": list(table.probes),
        "p": [[[str(v) for v in vals] for vals in row] for row in table.p],
    }


def table_from_json(text: str) -> PartitionTable:
    try:
        obj = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise ShapeError(f"malformed JSON: {exc}") from exc
    try:
        return PartitionTable(
            int(obj["x_count"]),
            tuple(str(c) for c in obj["cells"]),
            tuple(str(z) for z in obj["probes"]),
            tuple(tuple(tuple(vals) for vals in row) for row in obj["p"]),
        )
    except (KeyError, TypeError) as exc:
        raise ShapeError(f"table object needs keys x_count, cells, probes, p: {exc}") from exc


@dataclass(frozen=True)
class ThresholdModel:
    """An instrumental model with a finite latent variable.

    Latent atom u has probability ``weights[u]``.  Treatment is
    ``1 + #{t in thresholds[u] : t < z}`` (capped at ``x_count``) and the
    outcome is the real number ``outcomes[u][x - 1]``.  Z never enters the
    outcome except through X.
    """

    x_count: int
    weights: tuple[Fraction, ...]
    thresholds: tuple[tuple[Fraction, ...], ...]
    outcomes: tuple[tuple[Fraction, ...], ...]

    def treatment(self, u: int, z: Fraction) -> int:
        return min(self.x_count, 1 + sum(1 for t in self.thresholds[u] if t < z))

    def table(self, probes: Sequence, cuts: Sequence) -> PartitionTable:
        """Bin outcomes at sorted ``cuts``: cells (-inf, c0], (c0, c1], ..., (c_last, inf)."""
        probes = [as_fraction(z) for z in probes]
        cuts = sorted(as_fraction(c) for c in cuts)
        n_cells = len(cuts) + 1
        p = [[[Fraction(0)] * len(probes) for _ in range(self.x_count)] for _ in range(n_cells)]
        for u, w in enumerate(self.weights):
            for zi, z in enumerate(probes):
                x = self.treatment(u, z)
                y = self.outcomes[u][x - 1]
                p[bisect_left(cuts, y)][x - 1][zi] += w
        edges = ["-inf", *map(str, cuts), "inf"]
        labels = tuple(f"({a},{b}]" if b != "inf" else f"({a},inf)" for a, b in zip(edges, edges[1:]))
        return PartitionTable(self.x_count, labels, tuple(map(str, probes)), tuple(tuple(map(tuple, r)) for r in p))


def _unit_grid(rng: random.Random, size: int, grid: int = 1000) -> tuple[Fraction, ...]:
    return tuple(Fraction(rng.randrange(grid + 1), grid) for _ in range(size))


def random_threshold_model(rng: random.Random, x_count: int, atoms: int) -> ThresholdModel:
    weights = tuple(random_simplex_point(rng, atoms))
    thresholds = tuple(tuple(sorted(_unit_grid(rng, x_count - 1))) for _ in range(atoms))
    outcomes = tuple(_unit_grid(rng, x_count) for _ in range(atoms))
    return ThresholdModel(x_count, weights, thresholds, outcomes)


def random_table(rng: random.Random, x_count: int, cells: int, probes: int) -> PartitionTable:
    """Arbitrary complete table: each probe column is a random point of the simplex."""
    cols = [random_simplex_point(rng, cells * x_count) for _ in range(probes)]
    p = tuple(
        tuple(tuple(cols[z][c * x_count + x] for z in range(probes)) for x in range(x_count))
        for c in range(cells)
    )
    return PartitionTable(
        x_count, tuple(f"c{c + 1}" for c in range(cells)), tuple(f"z{z + 1}" for z in range(probes)), p
    )
