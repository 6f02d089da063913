"""Reproducible searches and sweeps built on the exact machinery."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .core import CondDist, Dims, index
from .linear_tests import pearl_statistic
from .polyhedra.membership import _distinct, certificate_inequality, lp_feasible
from .response import random_cond_dist, vertex_dist

__all__ = [
    "MixtureWitness",
    "FeasibilityPoint",
    "ambient_vertices",
    "feasibility_curve",
    "incompleteness_search",
    "vertex_pair_search",
]


def ambient_vertices(dims: Dims) -> list[CondDist]:
    """Every vertex of the ambient product of simplices, x-major order."""
    cells = dims.n * dims.m
    out = []
    for choice in itertools.product(range(cells), repeat=dims.l):
        values = [Fraction(0)] * dims.dim_f
        for k, c in enumerate(choice):
            values[index(dims, c // dims.m + 1, c % dims.m + 1, k + 1)] = Fraction(1)
        out.append(CondDist(dims, tuple(values)))
    return out


@dataclass(frozen=True)
class MixtureWitness:
    """``first`` mixed with ``second`` at weight ``alpha`` on ``first``."""

    first: CondDist
    second: CondDist
    alpha: Fraction
    statistic: Fraction
    certificate: tuple

    @property
    def mixture(self) -> CondDist:
        return self.first.mix(self.second, self.alpha)


def _check_pair(f1: CondDist, f2: CondDist, alpha: Fraction) -> MixtureWitness | None:
    mix = f1.mix(f2, alpha)
    stat = pearl_statistic(mix)
    if stat > 1:
        return None
    res = lp_feasible(mix)
    if res.feasible:
        return None
    # lp_feasible already re-verified the certificate; this also checks
    # that it turns into a valid separating inequality
    certificate_inequality(res.certificate, mix.dims, mix)
    return MixtureWitness(f1, f2, alpha, stat, res.certificate)


def incompleteness_search(
    dims: Dims = Dims(3, 2, 2), alpha: Fraction = Fraction(1, 4), limit: int | None = None
) -> list[MixtureWitness]:
    """Mixtures that pass every Pearl test yet are incompatible.

    ``first`` ranges over the ambient vertices outside the compatible set,
    ``second`` over the compatible vertices, so the weight-zero mixture is
    compatible by construction (and is re-checked).
    """
    alpha = Fraction(alpha)
    compatible = [vertex_dist(dims, col) for col, _ in _distinct(dims)]
    inside = {d.values for d in compatible}
    found = []
    for f1 in ambient_vertices(dims):
        if f1.values in inside:
            continue
        for f2 in compatible:
            w = _check_pair(f1, f2, alpha)
            if w is None:
                continue
            if not lp_feasible(f1.mix(f2, Fraction(0))).feasible:
                continue
            found.append(w)
            if limit is not None and len(found) >= limit:
                return found
    return found


def vertex_pair_search(dims: Dims = Dims(3, 2, 2), alpha: Fraction = Fraction(1, 4)) -> list[MixtureWitness]:
    """Same search restricted to pairs of compatible vertices.

    Always empty: a mixture of compatible points is compatible.
    """
    alpha = Fraction(alpha)
    compatible = [vertex_dist(dims, col) for col, _ in _distinct(dims)]
    found = []
    for f1, f2 in itertools.product(compatible, repeat=2):
        w = _check_pair(f1, f2, alpha)
        if w is not None:
            found.append(w)
    return found


@dataclass(frozen=True)
class FeasibilityPoint:
    dims: Dims
    samples: int
    feasible: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.feasible, self.samples)


def feasibility_curve(l: int, m: int, ns: Iterable[int], samples: int, seed: int) -> list[FeasibilityPoint]:
    """Share of uniformly random distributions that are compatible, per n."""
    out = []
    for n in ns:
        dims = Dims(l, m, n)
        rng = random.Random(f"{seed}:{l}:{m}:{n}")
        ok = sum(lp_feasible(random_cond_dist(dims, rng)).feasible for _ in range(samples))
        out.append(FeasibilityPoint(dims, samples, ok))
    return out
