"""Exact phase-one simplex for {x >= 0 : A x = b}.

Integer-preserving revised simplex: the basis inverse is kept as the
integer adjugate plus the determinant, so no Fraction appears inside the
pivot loop.  On infeasibility the final phase-one duals are a Farkas
certificate y with y @ a_j <= 0 for every column and y @ b > 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from .. import kernels
from ..core import ConsistencyError

# Consecutive degenerate pivots tolerated under Dantzig's rule before the
# solve switches to Bland's rule for good.
DEGENERATE_STREAK = 50


@dataclass
class LPOutcome:
    feasible: bool
    x: dict[int, Fraction] = field(default_factory=dict)
    y: list[Fraction] = field(default_factory=list)
    pivots: int = 0


def _scaled_columns(columns, signs):
    idx_list, val_list, scales = [], [], []
    for col in columns:
        items = [(r, v) for r, v in col if v]
        if all(type(v) is int for _, v in items):
            scale = 1
        else:
            items = [(r, Fraction(v)) for r, v in items]
            scale = lcm(*(v.denominator for _, v in items))
            items = [(r, int(v * scale)) for r, v in items]
        idx_list.append(tuple(r for r, _ in items))
        val_list.append(tuple(v * signs[r] for r, v in items))
        scales.append(scale)
    return idx_list, val_list, scales


def solve_nonneg(
    columns: Sequence[Sequence[tuple[int, object]]],
    b: Sequence,
    rule: str = "bland",
) -> LPOutcome:
    """Decide whether b is a non-negative combination of ``columns``.

    ``columns[j]`` lists the non-zero entries of column j as (row, value)
    pairs; values and ``b`` may be ints or Fractions.  ``rule`` is
    ``"bland"`` (smallest improving index, never cycles) or ``"dantzig"``
    (largest score, falling back to Bland after a degenerate streak).
    """
    if rule not in ("bland", "dantzig"):
        raise ValueError(f"unknown pivot rule {rule!r}")
    bf = [Fraction(v) for v in b]
    n_rows = len(bf)
    den = lcm(*(v.denominator for v in bf)) if bf else 1
    bint = [int(v * den) for v in bf]
    signs = [-1 if v < 0 else 1 for v in bint]
    beta = [abs(v) for v in bint]
    idx_list, val_list, scales = _scaled_columns(columns, signs)

    try:
        basis, d, y, pivots = kernels.phase_one(idx_list, val_list, beta, rule == "bland", DEGENERATE_STREAK)
    except ArithmeticError as exc:
        raise ConsistencyError(str(exc)) from exc

    residual = sum(beta[i] for i in range(n_rows) if basis[i] < 0)
    if residual == 0:
        x = {}
        for i, j in enumerate(basis):
            if j >= 0 and beta[i]:
                x[j] = Fraction(beta[i] * scales[j], d * den)
        return LPOutcome(True, x=x, pivots=pivots)
    return LPOutcome(False, y=[Fraction(s * v) for s, v in zip(signs, y)], pivots=pivots)
