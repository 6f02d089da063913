"""Pure-Python hot kernels.

Mirrors ``_speedups.pyx`` function for function; the package imports the
compiled module when it is available and falls back to this one.
All arithmetic is on Python ints.
"""

from math import gcd


def pivot_update(M, beta, w, r, d):
    """Integer-preserving basis change, in place.

    ``M`` holds det(B) * inverse(B) for the current basis B, ``beta`` holds
    M @ b and ``d`` is det(B).  ``w`` is M @ a for the entering column and
    ``r`` the leaving row.  After the call M, beta describe the new basis,
    whose determinant is ``w[r]``.  Every division is exact.
    """
    wr = w[r]
    Mr = M[r]
    br = beta[r]
    for i in range(len(M)):
        if i == r:
            continue
        wi = w[i]
        Mi = M[i]
        if wi:
            for c in range(len(Mi)):
                Mi[c] = (wr * Mi[c] - wi * Mr[c]) // d
            beta[i] = (wr * beta[i] - wi * br) // d
        else:
            for c in range(len(Mi)):
                Mi[c] = wr * Mi[c] // d
            beta[i] = wr * beta[i] // d


def sparse_column(M, idx, val):
    """M @ a for a sparse column a given as parallel (idx, val) tuples."""
    out = []
    for row in M:
        s = 0
        for t in range(len(idx)):
            s += row[idx[t]] * val[t]
        out.append(s)
    return out


def price(y, cols_idx, cols_val, bland):
    """Index of the entering column, or -1 if none improves.

    A column improves when y @ a > 0.  With ``bland`` the first such column
    is taken, otherwise the one with the largest score (first on ties).
    """
    best = -1
    best_score = 0
    for j in range(len(cols_idx)):
        idx = cols_idx[j]
        val = cols_val[j]
        s = 0
        for t in range(len(idx)):
            s += y[idx[t]] * val[t]
        if s > best_score:
            if bland:
                return j
            best = j
            best_score = s
    return best


def ratio_test(beta, w, order):
    """Leaving row: minimum beta[i] / w[i] over w[i] > 0, ties by ``order``."""
    r = -1
    for i in range(len(w)):
        wi = w[i]
        if wi <= 0:
            continue
        if r < 0:
            r = i
            continue
        lhs = beta[i] * w[r]
        rhs = beta[r] * wi
        if lhs < rhs or (lhs == rhs and order[i] < order[r]):
            r = i
    return r


def phase_one(idx_list, val_list, beta, bland, streak_limit):
    """Phase-one simplex from the all-artificial basis.

    Columns are sparse (``idx_list[j]``, ``val_list[j]``) with integer
    values; ``beta`` is the non-negative integer right-hand side and is
    updated in place.  Artificial variable i is basic as ``-1 - i``.
    Returns (basis, d, y, pivots) where y are the final integer duals
    (scaled by d) of the phase-one objective.
    """
    n_rows = len(beta)
    n_cols = len(idx_list)
    M = [[int(i == j) for j in range(n_rows)] for i in range(n_rows)]
    d = 1
    basis = [-1 - i for i in range(n_rows)]
    order = [n_cols + i for i in range(n_rows)]
    streak = 0
    pivots = 0
    while True:
        y = [0] * n_rows
        for i in range(n_rows):
            if basis[i] < 0:
                Mi = M[i]
                for c in range(n_rows):
                    y[c] += Mi[c]
        j = price(y, idx_list, val_list, bland)
        if j < 0:
            return basis, d, y, pivots
        w = sparse_column(M, idx_list[j], val_list[j])
        r = ratio_test(beta, w, order)
        if r < 0:
            raise ArithmeticError("phase-one objective unbounded below")
        if not bland:
            streak = streak + 1 if beta[r] == 0 else 0
            if streak > streak_limit:
                bland = True
        pivot_update(M, beta, w, r, d)
        d = w[r]
        basis[r] = j
        order[r] = j
        pivots += 1


def _primitive(v):
    g = 0
    for x in v:
        if x:
            g = gcd(g, x)
            if g == 1:
                return v
    if g > 1:
        return [x // g for x in v]
    return v


def dd_add_row(rays, zsets, a, bit, dim):
    """One double-description step for the homogeneous constraint a @ u >= 0.

    ``rays`` are the extreme rays of the current cone, ``zsets`` bitmasks of
    the constraints each ray satisfies with equality, ``bit`` the mask of
    the new constraint and ``dim`` the ambient dimension.  Returns the new
    (rays, zsets); new rays come from adjacent +/- pairs.
    """
    n_rays = len(rays)
    scores = []
    for r in rays:
        s = 0
        for t in range(len(a)):
            if a[t]:
                s += a[t] * r[t]
        scores.append(s)
    pos = [i for i in range(n_rays) if scores[i] > 0]
    neg = [i for i in range(n_rays) if scores[i] < 0]
    new_rays = []
    new_z = []
    for i in range(n_rays):
        s = scores[i]
        if s > 0:
            new_rays.append(rays[i])
            new_z.append(zsets[i])
        elif s == 0:
            new_rays.append(rays[i])
            new_z.append(zsets[i] | bit)
    need = dim - 2
    for p in pos:
        zp = zsets[p]
        sp = scores[p]
        rp = rays[p]
        for q in neg:
            common = zp & zsets[q]
            if common.bit_count() < need:
                continue
            adjacent = True
            for t in range(n_rays):
                if t != p and t != q and zsets[t] & common == common:
                    adjacent = False
                    break
            if not adjacent:
                continue
            sq = scores[q]
            rq = rays[q]
            v = [sp * rq[c] - sq * rp[c] for c in range(len(rp))]
            new_rays.append(_primitive(v))
            new_z.append(common | bit)
    return new_rays, new_z
