# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_purepy.py`` for the reference versions.

``phase_one`` keeps the basis adjugate in int64 with 128-bit
intermediates and drops to Python ints the moment a value would not fit.
"""

from math import gcd

from libc.stdlib cimport free, malloc
from libc.string cimport memcpy

cdef extern from *:
    """
    typedef __int128 ivt_i128;
    static inline ivt_i128 ivt_mul(long long a, long long b) { return (ivt_i128)a * b; }
    static inline ivt_i128 ivt_div(ivt_i128 a, long long b) { return a / b; }
    """
    ctypedef long long ivt_i128
    # Cython believes ivt_i128 is long long, so it drops widening casts and
    # may narrow before dividing; the arithmetic goes through C helpers.
    ivt_i128 ivt_mul(long long a, long long b)
    ivt_i128 ivt_div(ivt_i128 a, long long b)

ctypedef long long i64

cdef i64 LIM = 4611686018427387904  # 2**62; keeps negation and sums safe


def pivot_update(list M, list beta, list w, Py_ssize_t r, object d):
    cdef Py_ssize_t i, c, ncol
    cdef list Mi
    cdef list Mr = <list>M[r]
    cdef object wr = w[r]
    cdef object br = beta[r]
    cdef object wi
    ncol = len(Mr)
    for i in range(len(M)):
        if i == r:
            continue
        wi = w[i]
        Mi = <list>M[i]
        if wi:
            for c in range(ncol):
                Mi[c] = (wr * Mi[c] - wi * Mr[c]) // d
            beta[i] = (wr * beta[i] - wi * br) // d
        else:
            for c in range(ncol):
                Mi[c] = wr * Mi[c] // d
            beta[i] = wr * beta[i] // d


def sparse_column(list M, tuple idx, tuple val):
    cdef Py_ssize_t t, nt = len(idx)
    cdef list out = []
    cdef list row
    cdef object s
    for row in M:
        s = 0
        for t in range(nt):
            s += row[<Py_ssize_t>idx[t]] * val[t]
        out.append(s)
    return out


def price(list y, list cols_idx, list cols_val, bint bland):
    cdef Py_ssize_t j, t, nt, best = -1
    cdef object best_score = 0
    cdef object s
    cdef tuple idx, val
    for j in range(len(cols_idx)):
        idx = <tuple>cols_idx[j]
        val = <tuple>cols_val[j]
        nt = len(idx)
        s = 0
        for t in range(nt):
            s += y[<Py_ssize_t>idx[t]] * val[t]
        if s > best_score:
            if bland:
                return j
            best = j
            best_score = s
    return best


def ratio_test(list beta, list w, list order):
    cdef Py_ssize_t i, r = -1
    cdef object wi, lhs, rhs
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


def phase_one(list idx_list, list val_list, list beta, bint bland, Py_ssize_t streak_limit):
    cdef Py_ssize_t R = len(beta), N = len(idx_list)
    cdef Py_ssize_t i, j, c, t, r, k, nnz = 0
    cdef list basis = [-1 - i for i in range(R)]
    cdef list order = [N + i for i in range(R)]
    cdef Py_ssize_t streak = 0, pivots = 0
    cdef tuple idx, val
    cdef object v
    for j in range(N):
        val = <tuple>val_list[j]
        for v in val:
            if not -LIM < v < LIM:
                return _phase_one_objects(idx_list, val_list, beta, bland, streak_limit,
                                          None, 1, basis, order, 0, 0)
        nnz += len(val)

    cdef Py_ssize_t *cstart = <Py_ssize_t *>malloc((N + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *cidx = <Py_ssize_t *>malloc((nnz + 1) * sizeof(Py_ssize_t))
    cdef i64 *cval = <i64 *>malloc((nnz + 1) * sizeof(i64))
    cdef i64 *M = <i64 *>malloc(R * R * sizeof(i64) + 1)
    cdef i64 *M2 = <i64 *>malloc(R * R * sizeof(i64) + 1)
    cdef i64 *y = <i64 *>malloc(R * sizeof(i64) + 1)
    cdef i64 *w = <i64 *>malloc(R * sizeof(i64) + 1)
    cdef i64 d = 1, wr, wi
    cdef ivt_i128 acc, acc2, best_score
    cdef bint overflow = False
    cdef list wobj, Mobj
    cdef object br
    try:
        k = 0
        for j in range(N):
            cstart[j] = k
            idx = <tuple>idx_list[j]
            val = <tuple>val_list[j]
            for t in range(len(idx)):
                cidx[k] = <Py_ssize_t>idx[t]
                cval[k] = <i64>val[t]
                k += 1
        cstart[N] = k
        for i in range(R * R):
            M[i] = 0
        for i in range(R):
            M[i * R + i] = 1

        while True:
            # duals of the phase-one objective
            for c in range(R):
                acc = 0
                for i in range(R):
                    if <Py_ssize_t>basis[i] < 0:
                        acc += M[i * R + c]
                if acc >= LIM or acc <= -LIM:
                    overflow = True
                    break
                y[c] = <i64>acc
            if overflow:
                break
            # pricing
            r = -1
            best_score = 0
            for j in range(N):
                acc = 0
                for t in range(cstart[j], cstart[j + 1]):
                    acc += ivt_mul(y[cidx[t]], cval[t])
                if acc > best_score:
                    r = j
                    best_score = acc
                    if bland:
                        break
            if r < 0:
                return basis, d, [y[c] for c in range(R)], pivots
            j = r
            # entering column in the current basis
            for i in range(R):
                acc = 0
                for t in range(cstart[j], cstart[j + 1]):
                    acc += ivt_mul(M[i * R + cidx[t]], cval[t])
                if acc >= LIM or acc <= -LIM:
                    overflow = True
                    break
                w[i] = <i64>acc
            if overflow:
                break
            wobj = [w[i] for i in range(R)]
            r = ratio_test(beta, wobj, order)
            if r < 0:
                raise ArithmeticError("phase-one objective unbounded below")
            wr = w[r]
            for i in range(R):
                if i == r:
                    for c in range(R):
                        M2[i * R + c] = M[i * R + c]
                    continue
                wi = w[i]
                for c in range(R):
                    acc = ivt_mul(wr, M[i * R + c]) - ivt_mul(wi, M[r * R + c])
                    acc2 = ivt_div(acc, d)
                    if acc2 >= LIM or acc2 <= -LIM:
                        overflow = True
                        break
                    M2[i * R + c] = <i64>acc2
                if overflow:
                    break
            if overflow:
                break
            if not bland:
                streak = streak + 1 if beta[r] == 0 else 0
                if streak > streak_limit:
                    bland = True
            memcpy(M, M2, R * R * sizeof(i64))
            br = beta[r]
            for i in range(R):
                if i != r:
                    beta[i] = (wr * beta[i] - w[i] * br) // d
            d = wr
            basis[r] = j
            order[r] = j
            pivots += 1

        # a value left the int64 range: continue on Python ints from the
        # last consistent state
        Mobj = [[M[i * R + c] for c in range(R)] for i in range(R)]
        return _phase_one_objects(idx_list, val_list, beta, bland, streak_limit,
                                  Mobj, d, basis, order, streak, pivots)
    finally:
        free(cstart)
        free(cidx)
        free(cval)
        free(M)
        free(M2)
        free(y)
        free(w)


def _phase_one_objects(list idx_list, list val_list, list beta, bint bland, Py_ssize_t streak_limit,
                       list M, object d, list basis, list order, Py_ssize_t streak, Py_ssize_t pivots):
    cdef Py_ssize_t R = len(beta), i, c, j, r
    cdef list y, w, Mi
    if M is None:
        M = [[int(i == c) for c in range(R)] for i in range(R)]
    while True:
        y = [0] * R
        for i in range(R):
            if <Py_ssize_t>basis[i] < 0:
                Mi = <list>M[i]
                for c in range(R):
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


cdef list _primitive(list v):
    cdef object g = 0
    cdef object x
    for x in v:
        if x:
            g = gcd(g, x)
            if g == 1:
                return v
    if g > 1:
        return [x // g for x in v]
    return v


def dd_add_row(list rays, list zsets, list a, object bit, Py_ssize_t dim):
    cdef Py_ssize_t n_rays = len(rays)
    cdef Py_ssize_t i, t, p, q, c, na = len(a), need = dim - 2
    cdef list scores = []
    cdef list pos = [], neg = []
    cdef list new_rays = [], new_z = []
    cdef list r, rp, rq, nz
    cdef object s, sp, sq, zp, common, at
    cdef bint adjacent
    nz = [t for t in range(na) if a[t]]
    for r in rays:
        s = 0
        for t in nz:
            s += a[t] * r[t]
        scores.append(s)
    for i in range(n_rays):
        s = scores[i]
        if s > 0:
            pos.append(i)
            new_rays.append(rays[i])
            new_z.append(zsets[i])
        elif s == 0:
            new_rays.append(rays[i])
            new_z.append(zsets[i] | bit)
        else:
            neg.append(i)
    for p in pos:
        zp = zsets[p]
        sp = scores[p]
        rp = <list>rays[p]
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
            rq = <list>rays[q]
            new_rays.append(_primitive([sp * rq[c] - sq * rp[c] for c in range(len(rp))]))
            new_z.append(common | bit)
    return new_rays, new_z
