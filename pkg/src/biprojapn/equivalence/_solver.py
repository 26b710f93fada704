"""Numba kernels for monomial EL-map searches.

Unknowns of a monomial map G o M = L o F + N, with M_i = c_i x^(2^t):
(c1, c3) is fixed up to a scalar (first nonzero entry 1), and for each such
choice the remaining unknowns (c2, c4, d0, d1) satisfy an affine F_2 system
in 4m bits built from the coefficient identities of each matched component.
Component types: 0 = same-sign match, 1 = opposite-sign match (b and c
swapped), 2 = both exponents zero (xy-type, the x^2 and y^2 terms go to N).
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .._kernels import gmul


@njit(cache=True, nogil=True, inline="always")
def _q(p, x, xe, y, ye, exp, log):
    # (p0, p1, p2, p3) at (x, y) with xe = x^(2^e), ye = y^(2^e)
    return (gmul(p[0], gmul(xe, x, exp, log), exp, log) ^ gmul(p[1], gmul(xe, y, exp, log), exp, log)
            ^ gmul(p[2], gmul(x, ye, exp, log), exp, log) ^ gmul(p[3], gmul(ye, y, exp, log), exp, log))


@njit(cache=True, nogil=True)
def _fill(m, exp, log, fe, gp, T, typ, c1, c3, comp, lin, const, nb):
    """Append this component's equation blocks; returns the new block count.

    lin[blk, j] is the m-bit contribution of variable bit j; const[blk] the
    constant.  Variable bits: c2 = 0..m-1, c4 = m..2m-1, d_comp = (2+comp)m...
    """
    dcol = (2 + comp) * m
    if typ == 2:
        s = gp[1] ^ gp[2]
        tb = T[1] ^ T[2]
        for j in range(m):
            e = 1 << j
            lin[nb, j] = gmul(s, gmul(c3, e, exp, log), exp, log)        # c2 term
            lin[nb, m + j] = gmul(s, gmul(c1, e, exp, log), exp, log)    # c4 term
            lin[nb, dcol + j] = gmul(tb, e, exp, log)
        const[nb] = 0
        return nb + 1
    a, b, c, d = gp[0], gp[1], gp[2], gp[3]
    c1e = fe[c1]
    c3e = fe[c3]
    # E1: d T_a = g(c1, c3)
    for j in range(m):
        lin[nb, dcol + j] = gmul(T[0], 1 << j, exp, log)
    const[nb] = _q(gp, c1, c1e, c3, c3e, exp, log)
    # E2: (a c1^e + c c3^e) c2 + (b c1^e + d c3^e) c4 = d T_b
    k2 = gmul(a, c1e, exp, log) ^ gmul(c, c3e, exp, log)
    k4 = gmul(b, c1e, exp, log) ^ gmul(d, c3e, exp, log)
    # E3: (a c1 + b c3) c2^e + (c c1 + d c3) c4^e = d T_c
    j2 = gmul(a, c1, exp, log) ^ gmul(b, c3, exp, log)
    j4 = gmul(c, c1, exp, log) ^ gmul(d, c3, exp, log)
    for j in range(m):
        e = 1 << j
        lin[nb + 1, j] = gmul(k2, e, exp, log)
        lin[nb + 1, m + j] = gmul(k4, e, exp, log)
        lin[nb + 1, dcol + j] = gmul(T[1], e, exp, log)
        lin[nb + 2, j] = gmul(j2, fe[e], exp, log)
        lin[nb + 2, m + j] = gmul(j4, fe[e], exp, log)
        lin[nb + 2, dcol + j] = gmul(T[2], e, exp, log)
    const[nb + 1] = 0
    const[nb + 2] = 0
    return nb + 3


@njit(cache=True, nogil=True)
def _solve_case(m, exp, log, ftabs, Gc, Ge, targets, types, c1, c3, first_only,
                out, nout, max_out, free_cap, best):
    """Solve one (plan row, c1, c3) case.

    In first_only mode the lexicographically least solution is left in best
    (returns 1 if any); otherwise solutions are appended to out.  Returns the
    number of solutions, or -1 if the free dimension exceeds free_cap.
    """
    nv = 4 * m
    lin = np.zeros((6, nv), dtype=np.int64)
    const = np.zeros(6, dtype=np.int64)
    nb = 0
    for i in range(2):
        nb = _fill(m, exp, log, ftabs[Ge[i]], Gc[4 * i:4 * i + 4], targets[i], types[i],
                   c1, c3, i, lin, const, nb)
    # transpose into equation rows: bit j = variable j, bit nv = constant
    nrows = nb * m
    rows = np.zeros(nrows, dtype=np.int64)
    for blk in range(nb):
        for bit in range(m):
            r = ((const[blk] >> bit) & 1) << nv
            for j in range(nv):
                r |= ((lin[blk, j] >> bit) & 1) << j
            rows[blk * m + bit] = r
    pivcol = np.empty(nv, dtype=np.int64)
    rank = 0
    for col in range(nv):
        piv = -1
        for r in range(rank, nrows):
            if (rows[r] >> col) & 1:
                piv = r
                break
        if piv < 0:
            continue
        tmp = rows[piv]
        rows[piv] = rows[rank]
        rows[rank] = tmp
        for r in range(nrows):
            if r != rank and (rows[r] >> col) & 1:
                rows[r] ^= tmp
        pivcol[rank] = col
        rank += 1
    for r in range(rank, nrows):
        if (rows[r] >> nv) & 1:
            return 0
    ispiv = np.zeros(nv, dtype=np.bool_)
    for r in range(rank):
        ispiv[pivcol[r]] = True
    free = np.empty(nv, dtype=np.int64)
    nf = 0
    for col in range(nv):
        if not ispiv[col]:
            free[nf] = col
            nf += 1
    if nf > free_cap:
        return -1
    mask = (1 << m) - 1
    found = 0
    for a in range(1 << nf):
        v = 0
        for i in range(nf):
            if (a >> i) & 1:
                v |= 1 << free[i]
        for r in range(rank):
            row = rows[r]
            bit = (row >> nv) & 1
            x = row & v
            while x:
                bit ^= 1
                x &= x - 1
            if bit:
                v |= 1 << pivcol[r]
        c2 = v & mask
        c4 = (v >> m) & mask
        d0 = (v >> (2 * m)) & mask
        d1 = (v >> (3 * m)) & mask
        if d0 == 0 or d1 == 0:
            continue
        if gmul(c1, c4, exp, log) ^ gmul(c2, c3, exp, log) == 0:
            continue
        ok = True
        for i in range(2):
            if types[i] == 2:
                continue
            fe = ftabs[Ge[i]]
            di = d0 if i == 0 else d1
            if _q(Gc[4 * i:4 * i + 4], c2, fe[c2], c4, fe[c4], exp, log) != gmul(di, targets[i, 3], exp, log):
                ok = False
                break
        if not ok:
            continue
        if first_only:
            if found == 0 or (c2, c4, d0, d1) < (best[0], best[1], best[2], best[3]):
                best[0] = c2
                best[1] = c4
                best[2] = d0
                best[3] = d1
            found = 1
        else:
            if nout + found < max_out:
                k = nout + found
                out[k, 0] = c1
                out[k, 1] = c2
                out[k, 2] = c3
                out[k, 3] = c4
                out[k, 4] = d0
                out[k, 5] = d1
            found += 1
    return found


@njit(cache=True, nogil=True)
def monomial_search(m, exp, log, ftabs, Gc, Ge, targets, types, first_only, max_out, free_cap, out, plan_of):
    """Run every plan row; rows of out are (c1, c2, c3, c4, d0, d1) and plan_of the row index.

    first_only stops after the first plan row with a solution (cases ordered
    c1 = 1 before c1 = 0, then by c3, least (c2, c4, d0, d1) within a case).
    Returns the total solution count, or -1 on a free-dimension overflow.
    """
    size = 1 << m
    best = np.zeros(4, dtype=np.int64)
    total = 0
    for p in range(targets.shape[0]):
        # (c1, c3) = (1, c3) for c3 ascending, then (0, 1)
        for idx in range(size + 1):
            if idx == size:
                c1, c3 = 0, 1
            else:
                c1, c3 = 1, idx
            got = _solve_case(m, exp, log, ftabs, Gc, Ge, targets[p], types[p], c1, c3,
                              first_only, out, total, max_out, free_cap, best)
            if got < 0:
                return -1
            if first_only and got:
                out[0, 0] = c1
                out[0, 1] = best[0]
                out[0, 2] = c3
                out[0, 3] = best[1]
                out[0, 4] = best[2]
                out[0, 5] = best[3]
                plan_of[0] = p
                return 1
            for k in range(total, min(total + got, max_out)):
                plan_of[k] = p
            total += got
    return total


@njit(cache=True, nogil=True)
def centralizer_exhaustive(m, exp, log, fq, fr, P, types, omega, counts):
    """Count (c1..c4) in GL(2, M) with F o M = diag(d0, d1) o F (+ N on xy-type components).

    counts gets [Z, Z_omega, A, B, other] tallies; returns the total.
    """
    size = 1 << m
    total = 0
    om2 = gmul(omega, omega, exp, log)
    for c1 in range(size):
        for c2 in range(size):
            for c3 in range(size):
                for c4 in range(size):
                    if gmul(c1, c4, exp, log) ^ gmul(c2, c3, exp, log) == 0:
                        continue
                    ok = True
                    for i in range(2):
                        fe = fq if i == 0 else fr
                        a, b, c, d = P[4 * i], P[4 * i + 1], P[4 * i + 2], P[4 * i + 3]
                        c1e, c2e, c3e, c4e = fe[c1], fe[c2], fe[c3], fe[c4]
                        # coefficients of F_i(c1 x + c2 y, c3 x + c4 y)
                        al = _q(P[4 * i:4 * i + 4], c1, c1e, c3, c3e, exp, log)
                        be = (gmul(gmul(a, c1e, exp, log) ^ gmul(c, c3e, exp, log), c2, exp, log)
                              ^ gmul(gmul(b, c1e, exp, log) ^ gmul(d, c3e, exp, log), c4, exp, log))
                        ga = (gmul(gmul(a, c1, exp, log) ^ gmul(b, c3, exp, log), c2e, exp, log)
                              ^ gmul(gmul(c, c1, exp, log) ^ gmul(d, c3, exp, log), c4e, exp, log))
                        de = _q(P[4 * i:4 * i + 4], c2, c2e, c4, c4e, exp, log)
                        if types[i] == 2:
                            if (be ^ ga) == 0:
                                ok = False
                                break
                            continue
                        # need (al, be, ga, de) = dd * (a, b, c, d) with dd != 0
                        dd = 0
                        if a:
                            dd = exp[log[al] - log[a] + size - 1] if al else 0
                        elif b:
                            dd = exp[log[be] - log[b] + size - 1] if be else 0
                        elif c:
                            dd = exp[log[ga] - log[c] + size - 1] if ga else 0
                        elif d:
                            dd = exp[log[de] - log[d] + size - 1] if de else 0
                        if (dd == 0 or al != gmul(dd, a, exp, log) or be != gmul(dd, b, exp, log)
                                or ga != gmul(dd, c, exp, log) or de != gmul(dd, d, exp, log)):
                            ok = False
                            break
                    if not ok:
                        continue
                    total += 1
                    if c2 == 0 and c3 == 0 and c4 == c1:
                        counts[0] += 1
                    elif (c2 == 0 and c3 == 0 and omega != 0
                          and (c4 == gmul(omega, c1, exp, log) or c4 == gmul(om2, c1, exp, log))):
                        counts[1] += 1
                    elif c1 == c2 and c2 == c3 and c4 == 0:
                        counts[2] += 1
                    elif c1 == 0 and c2 == c3 and c3 == c4:
                        counts[3] += 1
                    else:
                        counts[4] += 1
    return total
