"""Numba kernels for the hot loops.

All kernels take the field as (exp, log) tables from FieldCtx and release
the GIL, so callers may fan them out over a thread pool.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True, inline="always")
def gmul(a, b, exp, log):
    if a == 0 or b == 0:
        return 0
    return exp[log[a] + log[b]]


@njit(cache=True, nogil=True)
def _xor_rank(vecs, n):
    """Rank of n packed vectors (destroys vecs)."""
    rank = 0
    for i in range(n):
        v = vecs[i]
        if v == 0:
            continue
        # pivot on the highest set bit of v
        h = 63
        while not (v >> h) & 1:
            h -= 1
        rank += 1
        for j in range(i + 1, n):
            if (vecs[j] >> h) & 1:
                vecs[j] ^= v
    return rank


@njit(cache=True, nogil=True)
def _proj_eval(p1, p2, p3, p4, x, y, fx, fy, exp, log):
    # p1 x^{q+1} + p2 x^q y + p3 x y^q + p4 y^{q+1}, with fx = x^q, fy = y^q
    return (gmul(p1, gmul(fx, x, exp, log), exp, log)
            ^ gmul(p2, gmul(fx, y, exp, log), exp, log)
            ^ gmul(p3, gmul(x, fy, exp, log), exp, log)
            ^ gmul(p4, gmul(fy, y, exp, log), exp, log))


@njit(cache=True, nogil=True)
def truth_table(m, c, fq, fr, exp, log, out):
    """out[x*2^m + y] = f(x,y) << m | g(x,y) for coefficient vector c (8 entries)."""
    size = 1 << m
    # the y^(q+1) terms do not depend on x
    f4 = np.empty(size, dtype=np.int64)
    g4 = np.empty(size, dtype=np.int64)
    for y in range(size):
        f4[y] = gmul(c[3], gmul(fq[y], y, exp, log), exp, log)
        g4[y] = gmul(c[7], gmul(fr[y], y, exp, log), exp, log)
    for x in range(size):
        xq = fq[x]
        xr = fr[x]
        f1 = gmul(c[0], gmul(xq, x, exp, log), exp, log)
        f2 = gmul(c[1], xq, exp, log)
        f3 = gmul(c[2], x, exp, log)
        g1 = gmul(c[4], gmul(xr, x, exp, log), exp, log)
        g2 = gmul(c[5], xr, exp, log)
        g3 = gmul(c[6], x, exp, log)
        base = x * size
        for y in range(size):
            f = f1 ^ gmul(f2, y, exp, log) ^ gmul(f3, fq[y], exp, log) ^ f4[y]
            g = g1 ^ gmul(g2, y, exp, log) ^ gmul(g3, fr[y], exp, log) ^ g4[y]
            out[base + y] = (f << m) | g


@njit(cache=True, nogil=True)
def _delta_images(m, a, b, cc, d, u, is_inf, ft, exp, log, out, shift):
    """XOR the images of the 2m basis vectors under Delta_u of one component into out.

    ft is the Frobenius table for the component's exponent.
    """
    if is_inf:
        cx1, cx0, cy1, cy0 = a, a, cc, b
    else:
        cx1 = gmul(a, u, exp, log) ^ b
        cx0 = gmul(a, ft[u], exp, log) ^ cc
        cy1 = gmul(cc, u, exp, log) ^ d
        cy0 = gmul(b, ft[u], exp, log) ^ d
    for i in range(m):
        e = 1 << i
        vx = gmul(cx1, ft[e], exp, log) ^ gmul(cx0, e, exp, log)
        vy = gmul(cy1, ft[e], exp, log) ^ gmul(cy0, e, exp, log)
        out[i] |= vx << shift
        out[m + i] |= vy << shift


@njit(cache=True, nogil=True)
def projective_nullities(m, c, fq, fr, exp, log, stop_early, out):
    """Nullity of the stacked Delta_u system for every u in P^1 (index 2^m is infinity).

    Returns the number of u whose nullity differs from 1; with stop_early the
    scan ends at the first such u and later entries of out are left at -1.
    """
    size = 1 << m
    vecs = np.zeros(2 * m, dtype=np.int64)
    bad = 0
    for idx in range(size + 1):
        out[idx] = -1
    for idx in range(size + 1):
        for i in range(2 * m):
            vecs[i] = 0
        is_inf = idx == size
        u = 0 if is_inf else idx
        _delta_images(m, c[0], c[1], c[2], c[3], u, is_inf, fq, exp, log, vecs, 0)
        _delta_images(m, c[4], c[5], c[6], c[7], u, is_inf, fr, exp, log, vecs, m)
        nul = 2 * m - _xor_rank(vecs, 2 * m)
        out[idx] = nul
        if nul != 1:
            bad += 1
            if stop_early:
                break
    return bad


@njit(cache=True, nogil=True)
def projective_batch(m, ks, ls, coeffs, ftabs, exp, log, verdict):
    """apn_projective for many pairs at once; ftabs[k] is the x -> x^(2^k) table."""
    size = 1 << m
    nul = np.empty(size + 1, dtype=np.int64)
    for i in range(coeffs.shape[0]):
        bad = projective_nullities(m, coeffs[i], ftabs[ks[i]], ftabs[ls[i]], exp, log, True, nul)
        verdict[i] = bad == 0


@njit(cache=True, nogil=True)
def differential_counts(values, n, stop_early, hist):
    """Differential spectrum of a truth table.

    For each a != 0 only x with bit h(a) clear are visited (x and x+a give the
    same derivative value), so every count is twice the half-space count.
    hist[d] accumulates the number of (a, b) with exactly d solutions.
    Returns the maximum count seen (early exit when stop_early and > 2).
    """
    size = 1 << n
    cnt = np.zeros(size, dtype=np.int32)
    worst = 0
    for a in range(1, size):
        h = 0
        while (a >> (h + 1)) != 0:
            h += 1
        blk = 1 << h
        for base in range(0, size, 2 * blk):
            for x in range(base, base + blk):
                cnt[values[x] ^ values[x ^ a]] += 1
        for b in range(size):
            d = 2 * cnt[b]
            hist[d] += 1
            if d > worst:
                worst = d
            cnt[b] = 0
        if stop_early and worst > 2:
            return worst
    return worst


@njit(cache=True, nogil=True)
def is_apn_table(values, n):
    """Fast verdict: every derivative is 2-to-1 (stamp array, early exit)."""
    size = 1 << n
    v = values.astype(np.uint32)
    stamp = np.zeros(size, dtype=np.uint32)
    for a in range(1, size):
        h = 0
        while (a >> (h + 1)) != 0:
            h += 1
        blk = 1 << h
        tag = np.uint32(a)
        for base in range(0, size, 2 * blk):
            for x in range(base, base + blk):
                b = v[x] ^ v[x ^ a]
                if stamp[b] == tag:
                    return False
                stamp[b] = tag
    return True


@njit(cache=True, nogil=True)
def naive_batch(m, ks, ls, coeffs, ftabs, exp, log, verdict):
    """Truth table + naive APN verdict for many pairs."""
    n = 2 * m
    table = np.empty(1 << n, dtype=np.int64)
    for i in range(coeffs.shape[0]):
        truth_table(m, coeffs[i], ftabs[ks[i]], ftabs[ls[i]], exp, log, table)
        verdict[i] = is_apn_table(table, n)


@njit(cache=True, nogil=True)
def count_rootless(m, k, fq, exp, log):
    """Number of (p1 != 0, p2, p3, p4) with p1 x^{q+1} + p2 x^q + p3 x + p4 != 0 on M."""
    size = 1 << m
    total = 0
    for p1 in range(1, size):
        for p2 in range(size):
            for p3 in range(size):
                for p4 in range(size):
                    ok = True
                    for x in range(size):
                        xq = fq[x]
                        v = (gmul(p1, gmul(xq, x, exp, log), exp, log)
                             ^ gmul(p2, xq, exp, log) ^ gmul(p3, x, exp, log) ^ p4)
                        if v == 0:
                            ok = False
                            break
                    if ok:
                        total += 1
    return total


@njit(cache=True, nogil=True)
def fwht_inplace(a):
    n = a.shape[0]
    h = 1
    while h < n:
        for i in range(0, n, 2 * h):
            for j in range(i, i + h):
                x = a[j]
                y = a[j + h]
                a[j] = x + y
                a[j + h] = x - y
        h *= 2


@njit(cache=True, nogil=True)
def walsh_histogram(values, n, c_lo, c_hi, hist):
    """Accumulate |W| over all masks c in [c_lo, c_hi) into hist (indexed by |W|).

    W_c(w) = sum_x (-1)^{<c, F(x)> + <w, x>} with <.,.> the bit dot product.
    """
    size = 1 << n
    buf = np.empty(size, dtype=np.int64)
    for c in range(c_lo, c_hi):
        for x in range(size):
            v = values[x] & c
            # parity of v
            v ^= v >> 32
            v ^= v >> 16
            v ^= v >> 8
            v ^= v >> 4
            v ^= v >> 2
            v ^= v >> 1
            buf[x] = 1 - 2 * (v & 1)
        fwht_inplace(buf)
        for w in range(size):
            hist[abs(buf[w])] += 1


@njit(cache=True, nogil=True)
def walsh_trace_histogram(values, m, b_lo, b_hi, exp, log, tr, hist):
    """Accumulate |W_F(b, .)| for b = b1 << m | b2 in [b_lo, b_hi), b != 0.

    The sign of x is (-1)^Tr(b1 f(x) + b2 g(x)); the FWHT index is the bit
    mask of the linear form a -> Tr(a1 x + a2 y), a relabelling of a.
    """
    size = values.shape[0]
    mask = (1 << m) - 1
    buf = np.empty(size, dtype=np.int64)
    for b in range(max(b_lo, 1), b_hi):
        b1 = b >> m
        b2 = b & mask
        for x in range(size):
            v = values[x]
            s = tr[gmul(b1, v >> m, exp, log)] ^ tr[gmul(b2, v & mask, exp, log)]
            buf[x] = 1 - 2 * s
        fwht_inplace(buf)
        for w in range(size):
            hist[abs(buf[w])] += 1
