"""Numba backend: compiled twins of the reference kernels.

Every function here must reproduce `ref` exactly — same enumeration order,
same pseudo-random streams, same outputs. The test suite cross-checks the two
backends; keep them in lockstep when editing. Kernels release the GIL so the
verification driver can fan blocks out over threads.
"""

from __future__ import annotations

import numpy as np
from numba import int64, njit, uint64

_GOLD = uint64(0x9E3779B97F4A7C15)
_MIX1 = uint64(0xBF58476D1CE4E5B9)
_MIX2 = uint64(0x94D049BB133111EB)

TAG_LINE_SUM = 1
TAG_LINE_DIFF = 2
TAG_CYC_SUM = 3
TAG_CYC_DIFF = 4

_JIT = dict(cache=True, nogil=True)


@njit(**_JIT)
def _mix(z):
    z = (z ^ (z >> uint64(30))) * _MIX1
    z = (z ^ (z >> uint64(27))) * _MIX2
    return z ^ (z >> uint64(31))


@njit(**_JIT)
def _fold(h, v):
    return _mix((h ^ v) + _GOLD)


@njit(**_JIT)
def _next(state):
    state = state + _GOLD
    return state, _mix(state)


def fold_seed(h: int, v: int) -> int:
    return int(_fold(uint64(h & ((1 << 64) - 1)), uint64(v & ((1 << 64) - 1))))


def stream_next(state: int):
    s, v = _next(uint64(state & ((1 << 64) - 1)))
    return int(s), int(v)


@njit(**_JIT)
def _selftest_stream(seed, count):
    out = np.empty(count, dtype=np.uint64)
    state = seed
    for i in range(count):
        state, v = _next(state)
        out[i] = v
    return out


def selftest_stream(seed: int, count: int) -> np.ndarray:
    return _selftest_stream(uint64(seed & ((1 << 64) - 1)), count)


@njit(**_JIT)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(**_JIT)
def _mask_gcd(mask, nbits):
    g = 0
    for p in range(nbits):
        if (mask >> p) & 1:
            g = _gcd(g, p)
    return g


@njit(**_JIT)
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(**_JIT)
def _fill_bits(mask, nbits, out):
    c = 0
    for p in range(nbits):
        if (mask >> p) & 1:
            out[c] = p
            c += 1
    return c


@njit(**_JIT)
def _binom(a, b):
    if b < 0 or b > a:
        return 0
    r = 1
    for i in range(b):
        r = r * (a - i) // (i + 1)
    return r


@njit(**_JIT)
def _next_comb(x):
    # Gosper's hack: next mask with the same popcount
    u = x & (-x)
    v = x + u
    return v + (((v ^ x) // u) >> 2)


@njit(**_JIT)
def _kmask_array(bits, k):
    cnt = _binom(bits, k)
    out = np.empty(cnt, dtype=np.int64)
    if cnt == 0:
        return out
    if k == 0:
        out[0] = 0
        return out
    x = (1 << k) - 1
    top = 1 << bits
    i = 0
    while x < top:
        out[i] = x
        i += 1
        x = _next_comb(x)
    return out[:i]


@njit(**_JIT)
def _line_a_masks(l, n):
    mids = _kmask_array(l - 1, n - 2)
    out = np.empty(mids.size, dtype=np.int64)
    for i in range(mids.size):
        out[i] = 1 | (mids[i] << 1) | (1 << l)
    return out


@njit(**_JIT)
def _line_b_masks(l, n):
    mids = _kmask_array(l, n - 1)
    out = np.empty(mids.size, dtype=np.int64)
    for i in range(mids.size):
        out[i] = 1 | (mids[i] << 1)
    return out


def line_a_masks(l, n):
    return _line_a_masks(l, n)


def line_b_masks(l, n):
    return _line_b_masks(l, n)


# -- full-relation blocks ----------------------------------------------------


@njit(**_JIT)
def _full_sum_block(l, n):
    amasks = _line_a_masks(l, n)
    bmasks = _line_b_masks(l, n)
    nbits = l + 1
    cap = amasks.size * bmasks.size
    out_a = np.empty(cap, dtype=np.int64)
    out_b = np.empty(cap, dtype=np.int64)
    out_m = np.empty(cap, dtype=np.int64)
    gb = np.empty(bmasks.size, dtype=np.int64)
    for j in range(bmasks.size):
        gb[j] = _mask_gcd(bmasks[j], nbits)
    row = 0
    for i in range(amasks.size):
        am = amasks[i]
        ga = _mask_gcd(am, nbits)
        for j in range(bmasks.size):
            if _gcd(ga, gb[j]) != 1:
                continue
            bm = bmasks[j]
            acc = 0
            for p in range(nbits):
                if (am >> p) & 1:
                    acc |= bm << p
            out_a[row] = am
            out_b[row] = bm
            out_m[row] = _popcount(acc)
            row += 1
    return out_a[:row], out_b[:row], out_m[:row]


def full_sum_block(l, n):
    return _full_sum_block(l, n)


@njit(**_JIT)
def _full_diff_block(l, n):
    amasks = _line_a_masks(l, n)
    nbits = l + 1
    out_a = np.empty(amasks.size, dtype=np.int64)
    out_m = np.empty(amasks.size, dtype=np.int64)
    row = 0
    for i in range(amasks.size):
        am = amasks[i]
        if _mask_gcd(am, nbits) != 1:
            continue
        d = 0
        for q in range(nbits):
            if (am >> q) & 1:
                d |= am << (l - q)
        out_a[row] = am
        out_m[row] = _popcount(d)
        row += 1
    return out_a[:row], out_m[:row]


def full_diff_block(l, n):
    return _full_diff_block(l, n)


# -- sampled relations -------------------------------------------------------


@njit(**_JIT)
def _measure_sample(avals, na, bvals, nb, r, svals, nsv, popular, s, inst,
                    modulus, lo, remflag, colrem, cnt, rem_i, rem_j):
    state = inst
    nrem = 0
    for i in range(na):
        for _ in range(s):
            state, v = _next(state)
            j = int64(v % uint64(nb))
            key = i * nb + j
            if remflag[key] == 0 and colrem[j] < s:
                remflag[key] = 1
                colrem[j] += 1
                if modulus > 0:
                    x = (avals[i] + bvals[j]) % modulus
                else:
                    x = avals[i] + bvals[j] - lo
                cnt[x] += 1
                rem_i[nrem] = i
                rem_j[nrem] = j
                nrem += 1
    measured = 0
    for u in range(nsv):
        x = svals[u]
        if cnt[x] < r[x] or popular[x] == 1:
            measured += 1
    for q in range(nrem):
        i = rem_i[q]
        j = rem_j[q]
        remflag[i * nb + j] = 0
        colrem[j] -= 1
        if modulus > 0:
            x = (avals[i] + bvals[j]) % modulus
        else:
            x = avals[i] + bvals[j] - lo
        cnt[x] = 0
    return measured


@njit(**_JIT)
def _line_tables(avals, na, bvals, nb, knum, kden, r, svals, popular):
    bmin = bvals[0]
    bmax = bvals[0]
    for j in range(1, nb):
        if bvals[j] < bmin:
            bmin = bvals[j]
        if bvals[j] > bmax:
            bmax = bvals[j]
    lo = avals[0] + bmin
    width = avals[na - 1] + bmax - lo + 1
    for x in range(width):
        r[x] = 0
        popular[x] = 0
    for i in range(na):
        for j in range(nb):
            r[avals[i] + bvals[j] - lo] += 1
    nsv = 0
    for x in range(width):
        if r[x] > 0:
            svals[nsv] = x
            nsv += 1
        if r[x] * kden >= knum:
            popular[x] = 1
    return lo, width, nsv


@njit(**_JIT)
def _cyc_tables(avals, na, bvals, nb, m, knum, kden, r, svals, popular):
    for x in range(m):
        r[x] = 0
        popular[x] = 0
    for i in range(na):
        for j in range(nb):
            r[(avals[i] + bvals[j]) % m] += 1
    nsv = 0
    for x in range(m):
        if r[x] > 0:
            svals[nsv] = x
            nsv += 1
        if r[x] * kden >= knum:
            popular[x] = 1
    return nsv


@njit(**_JIT)
def _pair_seed(seed, tag, l, amask, bmask, knum, kden, s):
    h = _fold(seed, uint64(tag))
    h = _fold(h, uint64(l))
    h = _fold(h, uint64(amask))
    h = _fold(h, uint64(bmask))
    h = _fold(h, uint64(knum))
    h = _fold(h, uint64(kden))
    h = _fold(h, uint64(s))
    return h


@njit(**_JIT)
def _sampled_restricted_size(avals, bvals, knum, kden, s, inst_seed, modulus):
    na, nb = avals.size, bvals.size
    if modulus > 0:
        width = modulus
    else:
        bmin = bvals[0]
        bmax = bvals[0]
        for j in range(1, nb):
            if bvals[j] < bmin:
                bmin = bvals[j]
            if bvals[j] > bmax:
                bmax = bvals[j]
        width = avals[na - 1] + bmax - (avals[0] + bmin) + 1
    r = np.zeros(width, dtype=np.int64)
    svals = np.zeros(width, dtype=np.int64)
    popular = np.zeros(width, dtype=np.int64)
    cnt = np.zeros(width, dtype=np.int64)
    remflag = np.zeros(na * nb, dtype=np.int64)
    colrem = np.zeros(nb, dtype=np.int64)
    rem_i = np.zeros(max(s, 1) * na, dtype=np.int64)
    rem_j = np.zeros(max(s, 1) * na, dtype=np.int64)
    if modulus > 0:
        nsv = _cyc_tables(avals, na, bvals, nb, modulus, knum, kden, r, svals, popular)
        lo = 0
    else:
        lo, width, nsv = _line_tables(avals, na, bvals, nb, knum, kden, r, svals, popular)
    return _measure_sample(avals, na, bvals, nb, r, svals, nsv, popular, s,
                           inst_seed, modulus, lo, remflag, colrem, cnt, rem_i, rem_j)


def sampled_restricted_size(avals, bvals, knum, kden, s, inst_seed, modulus):
    return int(
        _sampled_restricted_size(
            np.asarray(avals, dtype=np.int64),
            np.asarray(bvals, dtype=np.int64),
            knum, kden, s,
            uint64(inst_seed & ((1 << 64) - 1)),
            modulus,
        )
    )


@njit(**_JIT)
def _sampled_sum_block(l, n, knum, kden, s, nsamples, seed):
    amasks = _line_a_masks(l, n)
    bmasks = _line_b_masks(l, n)
    nbits = l + 1
    cap = amasks.size * bmasks.size
    out_a = np.empty(cap, dtype=np.int64)
    out_b = np.empty(cap, dtype=np.int64)
    out_m = np.empty(cap, dtype=np.int64)
    gb = np.empty(bmasks.size, dtype=np.int64)
    for j in range(bmasks.size):
        gb[j] = _mask_gcd(bmasks[j], nbits)
    width_cap = 2 * l + 1
    avals = np.zeros(nbits, dtype=np.int64)
    bvals = np.zeros(nbits, dtype=np.int64)
    r = np.zeros(width_cap, dtype=np.int64)
    svals = np.zeros(width_cap, dtype=np.int64)
    popular = np.zeros(width_cap, dtype=np.int64)
    cnt = np.zeros(width_cap, dtype=np.int64)
    remflag = np.zeros(nbits * nbits, dtype=np.int64)
    colrem = np.zeros(nbits, dtype=np.int64)
    rem_i = np.zeros(max(s, 1) * nbits, dtype=np.int64)
    rem_j = np.zeros(max(s, 1) * nbits, dtype=np.int64)
    row = 0
    for i in range(amasks.size):
        am = amasks[i]
        ga = _mask_gcd(am, nbits)
        na = _fill_bits(am, nbits, avals)
        for j in range(bmasks.size):
            if _gcd(ga, gb[j]) != 1:
                continue
            bm = bmasks[j]
            nb = _fill_bits(bm, nbits, bvals)
            lo, _w, nsv = _line_tables(avals, na, bvals, nb, knum, kden, r, svals, popular)
            h = _pair_seed(seed, TAG_LINE_SUM, l, am, bm, knum, kden, s)
            best = int64(-1)
            for idx in range(nsamples):
                meas = _measure_sample(avals, na, bvals, nb, r, svals, nsv, popular,
                                       s, _fold(h, uint64(idx)), 0, lo,
                                       remflag, colrem, cnt, rem_i, rem_j)
                if best < 0 or meas < best:
                    best = meas
            out_a[row] = am
            out_b[row] = bm
            out_m[row] = best
            row += 1
    return out_a[:row], out_b[:row], out_m[:row]


def sampled_sum_block(l, n, knum, kden, s, nsamples, seed):
    return _sampled_sum_block(l, n, knum, kden, s, nsamples,
                              uint64(seed & ((1 << 64) - 1)))


@njit(**_JIT)
def _sampled_diff_block(l, n, knum, kden, s, nsamples, seed):
    amasks = _line_a_masks(l, n)
    nbits = l + 1
    out_a = np.empty(amasks.size, dtype=np.int64)
    out_m = np.empty(amasks.size, dtype=np.int64)
    width_cap = 2 * l + 1
    avals = np.zeros(nbits, dtype=np.int64)
    bvals = np.zeros(nbits, dtype=np.int64)
    r = np.zeros(width_cap, dtype=np.int64)
    svals = np.zeros(width_cap, dtype=np.int64)
    popular = np.zeros(width_cap, dtype=np.int64)
    cnt = np.zeros(width_cap, dtype=np.int64)
    remflag = np.zeros(nbits * nbits, dtype=np.int64)
    colrem = np.zeros(nbits, dtype=np.int64)
    rem_i = np.zeros(max(s, 1) * nbits, dtype=np.int64)
    rem_j = np.zeros(max(s, 1) * nbits, dtype=np.int64)
    row = 0
    for i in range(amasks.size):
        am = amasks[i]
        if _mask_gcd(am, nbits) != 1:
            continue
        na = _fill_bits(am, nbits, avals)
        for q in range(na):
            bvals[q] = -avals[q]
        lo, _w, nsv = _line_tables(avals, na, bvals, na, knum, kden, r, svals, popular)
        h = _pair_seed(seed, TAG_LINE_DIFF, l, am, am, knum, kden, s)
        best = int64(-1)
        for idx in range(nsamples):
            meas = _measure_sample(avals, na, bvals, na, r, svals, nsv, popular,
                                   s, _fold(h, uint64(idx)), 0, lo,
                                   remflag, colrem, cnt, rem_i, rem_j)
            if best < 0 or meas < best:
                best = meas
        out_a[row] = am
        out_m[row] = best
        row += 1
    return out_a[:row], out_m[:row]


def sampled_diff_block(l, n, knum, kden, s, nsamples, seed):
    return _sampled_diff_block(l, n, knum, kden, s, nsamples,
                               uint64(seed & ((1 << 64) - 1)))


@njit(**_JIT)
def _kneser_theta_block(m, knum, kden, s, nsamples, seed):
    top = 1 << m
    cap = (top - 1) * (top - 1)
    out_a = np.empty(cap, dtype=np.int64)
    out_b = np.empty(cap, dtype=np.int64)
    out_m = np.empty(cap, dtype=np.int64)
    out_c = np.empty(cap, dtype=np.int64)
    avals = np.zeros(m, dtype=np.int64)
    bvals = np.zeros(m, dtype=np.int64)
    r = np.zeros(m, dtype=np.int64)
    svals = np.zeros(m, dtype=np.int64)
    popular = np.zeros(m, dtype=np.int64)
    cnt = np.zeros(m, dtype=np.int64)
    remflag = np.zeros(m * m, dtype=np.int64)
    colrem = np.zeros(m, dtype=np.int64)
    rem_i = np.zeros(max(s, 1) * m, dtype=np.int64)
    rem_j = np.zeros(max(s, 1) * m, dtype=np.int64)
    row = 0
    for am in range(1, top):
        na = _fill_bits(am, m, avals)
        for bm in range(1, top):
            nb = _fill_bits(bm, m, bvals)
            nsv = _cyc_tables(avals, na, bvals, nb, m, knum, kden, r, svals, popular)
            h = _pair_seed(seed, TAG_CYC_SUM, m, am, bm, knum, kden, s)
            best = int64(-1)
            checked = 0
            for idx in range(nsamples):
                meas = _measure_sample(avals, na, bvals, nb, r, svals, nsv, popular,
                                       s, _fold(h, uint64(idx)), m, 0,
                                       remflag, colrem, cnt, rem_i, rem_j)
                if meas < nsv:
                    checked += 1
                    if best < 0 or meas < best:
                        best = meas
            out_a[row] = am
            out_b[row] = bm
            out_m[row] = best
            out_c[row] = checked
            row += 1
    return out_a[:row], out_b[:row], out_m[:row], out_c[:row]


def kneser_theta_block(m, knum, kden, s, nsamples, seed):
    return _kneser_theta_block(m, knum, kden, s, nsamples,
                               uint64(seed & ((1 << 64) - 1)))


@njit(**_JIT)
def _kneser_diff_block(m, knum, kden, s, nsamples, seed):
    top = 1 << m
    out_a = np.empty(top - 1, dtype=np.int64)
    out_m = np.empty(top - 1, dtype=np.int64)
    out_c = np.empty(top - 1, dtype=np.int64)
    avals = np.zeros(m, dtype=np.int64)
    bvals = np.zeros(m, dtype=np.int64)
    r = np.zeros(m, dtype=np.int64)
    svals = np.zeros(m, dtype=np.int64)
    popular = np.zeros(m, dtype=np.int64)
    cnt = np.zeros(m, dtype=np.int64)
    remflag = np.zeros(m * m, dtype=np.int64)
    colrem = np.zeros(m, dtype=np.int64)
    rem_i = np.zeros(max(s, 1) * m, dtype=np.int64)
    rem_j = np.zeros(max(s, 1) * m, dtype=np.int64)
    row = 0
    for am in range(1, top):
        na = _fill_bits(am, m, avals)
        for q in range(na):
            bvals[q] = (m - avals[q]) % m
        nsv = _cyc_tables(avals, na, bvals, na, m, knum, kden, r, svals, popular)
        h = _pair_seed(seed, TAG_CYC_DIFF, m, am, am, knum, kden, s)
        best = int64(-1)
        checked = 0
        for idx in range(nsamples):
            meas = _measure_sample(avals, na, bvals, na, r, svals, nsv, popular,
                                   s, _fold(h, uint64(idx)), m, 0,
                                   remflag, colrem, cnt, rem_i, rem_j)
            if meas < nsv:
                checked += 1
                if best < 0 or meas < best:
                    best = meas
        out_a[row] = am
        out_m[row] = best
        out_c[row] = checked
        row += 1
    return out_a[:row], out_m[:row], out_c[:row]


def kneser_diff_block(m, knum, kden, s, nsamples, seed):
    return _kneser_diff_block(m, knum, kden, s, nsamples,
                              uint64(seed & ((1 << 64) - 1)))


@njit(**_JIT)
def _pollard_block(l, n):
    masks = _line_b_masks(l, n)
    nbits = l + 1
    cap = masks.size * masks.size * (n + 1)
    out_a = np.empty(cap, dtype=np.int64)
    out_b = np.empty(cap, dtype=np.int64)
    out_t = np.empty(cap, dtype=np.int64)
    out_m = np.empty(cap, dtype=np.int64)
    g = np.empty(masks.size, dtype=np.int64)
    for j in range(masks.size):
        g[j] = _mask_gcd(masks[j], nbits)
    avals = np.zeros(nbits, dtype=np.int64)
    bvals = np.zeros(nbits, dtype=np.int64)
    r = np.zeros(2 * l + 1, dtype=np.int64)
    row = 0
    for i in range(masks.size):
        am = masks[i]
        na = _fill_bits(am, nbits, avals)
        for j in range(masks.size):
            bm = masks[j]
            if (am | bm) >> l == 0 or _gcd(g[i], g[j]) != 1:
                continue
            nb = _fill_bits(bm, nbits, bvals)
            width = avals[na - 1] + bvals[nb - 1] + 1
            for x in range(width):
                r[x] = 0
            for p in range(na):
                for q in range(nb):
                    r[avals[p] + bvals[q]] += 1
            for t in range(n + 1):
                total = 0
                for x in range(width):
                    total += min(r[x], t)
                out_a[row] = am
                out_b[row] = bm
                out_t[row] = t
                out_m[row] = total
                row += 1
    return out_a[:row], out_b[:row], out_t[:row], out_m[:row]


def pollard_block(l, n):
    return _pollard_block(l, n)


@njit(**_JIT)
def _rot(mask, h, m):
    h %= m
    if h == 0:
        return mask
    return ((mask << h) | (mask >> (m - h))) & ((1 << m) - 1)


@njit(**_JIT)
def _kneser_theorem_scan(m):
    viol = 0
    top = 1 << m
    for sm in range(1, top):
        for tm in range(1, top):
            u = 0
            for p in range(m):
                if (sm >> p) & 1:
                    u |= _rot(tm, p, m)
            hcount = 0
            sh = 0
            th = 0
            for h in range(m):
                if _rot(u, h, m) == u:
                    hcount += 1
                    sh |= _rot(sm, h, m)
                    th |= _rot(tm, h, m)
            if _popcount(u) < _popcount(sh) + _popcount(th) - hcount:
                viol += 1
    return viol


def kneser_theorem_scan(m):
    return int(_kneser_theorem_scan(m))
