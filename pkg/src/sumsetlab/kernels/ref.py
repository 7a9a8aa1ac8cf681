"""Reference backend: pure numpy/python implementations of the hot kernels.

These are the semantics of record. The numba backend in `jit` must reproduce
every output array bit for bit (and is tested to); keep the two in lockstep
when editing. Full-relation blocks are vectorized over bitmask arrays; sampled
blocks are plain loops and are only meant for small ranges, cross-checks and
the backend benchmark.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

_M64 = (1 << 64) - 1
_GOLD = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

# seed-fold tags; one per instance family so streams never collide
TAG_LINE_SUM = 1
TAG_LINE_DIFF = 2
TAG_CYC_SUM = 3
TAG_CYC_DIFF = 4


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * _MIX1) & _M64
    z = ((z ^ (z >> 27)) * _MIX2) & _M64
    return z ^ (z >> 31)


def fold_seed(h: int, v: int) -> int:
    return _mix(((h ^ (v & _M64)) + _GOLD) & _M64)


def stream_next(state: int):
    state = (state + _GOLD) & _M64
    return state, _mix(state)


def selftest_stream(seed: int, count: int) -> np.ndarray:
    out = np.empty(count, dtype=np.uint64)
    state = seed & _M64
    for i in range(count):
        state, v = stream_next(state)
        out[i] = v
    return out


# -- mask enumeration --------------------------------------------------------


def _kmasks(bits: int, k: int):
    """All masks over `bits` positions with popcount k, ascending."""
    if k == 0:
        return [0]
    if k < 0 or k > bits:
        return []
    masks = [sum(1 << p for p in comb) for comb in itertools.combinations(range(bits), k)]
    masks.sort()
    return masks


def line_a_masks(l: int, n: int):
    """Subsets of {0..l} of size n containing 0 and l, ascending masks."""
    return [1 | (mid << 1) | (1 << l) for mid in _kmasks(l - 1, n - 2)]


def line_b_masks(l: int, n: int):
    """Subsets of {0..l} of size n containing 0, ascending masks."""
    return [1 | (mid << 1) for mid in _kmasks(l, n - 1)]


def _mask_gcd(mask: int) -> int:
    g = 0
    while mask:
        g = math.gcd(g, (mask & -mask).bit_length() - 1)
        mask &= mask - 1
    return g


def _bits(mask: int):
    out = []
    while mask:
        out.append((mask & -mask).bit_length() - 1)
        mask &= mask - 1
    return out


# -- full-relation blocks ----------------------------------------------------


def full_sum_block(l: int, n: int):
    """All gcd-normalized pairs at (l, n) with the full relation; measured = |A+B|."""
    amasks = line_a_masks(l, n)
    blist = line_b_masks(l, n)
    bm = np.array(blist, dtype=np.int64)
    gb = np.array([_mask_gcd(x) for x in blist], dtype=np.int64)
    out_a, out_b, out_m = [], [], []
    for am in amasks:
        ga = _mask_gcd(am)
        sel = np.gcd(ga, gb) == 1
        if not sel.any():
            continue
        bsel = bm[sel]
        acc = np.zeros(bsel.size, dtype=np.int64)
        for p in _bits(am):
            acc |= bsel << p
        out_a.append(np.full(bsel.size, am, dtype=np.int64))
        out_b.append(bsel)
        out_m.append(np.bitwise_count(acc).astype(np.int64))
    if not out_a:
        z = np.empty(0, dtype=np.int64)
        return z, z.copy(), z.copy()
    return np.concatenate(out_a), np.concatenate(out_b), np.concatenate(out_m)


def full_diff_block(l: int, n: int):
    """All gcd-normalized A at (l, n) with the full relation; measured = |A-A|."""
    out_a, out_m = [], []
    for am in line_a_masks(l, n):
        if _mask_gcd(am) != 1:
            continue
        d = 0
        for q in _bits(am):
            d |= am << (l - q)
        out_a.append(am)
        out_m.append(int(d).bit_count())
    return np.array(out_a, dtype=np.int64), np.array(out_m, dtype=np.int64)


# -- sampled relations -------------------------------------------------------


def _measure_sample(avals, bvals, r, svals, popular, s, inst, modulus, lo):
    """Size of the restricted sumset for one sampled relation.

    Removal pass: s uniform column draws per row, honoring the per-column cap;
    a popular sum whose representations were all removed counts as re-inserted.
    """
    na, nb = len(avals), len(bvals)
    state = inst
    removed = set()
    colrem = [0] * nb
    cnt = {}
    for i in range(na):
        for _ in range(s):
            state, v = stream_next(state)
            j = v % nb
            key = i * nb + j
            if key not in removed and colrem[j] < s:
                removed.add(key)
                colrem[j] += 1
                x = avals[i] + bvals[j]
                x = x % modulus if modulus else x - lo
                cnt[x] = cnt.get(x, 0) + 1
    measured = 0
    for x in svals:
        if cnt.get(x, 0) < r[x] or popular[x]:
            measured += 1
    return measured


def _line_tables(avals, bvals, knum, kden):
    lo = avals[0] + min(bvals)
    width = avals[-1] + max(bvals) - lo + 1
    r = [0] * width
    for a in avals:
        for b in bvals:
            r[a + b - lo] += 1
    svals = [x for x in range(width) if r[x] > 0]
    popular = [r[x] * kden >= knum for x in range(width)]
    return lo, r, svals, popular


def _cyc_tables(avals, bvals, m, knum, kden):
    r = [0] * m
    for a in avals:
        for b in bvals:
            r[(a + b) % m] += 1
    svals = [x for x in range(m) if r[x] > 0]
    popular = [r[x] * kden >= knum for x in range(m)]
    return r, svals, popular


def sampled_restricted_size(avals, bvals, knum, kden, s, inst_seed, modulus):
    """One sampled relation, returning |A +_G B| (modulus 0 means the integer line)."""
    avals = [int(v) for v in avals]
    bvals = [int(v) for v in bvals]
    if modulus:
        r, svals, popular = _cyc_tables(avals, bvals, modulus, knum, kden)
        lo = 0
    else:
        lo, r, svals, popular = _line_tables(avals, bvals, knum, kden)
    return _measure_sample(avals, bvals, r, svals, popular, s, inst_seed & _M64, modulus, lo)


def _pair_seed(seed, tag, l, amask, bmask, knum, kden, s):
    h = fold_seed(seed & _M64, tag)
    for v in (l, amask, bmask, knum, kden, s):
        h = fold_seed(h, v)
    return h


def sampled_sum_block(l, n, knum, kden, s, nsamples, seed):
    """Minimum |A +_G B| over seeded samples, per gcd-normalized pair."""
    blist = line_b_masks(l, n)
    gb = [_mask_gcd(x) for x in blist]
    out_a, out_b, out_m = [], [], []
    for am in line_a_masks(l, n):
        ga = _mask_gcd(am)
        avals = _bits(am)
        for bm, g in zip(blist, gb):
            if math.gcd(ga, g) != 1:
                continue
            bvals = _bits(bm)
            lo, r, svals, popular = _line_tables(avals, bvals, knum, kden)
            h = _pair_seed(seed, TAG_LINE_SUM, l, am, bm, knum, kden, s)
            best = -1
            for idx in range(nsamples):
                meas = _measure_sample(
                    avals, bvals, r, svals, popular, s, fold_seed(h, idx), 0, lo
                )
                if best < 0 or meas < best:
                    best = meas
            out_a.append(am)
            out_b.append(bm)
            out_m.append(best)
    return (
        np.array(out_a, dtype=np.int64),
        np.array(out_b, dtype=np.int64),
        np.array(out_m, dtype=np.int64),
    )


def sampled_diff_block(l, n, knum, kden, s, nsamples, seed):
    """Minimum |A -_G A| over seeded samples, per gcd-normalized A."""
    out_a, out_m = [], []
    for am in line_a_masks(l, n):
        if _mask_gcd(am) != 1:
            continue
        avals = _bits(am)
        bvals = [-v for v in avals]
        lo, r, svals, popular = _line_tables(avals, bvals, knum, kden)
        h = _pair_seed(seed, TAG_LINE_DIFF, l, am, am, knum, kden, s)
        best = -1
        for idx in range(nsamples):
            meas = _measure_sample(
                avals, bvals, r, svals, popular, s, fold_seed(h, idx), 0, lo
            )
            if best < 0 or meas < best:
                best = meas
        out_a.append(am)
        out_m.append(best)
    return np.array(out_a, dtype=np.int64), np.array(out_m, dtype=np.int64)


def kneser_theta_block(m, knum, kden, s, nsamples, seed):
    """Cyclic pairs; minimum restricted size among samples with A+_GB != A+B."""
    out_a, out_b, out_m, out_c = [], [], [], []
    top = 1 << m
    for am in range(1, top):
        avals = _bits(am)
        for bm in range(1, top):
            bvals = _bits(bm)
            r, svals, popular = _cyc_tables(avals, bvals, m, knum, kden)
            complete = len(svals)
            h = _pair_seed(seed, TAG_CYC_SUM, m, am, bm, knum, kden, s)
            best, checked = -1, 0
            for idx in range(nsamples):
                meas = _measure_sample(
                    avals, bvals, r, svals, popular, s, fold_seed(h, idx), m, 0
                )
                if meas < complete:
                    checked += 1
                    if best < 0 or meas < best:
                        best = meas
            out_a.append(am)
            out_b.append(bm)
            out_m.append(best)
            out_c.append(checked)
    return (
        np.array(out_a, dtype=np.int64),
        np.array(out_b, dtype=np.int64),
        np.array(out_m, dtype=np.int64),
        np.array(out_c, dtype=np.int64),
    )


def kneser_diff_block(m, knum, kden, s, nsamples, seed):
    """Cyclic difference relations over A x A; same hypothesis filter."""
    out_a, out_m, out_c = [], [], []
    top = 1 << m
    for am in range(1, top):
        avals = _bits(am)
        bvals = [(m - v) % m for v in avals]
        r, svals, popular = _cyc_tables(avals, bvals, m, knum, kden)
        complete = len(svals)
        h = _pair_seed(seed, TAG_CYC_DIFF, m, am, am, knum, kden, s)
        best, checked = -1, 0
        for idx in range(nsamples):
            meas = _measure_sample(
                avals, bvals, r, svals, popular, s, fold_seed(h, idx), m, 0
            )
            if meas < complete:
                checked += 1
                if best < 0 or meas < best:
                    best = meas
        out_a.append(am)
        out_m.append(best)
        out_c.append(checked)
    return (
        np.array(out_a, dtype=np.int64),
        np.array(out_m, dtype=np.int64),
        np.array(out_c, dtype=np.int64),
    )


def pollard_block(l: int, n: int):
    """Partial sums sum_x min(r(x), t) for all normalized pairs and 0 <= t <= n."""
    blist = line_b_masks(l, n)
    gb = [_mask_gcd(x) for x in blist]
    out_a, out_b, out_t, out_m = [], [], [], []
    for am in line_b_masks(l, n):  # 0 in A, size n; top element enforced pairwise
        ga = _mask_gcd(am)
        avals = _bits(am)
        for bm, g in zip(blist, gb):
            if (am | bm) >> l == 0 or math.gcd(ga, g) != 1:
                continue
            bvals = _bits(bm)
            lo, r, svals, _pop = _line_tables(avals, bvals, 1, 1)
            for t in range(n + 1):
                out_a.append(am)
                out_b.append(bm)
                out_t.append(t)
                out_m.append(sum(min(r[x], t) for x in svals))
    return (
        np.array(out_a, dtype=np.int64),
        np.array(out_b, dtype=np.int64),
        np.array(out_t, dtype=np.int64),
        np.array(out_m, dtype=np.int64),
    )


# -- subgroup sanity scan ----------------------------------------------------


def _rot(mask: int, h: int, m: int) -> int:
    h %= m
    if not h:
        return mask
    return ((mask << h) | (mask >> (m - h))) & ((1 << m) - 1)


def kneser_theorem_scan(m: int) -> int:
    """Violations of |S+T| >= |S+H| + |T+H| - |H| over all nonempty S, T in Z/mZ.

    Any nonzero return is an implementation bug, not mathematics.
    """
    viol = 0
    top = 1 << m
    for sm in range(1, top):
        sbits = _bits(sm)
        for tm in range(1, top):
            u = 0
            for p in sbits:
                u |= _rot(tm, p, m)
            hs = [h for h in range(m) if _rot(u, h, m) == u]
            sh = 0
            th = 0
            for h in hs:
                sh |= _rot(sm, h, m)
                th |= _rot(tm, h, m)
            if u.bit_count() < sh.bit_count() + th.bit_count() - len(hs):
                viol += 1
    return viol
