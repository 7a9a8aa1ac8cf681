"""Hot enumeration kernels, with two interchangeable backends.

`jit` carries the numba-compiled loops used for production runs; `ref` is the
pure numpy/python twin with identical semantics (same enumeration order, same
pseudo-random streams, same outputs), kept both as a fallback and as an oracle
for cross-checking. Set SUMSETLAB_PURE=1 to force the reference backend; it is
also selected automatically when numba is not importable.

Backend API (identical in both modules):

- fold_seed(h, v)              one seed-folding step (splitmix-style)
- stream_next(state)           (state', value) for the sample stream
- selftest_stream(seed, count) first `count` stream values, for cross-checks
- full_sum_block(l, n)
- full_diff_block(l, n)
- sampled_sum_block(l, n, knum, kden, s, samples, seed)
- sampled_diff_block(l, n, knum, kden, s, samples, seed)
- sampled_restricted_size(avals, bvals, knum, kden, s, inst_seed, modulus)
- kneser_theta_block(m, knum, kden, s, samples, seed)
- kneser_diff_block(m, knum, kden, s, samples, seed)
- pollard_block(l, n)
- kneser_theorem_scan(m)
"""

import os

_PURE = os.environ.get("SUMSETLAB_PURE", "").strip() not in ("", "0")

if _PURE:
    from . import ref as impl

    BACKEND = "ref"
else:
    try:
        from . import jit as impl

        BACKEND = "jit"
    except ImportError:
        from . import ref as impl

        BACKEND = "ref"

TAG_LINE_SUM = 1
TAG_LINE_DIFF = 2
TAG_CYC_SUM = 3
TAG_CYC_DIFF = 4

fold_seed = impl.fold_seed
stream_next = impl.stream_next
selftest_stream = impl.selftest_stream
full_sum_block = impl.full_sum_block
full_diff_block = impl.full_diff_block
sampled_sum_block = impl.sampled_sum_block
sampled_diff_block = impl.sampled_diff_block
sampled_restricted_size = impl.sampled_restricted_size
kneser_theta_block = impl.kneser_theta_block
kneser_diff_block = impl.kneser_diff_block
pollard_block = impl.pollard_block
kneser_theorem_scan = impl.kneser_theorem_scan
