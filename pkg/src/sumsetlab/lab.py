"""Verification lab: enumerate families of instances, evaluate the relevant
lower bound on every one, stream per-instance results, and search for the
instances closest to the bounds.

Instances on the integer line are enumerated directly in normalized form
(minimum 0, gcd 1, endpoint membership), so translates and dilates are never
recounted; gcd filtering happens inside the enumeration kernels. Relation
space is sampled, never enumerated, with one deterministic stream per
(instance, sample index) so results are independent of worker count and
iteration order.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, List, Optional, Tuple

import numpy as np

from . import kernels
from .bounds import (
    VERIFIER_SLACK,
    kneser_diff_required,
    kneser_theta_required,
    pollard_required,
    prop_diff_required,
    prop_sum_required,
)
from .core import IntSet, values_from_mask
from .errors import BudgetExceeded, PreconditionViolated
from .kernels import ref as _refk
from .rationals import frac_str, to_fraction
from .relation import PairRelation
from .sumset import _rep_counts

PROPS = ("main-prop-a+b", "main-prop-a-a", "kneser-theta", "kneser-3", "pollard")


@dataclass(frozen=True)
class InstanceSpec:
    """What to enumerate: proposition, diameter/modulus range, cardinality
    window, K and s grids, relation-sampling policy, seed and budget.

    Leaving ``k_values`` unset sweeps the default grid {2, 3, ceil(n/4),
    ceil(n/2)} per cardinality on the integer line (so both branches of the
    two-case bounds get exercised) and {2, 3} on cyclic groups.
    """

    prop: str
    lmax: int
    lmin: int = 1
    nmin: Optional[int] = None
    nmax: Optional[int] = None
    k_values: Optional[Tuple[Fraction, ...]] = None
    s_values: Tuple[int, ...] = (0,)
    samples: int = 256
    seed: int = 0
    max_instances: int = 500_000_000

    def __post_init__(self):
        if self.k_values is not None:
            object.__setattr__(
                self, "k_values", tuple(to_fraction(k) for k in self.k_values)
            )
        object.__setattr__(self, "s_values", tuple(int(s) for s in self.s_values))

    @property
    def mode(self) -> str:
        return "cyclic" if self.prop.startswith("kneser") else "integer-line"

    def to_json(self) -> dict:
        return {
            "prop": self.prop,
            "lmax": self.lmax,
            "lmin": self.lmin,
            "nmin": self.nmin,
            "nmax": self.nmax,
            "k_values": None if self.k_values is None
            else [frac_str(k) for k in self.k_values],
            "s_values": list(self.s_values),
            "samples": self.samples,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class BoundResult:
    key: str
    measured: float
    bound: float
    slack: float
    passed: bool


def _validate(spec: InstanceSpec):
    if spec.prop not in PROPS:
        raise PreconditionViolated(f"unknown proposition id {spec.prop!r}")
    if spec.lmin < 1 or spec.lmax < spec.lmin:
        raise PreconditionViolated("need 1 <= lmin <= lmax")
    if any(s < 0 for s in spec.s_values):
        raise PreconditionViolated("s must be nonnegative")
    if spec.samples < 1:
        raise PreconditionViolated("samples must be >= 1")
    ks = spec.k_values or ()
    if spec.prop.startswith("main-prop") and any(k < 2 for k in ks):
        raise PreconditionViolated("the integer-line propositions need K >= 2")
    if spec.prop.startswith("kneser") and any(k < 0 for k in ks):
        raise PreconditionViolated("K must be nonnegative")


def _k_grid(spec: InstanceSpec, n: Optional[int]) -> Tuple[Fraction, ...]:
    if spec.k_values is not None:
        return spec.k_values
    if n is None:
        return (Fraction(2), Fraction(3))
    grid = {2, 3, max(2, -(-n // 4)), max(2, -(-n // 2))}
    return tuple(Fraction(k) for k in sorted(grid))


def _n_range(spec: InstanceSpec, l: int, floor: int):
    lo = max(floor, spec.nmin or floor)
    hi = min(l + 1, spec.nmax) if spec.nmax else l + 1
    return range(lo, hi + 1)


def _tasks(spec: InstanceSpec) -> List[tuple]:
    out = []
    if spec.prop in ("main-prop-a+b", "main-prop-a-a"):
        for l in range(spec.lmin, spec.lmax + 1):
            for n in _n_range(spec, l, 3):
                for k in _k_grid(spec, n):
                    for s in spec.s_values:
                        out.append((l, n, k, s))
    elif spec.prop in ("kneser-theta", "kneser-3"):
        for m in range(spec.lmin, spec.lmax + 1):
            for k in _k_grid(spec, None):
                for s in spec.s_values:
                    out.append((m, k, s))
    else:  # pollard
        for l in range(spec.lmin, spec.lmax + 1):
            for n in _n_range(spec, l, 1):
                out.append((l, n))
    return out


def _task_cost(spec: InstanceSpec, task: tuple) -> int:
    if spec.prop in ("main-prop-a+b", "main-prop-a-a"):
        l, n, _k, s = task
        pairs = math.comb(l - 1, n - 2)
        if spec.prop == "main-prop-a+b":
            pairs *= math.comb(l, n - 1)
        return pairs * (spec.samples if s > 0 else 1)
    if spec.prop in ("kneser-theta", "kneser-3"):
        m, _k, _s = task
        pairs = (1 << m) - 1
        if spec.prop == "kneser-theta":
            pairs *= (1 << m) - 1
        return pairs * spec.samples
    l, n = task
    return math.comb(l, n - 1) ** 2 * (n + 1)


@dataclass
class _Block:
    meta: dict
    arrays: dict = field(default_factory=dict)


def _run_block(spec: InstanceSpec, task: tuple) -> _Block:
    prop = spec.prop
    if prop == "main-prop-a+b":
        l, n, k, s = task
        if s == 0:
            am, bm, meas = kernels.full_sum_block(l, n)
        else:
            am, bm, meas = kernels.sampled_sum_block(
                l, n, k.numerator, k.denominator, s, spec.samples, spec.seed
            )
        req = np.full(meas.size, prop_sum_required(n, l, k, s))
        return _Block(
            meta={"prop": prop, "l": l, "n": n, "k": k, "s": s},
            arrays={"amask": am, "bmask": bm, "measured": meas, "required": req},
        )
    if prop == "main-prop-a-a":
        l, n, k, s = task
        if s == 0:
            am, meas = kernels.full_diff_block(l, n)
        else:
            am, meas = kernels.sampled_diff_block(
                l, n, k.numerator, k.denominator, s, spec.samples, spec.seed
            )
        req = np.full(meas.size, prop_diff_required(n, l, k, s))
        return _Block(
            meta={"prop": prop, "l": l, "n": n, "k": k, "s": s},
            arrays={"amask": am, "measured": meas, "required": req},
        )
    if prop == "kneser-theta":
        m, k, s = task
        am, bm, meas, checked = kernels.kneser_theta_block(
            m, k.numerator, k.denominator, s, spec.samples, spec.seed
        )
        na = np.bitwise_count(am.astype(np.uint64)).astype(np.int64)
        nb = np.bitwise_count(bm.astype(np.uint64)).astype(np.int64)
        nmin = np.minimum(na, nb)
        req = np.array([kneser_theta_required(int(v), k, s) for v in nmin])
        return _Block(
            meta={"prop": prop, "m": m, "k": k, "s": s},
            arrays={
                "amask": am, "bmask": bm, "measured": meas,
                "required": req, "checked": checked,
            },
        )
    if prop == "kneser-3":
        m, k, s = task
        am, meas, checked = kernels.kneser_diff_block(
            m, k.numerator, k.denominator, s, spec.samples, spec.seed
        )
        na = np.bitwise_count(am.astype(np.uint64)).astype(np.int64)
        req = np.array([kneser_diff_required(int(v), k, s) for v in na])
        return _Block(
            meta={"prop": prop, "m": m, "k": k, "s": s},
            arrays={"amask": am, "measured": meas, "required": req, "checked": checked},
        )
    # pollard
    l, n = task
    am, bm, tv, meas = kernels.pollard_block(l, n)
    req = np.array([pollard_required(n, int(t)) for t in tv])
    return _Block(
        meta={"prop": prop, "l": l, "n": n},
        arrays={"amask": am, "bmask": bm, "t": tv, "measured": meas, "required": req},
    )


def _mask_csv(mask: int) -> str:
    return ",".join(map(str, values_from_mask(int(mask)).tolist()))


def _row_key(spec: InstanceSpec, meta: dict, arrays: dict, i: int) -> str:
    parts = []
    if "l" in meta:
        parts.append(f"l={meta['l']}")
    if "m" in meta:
        parts.append(f"m={meta['m']}")
    if "n" in meta:
        parts.append(f"n={meta['n']}")
    if "k" in meta:
        parts.append(f"K={frac_str(meta['k'])};s={meta['s']}")
    parts.append(f"A={_mask_csv(arrays['amask'][i])}")
    if "bmask" in arrays:
        parts.append(f"B={_mask_csv(arrays['bmask'][i])}")
    if "t" in arrays:
        parts.append(f"t={int(arrays['t'][i])}")
    if meta.get("s", 0) or spec.prop.startswith("kneser"):
        parts.append(f"samples={spec.samples};seed={spec.seed}")
    return ";".join(parts)


class VerifyRun:
    """Result of one verification sweep: per-block arrays plus accessors."""

    def __init__(self, spec: InstanceSpec, blocks: List[_Block]):
        self.spec = spec
        self.blocks = blocks
        for blk in blocks:
            a = blk.arrays
            slack = a["measured"] - a["required"]
            ok = slack >= -VERIFIER_SLACK
            if "checked" in a:
                active = a["checked"] > 0
                ok = ok | ~active
                a["active"] = active
            else:
                a["active"] = np.ones(a["measured"].size, dtype=bool)
            a["slack"] = slack
            a["passed"] = ok

    def results(self) -> Iterator[BoundResult]:
        """One BoundResult per evaluated instance, in canonical order.

        Instances whose hypothesis filter never fired (cyclic families where
        every sample had the full sumset) are skipped, not emitted.
        """
        for blk in self.blocks:
            a = blk.arrays
            idx = np.nonzero(a["active"])[0]
            for i in idx.tolist():
                yield BoundResult(
                    key=_row_key(self.spec, blk.meta, a, i),
                    measured=float(a["measured"][i]),
                    bound=float(a["required"][i]),
                    slack=float(a["slack"][i]),
                    passed=bool(a["passed"][i]),
                )

    def violations(self) -> List[dict]:
        out = []
        for blk in self.blocks:
            a = blk.arrays
            bad = np.nonzero(~a["passed"])[0]
            for i in bad.tolist():
                rec = {
                    "key": _row_key(self.spec, blk.meta, a, i),
                    "prop": self.spec.prop,
                    "measured": float(a["measured"][i]),
                    "bound": float(a["required"][i]),
                    "slack": float(a["slack"][i]),
                    "A": values_from_mask(int(a["amask"][i])).tolist(),
                    "seed": self.spec.seed,
                    "samples": self.spec.samples,
                }
                rec.update({k: (frac_str(v) if isinstance(v, Fraction) else v)
                            for k, v in blk.meta.items()})
                if "bmask" in a:
                    rec["B"] = values_from_mask(int(a["bmask"][i])).tolist()
                if "t" in a:
                    rec["t"] = int(a["t"][i])
                out.append(rec)
        return out

    def summary(self) -> dict:
        rows = checked = violations = skipped = 0
        best = None
        for blk in self.blocks:
            a = blk.arrays
            active = a["active"]
            rows += int(a["measured"].size)
            checked += int(active.sum())
            skipped += int((~active).sum())
            violations += int((~a["passed"]).sum())
            if active.any():
                sl = np.where(active, a["slack"], np.inf)
                i = int(np.argmin(sl))
                if best is None or sl[i] < best[0]:
                    best = (float(sl[i]), _row_key(self.spec, blk.meta, a, i))
        return {
            "prop": self.spec.prop,
            "rows": rows,
            "checked": checked,
            "skipped": skipped,
            "violations": violations,
            "min_slack": best[0] if best else None,
            "min_slack_key": best[1] if best else None,
        }


def run_verification(
    spec: InstanceSpec, workers: int = 1, counterexample_dir: Optional[str] = None
) -> VerifyRun:
    """Evaluate the proposition bound on every instance in the spec's ranges."""
    _validate(spec)
    tasks = _tasks(spec)
    cost = sum(_task_cost(spec, t) for t in tasks)
    if cost > spec.max_instances:
        raise BudgetExceeded(
            f"{cost} instances exceed the budget of {spec.max_instances}"
        )
    if workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(lambda t: _run_block(spec, t), tasks))
    else:
        blocks = [_run_block(spec, t) for t in tasks]
    run = VerifyRun(spec, blocks)
    if counterexample_dir is not None:
        persist_counterexamples(run.violations(), counterexample_dir)
    return run


def enumerate_and_verify(spec: InstanceSpec, workers: int = 1) -> Iterator[BoundResult]:
    return run_verification(spec, workers=workers).results()


def persist_counterexamples(violations: List[dict], directory: str, limit: int = 100) -> List[str]:
    """Write each violation as a standalone JSON record; returns the paths."""
    paths = []
    if not violations:
        return paths
    os.makedirs(directory, exist_ok=True)
    for i, rec in enumerate(violations[:limit]):
        path = os.path.join(directory, f"counterexample-{i:04d}.json")
        with open(path, "w") as fh:
            json.dump(rec, fh, sort_keys=True, indent=2)
            fh.write("\n")
        paths.append(path)
    return paths


# -- relation sampling (API twin of the kernel sampler) -----------------------


def pair_seed(seed: int, tag: int, l: int, amask: int, bmask: int, k: Fraction, s: int) -> int:
    """The per-instance stream seed used by the block kernels."""
    h = _refk.fold_seed(seed, tag)
    for v in (l, amask, bmask, k.numerator, k.denominator, s):
        h = _refk.fold_seed(h, v)
    return h


def sample_regular_relation(a: IntSet, b: IntSet, k, s: int, seed: int) -> PairRelation:
    """Draw a relation that is (K, s')-regular for some s' <= s, deterministically.

    Removal pass: s uniform column draws per row, honoring a per-column cap of
    s; then every sum with at least K representations that lost all of its
    pairs gets its lexicographically smallest representing pair back. The
    stream matches the enumeration kernels: seeding with their per-instance
    seed reproduces their sample exactly.
    """
    k = to_fraction(k)
    na, nb = len(a), len(b)
    if s < 0 or s > min(na, nb):
        raise PreconditionViolated("need 0 <= s <= min(|A|, |B|)")
    state = seed & ((1 << 64) - 1)
    removed = set()
    colrem = [0] * nb
    for i in range(na):
        for _ in range(s):
            state, v = _refk.stream_next(state)
            j = v % nb
            if (i, j) not in removed and colrem[j] < s:
                removed.add((i, j))
                colrem[j] += 1
    if removed:
        offset, step, counts = _rep_counts(a, b)
        exc = {}
        for (i, j) in removed:
            x = a.elements[i] + b.elements[j]
            exc[x] = exc.get(x, 0) + 1
        bpos = {v: j for j, v in enumerate(b.elements)}
        for x in sorted(exc):
            r = int(counts[(x - offset) // step])
            if exc[x] == r and Fraction(r) >= k:
                for i, u in enumerate(a.elements):
                    j = bpos.get(x - u)
                    if j is not None and (i, j) in removed:
                        removed.discard((i, j))
                        break
    return PairRelation.from_excluded(na, nb, sorted(removed))


# -- extremal search ----------------------------------------------------------


def extremal_search(spec: InstanceSpec, budget: int, top: int = 16) -> List[BoundResult]:
    """Minimum-slack instances: exhaustive when the spec fits the budget,
    otherwise a seeded random walk over the instance space. Deterministic in
    (spec, budget, seed); result sorted ascending by slack."""
    _validate(spec)
    if budget <= 0:
        raise PreconditionViolated("budget must be > 0")
    tasks = _tasks(spec)
    rows_estimate = sum(
        _task_cost(spec, t) // (spec.samples if spec.prop.startswith("kneser") or
                                (len(t) == 4 and t[3] > 0) else 1)
        for t in tasks
    )
    if rows_estimate <= budget:
        run = run_verification(spec)
        ranked = []
        for bi, blk in enumerate(run.blocks):
            a = blk.arrays
            idx = np.nonzero(a["active"])[0]
            for i in idx.tolist():
                ranked.append((float(a["slack"][i]), bi, i))
        ranked.sort(key=lambda r: (r[0], r[1], r[2]))
        out = []
        for slack, bi, i in ranked[:top]:
            blk = run.blocks[bi]
            a = blk.arrays
            out.append(BoundResult(
                key=_row_key(spec, blk.meta, a, i),
                measured=float(a["measured"][i]),
                bound=float(a["required"][i]),
                slack=float(a["slack"][i]),
                passed=bool(a["passed"][i]),
            ))
        return out
    return _random_search(spec, budget, top)


def _draw_kmask(state: int, bits: int, k: int):
    mask = 0
    need = k
    while need:
        state, v = _refk.stream_next(state)
        p = v % bits
        if not (mask >> p) & 1:
            mask |= 1 << p
            need -= 1
    return state, mask


def _random_search(spec: InstanceSpec, budget: int, top: int) -> List[BoundResult]:
    state = _refk.fold_seed(spec.seed, 0xEC)
    found: List[Tuple[float, int, BoundResult]] = []
    order = 0
    for _ in range(budget):
        state, v = _refk.stream_next(state)
        l = spec.lmin + v % (spec.lmax - spec.lmin + 1)
        res = None
        if spec.prop in ("main-prop-a+b", "main-prop-a-a"):
            floor = 3
            ns = list(_n_range(spec, l, floor))
            if not ns:
                continue
            state, v = _refk.stream_next(state)
            n = ns[v % len(ns)]
            ks = _k_grid(spec, n)
            state, k_i = _refk.stream_next(state)
            k = ks[k_i % len(ks)]
            state, s_i = _refk.stream_next(state)
            s = spec.s_values[s_i % len(spec.s_values)]
            if n - 2 > l - 1:
                continue
            state, mid = _draw_kmask(state, max(l - 1, 1), n - 2) if n > 2 else (state, 0)
            am = 1 | (mid << 1) | (1 << l)
            if spec.prop == "main-prop-a+b":
                if n - 1 > l:
                    continue
                state, midb = _draw_kmask(state, l, n - 1)
                bm = 1 | (midb << 1)
                if math.gcd(_refk._mask_gcd(am), _refk._mask_gcd(bm)) != 1:
                    continue
                avals, bvals = _refk._bits(am), _refk._bits(bm)
                inst = pair_seed(spec.seed, kernels.TAG_LINE_SUM, l, am, bm, k, s)
                meas = min(
                    kernels.sampled_restricted_size(
                        avals, bvals, k.numerator, k.denominator, s,
                        _refk.fold_seed(inst, t), 0)
                    for t in range(spec.samples if s else 1)
                )
                req = prop_sum_required(n, l, k, s)
                key = (f"l={l};n={n};K={frac_str(k)};s={s};"
                       f"A={_mask_csv(am)};B={_mask_csv(bm)}")
            else:
                if _refk._mask_gcd(am) != 1:
                    continue
                avals = _refk._bits(am)
                bvals = [-u for u in avals]
                inst = pair_seed(spec.seed, kernels.TAG_LINE_DIFF, l, am, am, k, s)
                meas = min(
                    kernels.sampled_restricted_size(
                        avals, bvals, k.numerator, k.denominator, s,
                        _refk.fold_seed(inst, t), 0)
                    for t in range(spec.samples if s else 1)
                )
                req = prop_diff_required(n, l, k, s)
                key = f"l={l};n={n};K={frac_str(k)};s={s};A={_mask_csv(am)}"
            res = BoundResult(key, float(meas), float(req),
                              float(meas - req), meas - req >= -VERIFIER_SLACK)
        elif spec.prop == "pollard":
            ns = list(_n_range(spec, l, 1))
            if not ns:
                continue
            state, v = _refk.stream_next(state)
            n = ns[v % len(ns)]
            if n - 1 > l:
                continue
            state, mida = _draw_kmask(state, l, n - 1)
            state, midb = _draw_kmask(state, l, n - 1)
            am, bm = 1 | (mida << 1), 1 | (midb << 1)
            if (am | bm) >> l == 0:
                continue
            if math.gcd(_refk._mask_gcd(am), _refk._mask_gcd(bm)) != 1:
                continue
            state, v = _refk.stream_next(state)
            t = v % (n + 1)
            avals, bvals = _refk._bits(am), _refk._bits(bm)
            lo, r, svals, _ = _refk._line_tables(avals, bvals, 1, 1)
            meas = sum(min(r[x], t) for x in svals)
            req = pollard_required(n, t)
            key = f"l={l};n={n};A={_mask_csv(am)};B={_mask_csv(bm)};t={t}"
            res = BoundResult(key, float(meas), float(req),
                              float(meas - req), meas - req >= -VERIFIER_SLACK)
        else:
            m = l
            state, va = _refk.stream_next(state)
            am = 1 + va % ((1 << m) - 1)
            ks = _k_grid(spec, None)
            state, k_i = _refk.stream_next(state)
            k = ks[k_i % len(ks)]
            state, s_i = _refk.stream_next(state)
            s = spec.s_values[s_i % len(spec.s_values)]
            avals = _refk._bits(am)
            if spec.prop == "kneser-theta":
                state, vb = _refk.stream_next(state)
                bm = 1 + vb % ((1 << m) - 1)
                bvals = _refk._bits(bm)
                tag = kernels.TAG_CYC_SUM
                req_fn = kneser_theta_required
                nval = min(len(avals), len(bvals))
                key = (f"m={m};K={frac_str(k)};s={s};"
                       f"A={_mask_csv(am)};B={_mask_csv(bm)}")
            else:
                bm = am
                bvals = [(m - u) % m for u in avals]
                tag = kernels.TAG_CYC_DIFF
                req_fn = kneser_diff_required
                nval = len(avals)
                key = f"m={m};K={frac_str(k)};s={s};A={_mask_csv(am)}"
            r, svals, _pop = _refk._cyc_tables(avals, bvals, m, k.numerator, k.denominator)
            complete = len(svals)
            inst = pair_seed(spec.seed, tag, m, am, bm, k, s)
            best = None
            for t in range(spec.samples):
                meas = kernels.sampled_restricted_size(
                    avals, bvals, k.numerator, k.denominator, s,
                    _refk.fold_seed(inst, t), m)
                if meas < complete and (best is None or meas < best):
                    best = meas
            if best is None:
                continue
            req = req_fn(nval, k, s)
            res = BoundResult(key, float(best), float(req),
                              float(best - req), best - req >= -VERIFIER_SLACK)
        if res is not None:
            found.append((res.slack, order, res))
            order += 1
            found.sort(key=lambda r: (r[0], r[1]))
            del found[top:]
    return [r for _, _, r in found]
