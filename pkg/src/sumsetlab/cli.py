"""Batch command-line front end.

Subcommands: ``sumset`` (statistics), ``recover`` (structure pipelines),
``verify`` (exhaustive/sampled bound verification), ``search`` (extremal
instances), ``gamma`` (relation builders). Exit status 0 on success, 1 on
malformed input, 2 when a verify run finds a bound violation (counterexample
records are persisted next to the report).

All randomness flows from the single --seed flag, which defaults to 0 and
never to entropy; identical configurations produce byte-identical reports
apart from the generated_at header field, for any worker count.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .errors import InputFormatError, SumsetLabError
from .lab import InstanceSpec, extremal_search, persist_counterexamples, run_verification, sample_regular_relation
from .rationals import frac_str, to_fraction
from .recovery import (
    gamma_from_pollard,
    gamma_from_popular,
    recover_additive,
    recover_centred,
    recover_difference,
    recover_positive_part,
)
from .serialize import (
    load_json,
    parse_interval_union,
    parse_relation,
    parse_set,
    utc_now,
    write_bound_report,
    write_json_doc,
)
from .sumset import pollard_partial_sum, popular_support, sumset_stats, triple_count
from .continuous import recover_interval


def _fractions_list(text: str):
    return tuple(to_fraction(part) for part in text.split(","))


def _ints_list(text: str):
    return tuple(int(part) for part in text.split(","))


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="sumsetlab", description=__doc__)
    top.add_argument("--version", action="version", version=f"sumsetlab {__version__}")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sumset", help="sumset statistics for a pair file")
    p.add_argument("--input", required=True)
    p.add_argument("--t", "--pollard-t", dest="t", type=int, default=None,
                   help="also report the Pollard partial sum at this t")
    p.add_argument("--k", dest="k", default=None,
                   help="also report the popular-sum count at this threshold")
    p.add_argument("--output", default="-")

    p = sub.add_parser("recover", help="run a structure-recovery pipeline")
    p.add_argument("kind", choices=["additive", "difference", "centred", "positive", "interval"])
    p.add_argument("--input", required=True)
    p.add_argument("--epsilon", required=True)
    p.add_argument("--eta", default=None)
    p.add_argument("--delta", default=None)
    p.add_argument("--output", default="-")

    p = sub.add_parser("verify", help="verify a proposition bound over an instance family")
    p.add_argument("--prop", required=True)
    p.add_argument("--lmax", type=int, required=True)
    p.add_argument("--lmin", type=int, default=1)
    p.add_argument("--nmin", type=int, default=None)
    p.add_argument("--nmax", type=int, default=None)
    p.add_argument("--k", default="2", help="comma list of K thresholds")
    p.add_argument("--s", default="0", help="comma list of defect caps")
    p.add_argument("--samples", type=int, default=256)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=500_000_000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--emit", choices=["all", "violations", "summary"], default="all")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output", default="-")

    p = sub.add_parser("search", help="rank instances by slack against a bound")
    p.add_argument("--prop", required=True)
    p.add_argument("--lmax", type=int, required=True)
    p.add_argument("--lmin", type=int, default=1)
    p.add_argument("--nmin", type=int, default=None)
    p.add_argument("--nmax", type=int, default=None)
    p.add_argument("--k", default="2")
    p.add_argument("--s", default="0")
    p.add_argument("--samples", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--top", type=int, default=16)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output", default="-")

    p = sub.add_parser("gamma", help="build a pair relation")
    p.add_argument("kind", choices=["from-pollard", "from-popular", "sample-regular"])
    p.add_argument("--input", required=True)
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--eta", default=None)
    p.add_argument("--k", default=None)
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default="-")
    return top


def _header(args: argparse.Namespace, skip=("output", "workers")) -> dict:
    # workers is excluded: it can never change the results, so it must not
    # change the report bytes either
    meta = {"tool": "sumsetlab", "version": __version__, "generated_at": utc_now()}
    for key, val in sorted(vars(args).items()):
        if key in skip or val is None:
            continue
        meta[key] = val
    return meta


def _cmd_sumset(args) -> int:
    data = load_json(args.input)
    a = parse_set(data, "A")
    b = parse_set(data, "B") if "B" in data else a
    stats = sumset_stats(a, b)
    count, c_ratio = triple_count(a)
    doc = {
        "header": _header(args),
        "complete_sumset": list(stats.sumset.elements),
        "complete_size": len(stats.sumset),
        "doubling": frac_str(stats.doubling),
        "rep_histogram": sorted([x, r] for x, r in stats.rep_histogram.items()),
        "triple_count": count,
        "c_ratio": frac_str(c_ratio),
    }
    if "gamma" in data:
        rel = parse_relation(data, len(a), len(b))
        from .sumset import restricted_sumset

        rs = restricted_sumset(a, b, rel)
        doc["restricted_sumset"] = list(rs.elements)
        doc["restricted_size"] = len(rs)
    if args.t is not None:
        doc["pollard_t"] = args.t
        doc["pollard_partial_sum"] = pollard_partial_sum(a, b, args.t)
    if args.k is not None:
        doc["popular_threshold"] = args.k
        doc["popular_support"] = popular_support(a, b, to_fraction(args.k))
    write_json_doc(args.output, doc)
    return 0


def _cmd_recover(args) -> int:
    data = load_json(args.input)
    eps = to_fraction(args.epsilon)
    if args.kind == "interval":
        if args.eta is None or args.delta is None:
            raise InputFormatError("eta/delta", "interval recovery needs --eta and --delta")
        a = parse_interval_union(data, "A")
        _j, report = recover_interval(a, eps, to_fraction(args.eta), to_fraction(args.delta))
        doc = {"header": _header(args), "report": report.to_json()}
    else:
        a = parse_set(data, "A")
        if args.kind == "additive":
            b = parse_set(data, "B")
            rel = parse_relation(data, len(a), len(b))
            report = recover_additive(a, b, rel, eps)
        elif args.kind == "difference":
            rel = parse_relation(data, len(a), len(a))
            report = recover_difference(a, rel, eps)
        elif args.kind == "positive":
            report = recover_positive_part(a, eps)
        else:
            report = recover_centred(a, eps)
        doc = {"header": _header(args), "report": report.to_json()}
    write_json_doc(args.output, doc)
    return 0


def _make_spec(args) -> InstanceSpec:
    return InstanceSpec(
        prop=args.prop,
        lmax=args.lmax,
        lmin=args.lmin,
        nmin=args.nmin,
        nmax=args.nmax,
        k_values=_fractions_list(args.k),
        s_values=_ints_list(args.s),
        samples=args.samples,
        seed=args.seed,
        max_instances=getattr(args, "budget", 500_000_000),
    )


def _cmd_verify(args) -> int:
    spec = _make_spec(args)
    run = run_verification(spec, workers=args.workers)
    summary = run.summary()
    meta = _header(args)
    meta.update({f"summary_{k}": v for k, v in summary.items()})
    if args.emit == "summary":
        results = iter(())
    elif args.emit == "violations":
        results = (r for r in run.results() if not r.passed)
    else:
        results = run.results()
    write_bound_report(args.output, args.format, meta, results)
    violations = run.violations()
    if violations:
        cex_dir = (
            os.path.dirname(os.path.abspath(args.output)) if args.output != "-" else "."
        )
        paths = persist_counterexamples(violations, cex_dir)
        print(
            f"verify: {len(violations)} bound violation(s); "
            f"counterexamples written to {len(paths)} file(s)",
            file=sys.stderr,
        )
        return 2
    return 0


def _cmd_search(args) -> int:
    spec = _make_spec(args)
    ranked = extremal_search(spec, budget=args.budget, top=args.top)
    meta = _header(args)
    write_bound_report(args.output, args.format, meta, iter(ranked))
    return 0


def _cmd_gamma(args) -> int:
    data = load_json(args.input)
    a = parse_set(data, "A")
    b = parse_set(data, "B") if "B" in data else a
    doc = {"header": _header(args), "na": len(a), "nb": len(b)}
    if args.kind == "from-pollard":
        if args.t is None:
            raise InputFormatError("t", "from-pollard needs --t")
        rel = gamma_from_pollard(a, b, args.t)
    elif args.kind == "from-popular":
        if args.eta is None:
            raise InputFormatError("eta", "from-popular needs --eta")
        rel, k = gamma_from_popular(a, b, to_fraction(args.eta))
        doc["K"] = frac_str(k)
    else:
        if args.k is None or args.s is None:
            raise InputFormatError("k/s", "sample-regular needs --k and --s")
        rel = sample_regular_relation(a, b, to_fraction(args.k), args.s, args.seed)
    doc["gamma"] = rel.to_json()
    doc["size"] = rel.size
    doc["max_defect"] = rel.max_defect
    write_json_doc(args.output, doc)
    return 0


_HANDLERS = {
    "sumset": _cmd_sumset,
    "recover": _cmd_recover,
    "verify": _cmd_verify,
    "search": _cmd_search,
    "gamma": _cmd_gamma,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except InputFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SumsetLabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
