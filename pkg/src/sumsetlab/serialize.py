"""Input parsing and deterministic report emission.

Reports embed the tool version and the full parameter set; apart from the
``generated_at`` field they are byte-identical across reruns with the same
configuration, whatever the worker count. CSV reports carry the header as
``# key = value`` comment lines; JSON reports are a header line followed by
one JSON object per result (JSON lines).
"""

from __future__ import annotations

import datetime as _dt
import json
import sys
from fractions import Fraction
from typing import Iterable

from .continuous import IntervalUnion
from .core import IntSet
from .errors import InputFormatError
from .lab import BoundResult
from .relation import PairRelation

CSV_COLUMNS = "instance_key,measured,bound,slack,pass"


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def utc_now() -> str:
    return _dt.datetime.now(tz=_dt.timezone.utc).isoformat(timespec="seconds")


def load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputFormatError("(file)", str(exc))
    except json.JSONDecodeError as exc:
        raise InputFormatError("(file)", f"invalid JSON: {exc}")
    if not isinstance(data, dict):
        raise InputFormatError("(file)", "top-level value must be an object")
    return data


def parse_set(data: dict, field: str) -> IntSet:
    val = data.get(field)
    if not isinstance(val, list) or not all(isinstance(v, int) for v in val):
        raise InputFormatError(field, "expected a JSON array of integers")
    if not val:
        raise InputFormatError(field, "set must be nonempty")
    return IntSet(val)


def parse_relation(data: dict, na: int, nb: int, field: str = "gamma") -> PairRelation:
    val = data.get(field, "full")
    if val == "full":
        return PairRelation.full(na, nb)
    if not isinstance(val, list):
        raise InputFormatError(field, 'expected "full" or an array of [i, j] pairs')
    pairs = []
    for item in val:
        if (
            not isinstance(item, list)
            or len(item) != 2
            or not all(isinstance(v, int) for v in item)
        ):
            raise InputFormatError(field, "each excluded pair must be [i, j] integers")
        pairs.append((item[0], item[1]))
    try:
        return PairRelation.from_excluded(na, nb, pairs)
    except Exception as exc:
        raise InputFormatError(field, str(exc))


def parse_interval_union(data: dict, field: str) -> IntervalUnion:
    val = data.get(field)
    if not isinstance(val, list):
        raise InputFormatError(field, "expected an array of [numerator, denominator] pairs")
    for item in val:
        if (
            not isinstance(item, list)
            or len(item) != 2
            or not all(isinstance(v, int) for v in item)
            or item[1] == 0
        ):
            raise InputFormatError(field, "each endpoint must be [numerator, denominator]")
    try:
        return IntervalUnion.from_json(val)
    except ValueError as exc:
        raise InputFormatError(field, str(exc))


def _open_out(path: str):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w"), True


def _header_lines(meta: dict):
    for key in sorted(meta):
        yield f"# {key} = {meta[key]}"


def write_bound_report(path: str, fmt: str, meta: dict, results: Iterable[BoundResult]) -> int:
    """Emit a verification/search report; returns the number of rows written."""
    fh, close = _open_out(path)
    rows = 0
    try:
        if fmt == "csv":
            for line in _header_lines(meta):
                fh.write(line + "\n")
            fh.write(CSV_COLUMNS + "\n")
            for r in results:
                fh.write(
                    f"{r.key},{_fmt(r.measured)},{_fmt(r.bound)},"
                    f"{_fmt(r.slack)},{'true' if r.passed else 'false'}\n"
                )
                rows += 1
        else:
            fh.write(json.dumps({"header": meta}, sort_keys=True) + "\n")
            for r in results:
                fh.write(
                    json.dumps(
                        {
                            "instance_key": r.key,
                            "measured": float(_fmt(r.measured)),
                            "bound": float(_fmt(r.bound)),
                            "slack": float(_fmt(r.slack)),
                            "pass": r.passed,
                        },
                        sort_keys=True,
                    )
                    + "\n"
                )
                rows += 1
    finally:
        if close:
            fh.close()
    return rows


def write_json_doc(path: str, doc: dict) -> None:
    fh, close = _open_out(path)
    try:
        json.dump(doc, fh, sort_keys=True, indent=2, default=_json_default)
        fh.write("\n")
    finally:
        if close:
            fh.close()


def _json_default(obj):
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, IntSet):
        return list(obj.elements)
    raise TypeError(f"not JSON serializable: {type(obj)}")
