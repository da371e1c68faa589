"""
JSON file formats. Every number is written as a rational string so files stay
exact; agents are 1-based on disk and 0-based in memory.

>>> parse_rational("0.25"), parse_rational("-3/6"), format_rational(Fraction(1, 4))
(Fraction(1, 4), Fraction(-1, 2), '1/4')
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

from onlinefd.core import (
    INF,
    Advice,
    Allocation,
    Factor,
    Frequency,
    Instance,
    NoAdvice,
    TotalIntervals,
    Totals,
)
from onlinefd.errors import IncompleteAllocation, InvalidAdvice, InvalidValue, ParseError
from onlinefd.fairness import format_factor

_FRACTION = re.compile(r"[+-]?\d+(/\d+)?")
_DECIMAL = re.compile(r"[+-]?(\d+\.\d*|\.\d+)")


def parse_rational(text) -> Fraction:
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"expected a rational string, got {text!r}")
    s = text.strip()
    if _FRACTION.fullmatch(s):
        if "/" in s and int(s.split("/")[1]) == 0:
            raise ParseError(f"zero denominator in {text!r}")
        return Fraction(s)
    if _DECIMAL.fullmatch(s):
        return Fraction(s)
    raise ParseError(f"not a rational literal: {text!r}")


def format_rational(v: Fraction) -> str:
    return str(Fraction(v))


def parse_factor(text: str) -> Optional[Factor]:
    if text == "inf":
        return INF
    if text == "skipped(budget)":
        return None
    return parse_rational(text)


# ------------------------------------------------------------------ advice


def advice_to_dict(advice: Advice) -> dict[str, Any]:
    if isinstance(advice, NoAdvice):
        return {"kind": "none"}
    if isinstance(advice, Totals):
        return {"kind": "totals", "values": [format_rational(t) for t in advice.totals]}
    if isinstance(advice, TotalIntervals):
        return {"kind": "intervals", "bounds": [[format_rational(lo), format_rational(hi)]
                                                for lo, hi in advice.bounds]}
    if isinstance(advice, Frequency):
        return {"kind": "frequency", "multisets": [[format_rational(v) for v in ms] for ms in advice.multisets]}
    raise InvalidAdvice(f"unknown advice object {advice!r}")


def advice_from_dict(data: dict[str, Any]) -> Advice:
    try:
        kind = data["kind"]
        if kind == "none":
            return NoAdvice()
        if kind == "totals":
            return Totals(tuple(parse_rational(v) for v in data["values"]))
        if kind == "intervals":
            return TotalIntervals(tuple((parse_rational(lo), parse_rational(hi)) for lo, hi in data["bounds"]))
        if kind == "frequency":
            return Frequency(tuple(tuple(parse_rational(v) for v in ms) for ms in data["multisets"]))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"malformed advice: {exc}") from exc
    raise ParseError(f"unknown advice kind {data.get('kind')!r}")


# ---------------------------------------------------------------- instance


def instance_to_dict(instance: Instance, advice: Optional[Advice] = None) -> dict[str, Any]:
    out: dict[str, Any] = {
        "n": instance.n,
        "goods": [{"id": gid, "values": [format_rational(v) for v in g]}
                  for gid, g in zip(instance.ids, instance.goods)],
    }
    if advice is not None:
        out["advice"] = advice_to_dict(advice)
    return out


def instance_from_dict(data: dict[str, Any]) -> tuple[Instance, Optional[Advice]]:
    try:
        n = data["n"]
        if not isinstance(n, int) or isinstance(n, bool):
            raise ParseError(f"'n' must be an integer, got {n!r}")
        goods = data["goods"]
        ids = tuple(str(g.get("id", f"g{t + 1}")) for t, g in enumerate(goods))
        vectors = []
        for g in goods:
            values = [parse_rational(v) for v in g["values"]]
            if len(values) != n:
                raise ParseError(f"good {g.get('id')!r} has {len(values)} values, expected {n}")
            vectors.append(tuple(values))
        instance = Instance(n, tuple(vectors), ids)
    except ParseError:
        raise
    except (KeyError, TypeError, AttributeError, InvalidValue) as exc:
        raise ParseError(f"malformed instance: {exc}") from exc
    advice = advice_from_dict(data["advice"]) if "advice" in data else None
    return instance, advice


def _read_json(path) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def load_instance(path) -> tuple[Instance, Optional[Advice]]:
    return instance_from_dict(_read_json(path))


def load_advice(path) -> Advice:
    data = _read_json(path)
    if not isinstance(data, dict):
        raise ParseError("advice file must hold a JSON object")
    return advice_from_dict(data.get("advice", data))


def dump_json(data: Any, path=None) -> str:
    text = json.dumps(data, indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


# -------------------------------------------------------------- allocation


def allocation_to_dict(instance: Instance, allocation: Allocation) -> dict[str, int]:
    return {gid: a + 1 for gid, a in zip(instance.ids, allocation.owner)}


def allocation_from_dict(instance: Instance, mapping: dict[str, Any]) -> Allocation:
    owner = []
    for gid in instance.ids:
        if gid not in mapping:
            raise IncompleteAllocation(f"good {gid!r} is not allocated")
        agent = mapping[gid]
        if not isinstance(agent, int) or not 1 <= agent <= instance.n:
            raise ParseError(f"good {gid!r}: agent must be an integer in 1..{instance.n}, got {agent!r}")
        owner.append(agent - 1)
    extra = set(mapping) - set(instance.ids)
    if extra:
        raise ParseError(f"allocation mentions unknown goods {sorted(extra)}")
    return Allocation(tuple(owner), instance.n)


def load_allocation(path, instance: Instance) -> Allocation:
    """Accepts a bare ``{id: agent}`` map, or any object with an ``allocation`` key (e.g. a report)."""
    data = _read_json(path)
    if not isinstance(data, dict):
        raise ParseError("allocation file must hold a JSON object")
    return allocation_from_dict(instance, data.get("allocation", data))


# ------------------------------------------------------------------ report


def build_report(instance: Instance, allocation: Allocation, report, *, algorithm: Optional[str] = None,
                 advice: Optional[Advice] = None, extra: Optional[dict[str, Any]] = None) -> dict[str, Any]:
    """Canonical report body; contains nothing that varies between identical runs."""
    out: dict[str, Any] = {}
    if algorithm is not None:
        out["algorithm"] = algorithm
    out["n"] = instance.n
    out["factors"] = {
        "ef1": format_factor(report.ef1),
        "efx": format_factor(report.efx),
        "prop1": format_factor(report.prop1),
        "mms": format_factor(report.mms),
    }
    out["allocation"] = allocation_to_dict(instance, allocation)
    out["transcript"] = [
        {"good": gid, "values": [format_rational(v) for v in g], "agent": a + 1}
        for gid, g, a in zip(instance.ids, instance.goods, allocation.owner)
    ]
    if advice is not None:
        out["advice"] = advice_to_dict(advice)
    if extra:
        out.update(extra)
    return out


def report_instance(data: dict[str, Any]) -> Instance:
    """Rebuild the instance recorded in a report's transcript."""
    rows = data["transcript"]
    return Instance(data["n"], tuple(tuple(parse_rational(v) for v in r["values"]) for r in rows),
                    tuple(r["good"] for r in rows))
