"""
Exact fairness factors for EF1, EFX, PROP1 and MMS.

Each checker returns the largest ``alpha`` for which the allocation is
alpha-fair, as a Fraction, or ``INF`` when every constraint is vacuous.
A factor of at least 1 means the property holds exactly.

>>> from onlinefd.core import Instance, Allocation
>>> inst = Instance.identical(2, [1, 1, 4])
>>> ef1_factor(inst, Allocation((0, 1, 1), 2))
Fraction(1, 1)
>>> efx_factor(Instance.identical(2, [1, 1, 4]), Allocation((0, 1, 1), 2))
Fraction(1, 4)
>>> mms_values(Instance.identical(2, [1, 1, 1]))
(Fraction(1, 1), Fraction(1, 1))
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from onlinefd.core import INF, Allocation, Factor, Instance, check_allocation
from onlinefd.errors import BruteForceBudgetExceeded, InvalidValue

logger = logging.getLogger(__name__)

PROPERTIES = ("EF1", "EFX", "PROP1", "MMS")


@dataclass(frozen=True)
class BruteForceBudget:
    """Largest instance the exhaustive searches will touch."""

    max_goods: int = 12
    max_agents: int = 4

    def check(self, n: int, m: int, what: str = "enumeration") -> None:
        if m > self.max_goods or n > self.max_agents:
            raise BruteForceBudgetExceeded(
                f"{what} over n={n}, m={m} exceeds budget n<={self.max_agents}, m<={self.max_goods}")


DEFAULT_BUDGET = BruteForceBudget()


def format_factor(f: Optional[Factor]) -> str:
    if f is None:
        return "skipped(budget)"
    return "inf" if f == INF else str(f)


def _ratio(num: Fraction, den: Fraction) -> Factor:
    return INF if den == 0 else num / den


def _envy_factor(instance: Instance, allocation: Allocation, pick_removed) -> Factor:
    check_allocation(instance, allocation)
    bundles = allocation.bundles()
    best: Factor = INF
    for i in range(instance.n):
        own = sum((instance.goods[g][i] for g in bundles[i]), Fraction(0))
        for j in range(instance.n):
            if i == j or not bundles[j]:
                continue
            vals = [instance.goods[g][i] for g in bundles[j]]
            best = min(best, _ratio(own, sum(vals, Fraction(0)) - pick_removed(vals)))
    return best


def ef1_factor(instance: Instance, allocation: Allocation) -> Factor:
    """Worst pair ratio after removing the rival's most valuable good."""
    return _envy_factor(instance, allocation, max)


def efx_factor(instance: Instance, allocation: Allocation) -> Factor:
    """Worst pair ratio after removing the rival's least valuable good.

    >>> from onlinefd.core import Instance, Allocation
    >>> efx_factor(Instance.identical(2, ["1/2", "3/10", "1/5"]), Allocation((0, 1, 1), 2))
    Fraction(5, 3)
    """
    return _envy_factor(instance, allocation, min)


def prop1_factor(instance: Instance, allocation: Allocation) -> Factor:
    """Worst ratio of ``v_i(A_i) + best outside good`` to the proportional share."""
    check_allocation(instance, allocation)
    best: Factor = INF
    for i in range(instance.n):
        total = instance.total(i)
        own = Fraction(0)
        outside = []
        for t, a in enumerate(allocation.owner):
            if a == i:
                own += instance.goods[t][i]
            else:
                outside.append(instance.goods[t][i])
        if not outside or total == 0:
            continue
        best = min(best, (own + max(outside)) / (total / instance.n))
    return best


# -------------------------------------------------------------------- MMS


def _to_integers(values) -> tuple[list[int], int]:
    scale = math.lcm(*(v.denominator for v in values)) if values else 1
    return [int(v * scale) for v in values], scale


def _lpt(items: list[int], n: int) -> int:
    sums = [0] * n
    for x in items:
        sums[sums.index(min(sums))] += x
    return min(sums)


def maximin_value(values, n: int) -> Fraction:
    """Max over n-partitions of the minimum bundle sum (branch and bound).

    >>> maximin_value([Fraction(16)] * 3 + [Fraction(4), Fraction(1, 16), Fraction(1, 16)], 3)
    Fraction(257, 16)
    """
    values = [Fraction(v) for v in values]
    if any(v < 0 for v in values):
        raise InvalidValue("negative value in maximin computation")
    if n == 1:
        return sum(values, Fraction(0))
    if len(values) < n:
        return Fraction(0)
    items, scale = _to_integers(values)
    items.sort(reverse=True)
    total = sum(items)
    ceiling = total // n
    suffix = list(itertools.accumulate(reversed(items)))[::-1] + [0]
    best = _lpt(items, n)
    sums = [0] * n

    def dfs(k: int) -> bool:
        nonlocal best
        if k == len(items):
            low = min(sums)
            if low > best:
                best = low
            return best >= ceiling
        if min(sums) + suffix[k] <= best:
            return False
        tried = set()
        for b in range(n):
            if sums[b] in tried:
                continue
            tried.add(sums[b])
            sums[b] += items[k]
            done = dfs(k + 1)
            sums[b] -= items[k]
            if done:
                return True
        return False

    if best < ceiling:
        dfs(0)
    return Fraction(best, scale)


def mms_values(instance: Instance, budget: Optional[BruteForceBudget] = None) -> tuple[Fraction, ...]:
    (budget or DEFAULT_BUDGET).check(instance.n, instance.m, "MMS")
    return tuple(maximin_value(instance.column(i), instance.n) for i in range(instance.n))


def mms_factor(instance: Instance, allocation: Allocation, budget: Optional[BruteForceBudget] = None,
               mms: Optional[tuple[Fraction, ...]] = None) -> Factor:
    check_allocation(instance, allocation)
    if mms is None:
        mms = mms_values(instance, budget)
    bundles = allocation.bundles()
    best: Factor = INF
    for i in range(instance.n):
        own = sum((instance.goods[g][i] for g in bundles[i]), Fraction(0))
        best = min(best, _ratio(own, mms[i]))
    return best


# ----------------------------------------------------------------- report


@dataclass(frozen=True)
class FairnessReport:
    ef1: Factor
    efx: Factor
    prop1: Factor
    mms: Optional[Factor]  # None when the MMS search was over budget
    mms_values: Optional[tuple[Fraction, ...]] = None

    def factor(self, prop: str) -> Optional[Factor]:
        return {"EF1": self.ef1, "EFX": self.efx, "PROP1": self.prop1, "MMS": self.mms}[prop.upper()]

    def as_strings(self) -> dict[str, str]:
        return {p.lower(): format_factor(self.factor(p)) for p in PROPERTIES}


def fairness_report(instance: Instance, allocation: Allocation,
                    mms_budget: Optional[BruteForceBudget] = None) -> FairnessReport:
    try:
        mms = mms_values(instance, mms_budget)
        mms_f = mms_factor(instance, allocation, mms=mms)
    except BruteForceBudgetExceeded as exc:
        logger.info("MMS skipped: %s", exc)
        mms, mms_f = None, None
    return FairnessReport(ef1_factor(instance, allocation), efx_factor(instance, allocation),
                          prop1_factor(instance, allocation), mms_f, mms)


def factor_function(prop: str, instance: Instance,
                    budget: Optional[BruteForceBudget] = None) -> Callable[[Allocation], Factor]:
    prop = prop.upper()
    if prop == "EF1":
        return lambda a: ef1_factor(instance, a)
    if prop == "EFX":
        return lambda a: efx_factor(instance, a)
    if prop == "PROP1":
        return lambda a: prop1_factor(instance, a)
    if prop == "MMS":
        mms = mms_values(instance, budget)
        return lambda a: mms_factor(instance, a, mms=mms)
    raise InvalidValue(f"unknown property {prop!r}; expected one of {PROPERTIES}")


def best_allocation_by(instance: Instance, prop: str,
                       budget: Optional[BruteForceBudget] = None) -> tuple[Allocation, Factor]:
    """Exhaustive search for the fairest allocation; ties go to the lexicographically first owner vector.

    >>> from onlinefd.core import Instance
    >>> alloc, f = best_allocation_by(Instance.identical(2, [1, 1]), "EF1")
    >>> alloc.owner, f
    ((0, 1), inf)
    """
    (budget or DEFAULT_BUDGET).check(instance.n, instance.m, "best_allocation_by")
    score = factor_function(prop, instance, budget)
    best_alloc, best = None, None
    for owner in itertools.product(range(instance.n), repeat=instance.m):
        alloc = Allocation(owner, instance.n)
        f = score(alloc)
        if best is None or f > best:
            best_alloc, best = alloc, f
    return best_alloc, best
