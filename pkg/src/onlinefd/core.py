"""
Exact value model, instances, allocations, advice, and the online match loop.

Every valuation is a :class:`fractions.Fraction`. Fairness factors may also be
``INF`` (``math.inf``), which compares correctly against fractions and marks a
vacuously satisfied constraint.

>>> inst = Instance.identical(2, [1, 1, 1])
>>> value_of_bundle(inst, 0, {0, 2})
Fraction(2, 1)
>>> golden_leq(Fraction(3, 5)), golden_leq(Fraction(5, 8))
(True, False)
"""
from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, ClassVar, Iterable, Optional, Sequence, Union

from onlinefd.errors import (
    AdversaryInconsistent,
    AdviceMismatch,
    IncompleteAllocation,
    InvalidAdvice,
    InvalidIndex,
    InvalidValue,
)

logger = logging.getLogger(__name__)

Value = Fraction
INF = math.inf
Factor = Union[Fraction, float]  # float only ever holds INF

RationalLike = Union[int, str, Fraction]


def as_value(x: RationalLike) -> Fraction:
    """Convert an int, Fraction or rational string to a nonnegative Fraction."""
    if isinstance(x, bool) or isinstance(x, float):
        raise InvalidValue(f"refusing inexact or boolean value {x!r}")
    try:
        v = Fraction(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidValue(f"not a rational value: {x!r}") from exc
    if v < 0:
        raise InvalidValue(f"valuations must be nonnegative, got {v}")
    return v


def golden_leq(v: Fraction) -> bool:
    """Exact test ``v <= (sqrt(5)-1)/2`` for rational ``v >= 0``."""
    if v < 0:
        raise InvalidValue(f"golden_leq expects v >= 0, got {v}")
    return (2 * v + 1) ** 2 <= 5


def golden_geq(v: Factor) -> bool:
    """Exact test ``v >= (sqrt(5)-1)/2``; ``INF`` counts as satisfied."""
    if v == INF:
        return True
    if v < 0:
        return False
    return (2 * v + 1) ** 2 >= 5


# ---------------------------------------------------------------- instances


@dataclass(frozen=True)
class Instance:
    """``n`` agents and goods listed in arrival order, each an n-vector of values."""

    n: int
    goods: tuple[tuple[Fraction, ...], ...]
    ids: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if self.n < 1:
            raise InvalidValue(f"need at least one agent, got n={self.n}")
        goods = tuple(tuple(as_value(x) for x in g) for g in self.goods)
        for t, g in enumerate(goods):
            if len(g) != self.n:
                raise InvalidValue(f"good {t} has {len(g)} values, expected {self.n}")
        object.__setattr__(self, "goods", goods)
        if self.ids is None:
            object.__setattr__(self, "ids", tuple(f"g{t + 1}" for t in range(len(goods))))
        else:
            ids = tuple(self.ids)
            if len(ids) != len(goods) or len(set(ids)) != len(ids):
                raise InvalidValue("good ids must be unique and one per good")
            object.__setattr__(self, "ids", ids)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[RationalLike]]) -> "Instance":
        """Build from per-agent value lists (``columns[i][t] = v_i(g_t)``)."""
        m = len(columns[0]) if columns else 0
        if any(len(c) != m for c in columns):
            raise InvalidValue("all agents must value the same number of goods")
        return cls(len(columns), tuple(tuple(c[t] for c in columns) for t in range(m)))

    @classmethod
    def identical(cls, n: int, values: Iterable[RationalLike]) -> "Instance":
        return cls(n, tuple((v,) * n for v in values))

    @property
    def m(self) -> int:
        return len(self.goods)

    def value(self, agent: int, good: int) -> Fraction:
        return self.goods[good][agent]

    def column(self, agent: int) -> tuple[Fraction, ...]:
        return tuple(g[agent] for g in self.goods)

    def total(self, agent: int) -> Fraction:
        return sum(self.column(agent), Fraction(0))

    def totals(self) -> tuple[Fraction, ...]:
        return tuple(self.total(i) for i in range(self.n))

    def multisets(self) -> tuple[tuple[Fraction, ...], ...]:
        """Per-agent value multiset, sorted descending (canonical form)."""
        return tuple(tuple(sorted(self.column(i), reverse=True)) for i in range(self.n))

    def is_identical(self) -> bool:
        return all(len(set(g)) <= 1 for g in self.goods)

    def prefix(self, length: int) -> "Instance":
        return Instance(self.n, self.goods[:length], self.ids[:length])

    def permuted(self, order: Sequence[int]) -> "Instance":
        """The same goods arriving in ``order`` (a permutation of good indices)."""
        return Instance(self.n, tuple(self.goods[t] for t in order), tuple(self.ids[t] for t in order))


def value_of_bundle(instance: Instance, agent: int, bundle: Iterable[int]) -> Fraction:
    if not 0 <= agent < instance.n:
        raise InvalidIndex(f"agent {agent} out of range [0, {instance.n})")
    total = Fraction(0)
    for g in bundle:
        if not 0 <= g < instance.m:
            raise InvalidIndex(f"good {g} out of range [0, {instance.m})")
        total += instance.goods[g][agent]
    return total


@dataclass(frozen=True)
class Allocation:
    """``owner[t]`` is the agent holding good ``t``."""

    owner: tuple[int, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "owner", tuple(self.owner))
        for t, a in enumerate(self.owner):
            if a is None:
                raise IncompleteAllocation(f"good {t} is unallocated")
            if not 0 <= a < self.n:
                raise InvalidIndex(f"good {t} assigned to agent {a}, outside [0, {self.n})")

    @classmethod
    def from_bundles(cls, bundles: Sequence[Iterable[int]], m: int) -> "Allocation":
        owner: list[Optional[int]] = [None] * m
        for i, bundle in enumerate(bundles):
            for g in bundle:
                if owner[g] is not None:
                    raise InvalidValue(f"good {g} appears in two bundles")
                owner[g] = i
        if None in owner:
            raise IncompleteAllocation(f"goods {[t for t, a in enumerate(owner) if a is None]} unallocated")
        return cls(tuple(owner), len(bundles))

    @property
    def m(self) -> int:
        return len(self.owner)

    def bundles(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for t, a in enumerate(self.owner):
            out[a].append(t)
        return out

    def bundle(self, agent: int) -> list[int]:
        return [t for t, a in enumerate(self.owner) if a == agent]


def check_allocation(instance: Instance, allocation: Allocation) -> None:
    if allocation.n != instance.n:
        raise IncompleteAllocation(f"allocation is for {allocation.n} agents, instance has {instance.n}")
    if allocation.m != instance.m:
        raise IncompleteAllocation(f"allocation covers {allocation.m} of {instance.m} goods")


# ------------------------------------------------------------------- advice


@dataclass(frozen=True)
class NoAdvice:
    kind: ClassVar[str] = "none"


@dataclass(frozen=True)
class Totals:
    """Exact per-agent total value over the whole stream."""

    totals: tuple[Fraction, ...]
    kind: ClassVar[str] = "totals"

    def __post_init__(self):
        object.__setattr__(self, "totals", tuple(as_value(t) for t in self.totals))

    def as_intervals(self) -> "TotalIntervals":
        return TotalIntervals(tuple((t, t) for t in self.totals))


@dataclass(frozen=True)
class TotalIntervals:
    """Certified bounds ``lower <= v_i(G) <= upper`` per agent."""

    bounds: tuple[tuple[Fraction, Fraction], ...]
    kind: ClassVar[str] = "intervals"

    def __post_init__(self):
        bounds = tuple((as_value(lo), as_value(hi)) for lo, hi in self.bounds)
        for i, (lo, hi) in enumerate(bounds):
            if not 0 < lo <= hi:
                raise InvalidAdvice(f"agent {i}: need 0 < lower <= upper, got [{lo}, {hi}]")
        object.__setattr__(self, "bounds", bounds)

    @property
    def lowers(self) -> tuple[Fraction, ...]:
        return tuple(lo for lo, _ in self.bounds)

    @property
    def uppers(self) -> tuple[Fraction, ...]:
        return tuple(hi for _, hi in self.bounds)


@dataclass(frozen=True)
class Frequency:
    """Per-agent multiset of values the stream will carry, order unknown."""

    multisets: tuple[tuple[Fraction, ...], ...]
    kind: ClassVar[str] = "frequency"

    def __post_init__(self):
        ms = tuple(tuple(sorted((as_value(x) for x in ms), reverse=True)) for ms in self.multisets)
        if len({len(x) for x in ms}) > 1:
            raise InvalidAdvice("frequency multisets must all have the same cardinality")
        object.__setattr__(self, "multisets", ms)

    @property
    def m(self) -> int:
        return len(self.multisets[0]) if self.multisets else 0


Advice = Union[NoAdvice, Totals, TotalIntervals, Frequency]


def exact_advice(instance: Instance, kind: str) -> Advice:
    """The noiseless advice of the given kind for a fully known instance."""
    if kind == "none":
        return NoAdvice()
    if kind == "totals":
        return Totals(instance.totals())
    if kind == "intervals":
        return Totals(instance.totals()).as_intervals()
    if kind == "frequency":
        return Frequency(instance.multisets())
    raise InvalidAdvice(f"unknown advice kind {kind!r}")


def advice_violations(instance: Instance, advice: Advice) -> list[str]:
    """Human-readable list of ways the realized instance contradicts the advice."""
    problems = []
    if isinstance(advice, Totals):
        for i, (want, got) in enumerate(zip(advice.totals, instance.totals())):
            if want != got:
                problems.append(f"agent {i}: announced total {want}, realized {got}")
    elif isinstance(advice, TotalIntervals):
        for i, ((lo, hi), got) in enumerate(zip(advice.bounds, instance.totals())):
            if not lo <= got <= hi:
                problems.append(f"agent {i}: realized total {got} outside [{lo}, {hi}]")
    elif isinstance(advice, Frequency):
        for i, (want, got) in enumerate(zip(advice.multisets, instance.multisets())):
            if want != got:
                problems.append(f"agent {i}: announced multiset {want}, realized {got}")
    return problems


# ------------------------------------------------------- allocator contract


class OnlineAllocator(ABC):
    """An online rule: constructed with ``(n, advice)``, fed one good at a time.

    ``step`` sees only the value vector of the arriving good; everything else it
    knows comes from its own history and the advice.
    """

    name: ClassVar[str] = "allocator"
    accepts: ClassVar[frozenset[str]] = frozenset({"none", "totals", "intervals", "frequency"})
    identical_only: ClassVar[bool] = False

    def __init__(self, n: int, advice: Advice = NoAdvice()):
        if advice.kind not in self.accepts:
            raise AdviceMismatch(f"{self.name} cannot use advice of kind {advice.kind!r}")
        self.n = n
        self.advice = advice
        self.owner: list[int] = []

    def step(self, values: Sequence[RationalLike]) -> int:
        vec = tuple(as_value(v) for v in values)
        if len(vec) != self.n:
            raise InvalidValue(f"expected {self.n} values, got {len(vec)}")
        agent = self._choose(vec)
        self.owner.append(agent)
        return agent

    @abstractmethod
    def _choose(self, values: tuple[Fraction, ...]) -> int:
        ...

    def allocation(self) -> Allocation:
        return Allocation(tuple(self.owner), self.n)


AllocatorFactory = Callable[[int, Advice], OnlineAllocator]


def run_online(factory: AllocatorFactory, instance: Instance, advice: Advice = NoAdvice()) -> Allocation:
    """Feed a fixed instance to an allocator in arrival order."""
    alloc = factory(instance.n, advice)
    for g in instance.goods:
        alloc.step(g)
    return alloc.allocation()


# ------------------------------------------------------- adversary contract


@dataclass(frozen=True)
class Bound:
    """Guaranteed ceiling on a fairness factor against one adversary."""

    property: str
    ceiling: Fraction


class Adversary(ABC):
    """Adaptive stream generator.

    ``next`` receives the agent that got the previously emitted good (``None``
    before the first good) and returns the next value vector, or ``None`` to stop.
    """

    name: ClassVar[str] = "adversary"
    identical: ClassVar[bool] = False

    def __init__(self, n: int):
        self.n = n
        self.branch = "start"
        self.history: list[int] = []

    @abstractmethod
    def advice(self) -> Advice:
        ...

    def next(self, last: Optional[int]) -> Optional[tuple[Fraction, ...]]:
        if last is not None:
            self.history.append(last)
        out = self._emit(last)
        return None if out is None else tuple(Fraction(x) for x in out)

    @abstractmethod
    def _emit(self, last: Optional[int]) -> Optional[Sequence[Fraction]]:
        ...

    @abstractmethod
    def bound(self) -> Bound:
        ...

    def branch_ceiling(self) -> Optional[Fraction]:
        """Ceiling for the branch actually played, when the construction tracks it."""
        return None


# ------------------------------------------------------------------- match


@dataclass
class Transcript:
    instance: Instance
    decisions: list[int]
    allocation: Allocation
    advice: Advice
    report: "object"  # fairness.FairnessReport
    inconsistencies: list[str] = field(default_factory=list)
    branch: str = ""

    @property
    def consistent(self) -> bool:
        return not self.inconsistencies


def run_match(factory: AllocatorFactory, adversary: Adversary, *, strict: bool = False,
              mms_budget=None, max_goods: int = 100_000) -> Transcript:
    """Play an allocator against an adaptive adversary until the adversary stops.

    Advice inconsistencies are recorded on the transcript; with ``strict=True``
    they raise :class:`AdversaryInconsistent` instead.
    """
    from onlinefd.fairness import fairness_report

    advice = adversary.advice()
    allocator = factory(adversary.n, advice)
    goods: list[tuple[Fraction, ...]] = []
    decisions: list[int] = []
    last = None
    while (vec := adversary.next(last)) is not None:
        if len(goods) >= max_goods:
            raise RuntimeError(f"adversary {adversary.name} exceeded {max_goods} goods")
        goods.append(vec)
        last = allocator.step(vec)
        decisions.append(last)
    instance = Instance(adversary.n, tuple(goods))
    allocation = Allocation(tuple(decisions), adversary.n)
    problems = advice_violations(instance, advice)
    if problems:
        logger.warning("adversary %s inconsistent with its advice: %s", adversary.name, problems)
        if strict:
            raise AdversaryInconsistent("; ".join(problems))
    report = fairness_report(instance, allocation, mms_budget=mms_budget)
    return Transcript(instance, decisions, allocation, advice, report, problems, adversary.branch)
