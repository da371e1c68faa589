"""Name lookup for the built-in online allocators."""
from __future__ import annotations

from functools import partial

from onlinefd.core import Adversary, AllocatorFactory
from onlinefd.errors import FairDivisionError
from onlinefd.frequency import FreqMetaAllocator
from onlinefd.online import (
    DumpAllocator,
    GreedyAllocator,
    NormAllocator,
    RoundRobinAllocator,
    ThresholdAllocator,
)

ALGORITHMS: dict[str, AllocatorFactory] = {
    "norm": NormAllocator,
    "threshold": ThresholdAllocator,
    "greedy": GreedyAllocator,
    "dump": DumpAllocator,
    "round-robin": RoundRobinAllocator,
    "freq-rr": partial(FreqMetaAllocator, oracle="rr"),
    "freq-leximin": partial(FreqMetaAllocator, oracle="leximin"),
    "freq-bruteforce": partial(FreqMetaAllocator, oracle="bruteforce"),
}

# advice kind each allocator is given when the caller does not supply one
NATURAL_ADVICE = {
    "norm": "totals",
    "threshold": "totals",
    "greedy": "none",
    "dump": "none",
    "round-robin": "none",
    "freq-rr": "frequency",
    "freq-leximin": "frequency",
    "freq-bruteforce": "frequency",
}

FREQ_ORACLE = {"freq-rr": "rr", "freq-leximin": "leximin", "freq-bruteforce": "bruteforce"}


def get_algorithm(name: str) -> AllocatorFactory:
    try:
        return ALGORITHMS[name]
    except KeyError:
        raise ValueError(f"unknown algorithm {name!r}; choose from {sorted(ALGORITHMS)}") from None


def _allocator_class(factory: AllocatorFactory):
    return factory.func if isinstance(factory, partial) else factory


def compatible_algorithms(adversary: Adversary) -> list[str]:
    """Built-in algorithms that can legally play against ``adversary``.

    An algorithm qualifies when it accepts the announced advice kind, its
    identical-valuation requirement (if any) is met, and it can be built for
    the adversary's agent count.

    >>> from onlinefd.adversaries import make_adversary
    >>> compatible_algorithms(make_adversary("a1"))
    ['dump', 'round-robin']
    >>> compatible_algorithms(make_adversary("a7"))
    ['norm', 'threshold', 'greedy', 'dump', 'round-robin']
    """
    advice = adversary.advice()
    out = []
    for name, factory in ALGORITHMS.items():
        cls = _allocator_class(factory)
        if advice.kind not in cls.accepts or (cls.identical_only and not adversary.identical):
            continue
        try:
            factory(adversary.n, advice)
        except FairDivisionError:
            continue
        out.append(name)
    return out
