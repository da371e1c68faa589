"""
Online fair division of indivisible goods with exact rational arithmetic.

Goods arrive one at a time and must be given away immediately. The package
provides fairness checkers, online allocators for several kinds of advice
about the future, offline share oracles, adaptive adversaries, and wrappers
for noisy advice.

>>> from onlinefd import Instance, Totals, NormAllocator, run_online, prop1_factor
>>> inst = Instance.identical(2, ["24/100", "1/100", "3/16", "3/16", "3/16", "3/16"])
>>> alloc = run_online(NormAllocator, inst, Totals((1, 1)))
>>> alloc.owner, prop1_factor(inst, alloc) >= 1
((0, 1, 1, 1, 0, 0), True)
"""
from onlinefd.adversaries import (
    ADVERSARIES,
    A1NoInfoEF1,
    A2NormEFXTwoAgents,
    A3NormEF1ManyAgents,
    A4FreqEFXManyAgents,
    A5IdenticalNoInfoEFX,
    A6IdenticalNormEFXManyAgents,
    A7IdenticalNormEFXTwoAgents,
    a5_identical_noinfo_efx,
    certify_bound,
    make_adversary,
)
from onlinefd.augmented import instantiate_closest, noisy_freq_run, noisy_norm_run
from onlinefd.core import (
    INF,
    Adversary,
    Allocation,
    Bound,
    Frequency,
    Instance,
    NoAdvice,
    OnlineAllocator,
    TotalIntervals,
    Totals,
    Transcript,
    exact_advice,
    golden_geq,
    golden_leq,
    run_match,
    run_online,
    value_of_bundle,
)
from onlinefd.fairness import (
    BruteForceBudget,
    FairnessReport,
    best_allocation_by,
    ef1_factor,
    efx_factor,
    fairness_report,
    mms_factor,
    mms_values,
    prop1_factor,
)
from onlinefd.frequency import (
    ORACLES,
    FreqMetaAllocator,
    allocation_to_sequence,
    ido_profile,
    leximin_cut_choose,
    run_freq_pipeline,
    share_bruteforce_maximin_ratio,
    share_round_robin,
    simulate_picking,
)
from onlinefd.online import (
    DumpAllocator,
    GreedyAllocator,
    NormAllocator,
    RoundRobinAllocator,
    ThresholdAllocator,
)
from onlinefd.registry import ALGORITHMS

__version__ = "0.1.0"
