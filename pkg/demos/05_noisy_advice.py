"""
When the advice is off
======================

Interval totals weaken proportionality by the ratio of lower to upper bound.
Noisy frequency predictions cost each agent at most the total distance
between what it saw and what was predicted.
"""
from fractions import Fraction

from onlinefd import Instance, TotalIntervals, ef1_factor, noisy_freq_run, noisy_norm_run

eps = Fraction(1, 10)
inst = Instance.from_columns([[1, 0], [1 - eps, eps]])
alloc, rep = noisy_norm_run(inst, TotalIntervals(((1, 1), (1 - eps, 1))))
print("bundles", alloc.bundles(), "additive slack", rep.additive_ef1_slack,
      "multiplicative ef1", ef1_factor(inst, alloc))

# %%
inst = Instance.from_columns([[5, 3, 1, 4, 2], [3, 3, 2, 1, 1]])
alloc, rep = noisy_norm_run(inst, TotalIntervals(tuple((t, 2 * t) for t in inst.totals())))
print("doubled uppers: kappa", [str(k) for k in rep.kappa], "prop1 ratios", [str(r) for r in rep.prop1_ratios])

# %%
predicted = [[5, 4, 3, 2, 1], [3, 3, 2, 2, 1]]
alloc, trace, ok = noisy_freq_run(inst, predicted)
print("eta", [str(e) for e in trace.eta], "matching cost", [str(c) for c in trace.matching_cost])
print("values", [str(v) for v in trace.values], "shares", [str(s) for s in trace.shares], "guarantee holds:", ok)
