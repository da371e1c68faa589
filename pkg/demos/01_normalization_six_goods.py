"""
Knowing the totals
==================

Two agents share six goods of identical value. Both agents know their total
is 1. A natural-looking split gives agent 1 the first two goods, yet agent 1
still falls short of proportionality up to one good. The normalization
allocator avoids the trap by tracking a certificate per agent.
"""
from fractions import Fraction

from onlinefd import Allocation, Instance, NormAllocator, Totals, fairness_report

eps = Fraction(1, 100)
values = [Fraction(1, 4) - eps, eps] + [Fraction(3, 16)] * 4
inst = Instance.identical(2, values)
print("goods:", [str(v) for v in values])

# %%
# The split {g1, g2} | {g3..g6}
bad = Allocation((0, 0, 1, 1, 1, 1), 2)
print("bad split:", fairness_report(inst, bad).as_strings())

# %%
# Run the allocator good by good and watch agents leave the active set
alloc = NormAllocator(2, Totals((1, 1)))
for t, g in enumerate(inst.goods):
    agent = alloc.step(g)
    print(f"g{t + 1} -> agent {agent + 1}  active={sorted(a + 1 for a in alloc.active)}")

result = alloc.allocation()
print("bundles:", [[f"g{g + 1}" for g in b] for b in result.bundles()])
print("report:", fairness_report(inst, result).as_strings())
print("certificate holds:", alloc.certificate_holds())
