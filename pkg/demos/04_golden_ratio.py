"""
The golden-ratio threshold
==========================

For two agents with identical, normalized values, agent 1 keeps taking goods
while its bundle stays below (sqrt(5)-1)/2. The matching adversary sends a
block of tiny goods first and then splits the remainder in two.
"""
from fractions import Fraction

from onlinefd import Instance, ThresholdAllocator, Totals, efx_factor, golden_geq, run_online
from onlinefd.adversaries import A7IdenticalNormEFXTwoAgents, golden_block_size
from onlinefd.core import run_match

inst = Instance.identical(2, ["1/2", "3/10", "1/5"])
alloc = run_online(ThresholdAllocator, inst, Totals((1, 1)))
print("stream 1/2, 3/10, 1/5 ->", alloc.owner, "efx", efx_factor(inst, alloc))

# %%
# The adversary's branch ceilings shrink toward the golden-ratio conjugate
for eps in (Fraction(1, 100), Fraction(1, 1000), Fraction(1, 10000)):
    adv = A7IdenticalNormEFXTwoAgents(eps)
    ceilings = {k: f"{float(v):.4f}" for k, v in adv.branch_ceilings().items()}
    print(f"eps={eps}: block k={golden_block_size(eps)} ceilings {ceilings}")

# %%
# Play it against the threshold rule
t = run_match(ThresholdAllocator, A7IdenticalNormEFXTwoAgents(Fraction(1, 100)))
print("branch:", t.branch, "| efx:", t.report.efx, f"({float(t.report.efx):.4f})",
      "| at least the conjugate:", golden_geq(t.report.efx))
