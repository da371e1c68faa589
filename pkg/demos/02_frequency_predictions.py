"""
Predicting how often each value shows up
========================================

With frequency predictions every agent knows the multiset of values it will
see, but not the order. Any picking sequence that is good on the sorted
("decreasing order") profile can be replayed online without losing value.
"""
from onlinefd import Instance, efx_factor, mms_factor, run_freq_pipeline
from onlinefd.frequency import ido_profile, leximin_cut_choose, simulate_picking

inst = Instance.from_columns([[1, 3, 2], [2, 1, 3]])
profile = ido_profile(inst.multisets())
print("sorted profile:", [[str(v) for v in row] for row in profile])
print("round robin on the sorted profile:", simulate_picking((0, 1, 0), profile))

alloc, rep = run_freq_pipeline(inst, "rr")
print("online owners:", alloc.owner)
print("values", [str(v) for v in rep.values], ">= benchmark", [str(v) for v in rep.benchmark])

# %%
# Cut and choose for two agents gives EFX
inst = Instance.from_columns([[5, 1, 4, 2, 3], [2, 4, 1, 5, 3]])
print("cut-and-choose sequence:", leximin_cut_choose(inst.multisets()).sequence)
alloc, _ = run_freq_pipeline(inst, "leximin")
print("efx factor:", efx_factor(inst, alloc))

# %%
# Exhaustive max-min-ratio oracle, replayed online
alloc, rep = run_freq_pipeline(inst, "bruteforce")
print("offline ratio", rep.ratio, "online mms factor", mms_factor(inst, alloc))
