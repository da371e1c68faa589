"""
Adaptive adversaries
====================

Each adversary watches where its goods go and picks the next good to hurt
the algorithm. Every construction certifies a ceiling on the fairness factor
that no algorithm can beat at these parameters.
"""
from onlinefd.adversaries import ADVERSARIES, certify_bound, make_adversary
from onlinefd.fairness import format_factor
from onlinefd.registry import ALGORITHMS, compatible_algorithms

print(f"{'adv':<4} {'algorithm':<16} {'prop':<5} {'measured':>10} {'ceiling':>14}  goods  branch")
for name in sorted(ADVERSARIES):
    for algo in compatible_algorithms(make_adversary(name)):
        t, bound, ok = certify_bound(make_adversary(name), ALGORITHMS[algo])
        measured = format_factor(t.report.factor(bound.property))
        print(f"{name:<4} {algo:<16} {bound.property:<5} {measured:>10} {str(bound.ceiling):>14}"
              f"  {t.instance.m:>5}  {t.branch}{'' if ok else '  <-- VIOLATED'}")
