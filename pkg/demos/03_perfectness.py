"""Perfectness verdicts, path-sum cancellation and exceptional scales.

Run:  python3 demos/03_perfectness.py
"""
from fractions import Fraction as F

from ggmperfect import (
    DeltaAssignment,
    build_A,
    complete_graph,
    cycle_graph,
    d_membership,
    find_bad_eps,
    is_perfect,
)

# Generic weights on the 4-cycle: separation and CI coincide.
C4 = cycle_graph(4)
good = DeltaAssignment.from_sequence(C4, [F(1), F(-2, 3), F(1, 2), F(3, 5)])
print("generic 4-cycle perfect:", is_perfect(build_A(C4, good, F(1, 3)), C4).perfect)

# Edges in sorted order are 12, 14, 23, 34.  With delta_14 = -1 the two
# paths 1-2-3 and 1-4-3 cancel, so a minor vanishes with no separation.
bad = DeltaAssignment.from_sequence(C4, [F(1), F(-1), F(1), F(1)])
verdict = is_perfect(build_A(C4, bad, F(1, 10)), C4)
print("cancelling 4-cycle perfect:", verdict.perfect)
for c, label in verdict.witnesses:
    print(f"  witness {c}: {label}; dual CI couple {c.dual(4)}")

report = d_membership(C4, bad)
print("path-sum violations (i, j, t, sum):", report.violations)
print("degenerate couples:", [(str(c), lab) for c, lab in find_bad_eps(C4, bad).degenerate])

# On K4 the minor of (12|{3}) is x * (delta_12 - delta_13 * delta_23 * x),
# so eps = delta_12 / (delta_13 * delta_23) is an exceptional scale.
K4 = complete_graph(4)
delta = DeltaAssignment.from_sequence(K4, [F(1, 4), F(1), F(1, 10), F(1), F(1, 10), F(1, 10)])
res = find_bad_eps(K4, delta)
print(f"K4: eps_max={res.eps_max:.6f}, {len(res.roots)} exceptional scales")
for (a, b), couples in res.roots:
    print(f"  eps in [{float(a):.12f}, {float(b):.12f}] kills {[str(c) for c in couples]}")
print("perfect at eps=1/4:", is_perfect(build_A(K4, delta, F(1, 4)), K4).perfect)
print("perfect at eps=1/5:", is_perfect(build_A(K4, delta, F(1, 5)), K4).perfect)
