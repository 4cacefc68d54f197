"""Determinants of B(x) against the 1-cycles of a digraph.

Run:  python3 demos/04_cycle_lemma.py
"""
from fractions import Fraction as F

from ggmperfect import Couple, DiGraph, build_B_x, cycle_graph, cycle_lemma_check, poly_det, quotient_graph

# Merging nodes 1 and 3 of the 4-cycle turns both 1-3 paths into 1-cycles.
H, relabel = quotient_graph(cycle_graph(4), Couple(1, 3, {2, 4}))
print("quotient arcs:", sorted(H.arcs), "relabel:", relabel)

w = {(1, 2): F(1), (2, 1): F(1), (1, 3): F(1), (3, 1): F(2)}
print("det B(x) =", poly_det(build_B_x(H, w)))
v = cycle_lemma_check(H, w)
print("cycle counts:", v.cycle_counts, "consistent:", v.consistent)

# Flip one weight so the two 1-cycles of length 2 cancel: det vanishes
# although cycles exist, and the check reports which length class failed.
w[(3, 1)] = F(-1)
v = cycle_lemma_check(H, w)
print("after cancellation: det =", v.det, " violated t:", v.violated_t)

# No arc touches node 1, so no 1-cycle exists and det is identically 0.
H = DiGraph(3, frozenset({(2, 3), (3, 2)}))
v = cycle_lemma_check(H, {(2, 3): F(5), (3, 2): F(7)})
print("no 1-cycles: det is zero =", v.det_is_zero)
