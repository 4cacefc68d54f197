"""Building precision matrices from edge weights and a scale.

Run:  python3 demos/01_parametrization.py [out.csv]
"""
import csv
import itertools
import math
import sys
from fractions import Fraction

from ggmperfect import DeltaAssignment, SamplerConfig, build_A, eps_max, path_graph, proposal_stream, zeta
from ggmperfect.linalg import format_fraction

G = path_graph(3)

# A = I + eps * Delta, with Delta carrying one weight per edge.
delta = DeltaAssignment.from_sequence(G, [Fraction(1, 2), Fraction(-1)])
A = build_A(G, delta, Fraction(2, 3))
print("A =")
for row in A:
    print("  ", [format_fraction(v) for v in row])

# On the path, with one weight at +-1, the largest admissible scale is 1/sqrt(1 + delta_12^2).
for d12 in (0.2, 0.5, 0.9):
    d = DeltaAssignment.from_sequence(G, [d12, 1.0])
    print(f"delta_12={d12}: eps_max={eps_max(G, d):.12f}  closed form={1 / math.sqrt(1 + d12**2):.12f}")

# The covariance is the exact inverse; node 2 separates 1 from 3, so this minor is 0.
Sigma = zeta(G, delta, Fraction(2, 3)).matrix
print("|Sigma_{12,32}| =", Sigma[0, 2] * Sigma[1, 1] - Sigma[0, 1] * Sigma[1, 2])

# (delta_12, delta_23, eps) scatter data for external plotting.
out = sys.argv[1] if len(sys.argv) > 1 else "path3_samples.csv"
stream = proposal_stream(G, SamplerConfig(seed=1, backend="float"))
with open(out, "w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["delta_12", "delta_23", "eps", "eps_max"])
    for point, _ in itertools.islice(stream, 2000):
        vals = point.delta.sequence()
        w.writerow([*(f"{v:.6f}" for v in vals), f"{point.eps:.6f}", f"{eps_max(G, point.delta):.6f}"])
print("wrote 2000 samples to", out)
