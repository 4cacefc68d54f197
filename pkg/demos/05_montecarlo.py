"""Fraction of perfect samples on a few small graphs.

Run:  python3 demos/05_montecarlo.py [trials]
"""
import sys
import time

import numpy as np

from ggmperfect import (
    SamplerConfig,
    complete_graph,
    cycle_graph,
    montecarlo_perfectness,
    path_graph,
    random_graph,
    star_graph,
)

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 100
graphs = {
    "path3": path_graph(3),
    "cycle4": cycle_graph(4),
    "cycle5": cycle_graph(5),
    "K4": complete_graph(4),
    "star5": star_graph(5),
    "random6": random_graph(6, 0.5, np.random.default_rng(1)),
}

# Every check is exact, so a single failure would be a genuine counterexample.
for name, G in graphs.items():
    start = time.perf_counter()
    rep = montecarlo_perfectness(G, trials, SamplerConfig(seed=0))
    print(f"{name:8s} g={G.g:2d}  perfect {rep.perfect_count}/{rep.trials}  ({time.perf_counter() - start:.1f}s)")
    for f in rep.failures:
        print("   failing seed", f["seed"], f["witnesses"])
