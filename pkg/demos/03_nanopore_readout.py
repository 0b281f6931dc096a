"""
Reading studded DNA through a nanopore
======================================

Bind a non-cutting EcoRI mutant at every intact site, pull the molecule
through a pore and decode the stud blockades. A palindromic layout reads
the same whichever end enters first.
"""

from dataclasses import replace

import numpy as np

from dnamemory import (TraceParams, anneal, decode_trace, design_carrier, detect_events,
                       palindromize, stud, translocate)

layout = palindromize(design_carrier(3, seed=1), seed=2)
params = replace(TraceParams(), noise_sigma=0.04)   # 10% of the stud step
message = "010"

for orientation in ("forward", "reverse"):
    trace = translocate(stud(anneal(layout, message)), params, orientation, seed=5)
    events = detect_events(trace)
    print(orientation, [f"{e.center_time * 1e6:.0f} us" for e in events],
          "->", decode_trace(events, layout, params))

###############################################################################
# A coarse picture of the trace: mean current in 40 bins.
trace = translocate(stud(anneal(layout, message)), params, "forward", seed=5)
bins = np.array_split(trace.samples, 40)
print("".join(" .:-=+*#%@"[min(9, int((1 - b.mean()) * 12))] for b in bins))

###############################################################################
# Monte Carlo: random messages and orientations at 10% noise.
rng = np.random.default_rng(0)
ok = 0
for seed in range(200):
    bits = "".join(rng.choice(["0", "1"], 3))
    o = ("forward", "reverse")[int(rng.integers(2))]
    ev = detect_events(translocate(stud(anneal(layout, bits)), params, o, seed=seed))
    ok += decode_trace(ev, layout, params) == bits
print(f"{ok}/200 decoded correctly")
