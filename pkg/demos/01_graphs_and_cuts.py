"""Random cubic graphs and the classical cuts that seed the warm starts."""

import numpy as np

from qaoa_lab import graph, classical

g = graph.generate_regular(12, 3, seed=1)
print(g.n, "vertices,", g.m, "edges, degrees", set(g.degrees()))

# exact optimum by enumeration (complement pairs collapse, so 2**11 cuts are scored)
opt = graph.max_cut_brute_force(g)
print("max cut", opt.value, "with", len(opt.optima), "optimal bitstrings")

# random start + single-vertex flips: always a local optimum, always >= 2/3 of the best
lo = [classical.random_lo_cut(g, seed=s) for s in range(20)]
ratios = np.array([c.value / opt.value for c in lo])
print("LO cuts   ", sorted({c.value for c in lo}), "worst ratio %.3f" % ratios.min())

# low-rank relaxation, hyperplane rounding, then the same local search
gw = [classical.gw_local_search_cut(g, seed=s) for s in range(20)]
print("GW+LO cuts", sorted({c.value for c in gw}))

sol = classical.bm_relax(g, classical.gw_rank(g.n), seed=0)
print("relaxation bound %.3f >= max cut %g" % (sol.objective, opt.value))

# the cut table is what the simulator uses as its diagonal cost
print("cut table", g.cut_table[:8], "... dtype", g.cut_table.dtype)
