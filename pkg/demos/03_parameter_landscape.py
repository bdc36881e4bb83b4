"""Single-layer landscapes, region seeds and local refinement."""

from qaoa_lab import classical, graph
from qaoa_lab.optimize import Objective, grid_search, local_refine, optimize, tate_region_seeds
from qaoa_lab.sim import WarmStart

g = graph.generate_regular(12, 3, seed=5)
cut = classical.random_lo_cut(g, seed=4)
opt = graph.max_cut_brute_force(g)
print("cut(b) =", cut.value, " max cut =", opt.value)

obj = Objective("expectation", g, WarmStart(cut.bits, 60))
res = grid_search(obj, 40, 40)
print("40x40 grid best %.6f at gamma %.3f beta %.3f" % (res.value, res.params.gammas[0], res.params.betas[0]))

# coarse ascii picture of the landscape (gamma down, beta across)
shades = " .:-=+*#%@"
lo, hi = res.grid.min(), res.grid.max()
for row in res.grid[::4, ::2]:
    print("".join(shades[int((v - lo) / (hi - lo + 1e-12) * 9)] for v in row))

fine = local_refine(obj, res.params)
print("refined  %.9f  (cut(b) recovered to %.1e)" % (fine.value, cut.value - fine.value))

# the three textbook parameter regions, raw and refined
for s in tate_region_seeds():
    r = local_refine(obj, s)
    print("seed (%.4f, %.4f): raw %.4f -> refined %.4f" % (s.gammas[0], s.betas[0], obj(s), r.value))

# basin hopping gets there from a random start
bh = optimize(obj, "basin_hop", seed=0)
print("basin hop best %.6f after %d evaluations" % (bh.value, bh.evals))
