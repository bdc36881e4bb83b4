"""Optimising for the chance of beating the warm-start cut instead of the mean."""

from qaoa_lab import classical, graph
from qaoa_lab.optimize import Objective, OptimizerConfig, optimize
from qaoa_lab.sim import WarmStart

g = graph.generate_regular(12, 3, seed=11)
cut = classical.random_lo_cut(g, seed=0)
print("cut(b) =", cut.value, " max cut =", graph.max_cut_brute_force(g).value)
cfg = OptimizerConfig(iterations=40)

print("theta   BSP(bsp-opt)  BSP(exp-opt)   E(exp-opt)")
for theta in (0, 30, 45, 60, 70, 80, 90):
    ws = WarmStart(cut.bits, theta)
    bsp_obj = Objective("bsp", g, ws)
    exp_obj = Objective("expectation", g, ws)
    by_bsp = optimize(bsp_obj, "basin_hop", cfg, seed=theta)
    by_exp = optimize(exp_obj, "grid_then_refine")
    print("%5d   %12.4f  %12.4f   %10.4f" % (theta, by_bsp.value, bsp_obj(by_exp.params), by_exp.value))

# the mean never beats cut(b); the tail does, and it grows with theta
