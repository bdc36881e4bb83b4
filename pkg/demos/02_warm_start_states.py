"""Tilted warm-start states and the aligned mixer."""

import numpy as np

from qaoa_lab import graph, metrics
from qaoa_lab.sim import CircuitParams, WarmStart, qaoa_state, warm_start_state, apply_aligned_mixer

g = graph.complete_graph(4)
b = "0011"

# theta interpolates from the classical basis state (0) to the uniform superposition (90)
for theta in (0, 30, 60, 90):
    psi = warm_start_state(WarmStart(b, theta))
    print("theta %2d  E[cut] = %.4f  P(b) = %.4f" % (theta, metrics.expectation(psi, g),
                                                     abs(psi[graph.bits_to_index(b)]) ** 2))

# every qubit's mixer axis points along its own Bloch vector, so the start is a fixed point
ws = WarmStart(b, 40)
psi = warm_start_state(ws)
out = apply_aligned_mixer(psi.copy(), ws, beta=0.7)
print("|<psi|U_m|psi>| =", abs(np.vdot(psi, out)))

# at theta = 0 only phases act: the circuit returns the classical cut whatever the angles
for gamma, beta in [(0.3, 0.1), (2.0, 1.2), (4.4, 2.9)]:
    psi = qaoa_state(g, WarmStart(b, 0), CircuitParams([gamma], [beta]))
    print("theta 0, gamma %.1f beta %.1f  ->  E = %g, BSP = %g" % (gamma, beta, metrics.expectation(psi, g),
                                                                   metrics.bsp(psi, g, b)))

# at theta = 90 the aligned mixer is the usual transverse field
g8 = graph.generate_regular(8, 3, seed=3)
p = CircuitParams([0.6, 1.1], [0.4, 0.2])
a = qaoa_state(g8, WarmStart("01101001", 90), p, "aligned")
x = qaoa_state(g8, WarmStart("01101001", 90), p, "pauli_x")
print("theta 90: max |aligned - pauli_x| =", np.abs(a - x).max())
