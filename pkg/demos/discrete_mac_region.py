#!/usr/bin/env python3
"""Rate-energy boundary of a discrete two-sender channel.

The running example is the noiseless binary adder Y = X1 + X2 with received
energy b(y) = y.  Uniform inputs maximize the sum rate (1.5 bits/use) and
already deliver E[b(Y)] = 1; pushing the energy floor toward 2 forces the
inputs toward the all-ones point, which carries no information.  The
boundary solver is cross-checked against the brute-force grid enumerator.
"""

import numpy as np

from infoenergy import (Alphabet, CostFn, DmChannel, EnergyFn, MacProblem,
                        brute_force_mac_oracle, mac_boundary_point,
                        mac_region_sweep)

# -- build the channel -------------------------------------------------------
bits = Alphabet([0.0, 1.0])
sums = Alphabet([0.0, 1.0, 2.0])
law = np.zeros((2, 2, 3))
for i in range(2):
    for j in range(2):
        law[i, j, i + j] = 1.0
adder = DmChannel.mac(bits, bits, sums, law)
problem = MacProblem(adder, CostFn([0.0, 0.0]), CostFn([0.0, 0.0]),
                     EnergyFn([0.0, 1.0, 2.0]), 0.0, 0.0)

# -- sweep the energy floor --------------------------------------------------
b_grid = np.linspace(0.0, 2.0, 9)
rows = mac_region_sweep(problem, b_grid, [(1.0, 1.0)], q_size=2)
print("binary adder, equal weights:")
print(f"  {'B':>5}  {'R1':>8}  {'R2':>8}  {'R1+R2':>8}  {'E[b(Y)]':>8}")
for r in rows:
    print(f"  {r.b_target:>5.2f}  {r.r1:>8.4f}  {r.r2:>8.4f}  "
          f"{r.r1 + r.r2:>8.4f}  {r.eb:>8.4f}")

# -- independent check at a binding floor -------------------------------------
target = 1.5
fast = mac_boundary_point(problem.with_target(target), 1.0, 1.0, q_size=4)
slow = brute_force_mac_oracle(problem.with_target(target), 1.0, 1.0,
                              q_size=2, steps=21)
print(f"\nat B = {target}: ascent solver {fast.weighted_rate:.5f} bits, "
      f"grid enumerator {slow.weighted_rate:.5f} bits "
      f"(gap {abs(fast.weighted_rate - slow.weighted_rate):.5f})")

beyond = mac_boundary_point(problem.with_target(2.5), 1.0, 1.0)
print(f"at B = 2.5: feasible={beyond.feasible} ({beyond.reason})")
