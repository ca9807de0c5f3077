"""Fifth-order accuracy of the sector Hamilton-Jacobi solver.

Solves phi_t = phi_x + phi_y with phi(x,y,0) = sin(x+y) on the wavy grid
and prints L1/Linf errors and observed orders at T = 0.5, mirroring the
smooth-accuracy benchmark table.

    python demos/hj_accuracy_table.py [levels]
"""

import sys

from curvmhd.driver import convergence_table, print_convergence

levels = int(sys.argv[1]) if len(sys.argv) > 1 else 3
rows = convergence_table(case="hj_accuracy", levels=levels)
print_convergence(rows)
print("\nreference values at 41^2 / 81^2: L1 = 9.37e-06 / 2.96e-07, "
      "order ~ 4.89")
