"""Produce the CSV dumps consumed by the plotting frontend.

Runs reduced-cost versions of the four figure benchmarks and writes their
final field dumps under out/figures/.  Pass --paper for the published
resolutions and final times (slow: tens of minutes).

    python demos/make_figure_data.py [--paper]
"""

import os
import sys
import time

from curvmhd.driver import RunConfig, run_case

PAPER = "--paper" in sys.argv
OUT = os.path.join("out", "figures")

runs = {
    # case                        reduced (nx, ny, tfinal)      paper
    "field_loop_wavy": ((51, 26, 0.5), (101, 51, 2.0)),
    "rotor": ((51, 51, 0.295), (101, 101, 0.295)),
    "blast_wavy": ((51, 51, 0.0025), (101, 101, 0.0025)),
    "bow_shock": ((76, 76, 0.3), (151, 151, 6.0)),
}

os.makedirs(OUT, exist_ok=True)
for case, (reduced, paper) in runs.items():
    nx, ny, tfinal = paper if PAPER else reduced
    out_dir = os.path.join(OUT, case)
    t0 = time.time()
    res = run_case(RunConfig(case=case, nx=nx, ny=ny, tfinal=tfinal,
                             out=out_dir, full_scale=PAPER))
    status = "ok" if res.ok else f"failed at t={res.failure['tau']:.4g}"
    print(f"{case:<18} {nx}x{ny} to t={tfinal}: {status} "
          f"({time.time()-t0:.0f}s) -> {out_dir}/fields_final.csv")
