"""CSV field dumps and the run manifest."""

from __future__ import annotations

import os

import numpy as np

FIELD_HEADER = "i,j,x,y,rho,u,v,w,p,B1,B2,B3,A,divB"


def write_fields(path, grid, prim, a, divb):
    """Row-major CSV of the full state at 17 significant digits.

    ``prim`` is the primitive tuple (rho, u, v, w, p, B1, B2, B3).
    """
    ni, nj = grid.ni, grid.nj
    ii, jj = np.meshgrid(np.arange(ni), np.arange(nj), indexing="ij")
    cols = [ii, jj, grid.x_in, grid.y_in, *prim, a, divb]
    flat = [np.broadcast_to(c, (ni, nj)).ravel() for c in cols]
    with open(path, "w") as f:
        f.write(FIELD_HEADER + "\n")
        for row in zip(*flat):
            f.write("%d,%d," % (int(row[0]), int(row[1]))
                    + ",".join("%.17g" % v for v in row[2:]) + "\n")


def write_scalar_field(path, grid, name, values):
    """Reduced CSV (i,j,x,y,<name>) for scalar Hamilton-Jacobi runs."""
    ni, nj = grid.ni, grid.nj
    ii, jj = np.meshgrid(np.arange(ni), np.arange(nj), indexing="ij")
    with open(path, "w") as f:
        f.write(f"i,j,x,y,{name}\n")
        for a, b, c, d, e in zip(ii.ravel(), jj.ravel(), grid.x_in.ravel(),
                                 grid.y_in.ravel(), np.asarray(values).ravel()):
            f.write(f"{int(a)},{int(b)},{c:.17g},{d:.17g},{e:.17g}\n")


def write_manifest(path, entries):
    """Flat key=value manifest; doubles as a rerunnable config file."""
    with open(path, "w") as f:
        for key, val in entries.items():
            f.write(f"{key}={val}\n")


def read_config(path):
    """Parse a flat key=value config/manifest file."""
    out = {}
    with open(path) as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#") or "=" not in line:
                continue
            key, val = line.split("=", 1)
            out[key.strip()] = val.strip()
    return out
