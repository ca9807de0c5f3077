"""Linear finite-difference stencils shared across the solver.

Array conventions used throughout the package:

* Interior fields have shape ``(ni, nj)`` with index ``[i, j]``; ``i`` runs
  along the first computational direction (xi), ``j`` along the second (eta).
* Stencil helpers operate along the LAST axis; callers move the sweep axis
  there (cheap views).
* Fields are padded with ``NG = 3`` ghost layers per side, coordinates with
  ``2*NG = 6`` so that node metrics are available on the field-padded lattice.

Alignment of half-point (interface) arrays: applying a 6-wide stencil to a
pad-3 array of length ``n + 6`` yields ``n + 1`` values; entry ``k``
corresponds to the interface between interior nodes ``k-1`` and ``k``
(i.e. interfaces -1/2 .. n-1/2).
"""

from __future__ import annotations

import numpy as np

NG = 3

# Sixth-order central first derivative at nodes (divide by spacing).
D6_NODE = np.array([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0]) / 60.0

# Sixth-order midpoint interpolation, offsets -2..3 from the left node.
INTERP6_HALF = np.array([3.0, -25.0, 150.0, 150.0, -25.0, 3.0]) / 256.0

# Central approximations of dxi^2 * d2f/dxi^2 and dxi^4 * d4f/dxi^4 at the
# half point, offsets -2..3.  Together with INTERP6_HALF these telescope to
# D6_NODE: differencing (INTERP6_HALF - D2_HALF/24 + 7*D4_HALF/5760) across
# one cell reproduces the 7-point sixth-order derivative exactly, which is
# what makes constant states cancel on arbitrary smooth meshes.
D2_HALF = np.array([-5.0, 39.0, -34.0, -34.0, 39.0, -5.0]) / 48.0
D4_HALF = np.array([1.0, -3.0, 2.0, 2.0, -3.0, 1.0]) / 2.0

# The composite half-point flux operator and its cross-cell telescoped form.
FLUX_HALF = INTERP6_HALF - D2_HALF / 24.0 + 7.0 * D4_HALF / 5760.0


def slide(u: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    """Correlate ``u`` with ``coeffs`` along the last axis (valid region).

    ``out[..., k] = sum_l coeffs[l] * u[..., k + l]``; the last axis shrinks
    by ``len(coeffs) - 1``.
    """
    width = len(coeffs)
    n_out = u.shape[-1] - width + 1
    out = coeffs[0] * u[..., :n_out]
    for l in range(1, width):
        out += coeffs[l] * u[..., l:l + n_out]
    return out


def windows(u: np.ndarray, width: int) -> np.ndarray:
    """Sliding windows of ``width`` along the last axis: shape (..., n_out, width)."""
    return np.lib.stride_tricks.sliding_window_view(u, width, axis=-1)


def node_derivative(u: np.ndarray, delta: float) -> np.ndarray:
    """Sixth-order first derivative at nodes; consumes 3 points per side."""
    return slide(u, D6_NODE) / delta


def half_interp(u: np.ndarray) -> np.ndarray:
    """Sixth-order midpoint interpolation; consumes the -2..3 footprint."""
    return slide(u, INTERP6_HALF)
