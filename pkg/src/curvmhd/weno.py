"""Fifth-order WENO building blocks.

Two families live here:

* half-point *interpolation* of point values (used by the conservation-law
  solver on the conserved state, component-wise in characteristic space);
* one-sided *derivative* approximation at nodes (used by the Hamilton-Jacobi
  solver), which also exposes its effective stencil coefficients so the same
  nonlinear weights can be replayed on the coordinate arrays.

All kernels run on windows stacked along the last axis so they vectorise over
whole grid lines at once.  The scalar entry points below are thin wrappers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EPS = 1e-6

# ---------------------------------------------------------------------------
# Interpolation to the half point (left-biased, target i+1/2)
# ---------------------------------------------------------------------------

# Linear weights for the three 3-point interpolants, r = 0 rightmost.
D_INTERP = (5.0 / 16.0, 5.0 / 8.0, 1.0 / 16.0)

# Sub-stencil interpolants and smoothness-indicator difference operators on
# the window (offsets -2..2), rows r = 0, 1, 2.
_P_MAT = np.array([
    [0.0, 0.0, 0.375, 0.75, -0.125],
    [0.0, -0.125, 0.75, 0.375, 0.0],
    [0.375, -1.25, 1.875, 0.0, 0.0],
]).T.copy()
_IS_CURV = np.array([
    [0.0, 0.0, 1.0, -2.0, 1.0],
    [0.0, 1.0, -2.0, 1.0, 0.0],
    [1.0, -2.0, 1.0, 0.0, 0.0],
]).T.copy()
_IS_SLOPE = np.array([
    [0.0, 0.0, 3.0, -4.0, 1.0],
    [0.0, 1.0, 0.0, -1.0, 0.0],
    [1.0, -4.0, 3.0, 0.0, 0.0],
]).T.copy()
_D_COL = np.array(D_INTERP)


def _interp_core(w5: np.ndarray, eps: float):
    """Left-biased interpolation at i+1/2 from values at i-2..i+2.

    ``w5[..., m]`` holds the value at offset ``m - 2`` from node i.  Returns
    ``(value, (IS0, IS1, IS2))``.  The window is shifted by the node value
    (affine invariance), which keeps constant data bitwise exact.
    """
    base = w5[..., 2]
    v = w5 - base[..., None]

    p = v @ _P_MAT                        # (..., 3) sub-interpolants
    curv = v @ _IS_CURV
    slope = v @ _IS_SLOPE
    isv = (13.0 / 12.0) * curv * curv + 0.25 * slope * slope

    alpha = _D_COL / (isv + eps) ** 2
    asum = alpha.sum(axis=-1)
    om0 = alpha[..., 0] / asum
    om2 = alpha[..., 2] / asum
    p0, p1, p2 = p[..., 0], p[..., 1], p[..., 2]
    # Writing the result as p1 + corrections keeps the omegas summing to one
    # by construction.
    value = base + p1 + om0 * (p0 - p1) + om2 * (p2 - p1)
    return value, (isv[..., 0], isv[..., 1], isv[..., 2])


def interpolate_pair(w6: np.ndarray, eps: float = EPS):
    """Interpolate both one-sided values at the interface inside ``w6``.

    ``w6[..., m]`` holds the value at offset ``m - 2`` from the left node of
    the interface.  Returns ``(minus, plus, IS_minus, IS_plus)``; the plus
    side is the mirror image about the half point.
    """
    minus, is_m = _interp_core(w6[..., 0:5], eps)
    plus, is_p = _interp_core(w6[..., 5:0:-1], eps)
    return minus, plus, is_m, is_p


def weno5_interpolate(values, side: str, eps: float = EPS) -> float:
    """Scalar WENO interpolation at the half point of a 6-value window.

    ``values`` are samples at offsets -2..3 from the left interface node;
    ``side`` selects the left- ('-') or right-biased ('+') interpolant.
    """
    w = np.asarray(values, dtype=float)
    if w.shape[-1] != 6:
        raise ValueError("weno5_interpolate expects 6 stencil values")
    if side == "-":
        return _interp_core(w[..., 0:5], eps)[0]
    if side == "+":
        return _interp_core(w[..., 5:0:-1], eps)[0]
    raise ValueError(f"side must be '-' or '+', got {side!r}")


# ---------------------------------------------------------------------------
# One-sided derivatives for Hamilton-Jacobi equations
# ---------------------------------------------------------------------------

D_HJ = (0.3, 0.6, 0.1)

# Sub-stencil derivative formulas for the right-biased side on the offsets
# -3..3 window (rows r = 0, 1, 2); multiply by 1/delta.
_HJ_PLUS_BASIS = np.array([
    [0.0, 1.0 / 6.0, -1.0, 0.5, 1.0 / 3.0, 0.0, 0.0],
    [0.0, 0.0, -1.0 / 3.0, -0.5, 1.0, -1.0 / 6.0, 0.0],
    [0.0, 0.0, 0.0, -11.0 / 6.0, 3.0, -1.5, 1.0 / 3.0],
])
# Mirror symmetry: c^-_l = -c^+_{-l}.
_HJ_MINUS_BASIS = -_HJ_PLUS_BASIS[:, ::-1]


def hj_weights(w7: np.ndarray, side: str, eps: float = EPS):
    """Nonlinear weights (om0, om1, om2) for a one-sided HJ derivative.

    ``w7[..., m]`` holds phi at offset ``m - 3`` from the node.  Smoothness
    is measured on scaled second differences, mirrored for the minus side.
    """
    d2 = w7[..., 2:] - 2.0 * w7[..., 1:-1] + w7[..., :-2]  # offsets -2..2
    if side == "+":
        a, b, c, d = d2[..., 1], d2[..., 2], d2[..., 3], d2[..., 4]
    elif side == "-":
        a, b, c, d = d2[..., 3], d2[..., 2], d2[..., 1], d2[..., 0]
    else:
        raise ValueError(f"side must be '-' or '+', got {side!r}")
    is0 = 13.0 * (b - a) ** 2 + 3.0 * (3.0 * b - a) ** 2
    is1 = 13.0 * (c - b) ** 2 + 3.0 * (c + b) ** 2
    is2 = 13.0 * (d - c) ** 2 + 3.0 * (d - 3.0 * c) ** 2

    a0 = D_HJ[0] / (is0 + eps) ** 2
    a1 = D_HJ[1] / (is1 + eps) ** 2
    a2 = D_HJ[2] / (is2 + eps) ** 2
    asum = a0 + a1 + a2
    om0 = a0 / asum
    om2 = a2 / asum
    om1 = 1.0 - om0 - om2
    return om0, om1, om2, (is0, is1, is2)


def hj_coefficients(w7: np.ndarray, delta: float, side: str, eps: float = EPS):
    """Effective 7-point derivative coefficients (offsets -3..3, 1/delta included).

    The returned array has shape ``w7.shape`` and satisfies
    ``derivative = sum_l coeffs[..., l] * w7[..., l]``.  Applying the same
    coefficients to other samples on the stencil (e.g. the physical
    coordinates) replays the nonlinear weights on those fields.
    """
    if delta <= 0:
        raise ValueError("spacing must be positive")
    om0, om1, om2, _ = hj_weights(w7, side, eps)
    basis = _HJ_PLUS_BASIS if side == "+" else _HJ_MINUS_BASIS
    coeffs = (om0[..., None] * basis[0]
              + om1[..., None] * basis[1]
              + om2[..., None] * basis[2]) / delta
    return coeffs


@dataclass
class WenoOperator:
    """Effective one-sided derivative stencil produced by nonlinear weighting.

    ``coeffs[l]`` multiplies the sample at offset ``l - 3`` from the node;
    the spacing factor is already folded in, and the coefficients sum to
    zero (derivative consistency).
    """
    side: str
    coeffs: np.ndarray
    weights: tuple
    indicators: tuple

    @property
    def offsets(self):
        return np.arange(-3, 4)


def weno5_hj_derivative(values, delta: float, side: str, eps: float = EPS):
    """One-sided fifth-order HJ derivative at the centre of a 7-value window.

    Returns ``(derivative, WenoOperator)``.
    """
    w = np.asarray(values, dtype=float)
    if w.shape[-1] != 7:
        raise ValueError("weno5_hj_derivative expects 7 stencil values")
    om0, om1, om2, indicators = hj_weights(w, side, eps)
    coeffs = hj_coefficients(w, delta, side, eps)
    deriv = np.einsum("...l,...l->...", coeffs, w)
    if deriv.ndim == 0:
        deriv = float(deriv)
    return deriv, WenoOperator(side=side, coeffs=coeffs,
                               weights=(om0, om1, om2), indicators=indicators)


def apply_operator(op: WenoOperator, samples) -> float:
    """Apply an effective stencil to samples on the same footprint."""
    s = np.asarray(samples, dtype=float)
    if s.shape != np.shape(op.coeffs):
        raise ValueError("samples do not match the operator footprint")
    return float(np.einsum("...l,...l->...", op.coeffs, s))


# ---------------------------------------------------------------------------
# Characteristic-space system interpolation
# ---------------------------------------------------------------------------

def weno5_interpolate_system(qwin: np.ndarray, basis, eps: float = EPS):
    """Interpolate a 6-state window of conserved vectors at its interface.

    ``qwin`` has shape (6, ncomp); ``basis`` provides ``right`` (R) and
    ``left`` (R^-1) matrices built at the interface average.  Each component
    is interpolated in characteristic space and projected back.
    """
    q = np.asarray(qwin, dtype=float)
    v = q @ basis.left.T                      # (6, ncomp) characteristic
    minus, plus, _, _ = interpolate_pair(np.moveaxis(v, 0, -1), eps)
    return basis.right @ minus, basis.right @ plus
