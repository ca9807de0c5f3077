"""Semi-discrete conservation-law right-hand side on the curvilinear lattice.

The numerical flux follows the alternative formulation: WENO-interpolate the
state (not the flux) to the interface in characteristic space, evaluate the
transformed flux there with midpoint-interpolated metrics, add the two
central corrections, and damp the corrections with the oscillation filter
sigma.  For constant states everything collapses to the linear composite
operator, whose cross-cell difference is the sixth-order node derivative;
combined with the matching metric discretisation the right-hand side then
vanishes to roundoff on every grid.

Sweeps run along the last axis of the padded arrays; `mhd_rhs` handles the
transposes for the two directions.
"""

from __future__ import annotations

import numpy as np

from . import physics
from .grid import GridField, MetricSet, free_stream_metrics
from .stencils import D2_HALF, D4_HALF, INTERP6_HALF, NG, slide, windows
from .weno import EPS, interpolate_pair


def _sigma_from_indicators(is_minus, is_plus, eps):
    """Oscillation filter from the characteristic smoothness indicators.

    Per field and side the ratio (min IS + eps) / (|IS0 - IS2| + eps) is 1 on
    constants (all indicators vanish identically), stays 1 on resolved smooth
    data (|IS0 - IS2| is two orders smaller than the indicators themselves)
    and drops to O(dxi^2) across a strong discontinuity.  The interface value
    is the minimum over fields and sides, clipped to [0, 1].
    """
    out = None
    for trio in (is_minus, is_plus):
        is0, is1, is2 = trio
        smallest = np.minimum(np.minimum(is0, is1), is2)
        spread = np.abs(is0 - is2)
        ratio = (smallest + eps) / (spread + eps)
        worst = ratio.min(axis=-1)  # over characteristic fields
        out = worst if out is None else np.minimum(out, worst)
    return np.clip(out, 0.0, 1.0)


def sigma(qwin, direction, gamma=physics.GAMMA, eps=EPS):
    """Filter value for one 6-state window (spec-level entry point).

    ``qwin`` has shape (6, 8); ``direction`` is the unit interface normal.
    """
    q = np.asarray(qwin, dtype=float)
    qm = 0.5 * (q[2] + q[3])
    n1, n2 = direction
    R, _, _ = physics.eigen_right(qm, n1, n2, gamma, where="sigma")
    v = np.linalg.solve(R, q.T)          # (8, 6) characteristic windows
    _, _, is_m, is_p = interpolate_pair(v, eps)
    return float(_sigma_from_indicators(is_m, is_p, eps))


def interface_flux(qpad, p_coef, a_coef, b_coef, delta, alpha,
                   gamma=physics.GAMMA, eps=EPS, sigma_on=True,
                   where="interface_flux"):
    """Numerical fluxes at the interfaces of a padded line (or batch of lines).

    ``qpad`` has shape (8, ..., n+6); the metric coefficient arrays match its
    trailing shape and hold the node values of (J^-1 k_t, J^-1 k_x, J^-1 k_y)
    for the sweep direction.  Returns an (8, ..., n+1) flux array covering
    interfaces -1/2 .. n-1/2.
    """
    ftil_node = physics.transformed_flux(qpad, p_coef, a_coef, b_coef, gamma)

    # interface metrics: midpoint interpolation of the node coefficients
    ph = slide(p_coef, INTERP6_HALF)
    ah = slide(a_coef, INTERP6_HALF)
    bh = slide(b_coef, INTERP6_HALF)

    knorm = np.hypot(ah, bh)
    n1 = ah / knorm
    n2 = bh / knorm

    qm = 0.5 * (qpad[..., 2:-3] + qpad[..., 3:-2])     # interface mean state
    R, _, _ = physics.eigen_right(qm, n1, n2, gamma, where=where)

    # characteristic windows of the deviation from the mean: (..., n+1, 8, 6).
    # Projecting deviations keeps the R-roundtrip roundoff proportional to
    # the local variation, which is what free-stream runs live on.
    W = windows(qpad, 6)                                # (8, ..., n+1, 6)
    W = np.moveaxis(W, 0, -2) - np.moveaxis(qm, 0, -1)[..., None]
    V = np.linalg.solve(R, W)
    vminus, vplus, is_m, is_p = interpolate_pair(V, eps)
    qminus = qm + np.moveaxis(R @ vminus[..., None], -2, 0)[..., 0]
    qplus = qm + np.moveaxis(R @ vplus[..., None], -2, 0)[..., 0]

    for tag, qq in (("minus", qminus), ("plus", qplus)):
        rho = qq[physics.RHO]
        pr = physics.pressure(qq, gamma)
        bad = ~((rho > 0.0) & (pr > 0.0))
        if np.any(bad):
            node = np.unravel_index(np.argmax(bad), bad.shape)
            raise physics.InvalidStateError(
                f"interpolated state ({tag} side) lost positivity",
                node=tuple(int(k) for k in node), where=where)

    h = 0.5 * (physics.transformed_flux(qminus, ph, ah, bh, gamma)
               + physics.transformed_flux(qplus, ph, ah, bh, gamma)
               - alpha * (qplus - qminus))

    d2 = slide(ftil_node, D2_HALF)
    d4 = slide(ftil_node, D4_HALF)
    correction = -d2 / 24.0 + (7.0 / 5760.0) * d4
    if sigma_on:
        sig = _sigma_from_indicators(is_m, is_p, eps)
        correction = sig * correction
    return h + correction


def directional_divergence(qpad, p_coef, a_coef, b_coef, delta, alpha,
                           gamma=physics.GAMMA, eps=EPS, sigma_on=True,
                           where="sweep"):
    """(fhat_{k+1/2} - fhat_{k-1/2}) / delta along the last axis."""
    fhat = interface_flux(qpad, p_coef, a_coef, b_coef, delta, alpha,
                          gamma, eps, sigma_on, where)
    return (fhat[..., 1:] - fhat[..., :-1]) / delta


def lf_speeds(q, metrics: MetricSet, gamma=physics.GAMMA):
    """Global Lax-Friedrichs speeds (alpha_xi, alpha_eta) over the interior."""
    sl = (slice(NG, -NG), slice(NG, -NG))
    alpha_xi = physics.max_wave_speed(
        q, (metrics.p_xi[sl], metrics.y_eta[sl], -metrics.x_eta[sl]), gamma)
    alpha_eta = physics.max_wave_speed(
        q, (metrics.p_eta[sl], -metrics.y_xi[sl], metrics.x_xi[sl]), gamma)
    return alpha_xi, alpha_eta


def mhd_rhs(qt, jinv, grid: GridField, bc, tau, mesh_velocity=None,
            gamma=physics.GAMMA, eps=EPS, sigma_on=True,
            metrics: MetricSet = None, where="mhd_rhs"):
    """Right-hand sides (dqt/dtau, dJ^-1/dtau) on the interior lattice.

    ``qt`` is the J^-1-scaled conserved field, ``jinv`` its evolved Jacobian
    companion; the physical state fed to the flux assembly is qt / jinv.
    """
    if metrics is None:
        metrics = free_stream_metrics(grid, mesh_velocity)
    q = qt / jinv
    qpad = bc.pad_state(q, grid, tau)

    alpha_xi, alpha_eta = lf_speeds(q, metrics, gamma)

    # xi sweep: arrange as (8, nj, ni+6)
    qx = np.swapaxes(qpad[:, :, NG:-NG], 1, 2)
    div_xi = directional_divergence(
        qx,
        metrics.p_xi[:, NG:-NG].T,
        metrics.y_eta[:, NG:-NG].T,
        -metrics.x_eta[:, NG:-NG].T,
        grid.dxi, alpha_xi, gamma, eps, sigma_on, where=where + "/xi")
    div_xi = np.swapaxes(div_xi, 1, 2)

    # eta sweep: (8, ni, nj+6)
    qe = qpad[:, NG:-NG, :]
    div_eta = directional_divergence(
        qe,
        metrics.p_eta[NG:-NG, :],
        -metrics.y_xi[NG:-NG, :],
        metrics.x_xi[NG:-NG, :],
        grid.deta, alpha_eta, gamma, eps, sigma_on, where=where + "/eta")

    return -(div_xi + div_eta), metrics.jinv_tau.copy()
