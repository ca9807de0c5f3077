"""Linearity-preserving WENO solver for Hamilton-Jacobi equations.

Around every node the plane splits into four angular sectors bounded by the
edges to the four lattice neighbours.  Each sector gets its own physical
gradient, assembled from one-sided WENO derivatives whose effective stencil
coefficients are replayed on the coordinate arrays; the metric quotient then
cancels exactly on data linear in (x, y), for any nonlinear weights.  The
sector gradients feed the Lax-Friedrichs-type monotone Hamiltonian on
unstructured fans, with mesh-motion terms subtracted.

`hj_rhs_npl` is the classical dimension-by-dimension scheme, kept as the
non-preserving comparison mode.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridField, node_metrics
from .stencils import NG, windows
from .weno import EPS, hj_coefficients


# ---------------------------------------------------------------------------
# Hamiltonians
# ---------------------------------------------------------------------------

class LinearHamiltonian:
    """H(p, q) = u p + v q with node-local (or constant) coefficients.

    This is the constrained-transport form: the potential is advected by the
    local fluid velocity, so H1 = u and H2 = v.
    """

    def __init__(self, u, v):
        self.u = np.asarray(u, dtype=float)
        self.v = np.asarray(v, dtype=float)

    def __call__(self, p, q):
        return self.u * p + self.v * q

    def partial_ranges(self, box):
        return ((self.u, self.u), (self.v, self.v))

    def lambda_bound(self, box, x_tau, y_tau):
        return max(np.max(np.abs(self.u - x_tau)), np.max(np.abs(self.v - y_tau)))


def _cos_range(lo, hi):
    """Range of cos on [lo, hi]."""
    if hi - lo >= 2.0 * np.pi:
        return -1.0, 1.0
    cands = [np.cos(lo), np.cos(hi)]
    k0 = np.ceil(lo / np.pi)
    k = k0
    while k * np.pi <= hi:
        cands.append(np.cos(k * np.pi))
        k += 1
    return min(cands), max(cands)


class SineSumHamiltonian:
    """H(p, q) = sin(p + q); partials are cos(p + q) in both arguments."""

    def __call__(self, p, q):
        return np.sin(p + q)

    def partial_ranges(self, box):
        a, b, c, d = box
        lo, hi = _cos_range(a + c, b + d)
        return ((lo, hi), (lo, hi))

    def lambda_bound(self, box, x_tau, y_tau):
        (lo, hi), _ = self.partial_ranges(box)
        return max(np.max(np.abs(lo - x_tau)), np.max(np.abs(hi - x_tau)),
                   np.max(np.abs(lo - y_tau)), np.max(np.abs(hi - y_tau)))


# ---------------------------------------------------------------------------
# Sector geometry
# ---------------------------------------------------------------------------

@dataclass
class SectorGeometry:
    """Per-node angular sectors, ordered counterclockwise from D1 = (+,+).

    ``theta[m]`` is the inner angle of sector m; ``n_half[m]`` the unit
    vector of the edge shared by sectors m and m+1 (wrapping to sector 1);
    ``gamma_half[m] = tan(theta_m/2) + tan(theta_{m+1}/2)``.
    """
    theta: np.ndarray        # (4, ni, nj)
    gamma_half: np.ndarray   # (4, ni, nj)
    n_half: np.ndarray       # (4, 2, ni, nj)


def sector_geometry(grid: GridField) -> SectorGeometry:
    x3, y3 = grid.pad3(grid.x), grid.pad3(grid.y)
    ni, nj = grid.ni, grid.nj
    xc = x3[NG:-NG, NG:-NG]
    yc = y3[NG:-NG, NG:-NG]
    sl = slice(NG, NG + nj)
    sli = slice(NG, NG + ni)
    # edge vectors to the +xi, +eta, -xi, -eta neighbours (the CCW ray fan)
    rays = [
        (x3[NG + 1:NG + 1 + ni, sl] - xc, y3[NG + 1:NG + 1 + ni, sl] - yc),
        (x3[sli, NG + 1:NG + 1 + nj] - xc, y3[sli, NG + 1:NG + 1 + nj] - yc),
        (x3[NG - 1:NG - 1 + ni, sl] - xc, y3[NG - 1:NG - 1 + ni, sl] - yc),
        (x3[sli, NG - 1:NG - 1 + nj] - xc, y3[sli, NG - 1:NG - 1 + nj] - yc),
    ]
    angles = [np.arctan2(ry, rx) for rx, ry in rays]
    theta = np.empty((4,) + xc.shape)
    for m in range(4):
        nxt = angles[(m + 1) % 4]
        theta[m] = np.mod(nxt - angles[m], 2.0 * np.pi)
    if np.any(theta <= 0.0) or np.any(theta >= np.pi):
        bad = np.argwhere((theta <= 0.0) | (theta >= np.pi))[0]
        raise ValueError(
            f"degenerate sector {bad[0] + 1} at node ({bad[1]}, {bad[2]}): "
            f"inner angle {theta[tuple(bad)]:.4f} outside (0, pi)")
    tan_half = np.tan(0.5 * theta)
    gamma_half = tan_half + np.roll(tan_half, -1, axis=0)
    n_half = np.empty((4, 2) + xc.shape)
    for m in range(4):
        rx, ry = rays[(m + 1) % 4]
        norm = np.hypot(rx, ry)
        n_half[m, 0] = rx / norm
        n_half[m, 1] = ry / norm
    return SectorGeometry(theta=theta, gamma_half=gamma_half, n_half=n_half)


# ---------------------------------------------------------------------------
# Sector gradients with metric-weight reuse
# ---------------------------------------------------------------------------

def _one_sided(phi_pad, x_pad, y_pad, axis, delta, eps):
    """One-sided WENO derivatives of phi along ``axis`` plus the coordinate
    hats produced by the same effective stencils.

    Input arrays are pad-3 in both directions; outputs are interior-shaped
    dicts keyed '+'/'-'.
    """
    def prep(u):
        v = u[:, NG:-NG] if axis == 0 else u[NG:-NG, :]
        v = np.moveaxis(v, axis, -1)
        return windows(v, 7)                       # (batch, n, 7)

    wp, wx, wy = prep(phi_pad), prep(x_pad), prep(y_pad)
    out = {}
    for side in ("+", "-"):
        coeff = hj_coefficients(wp, delta, side, eps)
        dphi = np.einsum("...l,...l->...", coeff, wp)
        xhat = np.einsum("...l,...l->...", coeff, wx)
        yhat = np.einsum("...l,...l->...", coeff, wy)
        if axis == 0:
            dphi, xhat, yhat = dphi.T, xhat.T, yhat.T
        out[side] = (dphi, xhat, yhat)
    return out


# sector m (0-based) -> (xi side, eta side)
_SECTOR_SIDES = (("+", "+"), ("-", "+"), ("-", "-"), ("+", "-"))


def sector_gradients(phi_pad, grid: GridField, eps=EPS):
    """Physical gradient of phi in each of the four sectors of every node.

    Returns ``(gx, gy)`` of shape (4, ni, nj).  On data linear in (x, y) the
    quotients reduce to the exact coefficients sector by sector because the
    numerator and denominator share the same stencil weights.
    """
    x3, y3 = grid.pad3(grid.x), grid.pad3(grid.y)
    d_xi = _one_sided(phi_pad, x3, y3, 0, grid.dxi, eps)
    d_eta = _one_sided(phi_pad, x3, y3, 1, grid.deta, eps)

    shape = (4,) + d_xi["+"][0].shape
    gx = np.empty(shape)
    gy = np.empty(shape)
    for m, (sa, sb) in enumerate(_SECTOR_SIDES):
        fxi, xh_xi, yh_xi = d_xi[sa]
        feta, xh_eta, yh_eta = d_eta[sb]
        den = xh_xi * yh_eta - xh_eta * yh_xi
        if np.any(den == 0.0):
            bad = np.argwhere(den == 0.0)[0]
            raise ValueError(f"vanishing sector Jacobian at node {tuple(bad)}")
        gx[m] = (fxi * yh_eta - feta * yh_xi) / den
        gy[m] = (feta * xh_xi - fxi * xh_eta) / den
    return gx, gy


def gradient_box(gx, gy):
    return (float(gx.min()), float(gx.max()), float(gy.min()), float(gy.max()))


def lambda_bound(gx, gy, H, x_tau, y_tau):
    """Dissipation coefficient over the global sector-gradient range."""
    return float(H.lambda_bound(gradient_box(gx, gy), x_tau, y_tau))


def monotone_hamiltonian(geom: SectorGeometry, gx, gy, H, x_tau, y_tau, lam):
    """Abgrall's Lax-Friedrichs Hamiltonian with mesh-motion correction."""
    gbx = np.einsum("m...,m...->...", geom.theta, gx) / (2.0 * np.pi)
    gby = np.einsum("m...,m...->...", geom.theta, gy) / (2.0 * np.pi)
    out = H(gbx, gby) - x_tau * gbx - y_tau * gby
    diss = 0.0
    for m in range(4):
        mp = (m + 1) % 4
        diss = diss + geom.gamma_half[m] * (
            0.5 * (gx[m] + gx[mp]) * geom.n_half[m, 0]
            + 0.5 * (gy[m] + gy[mp]) * geom.n_half[m, 1])
    return out - (lam / np.pi) * diss


def hj_rhs(phi, grid: GridField, H, bc, tau, mesh_velocity=None, eps=EPS,
           geom: SectorGeometry = None, return_lambda=False):
    """Semi-discrete right-hand side -Hhat for the sector scheme."""
    if geom is None:
        geom = sector_geometry(grid)
    if mesh_velocity is None:
        x_tau = y_tau = 0.0
    else:
        x_tau = mesh_velocity[0][NG:-NG, NG:-NG]
        y_tau = mesh_velocity[1][NG:-NG, NG:-NG]
    phi_pad = bc.pad_potential(phi, grid, tau)
    gx, gy = sector_gradients(phi_pad, grid, eps)
    lam = lambda_bound(gx, gy, H, x_tau, y_tau)
    hhat = monotone_hamiltonian(geom, gx, gy, H, x_tau, y_tau, lam)
    if return_lambda:
        return -hhat, lam
    return -hhat


# ---------------------------------------------------------------------------
# Classical dimension-by-dimension scheme (the non-preserving baseline)
# ---------------------------------------------------------------------------

def hj_rhs_npl(phi, grid: GridField, H, bc, tau, mesh_velocity=None, eps=EPS,
               metrics=None, return_lambda=False):
    """Classical 1D WENO Hamilton-Jacobi right-hand side in (xi, eta).

    The transformed Hamiltonian is evaluated at the averaged one-sided
    computational derivatives with per-axis Lax-Friedrichs dissipation; the
    metric coefficients are frozen node values, which is exactly the
    combination that fails to preserve linear-in-(x, y) data on curved grids.
    """
    if metrics is None:
        x_xi, x_eta, y_xi, y_eta = node_metrics(grid, on_pad3=False)
    else:
        sl = (slice(NG, -NG), slice(NG, -NG))
        x_xi, x_eta, y_xi, y_eta = (metrics.x_xi[sl], metrics.x_eta[sl],
                                    metrics.y_xi[sl], metrics.y_eta[sl])
    jinv = x_xi * y_eta - x_eta * y_xi
    jac = 1.0 / jinv
    xi_x, xi_y = jac * y_eta, -jac * x_eta
    eta_x, eta_y = -jac * y_xi, jac * x_xi

    if mesh_velocity is None:
        x_tau = y_tau = 0.0
    else:
        x_tau = mesh_velocity[0][NG:-NG, NG:-NG]
        y_tau = mesh_velocity[1][NG:-NG, NG:-NG]

    phi_pad = bc.pad_potential(phi, grid, tau)

    def one_sided_plain(axis, delta):
        v = phi_pad[:, NG:-NG] if axis == 0 else phi_pad[NG:-NG, :]
        v = np.moveaxis(v, axis, -1)
        w = windows(v, 7)
        res = {}
        for side in ("+", "-"):
            c = hj_coefficients(w, delta, side, eps)
            d = np.einsum("...l,...l->...", c, w)
            res[side] = d.T if axis == 0 else d
        return res

    dxi = one_sided_plain(0, grid.dxi)
    deta = one_sided_plain(1, grid.deta)
    p_bar = 0.5 * (dxi["+"] + dxi["-"])
    q_bar = 0.5 * (deta["+"] + deta["-"])

    def phys(p, q):
        return xi_x * p + eta_x * q, xi_y * p + eta_y * q

    # gradient box over the one-sided combinations, for the partial ranges
    gxs, gys = [], []
    for p in (dxi["+"], dxi["-"]):
        for q in (deta["+"], deta["-"]):
            gx, gy = phys(p, q)
            gxs.append(gx)
            gys.append(gy)
    box = (min(g.min() for g in gxs), max(g.max() for g in gxs),
           min(g.min() for g in gys), max(g.max() for g in gys))
    (h1lo, h1hi), (h2lo, h2hi) = H.partial_ranges(box)

    lam_xi = 0.0
    lam_eta = 0.0
    for h1 in (h1lo, h1hi):
        for h2 in (h2lo, h2hi):
            lam_xi = max(lam_xi, float(np.max(np.abs(
                xi_x * (h1 - x_tau) + xi_y * (h2 - y_tau)))))
            lam_eta = max(lam_eta, float(np.max(np.abs(
                eta_x * (h1 - x_tau) + eta_y * (h2 - y_tau)))))

    gx_bar, gy_bar = phys(p_bar, q_bar)
    hhat = (H(gx_bar, gy_bar) - x_tau * gx_bar - y_tau * gy_bar
            - 0.5 * lam_xi * (dxi["+"] - dxi["-"])
            - 0.5 * lam_eta * (deta["+"] - deta["-"]))
    if return_lambda:
        return -hhat, max(lam_xi, lam_eta)
    return -hhat
