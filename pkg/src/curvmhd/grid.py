"""Curvilinear test grids and their metric discretisations.

All generators have closed-form node coordinates, so ghost layers are filled
by evaluating the formula at indices outside the lattice (for randomized
grids only interior nodes are displaced, which keeps ghosts consistent).

The metric discretisation is the one that makes free-stream preservation an
algebraic identity: first derivatives of the coordinates are taken at nodes
with the 7-point sixth-order central stencil, and interface values are their
6-point midpoint interpolation.  Differencing the composite half-point flux
operator across a cell then reproduces the same node derivative exactly, so
the discrete metric identities I_x = I_y = I_t = 0 hold to roundoff on any
mesh, moving or not.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .stencils import D6_NODE, FLUX_HALF, INTERP6_HALF, NG, slide


class DegenerateMeshError(ValueError):
    """Raised when the discrete Jacobian changes sign or vanishes."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


def _slide_axis(u, coeffs, axis):
    return np.moveaxis(slide(np.moveaxis(u, axis, -1), coeffs), -1, axis)


@dataclass(frozen=True)
class GridSpec:
    """Parameters of one grid family.

    Wave amplitudes ``ax, ay`` are in grid units (the paper's A_x, A_y); the
    physical displacement is ``dxi * ax`` / ``deta * ay``.  ``perturb`` is
    the randomized-grid displacement as a fraction of the uniform spacing.
    """
    kind: str                      # identity | wavy | randomized | moving_wavy | spherical
    imax: int
    jmax: int
    lx: float = 1.0
    ly: float = 1.0
    x_min: Optional[float] = None  # default -lx/2 (0 for identity/randomized)
    y_min: Optional[float] = None
    ax: float = 0.0
    ay: float = 0.0
    nx_wave: float = 0.0
    ny_wave: float = 0.0
    omega: float = 0.0
    wobble: float = 0.1
    r0: float = 0.125
    r1: float = 0.3
    r2: float = 0.65
    theta: float = 5.0 * np.pi / 12.0
    dxi_fixed: Optional[float] = None
    deta_fixed: Optional[float] = None
    perturb: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("identity", "wavy", "randomized", "moving_wavy",
                             "spherical"):
            raise ValueError(f"unknown grid kind {self.kind!r}")
        if self.imax < 7 or self.jmax < 7:
            raise ValueError("grids must be at least 7 nodes wide")
        if self.dxi <= 0 or self.deta <= 0:
            raise ValueError("grid spacing must be positive")

    @property
    def dxi(self) -> float:
        return self.dxi_fixed if self.dxi_fixed is not None else self.lx / (self.imax - 1)

    @property
    def deta(self) -> float:
        return self.deta_fixed if self.deta_fixed is not None else self.ly / (self.jmax - 1)

    @property
    def origin(self):
        x0 = self.x_min
        y0 = self.y_min
        if x0 is None:
            x0 = 0.0 if self.kind in ("identity", "randomized") else -0.5 * self.lx
        if y0 is None:
            y0 = 0.0 if self.kind in ("identity", "randomized") else -0.5 * self.ly
        return x0, y0

    @property
    def moving(self) -> bool:
        return self.kind == "moving_wavy"


def _random_displacement(spec: GridSpec):
    """Interior-node displacement of a randomized grid (zero on the boundary ring)."""
    rng = np.random.default_rng(spec.seed)
    angle = rng.uniform(0.0, 2.0 * np.pi, size=(spec.imax - 2, spec.jmax - 2))
    mag = spec.perturb * min(spec.dxi, spec.deta)
    dx = np.zeros((spec.imax, spec.jmax))
    dy = np.zeros((spec.imax, spec.jmax))
    dx[1:-1, 1:-1] = mag * np.cos(angle)
    dy[1:-1, 1:-1] = mag * np.sin(angle)
    return dx, dy


def coords_at(spec: GridSpec, ii: np.ndarray, jj: np.ndarray, tau: float = 0.0):
    """Node coordinates at (possibly ghost) 0-based index arrays ``ii, jj``."""
    ii = np.asarray(ii, dtype=float)
    jj = np.asarray(jj, dtype=float)
    x0, y0 = spec.origin

    if spec.kind == "identity":
        return x0 + spec.dxi * ii, y0 + spec.deta * jj

    if spec.kind in ("wavy", "moving_wavy"):
        amp = 1.0
        if spec.kind == "moving_wavy":
            amp = 1.0 + spec.wobble * np.sin(2.0 * np.pi * spec.omega * tau)
        x = x0 + spec.dxi * (ii + spec.ax * amp
                             * np.sin(spec.ny_wave * jj * spec.deta / spec.ly))
        y = y0 + spec.deta * (jj + spec.ay * amp
                              * np.sin(spec.nx_wave * ii * spec.dxi / spec.lx))
        return x, y

    if spec.kind == "spherical":
        s = spec.dxi * ii
        ang = np.pi + spec.theta * (1.0 - 2.0 * spec.deta * jj)
        x = (spec.r1 - (spec.r1 - spec.r0) * s) * np.cos(ang)
        y = (spec.r2 - (spec.r2 - spec.r0) * s) * np.sin(ang)
        return x, y

    # randomized: uniform lattice plus seeded interior displacement
    x = x0 + spec.dxi * ii
    y = y0 + spec.deta * jj
    if spec.perturb != 0.0:
        dx, dy = _random_displacement(spec)
        inside = ((ii >= 0) & (ii <= spec.imax - 1)
                  & (jj >= 0) & (jj <= spec.jmax - 1))
        iw = np.clip(ii.astype(int), 0, spec.imax - 1)
        jw = np.clip(jj.astype(int), 0, spec.jmax - 1)
        x = x + np.where(inside, dx[iw, jw], 0.0)
        y = y + np.where(inside, dy[iw, jw], 0.0)
    return x, y


@dataclass
class GridField:
    """Node coordinates at one time, padded with ``pad`` ghost layers."""
    spec: GridSpec
    tau: float
    x: np.ndarray
    y: np.ndarray
    pad: int = 2 * NG

    @property
    def ni(self) -> int:
        return self.x.shape[0] - 2 * self.pad

    @property
    def nj(self) -> int:
        return self.x.shape[1] - 2 * self.pad

    @property
    def dxi(self) -> float:
        return self.spec.dxi

    @property
    def deta(self) -> float:
        return self.spec.deta

    def interior(self, u=None):
        p = self.pad
        u = self.x if u is None else u
        return u[p:-p, p:-p]

    @property
    def x_in(self):
        return self.interior(self.x)

    @property
    def y_in(self):
        return self.interior(self.y)

    def pad3(self, u):
        """View with NG ghost layers (input must be the pad-6 coordinate arrays)."""
        k = self.pad - NG
        return u[k:-k, k:-k]


def generate(spec: GridSpec, tau: float = 0.0) -> GridField:
    """Build the padded coordinate arrays and reject degenerate meshes."""
    pad = 2 * NG
    ii = np.arange(-pad, spec.imax + pad)
    jj = np.arange(-pad, spec.jmax + pad)
    II, JJ = np.meshgrid(ii, jj, indexing="ij")
    x, y = coords_at(spec, II, JJ, tau)
    g = GridField(spec=spec, tau=tau, x=x, y=y, pad=pad)

    jinv = jacobian_inverse(g)
    if np.min(jinv) * np.max(jinv) <= 0.0 or np.min(np.abs(jinv)) < 1e-300:
        flat = np.argmin(np.abs(jinv))
        node = np.unravel_index(flat, jinv.shape)
        raise DegenerateMeshError(
            f"degenerate mesh: discrete Jacobian changes sign near node {node}",
            node=node)
    return g


def node_metrics(g: GridField, on_pad3: bool = True):
    """Node coordinate derivatives (x_xi, x_eta, y_xi, y_eta).

    With ``on_pad3`` the arrays cover the NG-padded lattice (needed to
    interpolate metrics onto boundary interfaces); otherwise the interior.
    """
    trim = 0 if on_pad3 else NG
    k = NG + trim
    x_xi = _slide_axis(g.x, D6_NODE, 0)[:, k:-k] / g.dxi
    y_xi = _slide_axis(g.y, D6_NODE, 0)[:, k:-k] / g.dxi
    x_eta = _slide_axis(g.x, D6_NODE, 1)[k:-k, :] / g.deta
    y_eta = _slide_axis(g.y, D6_NODE, 1)[k:-k, :] / g.deta
    if not on_pad3:
        x_xi, y_xi = x_xi[trim:-trim, :], y_xi[trim:-trim, :]
        x_eta, y_eta = x_eta[:, trim:-trim], y_eta[:, trim:-trim]
    return x_xi, x_eta, y_xi, y_eta


def jacobian_inverse(g: GridField, on_pad3: bool = False):
    """Discrete J^-1 = x_xi y_eta - x_eta y_xi from the node stencils."""
    x_xi, x_eta, y_xi, y_eta = node_metrics(g, on_pad3=on_pad3)
    return x_xi * y_eta - x_eta * y_xi


@dataclass
class MetricSet:
    """Node metrics on the padded lattice plus interface values.

    Interface arrays follow the solver alignment: the xi-half arrays have
    shape (ni+1, nj) covering interfaces -1/2 .. ni-1/2, and hold the
    eta-derivatives entering the xi-flux (and vice versa).  Temporal entries
    are zero for stationary grids.
    """
    dxi: float
    deta: float
    x_xi: np.ndarray
    x_eta: np.ndarray
    y_xi: np.ndarray
    y_eta: np.ndarray
    jinv: np.ndarray
    x_tau: np.ndarray
    y_tau: np.ndarray
    p_xi: np.ndarray           # J^-1 xi_t = y_tau x_eta - x_tau y_eta at nodes
    p_eta: np.ndarray          # J^-1 eta_t = x_tau y_xi - y_tau x_xi at nodes
    xh_y_eta: np.ndarray       # y_eta at (i+1/2, j)
    xh_x_eta: np.ndarray
    xh_p: np.ndarray           # J^-1 xi_t at (i+1/2, j)
    yh_y_xi: np.ndarray        # y_xi at (i, j+1/2)
    yh_x_xi: np.ndarray
    yh_p: np.ndarray
    jinv_tau: np.ndarray       # interior (J^-1)_tau


def free_stream_metrics(g: GridField, mesh_velocity=None) -> MetricSet:
    """All metric terms the conservation-law solver consumes.

    ``mesh_velocity`` is an optional pair of pad-3 arrays (x_tau, y_tau);
    omitted for stationary grids.
    """
    x_xi, x_eta, y_xi, y_eta = node_metrics(g, on_pad3=True)
    jinv = x_xi * y_eta - x_eta * y_xi

    if mesh_velocity is None:
        x_tau = np.zeros_like(x_xi)
        y_tau = np.zeros_like(x_xi)
    else:
        x_tau, y_tau = mesh_velocity
    p_xi = y_tau * x_eta - x_tau * y_eta
    p_eta = x_tau * y_xi - y_tau * x_xi

    def to_xi_half(u):
        return _slide_axis(u[:, NG:-NG], INTERP6_HALF, 0)

    def to_eta_half(u):
        return _slide_axis(u[NG:-NG, :], INTERP6_HALF, 1)

    jinv_tau = -(_slide_axis(p_xi[:, NG:-NG], D6_NODE, 0) / g.dxi
                 + _slide_axis(p_eta[NG:-NG, :], D6_NODE, 1) / g.deta)

    return MetricSet(
        dxi=g.dxi, deta=g.deta,
        x_xi=x_xi, x_eta=x_eta, y_xi=y_xi, y_eta=y_eta, jinv=jinv,
        x_tau=x_tau, y_tau=y_tau, p_xi=p_xi, p_eta=p_eta,
        xh_y_eta=to_xi_half(y_eta), xh_x_eta=to_xi_half(x_eta),
        xh_p=to_xi_half(p_xi),
        yh_y_xi=to_eta_half(y_xi), yh_x_xi=to_eta_half(x_xi),
        yh_p=to_eta_half(p_eta),
        jinv_tau=jinv_tau,
    )


def metric_identities(m: MetricSet):
    """Discrete I_x, I_y assembled with the scheme's own flux operator.

    The composite half-point operator (midpoint interpolation plus the two
    central corrections) is what the flux applies to the metric terms of a
    constant state; its cross-cell difference telescopes to the node
    derivative, so both identities vanish to roundoff on any mesh.
    """
    def half_xi(u):
        return _slide_axis(u[:, NG:-NG], FLUX_HALF, 0)

    def half_eta(u):
        return _slide_axis(u[NG:-NG, :], FLUX_HALF, 1)

    fx_ye = half_xi(m.y_eta)
    fe_yx = half_eta(m.y_xi)
    fx_xe = half_xi(m.x_eta)
    fe_xx = half_eta(m.x_xi)
    i_x = ((fx_ye[1:, :] - fx_ye[:-1, :]) / m.dxi
           - (fe_yx[:, 1:] - fe_yx[:, :-1]) / m.deta)
    i_y = (-(fx_xe[1:, :] - fx_xe[:-1, :]) / m.dxi
           + (fe_xx[:, 1:] - fe_xx[:, :-1]) / m.deta)
    return i_x, i_y


def temporal_jacobian_rate(g: GridField, mesh_velocity) -> np.ndarray:
    """(J^-1)_tau from the identity I_t = 0, on the interior lattice."""
    return free_stream_metrics(g, mesh_velocity).jinv_tau


_STAGE_TIMES = (0.0, 1.0, 0.5)


def stage_grid(spec: GridSpec, tau_n: float, dtau: float, stage: int) -> GridField:
    """Grid snapshot at the effective time of an RK3 stage."""
    return generate(spec, tau_n + _STAGE_TIMES[stage] * dtau)


def stage_mesh_velocity(spec: GridSpec, tau_n: float, dtau: float, stage: int,
                        pad: int = NG):
    """Mesh velocities that keep the RK3 convex combinations on the moving grid.

    Stage 2 carries the factor 1/(2 dtau): the final combination weights the
    stage rate by 2/3, so this is the unique choice for which rigid
    translation x = xi + c tau returns exactly c at every stage.
    """
    if dtau <= 0:
        raise ValueError("dtau must be positive")
    ii = np.arange(-pad, spec.imax + pad)
    jj = np.arange(-pad, spec.jmax + pad)
    II, JJ = np.meshgrid(ii, jj, indexing="ij")
    if not spec.moving:
        z = np.zeros(II.shape)
        return z, z.copy()
    x0, y0 = coords_at(spec, II, JJ, tau_n)
    x1, y1 = coords_at(spec, II, JJ, tau_n + dtau)
    xh, yh = coords_at(spec, II, JJ, tau_n + 0.5 * dtau)
    if stage == 0:
        return (x1 - x0) / dtau, (y1 - y0) / dtau
    if stage == 1:
        return ((4.0 * xh - 3.0 * x0 - x1) / dtau,
                (4.0 * yh - 3.0 * y0 - y1) / dtau)
    if stage == 2:
        return ((3.0 * x1 - x0 - 2.0 * xh) / (2.0 * dtau),
                (3.0 * y1 - y0 - 2.0 * yh) / (2.0 * dtau))
    raise ValueError(f"stage must be 0, 1 or 2, got {stage}")


def write_grid_csv(g: GridField, path):
    """Dump interior node coordinates as CSV (i,j,x,y, full precision)."""
    ni, nj = g.ni, g.nj
    ii, jj = np.meshgrid(np.arange(ni), np.arange(nj), indexing="ij")
    data = np.column_stack([ii.ravel(), jj.ravel(),
                            g.x_in.ravel(), g.y_in.ravel()])
    with open(path, "w") as f:
        f.write("i,j,x,y\n")
        for row in data:
            f.write(f"{int(row[0])},{int(row[1])},{row[2]:.17g},{row[3]:.17g}\n")
