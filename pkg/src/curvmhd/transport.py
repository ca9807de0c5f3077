"""Constrained-transport glue: coupled evolution of the fluid and potential.

One full step advances (J^-1 q, J^-1, A) through the three TVD-RK3 stages
with consistent stage grids and mesh velocities, then replaces (B1, B2) by
the discrete curl of the new potential and corrects the total energy so the
pressure is untouched by the replacement.  Curl, coordinates and the curl's
own Jacobian all use the same sixth-order central stencils; that common
discretisation is what makes the curl of a linear potential exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fluxes, hamiltonian, physics
from .grid import (GridField, GridSpec, free_stream_metrics, generate,
                   node_metrics, stage_grid, stage_mesh_velocity)
from .rk import rk3_advance
from .stencils import D6_NODE, NG, slide
from .weno import EPS


class SolverFailure(RuntimeError):
    """A run aborted on a physical-validity check, with provenance."""

    def __init__(self, cause: physics.InvalidStateError, case="", step=0,
                 stage=None, tau=0.0):
        self.cause = cause
        self.case = case
        self.step = step
        self.stage = stage
        self.tau = tau
        at = f"step {step}" + (f" stage {stage}" if stage is not None else "")
        super().__init__(f"[{case}] {at} tau={tau:.6g}: {cause}")


def _slide_axis(u, coeffs, axis):
    return np.moveaxis(slide(np.moveaxis(u, axis, -1), coeffs), -1, axis)


def discrete_curl(a_pad, grid: GridField):
    """(B1, B2) = curl of the potential, sixth-order stencils throughout."""
    a_xi = _slide_axis(a_pad, D6_NODE, 0)[:, NG:-NG] / grid.dxi
    a_eta = _slide_axis(a_pad, D6_NODE, 1)[NG:-NG, :] / grid.deta
    x_xi, x_eta, y_xi, y_eta = node_metrics(grid, on_pad3=False)
    jinv = x_xi * y_eta - x_eta * y_xi
    if np.any(jinv == 0.0):
        bad = np.argwhere(jinv == 0.0)[0]
        raise ValueError(f"degenerate curl Jacobian at node {tuple(bad)}")
    jac = 1.0 / jinv
    b1 = jac * (-x_eta * a_xi + x_xi * a_eta)
    b2 = jac * (-y_eta * a_xi + y_xi * a_eta)
    return b1, b2


def energy_fix(e_star, b_star, b_new):
    """Total energy consistent with the corrected field at unchanged pressure."""
    return e_star + 0.5 * (b_new[0] ** 2 + b_new[1] ** 2 + b_new[2] ** 2
                           - b_star[0] ** 2 - b_star[1] ** 2 - b_star[2] ** 2)


def divergence_diagnostic(q_pad, grid: GridField):
    """Discrete div B in curvilinear form; returns (field, max, L1)."""
    b1, b2 = q_pad[physics.B1], q_pad[physics.B2]
    x_xi, x_eta, y_xi, y_eta = node_metrics(grid, on_pad3=True)
    flux_xi = y_eta * b1 - x_eta * b2      # J^-1 (xi_x B1 + xi_y B2)
    flux_eta = -y_xi * b1 + x_xi * b2
    div = (_slide_axis(flux_xi[:, NG:-NG], D6_NODE, 0) / grid.dxi
           + _slide_axis(flux_eta[NG:-NG, :], D6_NODE, 1) / grid.deta)
    jinv = (x_xi * y_eta - x_eta * y_xi)[NG:-NG, NG:-NG]
    div = div / jinv
    return div, float(np.max(np.abs(div))), float(np.mean(np.abs(div)))


@dataclass
class CoupledState:
    qt: np.ndarray      # (8, ni, nj) J^-1-scaled conserved variables
    jinv: np.ndarray    # evolved J^-1 companion
    a: np.ndarray       # magnetic potential
    tau: float


_STAGE_OFFSETS = (0.0, 1.0, 0.5)


class CoupledStepper:
    """RK3 advance of the coupled MHD + potential system on one grid family.

    ``hj_scheme`` selects the sector scheme ('pl') or the classical
    dimension-by-dimension one ('npl'); everything else is identical, which
    isolates the free-stream behaviour of the transport solver.
    """

    def __init__(self, spec: GridSpec, bc, hj_scheme="pl", sigma_on=True,
                 gamma=physics.GAMMA, eps=EPS, case="", ct_every_stage=False):
        if hj_scheme not in ("pl", "npl"):
            raise ValueError(f"hj_scheme must be 'pl' or 'npl', got {hj_scheme!r}")
        self.spec = spec
        self.bc = bc
        self.hj_scheme = hj_scheme
        self.sigma_on = sigma_on
        self.gamma = gamma
        self.eps = eps
        self.case = case
        self.ct_every_stage = ct_every_stage
        self.step_index = 0
        if not spec.moving:
            g = generate(spec, 0.0)
            self._static = {
                "grid": g,
                "metrics": free_stream_metrics(g),
                "geom": hamiltonian.sector_geometry(g),
            }
        else:
            self._static = None

    # -- stage machinery ----------------------------------------------------

    def stage_context(self, tau_n, dtau, stage):
        if self._static is not None:
            return (self._static["grid"], self._static["metrics"],
                    self._static["geom"], None)
        g = stage_grid(self.spec, tau_n, dtau, stage)
        vel = stage_mesh_velocity(self.spec, tau_n, dtau, stage)
        metrics = free_stream_metrics(g, vel)
        geom = hamiltonian.sector_geometry(g)
        return g, metrics, geom, vel

    def initial_state(self, prim0_fn, a0_fn, tau0=0.0):
        """Sample the initial data; (B1, B2) come from the discrete curl of A.

        ``prim0_fn(x, y)`` returns (rho, u, v, w, p, b3); the in-plane field
        is derived from the sampled potential so the divergence pair is
        discretely consistent from the start.
        """
        g = generate(self.spec, tau0) if self.spec.moving else self._static["grid"]
        x, y = g.x_in, g.y_in
        rho, u, v, w, p, b3 = (np.broadcast_to(f, x.shape).astype(float)
                               for f in prim0_fn(x, y))
        a = np.asarray(a0_fn(x, y), dtype=float)
        a_pad = self.bc.pad_potential(a, g, tau0)
        b1, b2 = discrete_curl(a_pad, g)
        q = physics.primitive_to_conserved(rho, u, v, w, p, b1, b2, b3,
                                           self.gamma)
        if self._static is not None:
            jinv = self._static["metrics"].jinv[NG:-NG, NG:-NG].copy()
        else:
            m = free_stream_metrics(g)
            jinv = m.jinv[NG:-NG, NG:-NG].copy()
        return CoupledState(qt=jinv * q, jinv=jinv, a=a, tau=tau0)

    def rhs(self, qt, jinv, a, stage, tau_n, dtau):
        tau_s = tau_n + _STAGE_OFFSETS[stage] * dtau
        g, metrics, geom, vel = self.stage_context(tau_n, dtau, stage)
        try:
            dqt, djinv = fluxes.mhd_rhs(
                qt, jinv, g, self.bc, tau_s, mesh_velocity=vel,
                gamma=self.gamma, eps=self.eps, sigma_on=self.sigma_on,
                metrics=metrics, where=f"{self.case}/mhd")
            q = qt / jinv
            rho, u, v, w, p, *_ = physics.conserved_to_primitive(
                q, self.gamma, where=f"{self.case}/state")
            H = hamiltonian.LinearHamiltonian(u, v)
            if self.hj_scheme == "pl":
                da = hamiltonian.hj_rhs(a, g, H, self.bc, tau_s,
                                        mesh_velocity=vel, eps=self.eps,
                                        geom=geom)
            else:
                da = hamiltonian.hj_rhs_npl(a, g, H, self.bc, tau_s,
                                            mesh_velocity=vel, eps=self.eps,
                                            metrics=metrics)
        except physics.InvalidStateError as err:
            raise SolverFailure(err, case=self.case, step=self.step_index,
                                stage=stage, tau=tau_s) from err
        return dqt, djinv, da

    def _apply_ct(self, qt, jinv, a, grid, tau):
        """Steps (3)-(4): curl replacement and energy correction."""
        q = qt / jinv
        try:
            rho, u, v, w, p, b1s, b2s, b3 = physics.conserved_to_primitive(
                q, self.gamma, where=f"{self.case}/pre-ct")
        except physics.InvalidStateError as err:
            raise SolverFailure(err, case=self.case, step=self.step_index,
                                tau=tau) from err
        a_pad = self.bc.pad_potential(a, grid, tau)
        b1, b2 = discrete_curl(a_pad, grid)
        e_new = energy_fix(q[physics.EN], (b1s, b2s, b3), (b1, b2, b3))
        q = q.copy()
        q[physics.B1] = b1
        q[physics.B2] = b2
        q[physics.EN] = e_new
        return jinv * q

    def step(self, state: CoupledState, dtau: float) -> CoupledState:
        tau_n = state.tau
        post = self._ct_stage_hook(tau_n, dtau) if self.ct_every_stage else None
        un = rk3_advance((state.qt, state.jinv, state.a),
                         lambda u, stage: self.rhs(*u, stage, tau_n, dtau),
                         dtau, post_stage=post)
        tau_new = tau_n + dtau
        if self.spec.moving:
            g_new = generate(self.spec, tau_new)
        else:
            g_new = self._static["grid"]
        qt_new = self._apply_ct(un[0], un[1], un[2], g_new, tau_new)
        self.step_index += 1
        return CoupledState(qt=qt_new, jinv=un[1], a=un[2], tau=tau_new)

    def _ct_stage_hook(self, tau_n, dtau):
        def post(u, next_stage):
            g, _, _, _ = self.stage_context(tau_n, dtau, next_stage)
            tau_s = tau_n + _STAGE_OFFSETS[next_stage] * dtau
            return (self._apply_ct(u[0], u[1], u[2], g, tau_s), u[1], u[2])
        return post

    # -- diagnostics ---------------------------------------------------------

    def primitives(self, state: CoupledState):
        q = state.qt / state.jinv
        return physics.conserved_to_primitive(q, self.gamma,
                                              where=f"{self.case}/output")

    def grid_at(self, tau):
        if self._static is not None:
            return self._static["grid"]
        return generate(self.spec, tau)

    def divergence(self, state: CoupledState):
        g = self.grid_at(state.tau)
        q = state.qt / state.jinv
        q_pad = self.bc.pad_state(q, g, state.tau)
        return divergence_diagnostic(q_pad, g)
