"""Time integration loop, case running, reporting, and the CLI."""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import __version__ as _pkg_version
from . import bc as bcs
from . import cases as case_registry
from . import fluxes, hamiltonian, io, physics, transport
from .grid import (GridSpec, free_stream_metrics, generate, metric_identities,
                   stage_grid, stage_mesh_velocity)
from .rk import rk3_advance
from .stencils import NG
from .transport import CoupledStepper, SolverFailure
from .weno import EPS


@dataclass
class RunConfig:
    case: str
    scheme: str = "pl"
    sigma: str = "on"
    nx: int = None
    ny: int = None
    cfl: float = None
    tfinal: float = None
    out: str = None
    dump_every: int = 0
    seed: int = 0
    gamma: float = physics.GAMMA
    eps: float = EPS
    full_scale: bool = False
    ct_every_stage: bool = False
    dt_max: float = None

    def __post_init__(self):
        if self.scheme not in ("pl", "npl"):
            raise ValueError(f"scheme must be pl or npl, got {self.scheme!r}")
        if self.sigma not in ("on", "off"):
            raise ValueError(f"sigma must be on or off, got {self.sigma!r}")
        if self.cfl is not None and self.cfl <= 0:
            raise ValueError("cfl must be positive")
        if self.tfinal is not None and self.tfinal < 0:
            raise ValueError("tfinal must be non-negative")


@dataclass
class ErrorReport:
    l1: float = None
    linf: float = None
    orders: dict = field(default_factory=dict)
    wall_time: float = 0.0
    extras: dict = field(default_factory=dict)


@dataclass
class CaseResult:
    name: str
    tau_end: float
    steps: int
    report: ErrorReport
    failure: dict = None
    dumps: list = field(default_factory=list)

    @property
    def ok(self):
        return self.failure is None


# ---------------------------------------------------------------------------
# Scalar Hamilton-Jacobi stepping
# ---------------------------------------------------------------------------

class HJStepper:
    """RK3 advance of a scalar Hamilton-Jacobi equation with a fixed H."""

    def __init__(self, spec: GridSpec, bc, H, scheme="pl", eps=EPS, case=""):
        self.spec = spec
        self.bc = bc
        self.H = H
        self.scheme = scheme
        self.eps = eps
        self.case = case
        self.last_lambda = 0.0
        if not spec.moving:
            g = generate(spec, 0.0)
            self._static = (g, hamiltonian.sector_geometry(g))
        else:
            self._static = None

    def grid_at(self, tau):
        return self._static[0] if self._static else generate(self.spec, tau)

    def _stage(self, tau_n, dtau, stage):
        if self._static:
            return self._static[0], self._static[1], None
        g = stage_grid(self.spec, tau_n, dtau, stage)
        vel = stage_mesh_velocity(self.spec, tau_n, dtau, stage)
        return g, hamiltonian.sector_geometry(g), vel

    def rhs(self, phi, stage, tau_n, dtau):
        offs = (0.0, 1.0, 0.5)
        tau_s = tau_n + offs[stage] * dtau
        g, geom, vel = self._stage(tau_n, dtau, stage)
        if self.scheme == "pl":
            dphi, lam = hamiltonian.hj_rhs(phi, g, self.H, self.bc, tau_s,
                                           mesh_velocity=vel, eps=self.eps,
                                           geom=geom, return_lambda=True)
        else:
            dphi, lam = hamiltonian.hj_rhs_npl(phi, g, self.H, self.bc, tau_s,
                                               mesh_velocity=vel, eps=self.eps,
                                               return_lambda=True)
        self.last_lambda = lam
        return dphi

    def current_lambda(self, phi, tau):
        self.rhs(phi, 0, tau, 1.0)
        return self.last_lambda

    def step(self, phi, tau_n, dtau):
        (out,) = rk3_advance((phi,),
                             lambda u, s: (self.rhs(u[0], s, tau_n, dtau),),
                             dtau)
        return out


# ---------------------------------------------------------------------------
# Time-step rules
# ---------------------------------------------------------------------------

def compute_dt(rule, config: RunConfig, spec: GridSpec, alpha=None, lam=None):
    """Per-case time step before clamping to the final time."""
    kind = rule[0]
    if kind == "fixed":
        return rule[1]
    if kind == "dxi53":
        # dtau ~ dxi^(5/3) keeps RK3 at the spatial order; the 1/2 prefactor
        # keeps the temporal error subdominant at the coarsest grids.
        return 0.5 * spec.dxi ** (5.0 / 3.0)
    cfl = config.cfl if config.cfl is not None else rule[1]
    dt_max = config.dt_max if config.dt_max is not None else spec.dxi
    if kind == "cfl_alpha":
        if alpha is None or alpha <= 0.0:
            return dt_max
        return cfl * spec.dxi / alpha
    if kind == "cfl_lambda":
        if lam is None or lam <= 0.0:
            return dt_max
        return cfl * spec.dxi / lam
    raise ValueError(f"unknown dt rule {rule!r}")


# ---------------------------------------------------------------------------
# Case running
# ---------------------------------------------------------------------------

def _coupled_metrics(stepper: CoupledStepper, state):
    rho, u, v, w, p, b1, b2, b3 = stepper.primitives(state)
    _, div_max, div_l1 = stepper.divergence(state)
    return {
        "linf_v": float(np.max(np.abs(v))),
        "linf_w": float(np.max(np.abs(w))),
        "min_rho": float(np.min(rho)),
        "min_p": float(np.min(p)),
        "divb_max": div_max,
        "divb_l1": div_l1,
        "a_min": float(np.min(state.a)),
        "a_max": float(np.max(state.a)),
    }


def _dump_coupled(stepper, state, out_dir, tag, dumps):
    prim = stepper.primitives(state)
    div, _, _ = stepper.divergence(state)
    path = os.path.join(out_dir, f"fields_{tag}.csv")
    io.write_fields(path, stepper.grid_at(state.tau), prim, state.a, div)
    dumps.append(path)


def run_case(config: RunConfig) -> CaseResult:
    """Execute one benchmark case to its final time (or structured failure)."""
    setup = case_registry.build(config.case, nx=config.nx, ny=config.ny,
                                seed=config.seed, full_scale=config.full_scale,
                                tfinal=config.tfinal)
    t_final = config.tfinal if config.tfinal is not None else setup.t_final
    out_dir = config.out
    dumps = []
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        io.write_manifest(os.path.join(out_dir, "run_manifest.txt"),
                          manifest_entries(config))

    t0 = time.time()
    if setup.kind == "hj":
        stepper = HJStepper(setup.spec, setup.bc, setup.hj_hamiltonian,
                            scheme=config.scheme, eps=config.eps,
                            case=setup.name)
        g0 = stepper.grid_at(0.0)
        phi = np.asarray(setup.phi0(g0.x_in, g0.y_in), dtype=float)
        tau, steps = 0.0, 0
        while tau < t_final - 1e-14:
            lam = (stepper.current_lambda(phi, tau)
                   if setup.dt_rule[0] == "cfl_lambda" else None)
            dt = min(compute_dt(setup.dt_rule, config, setup.spec, lam=lam),
                     t_final - tau)
            phi = stepper.step(phi, tau, dt)
            tau += dt
            steps += 1
        report = ErrorReport(wall_time=time.time() - t0)
        g_end = stepper.grid_at(tau)
        if setup.exact is not None:
            err = phi - setup.exact(g_end.x_in, g_end.y_in, tau)
            report.l1 = float(np.mean(np.abs(err)))
            report.linf = float(np.max(np.abs(err)))
        if out_dir:
            path = os.path.join(out_dir, "fields_final.csv")
            io.write_scalar_field(path, g_end, "phi", phi)
            dumps.append(path)
        return CaseResult(name=setup.name, tau_end=tau, steps=steps,
                          report=report, dumps=dumps)

    stepper = CoupledStepper(setup.spec, setup.bc, hj_scheme=config.scheme,
                             sigma_on=(config.sigma == "on"),
                             gamma=config.gamma, eps=config.eps,
                             case=setup.name,
                             ct_every_stage=config.ct_every_stage)
    state = stepper.initial_state(setup.prim0, setup.a0)
    steps = 0
    try:
        while state.tau < t_final - 1e-14:
            if setup.dt_rule[0] == "cfl_alpha":
                g = stepper.grid_at(state.tau)
                metrics = (stepper._static["metrics"] if stepper._static
                           else free_stream_metrics(g))
                q = state.qt / state.jinv
                alpha = max(fluxes.lf_speeds(q, metrics, config.gamma))
            else:
                alpha = None
            dt = min(compute_dt(setup.dt_rule, config, setup.spec, alpha=alpha),
                     t_final - state.tau)
            state = stepper.step(state, dt)
            steps += 1
            if out_dir and config.dump_every and steps % config.dump_every == 0:
                _dump_coupled(stepper, state, out_dir, f"{steps:06d}", dumps)
    except SolverFailure as fail:
        report = ErrorReport(wall_time=time.time() - t0)
        return CaseResult(name=setup.name, tau_end=fail.tau, steps=steps,
                          report=report,
                          failure={"step": fail.step, "stage": fail.stage,
                                   "tau": fail.tau, "node": fail.cause.node,
                                   "reason": fail.cause.reason})
    report = ErrorReport(wall_time=time.time() - t0,
                         extras=_coupled_metrics(stepper, state))
    if out_dir:
        _dump_coupled(stepper, state, out_dir, "final", dumps)
    return CaseResult(name=setup.name, tau_end=state.tau, steps=steps,
                      report=report, dumps=dumps)


def manifest_entries(config: RunConfig):
    entries = {
        "case": config.case, "scheme": config.scheme, "sigma": config.sigma,
        "nx": config.nx if config.nx else "", "ny": config.ny if config.ny else "",
        "cfl": config.cfl if config.cfl is not None else "",
        "tfinal": config.tfinal if config.tfinal is not None else "",
        "dump_every": config.dump_every, "seed": config.seed,
        "gamma": repr(config.gamma), "eps": repr(config.eps),
        "full_scale": int(config.full_scale),
        "curvmhd_version": _pkg_version,
        "numpy_version": np.__version__,
        "python_version": sys.version.split()[0],
    }
    return entries


def convergence_table(case="hj_accuracy", levels=3, scheme="pl", base=41):
    """Successive-refinement errors and observed orders for a smooth case."""
    sizes = [(base - 1) * 2 ** k + 1 for k in range(levels)]
    rows = []
    prev = None
    for n in sizes:
        res = run_case(RunConfig(case=case, scheme=scheme, nx=n, ny=n))
        row = {"n": n, "l1": res.report.l1, "linf": res.report.linf}
        if prev is not None:
            row["order_l1"] = np.log2(prev["l1"] / row["l1"])
            row["order_linf"] = np.log2(prev["linf"] / row["linf"])
        rows.append(row)
        prev = row
    return rows


def print_convergence(rows):
    print(f"{'N':>6} {'L1':>12} {'order':>7} {'Linf':>12} {'order':>7}")
    for r in rows:
        o1 = f"{r.get('order_l1', float('nan')):7.2f}" if "order_l1" in r else "     --"
        o2 = f"{r.get('order_linf', float('nan')):7.2f}" if "order_linf" in r else "     --"
        print(f"{r['n']:>6} {r['l1']:12.3e} {o1} {r['linf']:12.3e} {o2}")


# ---------------------------------------------------------------------------
# Verification battery (quick property checks)
# ---------------------------------------------------------------------------

def verify(verbose=True):
    """Run the quick property suite; returns True if everything passes."""
    checks = []

    def check(name, value, tol):
        ok = value <= tol
        checks.append((name, ok, value, tol))
        if verbose:
            print(f"[{'PASS' if ok else 'FAIL'}] {name}: {value:.3e} (tol {tol:.1e})")
        return ok

    specs = {
        "identity": GridSpec(kind="identity", imax=33, jmax=29, lx=1.0, ly=1.0),
        "wavy": case_registry.freestream_wavy().spec,
        "randomized": case_registry.freestream_random().spec,
        "moving": case_registry.freestream_moving().spec,
        "spherical": case_registry.freestream_spherical().spec,
    }
    for name, spec in specs.items():
        g = generate(spec, 0.3 if spec.moving else 0.0)
        ix, iy = metric_identities(free_stream_metrics(g))
        check(f"metric identity I_x/I_y ({name})",
              max(np.max(np.abs(ix)), np.max(np.abs(iy))), 1e-13)

    # sector geometry on the randomized grid
    g = generate(specs["randomized"])
    geom = hamiltonian.sector_geometry(g)
    check("sector angle sum - 2pi", float(np.max(np.abs(
        geom.theta.sum(axis=0) - 2 * np.pi))), 1e-12)
    gn = np.einsum("m...,mk...->k...", geom.gamma_half, geom.n_half)
    check("sum gamma*n per node", float(np.max(np.abs(gn))), 1e-13)

    # curl of a linear potential
    from .transport import discrete_curl
    a_pad = 3.0 * g.pad3(g.y) - 2.0 * g.pad3(g.x)
    b1, b2 = discrete_curl(a_pad, g)
    check("curl exactness on linear A",
          max(float(np.max(np.abs(b1 - 3.0))), float(np.max(np.abs(b2 - 2.0)))),
          1e-13)

    # RK3 order on u' = -u
    errs = []
    for dt in (0.1, 0.05):
        u = (1.0,)
        t = 0.0
        while t < 1.0 - 1e-12:
            u = rk3_advance(u, lambda x, s: (-x[0],), dt)
            t += dt
        errs.append(abs(u[0] - np.exp(-1.0)))
    order = np.log2(errs[0] / errs[1])
    check("RK3 observed order deficit (3 - order)", max(0.0, 3.0 - order), 0.1)

    # short free-stream run
    res = run_case(RunConfig(case="freestream_wavy", tfinal=0.5))
    check("free-stream max|v| after t=0.5", res.report.extras["linf_v"], 1e-12)

    return all(ok for _, ok, _, _ in checks)


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

def _build_parser():
    p = argparse.ArgumentParser(prog="curvmhd",
                                description="Free-stream preserving WENO "
                                            "MHD solver on curvilinear meshes")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one benchmark case")
    run.add_argument("--case", help="case id (see curvmhd run --list)")
    run.add_argument("--list", action="store_true", help="list case ids")
    run.add_argument("--scheme", default=None, choices=["pl", "npl"])
    run.add_argument("--sigma", default=None, choices=["on", "off"])
    run.add_argument("--nx", type=int, default=None)
    run.add_argument("--ny", type=int, default=None)
    run.add_argument("--cfl", type=float, default=None)
    run.add_argument("--tfinal", type=float, default=None)
    run.add_argument("--out", default=None)
    run.add_argument("--dump-every", type=int, default=None)
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--full-scale", action="store_true", default=None)
    run.add_argument("--config", default=None,
                     help="flat key=value file (flags override)")

    conv = sub.add_parser("convergence", help="refinement study")
    conv.add_argument("--case", default="hj_accuracy")
    conv.add_argument("--levels", type=int, default=3)
    conv.add_argument("--scheme", default="pl", choices=["pl", "npl"])

    sub.add_parser("verify", help="run the quick property suite")
    return p


_CONFIG_TYPES = {"nx": int, "ny": int, "cfl": float, "tfinal": float,
                 "dump_every": int, "seed": int, "gamma": float, "eps": float,
                 "full_scale": lambda s: bool(int(s))}


def _config_from_args(args):
    values = {}
    if args.config:
        raw = io.read_config(args.config)
        for key, val in raw.items():
            if key in ("curvmhd_version", "numpy_version", "python_version"):
                continue
            if val == "":
                continue
            caster = _CONFIG_TYPES.get(key, str)
            values[key] = caster(val)
    for key in ("case", "scheme", "sigma", "nx", "ny", "cfl", "tfinal",
                "out", "dump_every", "seed", "full_scale"):
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    if "case" not in values:
        raise ValueError("no case given (use --case or a config file)")
    values.setdefault("scheme", "pl")
    values.setdefault("sigma", "on")
    values.setdefault("dump_every", 0)
    values.setdefault("seed", 0)
    values.setdefault("full_scale", False)
    return RunConfig(**values)


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit:
        return 3

    if args.command == "run":
        if args.list:
            for name in sorted(case_registry.REGISTRY):
                print(name)
            return 0
        try:
            config = _config_from_args(args)
        except (ValueError, KeyError, OSError) as err:
            print(f"config error: {err}", file=sys.stderr)
            return 3
        try:
            result = run_case(config)
        except KeyError as err:
            print(f"config error: {err}", file=sys.stderr)
            return 3
        if not result.ok:
            f = result.failure
            print(f"FAILED {result.name}: {f['reason']} at node {f['node']} "
                  f"step {f['step']} stage {f['stage']} time {f['tau']:.6g}")
            return 2
        print(f"{result.name}: reached t={result.tau_end:.6g} in "
              f"{result.steps} steps ({result.report.wall_time:.1f} s)")
        if result.report.l1 is not None:
            print(f"  L1={result.report.l1:.3e}  Linf={result.report.linf:.3e}")
        for key, val in result.report.extras.items():
            print(f"  {key}={val:.6e}")
        return 0

    if args.command == "convergence":
        rows = convergence_table(case=args.case, levels=args.levels,
                                 scheme=args.scheme)
        print_convergence(rows)
        return 0

    if args.command == "verify":
        return 0 if verify(verbose=True) else 1

    return 3


if __name__ == "__main__":
    sys.exit(main())
