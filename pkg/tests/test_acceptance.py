"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` for the per-criterion
lines.  The full-scale blast comparison tier is opt-in via
``CURVMHD_FULL_SCALE=1`` (it runs the 101^2 grids for many minutes).
"""

import os

import numpy as np
import pytest

from curvmhd import bc as bcs
from curvmhd import cases
from curvmhd import hamiltonian as hj
from curvmhd.driver import HJStepper, RunConfig, run_case
from curvmhd.grid import GridSpec, free_stream_metrics, generate, \
    metric_identities
from curvmhd.rk import rk3_advance
from curvmhd.stencils import D6_NODE, INTERP6_HALF
from curvmhd.transport import discrete_curl
from curvmhd import weno

FULL_SCALE = os.environ.get("CURVMHD_FULL_SCALE", "") == "1"


def report(name, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


# ---------------------------------------------------------------------------
# 1. HJ accuracy (Table 1)
# ---------------------------------------------------------------------------

def test_hj_accuracy_table1():
    paper_l1 = {41: 9.37e-6, 81: 2.96e-7, 161: 9.21e-9}
    results = {}
    for n in (41, 81, 161):
        res = run_case(RunConfig(case="hj_accuracy", nx=n, ny=n))
        results[n] = res.report.l1
    ok = all(results[n] < 3.0 * paper_l1[n] for n in results)
    order1 = np.log2(results[41] / results[81])
    order2 = np.log2(results[81] / results[161])
    ok = ok and order1 >= 4.5 and order2 >= 4.5
    report("HJ accuracy (Table 1)", ok,
           f"L1={results[41]:.2e}/{results[81]:.2e}/{results[161]:.2e} "
           f"(paper 9.37e-6/2.96e-7/9.21e-9), orders {order1:.2f}/{order2:.2f}")


# ---------------------------------------------------------------------------
# 2. Free-stream preservation (Table 2)
# ---------------------------------------------------------------------------

def test_freestream_table2():
    lines = []
    ok = True
    for case in ("freestream_wavy", "freestream_random", "freestream_moving",
                 "freestream_spherical"):
        res = run_case(RunConfig(case=case, scheme="pl"))
        good = (res.ok and res.report.extras["linf_v"] <= 1e-12
                and res.report.extras["linf_w"] <= 1e-12)
        ok = ok and good
        lines.append(f"{case.split('_')[1]}: "
                     f"{res.report.extras['linf_v'] if res.ok else 'failed'}")
    # the contrast: NPL on the wavy grid shows the defect
    npl = run_case(RunConfig(case="freestream_wavy", scheme="npl"))
    contrast = npl.ok and npl.report.extras["linf_v"] >= 1e-4
    ok = ok and contrast
    detail = ("PL max|v| " + "; ".join(str(l) for l in lines)
              + f"; NPL wavy max|v|={npl.report.extras['linf_v']:.2e}"
                f" (paper 6.85e-2)")
    report("Free-stream preservation (Table 2)", ok, detail)


# ---------------------------------------------------------------------------
# 3. Linearity-preservation property suite
# ---------------------------------------------------------------------------

def _linearity_grids(seed):
    lx = ly = 2.0
    n = 21
    d = lx / (n - 1)
    return {
        "wavy": GridSpec(kind="wavy", imax=n, jmax=n, lx=lx, ly=ly,
                         ax=0.15 / d, ay=-0.1 / d, nx_wave=6.0, ny_wave=6.0),
        "randomized": GridSpec(kind="randomized", imax=n, jmax=n, lx=lx,
                               ly=ly, perturb=0.1, seed=seed),
        "moving": GridSpec(kind="moving_wavy", imax=n, jmax=n, lx=lx, ly=ly,
                           ax=0.1 / d, ay=0.1 / d, nx_wave=4.0, ny_wave=4.0,
                           omega=1.0),
    }


def test_linearity_preservation_suite():
    rng = np.random.default_rng(42)
    worst = 0.0
    trials = 0
    for k in range(20):
        c1, c2 = rng.uniform(-2, 2, 2)
        c3 = rng.uniform(-1, 1)
        scale = max(abs(c1), abs(c2), 1.0)
        ham_defs = [
            ("ct", hj.LinearHamiltonian(rng.uniform(-1, 1),
                                        rng.uniform(-1, 1))),
            ("sin", hj.SineSumHamiltonian()),
        ]
        name, H = ham_defs[k % 2]
        if name == "ct":
            hval = float(H.u * c1 + H.v * c2)
        else:
            hval = float(np.sin(c1 + c2))
        grids = _linearity_grids(seed=k)
        gname = list(grids)[k % 3]
        spec = grids[gname]
        bc = bcs.LinearExactBC(c1, c2, c3, hval)
        stepper = HJStepper(spec, bc, H, scheme="pl")
        g0 = stepper.grid_at(0.0)
        phi = c1 * g0.x_in + c2 * g0.y_in + c3
        tau = 0.0
        dt = 0.01
        for _ in range(100):
            phi = stepper.step(phi, tau, dt)
            tau += dt
        g_end = stepper.grid_at(tau)
        exact = c1 * g_end.x_in + c2 * g_end.y_in + c3 - hval * tau
        dev = np.max(np.abs(phi - exact)) / scale
        worst = max(worst, dev)
        trials += 1
    ok = worst <= 1e-11
    report("Linearity preservation (20 runs, both H, three grids)", ok,
           f"worst relative deviation {worst:.2e} over {trials} runs of "
           f"100 RK3 steps (tol 1e-11)")


# ---------------------------------------------------------------------------
# 4. Metric identities and operator exactness
# ---------------------------------------------------------------------------

def test_metric_identity_suite():
    specs = {
        "identity": GridSpec(kind="identity", imax=21, jmax=21, lx=1, ly=1),
        "wavy": cases.freestream_wavy().spec,
        "randomized": cases.freestream_random().spec,
        "moving": cases.freestream_moving().spec,
        "spherical": cases.freestream_spherical().spec,
    }
    worst = 0.0
    for name, spec in specs.items():
        g = generate(spec, 0.31 if spec.moving else 0.0)
        m = free_stream_metrics(g)
        ix, iy = metric_identities(m)
        scale = max(np.max(np.abs(m.y_eta)) / m.dxi,
                    np.max(np.abs(m.x_xi)) / m.deta, 1.0)
        worst = max(worst, np.max(np.abs(ix)) / scale,
                    np.max(np.abs(iy)) / scale)
    ok_ident = worst <= 1e-13

    g = generate(specs["randomized"])
    a_pad = -1.3 * g.pad3(g.x) + 0.8 * g.pad3(g.y) + 0.2
    b1, b2 = discrete_curl(a_pad, g)
    curl_err = max(np.max(np.abs(b1 - 0.8)), np.max(np.abs(b2 - 1.3)))
    ok_curl = curl_err <= 1e-13

    from curvmhd.hamiltonian import sector_geometry
    geom = sector_geometry(g)
    ang_err = np.max(np.abs(geom.theta.sum(axis=0) - 2 * np.pi))
    ok_ang = ang_err <= 1e-12

    # WENO polynomial exactness: HJ derivatives 0-3 (nonlinear weights),
    # interpolation 0-2 nonlinear / 3-4 linear weights, metric stencil 0-5
    ok_poly = True
    xs7 = 0.5 * np.arange(-3.0, 4.0)
    for deg in range(4):
        vals = xs7 ** deg
        want = deg * 0.0 ** (deg - 1) if deg >= 1 else 0.0
        if deg == 1:
            want = 1.0
        for side in "-+":
            d, _ = weno.weno5_hj_derivative(vals, 0.5, side)
            ok_poly &= abs(d - want) <= 1e-12 * max(1.0, np.max(np.abs(vals)))
    xs6 = np.arange(-2.0, 4.0)
    for deg in range(3):
        got = weno.weno5_interpolate(xs6 ** deg, "-")
        ok_poly &= abs(got - 0.5 ** deg) <= 1e-12
    dlin = weno.D_INTERP
    for deg in range(5):
        vals = xs6[:5] ** deg
        p0 = 0.375 * vals[2] + 0.75 * vals[3] - 0.125 * vals[4]
        p1 = -0.125 * vals[1] + 0.75 * vals[2] + 0.375 * vals[3]
        p2 = 0.375 * vals[0] - 1.25 * vals[1] + 1.875 * vals[2]
        got = dlin[0] * p0 + dlin[1] * p1 + dlin[2] * p2
        ok_poly &= abs(got - 0.5 ** deg) <= 1e-12 * max(1.0, abs(0.5 ** deg))
    x_nodes = np.arange(0.0, 16.0)
    for deg in range(6):
        vals = x_nodes ** deg
        node_d = np.convolve(vals, D6_NODE[::-1], mode="valid")
        half = np.convolve(node_d, INTERP6_HALF[::-1], mode="valid")
        xs_half = x_nodes[5:5 + len(half)] + 0.5
        want = deg * xs_half ** (deg - 1) if deg else 0.0 * xs_half
        ok_poly &= np.max(np.abs(half - want)) <= \
            1e-12 * max(1.0, np.max(np.abs(want)))

    ok = ok_ident and ok_curl and ok_ang and ok_poly
    report("Metric identities / curl / sectors / WENO exactness", ok,
           f"I_xy rel {worst:.1e} (<=1e-13); curl err {curl_err:.1e}; "
           f"angle sum err {ang_err:.1e}; polynomial suite "
           f"{'ok' if ok_poly else 'broken'}")


# ---------------------------------------------------------------------------
# 5. RK3 and spatial order
# ---------------------------------------------------------------------------

def test_rk3_and_spatial_order():
    errs = []
    for dt in (0.1, 0.05):
        u, t = (1.0,), 0.0
        while t < 2.0 - 1e-12:
            u = rk3_advance(u, lambda x, s: (-x[0],), dt)
            t += dt
        errs.append(abs(u[0] - np.exp(-2.0)))
    rk_order = np.log2(errs[0] / errs[1])

    from curvmhd import fluxes, physics
    from curvmhd.stencils import NG
    from tests.test_fluxes import FftOracle
    errs = []
    for n in (24, 48):
        oracle = FftOracle(n)
        q = oracle.state()
        want = oracle.exact_rhs()
        spec = GridSpec(kind="identity", imax=n + 1, jmax=n + 1,
                        lx=2 * np.pi, ly=2 * np.pi)
        g = generate(spec)
        m = free_stream_metrics(g)
        jinv = m.jinv[NG:-NG, NG:-NG]
        qfull = np.empty((8, n + 1, n + 1))
        qfull[:, :n, :n] = q
        qfull[:, n, :n] = q[:, 0, :]
        qfull[:, :n, n] = q[:, :, 0]
        qfull[:, n, n] = q[:, 0, 0]
        dqt, _ = fluxes.mhd_rhs(jinv * qfull, jinv, g, bcs.PeriodicBC(), 0.0,
                                metrics=m)
        errs.append(np.max(np.abs(dqt[:, :n, :n] - want)))
    rhs_order = np.log2(errs[0] / errs[1])
    ok = rk_order >= 2.9 and rhs_order >= 4.5
    report("RK3 and spatial order", ok,
           f"RK3 order {rk_order:.2f} (>=2.9); rhs order {rhs_order:.2f} "
           f"(>=4.5)")


# ---------------------------------------------------------------------------
# 6. Blast-wave robustness
# ---------------------------------------------------------------------------

@pytest.mark.slow
def test_blast_robustness_reduced():
    ok = True
    details = []
    for case in ("blast_wavy", "blast_random", "blast_moving"):
        res = run_case(RunConfig(case=case, scheme="pl"))
        good = (res.ok and abs(res.tau_end - 0.01) < 1e-12
                and res.report.extras["min_rho"] > 0.0
                and res.report.extras["min_p"] > 0.0)
        ok = ok and good
        if res.ok:
            details.append(f"{case.split('_')[1]}: min p "
                           f"{res.report.extras['min_p']:.2e}")
        else:
            details.append(f"{case.split('_')[1]}: FAILED at "
                           f"t={res.failure['tau']:.4g}")
    report("Blast robustness (PL, reduced 51^2)", ok, "; ".join(details))


@pytest.mark.skipif(not FULL_SCALE, reason="full-scale tier: set "
                    "CURVMHD_FULL_SCALE=1")
def test_blast_npl_failure_times_full_scale():
    paper = {"blast_wavy": 0.002898, "blast_random": 0.002257,
             "blast_moving": 0.001486}
    ok = True
    details = []
    for case, t_ref in paper.items():
        res = run_case(RunConfig(case=case, scheme="npl", full_scale=True,
                                 tfinal=0.005))
        failed_early = (not res.ok) and res.failure["tau"] < 0.005
        within = failed_early and (t_ref / 2 <= res.failure["tau"] <= 2 * t_ref)
        ok = ok and within
        details.append(f"{case.split('_')[1]}: "
                       + (f"fail at {res.failure['tau']:.4g} "
                          f"(paper {t_ref})" if not res.ok else "survived"))
    report("Blast NPL failure times (full scale)", ok, "; ".join(details))


# ---------------------------------------------------------------------------
# 7. Field loop
# ---------------------------------------------------------------------------

@pytest.mark.slow
def test_field_loop_reduced():
    from curvmhd import physics
    from curvmhd.transport import divergence_diagnostic

    # divergence diagnostic decays at >= 4th order on smooth solenoidal data
    errs = []
    for n in (41, 81):
        spec = GridSpec(kind="wavy", imax=n, jmax=(n + 1) // 2,
                        lx=2.0, ly=1.0,
                        ax=0.03 * (n - 1) / 2.0, ay=0.06 * ((n + 1) // 2 - 1),
                        nx_wave=8.0, ny_wave=8.0)
        g = generate(spec)
        x, y = g.x_in, g.y_in
        b1 = np.pi * np.sin(np.pi * x) * np.cos(np.pi * y)
        b2 = -np.pi * np.cos(np.pi * x) * np.sin(np.pi * y)
        q = physics.primitive_to_conserved(np.ones_like(b1), 0, 0, 0, 1.0,
                                           b1, b2, 0.0)
        q_pad = np.pad(q, ((0, 0), (3, 3), (3, 3)), mode="edge")
        div, _, _ = divergence_diagnostic(q_pad, g)
        errs.append(np.max(np.abs(div[6:-6, 6:-6])))
    div_order = np.log2(errs[0] / errs[1])

    # reduced-resolution loop advection: potential range stays inside the
    # reported contour envelope (padded 10% of its width)
    res = run_case(RunConfig(case="field_loop_wavy", nx=51, ny=26))
    width = 2.7e-4 + 2.16e-6
    lo = -2.16e-6 - 0.1 * width
    hi = 2.7e-4 + 0.1 * width
    in_env = (res.ok and lo <= res.report.extras["a_min"]
              and res.report.extras["a_max"] <= hi)
    ok = div_order >= 4.0 and in_env
    report("Field loop (reduced)", ok,
           f"div order {div_order:.2f} (>=4); A range "
           f"[{res.report.extras['a_min']:.2e}, "
           f"{res.report.extras['a_max']:.2e}] within "
           f"[{lo:.2e}, {hi:.2e}]")
