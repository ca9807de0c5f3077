"""Ideal-MHD state algebra: conversions, fluxes, eigensystem, wave speeds.

States are numpy arrays of shape ``(8, ...)`` holding
(rho, rho*u, rho*v, rho*w, E, B1, B2, B3).  Everything broadcasts, so the
same functions serve single states and whole fields.

The characteristic basis is the standard eight-wave set evaluated in the
frame of the metric normal, with the degeneracy-safe normalisation of the
fast/slow/Alfven vectors (tangential-field direction falls back to
(1,1)/sqrt(2) when the tangential field vanishes).  The component of B along
the normal rides on its own wave moving with the normal velocity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

GAMMA = 5.0 / 3.0

RHO, MX, MY, MZ, EN, B1, B2, B3 = range(8)

_SQRT_HALF = np.sqrt(0.5)


class InvalidStateError(RuntimeError):
    """Non-physical state (rho or p <= 0), with the offending node attached."""

    def __init__(self, reason, node=None, value=None, where=""):
        msg = f"invalid state: {reason}"
        if node is not None:
            msg += f" at node {node}"
        if value is not None:
            msg += f" (value {value:.6e})"
        if where:
            msg += f" [{where}]"
        super().__init__(msg)
        self.reason = reason
        self.node = node
        self.value = value
        self.where = where


def primitive_to_conserved(rho, u, v, w, p, b1, b2, b3, gamma=GAMMA):
    rho, u, v, w, p, b1, b2, b3 = np.broadcast_arrays(
        *map(np.asarray, (rho, u, v, w, p, b1, b2, b3)))
    q = np.empty((8,) + rho.shape)
    q[RHO] = rho
    q[MX] = rho * u
    q[MY] = rho * v
    q[MZ] = rho * w
    q[EN] = (p / (gamma - 1.0) + 0.5 * rho * (u * u + v * v + w * w)
             + 0.5 * (b1 * b1 + b2 * b2 + b3 * b3))
    q[B1] = b1
    q[B2] = b2
    q[B3] = b3
    return q


def _first_bad(mask):
    node = np.unravel_index(np.argmax(mask), mask.shape)
    return tuple(int(k) for k in node)


def conserved_to_primitive(q, gamma=GAMMA, check=True, where=""):
    """Invert the energy relation; flags non-positive density or pressure."""
    rho = q[RHO]
    if check and np.any(~(rho > 0.0)):
        bad = _first_bad(~(rho > 0.0))
        raise InvalidStateError("non-positive density", node=bad,
                                value=float(rho[bad]) if rho.ndim else float(rho),
                                where=where)
    u = q[MX] / rho
    v = q[MY] / rho
    w = q[MZ] / rho
    p = (gamma - 1.0) * (q[EN] - 0.5 * rho * (u * u + v * v + w * w)
                         - 0.5 * (q[B1] ** 2 + q[B2] ** 2 + q[B3] ** 2))
    if check and np.any(~(p > 0.0)):
        bad = _first_bad(~(p > 0.0))
        raise InvalidStateError("non-positive pressure", node=bad,
                                value=float(p[bad]) if p.ndim else float(p),
                                where=where)
    return rho, u, v, w, p, q[B1], q[B2], q[B3]


def pressure(q, gamma=GAMMA):
    rho = q[RHO]
    return (gamma - 1.0) * (q[EN]
                            - 0.5 * (q[MX] ** 2 + q[MY] ** 2 + q[MZ] ** 2) / rho
                            - 0.5 * (q[B1] ** 2 + q[B2] ** 2 + q[B3] ** 2))


def physical_flux(q, axis, gamma=GAMMA):
    """Pointwise flux column for axis 'x' or 'y'."""
    rho, u, v, w, p, b1, b2, b3 = conserved_to_primitive(q, gamma, check=False)
    ptot = p + 0.5 * (b1 * b1 + b2 * b2 + b3 * b3)
    udotb = u * b1 + v * b2 + w * b3
    F = np.empty_like(q)
    if axis == "x":
        F[RHO] = q[MX]
        F[MX] = q[MX] * u + ptot - b1 * b1
        F[MY] = q[MX] * v - b1 * b2
        F[MZ] = q[MX] * w - b1 * b3
        F[EN] = u * (q[EN] + ptot) - b1 * udotb
        F[B1] = 0.0
        F[B2] = u * b2 - v * b1
        F[B3] = u * b3 - w * b1
    elif axis == "y":
        F[RHO] = q[MY]
        F[MX] = q[MY] * u - b2 * b1
        F[MY] = q[MY] * v + ptot - b2 * b2
        F[MZ] = q[MY] * w - b2 * b3
        F[EN] = v * (q[EN] + ptot) - b2 * udotb
        F[B1] = v * b1 - u * b2
        F[B2] = 0.0
        F[B3] = v * b3 - w * b2
    else:
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    return F


def transformed_flux(q, kt, kx, ky, gamma=GAMMA):
    """Metric-weighted flux kt*q + kx*f(q) + ky*g(q).

    The coefficients are the J^-1-scaled metrics of the sweep direction,
    e.g. (J^-1 xi_t, J^-1 xi_x, J^-1 xi_y) for the xi-flux.
    """
    kt, kx, ky = np.asarray(kt), np.asarray(kx), np.asarray(ky)
    rho, u, v, w, p, b1, b2, b3 = conserved_to_primitive(q, gamma, check=False)
    ptot = p + 0.5 * (b1 * b1 + b2 * b2 + b3 * b3)
    udotb = u * b1 + v * b2 + w * b3
    un = kx * u + ky * v                 # metric-weighted normal velocity
    bn = kx * b1 + ky * b2
    adv = kt + un                        # common advective coefficient
    out = np.empty_like(q)
    out[RHO] = kt * q[RHO] + rho * un
    out[MX] = adv * q[MX] + kx * ptot - bn * b1
    out[MY] = adv * q[MY] + ky * ptot - bn * b2
    out[MZ] = adv * q[MZ] - bn * b3
    out[EN] = adv * q[EN] + un * ptot - bn * udotb
    out[B1] = adv * b1 - bn * u
    out[B2] = adv * b2 - bn * v
    out[B3] = adv * b3 - bn * w
    return out


# ---------------------------------------------------------------------------
# Characteristic decomposition
# ---------------------------------------------------------------------------

@dataclass
class CharacteristicBasis:
    """Right/left eigenvector matrices and eigenvalues of d(ftilde)/dq."""
    right: np.ndarray        # (..., 8, 8)
    left: np.ndarray         # (..., 8, 8)
    eigenvalues: np.ndarray  # (..., 8), ascending


def _wave_speeds(rho, p, bn, bt_norm, gamma):
    a2 = gamma * p / rho
    ca2 = bn * bn / rho
    ct2 = bt_norm * bt_norm / rho
    total = a2 + ca2 + ct2
    disc = np.sqrt(np.maximum(total * total - 4.0 * a2 * ca2, 0.0))
    cf2 = 0.5 * (total + disc)
    cs2 = np.maximum(0.5 * (total - disc), 0.0)
    return a2, ca2, cf2, cs2


def fast_speed(q, n1, n2, gamma=GAMMA):
    """Fast magnetosonic speed along the unit direction (n1, n2)."""
    rho, u, v, w, p, b1, b2, b3 = conserved_to_primitive(q, gamma, where="fast_speed")
    bn = n1 * b1 + n2 * b2
    btn = np.hypot(-n2 * b1 + n1 * b2, b3)
    _, _, cf2, _ = _wave_speeds(rho, p, bn, btn, gamma)
    return np.sqrt(cf2)


def eigen_right(q_mean, n1, n2, gamma=GAMMA, where="eigensystem"):
    """Right eigenvectors and the 1D eigenvalue offsets along (n1, n2).

    Returns ``(R, un, speeds)`` where ``R`` has shape (..., 8, 8), ``un`` is
    the normal velocity, and ``speeds = (cf, ca, cs)``.  Columns are ordered
    [fast-, alfven-, slow-, entropy, div, slow+, alfven+, fast+].
    """
    rho, u, v, w, p, b1, b2, b3 = conserved_to_primitive(q_mean, gamma, where=where)
    n1 = np.asarray(n1, dtype=float)
    n2 = np.asarray(n2, dtype=float)
    un = n1 * u + n2 * v
    ut = -n2 * u + n1 * v
    bn = n1 * b1 + n2 * b2
    bt = -n2 * b1 + n1 * b2

    btn = np.hypot(bt, b3)
    a2, ca2, cf2, cs2 = _wave_speeds(rho, p, bn, btn, gamma)
    a = np.sqrt(a2)
    ca = np.sqrt(ca2)
    cf = np.sqrt(cf2)
    cs = np.sqrt(cs2)

    ok = btn > 1e-100
    bety = np.where(ok, np.divide(bt, btn, out=np.full_like(btn, _SQRT_HALF),
                                  where=ok), _SQRT_HALF)
    betz = np.where(ok, np.divide(b3, btn, out=np.full_like(btn, _SQRT_HALF),
                                  where=ok), _SQRT_HALF)

    dfs = cf2 - cs2
    nz = dfs > 1e-12 * (a2 + ca2 + btn * btn / rho) + 1e-300
    alf2 = np.where(nz, np.clip(np.divide(a2 - cs2, dfs, out=np.zeros_like(dfs),
                                          where=nz), 0.0, 1.0), 0.5)
    als2 = np.where(nz, np.clip(np.divide(cf2 - a2, dfs, out=np.zeros_like(dfs),
                                          where=nz), 0.0, 1.0), 0.5)
    alf = np.sqrt(alf2)
    als = np.sqrt(als2)

    s = np.where(bn >= 0.0, 1.0, -1.0)
    sq = np.sqrt(rho)

    shape = np.broadcast_shapes(rho.shape, n1.shape)
    zero = np.zeros(shape)
    R = np.empty(shape + (8, 8))
    ke = 0.5 * (un * un + ut * ut + w * w)

    def col(idx, dr, dun, dut, dw, dp, dbn, dbt, db3):
        # primitive (rotated) -> conservative (rotated) -> physical frame
        c = R[..., idx]
        c[..., RHO] = dr
        mn = un * dr + rho * dun
        mt = ut * dr + rho * dut
        c[..., MZ] = w * dr + rho * dw
        c[..., EN] = (ke * dr + rho * (un * dun + ut * dut + w * dw)
                      + dp / (gamma - 1.0) + bn * dbn + bt * dbt + b3 * db3)
        c[..., MX] = n1 * mn - n2 * mt
        c[..., MY] = n2 * mn + n1 * mt
        c[..., B1] = n1 * dbn - n2 * dbt
        c[..., B2] = n2 * dbn + n1 * dbt
        c[..., B3] = db3

    rho_af = rho * alf
    rho_as = rho * als
    pa_f = alf * rho * a2
    pa_s = als * rho * a2
    bt_f = als * a * sq * bety
    b3_f = als * a * sq * betz
    bt_s = -alf * a * sq * bety
    b3_s = -alf * a * sq * betz

    one = np.ones(shape)
    col(0, rho_af, -alf * cf, als * cs * bety * s, als * cs * betz * s,
        pa_f, zero, bt_f, b3_f)                                      # fast-
    col(1, zero, zero, -betz, bety, zero, zero, -s * sq * betz,
        s * sq * bety)                                               # alfven-
    col(2, rho_as, -als * cs, -alf * cf * bety * s, -alf * cf * betz * s,
        pa_s, zero, bt_s, b3_s)                                      # slow-
    col(3, one, zero, zero, zero, zero, zero, zero, zero)            # entropy
    col(4, zero, zero, zero, zero, zero, one, zero, zero)            # div
    col(5, rho_as, als * cs, alf * cf * bety * s, alf * cf * betz * s,
        pa_s, zero, bt_s, b3_s)                                      # slow+
    col(6, zero, zero, -betz, bety, zero, zero, s * sq * betz,
        -s * sq * bety)                                              # alfven+
    col(7, rho_af, alf * cf, -als * cs * bety * s, -als * cs * betz * s,
        pa_f, zero, bt_f, b3_f)                                      # fast+
    return R, un, (cf, ca, cs)


def eigensystem(q_mean, direction, gamma=GAMMA, kt=0.0, scale=1.0):
    """Characteristic basis of the transformed flux Jacobian.

    ``direction`` is the unit metric normal (n1, n2); ``scale`` the metric
    magnitude |k| multiplying the 1D eigenvalues and ``kt`` the temporal
    metric offset.  ``left`` is the exact matrix inverse of ``right``.
    """
    n1, n2 = direction
    R, un, (cf, ca, cs) = eigen_right(q_mean, n1, n2, gamma)
    lam_hat = np.stack([un - cf, un - ca, un - cs, un, un,
                        un + cs, un + ca, un + cf], axis=-1)
    lam = np.asarray(kt)[..., None] + np.asarray(scale)[..., None] * lam_hat
    return CharacteristicBasis(right=R, left=np.linalg.inv(R), eigenvalues=lam)


def max_wave_speed(states, direction, gamma=GAMMA):
    """Global spectral-radius bound over a collection of states.

    ``direction = (kt, kx, ky)`` holds the metric coefficients (arrays or
    scalars) at the same points as ``states``.
    """
    q = np.asarray(states)
    if q.size == 0 or q.shape[0] != 8:
        raise ValueError("states must be a non-empty (8, ...) array")
    kt, kx, ky = (np.asarray(c) for c in direction)
    knorm = np.hypot(kx, ky)
    safe = np.where(knorm > 0.0, knorm, 1.0)
    rho, u, v, w, p, b1, b2, b3 = conserved_to_primitive(q, gamma,
                                                         where="max_wave_speed")
    un = (kx * u + ky * v) / safe
    bn = (kx * b1 + ky * b2) / safe
    btn = np.hypot((-ky * b1 + kx * b2) / safe, b3)
    _, _, cf2, _ = _wave_speeds(rho, p, bn, btn, gamma)
    return float(np.max(np.abs(kt + knorm * un) + knorm * np.sqrt(cf2)))
