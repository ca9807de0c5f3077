"""Third-order TVD Runge-Kutta advance over tuples of fields."""

from __future__ import annotations


def rk3_advance(u, rhs, dtau, post_stage=None):
    """One TVD-RK3 step: u(1) = u + dt L; u(2) = 3/4 u + 1/4 (u(1) + dt L);
    u(n+1) = 1/3 u + 2/3 (u(2) + dt L).

    ``u`` is a tuple of arrays (or scalars); ``rhs(u, stage)`` returns the
    matching tuple of time derivatives, with ``stage`` in {0, 1, 2} so
    providers can evaluate stage-consistent mesh geometry.  ``post_stage``
    optionally post-processes the intermediate solutions.
    """
    k0 = rhs(u, 0)
    u1 = tuple(a + dtau * b for a, b in zip(u, k0))
    if post_stage is not None:
        u1 = post_stage(u1, 1)
    k1 = rhs(u1, 1)
    u2 = tuple(0.75 * a + 0.25 * (b + dtau * c) for a, b, c in zip(u, u1, k1))
    if post_stage is not None:
        u2 = post_stage(u2, 2)
    k2 = rhs(u2, 2)
    return tuple(a / 3.0 + (2.0 / 3.0) * (b + dtau * c)
                 for a, b, c in zip(u, u2, k2))
