"""State algebra, fluxes, and the characteristic eigensystem."""

import numpy as np
import pytest

from curvmhd import physics as ph

GAMMA = ph.GAMMA


def random_state(rng, bmax=2.0):
    rho = rng.uniform(0.1, 5.0)
    u, v, w = rng.uniform(-2, 2, 3)
    p = rng.uniform(0.05, 4.0)
    b = rng.uniform(-bmax, bmax, 3)
    return ph.primitive_to_conserved(rho, u, v, w, p, *b)


class TestConversions:
    def test_freestream_energy(self):
        q = ph.primitive_to_conserved(GAMMA ** 2, 1, 0, 0, GAMMA, 1, 1, 0)
        assert q[ph.EN] == pytest.approx(44.0 / 9.0, rel=1e-14)

    def test_unit_energy(self):
        q = ph.primitive_to_conserved(1.0, 0, 0, 0, GAMMA - 1.0, 0, 0, 0)
        assert q[ph.EN] == pytest.approx(1.0, rel=1e-15)

    def test_round_trip(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            q = random_state(rng)
            prim = ph.conserved_to_primitive(q)
            q2 = ph.primitive_to_conserved(*prim)
            assert np.allclose(q2, q, rtol=1e-14, atol=1e-14)

    def test_negative_density_flagged_with_node(self):
        q = ph.primitive_to_conserved(np.ones((3, 3)), 0, 0, 0,
                                      np.ones((3, 3)), 0, 0, 0)
        q[ph.RHO, 1, 2] = -1.0
        with pytest.raises(ph.InvalidStateError) as err:
            ph.conserved_to_primitive(q)
        assert err.value.node == (1, 2)
        assert "density" in err.value.reason

    def test_negative_pressure_flagged(self):
        q = ph.primitive_to_conserved(np.ones(4), 0, 0, 0, np.ones(4), 0, 0, 0)
        q[ph.EN, 2] = 0.0
        with pytest.raises(ph.InvalidStateError) as err:
            ph.conserved_to_primitive(q)
        assert err.value.node == (2,)


class TestFluxes:
    def test_rest_state_flux(self):
        p = 0.8
        q = ph.primitive_to_conserved(1.0, 0, 0, 0, p, 0, 0, 0)
        f = ph.physical_flux(q, "x")
        want = np.zeros(8)
        want[ph.MX] = p
        assert np.allclose(f, want, atol=1e-15)

    def test_freestream_mass_flux(self):
        q = ph.primitive_to_conserved(GAMMA ** 2, 1, 0, 0, GAMMA, 1, 1, 0)
        f = ph.physical_flux(q, "x")
        assert f[ph.RHO] == pytest.approx(25.0 / 9.0, rel=1e-14)

    def test_induction_row(self):
        rng = np.random.default_rng(1)
        q = random_state(rng)
        rho, u, v, w, p, b1, b2, b3 = ph.conserved_to_primitive(q)
        f = ph.physical_flux(q, "x")
        assert f[ph.B2] == pytest.approx(u * b2 - v * b1, rel=1e-13)
        assert f[ph.B1] == 0.0

    def test_transformed_flux_identity_map(self):
        rng = np.random.default_rng(2)
        q = random_state(rng)
        ft = ph.transformed_flux(q, 0.0, 1.0, 0.0)
        assert np.allclose(ft, ph.physical_flux(q, "x"), rtol=1e-13, atol=1e-14)

    def test_transformed_flux_pure_mesh_motion(self):
        rng = np.random.default_rng(3)
        q = random_state(rng)
        kt = -0.37
        ft = ph.transformed_flux(q, kt, 0.0, 0.0)
        assert np.allclose(ft, kt * q, rtol=1e-14)

    def test_transformed_flux_sum_oracle(self):
        rng = np.random.default_rng(4)
        q = random_state(rng)
        kt, kx, ky = 0.3, -1.2, 0.8
        want = (kt * q + kx * ph.physical_flux(q, "x")
                + ky * ph.physical_flux(q, "y"))
        got = ph.transformed_flux(q, kt, kx, ky)
        assert np.allclose(got, want, rtol=1e-13, atol=1e-13)


class TestEigensystem:
    def test_euler_collapse(self):
        q = ph.primitive_to_conserved(1.3, 0.4, -0.2, 0.0, 0.9, 0, 0, 0)
        basis = ph.eigensystem(q, (1.0, 0.0))
        a = np.sqrt(GAMMA * 0.9 / 1.3)
        lam = np.sort(basis.eigenvalues)
        assert lam[0] == pytest.approx(0.4 - a, rel=1e-12)
        assert lam[-1] == pytest.approx(0.4 + a, rel=1e-12)
        assert np.allclose(lam[1:-1], 0.4, atol=1e-12)

    def test_inverse_pair_random_states(self):
        rng = np.random.default_rng(5)
        worst = 0.0
        for _ in range(100):
            q = random_state(rng)
            ang = rng.uniform(0, 2 * np.pi)
            basis = ph.eigensystem(q, (np.cos(ang), np.sin(ang)))
            worst = max(worst, np.max(np.abs(
                basis.right @ basis.left - np.eye(8))))
        assert worst < 1e-12

    def test_eigenvalues_sorted_and_real(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            q = random_state(rng)
            basis = ph.eigensystem(q, (0.6, 0.8))
            lam = basis.eigenvalues
            assert np.all(np.diff(lam) > -1e-12)
            assert np.isrealobj(lam)

    def test_primitive_matrix_oracle(self):
        # A_p r = lambda r for the analytic 1D primitive system (B_n frozen)
        rng = np.random.default_rng(7)
        for _ in range(40):
            q = random_state(rng)
            rho, u, v, w, p, b1, b2, b3 = ph.conserved_to_primitive(q)
            A = np.zeros((8, 8))
            A[0, 0] = u; A[0, 1] = rho
            A[1, 1] = u; A[1, 4] = 1 / rho; A[1, 6] = b2 / rho; A[1, 7] = b3 / rho
            A[2, 2] = u; A[2, 6] = -b1 / rho
            A[3, 3] = u; A[3, 7] = -b1 / rho
            A[4, 1] = GAMMA * p; A[4, 4] = u
            A[5, 5] = u
            A[6, 1] = b2; A[6, 2] = -b1; A[6, 6] = u
            A[7, 1] = b3; A[7, 3] = -b1; A[7, 7] = u
            R, un, (cf, ca, cs) = ph.eigen_right(q, 1.0, 0.0)
            lam = np.array([un - cf, un - ca, un - cs, un, un,
                            un + cs, un + ca, un + cf])
            # convert conservative eigenvectors back to primitive
            M = np.zeros((8, 8))
            M[0, 0] = 1
            M[1, 0] = u; M[1, 1] = rho
            M[2, 0] = v; M[2, 2] = rho
            M[3, 0] = w; M[3, 3] = rho
            M[4, 0] = 0.5 * (u * u + v * v + w * w)
            M[4, 1] = rho * u; M[4, 2] = rho * v; M[4, 3] = rho * w
            M[4, 4] = 1 / (GAMMA - 1); M[4, 5] = b1; M[4, 6] = b2; M[4, 7] = b3
            M[5, 5] = M[6, 6] = M[7, 7] = 1
            Rp = np.linalg.solve(M, R)
            for k in range(8):
                if k == 4:
                    continue  # divergence wave: dB_n mode, excluded from A_p
                res = A @ Rp[:, k] - lam[k] * Rp[:, k]
                assert np.max(np.abs(res)) < 1e-11 * max(
                    1.0, np.max(np.abs(Rp[:, k])) * abs(lam[k]))

    def test_fd_jacobian_consistency_divfree_subspace(self):
        rng = np.random.default_rng(8)
        worst = 0.0
        for _ in range(30):
            q = random_state(rng)
            ang = rng.uniform(0, 2 * np.pi)
            n1, n2 = np.cos(ang), np.sin(ang)
            scale = rng.uniform(0.5, 2.0)
            kx, ky = scale * n1, scale * n2
            basis = ph.eigensystem(q, (n1, n2), scale=scale)
            M = basis.right @ np.diag(basis.eigenvalues) @ basis.left
            J = np.zeros((8, 8))
            for c in range(8):
                dq = np.zeros(8)
                dq[c] = 1e-6 * max(1.0, abs(q[c]))
                J[:, c] = (ph.transformed_flux(q + dq, 0, kx, ky)
                           - ph.transformed_flux(q - dq, 0, kx, ky)) / (2 * dq[c])
            # restrict to perturbations with dB_n = 0
            tang = np.zeros(8); tang[ph.B1] = -n2; tang[ph.B2] = n1
            basis_vecs = [np.eye(8)[c] for c in (0, 1, 2, 3, 4, 7)] + [tang]
            scale_j = max(1.0, np.max(np.abs(J)))
            for vec in basis_vecs:
                worst = max(worst, np.max(np.abs((M - J) @ vec)) / scale_j)
        assert worst < 1e-6

    def test_degenerate_tangential_field(self):
        for p, b1 in ((1.0, 0.5), (0.1, 3.0), (0.6, 1.0), (1.0, 0.0)):
            q = ph.primitive_to_conserved(1.0, 0.3, -0.2, 0.1, p, b1, 0, 0)
            basis = ph.eigensystem(q, (1.0, 0.0))
            assert np.max(np.abs(basis.right @ basis.left - np.eye(8))) < 1e-12

    def test_tangential_rotation_invariance(self):
        # swapping B3 with the tangential component leaves eigenvalues alone
        q1 = ph.primitive_to_conserved(1.2, 0.5, 0.0, 0.0, 0.7, 0.4, 0.9, 0.2)
        q2 = ph.primitive_to_conserved(1.2, 0.5, 0.0, 0.0, 0.7, 0.4, 0.2, 0.9)
        l1 = ph.eigensystem(q1, (1.0, 0.0)).eigenvalues
        l2 = ph.eigensystem(q2, (1.0, 0.0)).eigenvalues
        assert np.allclose(l1, l2, rtol=1e-12)


class TestWaveSpeed:
    def test_single_state(self):
        q = ph.primitive_to_conserved(1.0, 0.5, 0, 0, 1.0, 0.3, 0.2, 0.0)
        alpha = ph.max_wave_speed(q.reshape(8, 1), (0.0, 1.0, 0.0))
        basis = ph.eigensystem(q, (1.0, 0.0))
        assert alpha == pytest.approx(np.max(np.abs(basis.eigenvalues)),
                                      rel=1e-12)

    def test_freestream_alpha_vs_quartic_roots(self):
        q = ph.primitive_to_conserved(GAMMA ** 2, 1, 0, 0, GAMMA, 1, 1, 0)
        alpha = ph.max_wave_speed(q.reshape(8, 1), (0.0, 1.0, 0.0))
        rho = GAMMA ** 2
        a2 = GAMMA * GAMMA / rho
        ca2 = 1.0 / rho
        ct2 = 1.0 / rho
        roots = np.roots([1.0, 0.0, -(a2 + ca2 + ct2), 0.0, a2 * ca2])
        cf = np.max(np.abs(roots.real))
        assert alpha == pytest.approx(1.0 + cf, rel=1e-12)

    def test_uniform_field_constant_alpha(self):
        q = ph.primitive_to_conserved(np.full((5, 5), GAMMA ** 2), 1, 0, 0,
                                      GAMMA, 1, 1, 0)
        a_all = ph.max_wave_speed(q, (0.0, 1.0, 0.0))
        a_one = ph.max_wave_speed(q[:, :1, :1], (0.0, 1.0, 0.0))
        assert a_all == pytest.approx(a_one, rel=1e-14)

    def test_blast_alpha_dominated_by_disc(self):
        x = np.linspace(0, 1, 21)
        X, Y = np.meshgrid(x, x, indexing="ij")
        r = np.hypot(X - 0.5, Y - 0.5)
        p = np.where(r <= 0.1, 1000.0, 0.1)
        b = 50.0 * np.sqrt(2 * np.pi)
        q = ph.primitive_to_conserved(np.ones_like(p), 0, 0, 0, p, b, b, 0)
        alpha = ph.max_wave_speed(q, (0.0, 1.0, 0.0))
        q_amb = ph.primitive_to_conserved(1.0, 0, 0, 0, 0.1, b, b, 0.0)
        alpha_amb = ph.max_wave_speed(q_amb.reshape(8, 1), (0.0, 1.0, 0.0))
        assert alpha > alpha_amb

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            ph.max_wave_speed(np.zeros((8, 0)), (0.0, 1.0, 0.0))
