"""Numerical layer: eigensolver accuracy and convergence order, analytic
eigenstates, quadrature conventions, and operator application to sampled
states."""

import math

import numpy as np
import pytest

from susy2d import numerics as nm
from susy2d import systems as sy
from susy2d.systems import SystemId

HO = SystemId("ho")
HA = SystemId("ha")


class TestRadialGrid:
    def test_spacing_and_points(self):
        g = nm.RadialGrid(10.0, 99)
        assert g.h == pytest.approx(0.1)
        assert g.r[0] == pytest.approx(g.h)
        assert g.r[-1] == pytest.approx(10.0 - g.h)

    def test_refine_halves_step(self):
        g = nm.RadialGrid(10.0, 99)
        assert g.refine().h == pytest.approx(g.h / 2)
        assert g.refine().r_max == g.r_max

    def test_validation(self):
        with pytest.raises(ValueError):
            nm.RadialGrid(-1.0, 100)
        with pytest.raises(ValueError):
            nm.RadialGrid(1.0, 4)


class TestQuadrature:
    def test_norm_convention_is_rectangle_sum(self):
        u = np.array([1.0, 2.0, 2.0])
        assert nm.norm_of(u, 0.5) == pytest.approx(math.sqrt(4.5))

    def test_overlap_bounds_and_normalization(self):
        g = nm.RadialGrid(14.0, 2000)
        a = nm.analytic_state(HO, 0, 0, g)
        b = nm.analytic_state(HO, 2, 0, g)
        assert nm.overlap(a.u, a.u, g.h) == pytest.approx(1.0, abs=1e-12)
        # distinct levels are orthogonal up to the O(h^2) quadrature error
        assert nm.overlap(a.u, b.u, g.h) < 1e-4


class TestEigensolver:
    def test_oscillator_energies(self):
        g = nm.reference_grid(HO)
        for m in (0, 1, 2):
            for st in nm.spectrum(HO, m, g, 3):
                assert abs(st.energy - (st.n + 1)) <= 1e-4

    def test_hydrogen_energies(self):
        g = nm.reference_grid(HA)
        for m in (0, 1):
            for st in nm.spectrum(HA, m, g, 3):
                exact = -0.5 / (st.n - 0.5) ** 2
                assert abs(st.energy - exact) <= 1e-3

    def test_second_order_convergence_oscillator_m0(self):
        # the m = 0 sector has the rho^{1/2} cusp; the flux-form scheme must
        # stay O(h^2) there
        grids = [nm.RadialGrid(14.0, 1000)]
        grids += [grids[-1].refine(), grids[-1].refine().refine()]
        es = [nm.eigensolve(HO, 0, g, 1)[0][0] for g in grids]
        _, ratio = nm.richardson(es[0], es[1], es[2])
        assert 3.5 <= ratio <= 4.5

    def test_second_order_convergence_hydrogen_m0(self):
        grids = [nm.RadialGrid(60.0, 2000)]
        grids += [grids[-1].refine(), grids[-1].refine().refine()]
        es = [nm.eigensolve(HA, 0, g, 1)[0][0] for g in grids]
        _, ratio = nm.richardson(es[0], es[1], es[2])
        assert 3.0 <= ratio <= 5.0

    def test_eigenvectors_match_analytic_states(self):
        for sid in (HO, HA):
            g = nm.reference_grid(sid)
            for m in (0, 1):
                for st in nm.spectrum(sid, m, g, 2):
                    exact = nm.analytic_state(sid, st.n, m, g)
                    assert nm.overlap(exact.u, st.u, g.h) >= 1 - 1e-8, (sid.kind, st.n, m)

    def test_richardson_eliminates_h2(self):
        extrap, _ = nm.richardson(1.04, 1.01)
        assert extrap == pytest.approx(1.0)


class TestAnalyticStates:
    def test_allowed_state_lattices(self):
        assert nm.allowed_state(HO, 2, 0) and nm.allowed_state(HO, 3, -3)
        assert not nm.allowed_state(HO, 2, 1)  # parity mismatch
        assert not nm.allowed_state(HO, 1, 3)  # |m| > n
        assert nm.allowed_state(HA, 1, 0) and nm.allowed_state(HA, 3, 2)
        assert not nm.allowed_state(HA, 2, 2)  # |m| >= n

    def test_analytic_state_rejects_invalid_labels(self):
        g = nm.RadialGrid(14.0, 100)
        with pytest.raises(ValueError):
            nm.analytic_state(HO, 2, 1, g)

    def test_states_satisfy_radial_equation(self):
        # residual of H_m u = E u in the interior, via FD derivatives on
        # R = u / sqrt(rho)
        g = nm.reference_grid(HO)
        st = nm.analytic_state(HO, 3, 1, g)
        r, h = g.r, g.h
        big_r = st.u / np.sqrt(r)
        d1 = nm.apply_derivative(big_r, h, 1)
        d2 = nm.apply_derivative(big_r, h, 2)
        hpsi = -0.5 * (d2 + d1 / r - st.m ** 2 * big_r / r ** 2) + 0.5 * r * r * big_r
        resid = hpsi - st.energy * big_r
        win = slice(50, g.n_points - 50)
        rel = nm.norm_of(resid[win], h) / nm.norm_of(big_r[win], h)
        assert rel <= 1e-6


class TestOperatorApplication:
    def test_derivative_stencils_are_high_order(self):
        g = nm.RadialGrid(6.0, 600)
        f = np.sin(g.r)
        d2 = nm.apply_derivative(f, g.h, 2)
        assert np.max(np.abs(d2 + f)) < 1e-8

    def test_o_plus_maps_between_analytic_states(self):
        g = nm.reference_grid(HO)
        src = nm.analytic_state(HO, 2, 0, g)
        tgt = nm.analytic_state(HO, 2, 2, g)
        applied, dm = nm.apply_operator(sy.build("ho", "O+"), src)
        assert dm == 2
        assert nm.overlap(applied, tgt.u, g.h) >= 1 - 1e-9

    def test_hamiltonian_application_reproduces_energy(self):
        g = nm.reference_grid(HO)
        st = nm.analytic_state(HO, 3, 3, g)
        applied, dm = nm.apply_operator(sy.build("ho", "H"), st)
        assert dm == 0
        assert nm.overlap(applied, st.u, g.h) >= 1 - 1e-9
        scale = nm.inner(st.u, applied, g.h) / nm.inner(st.u, st.u, g.h)
        assert scale.real == pytest.approx(4.0, abs=1e-6)

    def test_angular_momentum_sector(self):
        g = nm.reference_grid(HO)
        st = nm.analytic_state(HO, 3, -3, g)
        applied, dm = nm.apply_operator(sy.build("ho", "O3"), st)
        # O3 = Lz / 2 in the m = -3 sector multiplies by -3/2
        scale = nm.inner(st.u, applied, g.h) / nm.inner(st.u, st.u, g.h)
        assert dm == 0
        assert scale.real == pytest.approx(-1.5, abs=1e-9)

    def test_zero_energy_states_decay(self):
        u = nm.gen_zero_energy_u(1.0, 2.0, 2, 0, np.linspace(0.1, 20, 400))
        assert abs(u[-1]) < 1e-6 * np.max(np.abs(u))
