"""Perturbative standing wave: closed-form energies and cross-module tracking."""

import numpy as np
import pytest

from virialwave.spectral import PeriodicGrid
from virialwave.dtn import Depth
from virialwave.dynamics import SurfaceState, simulate
from virialwave.standing import (StandingWaveExpansion, equipartition_residual,
                                 eval_surface, kinetic_time_integrand,
                                 modified_kinetic_period_integral,
                                 potential_period_integral, sub_integrals)

PI = np.pi


def test_expansion_validation():
    with pytest.raises(ValueError):
        StandingWaveExpansion(epsilon=0.31)
    with pytest.raises(ValueError):
        StandingWaveExpansion(epsilon=-0.01)
    assert StandingWaveExpansion(epsilon=0.2).omega == pytest.approx(1 - 0.04 / 8)


def test_eval_surface_phases():
    g = PeriodicGrid(64)
    x = g.nodes
    exp = StandingWaveExpansion(epsilon=0.1)
    # cos t = 0 kills the leading order at t = pi/2
    eta, _ = eval_surface(exp, np.pi / 2, g)
    assert np.max(np.abs(eta.values)) <= 0.1 ** 2 * 1.1
    # at t = 0 the leading orders are cos x and (1/2) cos 2x
    eta, psi = eval_surface(exp, 0.0, g)
    lead = 0.1 * (np.cos(x) + 0.1 * 0.5 * np.cos(2 * x))
    assert np.max(np.abs(eta.values - lead)) <= 2 * 0.1 ** 3
    assert np.max(np.abs(psi.values)) <= 1e-14     # all time factors are sines
    # mean-free at every phase
    for t in np.linspace(0, 2 * np.pi, 9):
        eta, _ = eval_surface(exp, t, g)
        assert abs(eta.mean()) <= 1e-15


def test_sub_integrals_closed_forms():
    eps = 0.1
    exp = StandingWaveExpansion(epsilon=eps)
    t = np.array([0.0, 0.4, 1.3, 2.2, 3.7, 5.1])
    s = sub_integrals(exp, t)
    st2, st4 = np.sin(t) ** 2, np.sin(t) ** 4
    ct2 = np.cos(t) ** 2
    cube = eps ** 3
    assert np.max(np.abs(s["phi_x_leading"] - PI / 4 * st2)) <= 10 * cube
    cross = -eps ** 2 * (15 * PI / 64 * st2 - 5 * PI / 16 * st4)
    assert np.max(np.abs(s["phi_x_cross"] - cross)) <= 10 * cube
    y_lead = PI / 4 * st2 + PI / 2 * eps ** 2 * (st2 - st4)
    assert np.max(np.abs(s["phi_y_leading"] - y_lead)) <= 10 * cube
    assert np.max(np.abs(s["phi_y_cross"] - cross)) <= 10 * cube
    assert np.max(np.abs(s["potential_0"] - PI / 2 * ct2)) <= 1e-13
    assert np.max(np.abs(s["potential_1"])) <= 1e-13             # exactly zero
    p2 = 5 * PI / 32 - PI / 32 * st2 - PI / 8 * st4
    assert np.max(np.abs(s["potential_2"] - p2)) <= 1e-13        # exact at this order


def test_kinetic_time_integrand_matches_closed_form():
    eps = 0.1
    exp = StandingWaveExpansion(epsilon=eps)
    t = np.linspace(0.1, 6.0, 14)
    k = kinetic_time_integrand(exp, t)
    closed = PI / 2 * np.sin(t) ** 2 + PI * eps ** 2 * (
        9 / 32 * np.sin(t) ** 2 - 1 / 8 * np.sin(t) ** 4)
    assert np.max(np.abs(k - closed)) <= 10 * eps ** 3


def test_period_integrals_against_closed_values():
    for eps in (0.0, 0.05, 0.1, 0.2):
        exp = StandingWaveExpansion(epsilon=eps)
        target = PI ** 2 / 2 + 3 * PI ** 2 / 16 * eps ** 2
        em = modified_kinetic_period_integral(exp)
        ep = potential_period_integral(exp)
        tol = 1e-9 if eps == 0.0 else 3 * eps ** 3
        assert abs(em - target) <= tol
        assert abs(ep - target) <= tol


def test_equipartition_residual_scaling():
    eps_list = (0.05, 0.1, 0.2)
    res = [equipartition_residual(StandingWaveExpansion(epsilon=e)) for e in eps_list]
    slope = np.polyfit(np.log(eps_list), np.log(res), 1)[0]
    assert slope >= 2.8
    assert equipartition_residual(StandingWaveExpansion(epsilon=0.0)) <= 1e-12


def test_free_coefficients_shift_results_at_third_order_only():
    # changing (A13, A33, b13, b33) moves each period integral by O(eps^3)
    devs = []
    eps_list = (0.05, 0.1, 0.2)
    for eps in eps_list:
        base = modified_kinetic_period_integral(StandingWaveExpansion(epsilon=eps))
        alt = modified_kinetic_period_integral(
            StandingWaveExpansion(epsilon=eps, A13=1.0, A33=-1.0, b13=1.0, b33=-1.0))
        devs.append(max(abs(alt - base), 1e-300))
    slope = np.polyfit(np.log(eps_list), np.log(devs), 1)[0]
    assert slope >= 2.8
    assert devs[1] <= 20 * 0.1 ** 3


def test_simulator_tracks_expansion_over_one_period():
    # cross-module: the full solver follows the expansion with O(eps^3 + dt^4)
    # error in L2; the phase variable advances at omega times physical time
    g = PeriodicGrid(32)
    depth = Depth.infinite_depth()
    errs = []
    eps_list = (0.05, 0.1)
    for eps in eps_list:
        exp = StandingWaveExpansion(epsilon=eps)
        eta0, psi0 = eval_surface(exp, 0.0, g)
        st = SurfaceState(eta=eta0, psi=psi0, t=0.0, g=1.0, depth=depth)
        t_phys = 2 * np.pi / exp.omega
        traj = simulate(st, t_phys / 256, t_phys, t_phys / 8, n_z=48)
        worst = 0.0
        for s in traj.states:
            eta_ref, _ = eval_surface(exp, exp.omega * s.t, g)
            diff = s.eta.values - eta_ref.values
            worst = max(worst, np.sqrt(2 * np.pi * np.mean(diff ** 2)))
        errs.append(worst)
    slope = np.log(errs[1] / errs[0]) / np.log(eps_list[1] / eps_list[0])
    assert slope >= 2.5
    assert errs[1] <= 10 * eps_list[1] ** 3
