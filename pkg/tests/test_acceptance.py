"""Acceptance suite: every criterion at its stated tolerance, one line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the pass/fail lines.
The expensive fixtures (convergence studies, ensembles) are shared per module.
"""

import numpy as np
import pytest

from virialwave.spectral import PeriodicGrid, inner, integrate
from virialwave.dtn import (Depth, FlattenedDomain, dtn_apply, dtn_from_extension,
                            dtn_shape_derivative, harmonic_extension)
from virialwave.dynamics import SurfaceState, linear_frequency
from virialwave.diagnostics import (check_bottom_potential_rate, check_eta_sq_accel,
                                    check_longuet_higgins, check_rellich)
from virialwave.config import SimConfig
from virialwave.runner import convergence_study, report_standing_wave, run_inequalities, run_rt_presets
from virialwave.inequalities import random_surface, _random_trace
from virialwave.standing import StandingWaveExpansion, modified_kinetic_period_integral, potential_period_integral

H1 = Depth.finite(1.0)
DINF = Depth.infinite_depth()


def _verdict(num: int, ok: bool, desc: str):
    print(f"criterion {num:02d} {'PASS' if ok else 'FAIL'}: {desc}")
    assert ok, f"criterion {num:02d} failed: {desc}"


def _study_config(depth_doc, n_z_base, t_end_periods, stride_frac, identities, eps=0.01):
    depth = Depth.finite(depth_doc["h"]) if depth_doc["kind"] == "finite" \
        else Depth.infinite_depth(depth_doc["h_eff"])
    w = linear_frequency(1.0, 1, depth)
    T = 2 * np.pi / w
    return SimConfig.from_dict({
        "n_x": 16, "n_z": n_z_base, "depth": depth_doc, "g": 1.0,
        "dt": T / 100, "t_end": t_end_periods * T, "output_stride": T / stride_frac,
        "initial_condition": {"kind": "linear_standing", "eps": eps, "k": 1},
        "identity_set": identities, "seed": 0})


@pytest.fixture(scope="module")
def finite_study():
    cfg = _study_config({"kind": "finite", "h": 1.0}, 12, 1.1, 100,
                        ["virial_rate", "eta_sq_accel", "rellich", "mean_psi_drift",
                         "longuet_higgins", "bottom_potential_rate",
                         "slope_momentum_rate", "equipartition_avg"])
    return convergence_study(cfg, 3)


@pytest.fixture(scope="module")
def infinite_study():
    cfg = _study_config({"kind": "infinite", "h_eff": 10.0}, 32, 1.1, 100,
                        ["virial_rate", "eta_sq_accel"])
    return convergence_study(cfg, 3)


@pytest.fixture(scope="module")
def conservation_study():
    cfg = _study_config({"kind": "finite", "h": 1.0}, 12, 10.0, 10, [])
    return convergence_study(cfg, 3)


@pytest.fixture(scope="module")
def rt_manifest():
    return run_rt_presets(out_dir=None)


@pytest.fixture(scope="module")
def inequalities_manifest():
    return run_inequalities(seed=2024, count=100, n_x=128, n_z=64, out_dir=None)


def test_criterion_01_flat_dtn_exactness():
    grid = PeriodicGrid(64)
    x = grid.nodes
    eta0 = grid.zero_field()
    worst = 0.0
    for h in (0.5, 1.0, 3.0):
        depth = Depth.finite(h)
        for k in range(1, 9):
            out = dtn_apply(eta0, grid.field(np.cos(k * x)), depth, n_z=64)
            exact = k * np.tanh(h * k) * np.cos(k * x)
            worst = max(worst, np.max(np.abs(out.values - exact)) / np.max(np.abs(exact)))
    _verdict(1, worst <= 1e-8,
             f"flat DtN matches k tanh(hk) per mode (worst rel {worst:.2e} <= 1e-8)")


def test_criterion_02_structural_dtn_properties():
    grid = PeriodicGrid(128)
    depth = H1
    pos_min, adj_max, mean_max, zar_max = np.inf, 0.0, 0.0, -np.inf
    for i in range(100):
        seed = 9000 + 7 * i
        eta = random_surface(grid, seed, 0.5, 8, depth=depth)
        p1 = _random_trace(grid, seed + 1, 1.0, 8)
        p2 = _random_trace(grid, seed + 2, 1.0, 8)
        dom = FlattenedDomain(eta, depth, 64)
        g1 = dtn_from_extension(harmonic_extension(eta, p1, depth, domain=dom))
        g2 = dtn_from_extension(harmonic_extension(eta, p2, depth, domain=dom))
        pos_min = min(pos_min, inner(p1, g1))
        q12, q21 = inner(p1, g2), inner(p2, g1)
        adj_max = max(adj_max, abs(q12 - q21) / max(abs(q12), abs(q21), 1e-14))
        mean_max = max(mean_max, abs(integrate(g1)))
        sig = random_surface(grid, seed + 3, 0.5, 8, depth=Depth.finite(2.0))
        gz = dtn_apply(sig, sig, Depth.finite(2.0), n_z=64)
        zar_max = max(zar_max, float(np.max(gz.values)))
    ok = (pos_min >= -1e-10 and adj_max <= 1e-9 and mean_max <= 1e-10
          and zar_max <= 1.0 + 1e-8)
    _verdict(2, ok, "DtN structure on 100 seeded samples: positivity "
             f"{pos_min:.2e} >= -1e-10, self-adjointness {adj_max:.2e} <= 1e-9, "
             f"mean {mean_max:.2e} <= 1e-10, max G(s)s {zar_max:.6f} <= 1+1e-8")


def test_criterion_03_shape_derivative_order():
    grid = PeriodicGrid(64)
    x = grid.nodes
    psi = grid.field(np.cos(x) + 0.3 * np.sin(2 * x))
    zeta = grid.field(np.cos(2 * x) + 0.5 * np.sin(3 * x))
    z0 = grid.zero_field()
    dg = dtn_shape_derivative(z0, psi, zeta, DINF, n_z=64)
    g0 = dtn_apply(z0, psi, DINF, n_z=64)
    errs = []
    for eps in (1e-2, 5e-3, 2.5e-3):
        ge = dtn_apply(grid.field(eps * zeta.values), psi, DINF, n_z=64)
        r = ge.values - g0.values - eps * dg.values
        errs.append(np.sqrt(np.mean(r ** 2)))
    order = min(np.log2(errs[i] / errs[i + 1]) for i in range(2))
    _verdict(3, order >= 1.9,
             f"linearization remainder order {order:.3f} >= 1.9 over eps halvings")


def test_criterion_04_rellich():
    grid = PeriodicGrid(128)
    worst = 0.0
    for i in range(25):
        eta = random_surface(grid, 3000 + i, 0.3, 8, depth=H1)
        psi = _random_trace(grid, 4000 + i, 1.0, 8)
        st = SurfaceState(eta=eta, psi=psi, t=0.0, g=1.0, depth=H1)
        worst = max(worst, check_rellich(st, n_z=64).rel_residual)
    g64 = PeriodicGrid(64)
    st = SurfaceState(eta=g64.zero_field(), psi=g64.field(np.cos(g64.nodes)),
                      t=0.0, g=1.0, depth=H1)
    rep = check_rellich(st, n_z=64)
    exact = np.pi / (2 * np.cosh(1.0) ** 2)
    closed = max(abs(rep.lhs - exact), abs(rep.rhs - exact))
    ok = worst <= 1e-6 and closed <= 1e-8
    _verdict(4, ok, f"Rellich identity: ensemble rel {worst:.2e} <= 1e-6, "
             f"closed-form gap {closed:.2e} <= 1e-8")


def test_criterion_05_virial_rate(finite_study, infinite_study):
    msgs, ok = [], True
    for label, study in (("finite", finite_study), ("infinite", infinite_study)):
        row = study["table"]["virial_rate"]
        res_fine = row["normalized_residuals"][-1]
        order = row["fitted_order"]
        ok = ok and res_fine <= 1e-4 and order >= 2.0
        msgs.append(f"{label}: residual {res_fine:.2e} <= 1e-4 at T/400, "
                    f"order {order:.2f} >= 2")
    _verdict(5, ok, "virial rate identity; " + "; ".join(msgs))


def test_criterion_06_second_virial_and_mean_psi(finite_study, infinite_study):
    v_fin = finite_study["table"]["eta_sq_accel"]["normalized_residuals"][-1]
    v_inf = infinite_study["table"]["eta_sq_accel"]["normalized_residuals"][-1]
    m_fin = finite_study["table"]["mean_psi_drift"]["normalized_residuals"][-1]
    gammas = [r["invariants"]["gamma_min"] for r in finite_study["runs"]]
    gammas += [r["invariants"]["gamma_min"] for r in infinite_study["runs"]]
    traj = finite_study["runs"][-1]["trajectory"]
    drift_rhs_max = max(-0.5 * r.extras["bottom_grad_sq"] for r in traj.records)
    # the residuals also shrink at second order in the stride (the 3-point
    # second-difference estimator reads 2 - O((w dt)^2) on a pure sinusoid)
    o_v = finite_study["table"]["eta_sq_accel"]["fitted_order"]
    o_m = finite_study["table"]["mean_psi_drift"]["fitted_order"]
    ok = (v_fin <= 1e-4 and v_inf <= 1e-4 and m_fin <= 1e-4
          and min(gammas) >= -1e-8 and drift_rhs_max <= 0.0
          and o_v >= 1.97 and o_m >= 2.0)
    _verdict(6, ok, f"second-order virial {v_fin:.2e}/{v_inf:.2e} and mean-psi "
             f"drift {m_fin:.2e} <= 1e-4 (orders {o_v:.3f}, {o_m:.2f}); "
             f"gamma_min {min(gammas):.2e} >= -1e-8; "
             f"drift rhs max {drift_rhs_max:.2e} <= 0")


def test_criterion_07_pressure_virial_cross_check(finite_study):
    traj = finite_study["runs"][-1]["trajectory"]
    n = len(traj)
    worst_ratio = 0.0
    for i in range(n // 8, n - 2, n // 8):
        lh = check_longuet_higgins(traj, i, n_z=48)
        v1 = check_eta_sq_accel(traj, i, n_z=48)
        c2 = check_bottom_potential_rate(traj, i, n_z=48)
        combo = abs((lh.lhs - lh.rhs) - (v1.lhs - v1.rhs) - (c2.lhs - c2.rhs))
        cap = 10 * max(lh.abs_residual, v1.abs_residual)
        worst_ratio = max(worst_ratio, combo / max(cap, 1e-300))
    _verdict(7, worst_ratio <= 1.0,
             f"pressure and coefficient forms close algebraically "
             f"(worst combo/cap {worst_ratio:.3f} <= 1)")


def test_criterion_08_standing_wave_energies():
    eps_list = [0.0, 0.05, 0.1, 0.2]
    rep = report_standing_wave(eps_list)
    slope = rep["fitted_eps_slope"]
    intercept = rep["intercept_errors"]["0.0"]
    target = lambda e: np.pi ** 2 / 2 + 3 * np.pi ** 2 / 16 * e ** 2
    value_ok = all(abs(r["kinetic"] - target(r["eps"])) <= max(3 * r["eps"] ** 3, 1e-9)
                   and abs(r["potential"] - target(r["eps"])) <= max(3 * r["eps"] ** 3, 1e-9)
                   for r in rep["rows"])
    # free-coefficient sweeps move the table only at third order
    devs = []
    for eps in (0.05, 0.1, 0.2):
        base = modified_kinetic_period_integral(StandingWaveExpansion(epsilon=eps))
        alt = modified_kinetic_period_integral(
            StandingWaveExpansion(epsilon=eps, A13=1.0, A33=1.0, b13=1.0, b33=1.0))
        pot = potential_period_integral(StandingWaveExpansion(epsilon=eps, b13=-1.0, b33=1.0))
        devs.append(max(abs(alt - base), abs(pot - target(eps)) + 0.0, 1e-300))
    sweep_slope = np.polyfit(np.log([0.05, 0.1, 0.2]), np.log(devs), 1)[0]
    ok = slope >= 2.8 and intercept <= 1e-9 and value_ok and sweep_slope >= 2.5
    _verdict(8, ok, f"standing-wave period integrals: slope {slope:.2f} >= 2.8, "
             f"eps=0 intercept {intercept:.1e} <= 1e-9, values within 3 eps^3, "
             f"coefficient-sweep deviation slope {sweep_slope:.2f}")


def test_criterion_09_rt_zero_gravity(rt_manifest):
    s = rt_manifest["runs"]["rt_zero_g"]["identities"]["rt_monotone"]
    e = s["growth"]
    ok = (abs(e - np.pi / 2) <= 1e-6
          and s["min_rate_margin"] >= -1e-3 * e
          and s["satisfied"])
    _verdict(9, ok, f"g = 0 monotone growth: E = {e:.8f} (pi/2), min rate margin "
             f"{s['min_rate_margin']:.2e} >= -1e-3 E, integrated bound holds")


def test_criterion_10_rt_negative_gravity(rt_manifest):
    s = rt_manifest["runs"]["rt_negative_g"]["identities"]["rt_monotone"]
    ok = (s["rt4_min"] >= -1e-10
          and s["min_rate_margin"] >= -1e-3 * s["growth"]
          and s["satisfied"])
    _verdict(10, ok, f"g = -1 filtered run: E + (|g|/2)||eta||^2 min "
             f"{s['rt4_min']:.2e} >= -1e-10, min rate margin "
             f"{s['min_rate_margin']:.2e} >= -1e-3 |E|")


def test_criterion_11_trace_inequalities(inequalities_manifest):
    reports = {r["inequality_id"]: r for r in inequalities_manifest["reports"]}
    no_violations = all(len(r["violations"]) == 0 for r in reports.values())
    decay_ok = reports["bottom_decay"]["min_margin"] > 0   # slope <= -1/4
    ok = no_violations and decay_ok and not inequalities_manifest["failures"]
    _verdict(11, ok, "trace/duality/quadratic bounds: zero violations across "
             f"default ensembles; bottom-decay slope margin "
             f"{reports['bottom_decay']['min_margin']:.3f} > 0")


def test_criterion_12_conservation(conservation_study):
    tbl = conservation_study["table"]
    mass = max(r["invariants"]["mass_drift"] for r in conservation_study["runs"])
    e_fine = tbl["energy_drift_rel"]["normalized_residuals"][-1]
    order = tbl["energy_drift_rel"]["fitted_order"]
    ok = mass <= 1e-12 and e_fine <= 1e-6 and order >= 3.5
    _verdict(12, ok, f"conservation over 10 periods: mass {mass:.1e} <= 1e-12, "
             f"energy drift {e_fine:.2e} <= 1e-6 at T/400, order {order:.2f} >= 3.5")
