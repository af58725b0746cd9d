"""Batch execution: runs, convergence studies, standing-wave tables, reports.

Outputs are deterministic for a fixed config and seed (no timestamps, shortest
round-trip float serialization) and written atomically (write then rename).
One CSV carries the per-output-time scalar record plus one column of absolute
residuals per requested identity; one JSON manifest echoes the config and the
per-identity summaries.  A run fails (nonzero exit through the CLI) iff one of
the asserted invariants is violated; residual magnitudes are reported, with
tolerances left to convergence studies, which declare one per identity from
the finest level reached.
"""

from __future__ import annotations

import json
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .spectral import PeriodicGrid, SurfaceField
from .dtn import Depth
from .dynamics import Trajectory, simulate
from .diagnostics import (IDENTITIES, check_bottom_potential_rate, check_energy_flux,
                          check_equipartition_bound, check_longuet_higgins,
                          check_mean_psi_drift, check_rellich, check_rt_bounds,
                          check_eta_sq_accel, check_momentum_rate, check_virial_rate,
                          ensure_records, equipartition_measured_constant)
from .config import SimConfig, build_initial_state
from .inequalities import (SampleSpec, check_bottom_decay, check_dtn_quadratic_bounds,
                           check_duality_estimate, check_trace_lower_bound)
from .standing import (StandingWaveExpansion, modified_kinetic_period_integral,
                       potential_period_integral)

__all__ = ["run", "convergence_study", "report_standing_wave", "run_inequalities",
           "run_rt_presets", "atomic_write_text", "fit_order"]

RT_SLACK = 1e-3          # relative slack on the monotone growth bounds
RECORD_COLUMNS = ["t", "E_k", "E_p", "E_total", "E_k_mod", "B_bot", "I_virial",
                  "mean_psi", "gamma_min"]


def atomic_write_text(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def fit_order(step_sizes, errors) -> float:
    """Least-squares slope of log(error) against log(step); nan when degenerate."""
    h = np.asarray(step_sizes, dtype=float)
    e = np.asarray(errors, dtype=float)
    good = (e > 0) & np.isfinite(e)
    if np.count_nonzero(good) < 2:
        return float("nan")
    return float(np.polyfit(np.log(h[good]), np.log(e[good]), 1)[0])


def _rate_indices(n: int, order: int):
    half = 2 if order == 4 else 1
    return range(half, n - half)


def _identity_table(traj: Trajectory, config: SimConfig):
    """Per-index absolute residuals and summaries for each requested identity."""
    n = len(traj)
    n_z, order = config.n_z, config.stencil_order
    columns: dict = {}
    summaries: dict = {}
    failures: list = []

    def series_check(name, fn, indices, stencil):
        vals = np.full(n, np.nan)
        scale = 0.0
        for i in indices:
            rep = fn(i)
            vals[i] = rep.abs_residual
            scale = max(scale, abs(rep.lhs), abs(rep.rhs))
        columns[name] = vals
        mx = float(np.nanmax(vals)) if np.any(np.isfinite(vals)) else float("nan")
        summaries[name] = {
            "kind": IDENTITIES[name].kind, "stencil": stencil,
            "max_abs_residual": mx, "scale": scale,
            "normalized_max": mx / scale if scale > 0 else mx,
        }

    for name in config.identity_set:
        kind = IDENTITIES[name].kind
        if name == "virial_rate":
            series_check(name, lambda i: check_virial_rate(traj, i, n_z, order),
                         _rate_indices(n, order), f"centered-{order}")
        elif name == "eta_sq_accel":
            series_check(name, lambda i: check_eta_sq_accel(traj, i, n_z),
                         _rate_indices(n, 2), "centered-2nd")
        elif name == "rellich":
            recs = ensure_records(traj, range(n), n_z=n_z)
            series_check(name, lambda i: check_rellich(traj.states[i], n_z, recs[i]),
                         range(n), "same-time")
        elif name == "mean_psi_drift":
            series_check(name, lambda i: check_mean_psi_drift(traj, i, n_z, order),
                         _rate_indices(n, order), f"centered-{order}")
            rhs_ok = all(traj.records[i] is None
                         or traj.records[i].extras["bottom_grad_sq"] >= -1e-14
                         for i in range(n))
            if not rhs_ok:
                failures.append("mean_psi_drift: positive drift rate observed")
        elif name == "longuet_higgins":
            series_check(name, lambda i: check_longuet_higgins(
                traj, i, n_z, dealias=config.dealias),
                _rate_indices(n, 2), "centered-2nd")
        elif name == "bottom_potential_rate":
            series_check(name, lambda i: check_bottom_potential_rate(traj, i, n_z, order),
                         _rate_indices(n, order), f"centered-{order}")
        elif name == "slope_momentum_rate":
            series_check(name, lambda i: check_momentum_rate(traj, i, n_z, order, form="V"),
                         _rate_indices(n, order), f"centered-{order}")
        elif name == "vertical_momentum_rate":
            series_check(name, lambda i: check_momentum_rate(traj, i, n_z, order, form="B"),
                         _rate_indices(n, order), f"centered-{order}")
        elif name == "equipartition_avg":
            rep = check_equipartition_bound(traj, n_z=n_z)
            c = equipartition_measured_constant(traj, n_z=n_z)
            ok = rep.lhs <= rep.rhs * (1 + 1e-8) + 1e-12
            summaries[name] = {"kind": kind, "lhs": rep.lhs, "rhs": rep.rhs,
                               "margin": rep.rhs - rep.lhs,
                               "measured_constant": c, "satisfied": ok}
            if not ok:
                failures.append(f"equipartition bound violated by {rep.lhs - rep.rhs:.3e}")
        elif name == "energy_flux":
            margins = np.full(n, np.nan)
            for i in range(n):
                rep = check_energy_flux(traj.states[i], n_z=n_z)
                margins[i] = rep.rhs - rep.lhs
                scale = max(abs(rep.rhs), 1e-300)
                if rep.lhs > rep.rhs * (1 + 1e-8) + 1e-14:
                    failures.append(f"energy-flux bound violated at index {i} "
                                    f"by {(rep.lhs - rep.rhs) / scale:.3e} relative")
            columns[name] = -margins   # violation magnitude, negative = satisfied
            summaries[name] = {"kind": kind, "min_margin": float(np.nanmin(margins)),
                               "satisfied": bool(np.nanmin(margins) >= -1e-14)}
        elif name == "rt_monotone":
            out = check_rt_bounds(traj, n_z=n_z, order=order)
            slack = RT_SLACK * max(abs(out["growth"]), 1e-300)
            t_span = np.maximum(traj.times - traj.times[0], 0.0)
            ok_rate = bool(np.min(out["rate_margins"]) >= -slack)
            ok_int = bool(np.all(out["integrated_margins"] >=
                                 -RT_SLACK * abs(out["growth"]) * np.maximum(t_span, 1e-300)))
            ok_rt4 = bool(out["rt4_min"] >= -1e-10)
            summaries[name] = {
                "kind": kind, "growth": out["growth"],
                "min_rate_margin": float(np.min(out["rate_margins"])),
                "min_integrated_margin": float(np.min(out["integrated_margins"])),
                "rt4_min": out["rt4_min"],
                "measured_duality_constant": out.get("measured_duality_constant"),
                "satisfied": ok_rate and ok_int and ok_rt4,
            }
            if not (ok_rate and ok_int and ok_rt4):
                failures.append("Rayleigh-Taylor growth bound violated "
                                f"(rate {np.min(out['rate_margins']):.3e}, "
                                f"rt4 {out['rt4_min']:.3e})")
        else:
            raise ValueError(f"no evaluator for identity {name!r}")
    return columns, summaries, failures


def _invariant_failures(traj: Trajectory, config: SimConfig) -> list:
    failures = []
    mass = max(abs(s.eta.mean()) for s in traj.states)
    if mass > 1e-12:
        failures.append(f"mass drift |mean eta| = {mass:.3e} > 1e-12")
    recs = [r for r in traj.records if r is not None]
    if recs:
        gmin = min(r.gamma_min for r in recs)
        if gmin < -1e-8:
            failures.append(f"gamma_min = {gmin:.3e} < -1e-8")
        ekmin = min(r.E_k for r in recs)
        if ekmin < -1e-10:
            failures.append(f"kinetic energy {ekmin:.3e} < -1e-10")
    return failures


def run(config: SimConfig, out_dir=None, name: str = "run") -> dict:
    """Simulate, diagnose, and (optionally) serialize one scenario."""
    state = build_initial_state(config)
    traj = simulate(state, config.dt, config.t_end, config.output_stride,
                    n_z=config.n_z, filter_strength=config.filter_strength,
                    dealias=config.dealias, c_cfl=config.c_cfl,
                    config_hash=config.config_hash())
    need_pressure = "longuet_higgins" in config.identity_set
    ensure_records(traj, range(len(traj)), n_z=config.n_z,
                   with_pressure=need_pressure, dealias=config.dealias)
    columns, summaries, failures = _identity_table(traj, config)
    failures = _invariant_failures(traj, config) + failures

    recs = traj.records
    e0 = recs[0].E_total
    drift = np.array([r.E_total - e0 for r in recs])
    energy_drift = float(np.max(np.abs(drift)) / max(abs(e0), 1e-300))
    manifest = {
        "schema_version": 1,
        "code_version": __version__,
        "name": name,
        "config": config.to_dict(),
        "config_hash": config.config_hash(),
        "n_outputs": len(traj),
        "identities": summaries,
        "invariants": {
            "mass_drift": float(max(abs(s.eta.mean()) for s in traj.states)),
            "energy_drift_rel": energy_drift,
            "gamma_min": float(min(r.gamma_min for r in recs)),
        },
        "failures": failures,
    }
    if out_dir is not None:
        atomic_write_text(os.path.join(out_dir, f"{name}.csv"),
                          _timeseries_csv(traj, columns))
        atomic_write_text(os.path.join(out_dir, f"{name}.json"),
                          json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    manifest["trajectory"] = traj
    return manifest


def _timeseries_csv(traj: Trajectory, columns: dict) -> str:
    ids = sorted(columns)
    header = RECORD_COLUMNS + [f"res_{name}" for name in ids]
    lines = [",".join(header)]
    for i, rec in enumerate(traj.records):
        row = [rec.t, rec.E_k, rec.E_p, rec.E_total, rec.E_k_mod, rec.B_bot,
               rec.I_virial, rec.mean_psi, rec.gamma_min]
        row += [columns[name][i] for name in ids]
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def convergence_study(config: SimConfig, levels: int, out_dir=None,
                      name: str = "converge") -> dict:
    """Rerun with (dt, 1/n_x, 1/n_z) halved per level and fit observed orders.

    The embedded table reports, per identity, the scale-normalized residual at
    each level and the least-squares order in the output stride; energy and
    mass drift get the same treatment.  The declared tolerance for later runs
    is ten times the finest-level normalized residual."""
    if levels < 3:
        raise ValueError("a convergence study needs at least 3 levels")
    results = []
    for lev in range(levels):
        results.append(run(config.scaled(lev), out_dir=None))
    strides = [config.output_stride / 2 ** lev for lev in range(levels)]
    table = {}
    for ident in config.identity_set:
        per_level = []
        for res in results:
            s = res["identities"][ident]
            per_level.append(s.get("normalized_max", s.get("lhs", float("nan"))))
        table[ident] = {
            "normalized_residuals": per_level,
            "fitted_order": fit_order(strides, per_level),
            "declared_tolerance": 10.0 * per_level[-1] if np.isfinite(per_level[-1])
            else float("nan"),
        }
    for key in ("energy_drift_rel", "mass_drift"):
        per_level = [res["invariants"][key] for res in results]
        table[key] = {"normalized_residuals": per_level,
                      "fitted_order": fit_order(strides, per_level)}
    manifest = {
        "schema_version": 1, "code_version": __version__, "name": name,
        "config": config.to_dict(), "levels": levels, "strides": strides,
        "table": table,
        "failures": sum((res["failures"] for res in results), []),
    }
    if out_dir is not None:
        atomic_write_text(os.path.join(out_dir, f"{name}.json"),
                          json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    manifest["runs"] = results
    return manifest


def report_standing_wave(eps_list, coeff_values=(0.0,), n_t: int = 256,
                         n_x_quad: int = 96, out_dir=None,
                         name: str = "standing_wave") -> dict:
    """Tabulate the two period integrals and the equipartition residual.

    Rows cover every (eps, coefficient) combination, the fitted log-log slope
    of the residual against eps (over positive eps at coefficient 0), and the
    eps -> 0 intercept against pi^2/2."""
    eps_list = sorted(float(e) for e in eps_list)
    rows = []
    for c in coeff_values:
        for eps in eps_list:
            exp = StandingWaveExpansion(epsilon=eps, A13=c, A33=c, b13=c, b33=c)
            em = modified_kinetic_period_integral(exp, n_t, n_x_quad)
            ep = potential_period_integral(exp, n_t, n_x_quad)
            rows.append({"eps": eps, "coeff": c, "kinetic": em, "potential": ep,
                         "difference": abs(em - ep)})
    base = [r for r in rows if r["coeff"] == 0.0 and r["eps"] > 0]
    slope = fit_order([r["eps"] for r in base], [r["difference"] for r in base])
    target = np.pi ** 2 / 2
    manifest = {
        "schema_version": 1, "code_version": __version__, "name": name,
        "rows": rows,
        "fitted_eps_slope": slope,
        "closed_form_leading": target,
        "closed_form_eps2_coeff": 3 * np.pi ** 2 / 16,
        "intercept_errors": {repr(r["eps"]): abs(r["kinetic"] - target)
                             for r in rows if r["eps"] == 0.0},
        "failures": [],
    }
    if out_dir is not None:
        lines = ["eps,coeff,kinetic,potential,difference"]
        lines += [",".join(repr(float(r[k])) for k in
                           ("eps", "coeff", "kinetic", "potential", "difference"))
                  for r in rows]
        atomic_write_text(os.path.join(out_dir, f"{name}.csv"), "\n".join(lines) + "\n")
        atomic_write_text(os.path.join(out_dir, f"{name}.json"),
                          json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest


def run_inequalities(seed: int = 0, count: int = 100, n_x: int = 128, n_z: int = 64,
                     out_dir=None, name: str = "inequalities") -> dict:
    """The default seeded ensembles for every inequality, reported together."""
    grid = PeriodicGrid(n_x)
    spec = SampleSpec(count=count, seed=seed, slope_cap=0.5, max_mode=8)
    reports = [
        check_trace_lower_bound(spec, Depth.finite(1.0), grid, n_z=n_z),
        check_dtn_quadratic_bounds(spec, Depth.finite(1.0), grid, n_z=n_z),
        check_dtn_quadratic_bounds(spec, Depth.infinite_depth(), grid, n_z=n_z),
        check_duality_estimate(spec, Depth.finite(1.5), grid, n_z=n_z),
    ]
    x = grid.nodes
    eta = SurfaceField(grid, 0.2 * np.cos(x))
    psi = SurfaceField(grid, np.cos(x))
    reports.append(check_bottom_decay(psi, eta, [2.0, 4.0, 6.0, 8.0], n_z=n_z))
    failures = []
    for rep in reports:
        if not rep.ok():
            failures.append(f"{rep.inequality_id}: {len(rep.violations)} violation(s), "
                            f"worst seed {rep.worst_sample_seed}")
    manifest = {
        "schema_version": 1, "code_version": __version__, "name": name,
        "seed": seed, "count": count, "n_x": n_x, "n_z": n_z,
        "reports": [rep.as_dict() for rep in reports],
        "failures": failures,
    }
    if out_dir is not None:
        lines = ["inequality_id,min_margin,measured_constant,count,violations,worst_sample_seed"]
        for rep in reports:
            lines.append(",".join([rep.inequality_id, repr(float(rep.min_margin)),
                                   repr(float(rep.measured_constant)), str(rep.count),
                                   str(len(rep.violations)), str(rep.worst_sample_seed)]))
        atomic_write_text(os.path.join(out_dir, f"{name}.csv"), "\n".join(lines) + "\n")
        atomic_write_text(os.path.join(out_dir, f"{name}.json"),
                          json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest


def rt_preset_configs() -> dict:
    """The two Rayleigh-Taylor scenarios exercised by the rt-bounds subcommand."""
    zero_g = SimConfig.from_dict({
        "n_x": 48, "n_z": 48, "depth": {"kind": "infinite", "h_eff": 10.0},
        "g": 0.0, "dt": 0.0125, "t_end": 0.5, "output_stride": 0.0125,
        "initial_condition": {"kind": "custom", "psi_cos": {"1": 1.0}},
        "identity_set": ["rt_monotone"], "seed": 0})
    neg_g = SimConfig.from_dict({
        "n_x": 64, "n_z": 32, "depth": {"kind": "finite", "h": 1.0},
        "g": -1.0, "dt": 0.00625, "t_end": 0.5, "output_stride": 0.0125,
        "initial_condition": {"kind": "custom", "eta_cos": {"1": 0.05}},
        "filter": {"kind": "exponential", "strength": 36.0},
        "identity_set": ["rt_monotone"], "seed": 0})
    return {"rt_zero_g": zero_g, "rt_negative_g": neg_g}


def run_rt_presets(out_dir=None) -> dict:
    results = {}
    failures = []
    for name, cfg in rt_preset_configs().items():
        res = run(cfg, out_dir=out_dir, name=name)
        res.pop("trajectory", None)
        results[name] = res
        failures += res["failures"]
    manifest = {"schema_version": 1, "code_version": __version__,
                "runs": results, "failures": failures}
    if out_dir is not None:
        atomic_write_text(os.path.join(out_dir, "rt_bounds.json"),
                          json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest


def run_many(configs, workers: int = 1):
    """Evaluate independent configs, optionally on a thread pool (stable order)."""
    if workers <= 1:
        return [run(c) for c in configs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, configs))
