"""Randomized empirical verification of the trace and quadratic-form bounds.

Random surfaces are truncated Fourier series with independent uniform phases
and an |xi|^-2 amplitude profile, rescaled so the slope sup|eta_x| hits the
requested cap (and clipped further if the geometry bound inf eta > -0.45 h
would fail; the declared caps are re-verified post hoc on every sample).  All
sampling is reproducible from the SampleSpec seed, and every report carries
the worst sample's seed so a violation can be replayed bit-exactly.

The checked inequalities (all with measured, never asserted, constants):

  * trace lower bound     int psi G(eta) psi >= C tanh(h)/(1+sup|eta_x|) ||psi||_{H^{1/2}}^2
  * Cauchy-Schwarz        |int eta G(eta) psi| <= (int eta G eta)^{1/2} (int psi G psi)^{1/2}
  * quadratic-form size   0 <= int eta G(eta) eta <= h |T|  (finite)  or  |inf eta| |T| (infinite)
  * duality estimate      |int sigma f| <= C ||sigma||_{H^{-1/2}} (1+sup|sigma_x|)^{1/2}
                          (int f G(sigma) f)^{1/2}   for h >= 1
  * bottom-trace decay    int |d_x phi_h(x,-h)|^2 dx <= C (1+sup|eta_x|^3) e^{-h/4}
                          ||psi||_{H^{1/2}}^2  with fitted log-slope <= -1/4 for h >= 2
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .spectral import (PeriodicGrid, SurfaceField, derivative, homogeneous_norm,
                       inner, sobolev_norm)
from .dtn import (DEFAULT_NZ, Depth, FlattenedDomain, bottom_gradx, dtn_from_extension,
                  harmonic_extension)

__all__ = [
    "SampleSpec",
    "BoundReport",
    "random_surface",
    "check_trace_lower_bound",
    "check_dtn_quadratic_bounds",
    "check_duality_estimate",
    "check_bottom_decay",
]

TWO_PI = 2.0 * np.pi
DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class SampleSpec:
    """Ensemble description: size, seed, and the sampler caps."""

    count: int
    seed: int
    amplitude: float = 1.0
    max_mode: int = 8
    slope_cap: float = 0.5
    min_mode: int = 1

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if self.amplitude <= 0:
            raise ValueError("amplitude must be positive")
        if not 1 <= self.min_mode <= self.max_mode:
            raise ValueError("need 1 <= min_mode <= max_mode")


@dataclass
class BoundReport:
    """Outcome of one inequality over an ensemble.

    min_margin is the most-violating sample's slack (negative = violation);
    margins below -tol are collected in `violations`, never dropped."""

    inequality_id: str
    min_margin: float
    worst_sample_seed: int
    measured_constant: float
    count: int
    tol: float = DEFAULT_TOL
    violations: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    def ok(self) -> bool:
        return not self.violations

    def as_dict(self):
        return {"inequality_id": self.inequality_id, "min_margin": self.min_margin,
                "worst_sample_seed": self.worst_sample_seed,
                "measured_constant": self.measured_constant, "count": self.count,
                "tol": self.tol, "violations": list(self.violations)}


def _sample_seed(spec: SampleSpec, i: int) -> int:
    return int(np.random.SeedSequence([spec.seed, i]).generate_state(1)[0])


def random_surface(grid: PeriodicGrid, seed: int, slope_cap: float,
                   max_mode: int, min_mode: int = 1,
                   depth: Optional[Depth] = None) -> SurfaceField:
    """One mean-free random surface: |xi|^-2 profile, uniform phases, slope rescaled.

    If a depth is given the amplitude is additionally clipped so that
    inf eta > -0.45 h, keeping the flattening jacobian comfortably above 1/2.
    """
    if max_mode >= grid.k_max:
        raise ValueError(f"max_mode {max_mode} is not resolved on n_x={grid.n_x}")
    rng = np.random.default_rng(seed)
    v = np.zeros(grid.n_x)
    for k in range(min_mode, max_mode + 1):
        phase = rng.uniform(0.0, TWO_PI)
        v += k ** -2.0 * np.cos(k * grid.nodes + phase)
    f = SurfaceField(grid, v - np.mean(v))
    slope = np.max(np.abs(derivative(f).values))
    scale = slope_cap / slope
    if depth is not None:
        amp = f.max_abs()
        geometry_scale = 0.45 * depth.h / amp
        scale = min(scale, geometry_scale)
    return SurfaceField(grid, scale * f.values)


def _random_trace(grid: PeriodicGrid, seed: int, amplitude: float,
                  max_mode: int, min_mode: int = 1) -> SurfaceField:
    """Mean-free random Dirichlet data with the same profile, unit-ish amplitude."""
    f = random_surface(grid, seed, slope_cap=1.0, max_mode=max_mode, min_mode=min_mode)
    return SurfaceField(grid, amplitude * f.values / max(f.max_abs(), 1e-300))


def check_trace_lower_bound(spec: SampleSpec, depth: Depth, grid: PeriodicGrid,
                            n_z: int = DEFAULT_NZ, tol: float = DEFAULT_TOL) -> BoundReport:
    """Coercivity of the DtN form against the homogeneous H^{1/2} norm.

    For each sample reports r = int psi G(eta) psi / [tanh(h)/(1+sup|eta_x|)
    * ||psi||^2]; all ratios must be positive and the smallest is the measured
    constant (about 2 pi for a flat surface under this normalisation)."""
    if depth.infinite:
        raise ValueError("the trace lower bound is stated for finite depth")
    ratios = np.empty(spec.count)
    seeds = np.empty(spec.count, dtype=np.int64)
    report = BoundReport("trace_lower_bound", np.inf, 0, np.inf, spec.count, tol)
    for i in range(spec.count):
        seed = _sample_seed(spec, i)
        seeds[i] = seed
        eta = random_surface(grid, seed, spec.slope_cap, spec.max_mode,
                             spec.min_mode, depth=depth)
        psi = _random_trace(grid, seed + 1, spec.amplitude, spec.max_mode)
        dom = FlattenedDomain(eta, depth, n_z)
        g_psi = dtn_from_extension(harmonic_extension(eta, psi, depth, n_z=n_z, domain=dom))
        slope = np.max(np.abs(derivative(eta).values))
        weight = np.tanh(depth.h) / (1.0 + slope) * homogeneous_norm(psi, 0.5) ** 2
        ratios[i] = inner(psi, g_psi) / weight
        if ratios[i] <= tol:
            report.violations.append({"seed": int(seed), "ratio": float(ratios[i])})
    worst = int(np.argmin(ratios))
    report.min_margin = float(ratios[worst])
    report.worst_sample_seed = int(seeds[worst])
    report.measured_constant = float(ratios[worst])
    return report


def check_dtn_quadratic_bounds(spec: SampleSpec, depth: Depth, grid: PeriodicGrid,
                               n_z: int = DEFAULT_NZ, tol: float = DEFAULT_TOL) -> BoundReport:
    """Cauchy-Schwarz for the DtN form plus the size bound on int eta G(eta) eta."""
    margins = np.empty(spec.count)
    seeds = np.empty(spec.count, dtype=np.int64)
    report = BoundReport("dtn_quadratic_bounds", np.inf, 0, 0.0, spec.count, tol)
    for i in range(spec.count):
        seed = _sample_seed(spec, i)
        seeds[i] = seed
        eta = random_surface(grid, seed, spec.slope_cap, spec.max_mode,
                             spec.min_mode, depth=depth)
        psi = _random_trace(grid, seed + 1, spec.amplitude, spec.max_mode)
        dom = FlattenedDomain(eta, depth, n_z)
        g_psi = dtn_from_extension(harmonic_extension(eta, psi, depth, n_z=n_z, domain=dom))
        g_eta = dtn_from_extension(harmonic_extension(eta, eta, depth, n_z=n_z, domain=dom))
        q_ee = inner(eta, g_eta)
        q_pp = inner(psi, g_psi)
        q_ep = inner(eta, g_psi)
        cs_margin = np.sqrt(max(q_ee, 0.0)) * np.sqrt(max(q_pp, 0.0)) - abs(q_ep)
        size_cap = depth.h * TWO_PI if not depth.infinite \
            else abs(np.min(eta.values)) * TWO_PI
        size_margin = min(q_ee + tol, size_cap - q_ee)
        margins[i] = min(cs_margin, size_margin)
        if margins[i] < -tol:
            report.violations.append({"seed": int(seed), "margin": float(margins[i])})
    worst = int(np.argmin(margins))
    report.min_margin = float(margins[worst])
    report.worst_sample_seed = int(seeds[worst])
    return report


def check_duality_estimate(spec: SampleSpec, depth: Depth, grid: PeriodicGrid,
                           n_z: int = DEFAULT_NZ, tol: float = DEFAULT_TOL) -> BoundReport:
    """Duality pairing against the DtN form (depth >= 1):

        |int sigma f| <= C ||sigma||_{H^{-1/2}} (1+sup|sigma_x|)^{1/2}
                           (int f G(sigma) f)^{1/2}

    reporting the smallest admissible C over the ensemble."""
    if not depth.infinite and depth.h < 1.0:
        raise ValueError("the duality estimate is stated for h >= 1")
    ratios = np.empty(spec.count)
    seeds = np.empty(spec.count, dtype=np.int64)
    report = BoundReport("duality_estimate", np.inf, 0, 0.0, spec.count, tol)
    for i in range(spec.count):
        seed = _sample_seed(spec, i)
        seeds[i] = seed
        sigma = random_surface(grid, seed, spec.slope_cap, spec.max_mode,
                               spec.min_mode, depth=depth)
        f = _random_trace(grid, seed + 1, spec.amplitude, spec.max_mode)
        dom = FlattenedDomain(sigma, depth, n_z)
        g_f = dtn_from_extension(harmonic_extension(sigma, f, depth, n_z=n_z, domain=dom))
        slope = np.max(np.abs(derivative(sigma).values))
        denom = homogeneous_norm(sigma, -0.5) * np.sqrt(1.0 + slope) \
            * np.sqrt(max(inner(f, g_f), 0.0))
        ratios[i] = abs(inner(sigma, f)) / max(denom, 1e-300)
        if denom <= 0:
            report.violations.append({"seed": int(seed), "denominator": float(denom)})
    worst = int(np.argmax(ratios))
    report.min_margin = float(np.min(ratios))
    report.worst_sample_seed = int(seeds[worst])
    report.measured_constant = float(np.max(ratios))
    return report


def check_bottom_decay(psi: SurfaceField, eta: SurfaceField, h_list,
                       n_z: int = DEFAULT_NZ, tol: float = DEFAULT_TOL) -> BoundReport:
    """Bottom-trace decay in the depth: D(h) = int |d_x phi_h(x,-h)|^2 dx.

    Requires increasing depths h >= 2 and inf eta > -h/3 throughout; asserts the
    fitted slope of log D(h) is <= -1/4 and reports the measured constant in
    D(h) <= C (1+sup|eta_x|^3) e^{-h/4} ||psi||_{H^{1/2}}^2."""
    h_arr = np.asarray(list(h_list), dtype=float)
    if h_arr.size < 2 or np.any(np.diff(h_arr) <= 0):
        raise ValueError("need at least two increasing depths")
    if np.any(h_arr < 2.0):
        raise ValueError("bottom decay is stated for h >= 2")
    if np.min(eta.values) <= -np.min(h_arr) / 3.0:
        raise ValueError("need inf eta > -h/3 for every listed depth")
    d_vals = np.empty(h_arr.size)
    for i, h in enumerate(h_arr):
        depth = Depth.finite(h)
        phi = harmonic_extension(eta, psi, depth, n_z=n_z)
        bot = bottom_gradx(phi)
        d_vals[i] = inner(bot, bot)
    slope = float(np.polyfit(h_arr, np.log(np.maximum(d_vals, 1e-300)), 1)[0])
    cap = (1.0 + np.max(np.abs(derivative(eta).values)) ** 3) \
        * np.exp(-h_arr / 4.0) * sobolev_norm(psi, 0.5) ** 2
    measured_c = float(np.max(d_vals / cap))
    report = BoundReport("bottom_decay", min(0.0, -0.25 - slope) if slope > -0.25
                         else -0.25 - slope, 0, measured_c, h_arr.size, tol)
    report.min_margin = float(-0.25 - slope)   # positive iff slope <= -1/4
    report.extras = {"h": h_arr.tolist(), "D": d_vals.tolist(), "slope": slope}
    if slope > -0.25 + tol:
        report.violations.append({"slope": slope})
    return report
