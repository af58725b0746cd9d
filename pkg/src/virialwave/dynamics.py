"""Time integration of the Craig-Sulem gravity-wave system on the torus.

State is the pair (eta, psi) of surface elevation and surface potential trace,
evolving by

    d_t eta = G(eta) psi
    d_t psi = -g eta - N(eta, psi),
    N = |V|^2/2 - B^2/2 + B (V . eta_x),

with B, V the vertical/horizontal surface velocities.  N is also evaluated in
the equivalent form |psi_x|^2/2 - (1 + eta_x^2) B^2 / 2; the two expressions
must agree pointwise to 1e-10 and the discrepancy is asserted on every
right-hand-side evaluation.

The stepper is classical RK4.  Identity residuals over short horizons are the
verification target, so RK4's O(dt^4) local accuracy beats a symplectic
low-order scheme here; conservation over the runs used in practice stays below
1e-6 relative at the benchmark step sizes.  Products in N are dealiased with
the 2/3 rule (on by default).  For g < 0 the linearised problem grows like
exp(sqrt(|g| k) t) and the Cauchy problem is not well posed in Sobolev spaces;
drivers must enable the analytic-band exponential filter and keep horizons
short.  No claim is made that filtered g < 0 trajectories approximate true
solutions; the identity checks apply to whatever smooth trajectory the
filtered scheme produces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .spectral import (PeriodicGrid, SurfaceField, apply_symbol_values, derivative,
                       exponential_filter_symbol, lowpass_two_thirds)
from .dtn import (DEFAULT_NZ, Depth, FlattenedDomain, FlattenedField, GeometryError,
                  TraceData, dtn_from_extension, harmonic_extension, surface_traces)

__all__ = [
    "SurfaceState",
    "Trajectory",
    "nonlinearity",
    "rhs",
    "step_rk4",
    "simulate",
    "time_derivative_extension",
    "pressure_bottom",
    "linear_frequency",
    "cfl_limit",
]

DEFAULT_CFL = 0.5


@dataclass(frozen=True)
class SurfaceState:
    """Snapshot (eta, psi) at time t with gravity g (any sign) and depth."""

    eta: SurfaceField
    psi: SurfaceField
    t: float
    g: float
    depth: Depth

    def __post_init__(self):
        if self.eta.grid != self.psi.grid:
            raise ValueError("eta and psi must share a grid")
        mean_tol = 1e-10 * max(self.eta.max_abs(), 1.0)
        if abs(self.eta.mean()) > mean_tol:
            raise ValueError(f"eta must be mean-free, |mean| = {abs(self.eta.mean()):.3e}")
        if np.min(self.eta.values) <= -0.5 * self.depth.h:
            raise GeometryError("inf eta <= -h/2")

    @property
    def grid(self) -> PeriodicGrid:
        return self.eta.grid


@dataclass
class Trajectory:
    """Uniformly strided output of one run, with lazy per-state diagnostics slots."""

    states: list
    dt_out: float
    config_hash: str = ""
    records: list = field(default_factory=list)
    trace_cache: dict = field(default_factory=dict)
    extension_cache: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.records:
            self.records = [None] * len(self.states)
        ts = self.times
        if len(ts) >= 2:
            strides = np.diff(ts)
            if np.any(strides <= 0) or np.max(np.abs(strides - self.dt_out)) > 1e-9 * max(self.dt_out, 1.0):
                raise ValueError("trajectory times must increase by a uniform stride")

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.states])

    def __len__(self):
        return len(self.states)


def nonlinearity(eta: SurfaceField, psi: SurfaceField, traces: TraceData) -> SurfaceField:
    """N = |V|^2/2 - B^2/2 + B V eta_x, cross-checked against the closed form
    |psi_x|^2/2 - (1 + eta_x^2) B^2/2 (agreement to 1e-10 is asserted)."""
    eta_x = derivative(eta).values
    psi_x = derivative(psi).values
    B, V = traces.B.values, traces.V.values
    n1 = 0.5 * V ** 2 - 0.5 * B ** 2 + B * V * eta_x
    n2 = 0.5 * psi_x ** 2 - 0.5 * (1.0 + eta_x ** 2) * B ** 2
    scale = max(np.max(np.abs(n1)), 1.0)
    gap = np.max(np.abs(n1 - n2))
    if gap > 1e-10 * scale:
        raise AssertionError(f"the two closed forms of N disagree by {gap:.3e}")
    return SurfaceField(eta.grid, n1)


def _rhs_full(state: SurfaceState, n_z: int, dealias: bool,
              domain: Optional[FlattenedDomain] = None,
              x0: Optional[np.ndarray] = None):
    """RHS plus the intermediate extension/traces, for reuse by diagnostics."""
    if domain is None:
        domain = FlattenedDomain(state.eta, state.depth, n_z)
    phi = harmonic_extension(state.eta, state.psi, state.depth, n_z=n_z,
                             domain=domain, x0=x0)
    g_psi = dtn_from_extension(phi)
    traces = surface_traces(state.eta, state.psi, g_psi)
    n_field = nonlinearity(state.eta, state.psi, traces)
    if dealias:
        n_field = lowpass_two_thirds(n_field)
    deta = g_psi
    dpsi = SurfaceField(state.grid, -state.g * state.eta.values - n_field.values)
    return deta, dpsi, phi, traces, n_field


def rhs(state: SurfaceState, n_z: int = DEFAULT_NZ, dealias: bool = True):
    """(d_t eta, d_t psi) for the Craig-Sulem system; d_t eta is mean-free."""
    deta, dpsi, _, _, _ = _rhs_full(state, n_z, dealias)
    return deta, dpsi


def linear_frequency(g: float, k: int, depth: Depth) -> float:
    """Dispersion relation of the linearised system: omega = sqrt(g k tanh(hk))."""
    if g <= 0:
        raise ValueError("linear frequency needs g > 0")
    return float(np.sqrt(g * depth.flat_symbol(k)))


def cfl_limit(grid: PeriodicGrid, g: float, c_cfl: float = DEFAULT_CFL) -> float:
    """Step-size guard dt <= c_cfl / sqrt(max(|g|, 1) k_max)."""
    return c_cfl / np.sqrt(max(abs(g), 1.0) * grid.k_max)


def step_rk4(state: SurfaceState, dt: float, filter_strength: Optional[float] = None,
             n_z: int = DEFAULT_NZ, dealias: bool = True,
             c_cfl: float = DEFAULT_CFL, _warm=None) -> SurfaceState:
    """One classical RK4 step.  eta is re-projected to mean zero afterwards and
    an optional exponential spectral filter is applied to both fields.

    The CFL guard dt <= c_cfl / sqrt(max(|g|,1) k_max) rejects oversized steps;
    a geometry violation at any stage aborts with a diagnostic.
    """
    if dt == 0.0:
        raise ValueError("dt must be nonzero")
    if abs(dt) > cfl_limit(state.grid, state.g, c_cfl) * (1.0 + 1e-12):
        raise ValueError(
            f"dt = {abs(dt):.4g} exceeds the CFL guard "
            f"{cfl_limit(state.grid, state.g, c_cfl):.4g} (c_cfl = {c_cfl})")

    grid = state.grid

    def deriv(eta_v, psi_v, stage_t):
        try:
            st = SurfaceState(eta=SurfaceField(grid, eta_v - np.mean(eta_v)),
                              psi=SurfaceField(grid, psi_v),
                              t=stage_t, g=state.g, depth=state.depth)
        except GeometryError as exc:
            raise GeometryError(
                f"surface left the admissible region mid-step at t = {stage_t:.6g}: {exc}"
            ) from exc
        x0 = _warm[0] if _warm is not None else None
        deta, dpsi, phi, _, _ = _rhs_full(st, n_z, dealias, x0=x0)
        if _warm is not None:
            _warm[0] = phi.values
        return deta.values, dpsi.values

    e0, p0 = state.eta.values, state.psi.values
    k1e, k1p = deriv(e0, p0, state.t)
    k2e, k2p = deriv(e0 + 0.5 * dt * k1e, p0 + 0.5 * dt * k1p, state.t + 0.5 * dt)
    k3e, k3p = deriv(e0 + 0.5 * dt * k2e, p0 + 0.5 * dt * k2p, state.t + 0.5 * dt)
    k4e, k4p = deriv(e0 + dt * k3e, p0 + dt * k3p, state.t + dt)

    eta_new = e0 + (dt / 6.0) * (k1e + 2 * k2e + 2 * k3e + k4e)
    psi_new = p0 + (dt / 6.0) * (k1p + 2 * k2p + 2 * k3p + k4p)
    eta_new -= np.mean(eta_new)

    eta_f = SurfaceField(grid, eta_new)
    psi_f = SurfaceField(grid, psi_new)
    if filter_strength is not None:
        m = exponential_filter_symbol(grid, filter_strength)
        eta_f = apply_symbol_values(eta_f, m)
        psi_f = apply_symbol_values(psi_f, m)
        eta_f = SurfaceField(grid, eta_f.values - np.mean(eta_f.values))
    return SurfaceState(eta=eta_f, psi=psi_f, t=state.t + dt, g=state.g,
                        depth=state.depth)


def simulate(initial: SurfaceState, dt: float, t_end: float, output_stride: float,
             n_z: int = DEFAULT_NZ, filter_strength: Optional[float] = None,
             dealias: bool = True, c_cfl: float = DEFAULT_CFL,
             config_hash: str = "") -> Trajectory:
    """March from `initial` to t_end, recording every output_stride.

    output_stride must be an integer multiple of dt.  Runs with g < 0 require
    the exponential filter and t_end <= 1 (ill-posed regime; see module notes).
    """
    ratio = output_stride / dt
    if abs(ratio - round(ratio)) > 1e-9:
        raise ValueError("output_stride must be an integer multiple of dt")
    per_out = int(round(ratio))
    if per_out < 1:
        raise ValueError("output_stride must be >= dt")
    if initial.g < 0:
        if filter_strength is None:
            raise ValueError("g < 0 runs require the exponential filter")
        if t_end - initial.t > 1.0 + 1e-12:
            raise ValueError("g < 0 runs are limited to t_end - t_0 <= 1")
    n_steps = int(round((t_end - initial.t) / dt))
    if n_steps < 1:
        raise ValueError("t_end must allow at least one step")
    if abs(initial.t + n_steps * dt - t_end) > 1e-9 * max(abs(t_end), 1.0):
        raise ValueError("t_end must be an integer number of steps away")

    warm = [None]
    states = [initial]
    st = initial
    for i in range(n_steps):
        st = step_rk4(st, dt, filter_strength=filter_strength, n_z=n_z,
                      dealias=dealias, c_cfl=c_cfl, _warm=warm)
        if (i + 1) % per_out == 0:
            states.append(st)
    return Trajectory(states=states, dt_out=output_stride, config_hash=config_hash)


def time_derivative_extension(state: SurfaceState, state_dot, n_z: int = DEFAULT_NZ,
                              domain: Optional[FlattenedDomain] = None) -> FlattenedField:
    """Harmonic extension of d_t phi.

    The surface trace of d_t phi is d_t psi - B d_t eta (chain rule), and d_t phi
    is itself harmonic with the same Neumann bottom, so extending that trace
    reproduces the full field.
    """
    deta, dpsi = state_dot
    if domain is None:
        domain = FlattenedDomain(state.eta, state.depth, n_z)
    phi = harmonic_extension(state.eta, state.psi, state.depth, n_z=n_z, domain=domain)
    g_psi = dtn_from_extension(phi)
    traces = surface_traces(state.eta, state.psi, g_psi)
    datum = SurfaceField(state.grid, dpsi.values - traces.B.values * deta.values)
    return harmonic_extension(state.eta, datum, state.depth, n_z=n_z, domain=domain)


def pressure_bottom(state: SurfaceState, dphi_dt: FlattenedField,
                    phi: FlattenedField) -> SurfaceField:
    """Pressure trace at the flat bottom from the Bernoulli relation,

        P(x, -h) = -d_t phi(x, -h) - |d_x phi(x, -h)|^2 / 2 + g h,

    using that the vertical velocity vanishes there.  Finite depth only."""
    if state.depth.infinite:
        raise ValueError("bottom pressure is not defined for infinite depth")
    dom = phi.domain
    l2_bot = phi.lambda2()[:, -1]
    p = -dphi_dt.values[:, -1] - 0.5 * l2_bot ** 2 + state.g * state.depth.h
    return SurfaceField(state.grid, p)
