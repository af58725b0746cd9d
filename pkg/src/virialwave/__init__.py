"""Pseudospectral gravity water waves on the torus, with a verification harness
for the exact virial, equipartition, Rayleigh-Taylor and trace-inequality
structure of the Craig-Sulem formulation."""

__version__ = "0.1.0"

from .spectral import (PeriodicGrid, SurfaceField, apply_multiplier, derivative,
                       homogeneous_norm, inner, integrate, lowpass_two_thirds,
                       sobolev_norm)
from .dtn import (Depth, FlattenedDomain, FlattenedField, GeometryError, SolverError,
                  TraceData, bottom_gradx, dtn_apply, dtn_flat, dtn_shape_derivative,
                  harmonic_extension, surface_traces, volume_energy)
from .dynamics import (SurfaceState, Trajectory, linear_frequency, nonlinearity,
                       pressure_bottom, rhs, simulate, step_rk4,
                       time_derivative_extension)
from .diagnostics import (DiagnosticsRecord, IDENTITIES, ResidualReport,
                          check_energy_flux, check_equipartition_bound,
                          check_longuet_higgins, check_mean_psi_drift, check_rellich,
                          check_rt_bounds, check_eta_sq_accel, check_momentum_rate, check_virial_rate,
                          record)
from .standing import (StandingWaveExpansion, equipartition_residual, eval_surface,
                       modified_kinetic_period_integral, potential_period_integral)
from .inequalities import (BoundReport, SampleSpec, check_bottom_decay,
                           check_dtn_quadratic_bounds, check_duality_estimate,
                           check_trace_lower_bound, random_surface)
from .config import SimConfig, build_initial_state
from .runner import convergence_study, report_standing_wave, run, run_inequalities

__all__ = [name for name in dir() if not name.startswith("_")]
