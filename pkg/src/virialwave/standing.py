"""Perturbative standing gravity wave in infinite depth and its period energies.

The expansion is written in the scaled variables in which the physical surface
and potential are eps * eta and eps * phi, time is the phase variable t in
[0, 2pi) (one period), x runs over [0, pi] by the even symmetry of standing
waves, and the frequency is omega(eps) = 1 - eps^2/8.  Orders:

    phi0 = -sin t cos x e^y          eta0 = cos t cos x
    phi1 = alpha(t)  (gradient-free) eta1 = (1/2) cos^2 t cos 2x
    phi2 = A13 sin t cos 3x e^{3y} + (5/32) sin 3t cos x e^y
           + A33 sin 3t cos 3x e^{3y}
    eta2 = (3/32) cos t cos x + b13 cos t cos 3x - (1/16) cos 3t cos x
           + b33 cos 3t cos 3x

The four coefficients A13, A33, b13, b33 are free at this order; every
quantity computed here is insensitive to them through O(eps^2) because the
mode-3 factors integrate against orthogonal modes.  They default to zero.

Vertical integrals are exact (int_{-inf}^{eps eta} e^{ny} dy = e^{n eps eta}/n);
only the (x, t) quadratures are numerical: Gauss-Legendre in x on [0, pi] and
the (spectrally exact) uniform trapezoid in t over one period.  The period
integral of the weighted kinetic density (3/2) phi_y^2 + (1/2) phi_x^2 and
twice the period integral of the potential energy both equal

    pi^2/2 + (3 pi^2/16) eps^2 + O(eps^3),

and their difference is the equipartition residual, O(eps^3) by construction.
Torus quantities are twice the [0, pi] values; physical energies carry the
factor eps^2 omitted by the scaling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import PeriodicGrid, SurfaceField

__all__ = [
    "StandingWaveExpansion",
    "eval_surface",
    "modified_kinetic_period_integral",
    "potential_period_integral",
    "equipartition_residual",
    "kinetic_time_integrand",
    "potential_time_integrand",
    "sub_integrals",
]

MAX_EPS = 0.3


@dataclass(frozen=True)
class StandingWaveExpansion:
    """Amplitude eps plus the free second-order coefficients."""

    epsilon: float
    A13: float = 0.0
    A33: float = 0.0
    b13: float = 0.0
    b33: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= MAX_EPS:
            raise ValueError(
                f"epsilon must lie in [0, {MAX_EPS}] for the expansion to be "
                f"meaningful, got {self.epsilon}")

    @property
    def omega(self) -> float:
        return 1.0 - self.epsilon ** 2 / 8.0


def _eta_orders(exp: StandingWaveExpansion, t, x):
    """eta0, eta1, eta2 on the (t, x) product grid (t column, x row)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))[:, None]
    x = np.asarray(x, dtype=float)[None, :]
    eta0 = np.cos(t) * np.cos(x)
    eta1 = 0.5 * np.cos(t) ** 2 * np.cos(2 * x)
    eta2 = ((3.0 / 32.0) * np.cos(t) - (1.0 / 16.0) * np.cos(3 * t)) * np.cos(x) \
        + (exp.b13 * np.cos(t) + exp.b33 * np.cos(3 * t)) * np.cos(3 * x)
    return eta0, eta1, eta2


def _eta_total(exp: StandingWaveExpansion, t, x):
    e0, e1, e2 = _eta_orders(exp, t, x)
    return e0 + exp.epsilon * e1 + exp.epsilon ** 2 * e2


def _phi_terms(exp: StandingWaveExpansion):
    """phi = sum over terms of eps^p c(t) cos(m x) e^{m y}: (p, c, m) triples."""
    return [
        (0, lambda t: -np.sin(t), 1),
        (2, lambda t: exp.A13 * np.sin(t), 3),
        (2, lambda t: (5.0 / 32.0) * np.sin(3 * t), 1),
        (2, lambda t: exp.A33 * np.sin(3 * t), 3),
    ]


def _x_quadrature(n_x_quad: int):
    xi, w = np.polynomial.legendre.leggauss(n_x_quad)
    return (xi + 1.0) * (np.pi / 2.0), w * (np.pi / 2.0)


def _pair_sum(exp, t, x, eta, kind: str, powers=None):
    """Vertically integrated sum over term pairs of d phi_i . d phi_j.

    kind "x": products of phi_x = -m c(t) sin(mx) e^{my};
    kind "y": products of phi_y =  m c(t) cos(mx) e^{my}.
    Pairs may be restricted to given (p_i, p_j) epsilon-power combinations.
    """
    terms = _phi_terms(exp)
    t = np.atleast_1d(np.asarray(t, dtype=float))[:, None]
    x = np.asarray(x, dtype=float)[None, :]
    eps = exp.epsilon
    total = np.zeros((t.shape[0], x.shape[1]))
    for i, (pi_, ci, mi) in enumerate(terms):
        for j, (pj, cj, mj) in enumerate(terms):
            if powers is not None and (pi_, pj) not in powers:
                continue
            if kind == "x":
                fx = mi * mj * np.sin(mi * x) * np.sin(mj * x)
            else:
                fx = mi * mj * np.cos(mi * x) * np.cos(mj * x)
            vert = np.exp((mi + mj) * eps * eta) / (mi + mj)
            total += (eps ** (pi_ + pj)) * ci(t) * cj(t) * fx * vert
    return total


def kinetic_time_integrand(exp: StandingWaveExpansion, t, n_x_quad: int = 96):
    """K(t) = int_0^pi int_{-inf}^{eps eta} (3/2 phi_y^2 + 1/2 phi_x^2) dy dx.

    Matches (pi/2) sin^2 t + pi eps^2 (9/32 sin^2 t - 1/8 sin^4 t) to O(eps^3).
    """
    xq, wq = _x_quadrature(n_x_quad)
    eta = _eta_total(exp, t, xq)
    dens = 1.5 * _pair_sum(exp, t, xq, eta, "y") + 0.5 * _pair_sum(exp, t, xq, eta, "x")
    return dens @ wq


def potential_time_integrand(exp: StandingWaveExpansion, t, n_x_quad: int = 96):
    """2 E_p(t) = int_0^pi eta(t, x)^2 dx (scaled units)."""
    xq, wq = _x_quadrature(n_x_quad)
    eta = _eta_total(exp, t, xq)
    return (eta ** 2) @ wq


def _period_average(fn, n_t: int):
    if n_t < 64:
        raise ValueError("need at least 64 time nodes over the period")
    t = 2.0 * np.pi * np.arange(n_t) / n_t
    return float(np.sum(fn(t)) * (2.0 * np.pi / n_t))


def modified_kinetic_period_integral(exp: StandingWaveExpansion, n_t: int = 256,
                                     n_x_quad: int = 96) -> float:
    """Period integral of the weighted kinetic density; pi^2/2 + 3 pi^2/16 eps^2 + O(eps^3)."""
    return _period_average(lambda t: kinetic_time_integrand(exp, t, n_x_quad), n_t)


def potential_period_integral(exp: StandingWaveExpansion, n_t: int = 256,
                              n_x_quad: int = 96) -> float:
    """2 int_0^{2pi} E_p dt; the same closed value as the kinetic period integral."""
    return _period_average(lambda t: potential_time_integrand(exp, t, n_x_quad), n_t)


def equipartition_residual(exp: StandingWaveExpansion, n_t: int = 256,
                           n_x_quad: int = 96) -> float:
    """|kinetic period integral - potential period integral|; scales as eps^3."""
    return abs(modified_kinetic_period_integral(exp, n_t, n_x_quad)
               - potential_period_integral(exp, n_t, n_x_quad))


def sub_integrals(exp: StandingWaveExpansion, t, n_x_quad: int = 96) -> dict:
    """The building-block x-integrals at given phases t.

    phi_x_leading/phi_x_cross: leading and order-eps^2 cross terms of the
    vertically integrated phi_x^2; phi_y_leading/phi_y_cross: same for
    phi_y^2; potential_0/1/2: coefficients of 2 E_p(t) by power of eps.
    Closed forms (to O(eps^3), exact where noted):

        phi_x_leading = (pi/4) sin^2 t
        phi_x_cross   = -eps^2 ((15 pi/64) sin^2 t - (5 pi/16) sin^4 t)
        phi_y_leading = (pi/4) sin^2 t + (pi/2) eps^2 (sin^2 t - sin^4 t)
        phi_y_cross   = phi_x_cross
        potential_0   = (pi/2) cos^2 t                                (exact)
        potential_1   = 0                                             (exact)
        potential_2   = 5 pi/32 - (pi/32) sin^2 t - (pi/8) sin^4 t    (exact)
    """
    xq, wq = _x_quadrature(n_x_quad)
    eta = _eta_total(exp, t, xq)
    out = {
        "phi_x_leading": _pair_sum(exp, t, xq, eta, "x", powers={(0, 0)}) @ wq,
        "phi_x_cross": _pair_sum(exp, t, xq, eta, "x", powers={(0, 2), (2, 0)}) @ wq,
        "phi_y_leading": _pair_sum(exp, t, xq, eta, "y", powers={(0, 0)}) @ wq,
        "phi_y_cross": _pair_sum(exp, t, xq, eta, "y", powers={(0, 2), (2, 0)}) @ wq,
    }
    e0, e1, e2 = _eta_orders(exp, t, xq)
    out["potential_0"] = (e0 ** 2) @ wq
    out["potential_1"] = (2.0 * e0 * e1) @ wq
    out["potential_2"] = (e1 ** 2 + 2.0 * e0 * e2) @ wq
    return out


def eval_surface(exp: StandingWaveExpansion, t: float, grid: PeriodicGrid):
    """Physical (eta, psi) on the full torus at phase t.

    The physical surface is eps * eta; psi is the potential composed with
    y = eps * eta and truncated at O(eps^3):

        psi = eps [ phi0 + eps eta0 d_y phi0 + eps^2 (eta1 d_y phi0
                    + (1/2) eta0^2 d_yy phi0 + phi2) ]  at y = 0.

    The evolution of these fields under gravity g = 1 in infinite depth runs at
    physical time tau with phase t = omega tau."""
    x = grid.nodes
    eps = exp.epsilon
    e0, e1, e2 = _eta_orders(exp, t, x)
    eta = eps * (e0 + eps * e1 + eps * eps * e2)[0]

    st, s3t = np.sin(t), np.sin(3 * t)
    phi0 = -st * np.cos(x)
    dphi0 = -st * np.cos(x)      # e^y factors collapse at y = 0
    ddphi0 = -st * np.cos(x)
    phi2 = exp.A13 * st * np.cos(3 * x) + (5.0 / 32.0) * s3t * np.cos(x) \
        + exp.A33 * s3t * np.cos(3 * x)
    psi = eps * (phi0 + eps * (e0[0] * dphi0)
                 + eps * eps * (e1[0] * dphi0 + 0.5 * e0[0] ** 2 * ddphi0 + phi2))
    return SurfaceField(grid, eta - np.mean(eta)), SurfaceField(grid, psi)
