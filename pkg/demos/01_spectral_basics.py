"""Fourier multipliers, quadrature and homogeneous norms on the torus grid.

Everything downstream sits on this substrate: the convention is
integrate(f*g) = 2 pi sum fhat conj(ghat), cos(kx) carries coefficients 1/2 at
+-k, and the Nyquist mode is always zeroed after a multiplier application.
"""

import numpy as np

from virialwave import PeriodicGrid, apply_multiplier, homogeneous_norm, inner, integrate
from virialwave.spectral import coefficient_inner, derivative

grid = PeriodicGrid(64)
x = grid.nodes

print("== multipliers ==")
f = grid.field(np.cos(3 * x))
out = apply_multiplier(f, lambda k: np.abs(k))
print("|D| cos(3x) = 3 cos(3x):     max error",
      np.max(np.abs(out.values - 3 * np.cos(3 * x))))

out = apply_multiplier(grid.field(np.cos(x)), lambda k: np.tanh(2 * np.abs(k)))
print("tanh(2|D|) cos(x):           max error",
      np.max(np.abs(out.values - np.tanh(2.0) * np.cos(x))))

print("\n== quadrature ==")
print("integrate(1)      =", integrate(grid.field(np.ones(64))), "(2 pi)")
print("integrate(sin^2)  =", integrate(grid.field(np.sin(x) ** 2)), "(pi)")

print("\n== Parseval ==")
rng = np.random.default_rng(0)
a = grid.field(rng.normal(size=64))
b = grid.field(rng.normal(size=64))
print("physical inner product:     ", inner(a, b))
print("coefficient inner product:  ", coefficient_inner(a, b))

print("\n== homogeneous norms ==")
f = grid.field(np.cos(x))
print("||cos x||_{H^1/2 homog} =", homogeneous_norm(f, 0.5), "(sqrt(1/2))")
q = inner(f, apply_multiplier(f, lambda k: np.abs(k)))
print("quadratic form / (2 pi norm^2):",
      q / (2 * np.pi * homogeneous_norm(f, 0.5) ** 2))
print("norm ratio cos(2x)/cos(x) at s=-1/2:",
      homogeneous_norm(grid.field(np.cos(2 * x)), -0.5) / homogeneous_norm(f, -0.5),
      "(1/sqrt 2)")

print("\n== spectral derivative ==")
d = derivative(grid.field(np.sin(5 * x)))
print("d/dx sin(5x) error:", np.max(np.abs(d.values - 5 * np.cos(5 * x))))
