"""Periodic 1-D spectral substrate: grid, Fourier multipliers, quadrature, norms.

Everything lives on the torus [0, 2pi) sampled at n_x equispaced nodes.
Discrete Fourier convention (fixed here, used everywhere):

    f(x_j) = sum_xi fhat(xi) exp(i xi x_j),   fhat(xi) = (1/n_x) sum_j f(x_j) exp(-i xi x_j)

so that cos(kx) has fhat(+-k) = 1/2 and Parseval reads

    integrate(f * g) = 2pi * sum_xi fhat(xi) * conj(ghat(xi)).

Quadrature is the equispaced trapezoid rule, which is exact for trigonometric
polynomials of degree < n_x.  The Nyquist mode xi = n_x/2 is zeroed after every
multiplier application; all multiplier symbols used downstream satisfy the
Hermitian symmetry m(-xi) = conj(m(xi)) so outputs stay real.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "PeriodicGrid",
    "SurfaceField",
    "apply_multiplier",
    "integrate",
    "inner",
    "coefficient_inner",
    "derivative",
    "homogeneous_norm",
    "sobolev_norm",
    "lowpass_two_thirds",
    "exponential_filter_symbol",
    "apply_symbol_values",
    "field_from_modes",
]

TWO_PI = 2.0 * np.pi


class PeriodicGrid:
    """Equispaced collocation grid x_j = 2pi j / n_x, j = 0..n_x-1.

    n_x must be even and >= 8 (the Nyquist mode is treated as unusable).
    """

    def __init__(self, n_x: int):
        n_x = int(n_x)
        if n_x < 8 or n_x % 2 != 0:
            raise ValueError(f"n_x must be an even integer >= 8, got {n_x}")
        self.n_x = n_x
        self.length = TWO_PI
        self.nodes = TWO_PI * np.arange(n_x) / n_x
        self.nodes.flags.writeable = False
        # signed integer wavenumbers in FFT layout: 0, 1, ..., n/2-1, -n/2, ..., -1
        self.modes = np.fft.fftfreq(n_x, d=1.0 / n_x).astype(np.int64)
        self.modes.flags.writeable = False
        self.k_max = n_x // 2

    def field(self, values) -> "SurfaceField":
        return SurfaceField(self, values)

    def field_from_function(self, fn) -> "SurfaceField":
        return SurfaceField(self, fn(self.nodes))

    def zero_field(self) -> "SurfaceField":
        return SurfaceField(self, np.zeros(self.n_x))

    def __eq__(self, other):
        return isinstance(other, PeriodicGrid) and other.n_x == self.n_x

    def __hash__(self):
        return hash(("PeriodicGrid", self.n_x))

    def __repr__(self):
        return f"PeriodicGrid(n_x={self.n_x})"


class SurfaceField:
    """Real-valued function on a PeriodicGrid, immutable after construction.

    Fourier coefficients (full complex spectrum, convention above) are cached
    lazily.  Arithmetic is pointwise in collocation space; callers that multiply
    fields are responsible for dealiasing when it matters.
    """

    __slots__ = ("grid", "values", "_coeffs")

    def __init__(self, grid: PeriodicGrid, values):
        vals = np.asarray(values, dtype=float)
        if vals.shape != (grid.n_x,):
            raise ValueError(f"values must have shape ({grid.n_x},), got {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("field values must be finite")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "_coeffs", None)

    def __setattr__(self, name, value):
        raise AttributeError("SurfaceField is immutable")

    @property
    def coefficients(self) -> np.ndarray:
        if self._coeffs is None:
            c = np.fft.fft(self.values) / self.grid.n_x
            c.flags.writeable = False
            object.__setattr__(self, "_coeffs", c)
        return self._coeffs

    def mean(self) -> float:
        return float(np.mean(self.values))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    # pointwise arithmetic; scalar or same-grid field operands
    def _other_values(self, other):
        if isinstance(other, SurfaceField):
            if other.grid != self.grid:
                raise ValueError("fields live on different grids")
            return other.values
        return other

    def __add__(self, other):
        return SurfaceField(self.grid, self.values + self._other_values(other))

    __radd__ = __add__

    def __sub__(self, other):
        return SurfaceField(self.grid, self.values - self._other_values(other))

    def __rsub__(self, other):
        return SurfaceField(self.grid, self._other_values(other) - self.values)

    def __mul__(self, other):
        return SurfaceField(self.grid, self.values * self._other_values(other))

    __rmul__ = __mul__

    def __neg__(self):
        return SurfaceField(self.grid, -self.values)

    def __repr__(self):
        return f"SurfaceField(n_x={self.grid.n_x}, max_abs={self.max_abs():.3e})"


def _symbol_values(symbol, modes: np.ndarray) -> np.ndarray:
    """Evaluate a symbol callable on the signed integer mode array."""
    try:
        m = np.asarray(symbol(modes))
    except Exception:
        m = np.asarray([symbol(int(k)) for k in modes])
    if m.shape != modes.shape:
        m = np.broadcast_to(m, modes.shape)
    if not np.all(np.isfinite(m)):
        raise ValueError("multiplier symbol takes a non-finite value on resolved modes")
    return m


def apply_symbol_values(f: SurfaceField, m: np.ndarray) -> SurfaceField:
    """Apply precomputed per-mode factors m (FFT layout) to a field."""
    grid = f.grid
    spec = np.fft.fft(f.values) * m
    spec[grid.k_max] = 0.0  # Nyquist hygiene: keeps output real and symbols unambiguous
    return SurfaceField(grid, np.fft.ifft(spec).real)


def apply_multiplier(f: SurfaceField, symbol) -> SurfaceField:
    """Fourier multiplier: output coefficients are symbol(xi) * fhat(xi).

    symbol is a function of the signed integer wavenumber; it may return real or
    complex values but must satisfy m(-xi) = conj(m(xi)) for the result to be a
    real field (true of |xi|, tanh(h|xi|), i xi, Riesz symbols, ...).  The
    imaginary part left over by a non-Hermitian symbol is discarded.
    """
    return apply_symbol_values(f, _symbol_values(symbol, f.grid.modes))


def derivative(f: SurfaceField) -> SurfaceField:
    """d/dx via the symbol i*xi."""
    return apply_symbol_values(f, 1j * f.grid.modes.astype(float))


def integrate(f: SurfaceField) -> float:
    """Trapezoid quadrature (2pi/n_x) sum_j f_j; exact for trig polynomials of degree < n_x."""
    return float(TWO_PI * np.sum(f.values) / f.grid.n_x)


def inner(f: SurfaceField, g: SurfaceField) -> float:
    """L2 inner product integrate(f*g)."""
    if f.grid != g.grid:
        raise ValueError("fields live on different grids")
    return float(TWO_PI * np.dot(f.values, g.values) / f.grid.n_x)


def coefficient_inner(f: SurfaceField, g: SurfaceField) -> float:
    """Coefficient-space inner product 2pi sum fhat conj(ghat); equals inner() by Parseval."""
    return float(np.real(TWO_PI * np.sum(f.coefficients * np.conj(g.coefficients))))


def homogeneous_norm(f: SurfaceField, s: float) -> float:
    """Homogeneous Sobolev norm (sum_{xi != 0} |xi|^{2s} |fhat(xi)|^2)^(1/2).

    For s < 0 the zero mode must vanish (to 1e-12 of the field's max amplitude);
    for s >= 0 the zero mode carries weight zero and is simply dropped.
    """
    c = f.coefficients
    if s < 0:
        tol = 1e-12 * max(f.max_abs(), 1e-300)
        if abs(c[0]) > tol:
            raise ValueError(
                f"homogeneous norm with s={s} requires a mean-free field "
                f"(|fhat(0)| = {abs(c[0]):.3e} > {tol:.3e})"
            )
    k = f.grid.modes
    nz = k != 0
    return float(np.sqrt(np.sum(np.abs(k[nz]) ** (2.0 * s) * np.abs(c[nz]) ** 2)))


def sobolev_norm(f: SurfaceField, s: float) -> float:
    """Inhomogeneous norm (sum (1+|xi|^2)^s |fhat|^2)^(1/2)."""
    c = f.coefficients
    k = f.grid.modes.astype(float)
    return float(np.sqrt(np.sum((1.0 + k * k) ** s * np.abs(c) ** 2)))


def lowpass_two_thirds(f: SurfaceField) -> SurfaceField:
    """Zero all modes |xi| > n_x/3 (the 2/3 dealiasing rule for quadratic products)."""
    cutoff = f.grid.n_x // 3
    m = (np.abs(f.grid.modes) <= cutoff).astype(float)
    return apply_symbol_values(f, m)


def exponential_filter_symbol(grid: PeriodicGrid, strength: float,
                              cutoff_frac: float = 2.0 / 3.0, order: int = 4) -> np.ndarray:
    """Per-mode factors of a smooth analytic-band filter.

    Identity below xi_c = cutoff_frac * k_max, then
    exp(-strength * ((|xi|-xi_c)/(k_max-xi_c))**order) out to the Nyquist mode.
    """
    if strength < 0:
        raise ValueError("filter strength must be >= 0")
    k = np.abs(grid.modes).astype(float)
    kc = cutoff_frac * grid.k_max
    span = max(grid.k_max - kc, 1.0)
    m = np.ones_like(k)
    hi = k > kc
    m[hi] = np.exp(-strength * ((k[hi] - kc) / span) ** order)
    return m


def field_from_modes(grid: PeriodicGrid, cosines=None, sines=None) -> SurfaceField:
    """Build sum_k a_k cos(kx) + b_k sin(kx) from {k: amplitude} dicts."""
    x = grid.nodes
    v = np.zeros(grid.n_x)
    for k, a in (cosines or {}).items():
        if abs(int(k)) >= grid.k_max:
            raise ValueError(f"mode {k} is not resolved on n_x={grid.n_x}")
        v += a * np.cos(int(k) * x)
    for k, b in (sines or {}).items():
        if abs(int(k)) >= grid.k_max:
            raise ValueError(f"mode {k} is not resolved on n_x={grid.n_x}")
        v += b * np.sin(int(k) * x)
    return SurfaceField(grid, v)
