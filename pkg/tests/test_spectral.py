"""Spectral substrate: grids, multipliers, quadrature, norms."""

import numpy as np
import pytest

from virialwave.spectral import (PeriodicGrid, apply_multiplier,
                                 coefficient_inner, derivative, exponential_filter_symbol,
                                 field_from_modes, homogeneous_norm, inner, integrate,
                                 lowpass_two_thirds, sobolev_norm)


def test_grid_validation():
    with pytest.raises(ValueError):
        PeriodicGrid(6)
    with pytest.raises(ValueError):
        PeriodicGrid(9)
    g = PeriodicGrid(16)
    assert g.nodes[0] == 0.0
    assert np.all(np.diff(g.nodes) > 0)
    assert np.allclose(np.diff(g.nodes), 2 * np.pi / 16)


def test_field_roundtrip_and_immutability():
    g = PeriodicGrid(32)
    rng = np.random.default_rng(0)
    f = g.field(rng.normal(size=32))
    back = np.fft.ifft(f.coefficients * g.n_x).real
    assert np.max(np.abs(back - f.values)) <= 1e-12 * f.max_abs()
    with pytest.raises((ValueError, AttributeError)):
        f.values[0] = 1.0
    with pytest.raises(ValueError):
        g.field(np.full(32, np.inf))


def test_multiplier_eigenfunctions():
    g = PeriodicGrid(64)
    x = g.nodes
    # |xi| has cos(3x) as eigenfunction with eigenvalue 3
    out = apply_multiplier(g.field(np.cos(3 * x)), lambda k: np.abs(k))
    assert np.allclose(out.values, 3 * np.cos(3 * x), atol=1e-12)
    # zero mode annihilated by any symbol vanishing at 0
    out = apply_multiplier(g.field(np.full(64, 2.7)), lambda k: np.abs(k))
    assert np.max(np.abs(out.values)) <= 1e-13
    # tanh(2|xi|) on cos x scales by tanh(2)
    out = apply_multiplier(g.field(np.cos(x)), lambda k: np.tanh(2.0 * np.abs(k)))
    assert np.allclose(out.values, np.tanh(2.0) * np.cos(x), atol=1e-12)


@pytest.mark.filterwarnings("ignore:divide by zero")
def test_multiplier_rejects_nonfinite_symbol():
    g = PeriodicGrid(16)
    with pytest.raises(ValueError):
        apply_multiplier(g.field(np.cos(g.nodes)), lambda k: 1.0 / k)


def test_integrate_examples():
    g = PeriodicGrid(32)
    x = g.nodes
    assert integrate(g.field(np.ones(32))) == pytest.approx(2 * np.pi, abs=1e-14)
    for k in (1, 3, 7):
        assert integrate(g.field(np.cos(k * x))) == pytest.approx(0.0, abs=1e-13)
    # int_0^{2pi} sin^2 x dx = pi by the half-angle identity
    assert integrate(g.field(np.sin(x) ** 2)) == pytest.approx(np.pi, abs=1e-13)


def test_parseval_random_band_limited_pairs():
    g = PeriodicGrid(64)
    rng = np.random.default_rng(42)
    for _ in range(100):
        ks = rng.integers(0, 20, size=6)
        f = field_from_modes(g, cosines={int(k): rng.normal() for k in ks[:3]},
                             sines={int(k): rng.normal() for k in ks[3:] if k > 0})
        h = field_from_modes(g, cosines={int(k): rng.normal() for k in ks[2:5]})
        a, b = inner(f, h), coefficient_inner(f, h)
        assert abs(a - b) <= 1e-12 * max(abs(a), abs(b), 1.0)


def test_multiplier_composition_exact():
    g = PeriodicGrid(32)
    rng = np.random.default_rng(3)
    f = g.field(rng.normal(size=32))
    m1 = lambda k: np.tanh(np.abs(k) + 0.5)
    m2 = lambda k: 1.0 + 0.1 * k * k
    once = apply_multiplier(apply_multiplier(f, m1), m2)
    both = apply_multiplier(f, lambda k: m1(k) * m2(k))
    assert np.array_equal(once.values, both.values) or \
        np.max(np.abs(once.values - both.values)) <= 1e-15 * max(1.0, once.max_abs())


def test_derivative_consistency():
    g = PeriodicGrid(64)
    x = g.nodes
    for k in range(1, g.k_max):
        d = derivative(g.field(np.sin(k * x)))
        assert np.max(np.abs(d.values - k * np.cos(k * x))) <= 1e-12 * max(k, 1)


def test_homogeneous_norm_values():
    g = PeriodicGrid(64)
    x = g.nodes
    # cos x at s = 1/2: two modes +-1, coefficients 1/2 -> sqrt(2 * 1 * 1/4)
    f = g.field(np.cos(x))
    assert homogeneous_norm(f, 0.5) == pytest.approx(np.sqrt(0.5), abs=1e-13)
    # consistency with the quadratic form: integrate(f |D| f) = 2 pi ||f||^2
    from virialwave.spectral import apply_multiplier as mult
    q = inner(f, mult(f, lambda k: np.abs(k)))
    assert q == pytest.approx(2 * np.pi * homogeneous_norm(f, 0.5) ** 2, rel=1e-12)
    assert homogeneous_norm(g.zero_field(), 0.5) == 0.0
    # |xi|^{-1} weight: the mode-2 norm is the mode-1 norm over sqrt(2)
    r = homogeneous_norm(g.field(np.cos(2 * x)), -0.5) / homogeneous_norm(f, -0.5)
    assert r == pytest.approx(1 / np.sqrt(2), rel=1e-12)


def test_homogeneous_norm_mean_precondition():
    g = PeriodicGrid(32)
    with pytest.raises(ValueError):
        homogeneous_norm(g.field(1.0 + np.cos(g.nodes)), -0.5)
    # zero-mode weight is zero for s = 1/2, so a mean is allowed there
    v = homogeneous_norm(g.field(1.0 + np.cos(g.nodes)), 0.5)
    assert v == pytest.approx(np.sqrt(0.5), abs=1e-13)


def test_sobolev_norm():
    g = PeriodicGrid(32)
    f = g.field(np.cos(g.nodes))
    assert sobolev_norm(f, 0.5) == pytest.approx(np.sqrt(2 * 0.25 * np.sqrt(2.0)), rel=1e-12)


def test_lowpass_two_thirds():
    g = PeriodicGrid(32)
    x = g.nodes
    keep = g.field(np.cos(10 * x))   # 10 <= 32/3 rounds to cutoff 10
    cut = g.field(np.cos(11 * x))
    assert np.allclose(lowpass_two_thirds(keep).values, keep.values, atol=1e-13)
    assert np.max(np.abs(lowpass_two_thirds(cut).values)) <= 1e-13


def test_exponential_filter_shape():
    g = PeriodicGrid(64)
    m = exponential_filter_symbol(g, strength=36.0)
    k = np.abs(g.modes)
    assert np.all(m[k <= 21] == 1.0)
    assert m[g.k_max] == pytest.approx(np.exp(-36.0), rel=1e-12)
    with pytest.raises(ValueError):
        exponential_filter_symbol(g, strength=-1.0)


def test_field_arithmetic_and_grid_mismatch():
    g = PeriodicGrid(16)
    f = g.field(np.cos(g.nodes))
    assert np.allclose((2.0 * f - f).values, f.values)
    other = PeriodicGrid(32).zero_field()
    with pytest.raises(ValueError):
        f + other
