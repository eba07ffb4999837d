import numpy as np
import pytest

from rhlab.cauchy import (Density, Discretization, cauchy_boundary, cauchy_off, density_from_function, hilbert,
                          holder_half_estimate, line_fourier_projection, line_hilbert, ray_norm_bound,
                          ray_operator_norm)
from rhlab.contour import build_contour, circle, segment
from rhlab.errors import GridTooCoarse, PointOnContour

UNIT = build_contour([circle(0, 1)])


def test_constant_on_circle():
    d = density_from_function(UNIT, 16, lambda z: np.ones_like(z))
    assert cauchy_off(d, 0.0) == pytest.approx(1.0, abs=1e-14)
    assert cauchy_off(d, 3.0) == pytest.approx(0.0, abs=1e-14)


def test_laurent_mode_projection():
    for k in (0, 1, 3, -1, -4):
        d = density_from_function(UNIT, 16, lambda z, k=k: z ** k)
        z = d.disc.nodes
        plus = cauchy_boundary(d, "plus").values
        minus = cauchy_boundary(d, "minus").values
        if k >= 0:
            np.testing.assert_allclose(plus, z ** k, atol=1e-13)
            np.testing.assert_allclose(minus, 0, atol=1e-13)
        else:
            np.testing.assert_allclose(plus, 0, atol=1e-13)
            np.testing.assert_allclose(minus, -z ** k, atol=1e-13)


def test_hilbert_on_circle():
    d = density_from_function(UNIT, 16, lambda z: z)
    np.testing.assert_allclose(hilbert(d).values, -1j * d.disc.nodes, atol=1e-13)


def test_segment_transform_matches_quadrature():
    # off-contour values from the spectral rule vs brute-force Gauss-Legendre
    c = build_contour([segment(-1, 1)])
    d = density_from_function(c, 40, lambda s: np.exp(s) * (1 - s * s))
    z = 0.3 + 0.4j
    x, w = np.polynomial.legendre.leggauss(200)
    ref = np.sum(w * np.exp(x) * (1 - x * x) / (x - z)) / (2j * np.pi)
    assert abs(cauchy_off(d, z) - ref) < 1e-12


def test_point_on_contour_rejected():
    d = density_from_function(UNIT, 16, lambda z: z)
    with pytest.raises(PointOnContour):
        cauchy_off(d, 1.0)


def test_plemelj_exact_at_nodes():
    rng = np.random.default_rng(1)
    c = build_contour([segment(-1, 1), circle(3, 1)])
    disc = Discretization(c, [20, 16])
    f = rng.standard_normal(disc.size) + 1j * rng.standard_normal(disc.size)
    d = Density(disc, f)
    diff = cauchy_boundary(d, "plus").values - cauchy_boundary(d, "minus").values
    # C- is built as C+ - f, so only one rounding separates the two sides
    assert np.max(np.abs(diff - f)) <= 4 * np.finfo(float).eps * np.max(np.abs(f))


def test_line_projection_of_upper_analytic_function():
    x = np.linspace(-400, 400, 2 ** 16, endpoint=False)
    f = 1 / (x + 1j) ** 2
    plus = line_fourier_projection(f, tol=1e-4)
    mid = np.abs(x) < 20
    assert np.max(np.abs(plus[mid] - f[mid])) < 1e-4


def test_line_projection_consistency():
    x = np.linspace(-20, 20, 512, endpoint=False)
    f = np.exp(-x * x)
    plus = line_fourier_projection(f)
    H = line_hilbert(f)
    assert np.max(np.abs(plus - (f / 2 + 0.5j * H))) < 1e-8
    assert np.max(np.abs((2 * plus - f).real)) < 1e-8
    assert np.max(np.abs(H.imag)) < 1e-10


def test_line_projection_rejects_coarse_grid():
    x = np.linspace(-20, 20, 64, endpoint=False)
    with pytest.raises(GridTooCoarse):
        line_fourier_projection(np.exp(-30 * x * x))


def test_hilbert_of_lorentzian():
    x = np.linspace(-2000, 2000, 2 ** 18, endpoint=False)
    f = 1 / (1 + x * x)
    H = line_hilbert(f)
    mid = np.abs(x) < 5
    # windowing the slow 1/x² tail costs about window⁻¹
    assert np.max(np.abs(H[mid] - x[mid] / (1 + x[mid] ** 2))) < 2e-3


def test_product_identity():
    rng = np.random.default_rng(3)
    disc = Discretization(UNIT, 32)
    z = disc.nodes
    modes = np.arange(-5, 6)
    f = (rng.standard_normal(11) @ (z[None, :] ** modes[:, None]))
    g = (rng.standard_normal(11) @ (z[None, :] ** modes[:, None]))
    F, G = Density(disc, f), Density(disc, g)
    lhs = cauchy_boundary(F).values * cauchy_boundary(G).values - \
        cauchy_boundary(F, "minus").values * cauchy_boundary(G, "minus").values
    rhs = -(g * hilbert(F).values + f * hilbert(G).values) / 2j
    assert np.max(np.abs(lhs - rhs)) < 1e-8


def test_ray_norm_bound():
    assert ray_norm_bound(np.pi / 2) == pytest.approx(0.5699, abs=1e-4)
    assert ray_operator_norm(np.pi / 2) <= ray_norm_bound(np.pi / 2) + 0.01


def test_holder_half_stable_under_refinement():
    c = build_contour([segment(-1, 1)])
    f = lambda s: np.cos(3 * s) * (1 - s * s)
    steps = np.geomspace(1e-6, 0.3, 12)
    est = [holder_half_estimate(density_from_function(c, n, f), 0.2 + 1e-9j, 1j, steps) for n in (40, 80)]
    assert np.isfinite(est[0]) and abs(est[0] - est[1]) < 1e-6 * max(1, est[1])
