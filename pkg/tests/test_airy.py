import numpy as np
import pytest
from scipy.special import airy as scipy_airy, gamma

from rhlab.airy import (ai_prime_quadrature, ai_quadrature, ai_series_minus, ai_series_plus, ai_taylor_oracle,
                        airy_coeffs, airy_coeffs_gamma, series_plus_term, truncation_radius)


def test_value_at_zero():
    ref = 3 ** (-2 / 3) / gamma(2 / 3)
    assert ai_quadrature(0.0) == pytest.approx(ref, abs=1e-12)


@pytest.mark.parametrize("x", [-5.0, -1.0, 0.5, 3.0])
def test_quadrature_vs_scipy(x):
    ai, aip, _, _ = scipy_airy(x)
    assert abs(ai_quadrature(x) - ai) < 1e-11
    assert abs(ai_prime_quadrature(x) - aip) < 1e-10


def test_coefficients_two_ways():
    np.testing.assert_allclose(airy_coeffs(12), airy_coeffs_gamma(12), rtol=1e-12)
    assert airy_coeffs(2)[1] == pytest.approx(5 / 72)


def test_series_plus_at_eight():
    err = abs(ai_series_plus(8.0, 5) - ai_taylor_oracle(8.0))
    assert err <= 2 * series_plus_term(8.0, 6)


def test_series_minus_oscillatory():
    assert abs(ai_series_minus(10.0, 2) - scipy_airy(-10.0)[0]) < 1e-6


def test_truncation_radius_grows_with_negative_x():
    assert truncation_radius(-8.0) >= truncation_radius(0.0) > 0


def test_series_domain():
    with pytest.raises(ValueError):
        ai_series_plus(-1.0, 3)
