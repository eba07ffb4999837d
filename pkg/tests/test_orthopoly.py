import numpy as np
import pytest

from rhlab.errors import DegreeOutOfRange
from rhlab.orthopoly import (det_check, fik_build, fik_residual, gram_schmidt_monic, hermite_weight,
                             orthogonality_residual, quartic_weight, recurrence_chain, weight_from_samples)


def test_gram_schmidt_hermite():
    fam = gram_schmidt_monic(hermite_weight(), 6)
    np.testing.assert_allclose(fam.b ** 2, np.arange(1, fam.b.size + 1) / 2, atol=1e-12)
    assert np.max(np.abs(fam.a)) < 1e-12
    assert fam.h[0] == pytest.approx(np.sqrt(np.pi), abs=1e-12)
    assert orthogonality_residual(fam) < 1e-10


def test_hermite_coefficients():
    fam = gram_schmidt_monic(hermite_weight(), 4)
    np.testing.assert_allclose(fam.coefficients(2), [-0.5, 0, 1], atol=1e-12)


def test_fik_solution_residuals():
    w = hermite_weight()
    Y = fik_build(w, 3)
    jump, norm = fik_residual(Y)
    assert jump < 1e-8 and norm < 1e-8
    assert det_check(Y, np.array([1 + 1j, -2j])) < 1e-8


def test_recurrence_chain_quartic():
    fam, Ys, recs, tt = recurrence_chain(quartic_weight(), 3)
    assert np.max(np.abs(tt.a)) < 1e-10
    np.testing.assert_allclose(tt.b, fam.b[:tt.b.size], atol=1e-8)


def test_sampled_weight_matches_builtin():
    x = np.linspace(-8, 8, 2001)
    w = weight_from_samples(x, np.exp(-x * x))
    fam = gram_schmidt_monic(w, 3)
    np.testing.assert_allclose(fam.b ** 2, [0.5, 1.0, 1.5], atol=1e-6)


def test_degree_cap():
    with pytest.raises(DegreeOutOfRange):
        gram_schmidt_monic(hermite_weight(), 100)
