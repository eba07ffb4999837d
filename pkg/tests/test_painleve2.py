import numpy as np
import pytest
from scipy.special import airy as scipy_airy

from rhlab.painleve2 import (StokesTriple, ablowitz_segur_nu, asymptotics_minus, cyclic_check, hastings_mcleod,
                             pii_u, pii_u_and_derivative, ray_matrices, tracy_widom_cdf)


def test_ablowitz_segur_triple_is_cyclic():
    t = StokesTriple.ablowitz_segur(0.5)
    assert abs(t.constraint()) < 1e-15 and cyclic_check(t)


def test_non_constraint_triple_fails_cyclic():
    assert not cyclic_check(StokesTriple(0.3, 0.2, 0.1))


def test_ray_matrices_unipotent():
    for m in ray_matrices(StokesTriple(0.1, 0.2, -0.3 / 1.02)):
        assert abs(np.linalg.det(m) - 1) < 1e-15


def test_decaying_solution_matches_airy_tail():
    u = pii_u(StokesTriple.ablowitz_segur(0.5), 6.0)
    assert abs(u - 0.5 * scipy_airy(6.0)[0]) < 1e-8


def test_zero_triple_gives_zero():
    assert abs(pii_u(StokesTriple(0, 0, 0), 1.0)) < 1e-14


def test_derivative_consistent_with_airy():
    u, up = pii_u_and_derivative(StokesTriple.ablowitz_segur(0.2), 5.0)
    assert abs(up - 0.2 * scipy_airy(5.0)[1]) < 1e-6


def test_nu_and_asymptotics():
    assert ablowitz_segur_nu(0.5) == pytest.approx(-np.log(0.75) / (2 * np.pi))
    assert np.all(np.isfinite(asymptotics_minus(0.5, np.array([-30.0, -50.0]))))


def test_hastings_mcleod_matches_airy_on_right():
    u, _ = hastings_mcleod(np.array([6.0]))
    assert abs(u[0] - scipy_airy(6.0)[0]) < 1e-9


def test_tracy_widom_known_value():
    assert float(tracy_widom_cdf(np.array([-2.0]))[0]) == pytest.approx(0.413224, abs=1e-5)
