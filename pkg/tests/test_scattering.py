import numpy as np
import pytest

from rhlab.errors import ReflectionTooLarge, StepRejected
from rhlab.scattering import (PdeGrid, ScatteringData, direct_scattering, gaussian, pde_oracle, reconstruct,
                              trig_interpolate, zero_data)


def test_zero_data_reconstructs_zero():
    rec = reconstruct(zero_data(), [0.0, 1.0])
    assert np.all(rec.values == 0)


def test_small_potential_born_limit():
    # first order in q, r is the Fourier transform ∫ q e^{-izx} dx up to sign
    eps = 1e-4
    r = direct_scattering(lambda x: eps * np.exp(-x * x), n=33)
    born = eps * np.sqrt(np.pi) * np.exp(-r.z ** 2 / 4)
    assert np.max(np.abs(np.abs(r.r) - born)) < 1e-10


def test_mkdv_symmetry():
    r = direct_scattering(lambda x: 0.3 * np.exp(-x * x), kind="mkdv", n=65)
    assert r.symmetry_defect() < 1e-10


def test_roundtrip_two_points():
    g = gaussian(0.3)
    r = direct_scattering(g)
    rec = reconstruct(r, [0.0, 0.7])
    assert np.max(np.abs(rec.values - 0.3 * np.exp(-rec.x ** 2))) < 1e-6


def test_large_reflection_rejected():
    z = np.cos(np.pi * np.arange(5) / 4)
    with pytest.raises(ReflectionTooLarge):
        ScatteringData(z, np.full(5, 1.2 + 0j), "nls", 1.0)


def test_split_step_conserves_mass():
    grid = PdeGrid(40.0, 512)
    x, q = pde_oracle(lambda x: 0.5 * np.exp(-x * x), 0.5, grid=grid)
    m0 = np.sum(np.abs(0.5 * np.exp(-x * x)) ** 2)
    assert abs(np.sum(np.abs(q) ** 2) - m0) < 1e-9 * m0


def test_oracle_rejects_wide_datum():
    with pytest.raises(StepRejected):
        pde_oracle(lambda x: np.ones_like(x), 0.1, grid=PdeGrid(10.0, 64))


def test_trig_interpolate_exact_for_band_limited():
    x = PdeGrid(np.pi, 32).x
    f = np.cos(3 * x) + 0.5 * np.sin(x)
    xs = np.array([0.1, 1.3, -2.2])
    assert np.max(np.abs(trig_interpolate(x, f, xs) - (np.cos(3 * xs) + 0.5 * np.sin(xs)))) < 1e-12
