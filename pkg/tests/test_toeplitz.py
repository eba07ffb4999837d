import numpy as np
import pytest

from rhlab.errors import NonzeroWinding, NotPositive, SymbolNotAnalytic
from rhlab.toeplitz import (det_identity_check, lens_deform, logdet_via_resolvent, symbol_from_function,
                            symbol_from_logcoeffs, szego_asymptote, toeplitz_det, toeplitz_matrix, winding_guard,
                            winding_number)


@pytest.fixture(scope="module")
def sym():
    return symbol_from_logcoeffs({1: 0.3})


def test_symbol_fourier_coefficients(sym):
    from scipy.special import iv
    for k in range(4):
        assert sym.phi_coeffs(4)[4 + k].real == pytest.approx(iv(k, 0.6), abs=1e-14)


def test_matrix_is_toeplitz(sym):
    T = toeplitz_matrix(sym, 3)
    assert T.shape == (4, 4)
    assert np.allclose(np.diag(T, 1), T[0, 1]) and np.allclose(T, T.T.conj())


def test_szego_limit(sym):
    assert szego_asymptote(sym, 10) == pytest.approx(0.09)
    assert abs(toeplitz_det(sym, 30).logdet - 0.09) < 1e-6


def test_identity_small_n(sym):
    rep = det_identity_check(sym, 3)
    assert rep.discrepancy < 1e-8 and rep.off_block < 1e-10


def test_identity_rejects_large_n(sym):
    with pytest.raises(ValueError):
        det_identity_check(sym, 9)


def test_resolvent_route(sym):
    rep = logdet_via_resolvent(sym, 2)
    assert abs(rep.logdet - toeplitz_det(sym, 2).logdet) < 1e-8


def test_lens_bounds(sym):
    rep = lens_deform(sym, 10, rho=0.7)
    assert rep.vtilde_sup["inner"] <= 2 * 0.7 ** 11
    with pytest.raises(SymbolNotAnalytic):
        lens_deform(sym, 10, rho=1.2)


def test_winding():
    with pytest.raises(NonzeroWinding):
        winding_guard(lambda z: z)
    assert winding_number(lambda z: z ** -2 * np.exp(z)) == -2


def test_not_positive():
    with pytest.raises(NotPositive):
        symbol_from_logcoeffs({1: 0.3j, -1: 0.3j})


def test_symbol_from_function_recovers_logs():
    s = symbol_from_function(lambda z: 1 / np.abs(1 - 0.5 * z) ** 2)
    # log φ = -log(1 - z/2) - log(1 - 1/(2z)) has L_k = 2^{-k}/k
    assert s.L_coeff(1).real == pytest.approx(0.5, abs=1e-12)
    assert s.L_coeff(3).real == pytest.approx(1 / 24, abs=1e-12)
