"""Airy function from its contour integral, the two asymptotic series, and a Taylor oracle.

Ai(x) = (1/2πi) ∫ exp(xz - z³/3) dz over the rays from ∞·e^{-2πi/3} to 0
and from 0 to ∞·e^{2πi/3}.  For real x the two ray integrals are complex
conjugates, so Ai(x) = Im(I)/π with I the integral along the upper ray.
"""
from __future__ import annotations

import threading

import mpmath
import numpy as np
from scipy.special import gammaln

from .errors import WindowExceeded

WINDOW = 40.0

# mpmath keeps its working precision in global state; concurrent callers must not interleave
_MP_LOCK = threading.RLock()


def truncation_radius(x: float) -> float:
    return max(6.0, 2.5 * np.sqrt(abs(x)) + 4.0)


def _working_digits(x: float) -> int:
    # the ray integrand is O(1) (or grows like exp((2/3)(|x|/2)^{3/2}) for x < 0)
    # while Ai(x) can be as small as exp(-(2/3)x^{3/2}); carry enough digits to absorb both
    if x >= 0:
        lost = (2.0 / 3.0) * x ** 1.5
    else:
        lost = (2.0 / 3.0) * (abs(x) / 2) ** 1.5
    return 25 + int(np.ceil(lost / np.log(10)))


def _ray_integral(x: float, power: int, radius: float) -> complex:
    """∫_0^R (tω)^power exp(x tω - t³/3) ω dt with ω = e^{2πi/3}, Gauss-Legendre in extended precision."""
    with _MP_LOCK, mpmath.workdps(_working_digits(x)):
        om = mpmath.mpc(-0.5, mpmath.sqrt(3) / 2)
        xm = mpmath.mpf(x)

        def f(t):
            # on this ray z³ = t³ exactly
            return (t * om) ** power * mpmath.exp(xm * t * om - t ** 3 / 3) * om

        R = mpmath.mpf(radius)
        pts = [R * k / 8 for k in range(9)]
        val = mpmath.quad(f, pts, method="gauss-legendre")
        return complex(val.real), float(val.imag)


def ai_quadrature(x: float, radius: float | None = None) -> float:
    """Ai(x) by Gauss-Legendre quadrature on the truncated rays at ±2π/3."""
    if abs(x) > WINDOW:
        raise WindowExceeded(f"|x| = {abs(x)} outside the quadrature window {WINDOW}")
    R = truncation_radius(x) if radius is None else radius
    return _ray_integral(float(x), 0, R)[1] / np.pi


def ai_prime_quadrature(x: float, radius: float | None = None) -> float:
    """Ai'(x) from the same contour with the extra factor z."""
    if abs(x) > WINDOW:
        raise WindowExceeded(f"|x| = {abs(x)} outside the quadrature window {WINDOW}")
    R = truncation_radius(x) if radius is None else radius
    return _ray_integral(float(x), 1, R)[1] / np.pi


def airy_coeffs(K: int) -> np.ndarray:
    """c_k = (2k+1)(2k+3)...(6k-1) / (216^k k!) for k = 0..K."""
    c = np.empty(K + 1)
    c[0] = 1.0
    for k in range(1, K + 1):
        num = np.prod(np.arange(2 * k + 1, 6 * k, 2, dtype=float))
        c[k] = num / (216.0 ** k * np.prod(np.arange(1, k + 1, dtype=float)))
    return c


def airy_coeffs_gamma(K: int) -> np.ndarray:
    """Same coefficients from Γ(3k + 1/2) / (54^k k! Γ(k + 1/2))."""
    k = np.arange(K + 1, dtype=float)
    return np.exp(gammaln(3 * k + 0.5) - k * np.log(54.0) - gammaln(k + 1) - gammaln(k + 0.5))


def ai_series_plus(x: float, K: int) -> float:
    """Decaying expansion for x > 0, summed through k = K."""
    if x <= 0:
        raise ValueError("series_plus needs x > 0")
    zeta = 2.0 / 3.0 * x ** 1.5
    c = airy_coeffs(K)
    k = np.arange(K + 1)
    s = np.sum((-1.0) ** k * c * zeta ** (-k.astype(float)))
    return float(s * np.exp(-zeta) * x ** -0.25 / (2 * np.sqrt(np.pi)))


def series_plus_term(x: float, k: int) -> float:
    """Magnitude of the k-th term of ai_series_plus (prefactor included)."""
    zeta = 2.0 / 3.0 * x ** 1.5
    return float(airy_coeffs(k)[k] * zeta ** (-k) * np.exp(-zeta) * x ** -0.25 / (2 * np.sqrt(np.pi)))


def ai_series_minus(x: float, K: int) -> float:
    """Oscillatory expansion of Ai(-x), x > 0, with K terms in each sum."""
    if x <= 0:
        raise ValueError("series_minus needs x > 0")
    zeta = 2.0 / 3.0 * x ** 1.5
    c = airy_coeffs(2 * K + 1)
    k = np.arange(K + 1)
    even = np.sum((-1.0) ** k * c[2 * k] * zeta ** (-2.0 * k))
    odd = np.sum((-1.0) ** k * c[2 * k + 1] * zeta ** (-2.0 * k - 1)) if K >= 0 else 0.0
    ph = zeta + np.pi / 4
    return float((np.sin(ph) * even - np.cos(ph) * odd) * x ** -0.25 / np.sqrt(np.pi))


def series_minus_term(x: float, K: int) -> float:
    """Size of the first terms left out of ai_series_minus(x, K)."""
    zeta = 2.0 / 3.0 * x ** 1.5
    c = airy_coeffs(2 * K + 3)
    return float((c[2 * K + 2] * zeta ** (-2.0 * K - 2) + c[2 * K + 3] * zeta ** (-2.0 * K - 3))
                 * x ** -0.25 / np.sqrt(np.pi))


def ai_taylor_oracle(x: float, terms: int = 200, dps: int = 50) -> float:
    """Ai(x) from the power series of y'' = xy, summed in extended precision.

    Initial data Ai(0) = 3^{-2/3}/Γ(2/3), Ai'(0) = -3^{-1/3}/Γ(1/3).
    """
    if abs(x) > 12:
        raise WindowExceeded("Taylor oracle is restricted to |x| <= 12")
    with _MP_LOCK, mpmath.workdps(dps):
        xm = mpmath.mpf(x)
        a0 = mpmath.power(3, mpmath.mpf(-2) / 3) / mpmath.gamma(mpmath.mpf(2) / 3)
        a1 = -mpmath.power(3, mpmath.mpf(-1) / 3) / mpmath.gamma(mpmath.mpf(1) / 3)
        # coefficients a_n of Σ a_n x^n with a_{n+3} = a_n / ((n+3)(n+2)), a_2 = 0
        a = [a0, a1, mpmath.mpf(0)]
        total = a0 + a1 * xm
        p = xm
        for n in range(2, terms):
            if n >= 3:
                a.append(a[n - 3] / (n * (n - 1)))
            p *= xm
            total += a[n] * p
        return float(total)


def ai_taylor_derivatives(x: float, terms: int = 200, dps: int = 50):
    """(Ai, Ai', Ai'') from the same series; used for the ODE residual check."""
    with _MP_LOCK, mpmath.workdps(dps):
        xm = mpmath.mpf(x)
        a0 = mpmath.power(3, mpmath.mpf(-2) / 3) / mpmath.gamma(mpmath.mpf(2) / 3)
        a1 = -mpmath.power(3, mpmath.mpf(-1) / 3) / mpmath.gamma(mpmath.mpf(1) / 3)
        a = [a0, a1, mpmath.mpf(0)]
        for n in range(3, terms):
            a.append(a[n - 3] / (n * (n - 1)))
        y = sum(a[n] * xm ** n for n in range(terms))
        yp = sum(n * a[n] * xm ** (n - 1) for n in range(1, terms))
        ypp = sum(n * (n - 1) * a[n] * xm ** (n - 2) for n in range(2, terms))
        return float(y), float(yp), float(ypp)
