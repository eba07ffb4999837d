"""Painlevé II through its six-ray Riemann-Hilbert problem, plus ODE-based oracles.

Each ray carries a constant unipotent matrix built from Stokes data (p, q, r)
with p + q + r + pqr = 0, conjugated by exp(-iθσ3) with θ = (4/3)z³ + xz:
upper-triangular entries pick up e^{-2iθ} and lower-triangular ones e^{2iθ}.
The rays are rotated (cyclic order kept) to the bisectors of the sectors
where their exponential decays, then truncated.  u(x) = 2i (m1)_12 solves
u'' = xu + 2u³.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import loggamma

from .airy import ai_prime_quadrature, ai_quadrature
from .contour import build_contour, ray
from .errors import BlowupDetected, QOutOfRange, WindowExceeded
from .rhsolver import JumpField, RhSolution, solve_normalized

ORIGINAL_ANGLES = np.arange(6) * np.pi / 3
# same cyclic order, each ray moved to the middle of its decay sector
ROTATED_ANGLES = np.array([-np.pi / 6, np.pi / 6, np.pi / 2, 5 * np.pi / 6, 7 * np.pi / 6, 3 * np.pi / 2])
UPPER = (True, False, True, False, True, False)


@dataclass(frozen=True)
class StokesTriple:
    p: complex
    q: complex
    r: complex

    def constraint(self) -> complex:
        return self.p + self.q + self.r + self.p * self.q * self.r

    @property
    def entries(self):
        # ray-by-ray off-diagonal entry, rays ordered counterclockwise from angle 0
        return (self.p, self.q, self.r, self.p, self.q, self.r)

    @classmethod
    def ablowitz_segur(cls, q: float) -> "StokesTriple":
        return cls(-q, q, 0.0)


def ray_matrices(t: StokesTriple):
    mats = []
    for a, up in zip(t.entries, UPPER):
        m = np.eye(2, dtype=complex)
        if up:
            m[0, 1] = a
        else:
            m[1, 0] = a
        mats.append(m)
    return mats


def cyclic_check(t: StokesTriple, tol: float = 1e-10) -> bool:
    """True iff the ordered product of the six ray matrices is the identity."""
    P = np.eye(2, dtype=complex)
    for m in ray_matrices(t):
        P = P @ m
    return bool(np.max(np.abs(P - np.eye(2))) <= tol)


def theta(z, x: float):
    return 4.0 / 3.0 * z ** 3 + x * z


def truncation_radius(x: float) -> float:
    return max(3.0, 2.0 * np.sqrt(abs(x)) + 2.0)


def pii_jump(t: StokesTriple, x: float, angles=ROTATED_ANGLES, radius: float | None = None) -> JumpField:
    R = truncation_radius(x) if radius is None else radius
    contour = build_contour([ray(a, R) for a in angles])
    entries = t.entries

    def v(z, arc):
        z = np.asarray(z, dtype=complex)
        out = np.zeros((z.size, 2, 2), dtype=complex)
        out[:, 0, 0] = out[:, 1, 1] = 1
        if UPPER[arc]:
            out[:, 0, 1] = entries[arc] * np.exp(-2j * theta(z, x))
        else:
            out[:, 1, 0] = entries[arc] * np.exp(2j * theta(z, x))
        return out

    return JumpField(contour, v, k=2, unit_determinant=True, label=f"PII x={x}")


X_MAX = 8.0
NODE_LADDER = (80, 120, 200, 320)


def solve_pii_rhp(t: StokesTriple, x: float, n: int | None = None, angles=ROTATED_ANGLES,
                  tol: float = 1e-8, **kw) -> RhSolution:
    """Solve the rotated six-ray problem; with n=None the node count is raised until the residual passes."""
    if abs(x) > X_MAX:
        raise WindowExceeded(f"|x| = {abs(x)} beyond the direct-solve window {X_MAX}")
    if not cyclic_check(t):
        raise ValueError("Stokes data violate p + q + r + pqr = 0")
    jump = pii_jump(t, x, angles)
    if n is not None:
        return solve_normalized(jump, n, tol=tol, **kw)
    for count in NODE_LADDER[:-1]:
        sol = solve_normalized(jump, count, tol=tol, raise_on_residual=False)
        if sol.residual <= tol:
            return sol
    return solve_normalized(jump, NODE_LADDER[-1], tol=tol, **kw)


def extract_u(sol: RhSolution) -> complex:
    return complex(2j * sol.m1[0, 1])


def pii_u(t: StokesTriple, x: float, n: int | None = None, **kw) -> complex:
    return extract_u(solve_pii_rhp(t, x, n, **kw))


def pii_u_and_derivative(t: StokesTriple, x: float, h: float = 1e-3, n: int | None = None):
    """u(x) and u'(x) by central differences of RHP values."""
    u0 = pii_u(t, x, n)
    up = pii_u(t, x + h, n)
    um = pii_u(t, x - h, n)
    return u0, (up - um) / (2 * h)


# ---------------------------------------------------------------------------
# ODE oracles

def _rhs(x, y):
    return [y[1], x * y[0] + 2 * y[0] ** 3]


def _blowup(x, y):
    return 1e6 - abs(y[0])


_blowup.terminal = True


def pii_ode_continue(u0: float, u0p: float, x0: float, x1: float, xs=None, rtol: float = 1e-12,
                     atol: float = 1e-14):
    """Integrate u'' = xu + 2u³ from x0 to x1; returns the solve_ivp result (dense output)."""
    sol = solve_ivp(_rhs, (x0, x1), [u0, u0p], method="DOP853", rtol=rtol, atol=atol,
                    dense_output=True, events=_blowup, t_eval=xs)
    if sol.status == 1 or (sol.t_events[0].size > 0):
        raise BlowupDetected(f"|u| exceeded 1e6 near x = {sol.t[-1]:.4g}")
    if not sol.success:
        raise BlowupDetected(sol.message)
    return sol


def ablowitz_segur_nu(q: float) -> float:
    return -np.log(1 - q * q) / (2 * np.pi)


def asymptotics_minus(q: float, x):
    """Oscillatory x -> -∞ behaviour of the p = -q, r = 0 solution."""
    if not (-1 < q < 1) or q == 0:
        raise QOutOfRange(f"q = {q} must satisfy 0 < |q| < 1")
    x = np.asarray(x, dtype=float)
    nu = ablowitz_segur_nu(q)
    phi = -3 * nu * np.log(2) + np.imag(loggamma(1j * nu)) + np.pi / 2 * np.sign(q) - np.pi / 4
    s = -x
    return np.sqrt(2 * nu) * s ** -0.25 * np.cos(2.0 / 3.0 * s ** 1.5 - 1.5 * nu * np.log(s) + phi)


def asymptotics_plus(q: float, x):
    """x -> +∞ behaviour u ≈ q Ai(x)."""
    return q * np.array([ai_quadrature(float(xx)) for xx in np.atleast_1d(x)])


def connection_trajectory(q: float, x_seed: float = 4.0, x_end: float = -100.0, xs=None, n: int | None = None):
    """Seed (u, u') from RHP solves at x_seed and continue by the ODE."""
    t = StokesTriple.ablowitz_segur(q)
    u0, u0p = pii_u_and_derivative(t, x_seed, n=n)
    return pii_ode_continue(u0.real, u0p.real, x_seed, x_end, xs=xs)


# ---------------------------------------------------------------------------
# Hastings-McLeod and the Tracy-Widom distribution

HM_RIGHT = 10.0


def _hm_rhs(x, y):
    u, up = y[0], y[1]
    # y[2] = ∫_x^R u², y[3] = ∫_x^R s u² (accumulated while integrating leftwards)
    return [up, x * u + 2 * u ** 3, -u * u, -x * u * u]


def _hm_solution(left: float = -6.0):
    y0 = [ai_quadrature(HM_RIGHT), ai_prime_quadrature(HM_RIGHT), 0.0, 0.0]
    sol = solve_ivp(_hm_rhs, (HM_RIGHT, left), y0, method="DOP853", rtol=1e-13, atol=1e-16,
                    dense_output=True, events=_blowup)
    if sol.t_events[0].size > 0 or not sol.success:
        raise BlowupDetected("Hastings-McLeod integration left the separatrix")
    return sol


_HM_CACHE: dict = {}


def hastings_mcleod(xgrid):
    """(u, u') of the solution with u ~ Ai at +∞, integrated backwards from x = 10."""
    xgrid = np.asarray(xgrid, dtype=float)
    if xgrid.min() < -6 or xgrid.max() > HM_RIGHT:
        raise ValueError("Hastings-McLeod grid must lie in [-6, 10]")
    if "sol" not in _HM_CACHE:
        _HM_CACHE["sol"] = _hm_solution()
    y = _HM_CACHE["sol"].sol(xgrid)
    return y[0], y[1]


def tracy_widom_cdf(x):
    """F(x) = exp(-∫_x^∞ (s - x) u(s)² ds) for the Hastings-McLeod u."""
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if xa.min() < -5 or xa.max() > 4:
        raise ValueError("Tracy-Widom window is [-5, 4]")
    if "sol" not in _HM_CACHE:
        _HM_CACHE["sol"] = _hm_solution()
    if "tail" not in _HM_CACHE:
        s, w = np.polynomial.legendre.leggauss(40)
        ss = 4 * s + HM_RIGHT + 4
        a2 = np.array([ai_quadrature(v) for v in ss]) ** 2
        _HM_CACHE["tail"] = (float(np.sum(w * a2) * 4), float(np.sum(w * ss * a2) * 4))
    t0, t1 = _HM_CACHE["tail"]
    y = _HM_CACHE["sol"].sol(xa)
    i0, i1 = y[2] + t0, y[3] + t1
    F = np.exp(-(i1 - xa * i0))
    return F[0] if np.ndim(x) == 0 else F
