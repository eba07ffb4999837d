"""Orthogonal polynomials on ℝ and their 2x2 Riemann-Hilbert characterization.

Y^{(n)}(z) = [[π_n, C(π_n ω)], [-2πi γ²_{n-1} π_{n-1}, C(-2πi γ²_{n-1} π_{n-1} ω)]]
has jump [[1, ω], [0, 1]] across ℝ and Y diag(z^{-n}, z^n) → I.  Consecutive
solutions are related by Y^{(n+1)} = (Az + B) Y^{(n)} with
A = diag(1, 0) and B = [[-a_n, h_n/(2πi)], [-2πi/h_n, 0]], h_n = ∫ π_n² ω.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

from .cauchy import Density, Discretization, _apply, cauchy_moments
from .contour import build_contour, segment
from .errors import DegreeOutOfRange, FitResidualTooLarge, IllConditioned, Mismatch

N_MAX = 20
H_AGREEMENT = 1e-6


@dataclass
class WeightSpec:
    func: Callable[[np.ndarray], np.ndarray]
    name: str = "weight"
    smooth: bool = True           # ω ∈ H¹(ℝ), needed for continuous boundary values
    span: float | None = None     # half-width outside which ω is negligible

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=float))

    def support(self, degree: int) -> float:
        """Half-width L with |x|^{2n+2} ω(x) below 1e-18 of its peak beyond L."""
        if self.span is not None:
            return self.span
        xs = np.linspace(0, 60, 6001)
        g = np.abs(self(xs)) * (1 + xs) ** (2 * degree + 2)
        g2 = np.abs(self(-xs)) * (1 + xs) ** (2 * degree + 2)
        g = np.maximum(g, g2)
        big = np.nonzero(g > 1e-18 * g.max())[0]
        return float(xs[big[-1]] + 0.5)

    def check_moments(self, degree: int, tol: float = 1e-10) -> np.ndarray:
        """∫|x|^m ω dx for m ≤ 2·degree, checked for stability under node doubling."""
        L = self.support(degree)
        m = np.arange(2 * degree + 1)
        prev = None
        for nodes in (200, 400, 800):
            x, w = _legendre(nodes, L)
            cur = (np.abs(x)[None, :] ** m[:, None] * (w * self(x))[None, :]).sum(axis=1)
            if prev is not None and np.max(np.abs(cur - prev) / np.abs(cur)) < tol:
                return cur
            prev = cur
        raise IllConditioned("moments did not settle under quadrature refinement")


def hermite_weight() -> WeightSpec:
    return WeightSpec(lambda x: np.exp(-x * x), "hermite")


def quartic_weight() -> WeightSpec:
    return WeightSpec(lambda x: np.exp(-x ** 4), "quartic")


def weight_from_samples(x, w, name: str = "sampled") -> WeightSpec:
    x = np.asarray(x, dtype=float)
    sp = CubicSpline(x, np.asarray(w, dtype=float))

    def f(s):
        s = np.asarray(s, dtype=float)
        return np.where((s < x[0]) | (s > x[-1]), 0.0, sp(np.clip(s, x[0], x[-1])))

    return WeightSpec(f, name, smooth=False, span=float(max(abs(x[0]), abs(x[-1]))))


BUILTIN_WEIGHTS = {"hermite": hermite_weight, "quartic": quartic_weight}


def _legendre(n: int, L: float):
    s, w = np.polynomial.legendre.leggauss(n)
    return L * s, L * w


# ---------------------------------------------------------------------------
# Stieltjes oracle

@dataclass
class MonicFamily:
    a: np.ndarray        # a_0..a_N
    beta: np.ndarray     # beta_n = h_n / h_{n-1}, beta_0 = 0
    h: np.ndarray        # h_n = ∫ π_n² ω
    weight: WeightSpec = field(repr=False)

    @property
    def N(self) -> int:
        return self.a.size - 1

    @property
    def gamma(self) -> np.ndarray:
        return 1 / np.sqrt(self.h)

    @property
    def b(self) -> np.ndarray:
        """Orthonormal off-diagonal b_n = γ_n/γ_{n+1} = sqrt(h_{n+1}/h_n), n = 0..N-1."""
        return np.sqrt(self.beta[1:])

    def evaluate(self, n: int, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        p_prev, p = np.zeros_like(z), np.ones_like(z)
        for k in range(n):
            p_prev, p = p, (z - self.a[k]) * p - self.beta[k] * p_prev
        return p

    def coefficients(self, n: int) -> np.ndarray:
        """Monomial coefficients of π_n, lowest degree first."""
        P = np.polynomial.Polynomial
        p_prev, p = P([0.0]), P([1.0])
        for k in range(n):
            p_prev, p = p, P([-self.a[k], 1.0]) * p - self.beta[k] * p_prev
        return p.coef


def gram_schmidt_monic(w: WeightSpec, N: int, nodes: int | None = None) -> MonicFamily:
    """Monic orthogonal family π_0..π_N by the Stieltjes procedure on a Gauss-Legendre rule.

    The rule covers [-L, L] where ω is negligible; its size is doubled until
    the coefficients agree to 1e-12.
    """
    if N > N_MAX:
        raise DegreeOutOfRange(f"N = {N} above {N_MAX}")
    L = w.support(N)
    prev = None
    for m in ([nodes] if nodes else [200, 400, 800]):
        x, q = _legendre(m, L)
        q = q * w(x)
        a, beta, h = _stieltjes(x, q, N)
        if prev is not None and np.max(np.abs(np.r_[a - prev[0], beta - prev[1]])) < 1e-12 * (1 + np.max(beta)):
            break
        prev = (a, beta)
    fam = MonicFamily(a, beta, h, w)
    res = orthogonality_residual(fam, x, q)
    if res > 1e-8:
        raise IllConditioned(f"orthogonality residual {res:.2e}")
    return fam


def _stieltjes(x, q, N):
    a = np.zeros(N + 1)
    beta = np.zeros(N + 1)
    h = np.zeros(N + 1)
    p_prev, p = np.zeros_like(x), np.ones_like(x)
    for n in range(N + 1):
        h[n] = np.sum(q * p * p)
        a[n] = np.sum(q * x * p * p) / h[n]
        if n > 0:
            beta[n] = h[n] / h[n - 1]
        p_prev, p = p, (x - a[n]) * p - beta[n] * p_prev
    return a, beta, h


def orthogonality_residual(fam: MonicFamily, x=None, q=None) -> float:
    """max |∫π_nπ_mω|/sqrt(h_n h_m) over n ≠ m."""
    if x is None:
        x, q = _legendre(800, fam.weight.support(fam.N))
        q = q * fam.weight(x)
    P = np.array([fam.evaluate(n, x).real for n in range(fam.N + 1)])
    G = (P * q) @ P.T
    d = np.sqrt(np.diag(G))
    G = G / np.outer(d, d)
    return float(np.max(np.abs(G - np.eye(fam.N + 1))))


# ---------------------------------------------------------------------------
# the FIK matrix

@dataclass
class FikSolution:
    n: int
    family: MonicFamily
    gamma_prev_sq: float       # γ²_{n-1}
    disc: Discretization
    top: Density               # π_n ω on the truncated line
    bottom: Density            # -2πi γ²_{n-1} π_{n-1} ω

    def _polys(self, z):
        pn = self.family.evaluate(self.n, z)
        pm = -2j * np.pi * self.gamma_prev_sq * self.family.evaluate(self.n - 1, z)
        return pn, pm

    def __call__(self, z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        C = self.disc.cauchy_at(z)
        pn, pm = self._polys(z)
        out = np.empty((z.size, 2, 2), dtype=complex)
        out[:, 0, 0], out[:, 1, 0] = pn, pm
        out[:, 0, 1] = _apply(C, self.top.values)
        out[:, 1, 1] = _apply(C, self.bottom.values)
        return out

    def boundary(self, t):
        """(Y+, Y-) at reference parameters t of the truncated real segment."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        x = self.disc.contour.arcs[0].point(t)
        P = self.disc.plus_at(0, t)
        I = self.disc.interp_matrix(0, t)
        pn, pm = self._polys(x)
        yp = np.empty((t.size, 2, 2), dtype=complex)
        yp[:, 0, 0], yp[:, 1, 0] = pn, pm
        yp[:, 0, 1] = _apply(P, self.top.values)
        yp[:, 1, 1] = _apply(P, self.bottom.values)
        ym = yp.copy()
        ym[:, 0, 1] -= _apply(I, self.top.values)
        ym[:, 1, 1] -= _apply(I, self.bottom.values)
        return x, yp, ym


def fik_build(w: WeightSpec, n: int, family: MonicFamily | None = None, nodes: int = 240,
              gamma_prev_sq: float | None = None) -> FikSolution:
    if n < 1:
        raise DegreeOutOfRange("n = 0 leaves the second row undefined")
    fam = family if family is not None else gram_schmidt_monic(w, n)
    if fam.N < n:
        raise DegreeOutOfRange(f"family only reaches degree {fam.N}")
    L = w.support(fam.N)
    disc = Discretization(build_contour([segment(-L, L)]), nodes)
    x = disc.nodes.real
    g2 = 1 / fam.h[n - 1] if gamma_prev_sq is None else gamma_prev_sq
    top = Density(disc, (fam.evaluate(n, x) * w(x)).astype(complex))
    bottom = Density(disc, (-2j * np.pi * g2 * fam.evaluate(n - 1, x) * w(x)).astype(complex))
    return FikSolution(n, fam, g2, disc, top, bottom)


def fik_residual(Y: FikSolution, w: WeightSpec | None = None) -> tuple[float, float]:
    """(jump residual, normalization residual).

    The jump residual is sup ‖Y+ - Y-[[1, ω], [0, 1]]‖ at points between the
    collocation nodes.  The normalization residual measures the conditions that
    make Y diag(z^{-n}, z^n) - I = O(1/z): the moments ∫ s^k π_n ω (k < n) and
    ∫ s^k π_{n-1} ω (k < n-1) must vanish, relative to ∫|s^k π ω|, and
    γ²_{n-1} ∫ s^{n-1} π_{n-1} ω must equal 1.
    """
    w = Y.family.weight if w is None else w
    n = Y.n
    N = Y.disc.counts[0]
    t = -np.cos(np.pi * (np.arange(N - 1) + 0.5) / (N - 1))
    x, yp, ym = Y.boundary(t)
    v = np.zeros((x.size, 2, 2))
    v[:, 0, 0] = v[:, 1, 1] = 1
    v[:, 0, 1] = w(x.real)
    jump = float(np.max(np.abs(yp - ym @ v)))
    mt = cauchy_moments(Y.top, n)
    mb = cauchy_moments(Y.bottom, n)
    scale_t = np.array([_abs_moment(Y.top, k) for k in range(n)])
    scale_b = np.array([_abs_moment(Y.bottom, k) for k in range(n)])
    r_top = np.max(np.abs(mt) / scale_t)
    r_bot = np.max(np.abs(mb[:n - 1]) / scale_b[:n - 1]) if n > 1 else 0.0
    # Y22 z^n -> -(1/2πi) ∫ s^{n-1} (-2πi γ² π_{n-1} ω) = γ² ∫ s^{n-1} π_{n-1} ω
    lead = -mb[n - 1] / (2j * np.pi)
    norm = float(max(r_top, r_bot, abs(lead - 1)))
    return jump, norm


def _abs_moment(d: Density, k: int) -> float:
    w = np.abs(d.disc.weights())
    s = np.abs(d.disc.nodes)
    return float(np.sum(w * s ** k * np.abs(d.values)))


def det_check(Y: FikSolution, z) -> float:
    return float(np.max(np.abs(np.linalg.det(Y(z)) - 1)))


# ---------------------------------------------------------------------------
# recurrence

PROBES = 5 * np.exp(1j * np.array([np.pi / 4, 3 * np.pi / 4, 5 * np.pi / 4]))
HELD_OUT = 5 * np.exp(1j * 7 * np.pi / 4)


@dataclass
class Recurrence:
    n: int
    A: np.ndarray
    B: np.ndarray
    fit_residual: float


def recurrence_from_rhp(Yn: FikSolution, Yn1: FikSolution, tol: float = 1e-8) -> Recurrence:
    """Fit Y^{(n+1)}(z) Y^{(n)}(z)^{-1} = Az + B at three probes; test at a held-out fourth."""
    R = Yn1(PROBES) @ np.linalg.inv(Yn(PROBES))
    V = np.stack([PROBES, np.ones_like(PROBES)], axis=1)
    coef, *_ = np.linalg.lstsq(V, R.reshape(3, 4), rcond=None)
    A, B = coef[0].reshape(2, 2), coef[1].reshape(2, 2)
    Rh = Yn1(HELD_OUT)[0] @ np.linalg.inv(Yn(HELD_OUT)[0])
    res = float(np.max(np.abs(Rh - (A * HELD_OUT + B))) / max(1.0, np.max(np.abs(Rh))))
    if res > tol:
        raise FitResidualTooLarge(f"held-out residual {res:.2e}")
    return Recurrence(Yn.n, A, B, res)


@dataclass
class ThreeTerm:
    a: np.ndarray       # a_n
    b: np.ndarray       # b_n = sqrt(h_{n+1}/h_n)
    h: np.ndarray


def three_term_coeffs(source, first: FikSolution | None = None, check: MonicFamily | None = None,
                      tol: float = 1e-8) -> ThreeTerm:
    """(a_n, b_n) of z P_n = b_n P_{n+1} + a_n P_n + b_{n-1} P_{n-1}, b_{-1} = 0.

    ``source`` is a MonicFamily or a list of consecutive Recurrence fits
    starting at n = 1.  In the latter case ``first`` = Y^{(1)} supplies
    a_0 = z - Y11(z) and h_0 = -2πi / Y21.  With ``check`` the two routes are
    compared.
    """
    if isinstance(source, MonicFamily):
        out = ThreeTerm(source.a.copy(), source.b.copy(), source.h.copy())
    else:
        recs = sorted(source, key=lambda r: r.n)
        a = [-rec.B[0, 0] for rec in recs]
        # B21 only involves the polynomial column and is the better conditioned
        # source; B12 rests on tiny Cauchy transforms at the probes
        h = [-2j * np.pi / rec.B[1, 0] for rec in recs]
        h_alt = [2j * np.pi * rec.B[0, 1] for rec in recs]
        if np.max(np.abs(np.array(h) - np.array(h_alt)) / np.abs(h)) > H_AGREEMENT:
            raise Mismatch("B12 and B21 disagree on h_n")
        if first is not None:
            z0 = np.array([2.0 + 1.0j])
            y = first(z0)[0]
            a = [z0[0] - y[0, 0]] + a
            h = [-2j * np.pi / y[1, 0]] + h
        h = np.real_if_close(np.array(h), tol=1e6)
        a = np.real_if_close(np.array(a), tol=1e6)
        b = np.sqrt(np.real(h[1:] / h[:-1]))
        out = ThreeTerm(np.asarray(a), b, np.asarray(h))
    if check is not None and not isinstance(source, MonicFamily):
        off = 0 if first is not None else 1
        m = out.a.size
        da = np.max(np.abs(out.a - check.a[off:off + m]))
        db = np.max(np.abs(out.b - check.b[off:off + out.b.size]))
        if max(da, db) > tol:
            raise Mismatch(f"recurrence route differs from oracle by {max(da, db):.2e}")
    return out


def recurrence_chain(w: WeightSpec, nmax: int, nodes: int = 240):
    """Y^{(1)}..Y^{(nmax+1)}, the fitted recurrences and their three-term coefficients."""
    fam = gram_schmidt_monic(w, nmax + 1)
    Ys = [fik_build(w, n, fam, nodes) for n in range(1, nmax + 2)]
    recs = [recurrence_from_rhp(Ys[i], Ys[i + 1]) for i in range(nmax)]
    return fam, Ys, recs, three_term_coeffs(recs, first=Ys[0], check=fam)
