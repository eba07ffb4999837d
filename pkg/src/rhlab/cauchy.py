"""Cauchy and Hilbert transforms of densities on composed contours.

Conventions: Cf(z) = (1/2πi) ∫ f(s)/(s - z) ds along the oriented contour;
C+ and C- are the boundary values from the left and right of each arc,
C- := C+ - Id, and Hf = -i (C+f + C-f).

Straight arcs carry a first-kind Chebyshev interpolant.  For the transform
of T_k on [-1, 1] we use the closed form

    ∫ T_k(s)/(s - w) ds = T_k(w) log((w - 1)/(w + 1)) + P_k(w),

where P_k = 2 U_{k-1} + Σ_{j even ≥ 2} 4/(1 - j²) U_{k-1-j} comes from the
divided difference (T_k(s) - T_k(w))/(s - w) = 2 Σ_j T_j(s) U_{k-1-j}(w) - U_{k-1}(w).
Far from the arc that formula cancels badly, so there the (exactly
polynomial) density is integrated against 1/(s - w) with enough
Gauss-Legendre nodes to resolve the pole.  Full circles carry Laurent modes
and C+ / C- are the analytic / coanalytic projections.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .contour import Arc, Contour, chebyshev_points, collocation_nodes
from .errors import GridTooCoarse, PointOnContour, UnsupportedBasis

PROXIMITY = 1e-8
_LOG_BRANCH_LIMIT = np.log(1e4)
_TWO_PI_I = 2j * np.pi


# ---------------------------------------------------------------------------
# Chebyshev machinery on the reference interval

@lru_cache(maxsize=64)
def _vals_to_coeffs(n: int) -> np.ndarray:
    x = chebyshev_points(n)
    V = np.cos(np.outer(np.arccos(x), np.arange(n)))
    Vinv = (2.0 / n) * V.T
    Vinv[0] /= 2
    return Vinv


def cheb_coeffs(values: np.ndarray) -> np.ndarray:
    """Chebyshev coefficients of the interpolant through first-kind points."""
    n = values.shape[0]
    return np.tensordot(_vals_to_coeffs(n), values, axes=(1, 0))


def _chebT(w: np.ndarray, n: int) -> np.ndarray:
    T = np.empty(w.shape + (n,), dtype=complex)
    T[..., 0] = 1
    if n > 1:
        T[..., 1] = w
    for k in range(2, n):
        T[..., k] = 2 * w * T[..., k - 1] - T[..., k - 2]
    return T


def _chebU(w: np.ndarray, n: int) -> np.ndarray:
    U = np.empty(w.shape + (n,), dtype=complex)
    U[..., 0] = 1
    if n > 1:
        U[..., 1] = 2 * w
    for k in range(2, n):
        U[..., k] = 2 * w * U[..., k - 1] - U[..., k - 2]
    return U


@lru_cache(maxsize=64)
def _divided_difference_weights(n: int) -> np.ndarray:
    # D[m, k] = d_{k-1-m}, so P_k = Σ_m U_m D[m, k]
    d = np.zeros(n)
    d[0] = 2.0
    j = np.arange(2, n, 2)
    d[j] = 4.0 / (1.0 - j.astype(float) ** 2)
    D = np.zeros((n, n))
    for k in range(1, n):
        D[:k, k] = d[k - 1::-1][:k]
    return D


@lru_cache(maxsize=64)
def _moments(n: int) -> np.ndarray:
    """∫_{-1}^{1} T_k(s) ds."""
    k = np.arange(n)
    M = np.zeros(n)
    even = k % 2 == 0
    M[even] = 2.0 / (1.0 - k[even].astype(float) ** 2)
    return M


@lru_cache(maxsize=32)
def _gauss_legendre(N: int):
    return np.polynomial.legendre.leggauss(N)


@lru_cache(maxsize=64)
def _derivative_coeff_matrix(n: int) -> np.ndarray:
    """Maps Chebyshev coefficients of f to those of f'."""
    D = np.zeros((n, n))
    for k in range(1, n):
        for j in range(k - 1, -1, -2):
            D[j, k] = 2 * k
        if (k - 1) % 2 == 0:
            D[0, k] = k
    return D


def bernstein_rho(w) -> np.ndarray:
    w = np.asarray(w, dtype=complex)
    s = w + np.sqrt(w - 1) * np.sqrt(w + 1)
    r = np.abs(s)
    return np.maximum(r, 1 / np.maximum(r, 1e-300))


def cauchy_T(w, n: int, plus_on_cut: bool = False) -> np.ndarray:
    """Matrix (len(w), n) whose columns are C[T_k](w) on [-1, 1].

    With ``plus_on_cut`` the points are real parameters in (-1, 1) and the
    (+) boundary value (from above) is returned.
    """
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    out = np.empty((w.size, n), dtype=complex)
    if plus_on_cut:
        near = np.ones(w.size, dtype=bool)
    else:
        near = n * np.log(bernstein_rho(w)) < _LOG_BRANCH_LIMIT
    if near.any():
        wn = w[near]
        T = _chebT(wn, n)
        U = _chebU(wn, n)
        P = U @ _divided_difference_weights(n)
        if plus_on_cut:
            x = wn.real
            ell = np.log((1 - x) / (1 + x)) + 1j * np.pi
        else:
            ell = np.log((wn - 1) / (wn + 1))
        out[near] = (T * ell[:, None] + P) / _TWO_PI_I
    far = ~near
    if far.any():
        wf = w[far]
        lr = np.log(bernstein_rho(wf)).min()
        N = int(np.ceil((n + 42.0 / lr) / 2)) + 4
        s, wt = _gauss_legendre(N)
        Ts = _chebT(s.astype(complex), n)
        kern = wt[None, :] / (s[None, :] - wf[:, None])
        out[far] = kern @ Ts / _TWO_PI_I
    return out


def cauchy_T_derivative(w, n: int, plus_on_cut: bool = False) -> np.ndarray:
    """d/dw of C[T_k](w); uses C[f]' = C[f'] - (1/2πi)[f(1)/(1-w) + f(-1)/(1+w)]."""
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    Cd = cauchy_T(w, n, plus_on_cut) @ _derivative_coeff_matrix(n)
    k = np.arange(n)
    f1 = np.ones(n)
    fm1 = (-1.0) ** k
    bnd = (f1[None, :] / (1 - w)[:, None] + fm1[None, :] / (1 + w)[:, None]) / _TWO_PI_I
    return Cd - bnd


# ---------------------------------------------------------------------------
# per-contour discretization

def _distance_to_arc(arc: Arc, z: np.ndarray) -> np.ndarray:
    if arc.is_straight:
        t = np.clip(((z - arc.start) * np.conj(arc.end - arc.start)).real
                    / abs(arc.end - arc.start) ** 2, 0, 1)
        return np.abs(z - (arc.start + t * (arc.end - arc.start)))
    if arc.kind == "circle":
        return np.abs(np.abs(z - arc.center) - arc.radius)
    raise UnsupportedBasis("partial circular arcs have no Cauchy rule here")


class Discretization:
    """Collocation layout of a contour: nodes per arc and the transform matrices.

    ``counts`` gives the node count per arc (an int applies to every arc).
    """

    def __init__(self, contour: Contour, counts):
        self.contour = contour
        if np.isscalar(counts):
            counts = [int(counts)] * len(contour.arcs)
        self.counts = tuple(int(c) for c in counts)
        for a in contour.arcs:
            if a.kind == "arc":
                raise UnsupportedBasis("partial circular arcs have no Cauchy rule here")
        self.offsets = np.concatenate([[0], np.cumsum(self.counts)])
        self.nodes = np.concatenate([collocation_nodes(a, n) for a, n in zip(contour.arcs, self.counts)])
        self._cplus = None
        self._weights = None

    @property
    def size(self) -> int:
        return int(self.offsets[-1])

    def arc_slice(self, k: int) -> slice:
        return slice(int(self.offsets[k]), int(self.offsets[k + 1]))

    def arc_of_node(self) -> np.ndarray:
        return np.repeat(np.arange(len(self.counts)), self.counts)

    # -- single-arc building blocks (values -> values) ---------------------
    def _arc_off(self, k: int, z: np.ndarray, derivative: bool = False) -> np.ndarray:
        arc, n = self.contour.arcs[k], self.counts[k]
        if arc.is_straight:
            w = arc.to_reference(z)
            if derivative:
                M = cauchy_T_derivative(w, n) / ((arc.end - arc.start) / 2)
            else:
                M = cauchy_T(w, n)
            return M @ _vals_to_coeffs(n)
        zeta = (z - arc.center) / arc.radius
        kk = _circle_modes(n)
        inside = np.abs(zeta) < 1
        E = np.zeros((z.size, n), dtype=complex)
        for sel, keep in ((inside, kk >= 0), (~inside, kk < 0)):
            if not sel.any():
                continue
            zs = zeta[sel][:, None]
            kp = kk[keep][None, :].astype(float)
            if derivative:
                vals = kp * zs ** (kp - 1.0) / arc.radius
            else:
                vals = zs ** kp
            E[np.ix_(sel, keep)] = vals
        sign = np.where(inside, 1.0, -1.0)[:, None] * arc.orientation
        return sign * (E @ _fourier_matrix(n))

    def _arc_plus_on(self, k: int, t: np.ndarray, derivative: bool = False) -> np.ndarray:
        """C+ of arc k's own density at reference parameters t on that arc."""
        arc, n = self.contour.arcs[k], self.counts[k]
        if arc.is_straight:
            if derivative:
                M = cauchy_T_derivative(t, n, plus_on_cut=True) / ((arc.end - arc.start) / 2)
            else:
                M = cauchy_T(t, n, plus_on_cut=True)
            return M @ _vals_to_coeffs(n)
        # full circle: t is an angle in [0, 2π)
        kk = _circle_modes(n)
        zeta = np.exp(1j * np.asarray(t, dtype=float))[:, None]
        keep = kk >= 0 if arc.orientation > 0 else kk < 0
        kf = kk[None, :].astype(float)
        if derivative:
            vals = kf * zeta ** (kf - 1.0) / arc.radius
        else:
            vals = zeta ** kf
        vals = np.where(keep[None, :], vals, 0)
        return vals @ _fourier_matrix(n)

    def interp_matrix(self, k: int, t) -> np.ndarray:
        """Values at arc k's nodes -> interpolant at parameters t (angles for circles)."""
        arc, n = self.contour.arcs[k], self.counts[k]
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if arc.is_straight:
            return _chebT(t.astype(complex), n).real @ _vals_to_coeffs(n)
        kk = _circle_modes(n)
        return np.exp(1j * np.outer(t, kk)) @ _fourier_matrix(n)

    def derivative_matrix(self, k: int) -> np.ndarray:
        """d/dz of the interpolant on arc k, evaluated at its nodes."""
        arc, n = self.contour.arcs[k], self.counts[k]
        if arc.is_straight:
            x = chebyshev_points(n)
            Tn = _chebT(x.astype(complex), n).real
            return (Tn @ _derivative_coeff_matrix(n) @ _vals_to_coeffs(n)) / ((arc.end - arc.start) / 2)
        kk = _circle_modes(n)
        th = 2 * np.pi * np.arange(n) / n
        z = np.exp(1j * th)
        dtheta = np.exp(1j * np.outer(th, kk)) * (1j * kk)[None, :] @ _fourier_matrix(n)
        return dtheta / (1j * arc.radius * z)[:, None]

    # -- assembled operators ---------------------------------------------
    def cauchy_plus(self) -> np.ndarray:
        """N x N matrix: scalar node values -> C+ values at every node."""
        if self._cplus is None:
            N = self.size
            C = np.empty((N, N), dtype=complex)
            for k, arc in enumerate(self.contour.arcs):
                cols = self.arc_slice(k)
                for j in range(len(self.contour.arcs)):
                    rows = self.arc_slice(j)
                    if j == k:
                        n = self.counts[k]
                        t = chebyshev_points(n) if arc.is_straight else 2 * np.pi * np.arange(n) / n
                        C[rows, cols] = self._arc_plus_on(k, t)
                    else:
                        C[rows, cols] = self._arc_off(k, self.nodes[rows])
            self._cplus = C
        return self._cplus

    def cauchy_minus(self) -> np.ndarray:
        return self.cauchy_plus() - np.eye(self.size)

    def check_distance(self, z: np.ndarray) -> None:
        for a in self.contour.arcs:
            d = _distance_to_arc(a, z)
            if np.any(d < PROXIMITY * a.length):
                raise PointOnContour("evaluation point lies on the contour; use boundary values")

    def cauchy_at(self, z, derivative: bool = False, check: bool = True) -> np.ndarray:
        """Matrix mapping node values to Cf(z) at off-contour points."""
        z = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
        if check:
            self.check_distance(z)
        return np.hstack([self._arc_off(k, z, derivative) for k in range(len(self.contour.arcs))])

    def plus_at(self, k: int, t, derivative: bool = False) -> np.ndarray:
        """Matrix mapping node values to C+f at parameters t on arc k."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        z = self.contour.arcs[k].point(t) if self.contour.arcs[k].is_straight else \
            self.contour.arcs[k].center + self.contour.arcs[k].radius * np.exp(1j * t)
        blocks = []
        for j in range(len(self.contour.arcs)):
            if j == k:
                blocks.append(self._arc_plus_on(k, t, derivative))
            else:
                blocks.append(self._arc_off(j, np.atleast_1d(z), derivative))
        return np.hstack(blocks)

    def weights(self) -> np.ndarray:
        """Quadrature weights for ∫ f(s) ds along the oriented contour."""
        if self._weights is None:
            out = []
            for arc, n in zip(self.contour.arcs, self.counts):
                if arc.is_straight:
                    w = _moments(n) @ _vals_to_coeffs(n) * (arc.end - arc.start) / 2
                else:
                    th = 2 * np.pi * np.arange(n) / n
                    w = arc.orientation * 1j * arc.radius * np.exp(1j * th) * 2 * np.pi / n
                out.append(np.asarray(w, dtype=complex))
            self._weights = np.concatenate(out)
        return self._weights


@lru_cache(maxsize=64)
def _circle_modes(n: int) -> np.ndarray:
    return np.fft.fftfreq(n, 1.0 / n).astype(int)


@lru_cache(maxsize=64)
def _fourier_matrix(n: int) -> np.ndarray:
    """Values at equispaced angles -> Laurent coefficients (order of _circle_modes)."""
    kk = _circle_modes(n)
    th = 2 * np.pi * np.arange(n) / n
    return np.exp(-1j * np.outer(kk, th)) / n


# ---------------------------------------------------------------------------
# densities and the public transform operations

@dataclass
class Density:
    """Node values of a scalar, vector or matrix function on a discretized contour.

    ``values`` has shape (N, *value_shape) with rows ordered arc by arc.
    """

    disc: Discretization
    values: np.ndarray

    def block(self, k: int) -> np.ndarray:
        return self.values[self.disc.arc_slice(k)]

    def coefficients(self, k: int) -> np.ndarray:
        arc = self.disc.contour.arcs[k]
        v = self.block(k)
        if arc.is_straight:
            return cheb_coeffs(v)
        return np.tensordot(_fourier_matrix(v.shape[0]), v, axes=(1, 0))


def density_from_function(contour: Contour, counts, f) -> Density:
    disc = counts if isinstance(counts, Discretization) else Discretization(contour, counts)
    vals = np.asarray(f(disc.nodes))
    return Density(disc, vals.astype(complex))


def _apply(M: np.ndarray, values: np.ndarray) -> np.ndarray:
    return np.tensordot(M, values, axes=(1, 0))


def cauchy_off(density: Density, z):
    """Cf(z) for z off the contour (scalar or array of points)."""
    z_arr = np.atleast_1d(np.asarray(z, dtype=complex))
    out = _apply(density.disc.cauchy_at(z_arr), density.values)
    return out[0] if np.ndim(z) == 0 else out


def cauchy_boundary(density: Density, side: str = "plus") -> Density:
    """C+f or C-f at the nodes; C- is C+ minus the identity."""
    plus = _apply(density.disc.cauchy_plus(), density.values)
    if side == "plus":
        return Density(density.disc, plus)
    if side == "minus":
        return Density(density.disc, plus - density.values)
    raise ValueError("side must be 'plus' or 'minus'")


def hilbert(density: Density) -> Density:
    plus = cauchy_boundary(density, "plus").values
    return Density(density.disc, -1j * (2 * plus - density.values))


def cauchy_moments(density: Density, kmax: int) -> np.ndarray:
    """∫ f(s) s^k ds for k = 0..kmax-1; Cf(z) = -(1/2πi) Σ_k moment_k z^{-k-1} at infinity."""
    w = density.disc.weights()
    s = density.disc.nodes
    powers = s[None, :] ** np.arange(kmax)[:, None]
    return _apply(powers * w[None, :], density.values)


def line_fourier_projection(samples, tail_fraction: float = 0.125, tol: float = 1e-8):
    """C+f on a uniform real grid via the DFT: keep positive frequencies, halve the zero mode."""
    f = np.asarray(samples, dtype=complex)
    F = np.fft.fft(f)
    n = f.size
    k = np.fft.fftfreq(n)
    total = np.sum(np.abs(F))
    tail = np.sum(np.abs(F[np.abs(k) >= 0.5 - tail_fraction / 2]))
    if total > 0 and tail > tol * total:
        raise GridTooCoarse(f"spectral tail holds {tail / total:.2e} of the mass")
    mult = np.where(k > 0, 1.0, 0.0)
    mult[0] = 0.5
    return np.fft.ifft(F * mult)


def line_hilbert(samples) -> np.ndarray:
    """Hf on a uniform grid from the DFT projection: Hf = -i(2C+f - f)."""
    f = np.asarray(samples, dtype=complex)
    return -1j * (2 * line_fourier_projection(f) - f)


def ray_operator_norm(theta: float, n: int = 1200, span: float = 120.0) -> float:
    """Estimate ‖C_θ‖ on L²(0, ∞), C_θ f(r) = ∫_0^∞ f(s)/(s - e^{iθ} r) ds/(2πi).

    Under s = e^v the operator is a convolution on the line with kernel
    k(w) = 1/(2πi (e^{-w/2} - e^{iθ} e^{w/2})); the norm is estimated by the
    largest singular value of its midpoint discretization on a window.
    """
    u = np.linspace(-span / 2, span / 2, n)
    du = u[1] - u[0]
    w = u[:, None] - u[None, :]
    with np.errstate(over="ignore"):
        K = du / (_TWO_PI_I * (np.exp(-w / 2) - np.exp(1j * theta) * np.exp(w / 2)))
    K[~np.isfinite(K)] = 0
    return float(np.linalg.norm(K, 2))


def ray_norm_bound(theta: float) -> float:
    g = theta / (2 * np.pi)
    return float(g ** g * (1 - g) ** (1 - g))


def holder_half_estimate(density: Density, z0: complex, direction: complex, steps) -> float:
    """max |Cf(z'') - Cf(z')| / |z'' - z'|^{1/2} over points z0 + h d, h in ``steps``.

    z0 should sit just off the contour and d point non-tangentially away from it.
    """
    steps = np.sort(np.asarray(steps, dtype=float))
    d = direction / abs(direction)
    vals = cauchy_off(density, z0 + steps * d)
    if vals.ndim > 1:
        vals = vals.reshape(vals.shape[0], -1)
        diff = np.max(np.abs(vals[:, None, :] - vals[None, :, :]), axis=-1)
    else:
        diff = np.abs(vals[:, None] - vals[None, :])
    gap = np.abs(steps[:, None] - steps[None, :])
    mask = gap > 0
    return float(np.max(diff[mask] / np.sqrt(gap[mask])))
