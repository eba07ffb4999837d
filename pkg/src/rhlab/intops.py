"""Integrable operators K(z, z') = Σ f_i(z) g_i(z') / (z - z') and their resolvents.

With Σ f_i g_i ≡ 0 on the contour, (1 - K)^{-1} = 1 + L where L is again
integrable with components F = m± f and G = (m±^{-1})^T g, m the normalized
solution for the jump v = I - 2πi f g^T.  Operators act by
(K h)(z) = ∫ K(z, z') h(z') dz' along the oriented contour.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .cauchy import _apply
from .contour import Contour, build_contour, segment
from .errors import DiagonalUndefined, ResidualAboveTolerance
from .rhsolver import JumpField, RhSolution, solve_normalized

ZERO_SUM_TOL = 1e-12

Components = Callable[[np.ndarray], np.ndarray]   # z (m,) -> (n, m)


@dataclass
class IntegrableKernel:
    contour: Contour
    f: Components
    g: Components
    fprime: Components | None = None
    zero_sum: bool = False
    label: str = ""

    @property
    def rank(self) -> int:
        return int(np.asarray(self.f(np.zeros(1, dtype=complex))).shape[0])


def _probe_points(contour: Contour, per_arc: int = 64) -> np.ndarray:
    pts = []
    for a in contour.arcs:
        t = np.linspace(-1, 1, per_arc) if a.is_straight else np.linspace(0, 2 * np.pi, per_arc, endpoint=False)
        pts.append(a.point(t) if a.is_straight else a.center + a.radius * np.exp(1j * t))
    return np.concatenate(pts)


def make_kernel(f: Components, g: Components, contour: Contour, fprime: Components | None = None,
                label: str = "") -> IntegrableKernel:
    """Wrap component functions; the zero-sum flag is measured on a probe grid."""
    z = _probe_points(contour)
    fz, gz = np.asarray(f(z)), np.asarray(g(z))
    scale = max(1.0, float(np.max(np.abs(fz)) * np.max(np.abs(gz))))
    zero_sum = bool(np.max(np.abs(np.sum(fz * gz, axis=0))) <= ZERO_SUM_TOL * scale)
    return IntegrableKernel(contour, f, g, fprime, zero_sum, label)


def kernel_eval(k: IntegrableKernel, z, zp) -> np.ndarray:
    """K(z, z') pointwise for broadcastable arrays; the diagonal uses Σ f_i'(z) g_i(z)."""
    z, zp = np.broadcast_arrays(np.asarray(z, dtype=complex), np.asarray(zp, dtype=complex))
    shape = z.shape
    z, zp = z.ravel(), zp.ravel()
    diag = np.abs(z - zp) < 1e-14 * (1 + np.abs(z))
    out = np.empty(z.size, dtype=complex)
    off = ~diag
    if off.any():
        out[off] = np.sum(k.f(z[off]) * k.g(zp[off]), axis=0) / (z[off] - zp[off])
    if diag.any():
        if not k.zero_sum:
            raise DiagonalUndefined("diagonal needs Σ f_i g_i = 0")
        if k.fprime is None:
            raise DiagonalUndefined("diagonal needs the derivatives f_i'")
        out[diag] = np.sum(k.fprime(z[diag]) * k.g(z[diag]), axis=0)
    return out.reshape(shape)


def sine_kernel(x: float, a: float = -1.0, b: float = 1.0) -> IntegrableKernel:
    """sin(x(z - z'))/(π(z - z')) on [a, b]: f = (e^{ixz}, e^{-ixz}), g = (e^{-ixz}, -e^{ixz})/(2πi)."""
    contour = build_contour([segment(a, b)])

    def f(z):
        z = np.asarray(z, dtype=complex)
        return np.stack([np.exp(1j * x * z), np.exp(-1j * x * z)])

    def g(z):
        z = np.asarray(z, dtype=complex)
        return np.stack([np.exp(-1j * x * z), -np.exp(1j * x * z)]) / (2j * np.pi)

    def fp(z):
        z = np.asarray(z, dtype=complex)
        return np.stack([1j * x * np.exp(1j * x * z), -1j * x * np.exp(-1j * x * z)])

    return make_kernel(f, g, contour, fp, label=f"sine x={x}")


# ---------------------------------------------------------------------------
# resolvent through the Riemann-Hilbert problem

def integrable_jump(k: IntegrableKernel) -> JumpField:
    def v(z, arc):
        fz, gz = np.asarray(k.f(z)), np.asarray(k.g(z))
        n = fz.shape[0]
        return np.eye(n)[None] - 2j * np.pi * np.einsum("im,jm->mij", fz, gz)

    return JumpField(k.contour, v, k.rank, unit_determinant=k.zero_sum, label=k.label)


@dataclass
class RhpResolvent:
    kernel: IntegrableKernel
    solution: RhSolution
    side_gap: float = 0.0

    def _m(self, arc: int, t):
        sol = self.solution
        mp = sol.plus_at(arc, t)
        mm = mp - sol.density_at(arc, t)
        dmp = _apply(sol.disc.plus_at(arc, t, derivative=True), sol.density)
        return mp, mm, dmp

    def _point(self, arc: int, t):
        a = self.kernel.contour.arcs[arc]
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return a.point(t) if a.is_straight else a.center + a.radius * np.exp(1j * t)

    def components(self, arc: int, t):
        """(z, F, G, F') at parameters t of an arc; F, G from the + side, checked against the - side."""
        z = self._point(arc, t)
        mp, mm, dmp = self._m(arc, t)
        fz = np.asarray(self.kernel.f(z)).T          # (m, n)
        gz = np.asarray(self.kernel.g(z)).T
        F = np.einsum("mij,mj->mi", mp, fz)
        Fm = np.einsum("mij,mj->mi", mm, fz)
        G = np.linalg.solve(np.swapaxes(mp, 1, 2), gz[..., None])[..., 0]
        Gm = np.linalg.solve(np.swapaxes(mm, 1, 2), gz[..., None])[..., 0]
        self.side_gap = max(self.side_gap, float(np.max(np.abs(F - Fm))), float(np.max(np.abs(G - Gm))))
        fpz = np.asarray(self.kernel.fprime(z)).T
        Fp = np.einsum("mij,mj->mi", dmp, fz) + np.einsum("mij,mj->mi", mp, fpz)
        return z, F, G, Fp

    def kernel_matrix(self, arc: int, t) -> np.ndarray:
        """L(z_i, z_j) on the points with parameters t; diagonal F'(z)·G(z)."""
        z, F, G, Fp = self.components(arc, t)
        num = F @ G.T
        dz = z[:, None] - z[None, :]
        np.fill_diagonal(dz, 1.0)
        L = num / dz
        np.fill_diagonal(L, np.sum(Fp * G, axis=1))
        return L

    def zero_sum_defect(self, arc: int, t) -> float:
        _, F, G, _ = self.components(arc, t)
        return float(np.max(np.abs(np.sum(F * G, axis=1))))


def resolvent_via_rhp(k: IntegrableKernel, counts=80, tol: float = 1e-8, side_tol: float = 1e-8) -> RhpResolvent:
    """Solve the normalized problem for v = I - 2πi f g^T; (1 - K)^{-1} = 1 + L."""
    if not k.zero_sum:
        raise DiagonalUndefined("only kernels with Σ f_i g_i = 0 are supported")
    sol = solve_normalized(integrable_jump(k), counts, tol=tol)
    res = RhpResolvent(k, sol)
    arc = 0
    a = k.contour.arcs[arc]
    t = np.linspace(-0.9, 0.9, 7) if a.is_straight else np.linspace(0.1, 6.0, 7)
    res.components(arc, t)
    if res.side_gap > side_tol:
        raise ResidualAboveTolerance(f"m+ and m- routes for F, G differ by {res.side_gap:.2e}")
    return res


# ---------------------------------------------------------------------------
# Nyström oracle

@dataclass
class NystromResult:
    params: np.ndarray      # reference parameters of the nodes (for comparison with the RHP side)
    nodes: np.ndarray
    weights: np.ndarray     # dz weights
    K: np.ndarray
    L: np.ndarray           # resolvent kernel: (1 - K)^{-1} = 1 + L
    det: complex


def nystrom_oracle(k: IntegrableKernel, m: int = 60) -> NystromResult:
    """Gauss-Legendre (segment) or trapezoid (circle) discretization of a one-arc kernel."""
    if len(k.contour.arcs) != 1:
        raise ValueError("the oracle handles a single segment or circle")
    a = k.contour.arcs[0]
    if a.is_straight:
        t, w = np.polynomial.legendre.leggauss(m)
        z = a.point(t)
        wz = w * (a.end - a.start) / 2
    else:
        t = 2 * np.pi * np.arange(m) / m
        z = a.center + a.radius * np.exp(1j * t)
        wz = a.orientation * 1j * (z - a.center) * 2 * np.pi / m
    K = kernel_eval(k, z[:, None], z[None, :])
    A = np.eye(m) - K * wz[None, :]
    L = np.linalg.solve(A, K)
    return NystromResult(t, z, wz, K, L, complex(np.linalg.det(A)))


def closure_defect(L: np.ndarray, K: np.ndarray, w: np.ndarray) -> float:
    """max |(1 + L)(1 - K) - 1| and the reversed product on a quadrature grid."""
    m = K.shape[0]
    P = (np.eye(m) + L * w[None, :]) @ (np.eye(m) - K * w[None, :])
    Q = (np.eye(m) - K * w[None, :]) @ (np.eye(m) + L * w[None, :])
    return float(max(np.max(np.abs(P - np.eye(m))), np.max(np.abs(Q - np.eye(m)))))
