"""Toeplitz determinants of positive symbols on the unit circle and the Szegő limit.

The symbol is φ = e^L with L(z) = Σ L_k z^k.  D_n = det(φ_{i-j})_{i,j=0..n} is
computed three ways: directly, as det(1 - K_n) for the finite-rank integrable
operator with f = (z^{n+1}, 1), g = (z^{-n-1}(1-φ), -(1-φ))/2πi, and from the
resolvent of K_{t,n} (symbol φ_t = 1 - t + tφ) through
log D_n = -∫_0^1 tr L_t dt/t,  tr L_t = ∮ Σ_j F'_{t,j} G_{t,j} dz  (counterclockwise).

The lens deformation moves the oscillatory factors of
v = L·diag(φ, φ⁻¹)·U onto the circles |z| = 1/ρ and |z| = ρ, where they are
within O(ρ^{n+1}) of the identity.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg as sla

from .contour import build_contour, circle
from .errors import NonzeroWinding, NotPositive, SymbolNotAnalytic
from .intops import IntegrableKernel, kernel_eval, make_kernel, resolvent_via_rhp
from .rhsolver import (JumpField, RhSolution, ScalarSolution, det_probe, solve_normalized,
                       solve_scalar_closed_form, winding_number_samples)

CONSISTENCY_TOL = 1e-10
ALIAS_TOL = 1e-12
MIN_GRID = 64
MAX_GRID = 1 << 16


def _grid(N: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(N) / N)


def _fft_coeffs(samples: np.ndarray, K: int) -> np.ndarray:
    """Fourier coefficients c_k, k = -K..K, of samples on the N-point unit-circle grid."""
    N = samples.size
    c = np.fft.fft(samples) / N
    return np.concatenate([c[N - K:], c[:K + 1]])


@dataclass
class SymbolData:
    """Positive symbol φ = e^L on the unit circle.

    ``logcoeffs`` holds L_k for k = -M..M, ``phi`` holds φ_k for k = -K..K with
    K = grid/2 - 1.  ``r_inner`` is the inner radius of the analyticity
    annulus (r_a, 1/r_a); 0 for a Laurent polynomial L.
    """

    logcoeffs: np.ndarray
    phi: np.ndarray
    grid: int
    r_inner: float
    min_phi: float
    alias_defect: float
    consistency: float
    label: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def M(self) -> int:
        return (self.logcoeffs.size - 1) // 2

    @property
    def K(self) -> int:
        return (self.phi.size - 1) // 2

    def L_coeff(self, k: int) -> complex:
        return complex(self.logcoeffs[k + self.M]) if abs(k) <= self.M else 0.0

    def phi_coeffs(self, kmax: int) -> np.ndarray:
        """φ_k for k = -kmax..kmax (regridding when kmax exceeds the stored range)."""
        if kmax <= self.K:
            return self.phi[self.K - kmax:self.K + kmax + 1]
        if kmax not in self._cache:
            N = MIN_GRID
            while N // 2 - 1 < kmax:
                N *= 2
            self._cache[kmax] = _fft_coeffs(self.phi_at(_grid(N)), kmax)
        return self._cache[kmax]

    def L_at(self, z) -> np.ndarray:
        """L(z) by Laurent summation; valid throughout the analyticity annulus."""
        z = np.asarray(z, dtype=complex)
        k = np.arange(-self.M, self.M + 1)
        return np.sum(self.logcoeffs[:, None] * z.ravel()[None, :] ** k[:, None], axis=0).reshape(z.shape)

    def phi_at(self, z) -> np.ndarray:
        return np.exp(self.L_at(z))

    def phi_t_at(self, z, t: float = 1.0) -> np.ndarray:
        return 1 - t + t * self.phi_at(z)


def _convolution_defect(Lk: np.ndarray, phik: np.ndarray) -> float:
    """max_k |k φ_k - Σ_j j L_j φ_{k-j}|, the coefficient form of zφ' = zL'φ."""
    M, K = (Lk.size - 1) // 2, (phik.size - 1) // 2
    j = np.arange(-M, M + 1)
    rhs = np.convolve(j * Lk, phik)            # indices -(M+K)..(M+K)
    k = np.arange(-K, K + 1)
    lhs = k * phik
    inner = slice(M, M + 2 * K + 1)
    keep = np.abs(k) <= K - M                  # away from the truncated edge
    return float(np.max(np.abs(lhs[keep] - rhs[inner][keep]))) if keep.any() else 0.0


def symbol_from_logcoeffs(Lk, grid: int | None = None, r_inner: float = 0.0, label: str = "") -> SymbolData:
    """Symbol from L_k, k = -M..M (a dict {k: L_k}, or a length-(2M+1) array).

    For real L the coefficients must satisfy L_{-k} = conj(L_k); a dict with only
    k ≥ 0 entries is completed that way.  φ_k come from an FFT of e^{L} on a
    grid of at least 8M points, doubled until the coefficients settle.
    """
    if isinstance(Lk, dict):
        M = max([abs(int(k)) for k in Lk] + [0])
        arr = np.zeros(2 * M + 1, dtype=complex)
        for k, val in Lk.items():
            arr[int(k) + M] = val
        for k, val in Lk.items():
            k = int(k)
            if k > 0 and -k not in Lk:
                arr[M - k] = np.conj(val)
        Lk = arr
    Lk = np.asarray(Lk, dtype=complex)
    if Lk.ndim != 1 or Lk.size % 2 == 0:
        raise ValueError("L_k must be indexed -M..M")
    M = (Lk.size - 1) // 2
    if np.max(np.abs(Lk - np.conj(Lk[::-1]))) > 1e-14 * max(1.0, np.max(np.abs(Lk))):
        raise NotPositive("L is not real on the circle (L_{-k} != conj(L_k))")

    k = np.arange(-M, M + 1)

    def samples(N):
        z = _grid(N)
        L = np.sum(Lk[:, None] * z[None, :] ** k[:, None], axis=0)
        return np.exp(L)

    N = max(MIN_GRID, 8 * M) if grid is None else max(int(grid), 8 * M)
    N = 1 << int(np.ceil(np.log2(N)))
    vals = samples(N)
    K = N // 2 - 1
    coeffs = _fft_coeffs(vals, K)
    while True:
        fine = _fft_coeffs(samples(2 * N), K)
        defect = float(np.max(np.abs(fine - coeffs)))
        if defect <= ALIAS_TOL or 2 * N >= MAX_GRID:
            break
        N *= 2
        vals = samples(N)
        K = N // 2 - 1
        coeffs = _fft_coeffs(vals, K)

    if np.max(np.abs(vals.imag)) > 1e-10 * np.max(np.abs(vals)):
        raise NotPositive("φ is not real on the circle")
    dense = samples(4 * N).real
    min_phi = float(dense.min())
    if min_phi <= 0:
        raise NotPositive(f"min φ = {min_phi:.3e} <= 0")
    cons = _convolution_defect(Lk, coeffs)
    return SymbolData(Lk, coeffs, N, float(r_inner), min_phi, defect, cons, label)


def _estimate_inner_radius(Lk: np.ndarray, floor: float = 1e-14) -> float:
    """Inner radius of analyticity from the decay of |L_k| (0 if they die out)."""
    M = (Lk.size - 1) // 2
    k = np.arange(1, M + 1)
    mags = np.maximum(np.abs(Lk[M + 1:]), np.abs(Lk[:M][::-1]))
    live = mags > floor * max(1.0, mags.max(initial=0.0))
    if not live.any():
        return 0.0
    last = int(k[live][-1])
    if last < M // 2:
        return 0.0
    sel = live & (k >= max(1, last // 2))
    if sel.sum() < 2:
        return 0.0
    slope = np.polyfit(k[sel], np.log(mags[sel]), 1)[0]
    return float(min(max(np.exp(slope), 0.0), 1.0))


def winding_guard(func: Callable, N: int = 1024) -> int:
    """Winding number of a callable symbol on the unit circle; raises NonzeroWinding if nonzero."""
    w = winding_number(func, N)
    if w != 0:
        raise NonzeroWinding(w)
    return w


def symbol_from_function(func: Callable, M: int = 64, label: str = "") -> SymbolData:
    """Symbol from a callable φ(z): rejects winding, takes log φ on a grid and keeps |k| ≤ M."""
    N = max(MIN_GRID, 8 * M)
    N = 1 << int(np.ceil(np.log2(N)))
    z = _grid(N)
    vals = np.asarray(func(z), dtype=complex)
    winding_guard(func, N)
    if np.max(np.abs(vals.imag)) > 1e-10 * np.max(np.abs(vals)) or vals.real.min() <= 0:
        raise NotPositive("φ must be real and positive on the circle")
    Lk = _fft_coeffs(np.log(vals.real).astype(complex), M)
    Lk = 0.5 * (Lk + np.conj(Lk[::-1]))
    return symbol_from_logcoeffs(Lk, r_inner=_estimate_inner_radius(Lk), label=label)


def winding_number(s, N: int = 1024) -> int:
    """Phase-unwrapped winding of φ along the counterclockwise unit circle.

    Accepts a SymbolData (always 0 for a positive symbol) or a callable φ(z).
    """
    f = s.phi_at if isinstance(s, SymbolData) else s
    return winding_number_samples(np.asarray(f(_grid(N)), dtype=complex))


# ---------------------------------------------------------------------------
# determinants

@dataclass
class ToeplitzDet:
    n: int
    sign: complex
    logdet: float

    @property
    def det(self) -> complex:
        return self.sign * np.exp(self.logdet)


def toeplitz_matrix(s: SymbolData, n: int) -> np.ndarray:
    c = s.phi_coeffs(n)
    col = c[n:]            # φ_0, φ_1, ..., φ_n  (T_ij = φ_{i-j})
    row = c[n::-1]         # φ_0, φ_{-1}, ..., φ_{-n}
    return sla.toeplitz(col, row)


def toeplitz_det(s: SymbolData, n: int) -> ToeplitzDet:
    """D_n = det(φ_{i-j}), i, j = 0..n, by pivoted LU; log-determinant kept separately."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    T = toeplitz_matrix(s, n)
    sign, logdet = np.linalg.slogdet(T)
    return ToeplitzDet(n, complex(sign), float(logdet))


def szego_asymptote(s: SymbolData, n: int) -> float:
    """(n+1) L_0 + Σ_{k≥1} k L_k L_{-k}; for real L the sum is Σ k|L_k|²."""
    M = s.M
    k = np.arange(1, M + 1)
    tail = np.sum(k * s.logcoeffs[M + 1:] * s.logcoeffs[:M][::-1])
    return float(((n + 1) * s.logcoeffs[M] + tail).real)


# ---------------------------------------------------------------------------
# the integrable operator K_n

def unit_circle():
    return build_contour([circle(0.0, 1.0)])


def kn_kernel(s: SymbolData, n: int, t: float = 1.0) -> IntegrableKernel:
    """K_{t,n} on the counterclockwise unit circle for the symbol φ_t = 1 - t + tφ."""
    contour = unit_circle()

    def one_minus(z):
        return t * (1 - s.phi_at(z))

    def f(z):
        z = np.asarray(z, dtype=complex)
        return np.stack([z ** (n + 1), np.ones_like(z)])

    def g(z):
        z = np.asarray(z, dtype=complex)
        w = one_minus(z) / (2j * np.pi)
        return np.stack([z ** (-n - 1) * w, -w])

    def fp(z):
        z = np.asarray(z, dtype=complex)
        return np.stack([(n + 1) * z ** n, np.zeros_like(z)])

    return make_kernel(f, g, contour, fp, label=f"K_n n={n} t={t}")


def kn_trace(s: SymbolData, n: int, t: float = 1.0) -> float:
    """tr K_{t,n} = ∮ Σ f_i' g_i dz = t (n+1)(1 - φ_0)."""
    return float((t * (n + 1) * (1 - s.phi_coeffs(0)[0])).real)


def _circle_quadrature(m: int):
    th = 2 * np.pi * np.arange(m) / m
    z = np.exp(1j * th)
    return z, 1j * z * 2 * np.pi / m


def laurent_block(s: SymbolData, n: int, pad: int = 8, m: int | None = None):
    """Matrix of 1 - K_n on the monomials z^k, k = -pad..n+pad.

    K_n z^k is evaluated by trapezoid quadrature of the kernel on the circle
    (the integrand is smooth, the singularity at z = z' being removable) and
    projected back onto monomials by FFT.  Column k holds the coefficients of
    (1 - K_n) z^k.
    """
    k = np.arange(-pad, n + pad + 1)
    if m is None:
        m = 1 << int(np.ceil(np.log2(4 * (n + 2 * pad + 2) + 4 * s.M + 64)))
    z, dz = _circle_quadrature(m)
    Kmat = kernel_eval(kn_kernel(s, n), z[:, None], z[None, :]) * dz[None, :]
    basis = z[:, None] ** k[None, :]
    image = basis - Kmat @ basis
    c = np.fft.fft(image, axis=0) / m
    return k, c[np.mod(k, m), :]


@dataclass
class DetIdentity:
    n: int
    D: float
    det_one_minus_K: complex
    discrepancy: float
    off_block: float          # size of the entries that must vanish by block structure


def det_identity_check(s: SymbolData, n: int, pad: int = 8) -> DetIdentity:
    """D_n against det(1 - K_n) computed on a Laurent block around 0..n."""
    if n > 8:
        raise ValueError("det_identity_check is limited to n <= 8")
    D = toeplitz_det(s, n).det.real
    k, A = laurent_block(s, n, pad)
    detA = complex(np.linalg.det(A))
    mid = (k >= 0) & (k <= n)
    # block-triangular shape: identity on the outer rows/columns, nothing
    # leaking from the middle columns into the outer rows
    outside = A[~mid][:, ~mid] - np.eye(int((~mid).sum()))
    leak = A[~mid][:, mid]
    off = float(max(np.max(np.abs(outside)), np.max(np.abs(leak))))
    return DetIdentity(n, float(D), detA, float(abs(detA - D) / abs(D)), off)


# ---------------------------------------------------------------------------
# log-determinant from the resolvent

@dataclass
class ResolventLogdet:
    n: int
    logdet: float
    t_nodes: np.ndarray
    integrand: np.ndarray     # -tr L_t / t at the nodes
    residuals: np.ndarray


def resolvent_trace(s: SymbolData, n: int, t: float, counts: int | None = None, quad: int | None = None):
    """tr L_t = ∮ Σ_j F'_{t,j} G_{t,j} dz on the counterclockwise circle; returns (trace, residual)."""
    if counts is None:
        counts = 2 * (n + 1) + 8 * s.M + 48
    k = kn_kernel(s, n, t)
    res = resolvent_via_rhp(k, counts)
    m = quad or 2 * counts
    th = 2 * np.pi * np.arange(m) / m
    z, F, G, Fp = res.components(0, th)
    dz = 1j * z * 2 * np.pi / m
    return complex(np.sum(np.sum(Fp * G, axis=1) * dz)), res.solution.residual


def logdet_via_resolvent(s: SymbolData, n: int, t_nodes: int = 20, counts: int | None = None) -> ResolventLogdet:
    """log D_n = -∫_0^1 tr L_t dt / t by Gauss-Legendre on interior nodes."""
    x, w = np.polynomial.legendre.leggauss(t_nodes)
    ts, wt = (x + 1) / 2, w / 2
    vals = np.empty(t_nodes, dtype=complex)
    resid = np.empty(t_nodes)
    for i, t in enumerate(ts):
        tr, r = resolvent_trace(s, n, float(t), counts)
        vals[i] = -tr / t
        resid[i] = r
    total = complex(np.sum(wt * vals))
    return ResolventLogdet(n, float(total.real), ts, vals, resid)


# ---------------------------------------------------------------------------
# lens deformation

def default_rho(s: SymbolData) -> float:
    return 0.5 * (1 + s.r_inner)


@dataclass
class LensReport:
    n: int
    rho: float
    t: float
    jump: JumpField
    solution: RhSolution
    model: ScalarSolution
    vtilde_sup: dict          # circle label -> sup ‖ṽ - I‖
    bound: float              # sup|1 - φ_t^{-1}| ρ^{n+1} on Σ_ρ
    model_gap: float          # max ‖m̃ - m_∞‖ at the probes
    det_defect: float
    probes: np.ndarray


def _lower(z, s, n, t):
    out = np.zeros((z.size, 2, 2), dtype=complex)
    out[:, 0, 0] = out[:, 1, 1] = 1
    out[:, 1, 0] = z ** (-n - 1) * (1 - 1 / s.phi_t_at(z, t))
    return out


def _upper(z, s, n, t):
    out = np.zeros((z.size, 2, 2), dtype=complex)
    out[:, 0, 0] = out[:, 1, 1] = 1
    out[:, 0, 1] = -(1 - 1 / s.phi_t_at(z, t)) * z ** (n + 1)
    return out


def _diag(z, s, t):
    p = s.phi_t_at(z, t)
    out = np.zeros((z.size, 2, 2), dtype=complex)
    out[:, 0, 0] = p
    out[:, 1, 1] = 1 / p
    return out


def toeplitz_jump(s: SymbolData, n: int, t: float = 1.0) -> JumpField:
    """Undeformed jump on the unit circle: v = L·diag(φ_t, φ_t^{-1})·U."""
    contour = unit_circle()

    def v(z, arc):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        return _lower(z, s, n, t) @ _diag(z, s, t) @ _upper(z, s, n, t)

    return JumpField(contour, v, k=2, unit_determinant=True, label=f"Toeplitz n={n}")


def lens_jump(s: SymbolData, n: int, rho: float, t: float = 1.0) -> JumpField:
    """ṽ on |z| = ρ (U), |z| = 1 (diag(φ_t, φ_t^{-1})) and |z| = 1/ρ (L), all counterclockwise."""
    contour = build_contour([circle(0.0, rho), circle(0.0, 1.0), circle(0.0, 1.0 / rho)])

    def v(z, arc):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        if arc == 0:
            return _upper(z, s, n, t)
        if arc == 1:
            return _diag(z, s, t)
        return _lower(z, s, n, t)

    return JumpField(contour, v, k=2, unit_determinant=True, label=f"lens n={n} rho={rho}")


def _circle_sup(f, radius: float, m: int = 512) -> float:
    z = radius * _grid(m)
    return float(np.max(np.abs(f(z))))


def lens_deform(s: SymbolData, n: int, rho: float | None = None, t: float = 1.0, counts: int | None = None,
                probes=None, tol: float = 1e-8) -> LensReport:
    """Solve the deformed problem and compare it with the diagonal model solution outside the lens."""
    rho = default_rho(s) if rho is None else float(rho)
    if not (s.r_inner < rho < 1):
        raise SymbolNotAnalytic(f"rho = {rho} must lie in ({s.r_inner}, 1)")
    jump = lens_jump(s, n, rho, t)
    if counts is None:
        counts = n + 1 + 8 * s.M + 48
    sol = solve_normalized(jump, counts, tol=tol)

    eye = np.eye(2)
    sup = {
        "inner": _circle_sup(lambda z: np.abs(_upper(z, s, n, t) - eye).max(axis=(1, 2)), rho),
        "unit": _circle_sup(lambda z: np.abs(_diag(z, s, t) - eye).max(axis=(1, 2)), 1.0),
        "outer": _circle_sup(lambda z: np.abs(_lower(z, s, n, t) - eye).max(axis=(1, 2)), 1.0 / rho),
    }
    bound = _circle_sup(lambda z: np.abs(1 - 1 / s.phi_t_at(z, t)), rho) * rho ** (n + 1)

    unit = unit_circle()
    model = solve_scalar_closed_form(unit, lambda z, arc: s.phi_t_at(z, t), counts)
    if probes is None:
        # |z| = 2 unless the outer lens circle comes too close
        radius = 2.0 if 2.0 > 1.1 / rho else 1.5 / rho
        probes = radius * np.exp(2j * np.pi * (np.arange(8) + 0.25) / 8)
    probes = np.asarray(probes, dtype=complex)
    mt = sol(probes)
    d = model(probes)
    m_inf = np.zeros_like(mt)
    m_inf[:, 0, 0] = d
    m_inf[:, 1, 1] = 1 / d
    gap = float(np.max(np.abs(mt - m_inf)))
    return LensReport(n, rho, t, jump, sol, model, sup, float(bound), gap,
                      det_probe(sol, probes), probes)


def solve_undeformed(s: SymbolData, n: int, t: float = 1.0, counts: int | None = None, tol: float = 1e-8) -> RhSolution:
    """Collocation solve of the unit-circle problem before deformation (for cross-checks)."""
    if counts is None:
        counts = 2 * (n + 1) + 8 * s.M + 48
    return solve_normalized(toeplitz_jump(s, n, t), counts, tol=tol)
