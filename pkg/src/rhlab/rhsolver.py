"""Normalized Riemann-Hilbert solver built on the singular integral equation (1 - C_ω)μ = I.

Given a jump v = (v-)^{-1} v+ on a contour, with ω+ = v+ - I and ω- = I - v-,
the operator C_ω h = C+(hω-) + C-(hω+) is assembled densely on the
collocation nodes.  Since C- = C+ - Id this equals C+(hW) - hω+ with
W = ω+ + ω-.  Rows of a matrix density decouple, so the linear system acts on
row vectors: size k*N for a k x k problem on N nodes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg as sla

from .cauchy import Density, Discretization, _apply
from .contour import Contour, chebyshev_points
from .errors import (NearSingularSystem, NonzeroWinding, ResidualAboveTolerance,
                     SingularJump)

DEFAULT_TOL = 1e-8
COND_LIMIT = 1e12

Sampler = Callable[[np.ndarray, int], np.ndarray]


@dataclass
class JumpField:
    """Matrix jump on a contour with a pointwise factorization v = (v-)^{-1} v+.

    Samplers take (points, arc index) and return arrays of shape (len, k, k).
    When the factors are omitted the default v+ = v, v- = I is used.
    """

    contour: Contour
    v: Sampler
    k: int = 2
    vplus: Sampler | None = None
    vminus: Sampler | None = None
    unit_determinant: bool = False
    label: str = ""

    def sample(self, z: np.ndarray, arc: int):
        v = np.asarray(self.v(z, arc), dtype=complex)
        eye = np.broadcast_to(np.eye(self.k), v.shape)
        vp = v if self.vplus is None else np.asarray(self.vplus(z, arc), dtype=complex)
        vm = eye.copy() if self.vminus is None else np.asarray(self.vminus(z, arc), dtype=complex)
        return v, vp, vm


def constant_jump(contour: Contour, matrices, **kw) -> JumpField:
    """Jump that is a constant matrix on each arc."""
    mats = [np.asarray(m, dtype=complex) for m in matrices]
    k = mats[0].shape[0]

    def v(z, arc):
        return np.broadcast_to(mats[arc], (np.size(z), k, k)).copy()

    return JumpField(contour, v, k=k, **kw)


def check_jump(jump: JumpField, z: np.ndarray, arc: int, tol: float = 1e-12) -> None:
    v, vp, vm = jump.sample(z, arc)
    scale = 1 + np.max(np.abs(v))
    try:
        vinv = np.linalg.inv(v)
    except np.linalg.LinAlgError as exc:
        raise SingularJump(f"jump is singular on arc {arc}") from exc
    if np.max(np.abs(v @ vinv - np.eye(jump.k))) > tol * scale ** 2:
        raise SingularJump(f"jump is numerically singular on arc {arc}")
    fact = np.linalg.solve(vm, vp)
    if np.max(np.abs(fact - v)) > tol * scale ** 2:
        raise SingularJump(f"factorization does not reproduce v on arc {arc}")


@dataclass
class Assembly:
    disc: Discretization
    k: int
    v: np.ndarray
    vplus: np.ndarray
    vminus: np.ndarray
    matrix: np.ndarray  # dense C_ω on stacked row-vector densities

    @property
    def W(self) -> np.ndarray:
        return self.vplus - self.vminus


def _node_samples(jump: JumpField, disc: Discretization):
    v, vp, vm = [], [], []
    for a in range(len(disc.contour.arcs)):
        z = disc.nodes[disc.arc_slice(a)]
        check_jump(jump, z, a)
        s = jump.sample(z, a)
        v.append(s[0]), vp.append(s[1]), vm.append(s[2])
    return np.concatenate(v), np.concatenate(vp), np.concatenate(vm)


def assemble_cw(jump: JumpField, counts, disc: Discretization | None = None) -> Assembly:
    """Dense matrix of h -> C+(hω-) + C-(hω+) acting on row-vector densities.

    Index layout is component-major: entry l*N + a holds component l at node a.
    """
    if disc is None:
        disc = Discretization(jump.contour, counts)
    v, vp, vm = _node_samples(jump, disc)
    k, N = jump.k, disc.size
    W = vp - vm
    wplus = vp - np.eye(k)
    C = disc.cauchy_plus()
    M = np.empty((k * N, k * N), dtype=complex)
    for l in range(k):
        for j in range(k):
            blk = C * W[:, j, l][None, :]
            blk[np.diag_indices(N)] -= wplus[:, j, l]
            M[l * N:(l + 1) * N, j * N:(j + 1) * N] = blk
    return Assembly(disc, k, v, vp, vm, M)


def _rows_to_stack(rows: np.ndarray) -> np.ndarray:
    """(N, k) row-vector density -> stacked vector of length k*N."""
    return rows.T.reshape(-1)


def _stack_to_rows(vec: np.ndarray, N: int, k: int) -> np.ndarray:
    return vec.reshape(k, N).T


class _Factored:
    def __init__(self, A: np.ndarray):
        self.lu = sla.lu_factor(A, check_finite=False)
        anorm = np.linalg.norm(A, 1)
        gecon, = sla.get_lapack_funcs(("gecon",), (A,))
        rcond, info = gecon(self.lu[0], anorm, norm="1")
        self.condition = float(np.inf if rcond == 0 else 1.0 / rcond)

    def solve(self, b):
        return sla.lu_solve(self.lu, b, check_finite=False)


@dataclass
class RhSolution:
    disc: Discretization
    k: int
    mu: np.ndarray          # (N, k, k)
    v: np.ndarray
    vplus: np.ndarray
    vminus: np.ndarray
    condition: float
    jump: JumpField
    residual: float = np.nan
    diagnostics: dict = field(default_factory=dict)

    @property
    def density(self) -> np.ndarray:
        """μ(ω+ + ω-) at the nodes."""
        return self.mu @ (self.vplus - self.vminus)

    @property
    def m1(self) -> np.ndarray:
        """Residue: m(z) = I + m1/z + O(z^-2)."""
        w = self.disc.weights()
        return -np.tensordot(w, self.density, axes=(0, 0)) / (2j * np.pi)

    @property
    def m_plus(self) -> np.ndarray:
        return self.mu @ self.vplus

    @property
    def m_minus(self) -> np.ndarray:
        return self.mu @ self.vminus

    def __call__(self, z):
        """m(z) = I + C(μW)(z) at off-contour points."""
        z_arr = np.atleast_1d(np.asarray(z, dtype=complex))
        out = np.eye(self.k) + _apply(self.disc.cauchy_at(z_arr), self.density)
        return out[0] if np.ndim(z) == 0 else out

    def plus_at(self, arc: int, t) -> np.ndarray:
        """m+ at reference parameters t on an arc, from the Cauchy transform."""
        return np.eye(self.k) + _apply(self.disc.plus_at(arc, t), self.density)

    def density_at(self, arc: int, t) -> np.ndarray:
        return _apply(self.disc.interp_matrix(arc, t), self.density[self.disc.arc_slice(arc)])


def check_parameters(disc: Discretization, arc: int) -> np.ndarray:
    """Off-node parameters interleaved with the collocation nodes of an arc."""
    a, n = disc.contour.arcs[arc], disc.counts[arc]
    if a.is_straight:
        return -np.cos(np.pi * np.arange(1, n) / n)
    return 2 * np.pi * (np.arange(n) + 0.5) / n


def jump_residual(sol: RhSolution) -> float:
    """sup ‖m+ - m- v‖ over check points interleaved with the nodes.

    At the nodes themselves the collocation equations make the residual vanish
    identically, so the check is made between them: m+ comes from the Cauchy
    transform there and m- = m+ - μW from the interpolated density.
    """
    worst = 0.0
    for arc in range(len(sol.disc.contour.arcs)):
        t = check_parameters(sol.disc, arc)
        a = sol.disc.contour.arcs[arc]
        z = a.point(t) if a.is_straight else a.center + a.radius * np.exp(1j * t)
        v = np.asarray(sol.jump.v(np.atleast_1d(z), arc), dtype=complex)
        mp = sol.plus_at(arc, t)
        mm = mp - sol.density_at(arc, t)
        worst = max(worst, float(np.max(np.abs(mp - mm @ v))))
    return worst


def solve_normalized(jump: JumpField, counts, disc: Discretization | None = None,
                     tol: float = DEFAULT_TOL, raise_on_residual: bool = True) -> RhSolution:
    """Solve (1 - C_ω)ν = C_ω I and return m with μ = I + ν.

    Equivalent to solving (1 - C_ω)μ = I in the regularized sense; each row of
    the identity is one right-hand side.
    """
    asm = assemble_cw(jump, counts, disc)
    disc, k, N = asm.disc, asm.k, asm.disc.size
    A = np.eye(k * N) - asm.matrix
    fac = _Factored(A)
    if fac.condition > COND_LIMIT:
        raise NearSingularSystem(f"condition estimate {fac.condition:.3e} exceeds {COND_LIMIT:.0e}")
    rhs = np.zeros((k * N, k), dtype=complex)
    for i in range(k):
        rhs[i * N:(i + 1) * N, i] = 1.0
    # ν solves (1 - C_ω)ν = C_ω I; μ = I + ν is the same as solving with rhs I
    nu_rhs = asm.matrix @ rhs
    nu = fac.solve(nu_rhs)
    mu = np.empty((N, k, k), dtype=complex)
    for i in range(k):
        mu[:, i, :] = _stack_to_rows(nu[:, i], N, k)
    mu += np.eye(k)
    sol = RhSolution(disc, k, mu, asm.v, asm.vplus, asm.vminus, fac.condition, jump)
    sol.residual = jump_residual(sol)
    sol.diagnostics = {"condition": fac.condition, "unknowns": k * N, "residual": sol.residual,
                       "plemelj": plemelj_consistency(sol)}
    if raise_on_residual and sol.residual > tol:
        raise ResidualAboveTolerance(f"jump residual {sol.residual:.3e} above {tol:.1e}", sol)
    return sol


def plemelj_consistency(sol: RhSolution) -> float:
    """max ‖(m+ - m-) - μ(ω+ + ω-)‖ at the nodes, with m± from the Cauchy transform."""
    C = sol.disc.cauchy_plus()
    mp = np.eye(sol.k) + _apply(C, sol.density)
    mm = mp - sol.density
    return float(np.max(np.abs((mp - mm) - sol.density)))


def apply_resolvent(jump: JumpField, f: np.ndarray, counts, disc: Discretization | None = None,
                    agreement_tol: float = 1e-10) -> np.ndarray:
    """(1 - C_ω)^{-1} f for a density f given at the nodes (shape (N, k) or (N, r, k)).

    The result is returned as m+ (v+)^{-1}; the alternative m- (v-)^{-1} is
    computed as well and the two are required to agree.
    """
    asm = assemble_cw(jump, counts, disc)
    disc, k, N = asm.disc, asm.k, asm.disc.size
    f = np.asarray(f, dtype=complex)
    rows = f[:, None, :] if f.ndim == 2 else f
    fac = _Factored(np.eye(k * N) - asm.matrix)
    if fac.condition > COND_LIMIT:
        raise NearSingularSystem(f"condition estimate {fac.condition:.3e} exceeds {COND_LIMIT:.0e}")
    out = np.empty_like(rows)
    for i in range(rows.shape[1]):
        out[:, i, :] = _stack_to_rows(fac.solve(_rows_to_stack(rows[:, i, :])), N, k)
    h = out @ asm.W
    mp = rows + _apply(disc.cauchy_plus(), h)
    mm = mp - h
    a = np.linalg.solve(np.swapaxes(asm.vplus, 1, 2), np.swapaxes(mp, 1, 2)).swapaxes(1, 2)
    b = np.linalg.solve(np.swapaxes(asm.vminus, 1, 2), np.swapaxes(mm, 1, 2)).swapaxes(1, 2)
    gap = float(np.max(np.abs(a - b)))
    if gap > agreement_tol * max(1.0, float(np.max(np.abs(a)))):
        raise ResidualAboveTolerance(f"m+(v+)^-1 and m-(v-)^-1 differ by {gap:.2e}")
    return a[:, 0, :] if f.ndim == 2 else a


def operator_norm_estimate(asm: Assembly) -> float:
    """‖C_ω‖ on L² estimated with quadrature-weighted 2-norm of the dense matrix."""
    w = np.abs(asm.disc.weights())
    sw = np.sqrt(np.tile(w, asm.k))
    M = sw[:, None] * asm.matrix / sw[None, :]
    return float(np.linalg.norm(M, 2))


def det_probe(sol: RhSolution, z) -> float:
    m = sol(np.atleast_1d(z))
    return float(np.max(np.abs(np.linalg.det(m) - 1)))


# ---------------------------------------------------------------------------
# scalar problems in closed form

def _continuous_log(vals: np.ndarray) -> np.ndarray:
    return np.log(np.abs(vals)) + 1j * np.unwrap(np.angle(vals))


def winding_number_samples(vals: np.ndarray) -> int:
    """Winding number of a closed sampled loop (samples ordered around the loop)."""
    ph = np.unwrap(np.angle(np.concatenate([vals, vals[:1]])))
    return int(np.round((ph[-1] - ph[0]) / (2 * np.pi)))


@dataclass
class ScalarSolution:
    disc: Discretization
    logv: np.ndarray

    def __call__(self, z):
        z_arr = np.atleast_1d(np.asarray(z, dtype=complex))
        out = np.exp(self.disc.cauchy_at(z_arr) @ self.logv)
        return out[0] if np.ndim(z) == 0 else out

    @property
    def m_plus(self):
        return np.exp(self.disc.cauchy_plus() @ self.logv)

    @property
    def m_minus(self):
        return np.exp(self.disc.cauchy_plus() @ self.logv - self.logv)

    def residual(self, v: Callable) -> float:
        worst = 0.0
        for arc in range(len(self.disc.contour.arcs)):
            t = check_parameters(self.disc, arc)
            a = self.disc.contour.arcs[arc]
            z = a.point(t) if a.is_straight else a.center + a.radius * np.exp(1j * t)
            cp = self.disc.plus_at(arc, t) @ self.logv
            lv = self.disc.interp_matrix(arc, t) @ self.logv[self.disc.arc_slice(arc)]
            mp, mm = np.exp(cp), np.exp(cp - lv)
            worst = max(worst, float(np.max(np.abs(mp - mm * v(np.atleast_1d(z), arc)))))
        return worst


def solve_scalar_closed_form(contour: Contour, v: Callable, counts) -> ScalarSolution:
    """m(z) = exp(∫ log v(s)/(s - z) ds/(2πi)) with a continuous branch of log v per arc.

    Raises NonzeroWinding if v winds around 0 along a closed component.
    """
    disc = counts if isinstance(counts, Discretization) else Discretization(contour, counts)
    logs = []
    for a, arc in enumerate(contour.arcs):
        z = disc.nodes[disc.arc_slice(a)]
        vals = np.asarray(v(z, a), dtype=complex)
        if np.any(vals == 0):
            raise SingularJump("scalar jump vanishes on the contour")
        if arc.is_closed:
            order = np.arange(len(z)) if arc.orientation > 0 else np.arange(len(z))[::-1]
            wn = winding_number_samples(vals[order]) * arc.orientation
            if wn != 0:
                raise NonzeroWinding(wn)
        logs.append(_continuous_log(vals))
    return ScalarSolution(disc, np.concatenate(logs))
