import numpy as np
import pytest

from rhlab.cauchy import Discretization
from rhlab.contour import build_contour, circle, segment
from rhlab.errors import NonzeroWinding, SingularJump
from rhlab.rhsolver import (JumpField, apply_resolvent, assemble_cw, constant_jump, det_probe,
                            operator_norm_estimate, solve_normalized, solve_scalar_closed_form)

UNIT = build_contour([circle(0, 1)])


def test_constant_scalar_jump_on_circle():
    c = 2.0 + 0.5j
    sol = solve_normalized(constant_jump(UNIT, [[[c]]]), 16)
    assert abs(sol(np.array([0.2j]))[0, 0, 0] - c) < 1e-12
    assert abs(sol(np.array([3.0]))[0, 0, 0] - 1) < 1e-12
    assert np.max(np.abs(sol.m1)) < 1e-12


def test_scalar_closed_form_matches_solver():
    v = lambda z, arc: np.exp(0.3 * (z + 1 / z))
    closed = solve_scalar_closed_form(UNIT, v, 32)
    jump = JumpField(UNIT, lambda z, arc: v(z, arc)[:, None, None], k=1)
    sol = solve_normalized(jump, 32)
    probes = np.array([0.3, 0.5j, 2.0, -3j])
    assert np.max(np.abs(closed(probes) - sol(probes)[:, 0, 0])) < 1e-12
    assert closed.residual(v) < 1e-12


def test_scalar_winding_rejected():
    with pytest.raises(NonzeroWinding):
        solve_scalar_closed_form(UNIT, lambda z, arc: z, 16)


def _lu_jump(a, b):
    def v(z, arc):
        A, B = a(z), b(z)
        out = np.empty((z.size, 2, 2), dtype=complex)
        out[:, 0, 0], out[:, 0, 1], out[:, 1, 0], out[:, 1, 1] = 1, A, B, 1 + A * B
        return out

    def vplus(z, arc):
        out = np.broadcast_to(np.eye(2, dtype=complex), (z.size, 2, 2)).copy()
        out[:, 0, 1] = a(z)
        return out

    def vminus(z, arc):
        out = np.broadcast_to(np.eye(2, dtype=complex), (z.size, 2, 2)).copy()
        out[:, 1, 0] = -b(z)
        return out

    return v, vplus, vminus


def test_factorization_independence_and_det():
    a = lambda z: 0.3 * np.exp(-z * z)
    b = lambda z: -0.2 * np.exp(-z * z)
    line = build_contour([segment(-6, 6)])
    v, vp, vm = _lu_jump(a, b)
    s1 = solve_normalized(JumpField(line, v, unit_determinant=True), 80)
    s2 = solve_normalized(JumpField(line, v, vplus=vp, vminus=vm, unit_determinant=True), 80)
    assert np.max(np.abs(s1.m1 - s2.m1)) < 1e-8
    assert det_probe(s1, np.array([0.5j, 2 - 1j, 10.0 + 3j])) < 1e-8
    assert s1.diagnostics["plemelj"] < 1e-10


def test_singular_jump_rejected():
    with pytest.raises(SingularJump):
        solve_normalized(constant_jump(UNIT, [np.zeros((2, 2))]), 8)


def _dense_dft_operator(vals, N):
    """I - C_ω for v- = I built from the DFT projection, independent of the package."""
    k = vals.shape[1]
    F = np.fft.fft(np.eye(N), axis=0)
    neg = np.fft.fftfreq(N, 1 / N) < 0
    Cminus = -np.linalg.solve(F, np.diag(neg.astype(float)) @ F)
    W = vals - np.eye(k)
    A = np.eye(k * N, dtype=complex)
    for l in range(k):
        for j in range(k):
            # row-vector density: input component l feeds output component j
            A[j * N:(j + 1) * N, l * N:(l + 1) * N] -= Cminus * W[:, l, j][None, :]
    return A


def test_apply_resolvent_against_dft_inverse():
    N = 16
    def v(z, arc):
        out = np.empty((z.size, 2, 2), dtype=complex)
        out[:, 0, 0], out[:, 0, 1] = 1, 0.2 * z
        out[:, 1, 0], out[:, 1, 1] = 0.1 / z, 1 + 0.02
        return out
    jump = JumpField(UNIT, v)
    disc = Discretization(UNIT, N)
    vals = v(disc.nodes, 0)
    rng = np.random.default_rng(7)
    f = rng.standard_normal((N, 2)) + 1j * rng.standard_normal((N, 2))
    mu = apply_resolvent(jump, f, N)
    ref = np.linalg.solve(_dense_dft_operator(vals, N), f.T.reshape(-1)).reshape(2, N).T
    assert np.max(np.abs(mu - ref)) < 1e-10


def test_operator_norm_finite():
    asm = assemble_cw(constant_jump(UNIT, [np.array([[1, 0.5], [0, 1]])]), 16)
    assert 0 < operator_norm_estimate(asm) < 10
