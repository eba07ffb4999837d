"""End-to-end acceptance checks, one test per criterion; outcomes are summarized at the end of the run."""
import hashlib
import json
import os
import subprocess
import sys

import numpy as np
import pytest
from scipy.special import airy as scipy_airy

from rhlab.airy import ai_quadrature, ai_series_minus, ai_series_plus, ai_taylor_oracle, series_minus_term, \
    series_plus_term
from rhlab.cauchy import Density, Discretization, cauchy_boundary, line_fourier_projection, line_hilbert, \
    ray_norm_bound, ray_operator_norm
from rhlab.contour import build_contour, circle, segment
from rhlab.intops import closure_defect, nystrom_oracle, resolvent_via_rhp, sine_kernel
from rhlab.orthopoly import fik_residual, hermite_weight, quartic_weight, recurrence_chain
from rhlab.painleve2 import StokesTriple, asymptotics_minus, connection_trajectory, cyclic_check, pii_u, \
    tracy_widom_cdf
from rhlab.rhsolver import JumpField, apply_resolvent, constant_jump, det_probe, solve_normalized
from rhlab.scattering import direct_scattering, gaussian, nls_jump, painleve_region_compare, pde_oracle, \
    reconstruct, trig_interpolate
from rhlab.errors import NonzeroWinding
from rhlab.toeplitz import det_identity_check, lens_deform, logdet_via_resolvent, symbol_from_function, \
    symbol_from_logcoeffs, toeplitz_det

UNIT = build_contour([circle(0, 1)])


def test_criterion_1_airy(criterion):
    xs = np.arange(-8.0, 9.0)
    err = max(abs(ai_quadrature(x) - ai_taylor_oracle(x)) for x in xs)
    plus = abs(ai_quadrature(8.0) - ai_series_plus(8.0, 5))
    plus_ok = plus <= 2 * series_plus_term(8.0, 6)
    minus = abs(ai_quadrature(-10.0) - ai_series_minus(10.0, 2))
    minus_ok = minus <= series_minus_term(10.0, 2)
    criterion(1, err <= 1e-10 and plus_ok and minus_ok,
              f"oracle {err:.1e}; x=8 {plus:.1e} vs 2x{series_plus_term(8.0, 6):.1e}; "
              f"x=-10 {minus:.1e} vs {series_minus_term(10.0, 2):.1e}")


def _band_limited_circle(rng, disc, K=10):
    z = disc.nodes
    modes = np.arange(-K, K + 1)
    c = rng.standard_normal(modes.size) + 1j * rng.standard_normal(modes.size)
    return (z[:, None] ** modes[None, :]) @ c


def _band_limited_line(rng, x, mean_zero=False):
    """Random sum of Gaussians, or its derivative (exactly mean zero)."""
    f = np.zeros_like(x, dtype=complex)
    for _ in range(4):
        a = rng.standard_normal() + 1j * rng.standard_normal()
        c, w = rng.uniform(-3, 3), rng.uniform(0.7, 2.0)
        g = a * np.exp(-((x - c) / w) ** 2)
        f += -2 * (x - c) / w ** 2 * g if mean_zero else g
    return f


def test_criterion_2_plemelj_projection(criterion):
    rng = np.random.default_rng(2024)
    c = build_contour([segment(-1, 1), circle(3, 1)])
    disc = Discretization(c, [24, 32])
    plem = 0.0
    for _ in range(50):
        f = rng.standard_normal(disc.size) + 1j * rng.standard_normal(disc.size)
        d = Density(disc, f)
        gap = cauchy_boundary(d, "plus").values - cauchy_boundary(d, "minus").values - f
        plem = max(plem, float(np.max(np.abs(gap)) / np.max(np.abs(f))))

    tdisc = Discretization(UNIT, 32)
    idem_t = 0.0
    for _ in range(50):
        p = cauchy_boundary(Density(tdisc, _band_limited_circle(rng, tdisc)), "plus")
        idem_t = max(idem_t, float(np.max(np.abs(cauchy_boundary(p, "plus").values - p.values))))

    x = np.linspace(-30, 30, 1024, endpoint=False)
    # C+f stays decaying (inside the operator's domain) only when ∫f = 0; for f
    # with a mean the halved zero mode leaves a defect of mean/4, reported apart
    idem_r = idem_mean = 0.0
    riesz = 0.0
    for i in range(100):
        f = _band_limited_line(rng, x)
        if i < 50:
            h = _band_limited_line(rng, x, mean_zero=True)
            p = line_fourier_projection(h)
            idem_r = max(idem_r, float(np.max(np.abs(line_fourier_projection(p) - p))))
            p = line_fourier_projection(f)
            idem_mean = max(idem_mean, float(np.max(np.abs(line_fourier_projection(p) - p))))
        g = f.real
        H = line_hilbert(g).real
        riesz = max(riesz, float(np.sum(H ** 4) / np.sum(g ** 4)))
    ray = ray_operator_norm(np.pi / 2)
    bound = ray_norm_bound(np.pi / 2) + 0.01
    ok = plem <= 4 * np.finfo(float).eps and idem_t <= 1e-8 and idem_r <= 1e-8 and riesz <= 34 and ray <= bound
    criterion(2, ok, f"plemelj {plem:.1e}; idempotence T {idem_t:.1e} R {idem_r:.1e} (with mean {idem_mean:.1e}); "
                     f"max ∫(Hf)^4/∫f^4 = {riesz:.3f}; ray norm {ray:.4f} <= {bound:.4f}")


def _dft_operator(vals, N):
    k = vals.shape[1]
    F = np.fft.fft(np.eye(N), axis=0)
    neg = np.fft.fftfreq(N, 1 / N) < 0
    Cminus = -np.linalg.solve(F, np.diag(neg.astype(float)) @ F)
    W = vals - np.eye(k)
    A = np.eye(k * N, dtype=complex)
    for l in range(k):
        for j in range(k):
            A[j * N:(j + 1) * N, l * N:(l + 1) * N] -= Cminus * W[:, l, j][None, :]
    return A


def test_criterion_3_solver(criterion):
    c = 2.0 - 0.7j
    sol = solve_normalized(constant_jump(UNIT, [[[c]]]), 16)
    inner = np.array([0.0, 0.3 + 0.2j, -0.5j])
    outer = np.array([2.0, -3 + 1j, 10j])
    scalar = max(float(np.max(np.abs(sol(inner)[:, 0, 0] - c))), float(np.max(np.abs(sol(outer)[:, 0, 0] - 1))))

    r = direct_scattering(gaussian(0.3))
    jump = nls_jump(r, 0.5, 0.2)
    plain = JumpField(jump.contour, jump.v, 2, unit_determinant=True)
    counts = [60] * len(jump.contour.arcs)
    s_tri = solve_normalized(jump, counts)
    s_plain = solve_normalized(plain, counts)
    fact = float(np.max(np.abs(s_tri.m1 - s_plain.m1)))
    probes = np.array([0.5j, 1 - 2j, 4 + 0.3j, -2 + 5j])
    det = max(det_probe(s_tri, probes), det_probe(s_plain, probes))

    N = 16

    def v(z, arc):
        out = np.empty((z.size, 2, 2), dtype=complex)
        out[:, 0, 0], out[:, 0, 1] = 1 + 0.1 * z, 0.3 * z ** 2
        out[:, 1, 0], out[:, 1, 1] = 0.2 / z, 1.0
        return out

    disc = Discretization(UNIT, N)
    rng = np.random.default_rng(3)
    f = rng.standard_normal((N, 2)) + 1j * rng.standard_normal((N, 2))
    mu = apply_resolvent(JumpField(UNIT, v), f, N)
    ref = np.linalg.solve(_dft_operator(v(disc.nodes, 0), N), f.T.reshape(-1)).reshape(2, N).T
    dense = float(np.max(np.abs(mu - ref)))
    ok = scalar <= 1e-12 and fact <= 1e-8 and det <= 1e-8 and dense <= 1e-10
    criterion(3, ok, f"scalar {scalar:.1e}; factorization {fact:.1e}; det {det:.1e}; dense inverse {dense:.1e}")


def test_criterion_4_painleve(criterion):
    tail = 0.0
    conn30 = conn100 = 0.0
    for q in (0.2, 0.5, 0.8):
        u = pii_u(StokesTriple.ablowitz_segur(q), 6.0)
        tail = max(tail, abs(u - q * scipy_airy(6.0)[0]))
        traj = connection_trajectory(q, xs=np.array([-30.0, -100.0]))
        ode = traj.sol(np.array([-30.0, -100.0]))[0]
        asym = asymptotics_minus(q, np.array([-30.0, -100.0]))
        conn30 = max(conn30, abs(ode[0] - asym[0]))
        conn100 = max(conn100, abs(ode[1] - asym[1]))
    rng = np.random.default_rng(11)
    passed = 0
    for _ in range(100):
        p, q = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        while abs(1 + p * q) < 0.1:
            p, q = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        passed += cyclic_check(StokesTriple(p, q, -(p + q) / (1 + p * q)))
    ok = tail <= 1e-8 and conn30 <= 0.05 and conn100 <= 0.02 and passed == 100
    criterion(4, ok, f"|u(6)-qAi(6)| {tail:.1e}; ODE vs asymptotics x=-30 {conn30:.1e}, x=-100 {conn100:.1e}; "
                     f"cyclic {passed}/100")


def test_criterion_5_scattering(criterion):
    q0 = gaussian(0.3)
    xs = np.linspace(-3, 3, 13)
    r = direct_scattering(q0)
    rec0 = reconstruct(r, xs)
    roundtrip = float(np.max(np.abs(rec0.values - 0.3 * np.exp(-xs ** 2))))

    xs_t = np.linspace(-2, 2, 5)
    rec = reconstruct(r, xs_t, t=0.5)
    xg, qg = pde_oracle(lambda x: 0.3 * np.exp(-x * x), 0.5, "nls")
    nls = float(np.max(np.abs(rec.values - trig_interpolate(xg, qg, xs_t))))

    rm = direct_scattering(q0, kind="mkdv")
    mk = reconstruct(rm, xs_t, t=0.5, support_tol=1e-7)
    realness = mk.max_imag

    d20 = np.max(np.abs(painleve_region_compare(rm, 20.0).difference))
    d40 = np.max(np.abs(painleve_region_compare(rm, 40.0).difference))
    ratio = float(d20 / d40)
    ok = roundtrip <= 1e-6 and nls <= 1e-4 and realness <= 1e-8 and 1.3 <= ratio <= 1.9
    criterion(5, ok, f"roundtrip {roundtrip:.1e}; NLS t=0.5 {nls:.1e}; MKdV |Im u| {realness:.1e}; "
                     f"region ratio {ratio:.3f} (2^(2/3) = {2 ** (2 / 3):.3f})")


def test_criterion_6_orthopoly(criterion):
    fam, Ys, recs, tt = recurrence_chain(hermite_weight(), 10)
    res = max(max(fik_residual(Y)) for Y in Ys)
    a_rhp = float(np.max(np.abs(tt.a)))
    a_gs = float(np.max(np.abs(fam.a[:tt.a.size])))
    n = np.arange(1, 11)
    b_rhp = float(np.max(np.abs(tt.b[:10] ** 2 - n / 2)))
    b_gs = float(np.max(np.abs(fam.b[:10] ** 2 - n / 2)))
    _, Yq, _, _ = recurrence_chain(quartic_weight(), 10)
    res_q = max(max(fik_residual(Y)) for Y in Yq)
    ok = res <= 1e-8 and res_q <= 1e-8 and max(a_rhp, a_gs) <= 1e-10 and max(b_rhp, b_gs) <= 1e-8
    criterion(6, ok, f"Hermite residual {res:.1e}, quartic {res_q:.1e}; |a_n| rhp {a_rhp:.1e} gs {a_gs:.1e}; "
                     f"b_n^2-n/2 rhp {b_rhp:.1e} gs {b_gs:.1e}")


def test_criterion_7_szego(criterion):
    s = symbol_from_logcoeffs({1: 0.3})
    limit = abs(toeplitz_det(s, 30).logdet - 0.09)
    ident = max(det_identity_check(s, n).discrepancy for n in range(9))
    resolv = abs(logdet_via_resolvent(s, 4, t_nodes=20).logdet - toeplitz_det(s, 4).logdet)
    rho = 0.7
    ratios = []
    for n in (10, 20, 40):
        rep = lens_deform(s, n, rho=rho)
        # the unit circle keeps the diagonal factor, absorbed exactly by the model problem
        ratios.append(max(rep.vtilde_sup["inner"], rep.vtilde_sup["outer"]) / rho ** (n + 1))
    lens_ok = all(0.5 <= q <= 2 for q in ratios)
    try:
        symbol_from_function(lambda z: z)
        guard = False
    except NonzeroWinding:
        guard = True
    ok = limit <= 1e-6 and ident <= 1e-8 and resolv <= 1e-6 and lens_ok and guard
    criterion(7, ok, f"|log D_30 - 0.09| {limit:.1e}; Fredholm identity {ident:.1e}; resolvent {resolv:.1e}; "
                     f"lens/rho^(n+1) {', '.join(f'{q:.3f}' for q in ratios)}; winding guard {guard}")


def test_criterion_8_sine_kernel(criterion):
    k = sine_kernel(1.0)
    ny = nystrom_oracle(k, 60)
    L = resolvent_via_rhp(k, 40).kernel_matrix(0, ny.params)
    rel = float(np.max(np.abs(L - ny.L)) / np.max(np.abs(ny.L)))
    closure = max(closure_defect(L, ny.K, ny.weights), closure_defect(ny.L, ny.K, ny.weights))
    criterion(8, rel <= 1e-6 and closure <= 1e-6, f"relative sup difference {rel:.1e}; closure {closure:.1e}")


def test_criterion_9_tracy_widom(criterion):
    x = np.linspace(-5, 4, 901)
    F = np.asarray(tracy_widom_cdf(x))
    mono = float(np.min(np.diff(F)))
    dens = np.gradient(F, x)
    mass = float(np.trapezoid(dens, x)) if hasattr(np, "trapezoid") else float(np.trapz(dens, x))
    ok = mono >= 0 and F[-1] >= 1 - 1e-6 and abs(mass - 1) <= 1e-3
    criterion(9, ok, f"min increment {mono:.1e}; F(4) = {F[-1]:.9f}; density mass {mass:.6f}")


CLI_CASES = {
    "airy": ["airy", "--n", "9"],
    "pii": ["pii", "--q", "0.5", "--xgrid=-2:2:3"],
    "tw": ["pii", "tw", "--xgrid=-3:3:7"],
    "nls": ["nls", "--t", "0.1", "--xgrid=-1:1:3"],
    "mkdv": ["mkdv", "--t", "0.1", "--xgrid=-1:1:3"],
    "opoly": ["opoly", "--nmax", "3"],
    "szego": ["szego", "--logcoeffs", "1:0.3", "--nmax", "6", "--resolvent-nmax", "2"],
    "sine": ["sine", "--n", "30", "--counts", "30"],
    "solve": ["solve", "--contour", "CONTOUR", "--jump", "JUMP"],
}


def _cli(args, out, threads):
    cmd = [sys.executable, "-c", "from rhlab.cli import main; main()", *args, "--out", str(out),
           "--threads", str(threads)]
    proc = subprocess.run(cmd, capture_output=True, text=True, timeout=600)
    return proc.returncode, out.read_bytes() if out.exists() else b""


def test_criterion_10_determinism(criterion, tmp_path):
    (tmp_path / "c.json").write_text(json.dumps([{"kind": "circle", "center": [0, 0], "radius": 1}]))
    (tmp_path / "j.json").write_text(json.dumps({"builtin": "upper_gaussian", "c": 0.5}))
    bad = []
    for name, args in CLI_CASES.items():
        args = [str(tmp_path / "c.json") if a == "CONTOUR" else str(tmp_path / "j.json") if a == "JUMP" else a
                for a in args]
        digests = set()
        codes = set()
        for i, threads in enumerate((1, 3, 1)):
            code, data = _cli(args, tmp_path / f"{name}_{i}.csv", threads)
            codes.add(code)
            digests.add(hashlib.sha256(data).hexdigest())
        if len(digests) != 1 or codes != {0}:
            bad.append(f"{name} (exit {sorted(codes)})")
    criterion(10, not bad, "all subcommands identical" if not bad else "differ: " + ", ".join(bad))
