"""Command-line front end: each subcommand writes one CSV and one JSON manifest.

Exit status: 0 on success, 1 when a residual misses its tolerance, 2 on an
invalid configuration.
"""
from __future__ import annotations

import argparse
import json
import os
import platform
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
from threadpoolctl import threadpool_limits

from . import __version__
from . import errors as E
from .errors import ResidualAboveTolerance, RhlabError

EXIT_OK, EXIT_RESIDUAL, EXIT_CONFIG = 0, 1, 2

# errors that mean the request itself is invalid; any other library error is a numerical failure
CONFIG_ERRORS = (E.OverlappingArcs, E.DegenerateArc, E.UnsupportedBasis, E.PointOnContour, E.WindowExceeded,
                 E.QOutOfRange, E.NotPositive, E.SymbolNotAnalytic, E.NonzeroWinding, E.DegreeOutOfRange,
                 E.SingularJump)


class ConfigError(Exception):
    """Invalid configuration; ``where`` names the file/flag and field at fault."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


# ---------------------------------------------------------------------------
# output helpers

def fmt(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    if isinstance(v, str):
        return v
    v = float(v)
    if np.isnan(v):
        return "nan"
    return f"{v:.17g}"


def write_csv(path: Path, header, rows) -> None:
    lines = [",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if np.isfinite(f) else str(f)
    if isinstance(obj, Path):
        return str(obj)
    return obj


def thread_count(arg: int | None) -> int:
    if arg is not None:
        return max(1, int(arg))
    env = os.environ.get("RHLAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError("RHLAB_THREADS", f"not an integer: {env!r}")
    return os.cpu_count() or 1


def sweep(func, items, threads: int):
    """Ordered parallel map; BLAS is pinned to one thread per task so results do not depend on threads."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


def parse_grid(text: str, where: str) -> np.ndarray:
    """'a:b:n' (n equispaced points) or a comma-separated list."""
    try:
        if ":" in text:
            a, b, n = text.split(":")
            return np.linspace(float(a), float(b), int(n))
        return np.array([float(s) for s in text.split(",") if s.strip()])
    except ValueError:
        raise ConfigError(where, f"cannot parse grid {text!r} (use a:b:n or a comma list)")


# ---------------------------------------------------------------------------
# subcommands; each returns (header, rows, manifest extras, ok flag)

def cmd_airy(a, threads):
    from .airy import ai_quadrature, ai_series_minus, ai_series_plus

    if a.n < 1:
        raise ConfigError("--n", "must be positive")
    xs = np.linspace(a.xmin, a.xmax, a.n)

    def row(x):
        q = ai_quadrature(float(x))
        if x > 0:
            s = ai_series_plus(float(x), a.terms)
        elif x < 0:
            s = ai_series_minus(float(-x), a.terms)
        else:
            s = np.nan
        return [x, q, s, abs(q - s)]

    rows = sweep(row, xs, threads)
    return ["x", "quadrature", "series", "abs_diff"], rows, {"discretization": {"points": a.n}}, True


def cmd_pii(a, threads):
    from . import painleve2 as P

    xs = parse_grid(a.xgrid, "--xgrid")
    if a.mode == "tw":
        F = P.tracy_widom_cdf(xs)
        return ["x", "F"], [[x, f] for x, f in zip(xs, np.atleast_1d(F))], {"window": [-5, 4]}, True
    if a.q is None:
        raise ConfigError("--q", "required")
    p = -a.q if a.p is None else a.p
    r = 0.0 if a.r is None else a.r
    trip = P.StokesTriple(p, a.q, r)
    if not P.cyclic_check(trip):
        raise ConfigError("--p/--q/--r", "Stokes data violate p + q + r + pqr = 0")

    def rhp(x):
        if abs(x) > P.X_MAX:
            return np.nan, np.nan
        sol = P.solve_pii_rhp(trip, float(x), tol=a.tol, raise_on_residual=False)
        return P.extract_u(sol).real, sol.residual

    solved = sweep(rhp, xs, threads)
    u_ode = np.full(xs.size, np.nan)
    as_slice = abs(p + a.q) < 1e-14 and r == 0 and 0 < abs(a.q) < 1
    if as_slice:
        u0, u0p = P.pii_u_and_derivative(trip, a.seed)
        left, right = xs[xs <= a.seed], xs[xs > a.seed]
        try:
            if left.size:
                sol = P.pii_ode_continue(u0.real, u0p.real, a.seed, float(left.min()))
                u_ode[xs <= a.seed] = sol.sol(left)[0]
            if right.size:
                sol = P.pii_ode_continue(u0.real, u0p.real, a.seed, float(right.max()))
                u_ode[xs > a.seed] = sol.sol(right)[0]
        except RhlabError:
            pass
    rows = []
    ok = True
    for i, x in enumerate(xs):
        u, res = solved[i]
        am = P.asymptotics_minus(a.q, x) if (as_slice and x < 0) else np.nan
        ap = P.asymptotics_plus(a.q, x)[0] if (as_slice and x > 0) else np.nan
        if np.isfinite(res) and res > a.tol:
            ok = False
        rows.append([x, u, u_ode[i], am, ap, res])
    extras = {"tolerances": {"residual": a.tol}, "discretization": {"node_ladder": P.NODE_LADDER,
              "x_max_direct": P.X_MAX, "ode_seed": a.seed}, "stokes": [p, a.q, r]}
    return ["x", "u_rhp", "u_ode", "u_asym_minus", "u_asym_plus", "residual"], rows, extras, ok


def _load_potential(spec: str, where: str):
    from .scattering import Potential, gaussian

    if spec.startswith("gaussian"):
        parts = spec.split(":")
        try:
            amp = float(parts[1]) if len(parts) > 1 else 0.3
            width = float(parts[2]) if len(parts) > 2 else 1.0
        except ValueError:
            raise ConfigError(where, f"bad gaussian parameters in {spec!r}")
        return gaussian(amp, width)
    path = Path(spec)
    if not path.exists():
        raise ConfigError(where, f"no builtin or file named {spec!r}")
    try:
        data = np.loadtxt(path, delimiter=",", ndmin=2, comments="#")
    except ValueError as e:
        raise ConfigError(f"{path}", f"unreadable CSV ({e})")
    if data.shape[1] < 2:
        raise ConfigError(f"{path}", "need columns x, Re q[, Im q]")
    q = data[:, 1] + (1j * data[:, 2] if data.shape[1] > 2 else 0)
    return Potential.from_samples(data[:, 0], q)


def _cmd_scatter(a, threads, kind):
    from . import scattering as S

    pot = _load_potential(a.q0, "--q0")
    xs = parse_grid(a.xgrid, "--xgrid")
    if a.t < 0:
        raise ConfigError("--t", "must be nonnegative")
    r = S.direct_scattering(pot, kind)
    support_tol = a.support_tol if a.support_tol is not None else (1e-7 if kind == "mkdv" and a.t > 0 else None)

    def solve(x):
        rec = S.reconstruct(r, [x], a.t, tol=a.tol, support_tol=support_tol)
        return rec.values[0], rec.residuals[0]

    solved = sweep(solve, xs, threads)
    u = np.array([s[0] for s in solved])
    res = np.array([s[1] for s in solved])
    if a.t == 0:
        oracle = pot(xs).astype(complex)
    else:
        gx, field = S.pde_oracle(pot, a.t, kind)
        oracle = S.trig_interpolate(gx, field.astype(complex), xs)
    diff = np.abs(u - oracle)
    if kind == "mkdv":
        header = ["x", "u_rhp", "u_oracle", "diff"]
        rows = [[x, ur.real, uo.real, d] for x, ur, uo, d in zip(xs, u, oracle, diff)]
    else:
        header = ["x", "re_q_rhp", "im_q_rhp", "re_q_oracle", "im_q_oracle", "diff"]
        rows = [[x, ur.real, ur.imag, uo.real, uo.imag, d] for x, ur, uo, d in zip(xs, u, oracle, diff)]
    extras = {
        "tolerances": {"residual": a.tol, "support_tol": support_tol, "tail": S.TAIL_TOL,
                       "oracle_step_agreement": 1e-10},
        "discretization": {"Z": r.Z, "scattering_nodes": int(r.z.size), "max_line_nodes": S.MAX_LINE_NODES},
        "diagnostics": {"reflection_sup": r.sup_norm, "max_residual": float(res.max(initial=0.0)),
                        "max_imag": float(np.max(np.abs(u.imag))) if kind == "mkdv" else None,
                        "max_diff": float(diff.max(initial=0.0))},
    }
    return header, rows, extras, bool(np.all(res <= a.tol))


def cmd_mkdv(a, threads):
    return _cmd_scatter(a, threads, "mkdv")


def cmd_nls(a, threads):
    return _cmd_scatter(a, threads, "nls")


def cmd_opoly(a, threads):
    from . import orthopoly as O

    if a.weight in O.BUILTIN_WEIGHTS:
        w = O.BUILTIN_WEIGHTS[a.weight]()
    else:
        path = Path(a.weight)
        if not path.exists():
            raise ConfigError("--weight", f"no builtin or file named {a.weight!r}")
        try:
            data = np.loadtxt(path, delimiter=",", ndmin=2, comments="#")
        except ValueError as e:
            raise ConfigError(str(path), f"unreadable CSV ({e})")
        w = O.weight_from_samples(data[:, 0], data[:, 1], name=path.stem)
    if not (1 <= a.nmax <= O.N_MAX):
        raise ConfigError("--nmax", f"must lie in [1, {O.N_MAX}]")
    fam = O.gram_schmidt_monic(w, a.nmax + 1)
    Ys = sweep(lambda n: O.fik_build(w, n, fam, a.nodes), range(1, a.nmax + 2), threads)
    resid = sweep(O.fik_residual, Ys, threads)
    recs = [O.recurrence_from_rhp(Ys[i], Ys[i + 1]) for i in range(a.nmax)]
    tt = O.three_term_coeffs(recs, first=Ys[0], check=fam)
    rows = []
    ok = True
    for n in range(a.nmax):
        jr, nr = resid[n]
        ok = ok and jr <= a.tol and nr <= a.tol
        rows.append([n, float(np.real(tt.a[n])), float(tt.b[n]), jr, nr])
    extras = {"tolerances": {"residual": a.tol, "h_agreement": O.H_AGREEMENT, "oracle_match": 1e-8},
              "discretization": {"nodes": a.nodes}, "weight": w.name,
              "note": "row n holds a_n, b_n = sqrt(h_{n+1}/h_n) and the residuals of the degree-(n+1) solution"}
    return ["n", "a_n", "b_n", "jump_residual", "norm_residual"], rows, extras, ok


def parse_logcoeffs(text: str) -> dict:
    """'k:L_k,k:L_k' inline (complex values allowed) or a file with lines 'k, re[, im]'."""
    path = Path(text)
    out = {}
    if path.exists():
        for i, line in enumerate(path.read_text().splitlines(), 1):
            line = line.split("#")[0].strip()
            if not line:
                continue
            parts = [p.strip() for p in line.split(",")]
            try:
                k = int(parts[0])
                out[k] = complex(float(parts[1]), float(parts[2]) if len(parts) > 2 else 0.0)
            except (ValueError, IndexError):
                raise ConfigError(f"{path}:{i}", f"expected 'k, re[, im]', got {line!r}")
        return out
    for item in text.split(","):
        if not item.strip():
            continue
        try:
            k, v = item.split(":")
            out[int(k)] = complex(v.strip().replace("i", "j"))
        except ValueError:
            raise ConfigError("--logcoeffs", f"cannot parse entry {item!r} (expected k:value)")
    return out


def cmd_szego(a, threads):
    from . import toeplitz as T

    try:
        s = T.symbol_from_logcoeffs(parse_logcoeffs(a.logcoeffs))
    except ValueError as e:
        raise ConfigError("--logcoeffs", str(e))
    if a.nmax < 0:
        raise ConfigError("--nmax", "must be nonnegative")
    rho = T.default_rho(s) if a.rho is None else a.rho
    if not (s.r_inner < rho < 1):
        raise ConfigError("--rho", f"must lie in ({s.r_inner}, 1)")
    res_n = a.nmax if a.resolvent_nmax is None else min(a.resolvent_nmax, a.nmax)

    def row(n):
        direct = T.toeplitz_det(s, n).logdet
        asym = T.szego_asymptote(s, n)
        if n <= res_n:
            rl = T.logdet_via_resolvent(s, n, a.t_nodes)
            resolvent, worst = rl.logdet, float(rl.residuals.max())
        else:
            resolvent, worst = np.nan, 0.0
        lens = T.lens_deform(s, n, rho, tol=a.tol)
        return [n, direct, asym, resolvent, lens.vtilde_sup["inner"]], max(worst, lens.solution.residual)

    out = sweep(row, range(a.nmax + 1), threads)
    rows = [o[0] for o in out]
    worst = max(o[1] for o in out)
    extras = {"tolerances": {"residual": a.tol, "alias": T.ALIAS_TOL, "consistency": T.CONSISTENCY_TOL},
              "discretization": {"grid": s.grid, "t_nodes": a.t_nodes, "rho": rho},
              "diagnostics": {"max_residual": worst, "min_phi": s.min_phi, "alias_defect": s.alias_defect,
                              "consistency": s.consistency}}
    header = ["n", "logdet_direct", "asymptote", "logdet_resolvent", "lens_sup"]
    return header, rows, extras, worst <= a.tol


def cmd_sine(a, threads):
    from . import intops as I

    try:
        lo, hi = (float(v) for v in a.interval.split(","))
    except ValueError:
        raise ConfigError("--interval", f"expected 'a,b', got {a.interval!r}")
    if not hi > lo:
        raise ConfigError("--interval", "need a < b")
    k = I.sine_kernel(a.x, lo, hi)
    ny = I.nystrom_oracle(k, a.n)
    res = I.resolvent_via_rhp(k, a.counts, tol=a.tol)
    L = res.kernel_matrix(0, ny.params)
    rel = np.abs(L - ny.L).max(axis=1) / np.abs(ny.L).max()
    rows = [[float(z.real), L[i, i].real, L[i, i].imag, ny.L[i, i].real, ny.L[i, i].imag, rel[i]]
            for i, z in enumerate(ny.nodes)]
    closure = I.closure_defect(ny.L, ny.K, ny.weights)
    extras = {"tolerances": {"residual": a.tol, "side": 1e-8},
              "discretization": {"nystrom_nodes": a.n, "rhp_nodes": a.counts},
              "diagnostics": {"det_nystrom": ny.det.real, "max_rel_diff": float(rel.max()),
                              "closure": closure, "rhp_residual": res.solution.residual}}
    header = ["z", "re_L_rhp_diag", "im_L_rhp_diag", "re_L_nystrom_diag", "im_L_nystrom_diag", "row_rel_diff"]
    return header, rows, extras, res.solution.residual <= a.tol


def _matrix(obj, where: str) -> np.ndarray:
    try:
        return np.array([[complex(*e) if isinstance(e, list) else complex(e) for e in row] for row in obj])
    except (TypeError, ValueError):
        raise ConfigError(where, "matrix entries must be numbers or [re, im] pairs")


def load_jump(path: Path, contour):
    from .rhsolver import JumpField, constant_jump

    try:
        cfg = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(str(path), f"unreadable JSON ({e})")
    if "matrices" in cfg:
        mats = [_matrix(m, f"{path}: matrices[{i}]") for i, m in enumerate(cfg["matrices"])]
        if len(mats) != len(contour.arcs):
            raise ConfigError(f"{path}: matrices", f"{len(mats)} matrices for {len(contour.arcs)} arcs")
        return constant_jump(contour, mats)
    name = cfg.get("builtin")
    c = complex(cfg.get("c", 1.0)) if not isinstance(cfg.get("c"), list) else complex(*cfg["c"])
    if name in ("upper_gaussian", "lower_gaussian"):
        i, j = (0, 1) if name == "upper_gaussian" else (1, 0)

        def v(z, arc):
            z = np.atleast_1d(np.asarray(z, dtype=complex))
            out = np.zeros((z.size, 2, 2), dtype=complex)
            out[:, 0, 0] = out[:, 1, 1] = 1
            out[:, i, j] = c * np.exp(-z * z)
            return out

        return JumpField(contour, v, 2, unit_determinant=True, label=name)
    raise ConfigError(f"{path}: builtin", f"expected 'matrices' or builtin in (upper_gaussian, lower_gaussian), got {name!r}")


def cmd_solve(a, threads):
    from .contour import build_contour
    from .rhsolver import solve_normalized

    path = Path(a.contour)
    try:
        spec = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(str(path), f"unreadable JSON ({e})")
    if isinstance(spec, dict):
        spec = spec.get("arcs", [])
    if not isinstance(spec, list) or not spec:
        raise ConfigError(f"{path}: arcs", "expected a non-empty array of arc objects")
    for i, arc in enumerate(spec):
        if not isinstance(arc, dict) or "kind" not in arc:
            raise ConfigError(f"{path}: [{i}].kind", "missing")
    try:
        contour = build_contour(spec)
    except KeyError as e:
        raise ConfigError(f"{path}", f"missing field {e}")
    jump = load_jump(Path(a.jump), contour)
    sol = solve_normalized(jump, a.n, tol=a.tol, raise_on_residual=False)
    rows = []
    mp, mm = sol.m_plus, sol.m_minus
    for arc in range(len(contour.arcs)):
        for idx in range(sol.disc.offsets[arc], sol.disc.offsets[arc + 1]):
            z = sol.disc.nodes[idx]
            vals = []
            for M in (mp[idx], mm[idx]):
                for e in M.ravel():
                    vals += [e.real, e.imag]
            rows.append([arc, z.real, z.imag] + vals)
    header = ["arc", "re_z", "im_z"]
    for side in ("plus", "minus"):
        for i in range(2):
            for j in range(2):
                header += [f"re_m{side}_{i+1}{j+1}", f"im_m{side}_{i+1}{j+1}"]
    extras = {"tolerances": {"residual": a.tol},
              "discretization": {"counts": list(sol.disc.counts)},
              "report": {"residual": sol.residual, "condition": sol.condition, "m1": sol.m1}}
    return header, rows, extras, sol.residual <= a.tol


COMMANDS = {"airy": cmd_airy, "pii": cmd_pii, "mkdv": cmd_mkdv, "nls": cmd_nls, "opoly": cmd_opoly,
            "szego": cmd_szego, "sine": cmd_sine, "solve": cmd_solve}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rhlab", description="Numerical Riemann-Hilbert toolkit")
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="CSV path (manifest goes next to it with .json)")
    common.add_argument("--threads", type=int, default=None, help="worker threads (default RHLAB_THREADS or cores)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("airy", parents=[common])
    s.add_argument("--xmin", type=float, default=-10.0)
    s.add_argument("--xmax", type=float, default=10.0)
    s.add_argument("--n", type=int, default=81)
    s.add_argument("--terms", type=int, default=5)

    s = sub.add_parser("pii", parents=[common])
    s.add_argument("mode", nargs="?", choices=["u", "tw"], default="u")
    s.add_argument("--q", type=float)
    s.add_argument("--p", type=float)
    s.add_argument("--r", type=float)
    s.add_argument("--xgrid", default="-8:8:17")
    s.add_argument("--seed", type=float, default=4.0, help="RHP seed point for the ODE continuation")
    s.add_argument("--tol", type=float, default=1e-8)

    for name in ("mkdv", "nls"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("--q0", default="gaussian:0.3", help="gaussian[:amp[:width]] or CSV file x,Re q,Im q")
        s.add_argument("--t", type=float, default=0.0)
        s.add_argument("--xgrid", default="-3:3:13")
        s.add_argument("--tol", type=float, default=1e-8)
        s.add_argument("--support-tol", type=float, default=None)

    s = sub.add_parser("opoly", parents=[common])
    s.add_argument("--weight", default="hermite", help="hermite, quartic, or CSV file x,w")
    s.add_argument("--nmax", type=int, default=10)
    s.add_argument("--nodes", type=int, default=240)
    s.add_argument("--tol", type=float, default=1e-8)

    s = sub.add_parser("szego", parents=[common])
    s.add_argument("--logcoeffs", required=True, help="inline 'k:L_k,...' or file with lines 'k, re[, im]'")
    s.add_argument("--nmax", type=int, default=30)
    s.add_argument("--rho", type=float, default=None)
    s.add_argument("--t-nodes", type=int, default=20)
    s.add_argument("--resolvent-nmax", type=int, default=None)
    s.add_argument("--tol", type=float, default=1e-8)

    s = sub.add_parser("sine", parents=[common])
    s.add_argument("--x", type=float, default=1.0)
    s.add_argument("--interval", default="-1,1")
    s.add_argument("--n", type=int, default=60, help="Nyström nodes")
    s.add_argument("--counts", type=int, default=40, help="RHP collocation nodes")
    s.add_argument("--tol", type=float, default=1e-8)

    s = sub.add_parser("solve", parents=[common])
    s.add_argument("--contour", required=True)
    s.add_argument("--jump", required=True)
    s.add_argument("--n", type=int, default=64)
    s.add_argument("--tol", type=float, default=1e-8)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_CONFIG if e.code not in (0, None) else EXIT_OK
    out = Path(args.out) if args.out else Path(f"{args.command}.csv")
    inputs = [getattr(args, k, None) for k in ("contour", "jump", "q0", "weight", "logcoeffs")]
    for target in (out, out.with_suffix(".json")):
        if any(i and Path(i).exists() and Path(i).resolve() == target.resolve() for i in inputs):
            print(f"error: --out: {target} would overwrite an input file", file=sys.stderr)
            return EXIT_CONFIG
    start = time.perf_counter()
    try:
        threads = thread_count(args.threads)
        with threadpool_limits(limits=1):
            header, rows, extras, ok = COMMANDS[args.command](args, threads)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ResidualAboveTolerance as e:
        print(f"residual: {e}", file=sys.stderr)
        return EXIT_RESIDUAL
    except (CONFIG_ERRORS + (ValueError,)) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except RhlabError as e:
        print(f"failed: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_RESIDUAL
    write_csv(out, header, rows)
    params = {k: v for k, v in vars(args).items() if k not in ("out", "threads")}
    manifest = {
        "subcommand": args.command,
        "parameters": params,
        "threads": threads,
        "output": str(out),
        "rows": len(rows),
        "wall_time": time.perf_counter() - start,
        "version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "status": "ok" if ok else "residual_above_tolerance",
    }
    manifest.update(extras)
    out.with_suffix(".json").write_text(json.dumps(_jsonable(manifest), indent=2, sort_keys=True) + "\n")
    return EXIT_OK if ok else EXIT_RESIDUAL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
