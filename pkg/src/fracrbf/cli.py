"""Batch experiment runner: reproduces the convergence tables, c* sweeps,
saturation-coefficient tables, Fourier-symbol scans, and matvec benchmarks as
CSV files.

Subcommands: solve | sweep | saturation | symbols | bench.
Exit codes: 0 success, 2 usage error, 1 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from .analysis import (SaturationQuery, SymbolQuery, saturation_coeffs,
                       symbol_collocation, symbol_galerkin, symbol_gram)
from .assembly import assemble_dense, assemble_toeplitz, toeplitz_matvec
from .boundary import (BoundaryLayer, CorrectionQuad, build_correction_field,
                       fit_auxiliary, solve_nonhomogeneous)
from .frlap_kernel import FracOrder
from .lattice import Box, Disk, Interval, generate_centers, parse_domain
from .problems import get_problem
from .solver import SolveOptions, condition_number, rms_error, solve

FLOAT_FMT = "%.17g"

# stage-1 collar settings used by the nonhomogeneous examples
_DEFAULT_LAYERS = {
    "ex4": dict(width=0.25, fit_spacing=1 / 32, fit_eps=1.4),
    "ex5": dict(width=1 / 16, fit_spacing=1 / 32, fit_eps=1.4),
}


class UsageError(ValueError):
    pass


def _fmt(v) -> str:
    if isinstance(v, float):
        return FLOAT_FMT % v
    return str(v)


def _write_csv(path, header, rows):
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _parse_list(text, cast=float):
    if text is None:
        return None
    vals = [cast(v) for v in str(text).split(",") if v.strip() != ""]
    if not vals:
        raise UsageError("empty list argument")
    return vals


def _grid_spacing(problem, n=None, h=None):
    """Per-problem spacing convention: --n maps through h = L/(N+1) on
    intervals and boxes (per-axis count); disks take --h directly."""
    dom = problem.domain
    if h is not None:
        return float(h)
    if n is None:
        raise UsageError("one of --n or --h is required")
    n = int(n)
    if isinstance(dom, Interval):
        return (dom.b - dom.a) / (n + 1)
    if isinstance(dom, Box):
        a, b = dom.bounds[0]
        return (b - a) / (n + 1)
    raise UsageError("disk domains need --h (no N convention)")


def run_solve(args) -> int:
    alphas = _parse_list(args.alpha)
    ns = _parse_list(args.n, int) if args.n else None
    hs = _parse_list(args.h) if args.h else None
    if ns is None and hs is None:
        raise UsageError("provide --n or --h")
    cstars = _parse_list(args.cstar) if args.cstar else [0.5]
    opts = SolveOptions(method=args.solver, tol=args.tol)
    rows = []
    for alpha in alphas:
        prob = get_problem(args.problem, alpha, s=args.s)
        if args.domain is not None:
            dom = parse_domain(args.domain)
            if dom != prob.domain:
                raise UsageError(
                    f"problem {args.problem} is manufactured on {prob.domain}; "
                    "--domain must match it")
        fit = field = None
        if args.problem in _DEFAULT_LAYERS:
            layer = BoundaryLayer(prob.domain, **_DEFAULT_LAYERS[args.problem])
            quad = CorrectionQuad(tail_p=2.0, tol=args.quad_tol)
        for cs in cstars:
            for key in (ns if ns is not None else hs):
                h = _grid_spacing(prob, n=key if ns is not None else None,
                                  h=key if hs is not None else None)
                if args.problem in _DEFAULT_LAYERS:
                    if fit is None:
                        fit = fit_auxiliary(prob.g, layer, tol=args.fit_tol)
                        field = build_correction_field(fit, prob.g, layer, quad)
                    t0 = time.perf_counter()
                    v_sol, _, u_eval, rep = solve_nonhomogeneous(
                        prob, layer, quad, h, cs, opts=opts, fit=fit, field=field)
                    wall = time.perf_counter() - t0
                    from .lattice import evaluation_grid
                    pts = evaluation_grid(prob.domain, h, args.refine)
                    err = u_eval(pts) - np.asarray(prob.u_exact(pts), dtype=float)
                    rms = float(np.sqrt(np.mean(err ** 2)))
                    grid_n = v_sol.grid.count
                    cond = float("nan")
                    iters = rep.iterations
                else:
                    order = FracOrder(alpha, prob.domain.dim)
                    grid = generate_centers(prob.domain, h)
                    eps = cs / h
                    use_fft = args.solver == "cg" or (
                        args.solver == "auto" and grid.count > opts.direct_limit)
                    stiff = assemble_toeplitz(grid, order, eps) if use_fft \
                        else assemble_dense(grid, order, eps)
                    rhs = np.asarray(prob.f(grid.points), dtype=float)
                    t0 = time.perf_counter()
                    sol, rep = solve(stiff, rhs, opts)
                    wall = time.perf_counter() - t0
                    rms = rms_error(sol, prob.u_exact, prob.domain, args.refine)
                    grid_n = grid.count
                    iters = rep.iterations
                    if args.cond == "none" or grid.count > 4096:
                        cond = float("nan")
                    else:
                        cond = condition_number(stiff, "exact_svd")
                rows.append((grid_n, h, cs, alpha, rms, cond, iters, wall))
    _write_csv(args.out, ["N", "h", "c_star", "alpha", "rms_error",
                          "condition", "iterations", "wall_time"], rows)
    return 0


def run_sweep(args) -> int:
    alphas = _parse_list(args.alpha)
    cstars = _parse_list(args.cstar)
    ns = _parse_list(args.n, int)
    rows = []
    for alpha in alphas:
        prob = get_problem(args.problem, alpha, s=args.s)
        order = FracOrder(alpha, prob.domain.dim)
        for cs in cstars:
            for n in ns:
                h = _grid_spacing(prob, n=n)
                grid = generate_centers(prob.domain, h)
                stiff = assemble_dense(grid, order, cs / h)
                sol, _ = solve(stiff, np.asarray(prob.f(grid.points), dtype=float),
                               SolveOptions(tol=args.tol))
                rms = rms_error(sol, prob.u_exact, prob.domain, args.refine)
                rows.append((cs, grid.count, rms))
    _write_csv(args.out, ["c_star", "N", "rms"], rows)
    return 0


def run_saturation(args) -> int:
    gammas = _parse_list(args.gamma)
    xs = _parse_list(args.x)
    betas = _parse_list(args.beta, int)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for g in gammas:
        for x in xs:
            for beta in betas:
                q = SaturationQuery(gamma=g, x=x, beta=beta,
                                    alpha_max=args.alpha_max)
                vals = saturation_coeffs(q)
                rows = [(k, float(v)) for k, v in enumerate(vals)]
                name = f"saturation_gamma{g:g}_x{x:g}_beta{beta}.csv"
                _write_csv(outdir / name, ["alpha_index", "value"], rows)
    return 0


def run_symbols(args) -> int:
    gammas = _parse_list(args.gamma)
    alphas = _parse_list(args.alpha)
    dims = _parse_list(args.dim, int)
    ts = np.linspace(-np.pi, np.pi, args.xi_points)[1:-1]
    rows = []
    for g in gammas:
        for alpha in alphas:
            for d in dims:
                q = SymbolQuery(h=args.h, gamma=g, alpha=alpha, dim=d)
                scale = (g / np.pi) ** (d / 2.0)
                for t in ts:
                    xi = np.full(d, t)
                    ec = symbol_collocation(q, xi)
                    eg = symbol_galerkin(q, xi)
                    rows.append((g, alpha, d, float(t), ec, eg,
                                 ec - scale * eg, symbol_gram(q, xi)))
    _write_csv(args.out, ["gamma", "alpha", "dim", "xi", "e_collocation",
                          "e_galerkin", "gap", "e_gram"], rows)
    return 0


def run_bench(args) -> int:
    hs = _parse_list(args.h)
    rng = np.random.default_rng(0)
    rows = []
    for h in hs:
        grid = generate_centers(Disk((0.0, 0.0), 1.0), h)
        order = FracOrder(args.bench_alpha, 2)
        topz = assemble_toeplitz(grid, order, 0.5 / h)
        dense = topz.to_dense()
        v = rng.standard_normal(grid.count)
        reps = max(3, args.reps)
        t0 = time.perf_counter()
        for _ in range(reps):
            toeplitz_matvec(topz, v)
        t_fft = (time.perf_counter() - t0) / reps
        t0 = time.perf_counter()
        for _ in range(reps):
            dense @ v
        t_dense = (time.perf_counter() - t0) / reps
        rows.append((grid.count, h, t_dense, t_fft, t_dense / t_fft))
    _write_csv(args.out, ["N", "h", "dense_matvec_s", "fft_matvec_s", "speedup"],
               rows)
    return 0


def _load_config(path):
    """Flat ``key = value`` config file; '#' starts a comment."""
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"malformed config line: {raw!r}")
        key, _, val = line.partition("=")
        out[key.strip().replace("-", "_")] = val.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fracrbf",
                                description="Gaussian-RBF collocation runner "
                                            "for fractional Poisson problems")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", default=None,
                        help="flat key=value config file (flags override)")
        sp.add_argument("--out", default="-", help="output CSV path (- = stdout)")

    sp = sub.add_parser("solve", help="convergence runs; one CSV row per grid")
    common(sp)
    sp.add_argument("--problem", default="ex1",
                    choices=["ex1", "ex2", "ex3", "ex4", "ex5"])
    sp.add_argument("--alpha", default="1.0", help="comma list")
    sp.add_argument("--cstar", default="0.5", help="comma list of c* = eps*h")
    sp.add_argument("--n", default=None, help="comma list of interior counts")
    sp.add_argument("--h", default=None, help="comma list of spacings")
    sp.add_argument("--s", type=float, default=4.0, help="ex1 smoothness power")
    sp.add_argument("--domain", default=None, help="override (ad hoc runs)")
    sp.add_argument("--refine", type=int, default=8)
    sp.add_argument("--tol", type=float, default=1e-13)
    sp.add_argument("--solver", default="auto", choices=["auto", "direct", "cg"])
    sp.add_argument("--cond", default="auto", choices=["auto", "none"])
    sp.add_argument("--fit-tol", type=float, default=1e-7)
    sp.add_argument("--quad-tol", type=float, default=1e-10)
    sp.set_defaults(fn=run_solve)

    sp = sub.add_parser("sweep", help="c* sweep; CSV of (c_star, N, rms)")
    common(sp)
    sp.add_argument("--problem", default="ex1", choices=["ex1", "ex2", "ex3"])
    sp.add_argument("--alpha", default="1.0")
    sp.add_argument("--cstar", default="0.5,0.65,0.8")
    sp.add_argument("--n", default="7,15,31,63,127")
    sp.add_argument("--s", type=float, default=4.0)
    sp.add_argument("--refine", type=int, default=8)
    sp.add_argument("--tol", type=float, default=1e-13)
    sp.set_defaults(fn=run_sweep)

    sp = sub.add_parser("saturation",
                        help="saturation-coefficient tables, one CSV per case")
    common(sp)
    sp.add_argument("--gamma", default="0.36,0.25")
    sp.add_argument("--x", default="0.25,0.5")
    sp.add_argument("--beta", default="0,2")
    sp.add_argument("--alpha-max", type=int, default=8)
    sp.set_defaults(fn=run_saturation, out="saturation_tables")

    sp = sub.add_parser("symbols", help="collocation/Galerkin symbol scan")
    common(sp)
    sp.add_argument("--gamma", default="0.25,0.36")
    sp.add_argument("--alpha", default="0.4,1.0,1.5")
    sp.add_argument("--dim", default="1,2")
    sp.add_argument("--h", type=float, default=0.125)
    sp.add_argument("--xi-points", type=int, default=101)
    sp.set_defaults(fn=run_symbols)

    sp = sub.add_parser("bench", help="dense vs FFT matvec timings (disk grids)")
    common(sp)
    sp.add_argument("--h", default="0.25,0.125,0.0625,0.03125")
    sp.add_argument("--bench-alpha", type=float, default=1.5)
    sp.add_argument("--reps", type=int, default=5)
    sp.set_defaults(fn=run_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.config:
            cfg = _load_config(args.config)
            given = set()
            for token in (argv if argv is not None else sys.argv[1:]):
                if token.startswith("--"):
                    given.add(token[2:].split("=")[0].replace("-", "_"))
            for key, val in cfg.items():
                if key in given or not hasattr(args, key):
                    continue  # flags override config; unknown keys ignored
                cur = getattr(args, key)
                setattr(args, key, type(cur)(val) if cur is not None else val)
        return args.fn(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # numerical failure
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
