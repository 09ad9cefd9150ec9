"""Command-line front end.

Subcommands map one-to-one onto the library layers: `norms`, `kernel`,
`solve`, and `capacity` expose single computations; `removability`,
`vanishing`, `moderate`, `boundary-probe`, and `converge` drive the
batch experiments.  Experiment parameters come from an optional
key = value config file with individual flags taking precedence.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import experiments as xp
from .capacity import CapacityOptions, CompactSet, capacity_pair
from .grids import Field, build_grid, dump_field_csv, load_field_csv
from .kernels import assemble
from .luxemburg import luxemburg_norm, orlicz_norm
from .maximal import llnl_norm
from .measures import BoundaryMeasure, InteriorMeasure, MeasureSpec
from .nfunctions import exponential_pair
from .solver import (keller_osserman_diagnostic, solve_boundary,
                     solve_interior, truncation_scheme)


def read_config(path: str) -> dict:
    """Parse a key = value file; '#' starts a comment, blanks ignored."""
    out = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line without '=': {raw.rstrip()}")
            key, val = line.split("=", 1)
            out[key.strip().replace("-", "_")] = val.strip()
    return out


def _parse_atoms(text: str, ndim: int):
    """'x,y:m;x,y:m' -> tuple of ((coords), mass)."""
    atoms = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        loc, _, mass = chunk.rpartition(":")
        coords = tuple(float(v) for v in loc.split(","))
        if len(coords) != ndim:
            raise ValueError(f"atom {chunk!r}: expected {ndim} coordinates")
        atoms.append((coords, float(mass)))
    return tuple(atoms)


_LIST_KEYS = {"ladder": int, "masses": float, "radii": int}
_SCALAR_KEYS = {"charge": float, "slope_tol": float, "residual_tol": float,
                "threshold_window": float, "seed": int,
                "shape": str, "target": str, "out": str}


def _experiment_config(args, experiment: str) -> xp.ExperimentConfig:
    data = {}
    if getattr(args, "config", None):
        data.update(read_config(args.config))
    for key in list(_LIST_KEYS) + list(_SCALAR_KEYS):
        val = getattr(args, key, None)
        if val is not None:
            data[key] = val
    kw = {"experiment": experiment}
    for key, conv in _LIST_KEYS.items():
        if key in data:
            v = data[key]
            if isinstance(v, str):
                v = [conv(t) for t in v.replace(";", ",").split(",") if t.strip()]
            kw[key] = tuple(v)
    for key, conv in _SCALAR_KEYS.items():
        if key in data:
            kw[key] = conv(data[key])
    return xp.ExperimentConfig(**kw)


def _add_experiment_flags(p):
    p.add_argument("--config", help="key = value parameter file")
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--shape", choices=("interval", "square", "disk"))
    p.add_argument("--ladder", help="comma-separated grid sizes, increasing")
    p.add_argument("--masses", help="comma-separated mass ladder")
    p.add_argument("--target", help="named target set (e.g. center, bottom-mid)")
    p.add_argument("--radii", help="comma-separated cutoff radii (rings)")
    p.add_argument("--charge", type=float)
    p.add_argument("--slope-tol", dest="slope_tol", type=float)
    p.add_argument("--residual-tol", dest="residual_tol", type=float)
    p.add_argument("--threshold-window", dest="threshold_window", type=float)
    p.add_argument("--seed", type=int)


def _field_from_args(args, grid):
    if args.field:
        f = load_field_csv(args.field)
        grid.require_same(f.grid)
        return f.values
    if args.constant is not None:
        return np.full(grid.n_interior, args.constant)
    c = grid.interior_coords
    r2 = np.sum((c - 0.5) ** 2, axis=1)
    return np.exp(-50.0 * r2)


def _cmd_norms(args) -> int:
    grid = build_grid(args.shape, args.n)
    nf = exponential_pair()
    vals = _field_from_args(args, grid)
    scale = grid.rho if args.scale_rho else None
    print(f"field: n={args.n} shape={args.shape} max|f|={np.abs(vals).max():.6g}")
    for side in ("principal", "conjugate"):
        v = luxemburg_norm(vals, grid, nf, side=side, weight=args.weight,
                           scale=scale)
        print(f"luxemburg[{side}] = {v:.12g}")
    print(f"orlicz[principal] = "
          f"{orlicz_norm(vals, grid, nf, 'principal', args.weight):.12g}")
    print(f"llnl = {llnl_norm(vals, grid, args.weight):.12g}")
    return 0


def _cmd_kernel(args) -> int:
    ks = assemble(build_grid(args.shape, args.n))
    grid = ks.grid
    print(f"shape={args.shape} n={args.n} interior={grid.n_interior} "
          f"boundary={grid.n_boundary}")
    print(f"principal eigenvalue = {ks.eigenvalue:.10g}")
    if args.shape == "square":
        ref = 2.0 * math.pi ** 2
        print(f"  2*pi^2 = {ref:.10g}  rel err = {abs(ks.eigenvalue - ref) / ref:.3e}")
    print(f"torsion max = {ks.zeta0.max():.10g}")
    ones = ks.solve(ks.coupling @ np.ones(grid.n_boundary))
    print(f"harmonic partition deviation = {np.abs(ones - 1.0).max():.3e}")
    if args.dump_torsion:
        dump_field_csv(Field(grid, ks.zeta0, np.zeros(grid.n_boundary)),
                       args.dump_torsion)
        print(f"torsion field written to {args.dump_torsion}")
    return 0


def _cmd_solve(args) -> int:
    ks = assemble(build_grid(args.shape, args.n))
    grid = ks.grid
    boundary_given = args.boundary_atoms or args.boundary_constant is not None
    interior_given = args.interior_atoms or args.interior_constant is not None
    if boundary_given and interior_given:
        raise SystemExit("choose boundary data or an interior source, not both")
    if boundary_given:
        atoms = _parse_atoms(args.boundary_atoms or "", grid.ndim)
        dens = (np.full(grid.n_boundary, args.boundary_constant)
                if args.boundary_constant is not None else None)
        spec = MeasureSpec("boundary", atoms=atoms, name="cli")
        mu = spec.instantiate(grid)
        mu = BoundaryMeasure(grid, atoms=mu.atoms, density=dens)
        if args.truncation:
            rep_t = truncation_scheme(mu, ks)
            print("level  mass        lhs          rhs         min_gain")
            for row in rep_t.levels:
                print(f"{row.level:<6g} {row.mass:<11.6g} {row.bound_lhs:<12.6g} "
                      f"{row.bound_rhs:<11.6g} {row.min_gain:.3e}")
            print(f"monotone={rep_t.monotone} saturated={rep_t.saturated}")
            rep = rep_t.final
        else:
            rep = solve_boundary(mu, ks)
    else:
        atoms = _parse_atoms(args.interior_atoms or "", grid.ndim)
        dens = (np.full(grid.n_interior, args.interior_constant)
                if args.interior_constant is not None else None)
        spec = MeasureSpec("interior", atoms=atoms, name="cli")
        mu = spec.instantiate(grid)
        mu = InteriorMeasure(grid, atoms=mu.atoms, density=dens)
        if args.truncation:
            print("truncation ladder applies to boundary data only; ignoring")
        rep = solve_interior(mu, ks)
    print(f"iterations = {rep.iterations}  residual = {rep.residual_history[-1]:.3e}")
    print(f"monotone descent = {rep.monotone}  supersolution path = {rep.supersolution}")
    print(f"int (e^u - 1) dx = {rep.absorption_dx:.10g}")
    print(f"int (e^u - 1) rho dx = {rep.absorption_rho:.10g}")
    print(f"int (u + (e^u - 1) zeta0) dx = {rep.mass_bound_integral:.10g}")
    print(f"max u = {rep.u.values.max():.10g}")
    print(f"KO diagnostic max(u + 2 ln rho) = {keller_osserman_diagnostic(rep.u):.6g}")
    if args.dump_u:
        dump_field_csv(rep.u, args.dump_u)
        print(f"solution written to {args.dump_u}")
    return 0


def _cmd_capacity(args) -> int:
    ks = assemble(build_grid(args.shape, args.n))
    grid = ks.grid
    nodes = xp.target_nodes(grid, args.kind, args.target)
    K = CompactSet(grid, nodes, args.kind, label=args.target)
    opts = CapacityOptions(dilation=args.dilation, collar=args.collar,
                           maxiter=args.maxiter, dual_iters=args.dual_iters,
                           constraint_norm=args.constraint_norm)
    est = capacity_pair(K, ks, opts)
    gap = (est.gap / est.primal_value if est.primal_value > 0 else float("nan"))
    print(f"target {args.kind}:{args.target} -> {nodes.size} node(s)")
    print(f"primal = {est.primal_value:.10g}   ({est.iterations} iterations total)")
    print(f"dual   = {est.dual_value:.10g}   (constraint norm: {opts.constraint_norm})")
    print(f"gap    = {100.0 * gap:.2f}% of primal")
    if args.dump_eta and est.eta_star is not None:
        if args.kind == "interior":
            dump_field_csv(Field(grid, est.eta_star, np.zeros(grid.n_boundary)),
                           args.dump_eta)
        else:
            np.savetxt(args.dump_eta, est.eta_star, delimiter=",", fmt="%.17g")
        print(f"minimiser written to {args.dump_eta}")
    return 0


def _cmd_removability(args) -> int:
    cfg = _experiment_config(args, "removability")
    res = xp.run_removability_threshold(cfg)
    print("mass     slope      verdict")
    for m, s, v in res.rows:
        print(f"{m:<8g} {s:<10.4f} {v}")
    print(f"threshold estimate = {res.threshold:.6g}  "
          f"(4*pi = {res.reference:.6g})  verdict: {res.verdict}")
    return 0 if res.verdict == "PASS" else 1


def _cmd_vanishing(args) -> int:
    cfg = _experiment_config(args, "vanishing")
    res = xp.run_vanishing_inequality(cfg)
    print("case              step  mass_on_K  absorption  holder      margin      pairing_gap")
    for case, step, t1, t2, t3, margin, gap in res.rows:
        print(f"{case:<17} {step:<5} {t1:<10.4g} {t2:<11.4g} {t3:<11.4g} "
              f"{margin:<11.4g} {gap:.3e}")
    print(f"min margin = {res.min_margin:.6g}  max pairing gap = {res.max_pairing_gap:.3e}")
    return 0 if res.min_margin > -1e-9 else 1


def _cmd_moderate(args) -> int:
    cfg = _experiment_config(args, "moderate")
    res = xp.run_moderate_extension(cfg)
    for rings, radius, corr in res.rows:
        print(f"rings={rings:<3} radius={radius:<8.4g} correction={corr:.6e}")
    print(f"decay slope = {res.decay_slope:.4g}  weak residual = {res.residual:.3e}")
    if res.punctured_gap == res.punctured_gap:
        print(f"max |punctured - full| = {res.punctured_gap:.3e}")
    print(f"verdict: {res.verdict}")
    return 0


def _cmd_boundary_probe(args) -> int:
    cfg = _experiment_config(args, "boundary-probe")
    res = xp.run_boundary_probe(cfg)
    print("mode     n     rings  est_integral  lln_norm")
    for mode, n, rings, est, nrm in res.shrink_rows + res.refine_rows:
        print(f"{mode:<8} {n:<5} {rings:<6} {est:<13.6g} {nrm:.6g}")
    print(f"shrink-mode slope of log(est) vs log(radius) = {res.est_slope:.4g}")
    return 0


def _cmd_converge(args) -> int:
    cfg = _experiment_config(args, "converge")
    res = xp.run_convergence_suite(cfg)
    print("check               shape     n    value         error        ratio")
    for check, shape, n, value, ref, err, ratio in res.rows:
        print(f"{check:<19} {shape:<9} {n:<4} {value:<13.6g} {err:<12.4g} "
              f"{ratio:.3g}" if ratio == ratio else
              f"{check:<19} {shape:<9} {n:<4} {value:<13.6g} {err:<12.4g} -")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="expcap",
        description="Orlicz-capacity and exponential-absorption experiments "
                    "on finite-difference grids.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norms", help="Orlicz norms of a field")
    p.add_argument("--shape", default="square",
                   choices=("interval", "square", "disk"))
    p.add_argument("--n", type=int, default=32)
    p.add_argument("--field", help="CSV produced by a --dump flag")
    p.add_argument("--constant", type=float, help="use a constant field")
    p.add_argument("--weight", default="lebesgue", choices=("lebesgue", "rho"))
    p.add_argument("--scale-rho", action="store_true",
                   help="divide the integrand argument by rho")
    p.set_defaults(fn=_cmd_norms)

    p = sub.add_parser("kernel", help="assemble and report kernel data")
    p.add_argument("--shape", default="square",
                   choices=("interval", "square", "disk"))
    p.add_argument("--n", type=int, default=32)
    p.add_argument("--dump-torsion", dest="dump_torsion")
    p.set_defaults(fn=_cmd_kernel)

    p = sub.add_parser("solve", help="nonlinear solve with measure data")
    p.add_argument("--shape", default="square",
                   choices=("interval", "square", "disk"))
    p.add_argument("--n", type=int, default=32)
    p.add_argument("--boundary-atoms", help="'x,y:mass;...' boundary atoms")
    p.add_argument("--boundary-constant", type=float,
                   help="constant boundary density")
    p.add_argument("--interior-atoms", help="'x,y:mass;...' interior atoms")
    p.add_argument("--interior-constant", type=float,
                   help="constant interior density")
    p.add_argument("--truncation", action="store_true",
                   help="run the truncation ladder before the final solve")
    p.add_argument("--dump-u", dest="dump_u")
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("capacity", help="primal and dual capacity of a set")
    p.add_argument("--shape", default="square",
                   choices=("interval", "square", "disk"))
    p.add_argument("--n", type=int, default=32)
    p.add_argument("--kind", default="interior",
                   choices=("interior", "boundary"))
    p.add_argument("--target", default="center")
    p.add_argument("--dilation", type=int, default=1)
    p.add_argument("--collar", type=int, default=0)
    p.add_argument("--maxiter", type=int, default=400)
    p.add_argument("--dual-iters", dest="dual_iters", type=int, default=800)
    p.add_argument("--constraint-norm", dest="constraint_norm",
                   default="orlicz", choices=("orlicz", "luxemburg"))
    p.add_argument("--dump-eta", dest="dump_eta")
    p.set_defaults(fn=_cmd_capacity)

    for name, fn, blurb in (
            ("removability", _cmd_removability, "point-mass threshold bracket"),
            ("vanishing", _cmd_vanishing, "vanishing-inequality table"),
            ("moderate", _cmd_moderate, "extension across a punctured set"),
            ("boundary-probe", _cmd_boundary_probe,
             "boundary removability integrand trends"),
            ("converge", _cmd_converge, "closed-form anchors over a ladder")):
        p = sub.add_parser(name, help=blurb)
        _add_experiment_flags(p)
        p.set_defaults(fn=fn)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
