"""Monotone solves of -Lap u + e^u - 1 = mu with interior or boundary data.

The nonlinear solve walks down from the linear potential (drop the
absorption term and you get a supersolution, since e^u - 1 >= 0).  Each
step solves the linearisation

    (A + diag(e^{u_m})) delta = -(A u_m + e^{u_m} - 1 - data)

and sets u_{m+1} = u_m + delta.  Because the absorption is convex and
A + positive diagonal is an M-matrix, every step has delta <= 0, every
iterate stays a supersolution, and the sequence decreases pointwise to
the discrete solution.  That is the discrete mirror of a
supersolution-comparison argument, with the bonus of quadratic local
convergence; a plain fixed-point sweep u <- data - G[e^u - 1]
alternates around the solution instead of descending and blows up for
atoms, so it is not used.

Also here: the truncation ladder (singular part kept, density capped at
k, caps released monotonically), the weak-residual evaluator, the
potential-integrability screen over a refinement ladder, and the
Keller-Osserman diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (NoConvergence, NotAdmissible, NotComparable,
                     SupportError, TestNotAdmissible)
from .grids import Field, WeightedGrid, build_grid, integrate
from .kernels import KernelSet, assemble, normal_derivative
from .measures import (BoundaryMeasure, InteriorMeasure, MeasureSpec,
                       compare_measures)
from .nfunctions import EXP_ARG_MAX

STEP_TOL = 1e-10
RES_TOL = 1e-8
MAX_OUTER = 100
SLOPE_TOL = 0.2


@dataclass
class SolveReport:
    """Converged solution plus the iteration evidence the tests inspect."""

    u: Field
    iterations: int
    residual_history: list
    step_history: list
    monotone: bool
    supersolution: bool
    absorption_dx: float       # int (e^u - 1) dx
    absorption_rho: float      # int (e^u - 1) rho dx
    mass_bound_integral: float  # int (u + (e^u - 1) zeta0) dx
    data_max: float


def _semilinear_solve(ks: KernelSet, rhs: np.ndarray, gdata: Optional[np.ndarray],
                      max_outer: int = MAX_OUTER) -> SolveReport:
    A = ks.lap
    b = rhs.copy()
    if gdata is not None:
        b = b + ks.coupling @ gdata
    u = ks.solve(b)
    if float(u.max(initial=0.0)) > EXP_ARG_MAX:
        raise NotAdmissible(
            "linear potential reaches %.1f; exp(u) overflows at this resolution"
            % float(u.max())
        )
    scale = max(1.0, float(np.abs(b).max(initial=0.0)))
    # While exp(u) dominates, each Newton step lowers u by roughly one, so
    # the budget has to grow with the height of the starting potential.
    limit = max(max_outer, int(np.ceil(float(u.max(initial=0.0)))) + 60)
    res_hist, step_hist = [], []
    monotone = True
    supersolution = True
    for it in range(1, limit + 1):
        r = A @ u + np.expm1(u) - b
        res_hist.append(float(np.abs(r).max()))
        if r.min() < -1e-9 * scale:
            supersolution = False
        J = (A + sp.diags(np.exp(u))).tocsc()
        delta = spla.splu(J).solve(-r)
        if delta.max() > 1e-11 * max(1.0, float(np.abs(u).max())):
            monotone = False
        u = u + delta
        step_hist.append(float(np.abs(delta).max()))
        if step_hist[-1] < STEP_TOL:
            r = A @ u + np.expm1(u) - b
            res_hist.append(float(np.abs(r).max()))
            if res_hist[-1] > RES_TOL * scale:
                raise NoConvergence(
                    "step converged but residual %.3e above tolerance" % res_hist[-1]
                )
            break
    else:
        raise NoConvergence(f"no convergence in {limit} outer steps")

    uf = Field(ks.grid, u,
               gdata.copy() if gdata is not None else np.zeros(ks.grid.n_boundary))
    absorb = np.expm1(u)
    return SolveReport(
        u=uf,
        iterations=it,
        residual_history=res_hist,
        step_history=step_hist,
        monotone=monotone,
        supersolution=supersolution,
        absorption_dx=integrate(absorb, ks.grid, "lebesgue"),
        absorption_rho=integrate(absorb, ks.grid, "rho"),
        mass_bound_integral=integrate(u + absorb * ks.zeta0, ks.grid, "lebesgue"),
        data_max=float(np.abs(b).max(initial=0.0)),
    )


def solve_interior(mu: InteriorMeasure, ks: KernelSet, **kw) -> SolveReport:
    """Zero boundary values, interior measure as source."""
    ks.grid.require_same(mu.grid)
    return _semilinear_solve(ks, mu.density_vector(), None, **kw)


def solve_boundary(mu: BoundaryMeasure, ks: KernelSet, **kw) -> SolveReport:
    """Boundary measure as Dirichlet data, no interior source."""
    ks.grid.require_same(mu.grid)
    return _semilinear_solve(ks, np.zeros(ks.grid.n_interior),
                             mu.dirichlet_data(), **kw)


@dataclass
class TruncationLevel:
    level: float
    mass: float
    bound_lhs: float
    bound_rhs: float
    min_gain: float  # min over nodes of u_k - u_{k-1}


@dataclass
class TruncationReport:
    levels: list
    final: SolveReport
    flux_constant: float
    total_mass: float
    monotone: bool
    saturated: bool


def truncation_scheme(mu: BoundaryMeasure, ks: KernelSet,
                     levels: Optional[Sequence[float]] = None) -> TruncationReport:
    """Truncation ladder mu_S + min(k, mu_R) with the uniform mass bound.

    At every level the report records

        int (u_k + (e^{u_k} - 1) zeta0) dx  <=  c * ||mu||,

    where c is the largest one-sided second-order outward derivative of
    the torsion field over boundary nodes; the discrete Green identity
    makes the left side equal a flux pairing dominated by c * mass, so
    the inequality is structural, not tuned.
    """
    ks.grid.require_same(mu.grid)
    if levels is None:
        levels = [2.0 ** j for j in range(0, 8)]
    sing, reg = mu.split()
    # screen the singular part: its harmonic extension must stay in exp range
    pot = ks.solve(ks.coupling @ sing.dirichlet_data())
    if float(pot.max(initial=0.0)) > EXP_ARG_MAX:
        raise NotAdmissible("singular part already overflows exp at this grid")

    zeta0 = Field(ks.grid, ks.zeta0, np.zeros(ks.grid.n_boundary))
    c_flux = float(np.abs(normal_derivative(ks, zeta0, order=2)).max())
    total = mu.total_mass

    rows = []
    prev_u = None
    monotone = True
    rep = None
    for k in sorted(levels):
        data_k = BoundaryMeasure(ks.grid, atoms=list(sing.atoms),
                                 density=(None if reg.density is None
                                          else np.minimum(reg.density, k)))
        rep = solve_boundary(data_k, ks)
        gain = 0.0
        if prev_u is not None:
            gain = float((rep.u.values - prev_u).min())
            if gain < -1e-12 * max(1.0, float(np.abs(prev_u).max())):
                monotone = False
        prev_u = rep.u.values
        rows.append(TruncationLevel(
            level=float(k),
            mass=data_k.total_mass,
            bound_lhs=rep.mass_bound_integral,
            bound_rhs=c_flux * total,
            min_gain=gain,
        ))
    dens_max = 0.0 if reg.density is None else float(reg.density.max(initial=0.0))
    return TruncationReport(
        levels=rows, final=rep, flux_constant=c_flux, total_mass=total,
        monotone=monotone, saturated=max(levels) >= dens_max,
    )


# ---------------------------------------------------------------------------
# weak residual

def default_test_basis(ks: KernelSet, count: int = 10) -> list:
    """Smooth discrete test fields vanishing on the boundary nodes.

    Square/interval: bubble-times-cosine products x(1-x) cos(i pi x)
    (and the y factor in 2D).  The bubble keeps the second normal
    derivative away from zero on the boundary, so one-sided flux errors
    show their leading O(h) term instead of a degenerate higher order.
    Disk: Green potentials of cosine sources, zero on the boundary ring
    by construction.
    """
    grid = ks.grid
    xs = grid.interior_coords
    tests = []
    if grid.shape == "interval":
        x = xs[:, 0]
        for j in range(count):
            tests.append(Field(grid, x * (1.0 - x) * np.cos(np.pi * j * x),
                               np.zeros(grid.n_boundary)))
        return tests
    pairs = [(i, j) for i in range(count) for j in range(count)]
    pairs.sort(key=lambda p: (p[0] ** 2 + p[1] ** 2, p))
    pairs = pairs[:count]
    x, y = xs[:, 0], xs[:, 1]
    bubble = x * (1.0 - x) * y * (1.0 - y)
    for i, j in pairs:
        vals = np.cos(np.pi * i * x) * np.cos(np.pi * j * y)
        if grid.shape == "disk":
            vals = ks.solve(vals)
            vals = vals / max(1e-300, np.abs(vals).max())
        else:
            vals = bubble * vals
        tests.append(Field(grid, vals, np.zeros(grid.n_boundary)))
    return tests


def weak_residual(u: Field, mu, ks: KernelSet, tests: Sequence[Field],
                  flux_order: int = 2):
    """R(zeta) per test; returns (max |R|, list of R).

    For boundary data: R = int(-u Lap zeta + (e^u - 1) zeta) dx
                           + int d(zeta)/dnu dmu.
    For interior data: R = int(-u Lap zeta + (e^u - 1) zeta) dx
                           - int zeta dmu.
    Tests must vanish at the boundary nodes (TestNotAdmissible otherwise).
    flux_order=1 uses the Green-identity-consistent flux (residuals at
    solver precision for converged solves); flux_order=2 the one-sided
    second-order difference (residuals of order h).
    """
    grid = ks.grid
    grid.require_same(u.grid)
    vol = grid.cell_measure
    absorb = np.expm1(u.values)
    out = []
    for zeta in tests:
        grid.require_same(zeta.grid)
        if zeta.boundary_values is not None and np.any(zeta.boundary_values != 0.0):
            raise TestNotAdmissible("test function must vanish on the boundary nodes")
        lap_zeta = ks.lap @ zeta.values  # = -Lap zeta with zero extension
        r = vol * float(u.values @ lap_zeta + absorb @ zeta.values)
        if isinstance(mu, BoundaryMeasure):
            dnu = normal_derivative(ks, zeta, order=flux_order)
            r += float(dnu @ mu.node_masses())
        elif isinstance(mu, InteriorMeasure):
            r -= float(zeta.values @ mu.node_masses())
        else:
            raise NotComparable("mu must be an InteriorMeasure or BoundaryMeasure")
        out.append(r)
    out = np.array(out)
    return float(np.abs(out).max()), out


# ---------------------------------------------------------------------------
# admissibility screen

@dataclass
class AdmissibilityReport:
    verdict: str          # "Admissible" | "DivergentTrend"
    slope: float
    table: list           # rows (n, h, integral)
    overflowed: bool


def admissibility_test(spec: MeasureSpec, ks: KernelSet,
                       refinements: Sequence[int],
                       slope_tol: float = SLOPE_TOL,
                       _cache: Optional[dict] = None) -> AdmissibilityReport:
    """Trend of I_h = int exp(potential) w dx over a refinement ladder.

    w = dx for interior specs, rho dx for boundary specs.  The verdict is
    DivergentTrend when the least-squares slope of log I_h against
    log(1/h) exceeds slope_tol (or the integrand overflows outright).
    At least three refinements are required for the fit.
    """
    if len(refinements) < 3:
        raise ValueError("need at least 3 refinements for a slope fit")
    shape = ks.grid.shape
    rows = []
    overflow = False
    for n in sorted(refinements):
        key = (shape, n)
        if _cache is not None and key in _cache:
            ks_n = _cache[key]
        elif n == ks.grid.n:
            ks_n = ks
        else:
            ks_n = assemble(build_grid(shape, n))
            if _cache is not None:
                _cache[key] = ks_n
        mu = spec.instantiate(ks_n.grid)
        if spec.kind == "interior":
            pot = ks_n.solve(mu.density_vector())
            wkind = "lebesgue"
        else:
            pot = ks_n.solve(ks_n.coupling @ mu.dirichlet_data())
            wkind = "rho"
        if float(pot.max(initial=0.0)) > EXP_ARG_MAX:
            overflow = True
            rows.append((n, ks_n.grid.h, np.inf))
            continue
        val = integrate(np.exp(pot), ks_n.grid, wkind)
        rows.append((n, ks_n.grid.h, val))

    if overflow:
        return AdmissibilityReport("DivergentTrend", np.inf, rows, True)
    logs = np.log([r[2] for r in rows])
    loginvh = np.log([1.0 / r[1] for r in rows])
    slope = float(np.polyfit(loginvh, logs, 1)[0])
    verdict = "DivergentTrend" if slope > slope_tol else "Admissible"
    return AdmissibilityReport(verdict, slope, rows, False)


def keller_osserman_diagnostic(u: Field) -> float:
    """D = max over interior nodes of u + 2 ln rho."""
    return float((u.values + 2.0 * np.log(u.grid.rho)).max())


def monotone_comparison(mu1, mu2, ks: KernelSet):
    """Solve both problems and check u1 <= u2 pointwise.

    Requires mu1 <= mu2 nodewise (NotComparable otherwise).  Returns
    (holds, margin) with margin = max(u1 - u2).
    """
    if not compare_measures(mu1, mu2):
        raise NotComparable("mu1 is not nodewise dominated by mu2")
    solve = solve_interior if isinstance(mu1, InteriorMeasure) else solve_boundary
    r1 = solve(mu1, ks)
    r2 = solve(mu2, ks)
    margin = float((r1.u.values - r2.u.values).max())
    return margin <= 1e-10 * max(1.0, float(np.abs(r2.u.values).max())), margin
