"""Primal and dual capacity estimates for interior and boundary sets.

Primal programs minimise a conjugate-side Luxemburg norm over cutoff
fields eta pinned to 1 on the target set (optionally dilated by one
stencil ring), 0 on a collar inside the boundary, boxed to [0, 1]:

    interior:  inf || -Lap eta ||_{L_{P*}}                  (Lebesgue weight)
    boundary:  inf || rho^{-1} Lap(rho* P[eta]) ||_{L_{P*, rho}}

The boundary objective is evaluated with the scale trick
P*(w / (k rho)) rho inside the level integrand, so rho never divides a
field directly.  Both objectives are convex and C^1 (the gauge of a
smooth strictly convex N-function is differentiable away from 0), so a
box-constrained quasi-Newton search from a harmonic seed is reliable;
the reported value re-evaluates the exact norm at the final feasible
point, making every primal number a certified upper bound.

Dual programs maximise total mass over nonnegative measures on the set
subject to a unit potential-norm constraint.  By 1-homogeneity this is
a simplex problem: maximise m(K) / ||potential of m||.  The constraint
norm is the Amemiya-Orlicz norm by default, which is the exact dual of
the primal's gauge norm, so weak duality (dual <= primal) holds by
construction; the gauge-constraint variant from the capacity
definitions is available as an option but can overshoot the primal by
up to the factor-2 norm equivalence.  Every dual number comes from a
feasible (rescaled) measure, hence is a certified lower bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
import scipy.optimize as sopt

from .errors import BadLambda, Infeasible, SupportError
from .grids import Field, WeightedGrid, integrate
from .kernels import KernelSet
from .luxemburg import (luxemburg_norm, luxemburg_subgradient, orlicz_norm)
from .maximal import llnl_norm
from .measures import BoundaryMeasure
from .nfunctions import NFunction, exponential_pair


@dataclass(frozen=True)
class CompactSet:
    """A finite target set of node ordinals of a given kind."""

    grid: WeightedGrid
    nodes: np.ndarray
    kind: str  # "interior" | "boundary"
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "nodes",
                           np.unique(np.asarray(self.nodes, dtype=int)))
        if self.kind not in ("interior", "boundary"):
            raise ValueError("kind must be 'interior' or 'boundary'")
        count = (self.grid.n_interior if self.kind == "interior"
                 else self.grid.n_boundary)
        if self.nodes.size == 0:
            raise SupportError("target set is empty")
        if self.nodes.min() < 0 or self.nodes.max() >= count:
            raise SupportError("target set contains out-of-range nodes")


@dataclass
class CapacityOptions:
    dilation: int = 1          # stencil rings added to the pinned-1 set
    # Interior rings pinned to 0 before the boundary.  The stencil already
    # extends every field by zero at boundary nodes, which is the discrete
    # compact-support condition, so the default adds no extra ring: a hard
    # ring at h > 0 inflates the primal by a boundary-layer cost the dual
    # program never pays.
    collar: int = 0
    maxiter: int = 600         # quasi-Newton iteration cap (primal)
    dual_iters: int = 800      # projected ascent steps (dual)
    dual_step: float = 0.5     # initial step scale a in a/sqrt(t)
    constraint_norm: str = "orlicz"  # "orlicz" | "luxemburg"
    seed: int = 0


@dataclass
class CapacityEstimate:
    """One- or two-sided capacity record.

    Primal operations fill primal_value and eta_star; dual operations
    fill dual_value and the measure; capacity_pair fills both.  The
    primal is a certified upper bound (value of the exact norm at a
    feasible point), the dual a certified lower bound (mass of a
    feasible measure).
    """

    kind: str
    primal_value: Optional[float] = None
    dual_value: Optional[float] = None
    eta_star: Optional[np.ndarray] = None
    mu_nodes: Optional[np.ndarray] = None
    mu_masses: Optional[np.ndarray] = None
    iterations: int = 0
    converged: bool = True
    aux: dict = field(default_factory=dict)

    @property
    def gap(self) -> float:
        if self.primal_value is None or self.dual_value is None:
            return float("nan")
        return self.primal_value - self.dual_value


# ---------------------------------------------------------------------------
# adjacency helpers

def _interior_adjacency(ks: KernelSet):
    A = ks.lap.tocsr()
    adj = []
    for i in range(A.shape[0]):
        cols = A.indices[A.indptr[i]:A.indptr[i + 1]]
        adj.append(cols[cols != i])
    return adj


def dilate_interior(ks: KernelSet, nodes: np.ndarray, rings: int) -> np.ndarray:
    """Close `nodes` under `rings` steps of the interior stencil graph."""
    out = set(int(v) for v in nodes)
    adj = _interior_adjacency(ks)
    frontier = set(out)
    for _ in range(rings):
        nxt = set()
        for i in frontier:
            nxt.update(int(j) for j in adj[i])
        nxt -= out
        out |= nxt
        frontier = nxt
    return np.array(sorted(out), dtype=int)


def boundary_collar(ks: KernelSet, rings: int) -> np.ndarray:
    """Interior nodes within `rings` graph steps of the boundary.

    rings=0 returns the empty set: boundary nodes themselves always
    carry zero through the stencil, so no interior node needs pinning.
    """
    if rings <= 0:
        return np.array([], dtype=int)
    first = np.flatnonzero(np.asarray(ks.coupling.sum(axis=1)).ravel() > 0)
    if rings == 1:
        return first
    return dilate_interior(ks, first, rings - 1)


def _boundary_graph(grid: WeightedGrid):
    """Adjacency among boundary nodes (8-neighbourhood on the lattice)."""
    if grid.ndim == 1:
        return [(), ()]
    m = grid.n + 2
    where = {int(l): b for b, l in enumerate(grid.boundary_lattice)}
    adj = []
    for l in grid.boundary_lattice:
        i, j = int(l) // m, int(l) % m
        nbrs = []
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                if di == dj == 0:
                    continue
                i2, j2 = i + di, j + dj
                if 0 <= i2 < m and 0 <= j2 < m:
                    o = where.get(i2 * m + j2)
                    if o is not None:
                        nbrs.append(o)
        adj.append(tuple(nbrs))
    return adj


def dilate_boundary(grid: WeightedGrid, nodes: np.ndarray, rings: int) -> np.ndarray:
    out = set(int(v) for v in nodes)
    adj = _boundary_graph(grid)
    frontier = set(out)
    for _ in range(rings):
        nxt = set()
        for i in frontier:
            nxt.update(adj[i])
        nxt -= out
        out |= nxt
        frontier = nxt
    return np.array(sorted(out), dtype=int)


# ---------------------------------------------------------------------------
# primal programs

def _box_minimise(objective, x0, free_bounds, maxiter):
    res = sopt.minimize(objective, x0, jac=True, method="L-BFGS-B",
                        bounds=free_bounds,
                        options={"maxiter": maxiter, "ftol": 1e-14,
                                 "gtol": 1e-12, "maxcor": 25})
    return res


def _amemiya_argmin(v: np.ndarray, W: np.ndarray, nf: NFunction) -> float:
    """k minimising (1 + sum P(k v) W) / k (coarse grid + golden refine)."""
    fmax = float(np.abs(v).max())
    grid_k = np.geomspace(1e-9 / fmax, 650.0 / fmax, 600)
    vals = np.array([(1.0 + float(nf.P(k * v) @ W)) / k for k in grid_k])
    j = int(np.argmin(vals))
    lo = grid_k[max(0, j - 1)]
    hi = grid_k[min(grid_k.size - 1, j + 1)]
    phi = 0.5 * (math.sqrt(5.0) - 1.0)
    a, b = lo, hi
    fa_ = None
    for _ in range(80):
        m1 = b - phi * (b - a)
        m2 = a + phi * (b - a)
        f1 = (1.0 + float(nf.P(m1 * v) @ W)) / m1
        f2 = (1.0 + float(nf.P(m2 * v) @ W)) / m2
        if f1 <= f2:
            b = m2
        else:
            a = m1
    return 0.5 * (a + b)


def _green_columns(ks: KernelSet, nodes: np.ndarray) -> np.ndarray:
    grid = ks.grid
    e = np.zeros((grid.n_interior, nodes.size))
    for j, node in enumerate(nodes):
        e[node, j] = 1.0 / grid.cell_measure
    return ks.solve(e)


def _poisson_columns(ks: KernelSet, nodes: np.ndarray) -> np.ndarray:
    grid = ks.grid
    g = np.zeros((grid.n_boundary, nodes.size))
    for j, node in enumerate(nodes):
        g[node, j] = 1.0 / grid.boundary_cell_measure
    return ks.solve(ks.coupling @ g)


def primal_interior(K: CompactSet, ks: KernelSet,
                    opts: CapacityOptions = CapacityOptions()) -> CapacityEstimate:
    """Certified upper bound for the interior capacity of K.

    Seeds the box-constrained search with the duality alignment
    witness: for the best dual measure mu on K, the field
    G[p(khat G[mu])] rescaled to reach 1 on the pinned set achieves
    Hoelder equality in the unconstrained program, so the polish starts
    essentially at the optimum instead of crawling down an
    ill-conditioned valley.
    """
    grid = ks.grid
    grid.require_same(K.grid)
    if K.kind != "interior":
        raise SupportError("primal_interior needs an interior target set")
    nf = exponential_pair()
    ones = (dilate_interior(ks, K.nodes, opts.dilation)
            if opts.dilation > 0 else K.nodes.copy())
    zeros = boundary_collar(ks, opts.collar)
    if np.intersect1d(ones, zeros).size:
        raise Infeasible("target set (dilated) touches the boundary collar")

    ni = grid.n_interior
    fixed = np.zeros(ni)
    fixed[ones] = 1.0
    mask_free = np.ones(ni, dtype=bool)
    mask_free[ones] = False
    mask_free[zeros] = False
    free_idx = np.flatnonzero(mask_free)

    def full_of(xf):
        full = fixed.copy()
        full[free_idx] = xf
        return full

    def norm_of(eta):
        return luxemburg_norm(ks.lap @ eta, grid, nf, side="conjugate",
                              weight="lebesgue")

    seeds = []
    # harmonic profile between the pinned levels
    eta_h = fixed.copy()
    if free_idx.size:
        A = ks.lap
        sub = A[free_idx][:, free_idx].tocsc()
        import scipy.sparse.linalg as spla
        eta_h[free_idx] = np.clip(
            spla.splu(sub).solve(-(A[free_idx] @ fixed)), 0.0, 1.0)
    seeds.append(eta_h)
    # alignment witness from the dual measure: impose the aligned source
    # p(khat G[mu]) on the free rows of the pinned system, so the collar
    # and the pin are satisfied without stomping values afterwards
    # (overwriting a solved field with zeros puts O(1/h^2) jumps into
    # its Laplacian and ruins the seed).
    dual = dual_interior(K, ks, opts)
    pot = _green_columns(ks, dual.mu_nodes) @ dual.mu_masses
    if float(pot.max(initial=0.0)) > 0 and free_idx.size:
        W = grid.weight_vector("lebesgue")
        khat = _amemiya_argmin(pot, W, nf)
        # Young equality makes p(khat pot) the unit-norm aligned source,
        # so the optimiser target is dual_value times it.
        w_star = dual.dual_value * nf.p(khat * pot)
        A = ks.lap
        sub = A[free_idx][:, free_idx].tocsc()
        import scipy.sparse.linalg as spla
        rhs = w_star[free_idx] - A[free_idx] @ fixed
        eta_w = fixed.copy()
        eta_w[free_idx] = np.clip(spla.splu(sub).solve(rhs), 0.0, 1.0)
        seeds.append(eta_w)

    evals = {"n": 0}

    def objective(xf):
        evals["n"] += 1
        v = ks.lap @ full_of(xf)
        k, g = luxemburg_subgradient(v, grid, nf, side="conjugate",
                                     weight="lebesgue")
        return k, (ks.lap @ g)[free_idx]

    eta = min(seeds, key=norm_of)
    converged = True
    iters = 0
    if free_idx.size:
        res = _box_minimise(objective, eta[free_idx],
                            [(0.0, 1.0)] * free_idx.size, opts.maxiter)
        cand = full_of(res.x)
        if norm_of(cand) <= norm_of(eta):
            eta = cand
        iters = int(res.nit)
        converged = bool(res.success)
    value = norm_of(eta)
    alt = llnl_norm(ks.lap @ eta, grid, "lebesgue")
    return CapacityEstimate("primal-interior", primal_value=float(value),
                            eta_star=eta, iterations=iters,
                            converged=converged,
                            aux={"evaluations": evals["n"],
                                 "maximal_functional": alt,
                                 "ones": ones, "zeros": zeros})


def _boundary_objective_pieces(ks: KernelSet, nf: NFunction):
    grid = ks.grid
    rho = grid.rho
    rstar = ks.rho_star

    def forward(eta_b):
        v = ks.solve(ks.coupling @ eta_b)
        w = ks.lap @ (rstar * v)
        return w

    def norm_and_grad(eta_b):
        w = forward(eta_b)
        k, gw = luxemburg_subgradient(w, grid, nf, side="conjugate",
                                      weight="rho", scale=rho)
        # adjoint of eta -> w = A diag(rho*) A^{-1} B
        g = ks.coupling.T @ ks.solve(rstar * (ks.lap @ gw))
        return k, g

    return forward, norm_and_grad


def boundary_test_norm(ks: KernelSet, eta_b: np.ndarray) -> float:
    """|| rho^{-1} Lap(rho* P[eta]) ||_{L_{P*, rho}} for boundary values eta."""
    nf = exponential_pair()
    forward, _ = _boundary_objective_pieces(ks, nf)
    return luxemburg_norm(forward(np.asarray(eta_b, dtype=float)), ks.grid, nf,
                          side="conjugate", weight="rho", scale=ks.grid.rho)


def _graph_distance(adj, n: int, sources: np.ndarray) -> np.ndarray:
    dist = np.full(n, np.inf)
    frontier = [int(v) for v in sources]
    for s in frontier:
        dist[s] = 0.0
    d = 0
    while frontier:
        d += 1
        nxt = []
        for b in frontier:
            for j in adj[b]:
                if dist[j] > d:
                    dist[j] = d
                    nxt.append(j)
        frontier = nxt
    return dist


def primal_boundary(K: CompactSet, ks: KernelSet,
                    opts: CapacityOptions = CapacityOptions()) -> CapacityEstimate:
    """Certified upper bound for the boundary capacity of K.

    Seeds: graph-distance tents of several widths around the pinned
    set plus a smoothed indicator; the best seed is polished by the
    box-constrained quasi-Newton search and the reported value is the
    exact norm at the final point.
    """
    grid = ks.grid
    grid.require_same(K.grid)
    if K.kind != "boundary":
        raise SupportError("primal_boundary needs a boundary target set")
    nf = exponential_pair()
    ones = (dilate_boundary(grid, K.nodes, opts.dilation)
            if opts.dilation > 0 else K.nodes.copy())
    nb = grid.n_boundary
    if ones.size >= nb:
        raise Infeasible("dilated target set covers the whole boundary")
    fixed = np.zeros(nb)
    fixed[ones] = 1.0
    mask_free = np.ones(nb, dtype=bool)
    mask_free[ones] = False
    free_idx = np.flatnonzero(mask_free)

    forward, norm_and_grad = _boundary_objective_pieces(ks, nf)

    def norm_of(eta_b):
        return luxemburg_norm(forward(eta_b), grid, nf, side="conjugate",
                              weight="rho", scale=grid.rho)

    adj = _boundary_graph(grid)
    dist = _graph_distance(adj, nb, ones)
    seeds = []
    for width in (2.0, 4.0, 8.0, 16.0):
        tent = np.maximum(0.0, 1.0 - dist / width)
        tent[ones] = 1.0
        seeds.append(tent)
    # dual-aligned profile: push the aligned source through the Green
    # operator, divide out rho_star, and read the ratio one ring inside
    # the boundary; both factors vanish linearly there so the trace is
    # O(1) and tracks the optimal shape better than any tent
    dual = dual_boundary(K, ks, opts)
    pot = _poisson_columns(ks, dual.mu_nodes) @ dual.mu_masses
    if float(pot.max(initial=0.0)) > 0:
        Wr = grid.weight_vector("rho")
        khat = _amemiya_argmin(pot, Wr, nf)
        ratio = ks.solve(grid.rho * nf.p(khat * pot)) / ks.rho_star
        prof = np.zeros(nb)
        for b, nbrs in enumerate(grid.boundary_adjacent):
            if len(nbrs):
                prof[b] = float(np.mean(ratio[list(nbrs)]))
        floor = float(prof[ones].min())
        if floor > 0:
            prof = np.clip(prof / floor, 0.0, 1.0)
            prof[ones] = 1.0
            seeds.append(prof)
    eta = min(seeds, key=norm_of)

    evals = {"n": 0}

    def objective(xf):
        evals["n"] += 1
        full = fixed.copy()
        full[free_idx] = xf
        k, g = norm_and_grad(full)
        return k, g[free_idx]

    converged = True
    iters = 0
    if free_idx.size:
        res = _box_minimise(objective, eta[free_idx],
                            [(0.0, 1.0)] * free_idx.size, opts.maxiter)
        cand = fixed.copy()
        cand[free_idx] = res.x
        if norm_of(cand) <= norm_of(eta):
            eta = cand
        iters = int(res.nit)
        converged = bool(res.success)
    value = norm_of(eta)
    return CapacityEstimate("primal-boundary", primal_value=float(value),
                            eta_star=eta, iterations=iters,
                            converged=converged,
                            aux={"evaluations": evals["n"], "ones": ones})


# ---------------------------------------------------------------------------
# dual programs

def _project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    rho_idx = np.flatnonzero(u - css / np.arange(1, v.size + 1) > 0)
    if rho_idx.size == 0:
        out = np.zeros_like(v)
        out[np.argmax(v)] = 1.0
        return out
    r = rho_idx[-1]
    theta = css[r] / (r + 1.0)
    return np.maximum(v - theta, 0.0)


def _orlicz_norm_and_grad(v, grid, nf, weight):
    """Amemiya norm with its gradient via the envelope theorem."""
    W = grid.weight_vector(weight)
    val = orlicz_norm(v, grid, nf, side="principal", weight=weight)
    khat = _amemiya_argmin(v, W, nf)
    grad = nf.p(khat * v) * W
    return val, grad


def _dual_program(columns: np.ndarray, grid, nf, weight, opts: CapacityOptions):
    """Maximise mass(m)/||columns @ m|| over the simplex; certified values."""
    K = columns.shape[1]
    if K == 1:
        if opts.constraint_norm == "orlicz":
            nrm = orlicz_norm(columns[:, 0], grid, nf, "principal", weight)
        else:
            nrm = luxemburg_norm(columns[:, 0], grid, nf, "principal", weight)
        return np.array([1.0 / nrm]), 1.0 / nrm, 0

    def norm_grad(v):
        if opts.constraint_norm == "orlicz":
            return _orlicz_norm_and_grad(v, grid, nf, weight)
        k, g = luxemburg_subgradient(v, grid, nf, side="principal",
                                     weight=weight)
        return k, g

    m = np.full(K, 1.0 / K)
    best_val, best_m = -np.inf, m.copy()
    v = columns @ m
    nrm, g = norm_grad(v)
    step0 = opts.dual_step * nrm / max(1e-300, np.abs(columns.T @ g).max())
    for t in range(1, opts.dual_iters + 1):
        v = columns @ m
        nrm, g = norm_grad(v)
        val = m.sum() / nrm
        if val > best_val:
            best_val, best_m = val, m.copy()
        # ascend d(sum m / norm) = (norm * 1 - sum m * grad) / norm^2
        gm = (np.ones(K) * nrm - m.sum() * (columns.T @ g)) / nrm ** 2
        m = _project_simplex(m + (step0 / np.sqrt(t)) * gm)
    masses = best_m * best_val  # rescaled so the constraint is active
    return masses, best_val, opts.dual_iters


def dual_interior(K: CompactSet, ks: KernelSet,
                  opts: CapacityOptions = CapacityOptions()) -> CapacityEstimate:
    """Certified lower bound: max mass on K with unit Green-potential norm.

    The measure lives on K dilated by opts.dilation rings, the same set
    the primal pins at one, so the two programs bracket the capacity of
    a single discrete set instead of two nested ones.
    """
    grid = ks.grid
    grid.require_same(K.grid)
    if K.kind != "interior":
        raise SupportError("dual_interior needs an interior target set")
    nf = exponential_pair()
    support = (dilate_interior(ks, K.nodes, opts.dilation)
               if opts.dilation > 0 else K.nodes.copy())
    cols = _green_columns(ks, support)
    masses, value, iters = _dual_program(cols, grid, nf, "lebesgue", opts)
    return CapacityEstimate("dual-interior", dual_value=float(value),
                            mu_nodes=support, mu_masses=masses,
                            iterations=iters,
                            aux={"constraint_norm": opts.constraint_norm})


def dual_boundary(K: CompactSet, ks: KernelSet,
                  opts: CapacityOptions = CapacityOptions()) -> CapacityEstimate:
    """Certified lower bound: max mass on K with unit harmonic-extension norm."""
    grid = ks.grid
    grid.require_same(K.grid)
    if K.kind != "boundary":
        raise SupportError("dual_boundary needs a boundary target set")
    nf = exponential_pair()
    support = (dilate_boundary(grid, K.nodes, opts.dilation)
               if opts.dilation > 0 else K.nodes.copy())
    cols = _poisson_columns(ks, support)
    masses, value, iters = _dual_program(cols, grid, nf, "rho", opts)
    return CapacityEstimate("dual-boundary", dual_value=float(value),
                            mu_nodes=support, mu_masses=masses,
                            iterations=iters,
                            aux={"constraint_norm": opts.constraint_norm})


def capacity_pair(K: CompactSet, ks: KernelSet,
                  opts: CapacityOptions = CapacityOptions()) -> CapacityEstimate:
    """Both sides of the duality sandwich in one record."""
    if K.kind == "interior":
        pri = primal_interior(K, ks, opts)
        dua = dual_interior(K, ks, opts)
    else:
        pri = primal_boundary(K, ks, opts)
        dua = dual_boundary(K, ks, opts)
    aux = dict(dua.aux)
    aux.update(pri.aux)
    return CapacityEstimate(
        kind=f"pair-{K.kind}",
        primal_value=pri.primal_value,
        dual_value=dua.dual_value,
        eta_star=pri.eta_star,
        mu_nodes=dua.mu_nodes,
        mu_masses=dua.mu_masses,
        iterations=pri.iterations + dua.iterations,
        converged=pri.converged and dua.converged,
        aux=aux,
    )


# ---------------------------------------------------------------------------
# pairings and side functionals

def pairing(eta_b: np.ndarray, mu: BoundaryMeasure, ks: KernelSet):
    """Two evaluation orders of -int P[mu] Lap(rho* P[eta]) dx.

    Returns (a, b): a integrates x first against the assembled potential
    of mu; b pairs each boundary source node against the kernel column,
    then sums in y.  For exact arithmetic a = b (discrete Fubini); the
    difference is pure floating-point reassociation.
    """
    grid = ks.grid
    grid.require_same(mu.grid)
    eta_b = np.asarray(eta_b, dtype=float)
    v = ks.solve(ks.coupling @ eta_b)
    z = ks.rho_star * v
    minus_lap_z = ks.lap @ z
    vol = grid.cell_measure

    pot = ks.solve(ks.coupling @ mu.dirichlet_data())
    a = vol * float(pot @ minus_lap_z)

    masses = mu.node_masses()
    idx = np.flatnonzero(masses > 0)
    b = 0.0
    if idx.size:
        G = np.zeros(grid.n_boundary)
        cols = np.empty((grid.n_interior, idx.size))
        for j, node in enumerate(idx):
            G[:] = 0.0
            G[node] = 1.0 / grid.boundary_cell_measure
            cols[:, j] = ks.solve(ks.coupling @ G)
        inner = vol * (cols.T @ minus_lap_z)
        b = float(inner @ masses[idx])
    return a, b


@dataclass
class ChebyshevReport:
    bound: float
    primal_value: float
    level_set_size: int
    satisfied: bool


def chebyshev_bound(eta: Field, lam: float, ks: KernelSet,
                    opts: CapacityOptions = CapacityOptions(),
                    slack: float = 0.15) -> ChebyshevReport:
    """Level-set capacity bound (||eta||_L1 + ||Lap eta||_{L_P*}) / lam.

    Compares the bound against the measured primal value of the raw
    superlevel set {eta >= lam}: eta/lam witnesses feasibility for that
    set itself, not for a dilated neighbourhood, so the comparison runs
    with dilation zero whatever opts carries.  `satisfied` allows the
    optimizer slack fraction on top of the bound.  For fat level sets
    the pinned program (eta equal to one on the whole set) can sit above
    the bound legitimately: the witness eta/lam exceeds one inside the
    set and is not admissible for the pin.
    """
    if not (lam > 0):
        raise BadLambda("level must be strictly positive")
    grid = ks.grid
    grid.require_same(eta.grid)
    nf = exponential_pair()
    l1 = integrate(np.abs(eta.values), grid, "lebesgue")
    lap_norm = luxemburg_norm(ks.lap @ eta.values, grid, nf,
                              side="conjugate", weight="lebesgue")
    bound = (l1 + lap_norm) / lam
    nodes = np.flatnonzero(eta.values >= lam)
    if nodes.size == 0:
        return ChebyshevReport(bound, 0.0, 0, True)
    K = CompactSet(grid, nodes, "interior")
    est = primal_interior(K, ks, replace(opts, dilation=0))
    return ChebyshevReport(bound, est.primal_value, int(nodes.size),
                           est.primal_value <= bound * (1.0 + slack) + 1e-9)


def weak_l1_hessian(eta: Field, ks: KernelSet):
    """(weak-L1 quasinorm of |D^2 eta|, L log L functional of Lap eta).

    The quasinorm is sup_t t * meas{|D^2 eta| > t} over the attained
    levels.  Zero extension outside the interior nodes throughout.
    """
    grid = ks.grid
    grid.require_same(eta.grid)
    h2 = grid.h ** 2
    m = grid.n + 2
    if grid.ndim == 1:
        E = np.zeros(m)
        E[grid.interior_lattice] = eta.values
        mag = np.abs((E[2:] - 2.0 * E[1:-1] + E[:-2]) / h2)
        mag = mag[grid.interior_lattice - 1]
    else:
        E = np.zeros((m, m))
        ii = grid.interior_lattice // m
        jj = grid.interior_lattice % m
        E[ii, jj] = eta.values
        dxx = (E[2:, 1:-1] - 2.0 * E[1:-1, 1:-1] + E[:-2, 1:-1]) / h2
        dyy = (E[1:-1, 2:] - 2.0 * E[1:-1, 1:-1] + E[1:-1, :-2]) / h2
        dxy = (E[2:, 2:] - E[2:, :-2] - E[:-2, 2:] + E[:-2, :-2]) / (4.0 * h2)
        mag_full = np.sqrt(dxx ** 2 + dyy ** 2 + 2.0 * dxy ** 2)
        mag = mag_full[ii - 1, jj - 1]
    vals = np.sort(mag)[::-1]
    ranks = np.arange(1, vals.size + 1) * grid.cell_measure
    lhs = float((vals * ranks).max(initial=0.0))
    rhs = llnl_norm(ks.lap @ eta.values, grid, "lebesgue")
    return lhs, rhs


def mixed_energy_functional(K: CompactSet, ks: KernelSet,
                   opts: CapacityOptions = CapacityOptions()) -> float:
    """min int (|Lap eta| + |grad eta|^2) dx over the same admissible class.

    The |.| is Huber-smoothed during the continuation and the reported
    value re-evaluates the exact functional at the final feasible point.
    """
    grid = ks.grid
    grid.require_same(K.grid)
    if K.kind != "interior":
        raise SupportError("mixed_energy_functional needs an interior target set")
    ones = (dilate_interior(ks, K.nodes, opts.dilation)
            if opts.dilation > 0 else K.nodes.copy())
    zeros = boundary_collar(ks, opts.collar)
    if np.intersect1d(ones, zeros).size:
        raise Infeasible("target set (dilated) touches the boundary collar")
    ni = grid.n_interior
    fixed = np.zeros(ni)
    fixed[ones] = 1.0
    mask_free = np.ones(ni, dtype=bool)
    mask_free[ones] = False
    mask_free[zeros] = False
    free_idx = np.flatnonzero(mask_free)
    vol = grid.cell_measure

    eta = fixed.copy()
    if free_idx.size:
        import scipy.sparse.linalg as spla
        A = ks.lap
        sub = A[free_idx][:, free_idx].tocsc()
        eta[free_idx] = np.clip(spla.splu(sub).solve(-(A[free_idx] @ fixed)),
                                0.0, 1.0)

    A = ks.lap
    scale0 = max(1.0, float(np.abs(A @ eta).max()))
    for eps in (1e-2 * scale0, 1e-4 * scale0, 1e-6 * scale0):
        def objective(xf, eps=eps):
            full = fixed.copy()
            full[free_idx] = xf
            v = A @ full
            hub = np.sqrt(v * v + eps * eps) - eps
            val = vol * float(hub.sum()) + vol * float(full @ v)
            gv = v / np.sqrt(v * v + eps * eps)
            grad = vol * (A @ gv) + 2.0 * vol * v
            return val, grad[free_idx]

        if free_idx.size:
            res = _box_minimise(objective, eta[free_idx],
                                [(0.0, 1.0)] * free_idx.size, opts.maxiter)
            eta[free_idx] = res.x
    v = A @ eta
    return vol * float(np.abs(v).sum()) + vol * float(eta @ v)
