"""Capacity programs: certificates, dual routes, side functionals."""

import numpy as np
import pytest

from expcap.capacity import (CapacityEstimate, CapacityOptions, ChebyshevReport,
                             CompactSet, mixed_energy_functional, boundary_collar,
                             capacity_pair, chebyshev_bound, dilate_interior,
                             dual_boundary, dual_interior, pairing,
                             primal_boundary, primal_interior, weak_l1_hessian)
from expcap.errors import BadLambda, Infeasible, SupportError
from expcap.grids import Field
from expcap.kernels import green_column
from expcap.luxemburg import orlicz_norm
from expcap.measures import BoundaryMeasure
from expcap.nfunctions import exponential_pair
from expcap.experiments import target_nodes

# frozen on the 16x16 square, centre node, default options
PAIR16_DIL0 = 4.2172024791
PAIR16_DIL1_PRIMAL = 4.7996993658
PAIR16_DIL1_DUAL = 4.6898671218

# frozen side functional values, same grid
MIXED16 = {"center": 5.573945, "cluster": 6.848716, "segment": 8.714697}


def _center_set(ks):
    return CompactSet(ks.grid, target_nodes(ks.grid, "interior", "center"),
                      "interior")


def test_compact_set_validation(ks16):
    grid = ks16.grid
    with pytest.raises(SupportError):
        CompactSet(grid, np.array([], dtype=int), "interior")
    with pytest.raises(SupportError):
        CompactSet(grid, np.array([grid.n_interior]), "interior")
    with pytest.raises(ValueError):
        CompactSet(grid, np.array([0]), "edge")
    K = CompactSet(grid, np.array([5, 3, 5]), "interior")
    assert K.nodes.tolist() == [3, 5]


def test_dilation_and_collar_helpers(ks16):
    nodes = target_nodes(ks16.grid, "interior", "center")
    assert np.array_equal(dilate_interior(ks16, nodes, 0), nodes)
    star = dilate_interior(ks16, nodes, 1)
    assert star.size == 5 and np.isin(nodes, star).all()
    assert boundary_collar(ks16, 0).size == 0
    ring = boundary_collar(ks16, 1)
    assert ring.size == 60
    assert np.allclose(ks16.grid.rho[ring], ks16.grid.h)


def test_pinned_set_in_the_collar_is_infeasible(ks16):
    ring = boundary_collar(ks16, 1)
    K = CompactSet(ks16.grid, ring[:1], "interior")
    with pytest.raises(Infeasible):
        primal_interior(K, ks16, CapacityOptions(dilation=0, collar=1))


def test_undilated_pair_is_tight(ks16):
    # with no dilation both finite programs share the admissible set,
    # so the certificates pinch: primal == dual to optimiser precision
    est = capacity_pair(_center_set(ks16), ks16, CapacityOptions(dilation=0))
    rel = (est.primal_value - est.dual_value) / est.primal_value
    assert est.dual_value <= est.primal_value + 1e-8
    assert rel < 1e-6
    assert est.primal_value == pytest.approx(PAIR16_DIL0, rel=1e-4)
    assert est.kind == "pair-interior"


def test_singleton_dual_matches_reciprocal_column_norm(ks16):
    # independent route: the one-atom dual maximises m subject to
    # ||m G_j|| <= 1, so its value is 1 / ||G_j|| in the constraint norm
    K = _center_set(ks16)
    est = dual_interior(K, ks16, CapacityOptions(dilation=0))
    col = green_column(ks16, int(K.nodes[0]))
    expect = 1.0 / orlicz_norm(col, ks16.grid, exponential_pair())
    assert est.dual_value == pytest.approx(expect, rel=1e-6)
    assert est.mu_masses.sum() == pytest.approx(est.dual_value, rel=1e-9)


def test_dilated_pair_weak_duality_and_frozen_values(ks16):
    est = capacity_pair(_center_set(ks16), ks16, CapacityOptions(dilation=1))
    assert est.dual_value <= est.primal_value + 1e-8
    assert est.primal_value == pytest.approx(PAIR16_DIL1_PRIMAL, rel=2e-3)
    assert est.dual_value == pytest.approx(PAIR16_DIL1_DUAL, rel=2e-3)
    assert est.eta_star is not None
    assert est.eta_star.min() >= -1e-12 and est.eta_star.max() <= 1.0 + 1e-12
    assert np.allclose(est.eta_star[_center_set(ks16).nodes], 1.0)


def test_monotone_in_the_target_set(ks16):
    opts = CapacityOptions(dilation=0)
    small = capacity_pair(_center_set(ks16), ks16, opts)
    nodes = target_nodes(ks16.grid, "interior", "cluster")
    big = capacity_pair(CompactSet(ks16.grid, nodes, "interior"), ks16, opts)
    assert small.primal_value <= big.primal_value + 1e-6
    assert small.dual_value <= big.dual_value + 1e-6


def test_subadditive_over_separated_singletons(ks16):
    # optimiser tolerance only; the inequality itself is structural
    grid = ks16.grid
    a = target_nodes(grid, "interior", "point:0.3,0.3")
    b = target_nodes(grid, "interior", "point:0.7,0.7")
    opts = CapacityOptions(dilation=0)
    ca = primal_interior(CompactSet(grid, a, "interior"), ks16, opts)
    cb = primal_interior(CompactSet(grid, b, "interior"), ks16, opts)
    cu = primal_interior(CompactSet(grid, np.concatenate([a, b]), "interior"),
                         ks16, opts)
    assert cu.primal_value <= 1.01 * (ca.primal_value + cb.primal_value)


def test_boundary_pair_weak_duality(ks16):
    nodes = target_nodes(ks16.grid, "boundary", "bottom-mid")
    K = CompactSet(ks16.grid, nodes, "boundary")
    pri = primal_boundary(K, ks16)
    dua = dual_boundary(K, ks16)
    assert pri.primal_value > 0.0
    assert 0.0 < dua.dual_value <= pri.primal_value + 1e-8
    assert dua.mu_masses.min() >= 0.0


def test_estimate_gap_bookkeeping():
    est = CapacityEstimate(kind="primal-interior", primal_value=2.0)
    assert np.isnan(est.gap)
    est2 = CapacityEstimate(kind="pair", primal_value=2.0, dual_value=1.5)
    assert est2.gap == pytest.approx(0.5)


def test_chebyshev_level_sets(ks16):
    grid = ks16.grid
    x, y = grid.interior_coords[:, 0], grid.interior_coords[:, 1]
    eta = Field(grid, np.sin(np.pi * x) * np.sin(np.pi * y))
    rep = chebyshev_bound(eta, 0.9, ks16)
    assert isinstance(rep, ChebyshevReport)
    assert rep.level_set_size == 16
    assert rep.satisfied
    assert rep.primal_value <= rep.bound * 1.15 + 1e-9
    empty = chebyshev_bound(eta, 2.0, ks16)
    assert empty.level_set_size == 0
    assert empty.primal_value == 0.0 and empty.satisfied
    with pytest.raises(BadLambda):
        chebyshev_bound(eta, 0.0, ks16)


def test_weak_l1_hessian_is_dominated(ks16, rng):
    grid = ks16.grid
    x, y = grid.interior_coords[:, 0], grid.interior_coords[:, 1]
    for _ in range(8):
        c = rng.uniform(0.25, 0.75, size=2)
        w = rng.uniform(30.0, 90.0)
        eta = Field(grid, np.exp(-w * ((x - c[0]) ** 2 + (y - c[1]) ** 2)))
        lhs, rhs = weak_l1_hessian(eta, ks16)
        assert 0.0 < lhs < rhs
        lhs2, rhs2 = weak_l1_hessian(Field(grid, 3.0 * eta.values), ks16)
        assert lhs2 == pytest.approx(3.0 * lhs, rel=1e-12)
        assert rhs2 == pytest.approx(3.0 * rhs, rel=1e-12)


def test_mixed_energy_functional_frozen_and_monotone(ks16):
    vals = {}
    for name in ("center", "cluster", "segment"):
        K = CompactSet(ks16.grid, target_nodes(ks16.grid, "interior", name),
                       "interior")
        vals[name] = mixed_energy_functional(K, ks16)
        assert vals[name] == pytest.approx(MIXED16[name], rel=1e-3)
    assert vals["center"] < vals["cluster"] < vals["segment"]
    with pytest.raises(SupportError):
        mixed_energy_functional(CompactSet(ks16.grid, np.array([0]), "boundary"), ks16)


def test_pairing_orders_agree(ks16, rng):
    grid = ks16.grid
    for _ in range(5):
        eta_b = rng.uniform(0.0, 1.0, grid.n_boundary)
        atoms = [(int(rng.integers(0, grid.n_boundary)), float(rng.uniform(0.5, 3.0)))
                 for _ in range(3)]
        mu = BoundaryMeasure(grid, atoms=atoms)
        a, b = pairing(eta_b, mu, ks16)
        assert a == pytest.approx(b, rel=1e-11, abs=1e-13)
