"""Discrete maximal operator and the L log L quasinorm built on it."""

import numpy as np
import pytest

from expcap.maximal import llnl_norm, maximal_interior

LLNL_CONST_N16 = 1.3333818167412912


def test_dominates_the_field(ks16, rng):
    grid = ks16.grid
    f = rng.standard_normal(grid.n_interior)
    M = maximal_interior(f, grid)
    assert np.all(M >= np.abs(f) - 1e-12)


def test_sublinear_and_homogeneous(ks16, rng):
    grid = ks16.grid
    f = rng.standard_normal(grid.n_interior)
    g = rng.standard_normal(grid.n_interior)
    Mf = maximal_interior(f, grid)
    Mg = maximal_interior(g, grid)
    assert np.all(maximal_interior(f + g, grid) <= Mf + Mg + 1e-12)
    assert np.allclose(maximal_interior(-3.0 * f, grid), 3.0 * Mf)


def test_constant_field_saturates(ks16):
    grid = ks16.grid
    M = maximal_interior(np.ones(grid.n_interior), grid)
    assert np.allclose(M, 1.0, atol=1e-12)


def test_llnl_norm_anchor_and_scaling(ks16, rng):
    grid = ks16.grid
    assert abs(llnl_norm(np.ones(grid.n_interior), grid)
               - LLNL_CONST_N16) < 1e-12
    f = rng.standard_normal(grid.n_interior)
    assert llnl_norm(np.zeros(grid.n_interior), grid) == 0.0
    assert llnl_norm(2.0 * f, grid) == pytest.approx(2.0 * llnl_norm(f, grid),
                                                     rel=1e-12)
    # the rho weight never exceeds the Lebesgue one on the unit square
    assert llnl_norm(f, grid, weight="rho") <= llnl_norm(f, grid) + 1e-12
    with pytest.raises(ValueError):
        llnl_norm(f, grid, weight="nope")
