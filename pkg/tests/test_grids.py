"""Grid construction, quadrature, and field containers."""

import numpy as np
import pytest

from expcap.errors import GridMismatch
from expcap.grids import (Field, build_grid, dump_field_csv, integrate,
                          load_field_csv)


def test_square_counts_and_spacing():
    g = build_grid("square", 16)
    assert g.ndim == 2
    assert g.h == pytest.approx(1.0 / 17.0, rel=1e-15)
    assert g.n_interior == 256
    assert g.n_boundary == 64
    assert g.cell_measure == pytest.approx(g.h ** 2)
    assert g.boundary_cell_measure == pytest.approx(g.h)


def test_interval_counts_and_spacing():
    g = build_grid("interval", 33)
    assert g.ndim == 1
    assert g.h == pytest.approx(1.0 / 34.0, rel=1e-15)
    assert g.n_interior == 33
    assert g.n_boundary == 2
    assert g.boundary_cell_measure == 1.0


def test_square_rho_is_distance_to_the_boundary():
    g = build_grid("square", 16)
    x, y = g.interior_coords[:, 0], g.interior_coords[:, 1]
    expect = np.minimum(np.minimum(x, 1.0 - x), np.minimum(y, 1.0 - y))
    assert np.abs(g.rho - expect).max() < 1e-14
    assert g.rho.min() == pytest.approx(g.h)


def test_disk_geometry():
    g = build_grid("disk", 24)
    r = np.sqrt(np.sum((g.interior_coords - 0.5) ** 2, axis=1))
    assert r.max() < 0.5
    assert np.abs(g.rho - (0.5 - r)).max() < 1e-14
    assert np.allclose(np.linalg.norm(g.boundary_normal, axis=1), 1.0)
    assert all(len(nbrs) >= 1 for nbrs in g.boundary_adjacent)


def test_unknown_shape_rejected():
    with pytest.raises(ValueError):
        build_grid("torus", 16)


def test_integrate_closed_forms():
    g = build_grid("square", 32)
    ones = np.ones(g.n_interior)
    # the quadrature covers exactly the n^2 interior cells
    assert integrate(ones, g) == pytest.approx((32.0 * g.h) ** 2, rel=1e-14)
    x = g.interior_coords[:, 0]
    assert integrate(x, g) == pytest.approx(0.5 * integrate(ones, g), abs=2 * g.h)
    assert integrate(ones, g, weight="rho") < integrate(ones, g)


def test_weight_vector_validation():
    g = build_grid("square", 8)
    assert g.weight_vector("lebesgue").sum() == pytest.approx(64 * g.h ** 2)
    with pytest.raises(ValueError):
        g.weight_vector("volume")


def test_require_same():
    a = build_grid("square", 8)
    b = build_grid("square", 12)
    c = build_grid("interval", 8)
    a.require_same(build_grid("square", 8))
    with pytest.raises(GridMismatch):
        a.require_same(b)
    with pytest.raises(GridMismatch):
        a.require_same(c)


def test_field_validation():
    g = build_grid("square", 8)
    vals = np.zeros(g.n_interior)
    f = Field(g, vals)
    assert f.boundary_values is None
    with pytest.raises(GridMismatch):
        Field(g, np.zeros(5))
    with pytest.raises(GridMismatch):
        Field(g, vals, boundary_values=np.zeros(3))
    g2 = f.copy()
    g2.values[0] = 7.0
    assert f.values[0] == 0.0


def test_csv_roundtrip(tmp_path, rng):
    g = build_grid("square", 8)
    f = Field(g, rng.standard_normal(g.n_interior),
              rng.standard_normal(g.n_boundary))
    path = str(tmp_path / "field.csv")
    dump_field_csv(f, path)
    back = load_field_csv(path)
    g.require_same(back.grid)
    assert np.abs(back.values - f.values).max() < 1e-12
    # the CSV format persists interior values only
    assert back.boundary_values is None
