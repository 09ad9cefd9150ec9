"""Grid maximal function over axis-aligned squares, and the L log L norm.

M[f](x) is the largest average of |f| over grid-aligned squares (integer
cell size, corners on the lattice) that contain x's cell and sit inside
the padded bounding cube Q0.  Fields are extended by zero outside the
interior nodes, so enlarging Q0 can only add candidate squares: M is
monotone in the pad for nonnegative data, which the tests exercise.

Box sums come from a summed-area table; the max over all anchor
positions of a given size is a trailing sliding maximum per axis.
Cost is O(N^2) per size in 2D, fine at desk scale.

The companion functional

    llnl_norm(f) = int_{Q0} M[f] w dx

is the L log L quantity the conjugate Luxemburg norm is equivalent to;
the equivalence constants are measured by the test corpus, never
assumed.
"""

from __future__ import annotations

import numpy as np

from .grids import Field, WeightedGrid
from .errors import GridMismatch


def _sat(F: np.ndarray) -> np.ndarray:
    """Summed-area table with a zero border: S[i, j] = sum F[:i, :j]."""
    S = np.zeros((F.shape[0] + 1, F.shape[1] + 1))
    np.cumsum(F, axis=0, out=S[1:, 1:])
    np.cumsum(S[1:, 1:], axis=1, out=S[1:, 1:])
    return S


def _anchor_max(avg: np.ndarray, s: int, axis: int) -> np.ndarray:
    """Max over anchors covering each cell.

    `avg` holds one value per anchor position (length N-s+1 along `axis`);
    the output has one value per cell (length N): out[i] is the max of
    avg[a] over anchors a in [i-s+1, i] that exist.  Implemented as a
    sliding-window max over the -inf padded anchor array.
    """
    if s == 1:
        return avg
    pad = [(0, 0)] * avg.ndim
    pad[axis] = (s - 1, s - 1)
    B = np.pad(avg, pad, constant_values=-np.inf)
    win = np.lib.stride_tricks.sliding_window_view(B, s, axis=axis)
    return win.max(axis=-1)


def _scatter_full(f_vals: np.ndarray, grid: WeightedGrid, pad: int) -> np.ndarray:
    """|f| on the padded cell array (zeros off the interior)."""
    m = grid.n + 2
    if grid.ndim == 1:
        full = np.zeros(m + 2 * pad)
        full[grid.interior_lattice + pad] = np.abs(f_vals)
        return full
    full = np.zeros((m + 2 * pad, m + 2 * pad))
    ii = grid.interior_lattice // m
    jj = grid.interior_lattice % m
    full[ii + pad, jj + pad] = np.abs(f_vals)
    return full


def maximal_function(f, grid: WeightedGrid, pad: int = 1) -> np.ndarray:
    """M[f] on every cell of the padded cube (flat interior values via
    `maximal_interior`)."""
    vals = f.values if isinstance(f, Field) else np.asarray(f, dtype=float)
    if vals.shape != (grid.n_interior,):
        raise GridMismatch("field length does not match grid")
    if pad < 0:
        raise ValueError("pad must be >= 0")
    full = _scatter_full(vals, grid, pad)

    if grid.ndim == 1:
        N = full.size
        S = np.concatenate([[0.0], np.cumsum(full)])
        M = full.copy()
        for s in range(2, N + 1):
            avg = (S[s:] - S[:-s]) / s  # anchors 0..N-s
            M = np.maximum(M, _anchor_max(avg, s, 0))
        return M

    N = full.shape[0]
    S = _sat(full)
    M = full.copy()
    for s in range(2, N + 1):
        box = (S[s:, s:] - S[:-s, s:] - S[s:, :-s] + S[:-s, :-s]) / (s * s)
        M = np.maximum(M, _anchor_max(_anchor_max(box, s, 0), s, 1))
    return M


def maximal_interior(f, grid: WeightedGrid, pad: int = 1) -> np.ndarray:
    """M[f] restricted to the interior nodes."""
    M = maximal_function(f, grid, pad)
    m = grid.n + 2
    if grid.ndim == 1:
        return M[grid.interior_lattice + pad]
    ii = grid.interior_lattice // m
    jj = grid.interior_lattice % m
    return M[ii + pad, jj + pad]


def llnl_norm(f, grid: WeightedGrid, weight: str = "lebesgue", pad: int = 1) -> float:
    """int_{Q0} M[f] w dx.  The rho weight vanishes off the interior, so
    only interior cells contribute there; the Lebesgue version integrates
    over the whole padded cube."""
    if weight == "lebesgue":
        M = maximal_function(f, grid, pad)
        return float(M.sum() * grid.cell_measure)
    if weight == "rho":
        Mi = maximal_interior(f, grid, pad)
        return float((Mi * grid.rho).sum() * grid.cell_measure)
    raise ValueError(f"unknown weight kind {weight!r}")
