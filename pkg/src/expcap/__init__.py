"""Orlicz-space machinery for the exponential absorption problem.

Layers, bottom to top: N-functions and their norms (`nfunctions`,
`luxemburg`, `maximal`), grids and kernels (`grids`, `kernels`),
measures and the monotone solver (`measures`, `solver`), capacity
programs (`capacity`), and batch experiments with a CLI
(`experiments`, `cli`).
"""

from .errors import (BadLambda, ExpcapError, GridMismatch, Infeasible,
                     LadderTooCoarse, NoConvergence, NotAdmissible,
                     NotComparable, OverflowInIntegrand, SolverDiverged,
                     SupportError, TestNotAdmissible, TooCoarse, ZeroField)
from .nfunctions import (NFunction, exponential_pair, pair_from_density,
                         pstar_sandwich, q_function, quadratic_pair, young_gap)
from .grids import (Field, WeightedGrid, build_grid, dump_field_csv,
                    integrate, load_field_csv)
from .luxemburg import (holder_young_pairing, luxemburg_norm,
                        luxemburg_subgradient, orlicz_norm)
from .maximal import llnl_norm, maximal_function, maximal_interior
from .kernels import (KernelSet, assemble, green_column, green_potential,
                      harmonic_extension, normal_derivative, poisson_column,
                      principal_eigen, solve_zeta0)
from .measures import (BoundaryMeasure, InteriorMeasure, MeasureSpec,
                       compare_measures)
from .solver import (AdmissibilityReport, SolveReport, TruncationReport,
                     admissibility_test, default_test_basis,
                     keller_osserman_diagnostic, monotone_comparison,
                     solve_boundary, solve_interior, truncation_scheme,
                     weak_residual)
from .capacity import (CapacityEstimate, CapacityOptions, ChebyshevReport,
                       CompactSet, mixed_energy_functional, boundary_test_norm,
                       capacity_pair, chebyshev_bound, dual_boundary,
                       dual_interior, pairing, primal_boundary,
                       primal_interior, weak_l1_hessian)
from .experiments import (ExperimentConfig, run_boundary_probe,
                          run_convergence_suite, run_moderate_extension,
                          run_removability_threshold,
                          run_vanishing_inequality, target_nodes)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
