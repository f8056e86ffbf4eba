"""Gaussian RBF collocation for the fractional Poisson equation.

Library layout:

- ``specfun``      Gamma / log-Gamma / 1F1 / 2F1 with large-|z| regimes
- ``frlap_kernel`` closed-form fractional Laplacian of a Gaussian + quadrature
                   reference
- ``lattice``      domains and uniform interior center lattices
- ``assembly``     dense and multilevel-Toeplitz stiffness operators
- ``solver``       direct/CG solves, evaluation, RMS errors, condition numbers
- ``boundary``     two-stage treatment of nonhomogeneous exterior data
- ``analysis``     quasi-interpolation, saturation coefficients, Fourier symbols
- ``problems``     manufactured-solution catalog
- ``reference``    hypersingular-integral evaluators (independent cross-checks)
- ``cli``          batch experiment runner emitting CSV
"""

from .specfun import (
    SeriesControl,
    gamma,
    ln_gamma,
    kummer_1f1,
    gauss_2f1,
)
from .frlap_kernel import FracOrder, GaussianRbf, frlap_gaussian, frlap_oracle_fourier
from .lattice import Interval, Box, Disk, LatticeGrid, ShapeCoupling, generate_centers, evaluation_grid
from .assembly import DenseStiffness, ToeplitzStiffness, assemble_dense, assemble_toeplitz, toeplitz_matvec
from .solver import RbfSolution, SolveReport, SolveOptions, solve, evaluate, rms_error, condition_number
from .boundary import (BoundaryLayer, AuxiliaryFit, CorrectionQuad, fit_auxiliary,
                       frlap_w, frlap_w_many, solve_nonhomogeneous)
from .analysis import (SaturationQuery, SymbolQuery, psi_gamma, psi_gamma_hat,
                       quasi_interpolant, saturation_coeffs, symbol_collocation,
                       symbol_galerkin, symbol_gram)
from .problems import ProblemSpec, get_problem

__version__ = "0.1.0"
