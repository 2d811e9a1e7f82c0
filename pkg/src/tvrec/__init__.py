"""Total-variation recovery lab.

1D/2D discrete gradients and TV seminorms, measurement ensembles, exact and
first-order TV solvers, uniqueness certificates, mean-width estimation with
closed-form recovery bounds, and phase-transition experiments.
"""

__version__ = "0.1.0"

from .certificates import (Certificate, NspReport, dual_certificate,
                           fuchs_check, injectivity_check, nsp_check)
from .ensembles import (FourierDensity2D, MeasurementEnsemble,
                        SubgaussianParams, as_real_system,
                        estimate_subgaussian_params, fourier_density_2d,
                        fourier_rows_1d, gaussian_matrix, rademacher_matrix)
from .experiments import (PhaseConfig, PhaseGrid, SlopeFit, UniquenessResult,
                          fit_transition_slope, run_phase_grid,
                          run_uniqueness_mc)
from .geometry import (BoundQuery, WidthEstimate, evaluate_bound,
                       mean_width_k0s, mean_width_tv_ball, sup_k0s,
                       support_tv_ball)
from .gradients import (gen_gradient_sparse, grad_1d, grad_adjoint_1d,
                        grad_matrix, jump_support, tv_aniso, tv_iso_2d,
                        witness_x1)
from .lp import LpProblem, LpSolution, simplex_lp
from .seeding import mix, stream
from .solvers import (SolveResult, SolverOptions, operator_norm,
                      tv_lp_oracle, tv_primal_dual, tv_stack_norm)
