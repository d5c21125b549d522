from .likelihood import sigmoid, log1pexp, nll, gradient, edge_curvature, hessian_laplacian, score_differences
from .solver import MLESolver, MLEResult, SolveOptions, solve_mle, mle_exists, SOLVE_METHODS
from .metrics import ErrorMetrics, BQBounds, top_k, error_metrics, bq_diagnostics, write_theta
