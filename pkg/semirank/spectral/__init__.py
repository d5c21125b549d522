from .eigen import lambda_n_minus_1, laplacian_pinv, laplacian_pinv_apply, effective_resistance, deflate_ones, \
    heat_kernel_factor, normalized_gap, conductance_lower_bound, exact_conductance, congestion_sum, \
    SpectralReport, spectral_report, PINV_CUTOFF
from .expm import exp_action, exp_action_scaled, EXP_METHODS
from .sketch import jl_dimension, jl_matrix, centered_gram_trace, Embedding
