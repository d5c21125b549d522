from .gains import GainVector, edge_gains
from .greedy import greedy_b_matching, greedy_dual_certificate, DualCertificate, matching_value, \
    check_b_feasible, FEASIBILITY_TOL
from .lp import exact_lp_oracle_small, approx_packing_oracle, EXACT_LP_MAX_EDGES
