from .generators import gen_er, apply_clique_adversary, gen_cluster_graph
from .btl import BTLInstance, ComparisonData, gen_btl_scores, win_probability, sample_comparisons, \
    restrict_comparisons, read_comparisons, write_comparisons
