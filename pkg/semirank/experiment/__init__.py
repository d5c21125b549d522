from .records import TrialRecord, ClusterRecord, SummaryRow, TRIAL_HEADER, CLUSTER_HEADER, SUMMARY_HEADER, \
    TRIAL_STATUSES, write_trial_csv, write_cluster_csv, write_summary_csv, summarize
from .methods import METHOD_REGISTRY, TrialContext, get_method
from .topk import TopKExperiment, run_topk_experiment, make_semi_random_graph, ADVERSARIES
from .cluster import ClusterExperiment, run_cluster_experiment
from .diagnose import DiagnoseReport, diagnose
