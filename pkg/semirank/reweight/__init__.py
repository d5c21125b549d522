from .feasibility import Violation, degree_budget, verify_feasibility, er_witness_gap, FEASIBILITY_SLACK
from .mmwu import MMWUReweighter, MMWUParams, ReweightReport, ResponseRecord, reweight, EXP_MODES
from .audit import RegretLedger, regret_audit, AUDIT_MAX_N
