"""Independent oracles and adversarial closed-loop verification."""
from .adversary import AdversarialResult, WorstPlan, adversarial_gain, gain_ratio, simulate_batch
from .oracles import (
    LemmaReport,
    OracleResult,
    Singular,
    Unbounded,
    final_layer_sup,
    golden_max,
    lemma_report,
    past_cost_oracle,
    worst_y_bruteforce,
)
from .simulation import DisturbancePlan, simulate_closed_loop

__all__ = [
    "AdversarialResult", "WorstPlan", "adversarial_gain", "gain_ratio", "simulate_batch",
    "LemmaReport", "OracleResult", "Singular", "Unbounded", "final_layer_sup", "golden_max",
    "lemma_report", "past_cost_oracle", "worst_y_bruteforce", "DisturbancePlan", "simulate_closed_loop",
]
