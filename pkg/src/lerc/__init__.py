"""Learning-enabled robust control for scalar systems with unknown parameters.

Observer banks with recursive past-cost accounting, a certainty-equivalence
dead-beat controller for the unknown-input-sign pair, closed-form l2-gain
certification, and independent verification oracles.
"""
from .ce_controller import CeController, MergedState, control, equivalence_check, merged_step, policy
from .certify import (
    CertificationReport,
    IntervalPair,
    certify,
    curvature_condition,
    figure_quadfuns,
    gamma_star,
    interval_pair,
    strong_negativity,
    sweep,
)
from .core import (
    ContractError,
    DomainError,
    GainInfeasible,
    GainSpec,
    Model,
    ModelSet,
    SimulationTrace,
    alpha_direct,
)
from .observer import (
    InformationState,
    ObserverState,
    alpha_closed_form,
    bank_step,
    finite_gain_ok,
    observer_step,
)
from .riccati import Infeasible, SolvedModel, riccati_residual, solve_riccati

__version__ = "0.1.0"

__all__ = [
    "CeController", "MergedState", "control", "equivalence_check", "merged_step", "policy",
    "CertificationReport", "IntervalPair", "certify", "curvature_condition", "figure_quadfuns",
    "gamma_star", "interval_pair", "strong_negativity", "sweep",
    "ContractError", "DomainError", "GainInfeasible", "GainSpec", "Model", "ModelSet",
    "SimulationTrace", "alpha_direct",
    "InformationState", "ObserverState", "alpha_closed_form", "bank_step", "finite_gain_ok",
    "observer_step",
    "Infeasible", "SolvedModel", "riccati_residual", "solve_riccati",
]
