"""Quantum data hiding with Bell-state mixtures: states, attacks, bounds."""

from .pauli import BellLabel, PauliString, all_unsigned, cardinalities, pauli_mul
from .states import (
    DensityMatrix,
    HermitianOperator,
    bell_state_vector,
    h_operator,
    hiding_state,
    tau_parity_state,
    tau_state,
    werner_form,
    werner_form_check,
)
from .bounds import (
    MultiBitBound,
    SingleBitBound,
    bell_diag_lp,
    best_pauli_distinguisher,
    emin_lower_bound,
    multi_bit_bound,
    mutual_info_cap,
    pauli_coefficients,
    single_bit_bound,
    tau_repetition_bound,
    theorem1_curve,
    werner_feasible_region,
)
from .clifford import CliffordCircuit, CliffordElement, enumerate_group, synthesize_circuit
from .commitment import CheatModel, CommitmentSession, run_session, run_sessions
from .protocols import (
    pairwise_attack_exact,
    pairwise_attack_mc,
    prepare_rho0,
    prepare_rho1_sample,
    tau_protocol_exact,
    tau_protocol_mc,
    tau_unlock_povm,
)
from .tauopt import SolverNonConvergence, maximize_tau_bias, tau_ppt_region

__all__ = [
    "BellLabel",
    "CheatModel",
    "CliffordCircuit",
    "CliffordElement",
    "CommitmentSession",
    "DensityMatrix",
    "HermitianOperator",
    "MultiBitBound",
    "PauliString",
    "SingleBitBound",
    "SolverNonConvergence",
    "all_unsigned",
    "bell_diag_lp",
    "bell_state_vector",
    "best_pauli_distinguisher",
    "cardinalities",
    "emin_lower_bound",
    "enumerate_group",
    "h_operator",
    "hiding_state",
    "maximize_tau_bias",
    "multi_bit_bound",
    "mutual_info_cap",
    "pairwise_attack_exact",
    "pairwise_attack_mc",
    "pauli_coefficients",
    "pauli_mul",
    "prepare_rho0",
    "prepare_rho1_sample",
    "run_session",
    "run_sessions",
    "single_bit_bound",
    "synthesize_circuit",
    "tau_parity_state",
    "tau_ppt_region",
    "tau_protocol_exact",
    "tau_protocol_mc",
    "tau_repetition_bound",
    "tau_state",
    "tau_unlock_povm",
    "theorem1_curve",
    "werner_feasible_region",
    "werner_form",
    "werner_form_check",
]
