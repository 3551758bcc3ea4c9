"""Entanglement distribution over amplitude-damped linear repeater chains.

Closed-form four-parameter link algebra, its Pauli-twirled single-age
baseline, a brute-force density-matrix oracle, discrete-time chain trials
under three swap policies, and deterministic Monte Carlo ensembles.
"""

from .bell_algebra import (
    PHYS_ATOL,
    LinkState,
    NoiseParams,
    concurrence,
    fidelity,
    fresh_link,
    gamma_from_coherence_time,
    noise_update,
    swap_links,
    validate_physical,
)
from .chain import (
    MAX_TRIAL_STEPS,
    ActiveLink,
    ChainConfig,
    ChainState,
    Model,
    Policy,
    TrialOutcome,
    advance_step,
    eligible_swaps,
    execute_swap,
    run_trial,
)
from .errors import (
    ConfigurationError,
    InvalidParameterError,
    InvalidStateError,
    NotInFamilyError,
    RunawayTrialError,
)
from .montecarlo import (
    AggregateStats,
    SweepGrid,
    SweepRow,
    TrialArrays,
    improvement_factor,
    run_ensemble,
    run_sweep,
    run_trials,
    trial_rng,
)
from .twirled import (
    TwirledLink,
    TwirlProbs,
    twirl_probabilities,
    twirled_coefficients,
    twirled_concurrence,
    twirled_fidelity,
    twirled_swap,
)

__all__ = [
    "PHYS_ATOL",
    "MAX_TRIAL_STEPS",
    "ActiveLink",
    "AggregateStats",
    "ChainConfig",
    "ChainState",
    "ConfigurationError",
    "InvalidParameterError",
    "InvalidStateError",
    "LinkState",
    "Model",
    "NoiseParams",
    "NotInFamilyError",
    "Policy",
    "RunawayTrialError",
    "SweepGrid",
    "SweepRow",
    "TrialArrays",
    "TrialOutcome",
    "TwirlProbs",
    "TwirledLink",
    "advance_step",
    "concurrence",
    "eligible_swaps",
    "execute_swap",
    "fidelity",
    "fresh_link",
    "gamma_from_coherence_time",
    "improvement_factor",
    "noise_update",
    "run_ensemble",
    "run_sweep",
    "run_trial",
    "run_trials",
    "swap_links",
    "trial_rng",
    "twirl_probabilities",
    "twirled_coefficients",
    "twirled_concurrence",
    "twirled_fidelity",
    "twirled_swap",
    "validate_physical",
]
