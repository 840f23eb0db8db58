"""contract-forge: optimal corruption-free contract schemes between a
principal, privately-informed producers, and a monitoring intermediary."""

from .model import (
    ContractLine,
    ContractMenu,
    IntermediarySpec,
    LimitedBranch,
    ProducerOutcome,
    ProducerSpec,
    QuadraticCost,
    RegimeKind,
    RegimeResult,
    ReportEntry,
    Scenario,
    ScenarioValidationError,
    StateDistribution,
    builtin_scenario,
    enumerate_reports,
    load_scenario,
    scenario_from_dict,
    scenario_from_json,
    state_distribution,
    validate_scenario,
    with_alpha,
)
from .kernel import (
    EffortSolution,
    NoPositiveEffort,
    bonus,
    bonus_prime,
    expected_producer_payoff,
    first_best_effort,
    intermediary_payoff,
    output,
    producer_payoff,
    solve_asym_effort,
    solve_limited_effort,
)
from .regimes import (
    RegimeInputs,
    SwitchDecision,
    build_contract_menu,
    encouragement_preferred,
    encouragement_threshold_alpha,
    eval_asym_no_intermediary,
    eval_complete_info,
    eval_intermediary_limited,
    eval_intermediary_unlimited,
    evaluate_regime,
)
from .advisor import (
    DIRECT_CONTRACT,
    USE_INTERMEDIARY,
    ComparisonReport,
    ComparisonRow,
    CorruptionDiagnostics,
    compare,
    corruption_exposure,
    rank_producers,
)

__version__ = "0.1.0"

__all__ = [
    "ComparisonReport",
    "ComparisonRow",
    "ContractLine",
    "ContractMenu",
    "CorruptionDiagnostics",
    "DIRECT_CONTRACT",
    "EffortSolution",
    "IntermediarySpec",
    "LimitedBranch",
    "NoPositiveEffort",
    "ProducerOutcome",
    "ProducerSpec",
    "QuadraticCost",
    "RegimeInputs",
    "RegimeKind",
    "RegimeResult",
    "ReportEntry",
    "Scenario",
    "ScenarioValidationError",
    "StateDistribution",
    "SwitchDecision",
    "USE_INTERMEDIARY",
    "bonus",
    "bonus_prime",
    "build_contract_menu",
    "builtin_scenario",
    "compare",
    "corruption_exposure",
    "encouragement_preferred",
    "encouragement_threshold_alpha",
    "enumerate_reports",
    "eval_asym_no_intermediary",
    "eval_complete_info",
    "eval_intermediary_limited",
    "eval_intermediary_unlimited",
    "evaluate_regime",
    "expected_producer_payoff",
    "first_best_effort",
    "intermediary_payoff",
    "load_scenario",
    "output",
    "producer_payoff",
    "rank_producers",
    "scenario_from_dict",
    "scenario_from_json",
    "solve_asym_effort",
    "solve_limited_effort",
    "state_distribution",
    "validate_scenario",
    "with_alpha",
]
