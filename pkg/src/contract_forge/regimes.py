"""Evaluation of the four contracting regimes, producer by producer.

Regimes:

* complete information - the principal observes types, pays zero rent;
* asymmetric, no intermediary - classic screening with a distorted
  unfavourable effort and an information rent in the unobserved state;
* intermediary, unlimited - reports are contracted on and the producer's
  payoff may be pushed to the bankruptcy floor in every state, so only
  bribe-proofing transfers are needed;
* intermediary, limited - external limits pin the observed-state payoffs at
  zero, which creates blackmail exposure; the principal either pays the
  intermediary off (encouragement) or leaves nothing to conceal (exclusion).

The principal's objective is additively separable across producers; every
evaluator returns per-producer rows plus their exact sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .kernel import (
    EffortSolution,
    bonus,
    expected_producer_payoff,
    first_best_effort,
    solve_limited_effort,
    solve_asym_effort,
)
from .model import (
    ContractLine,
    ContractMenu,
    LimitedBranch,
    ProducerOutcome,
    ProducerSpec,
    RegimeKind,
    RegimeResult,
    ReportEntry,
    Scenario,
    with_alpha,
)


@dataclass(frozen=True)
class SwitchDecision:
    """Outcome of the encouragement-vs-exclusion rule with both side values,
    so callers can audit the margin."""

    encouragement: bool
    lhs: float
    rhs: float


def encouragement_preferred(p: float, pi: float, mu: float, alpha: float) -> SwitchDecision:
    """Decide whether paying the intermediary off (encouragement) beats
    designing blackmail away (exclusion).

    lhs = (1-mu)*pi*p + (1-pi) is the marginal saving from pushing the
    unobserved unfavourable payoff down to the bankruptcy floor; rhs =
    pi*(1-p)*(1-mu)/alpha is the marginal cost of the blackmail-compensation
    transfer that choice requires.  Encouragement is chosen iff lhs >= rhs.
    As alpha -> 0 the rhs grows without bound and exclusion takes over.
    """
    lhs = (1.0 - mu) * pi * p + (1.0 - pi)
    rhs = pi * (1.0 - p) * (1.0 - mu) / alpha
    return SwitchDecision(encouragement=lhs >= rhs, lhs=lhs, rhs=rhs)


def encouragement_threshold_alpha(p: float, pi: float, mu: float) -> float:
    """Bargaining power at which the switch rule flips; encouragement is
    preferred for alpha >= threshold."""
    lhs = (1.0 - mu) * pi * p + (1.0 - pi)
    return pi * (1.0 - p) * (1.0 - mu) / lhs


def build_contract_menu(
    prod: ProducerSpec,
    *,
    e_f: float,
    e_d: float,
    e4: float,
    h1: float,
    h2: float,
    h3: float,
    h4: float,
    s1: float,
    s2: float,
) -> ContractMenu:
    """Assemble the four report-contingent lines; the unknown-report pair
    carries no transfer."""
    return ContractMenu(
        producer=prod.name,
        lines=(
            ContractLine(ReportEntry.FAVOURABLE, e_f, h1, s1),
            ContractLine(ReportEntry.UNFAVOURABLE, e_d, h2, s2),
            ContractLine(ReportEntry.UNKNOWN, e_f, h3, 0.0),
            ContractLine(ReportEntry.UNKNOWN, e4, h4, 0.0),
        ),
    )


# ---------------------------------------------------------------------------
# Shared per-producer pieces
# ---------------------------------------------------------------------------


def _first_best(prod: ProducerSpec) -> tuple[float, float, float, float]:
    """(e_f, e_d, A_f, B_d) with A_f / B_d the first-best surpluses
    beta*e - phi(e) of the two types."""
    e_f = first_best_effort(prod.beta_f, prod.cost).effort
    e_d = first_best_effort(prod.beta_d, prod.cost).effort
    a_f = prod.beta_f * e_f - prod.cost.phi(e_f)
    b_d = prod.beta_d * e_d - prod.cost.phi(e_d)
    return e_f, e_d, a_f, b_d


def _h_opt1(prod: ProducerSpec) -> float:
    """Zero-rent complete-information benchmark."""
    _, _, a_f, b_d = _first_best(prod)
    return prod.p * a_f + (1.0 - prod.p) * b_d


def _h_opt2(prod: ProducerSpec, e4: float, h4: float) -> float:
    """Screening value at distorted effort e4 with the unfavourable
    unobserved payoff pinned at h4."""
    e_f, _, a_f, _ = _first_best(prod)
    theta = bonus(prod.cost, prod.ratio, e4)
    surplus_d = prod.beta_d * e4 - prod.cost.phi(e4)
    return prod.p * a_f + (1.0 - prod.p) * surplus_d - (prod.p * theta + h4)


def _effort_flags(sol: EffortSolution) -> list[str]:
    return ["shutdown"] if sol.shutdown else []


# ---------------------------------------------------------------------------
# Regime evaluators
# ---------------------------------------------------------------------------


def eval_complete_info(scenario: Scenario) -> RegimeResult:
    """Both types observed, both efforts first-best, funding equal to cost
    (zero producer rent)."""
    rows = []
    for prod in scenario.producers:
        e_f, e_d, a_f, b_d = _first_best(prod)
        rows.append(
            ProducerOutcome(
                name=prod.name,
                e_f=e_f,
                e_d=e_d,
                e4=None,
                h1=0.0,
                h2=0.0,
                h3=None,
                h4=None,
                s1=0.0,
                s2=0.0,
                contribution=prod.p * a_f + (1.0 - prod.p) * b_d,
                funding_f=prod.cost.phi(e_f),
                funding_d=prod.cost.phi(e_d),
            )
        )
    return RegimeResult(
        regime=RegimeKind.COMPLETE_INFO,
        producers=tuple(rows),
        total=sum(r.contribution for r in rows),
    )


def eval_asym_no_intermediary(scenario: Scenario) -> RegimeResult:
    """Screening without reports: favourable effort stays first-best, the
    unfavourable unobserved effort is distorted downward, the unfavourable
    payoff sits on the bankruptcy floor."""
    rows = []
    for prod in scenario.producers:
        e_f, e_d, _, _ = _first_best(prod)
        sol = solve_asym_effort(prod)
        theta = bonus(prod.cost, prod.ratio, sol.effort)
        flags = _effort_flags(sol)
        if expected_producer_payoff(prod, sol.effort) < 0.0:
            flags.append("participation_violated")
        rows.append(
            ProducerOutcome(
                name=prod.name,
                e_f=e_f,
                e_d=e_d,
                e4=sol.effort,
                h1=None,
                h2=None,
                h3=prod.h_min + theta,
                h4=prod.h_min,
                s1=0.0,
                s2=0.0,
                contribution=_h_opt2(prod, sol.effort, prod.h_min),
                flags=tuple(flags),
            )
        )
    return RegimeResult(
        regime=RegimeKind.ASYMMETRIC_NO_INTERMEDIARY,
        producers=tuple(rows),
        total=sum(r.contribution for r in rows),
    )


def eval_intermediary_unlimited(
    scenario: Scenario,
    h1_policy: Callable[[ProducerSpec], float] | None = None,
    e4_solver: Callable[[ProducerSpec, float], EffortSolution] | None = None,
) -> RegimeResult:
    """Report-based contracting with no external limits: every pinnable payoff
    sits on the bankruptcy floor and a single transfer makes truthful
    favourable reports bribe-proof.  There is no blackmail exposure.

    h1_policy picks the observed-favourable payoff inside its feasible band
    [h_min, h3]; the default is the cost-minimizing floor h_min.  e4_solver
    picks the distorted unobserved-unfavourable effort; the default is the
    report-regime first-order condition (solve_limited_effort).
    """
    mu = scenario.intermediary.mu
    pick_h1 = h1_policy if h1_policy is not None else (lambda prod: prod.h_min)
    solve_e4 = e4_solver if e4_solver is not None else solve_limited_effort
    rows = []
    menus = []
    for prod in scenario.producers:
        e_f, e_d, a_f, b_d = _first_best(prod)
        sol = solve_e4(prod, mu)
        theta = bonus(prod.cost, prod.ratio, sol.effort)
        h4 = prod.h_min
        h2 = prod.h_min
        h1 = pick_h1(prod)
        h3 = h4 + theta
        s1_raw = (1.0 - mu) * (h3 - h1)
        s1 = max(0.0, s1_raw)
        flags = _effort_flags(sol)
        if s1_raw < 0.0:
            flags.append("s1_clamped")
        informed = prod.p * (a_f - h1) + (1.0 - prod.p) * (b_d - h2) - prod.p * s1
        contribution = prod.pi * informed + (1.0 - prod.pi) * _h_opt2(prod, sol.effort, h4)
        expected_rent = prod.pi * (prod.p * h1 + (1.0 - prod.p) * h2) + (
            1.0 - prod.pi
        ) * (prod.p * h3 + (1.0 - prod.p) * h4)
        if expected_rent < 0.0:
            flags.append("participation_violated")
        rows.append(
            ProducerOutcome(
                name=prod.name,
                e_f=e_f,
                e_d=e_d,
                e4=sol.effort,
                h1=h1,
                h2=h2,
                h3=h3,
                h4=h4,
                s1=s1,
                s2=0.0,
                contribution=contribution,
                funding_f=h1 + prod.cost.phi(e_f),
                funding_d=h2 + prod.cost.phi(e_d),
                flags=tuple(flags),
            )
        )
        menus.append(
            build_contract_menu(
                prod, e_f=e_f, e_d=e_d, e4=sol.effort,
                h1=h1, h2=h2, h3=h3, h4=h4, s1=s1, s2=0.0,
            )
        )
    return RegimeResult(
        regime=RegimeKind.INTERMEDIARY_UNLIMITED,
        producers=tuple(rows),
        total=sum(r.contribution for r in rows),
        menus=tuple(menus),
    )


def _limited_producer(
    prod: ProducerSpec, mu: float, alpha: float, branch: LimitedBranch
) -> tuple[ProducerOutcome, ContractMenu]:
    e_f, e_d, a_f, _ = _first_best(prod)
    h_opt1 = prod.p * a_f + (1.0 - prod.p) * (prod.beta_d * e_d - prod.cost.phi(e_d))
    sol = solve_limited_effort(prod, mu)
    e4 = sol.effort
    theta = bonus(prod.cost, prod.ratio, e4)
    surplus4 = prod.beta_d * e4 - prod.cost.phi(e4)
    flags = _effort_flags(sol)

    if branch is LimitedBranch.ENCOURAGEMENT:
        h1 = h2 = 0.0
        h4 = prod.h_min
        h3 = prod.h_min + theta
        s1_raw = (1.0 - mu) * (prod.h_min + theta)
        s2 = (1.0 - mu) * (-prod.h_min) / alpha
        s1 = max(0.0, s1_raw)
        if s1_raw < 0.0:
            flags.append("s1_clamped")
        informed = h_opt1 - (prod.p * s1 + (1.0 - prod.p) * s2)
        uninformed = prod.p * (a_f - h3) + (1.0 - prod.p) * (surplus4 - h4)
    else:
        h1 = h2 = h4 = 0.0
        h3 = theta
        s1_raw = (1.0 - mu) * theta
        s2 = 0.0
        s1 = max(0.0, s1_raw)
        if s1_raw < 0.0:
            flags.append("s1_clamped")
        informed = h_opt1 - prod.p * s1
        # The uninformed favourable state is charged the transfer-sized rent
        # (1-mu)*theta, i.e. the same s1 that buys off the favourable report.
        uninformed = prod.p * (a_f - s1) + (1.0 - prod.p) * surplus4

    contribution = prod.pi * informed + (1.0 - prod.pi) * uninformed
    expected_rent = (1.0 - prod.pi) * (prod.p * h3 + (1.0 - prod.p) * h4)
    if expected_rent < 0.0:
        flags.append("participation_violated")
    row = ProducerOutcome(
        name=prod.name,
        e_f=e_f,
        e_d=e_d,
        e4=e4,
        h1=h1,
        h2=h2,
        h3=h3,
        h4=h4,
        s1=s1,
        s2=s2,
        contribution=contribution,
        funding_f=h1 + prod.cost.phi(e_f),
        funding_d=h2 + prod.cost.phi(e_d),
        branch=branch,
        flags=tuple(flags),
    )
    menu = build_contract_menu(
        prod, e_f=e_f, e_d=e_d, e4=e4, h1=h1, h2=h2, h3=h3, h4=h4, s1=s1, s2=s2
    )
    return row, menu


def eval_intermediary_limited(scenario: Scenario, branch: str = "auto") -> RegimeResult:
    """Report-based contracting under external limits (observed-state payoffs
    pinned at zero, which exposes the principal to blackmail).

    branch: "auto" applies the encouragement-vs-exclusion switch rule per
    producer; "encouragement" or "exclusion" forces one side everywhere.  An
    auto result is tagged as the encouragement regime only when every
    producer lands there, else as exclusion; rows carry their own branch.
    """
    mu = scenario.intermediary.mu
    alpha = scenario.intermediary.alpha
    if branch not in ("auto", "encouragement", "exclusion"):
        raise ValueError(f"unknown branch {branch!r}")
    rows = []
    menus = []
    for prod in scenario.producers:
        if branch == "auto":
            decision = encouragement_preferred(prod.p, prod.pi, mu, alpha)
            chosen = (
                LimitedBranch.ENCOURAGEMENT if decision.encouragement else LimitedBranch.EXCLUSION
            )
        else:
            chosen = LimitedBranch(branch)
        row, menu = _limited_producer(prod, mu, alpha, chosen)
        rows.append(row)
        menus.append(menu)
    all_encouragement = all(r.branch is LimitedBranch.ENCOURAGEMENT for r in rows)
    return RegimeResult(
        regime=(
            RegimeKind.INTERMEDIARY_LIMITED_ENCOURAGEMENT
            if all_encouragement
            else RegimeKind.INTERMEDIARY_LIMITED_EXCLUSION
        ),
        producers=tuple(rows),
        total=sum(r.contribution for r in rows),
        menus=tuple(menus),
    )


# ---------------------------------------------------------------------------
# Selector plumbing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RegimeInputs:
    """A regime evaluation request; alpha_override replaces the scenario's
    intermediary bargaining power before solving."""

    scenario: Scenario
    regime: RegimeKind
    alpha_override: float | None = None


def evaluate_regime(inputs: RegimeInputs) -> RegimeResult:
    scenario = inputs.scenario
    if inputs.alpha_override is not None:
        scenario = with_alpha(scenario, inputs.alpha_override)
    kind = inputs.regime
    if kind is RegimeKind.COMPLETE_INFO:
        return eval_complete_info(scenario)
    if kind is RegimeKind.ASYMMETRIC_NO_INTERMEDIARY:
        return eval_asym_no_intermediary(scenario)
    if kind is RegimeKind.INTERMEDIARY_UNLIMITED:
        return eval_intermediary_unlimited(scenario)
    if kind is RegimeKind.INTERMEDIARY_LIMITED_ENCOURAGEMENT:
        return eval_intermediary_limited(scenario, branch="encouragement")
    if kind is RegimeKind.INTERMEDIARY_LIMITED_EXCLUSION:
        return eval_intermediary_limited(scenario, branch="exclusion")
    raise ValueError(f"unknown regime {kind!r}")
