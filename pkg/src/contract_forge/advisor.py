"""Regime comparison, the hire-the-intermediary recommendation, corruption
exposure diagnostics, and producer ranking.

The comparison evaluates every producer in isolation (the objective is
additively separable), so a solver failure on one producer marks that row as
failed without aborting the rest.
"""

from __future__ import annotations

from dataclasses import dataclass

from .kernel import NoPositiveEffort
from .model import ContractMenu, LimitedBranch, ProducerSpec, Scenario
from .regimes import (
    encouragement_preferred,
    eval_asym_no_intermediary,
    eval_complete_info,
    eval_intermediary_limited,
)

USE_INTERMEDIARY = "use_intermediary"
DIRECT_CONTRACT = "direct_contract"


def _recommendation(h_lim: float, h_opt2: float) -> str:
    # strict dominance required; a tie is not worth the operational overhead
    return USE_INTERMEDIARY if h_lim > h_opt2 else DIRECT_CONTRACT


@dataclass(frozen=True)
class ComparisonRow:
    """One producer's cross-regime summary.

    h_lim is the better of the two anti-blackmail branches; chosen_branch
    records which one, switch_rule_branch what the marginal rule alone would
    pick.  recommendation is use_intermediary iff h_lim strictly exceeds
    h_opt2 (ties go to the direct contract).
    """

    name: str
    h_opt1: float | None = None
    h_opt2: float | None = None
    h_lim_encouragement: float | None = None
    h_lim_exclusion: float | None = None
    h_lim: float | None = None
    chosen_branch: LimitedBranch | None = None
    switch_rule_branch: LimitedBranch | None = None
    switch_lhs: float | None = None
    switch_rhs: float | None = None
    s1: float | None = None
    s2: float | None = None
    info_rent: float | None = None  # h_opt1 - h_opt2
    delta_vs_direct: float | None = None  # h_lim - h_opt2
    recommendation: str | None = None
    flags: tuple[str, ...] = ()
    failed: bool = False
    error: str | None = None

    @property
    def best(self) -> float:
        """Best attainable principal value for this producer."""
        if self.failed:
            return float("-inf")
        return max(self.h_opt2, self.h_lim)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "h_opt1": self.h_opt1,
            "h_opt2": self.h_opt2,
            "h_lim_encouragement": self.h_lim_encouragement,
            "h_lim_exclusion": self.h_lim_exclusion,
            "h_lim": self.h_lim,
            "chosen_branch": None if self.chosen_branch is None else self.chosen_branch.value,
            "switch_rule_branch": (
                None if self.switch_rule_branch is None else self.switch_rule_branch.value
            ),
            "switch_lhs": self.switch_lhs,
            "switch_rhs": self.switch_rhs,
            "s1": self.s1,
            "s2": self.s2,
            "info_rent": self.info_rent,
            "delta_vs_direct": self.delta_vs_direct,
            "recommendation": self.recommendation,
            "flags": list(self.flags),
            "failed": self.failed,
            "error": self.error,
        }


@dataclass(frozen=True)
class ComparisonReport:
    rows: tuple[ComparisonRow, ...]
    total_h_opt1: float
    total_h_opt2: float
    total_h_lim: float
    ranking: tuple[str, ...]

    def row(self, name: str) -> ComparisonRow:
        for r in self.rows:
            if r.name == name:
                return r
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "rows": [r.to_dict() for r in self.rows],
            "total_h_opt1": self.total_h_opt1,
            "total_h_opt2": self.total_h_opt2,
            "total_h_lim": self.total_h_lim,
            "ranking": list(self.ranking),
        }


def _compare_one(prod: ProducerSpec, scenario: Scenario) -> ComparisonRow:
    single = Scenario(producers=(prod,), intermediary=scenario.intermediary)
    try:
        h_opt1 = eval_complete_info(single).producers[0].contribution
        asym_row = eval_asym_no_intermediary(single).producers[0]
        enc_row = eval_intermediary_limited(single, branch="encouragement").producers[0]
        exc_row = eval_intermediary_limited(single, branch="exclusion").producers[0]
    except NoPositiveEffort as err:
        return ComparisonRow(name=prod.name, failed=True, error=str(err))

    decision = encouragement_preferred(
        prod.p, prod.pi, scenario.intermediary.mu, scenario.intermediary.alpha
    )
    switch_branch = (
        LimitedBranch.ENCOURAGEMENT if decision.encouragement else LimitedBranch.EXCLUSION
    )
    if enc_row.contribution == exc_row.contribution:
        chosen = switch_branch
    elif enc_row.contribution > exc_row.contribution:
        chosen = LimitedBranch.ENCOURAGEMENT
    else:
        chosen = LimitedBranch.EXCLUSION
    chosen_row = enc_row if chosen is LimitedBranch.ENCOURAGEMENT else exc_row
    h_lim = chosen_row.contribution

    flags = sorted(set(asym_row.flags) | set(chosen_row.flags))
    if chosen is not switch_branch:
        flags.append("branch_overrides_switch_rule")

    h_opt2 = asym_row.contribution
    return ComparisonRow(
        name=prod.name,
        h_opt1=h_opt1,
        h_opt2=h_opt2,
        h_lim_encouragement=enc_row.contribution,
        h_lim_exclusion=exc_row.contribution,
        h_lim=h_lim,
        chosen_branch=chosen,
        switch_rule_branch=switch_branch,
        switch_lhs=decision.lhs,
        switch_rhs=decision.rhs,
        s1=chosen_row.s1,
        s2=chosen_row.s2,
        info_rent=h_opt1 - h_opt2,
        delta_vs_direct=h_lim - h_opt2,
        recommendation=_recommendation(h_lim, h_opt2),
        flags=tuple(flags),
    )


def compare(scenario: Scenario) -> ComparisonReport:
    """Run all regimes per producer and fill the comparison report.

    Deterministic: identical scenarios produce identical reports.
    """
    rows = tuple(_compare_one(prod, scenario) for prod in scenario.producers)
    ok = [r for r in rows if not r.failed]
    return ComparisonReport(
        rows=rows,
        total_h_opt1=sum(r.h_opt1 for r in ok),
        total_h_opt2=sum(r.h_opt2 for r in ok),
        total_h_lim=sum(r.h_lim for r in ok),
        ranking=rank_producers_rows(rows),
    )


def rank_producers_rows(rows) -> tuple[str, ...]:
    order = sorted(range(len(rows)), key=lambda i: (-rows[i].best, i))
    return tuple(rows[i].name for i in order)


def rank_producers(report: ComparisonReport) -> tuple[str, ...]:
    """Producers by descending best-regime contribution; input order breaks
    ties, failed rows sink to the end."""
    return rank_producers_rows(report.rows)


@dataclass(frozen=True)
class CorruptionDiagnostics:
    """Exposure of a contract menu to the two corruption channels.

    bribe_incentive: what the favourable type would pay to have its report
    concealed (payoff gap between the unknown-favourable and favourable
    lines).  blackmail_exposure: what an intermediary could extort by
    threatening to conceal a truthful unfavourable report (gap between the
    unfavourable and unknown-unfavourable lines).  The menu is certified
    corruption-free when its transfers cover the (1-mu)-scaled exposures.
    """

    producer: str
    bribe_incentive: float
    blackmail_exposure: float
    max_rational_bribe: float
    intermediary_bribe_value: float
    bribe_covered: bool
    blackmail_covered: bool
    corruption_free: bool

    def to_dict(self) -> dict:
        return {
            "producer": self.producer,
            "bribe_incentive": self.bribe_incentive,
            "blackmail_exposure": self.blackmail_exposure,
            "max_rational_bribe": self.max_rational_bribe,
            "intermediary_bribe_value": self.intermediary_bribe_value,
            "bribe_covered": self.bribe_covered,
            "blackmail_covered": self.blackmail_covered,
            "corruption_free": self.corruption_free,
        }


def corruption_exposure(
    menu: ContractMenu,
    prod: ProducerSpec,
    mu: float,
    alpha: float = 1.0,
    tol: float = 1e-9,
) -> CorruptionDiagnostics:
    """Diagnose a menu's bribe and blackmail exposure.

    alpha scales the blackmail-coverage test the way the bargaining split
    scales the required transfer: a transfer s2 deters blackmail when
    alpha * s2 >= (1 - mu) * exposure.
    """
    if menu.producer != prod.name:
        raise ValueError(f"menu is for {menu.producer!r}, spec is {prod.name!r}")
    h1 = menu.favourable.producer_payoff
    h2 = menu.unfavourable.producer_payoff
    h3 = menu.unknown_favourable.producer_payoff
    h4 = menu.unknown_unfavourable.producer_payoff
    bribe_incentive = max(0.0, h3 - h1)
    blackmail_exposure = max(0.0, h2 - h4)
    bribe_covered = menu.favourable.legal_transfer + tol >= (1.0 - mu) * bribe_incentive
    blackmail_covered = (
        alpha * menu.unfavourable.legal_transfer + tol >= (1.0 - mu) * blackmail_exposure
    )
    return CorruptionDiagnostics(
        producer=menu.producer,
        bribe_incentive=bribe_incentive,
        blackmail_exposure=blackmail_exposure,
        max_rational_bribe=bribe_incentive,
        intermediary_bribe_value=(1.0 - mu) * bribe_incentive,
        bribe_covered=bribe_covered,
        blackmail_covered=blackmail_covered,
        corruption_free=bribe_covered and blackmail_covered,
    )
