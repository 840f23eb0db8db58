"""Domain types for the contracting game: a principal funds producers whose
productivity type is private, optionally monitored by an intermediary.

Everything here is an immutable value object.  Construction never validates;
call :func:`validate_scenario` (or load through :func:`load_scenario`) to get
a full violation report instead of a first-failure exception.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, replace
from importlib import resources
from typing import Iterable


class ScenarioValidationError(ValueError):
    """Raised with the complete list of invariant violations, one per field."""

    def __init__(self, violations: Iterable[str]):
        self.violations = list(violations)
        super().__init__("invalid scenario: " + "; ".join(self.violations))


class ReportEntry(enum.IntEnum):
    """What the intermediary reports about one producer's type.

    Integer values fix the enumeration order: favourable < unfavourable < unknown.
    """

    FAVOURABLE = 0
    UNFAVOURABLE = 1
    UNKNOWN = 2


@dataclass(frozen=True)
class QuadraticCost:
    """Production cost a*e**2 + b*e, strictly convex for a > 0.

    Any object exposing ``phi(e)`` and ``phi_prime(e)`` with phi strictly
    convex works wherever a QuadraticCost is accepted, but only the quadratic
    family gets closed-form solvers; other providers fall back to bisection.
    b may be negative, in which case phi_prime < 0 below e = -b/(2a) and the
    bonus function is only guaranteed positive where phi_prime(ratio*e) > 0.
    """

    a: float
    b: float = 0.0

    kind = "quadratic"

    def phi(self, e):
        return self.a * e * e + self.b * e

    def phi_prime(self, e):
        return 2.0 * self.a * e + self.b

    def to_dict(self) -> dict:
        return {"type": "quadratic", "a": self.a, "b": self.b}


@dataclass(frozen=True)
class ProducerSpec:
    """One producer's private-type parameters.

    beta_f / beta_d: productivity in the favourable / unfavourable state,
    p: probability of the favourable state, pi: probability the intermediary
    learns the realized state, h_min: bankruptcy floor on the producer's
    payoff (<= 0), cost: production-cost function.
    """

    name: str
    beta_f: float
    beta_d: float
    p: float
    pi: float
    h_min: float
    cost: QuadraticCost

    @property
    def ratio(self) -> float:
        """Mimicry ratio beta_d / beta_f in (0, 1) for valid specs."""
        return self.beta_d / self.beta_f

    def violations(self, prefix: str = "") -> list[str]:
        out = []
        if not (0.0 < self.beta_d < self.beta_f):
            out.append(
                f"{prefix}beta_d: 0 < beta_d < beta_f violated "
                f"(beta_d={self.beta_d!r}, beta_f={self.beta_f!r})"
            )
        if not (0.0 < self.p < 1.0):
            out.append(f"{prefix}p: must satisfy 0 < p < 1 (got {self.p!r})")
        if self.pi == 1.0:
            out.append(
                f"{prefix}pi: pi = 1 unsupported "
                "(the uninformed-state weight pi/(1 - pi) diverges)"
            )
        elif not (0.0 <= self.pi < 1.0):
            out.append(f"{prefix}pi: must satisfy 0 <= pi < 1 (got {self.pi!r})")
        if not (self.h_min <= 0.0):
            out.append(f"{prefix}h_min: must be <= 0 (got {self.h_min!r})")
        out.extend(_cost_violations(self.cost, prefix))
        return out

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "beta_f": self.beta_f,
            "beta_d": self.beta_d,
            "p": self.p,
            "pi": self.pi,
            "h_min": self.h_min,
            "cost": self.cost.to_dict(),
        }


def _cost_violations(cost, prefix: str) -> list[str]:
    if isinstance(cost, QuadraticCost):
        if not cost.a > 0.0:
            return [f"{prefix}cost.a: must be > 0 for strict convexity (got {cost.a!r})"]
        return []
    # Duck-typed provider: sample the stated invariants.
    out = []
    if abs(cost.phi(0.0)) > 1e-12:
        out.append(f"{prefix}cost: phi(0) must be 0 (got {cost.phi(0.0)!r})")
    samples = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0]
    derivs = [cost.phi_prime(e) for e in samples]
    if any(d2 <= d1 for d1, d2 in zip(derivs, derivs[1:])):
        out.append(f"{prefix}cost: phi_prime must be strictly increasing")
    return out


@dataclass(frozen=True)
class IntermediarySpec:
    """mu: transaction-cost fraction burnt when concealing side payments,
    alpha: producer's bargaining power in the illegal bargain (the
    intermediary's power is normalized to 1)."""

    mu: float
    alpha: float = 1.0

    def violations(self, prefix: str = "") -> list[str]:
        out = []
        if not (0.0 <= self.mu <= 1.0):
            out.append(f"{prefix}mu: must satisfy 0 <= mu <= 1 (got {self.mu!r})")
        if not self.alpha > 0.0:
            out.append(f"{prefix}alpha: must be > 0 (got {self.alpha!r})")
        return out

    def to_dict(self) -> dict:
        return {"mu": self.mu, "alpha": self.alpha}


@dataclass(frozen=True)
class Scenario:
    """A full game instance: ordered producers plus one intermediary."""

    producers: tuple[ProducerSpec, ...]
    intermediary: IntermediarySpec

    def producer(self, name: str) -> ProducerSpec:
        for prod in self.producers:
            if prod.name == name:
                return prod
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "producers": [p.to_dict() for p in self.producers],
            "intermediary": self.intermediary.to_dict(),
        }


def validate_scenario(raw: Scenario) -> Scenario:
    """Return the scenario iff every invariant holds.

    Raises ScenarioValidationError carrying *all* violations, each naming the
    offending field.
    """
    violations = []
    if len(raw.producers) < 1:
        violations.append("producers: at least one producer required")
    names = [p.name for p in raw.producers]
    if len(set(names)) != len(names):
        dupes = sorted({n for n in names if names.count(n) > 1})
        violations.append(f"producers: duplicate names {dupes}")
    for k, prod in enumerate(raw.producers):
        violations.extend(prod.violations(prefix=f"producers[{k}]."))
    violations.extend(raw.intermediary.violations(prefix="intermediary."))
    if violations:
        raise ScenarioValidationError(violations)
    return raw


def with_alpha(scenario: Scenario, alpha: float) -> Scenario:
    """Copy of the scenario with the producer bargaining power replaced."""
    return replace(scenario, intermediary=replace(scenario.intermediary, alpha=alpha))


# ---------------------------------------------------------------------------
# Report space and per-producer state distribution
# ---------------------------------------------------------------------------

_REPORT_ORDER = (ReportEntry.FAVOURABLE, ReportEntry.UNFAVOURABLE, ReportEntry.UNKNOWN)


def enumerate_reports(n_producers: int) -> list[tuple[ReportEntry, ...]]:
    """All 3**n report tuples in lexicographic order
    (favourable < unfavourable < unknown)."""
    if n_producers < 1:
        raise ValueError(f"n_producers must be >= 1 (got {n_producers})")
    return list(itertools.product(_REPORT_ORDER, repeat=n_producers))


@dataclass(frozen=True)
class StateDistribution:
    """Probabilities of the four per-producer states:

    q1 observed-favourable, q2 observed-unfavourable,
    q3 unobserved-favourable, q4 unobserved-unfavourable.
    """

    q1: float
    q2: float
    q3: float
    q4: float

    @classmethod
    def from_probs(cls, p: float, pi: float) -> "StateDistribution":
        # Accepts the whole [0,1]^2 square, including degenerate corners that
        # a valid ProducerSpec excludes.
        return cls(q1=p * pi, q2=(1.0 - p) * pi, q3=p * (1.0 - pi), q4=(1.0 - p) * (1.0 - pi))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.q1, self.q2, self.q3, self.q4)

    @property
    def total(self) -> float:
        return self.q1 + self.q2 + self.q3 + self.q4


def state_distribution(prod: ProducerSpec) -> StateDistribution:
    """Four products of p/(1-p) with pi/(1-pi); sums to 1."""
    return StateDistribution.from_probs(prod.p, prod.pi)


# ---------------------------------------------------------------------------
# Contract menus and regime results
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ContractLine:
    """One report-contingent contract row: demanded effort, producer payoff,
    and the legal transfer paid to the intermediary for that report."""

    report_case: ReportEntry
    effort: float
    producer_payoff: float
    legal_transfer: float

    def to_dict(self) -> dict:
        return {
            "report_case": self.report_case.name.lower(),
            "effort": self.effort,
            "producer_payoff": self.producer_payoff,
            "legal_transfer": self.legal_transfer,
        }


@dataclass(frozen=True)
class ContractMenu:
    """Per-producer menu: one line for each observed report, two for the
    unknown report (one per producer type, favourable first)."""

    producer: str
    lines: tuple[ContractLine, ...]

    @property
    def favourable(self) -> ContractLine:
        return self.lines[0]

    @property
    def unfavourable(self) -> ContractLine:
        return self.lines[1]

    @property
    def unknown_favourable(self) -> ContractLine:
        return self.lines[2]

    @property
    def unknown_unfavourable(self) -> ContractLine:
        return self.lines[3]

    def to_dict(self) -> dict:
        return {"producer": self.producer, "lines": [ln.to_dict() for ln in self.lines]}


class RegimeKind(enum.Enum):
    COMPLETE_INFO = "complete_info"
    ASYMMETRIC_NO_INTERMEDIARY = "asymmetric_no_intermediary"
    INTERMEDIARY_UNLIMITED = "intermediary_unlimited"
    INTERMEDIARY_LIMITED_ENCOURAGEMENT = "intermediary_limited_encouragement"
    INTERMEDIARY_LIMITED_EXCLUSION = "intermediary_limited_exclusion"


class LimitedBranch(enum.Enum):
    ENCOURAGEMENT = "encouragement"
    EXCLUSION = "exclusion"


@dataclass(frozen=True)
class ProducerOutcome:
    """Per-producer slice of a regime solution.

    State payoffs h1..h4 follow the state numbering of StateDistribution;
    entries are None where the regime never puts weight on the state.
    s1 / s2 are the legal transfers tied to the favourable / unfavourable
    report.  funding_f / funding_d are the money handed to the producer in
    the observed favourable / unfavourable state, where that is defined.
    """

    name: str
    e_f: float
    e_d: float
    e4: float | None
    h1: float | None
    h2: float | None
    h3: float | None
    h4: float | None
    s1: float
    s2: float
    contribution: float
    funding_f: float | None = None
    funding_d: float | None = None
    branch: LimitedBranch | None = None
    flags: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "e_f": self.e_f,
            "e_d": self.e_d,
            "e4": self.e4,
            "h1": self.h1,
            "h2": self.h2,
            "h3": self.h3,
            "h4": self.h4,
            "s1": self.s1,
            "s2": self.s2,
            "contribution": self.contribution,
            "funding_f": self.funding_f,
            "funding_d": self.funding_d,
            "branch": self.branch.value if self.branch is not None else None,
            "flags": list(self.flags),
        }


@dataclass(frozen=True)
class RegimeResult:
    """One regime evaluated over a scenario; total is the exact sum of the
    per-producer contributions (the objective is additively separable)."""

    regime: RegimeKind
    producers: tuple[ProducerOutcome, ...]
    total: float
    menus: tuple[ContractMenu, ...] | None = None

    def outcome(self, name: str) -> ProducerOutcome:
        for row in self.producers:
            if row.name == name:
                return row
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "regime": self.regime.value,
            "producers": [row.to_dict() for row in self.producers],
            "total": self.total,
            "menus": None if self.menus is None else [m.to_dict() for m in self.menus],
        }


# ---------------------------------------------------------------------------
# JSON scenario documents
# ---------------------------------------------------------------------------

_PRODUCER_KEYS = {"name", "beta_f", "beta_d", "p", "pi", "h_min", "cost"}
_COST_KEYS = {"type", "a", "b"}
_INTERMEDIARY_KEYS = {"mu", "alpha"}
_TOP_KEYS = {"producers", "intermediary"}


def _reject_unknown(d: dict, allowed: set, where: str, errors: list[str]):
    unknown = sorted(set(d) - allowed)
    if unknown:
        errors.append(f"{where}: unknown keys {unknown}")


def _require(d: dict, key: str, where: str, errors: list[str]):
    if key not in d:
        errors.append(f"{where}: missing required key {key!r}")
        return None
    return d[key]


def scenario_from_dict(doc: dict) -> Scenario:
    """Parse a scenario document; unknown keys anywhere are rejected.

    Parsing errors and invariant violations are both reported through
    ScenarioValidationError.
    """
    errors: list[str] = []
    if not isinstance(doc, dict):
        raise ScenarioValidationError(["document: expected a JSON object"])
    _reject_unknown(doc, _TOP_KEYS, "document", errors)

    producers = []
    raw_producers = _require(doc, "producers", "document", errors)
    if raw_producers is not None:
        if not isinstance(raw_producers, list):
            errors.append("producers: expected a list")
            raw_producers = []
        for k, rp in enumerate(raw_producers):
            where = f"producers[{k}]"
            if not isinstance(rp, dict):
                errors.append(f"{where}: expected an object")
                continue
            _reject_unknown(rp, _PRODUCER_KEYS, where, errors)
            cost_doc = _require(rp, "cost", where, errors)
            cost = None
            if isinstance(cost_doc, dict):
                _reject_unknown(cost_doc, _COST_KEYS, f"{where}.cost", errors)
                kind = _require(cost_doc, "type", f"{where}.cost", errors)
                if kind is not None and kind != "quadratic":
                    errors.append(f"{where}.cost.type: unsupported type {kind!r}")
                a = _require(cost_doc, "a", f"{where}.cost", errors)
                if a is not None:
                    cost = QuadraticCost(a=float(a), b=float(cost_doc.get("b", 0.0)))
            elif cost_doc is not None:
                errors.append(f"{where}.cost: expected an object")
            fields = {}
            for key in ("name", "beta_f", "beta_d", "p", "pi", "h_min"):
                val = _require(rp, key, where, errors)
                if val is not None:
                    fields[key] = val if key == "name" else float(val)
            if cost is not None and len(fields) == 6:
                producers.append(ProducerSpec(cost=cost, **fields))

    inter = None
    raw_inter = _require(doc, "intermediary", "document", errors)
    if isinstance(raw_inter, dict):
        _reject_unknown(raw_inter, _INTERMEDIARY_KEYS, "intermediary", errors)
        mu = _require(raw_inter, "mu", "intermediary", errors)
        if mu is not None:
            inter = IntermediarySpec(mu=float(mu), alpha=float(raw_inter.get("alpha", 1.0)))
    elif raw_inter is not None:
        errors.append("intermediary: expected an object")

    if errors:
        raise ScenarioValidationError(errors)
    return Scenario(producers=tuple(producers), intermediary=inter)


def scenario_from_json(text: str) -> Scenario:
    return scenario_from_dict(json.loads(text))


def load_scenario(path) -> Scenario:
    """Read, parse, and validate a scenario JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        scenario = scenario_from_json(fh.read())
    return validate_scenario(scenario)


def builtin_scenario(name: str) -> Scenario:
    """Bundled fixtures: 'example1' (three producers) and 'example2'
    (producer 1 alone, near-zero producer bargaining power)."""
    ref = resources.files("contract_forge").joinpath(f"scenarios/{name}.json")
    try:
        text = ref.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise KeyError(f"no bundled scenario named {name!r}") from None
    return validate_scenario(scenario_from_json(text))
