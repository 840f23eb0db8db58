"""Closed-form and safeguarded numeric solvers for the scalar formulas of the
screening game: first-best efforts, the type-mimicry bonus, and the distorted
unfavourable-state efforts under the two information regimes.

All functions are pure; quadratic costs solve in closed form, anything else
goes through deterministic bisection.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Sequence

from .model import ProducerSpec, QuadraticCost

DEFAULT_TOL = 1e-10
TOL_ENV_VAR = "CONTRACT_FORGE_TOL"
MAX_BISECT_ITER = 200
_BRACKET_EPS = 1e-12


class NoPositiveEffort(ValueError):
    """Marginal cost at zero effort already exceeds productivity: no positive
    effort satisfies phi_prime(e) = beta."""


@dataclass(frozen=True)
class EffortSolution:
    """A solved first-order condition.

    residual is the FOC value at the returned effort; for interior solutions
    |residual| <= 1e-9 (closed form) or <= tol * beta_d (bisection).  shutdown
    marks the corner where no interior root exists and the unfavourable type
    is not employed (effort 0, residual = FOC at 0, nonnegative).
    """

    effort: float
    residual: float
    method: str
    shutdown: bool = False


def solver_tolerance(tol: float | None = None) -> float:
    """Relative residual tolerance for bisection; the CONTRACT_FORGE_TOL
    environment variable overrides the 1e-10 default."""
    if tol is not None:
        return tol
    return float(os.environ.get(TOL_ENV_VAR, DEFAULT_TOL))


def output(beta: float, e: float) -> float:
    """Goods produced with productivity beta at effort e."""
    return beta * e


def producer_payoff(s: float, cost, e: float, z: float = 0.0) -> float:
    """Funding minus production cost minus any side payment."""
    return s - cost.phi(e) - z


def intermediary_payoff(s_bar: float, mu: float, bribes: Sequence[float] = ()) -> float:
    """Legal transfer plus bribes net of the concealment cost fraction mu."""
    return s_bar + (1.0 - mu) * sum(bribes)


def bonus(cost, ratio: float, e: float) -> float:
    """Payoff gap a favourable type secures by mimicking the unfavourable
    contract at effort e: phi(e) - phi(ratio * e)."""
    return cost.phi(e) - cost.phi(ratio * e)


def bonus_prime(cost, ratio: float, e: float) -> float:
    """Derivative of the mimicry bonus: phi'(e) - ratio * phi'(ratio * e)."""
    return cost.phi_prime(e) - ratio * cost.phi_prime(ratio * e)


def first_best_effort(beta: float, cost) -> EffortSolution:
    """Effort equating marginal cost to productivity: phi_prime(e) = beta.

    Raises NoPositiveEffort when beta <= phi_prime(0).
    """
    if beta <= cost.phi_prime(0.0):
        raise NoPositiveEffort(
            f"beta={beta!r} does not exceed marginal cost at zero effort "
            f"({cost.phi_prime(0.0)!r})"
        )
    if isinstance(cost, QuadraticCost):
        e = (beta - cost.b) / (2.0 * cost.a)
        return EffortSolution(effort=e, residual=cost.phi_prime(e) - beta, method="closed_form")
    # Generic provider: expand a bracket, then bisect phi_prime(e) = beta.
    hi = 1.0
    while cost.phi_prime(hi) < beta:
        hi *= 2.0
        if hi > 1e30:
            raise NoPositiveEffort(f"phi_prime never reaches beta={beta!r}")
    lo = 0.0
    e = hi
    for _ in range(MAX_BISECT_ITER):
        e = 0.5 * (lo + hi)
        r = cost.phi_prime(e) - beta
        if abs(r) <= solver_tolerance() * max(abs(beta), 1.0):
            break
        if r < 0.0:
            lo = e
        else:
            hi = e
    return EffortSolution(effort=e, residual=cost.phi_prime(e) - beta, method="bisection")


def asym_multiplier(p: float) -> float:
    """Weight p/(1-p) on the bonus derivative in the no-intermediary FOC."""
    return p / (1.0 - p)


def limited_multiplier(p: float, pi: float, mu: float) -> float:
    """Amplified weight (p/(1-p)) * (1 + (pi/(1-pi)) * (1-mu)); reduces to the
    no-intermediary weight at pi = 0 or mu = 1."""
    return asym_multiplier(p) * (1.0 + (pi / (1.0 - pi)) * (1.0 - mu))


def _screening_foc(cost, ratio, multiplier, beta_d):
    def foc(e):
        return cost.phi_prime(e) + multiplier * bonus_prime(cost, ratio, e) - beta_d

    return foc


def solve_screening_effort(
    cost,
    beta_d: float,
    ratio: float,
    multiplier: float,
    tol: float | None = None,
    method: str = "auto",
) -> EffortSolution:
    """Root of phi'(e) + multiplier * bonus'(e) = beta_d on (0, e_d].

    The FOC is strictly increasing in e, negative-to-positive on the bracket,
    so the root is unique; when it is nonpositive the unfavourable type is
    shut down (effort 0, shutdown flag set).
    """
    foc = _screening_foc(cost, ratio, multiplier, beta_d)
    if method == "auto":
        method = "closed_form" if isinstance(cost, QuadraticCost) else "bisection"

    if method == "closed_form":
        if not isinstance(cost, QuadraticCost):
            raise ValueError("closed_form requires a QuadraticCost")
        a, b = cost.a, cost.b
        denom = 2.0 * a * (1.0 + multiplier * (1.0 - ratio * ratio))
        numer = beta_d - b - multiplier * b * (1.0 - ratio)
        e = numer / denom
        if e <= 0.0:
            return EffortSolution(0.0, foc(0.0), "closed_form", shutdown=True)
        return EffortSolution(e, foc(e), "closed_form")

    if method != "bisection":
        raise ValueError(f"unknown method {method!r}")
    tol = solver_tolerance(tol)
    try:
        e_d = first_best_effort(beta_d, cost).effort
    except NoPositiveEffort:
        # Even the undistorted unfavourable effort is zero.
        return EffortSolution(0.0, foc(0.0), "bisection", shutdown=True)
    lo = _BRACKET_EPS
    if foc(lo) >= 0.0:
        return EffortSolution(0.0, foc(0.0), "bisection", shutdown=True)
    hi = e_d  # FOC at e_d equals multiplier * bonus'(e_d) > 0
    e = hi
    for _ in range(MAX_BISECT_ITER):
        e = 0.5 * (lo + hi)
        r = foc(e)
        if abs(r) <= tol * beta_d:
            break
        if r < 0.0:
            lo = e
        else:
            hi = e
    return EffortSolution(e, foc(e), "bisection")


def solve_asym_effort(
    prod: ProducerSpec, tol: float | None = None, method: str = "auto"
) -> EffortSolution:
    """Distorted unfavourable-state effort with no intermediary."""
    return solve_screening_effort(
        prod.cost, prod.beta_d, prod.ratio, asym_multiplier(prod.p), tol=tol, method=method
    )


def solve_limited_effort(
    prod: ProducerSpec, mu: float, tol: float | None = None, method: str = "auto"
) -> EffortSolution:
    """Distorted unfavourable-state effort when the intermediary's report is
    contracted on; never exceeds the no-intermediary solution."""
    return solve_screening_effort(
        prod.cost,
        prod.beta_d,
        prod.ratio,
        limited_multiplier(prod.p, prod.pi, mu),
        tol=tol,
        method=method,
    )


def expected_producer_payoff(prod: ProducerSpec, e4: float) -> float:
    """Expected rent h_min + p * bonus(e4); nonnegative iff the participation
    condition holds at the distorted effort e4."""
    return prod.h_min + prod.p * bonus(prod.cost, prod.ratio, e4)
