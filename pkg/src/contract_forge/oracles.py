"""Brute-force reference routes, independent of the closed-form solvers.

These exist so every first-order-condition solve can be cross-checked by a
method that knows nothing about the algebra: dense grid maximization of the
underlying objective, and central finite differences for derivatives.
"""

from __future__ import annotations

import numpy as np

from .kernel import first_best_effort
from .model import ProducerSpec


def _effort_grid(e_max: float, step: float) -> np.ndarray:
    n = int(np.floor(e_max / step)) + 1
    return np.arange(n, dtype=float) * step


def grid_best_asym_effort(prod: ProducerSpec, step: float = 1e-4) -> float:
    """Grid argmax over [0, e_d] of the screening objective in the distorted
    effort, with the unfavourable unobserved payoff pinned at the bankruptcy
    floor: (1-p)*(beta_d*e - phi(e)) - p*bonus(e)."""
    e_d = first_best_effort(prod.beta_d, prod.cost).effort
    e = _effort_grid(e_d, step)
    phi = prod.cost.phi
    theta = phi(e) - phi(prod.ratio * e)
    objective = (1.0 - prod.p) * (prod.beta_d * e - phi(e)) - prod.p * theta
    return float(e[int(np.argmax(objective))])


def grid_best_limited_effort(prod: ProducerSpec, mu: float, step: float = 1e-4) -> float:
    """Grid argmax of the report-regime objective's effort-dependent part:
    -pi*(1-mu)*p*bonus(e) + (1-pi)*((1-p)*(beta_d*e - phi(e)) - p*bonus(e))."""
    e_d = first_best_effort(prod.beta_d, prod.cost).effort
    e = _effort_grid(e_d, step)
    phi = prod.cost.phi
    theta = phi(e) - phi(prod.ratio * e)
    objective = -prod.pi * (1.0 - mu) * prod.p * theta + (1.0 - prod.pi) * (
        (1.0 - prod.p) * (prod.beta_d * e - phi(e)) - prod.p * theta
    )
    return float(e[int(np.argmax(objective))])


def central_difference(f, x: float, h: float = 1e-5) -> float:
    """Two-sided difference quotient (f(x+h) - f(x-h)) / (2h)."""
    return (f(x + h) - f(x - h)) / (2.0 * h)
