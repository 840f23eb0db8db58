"""Seeded random generators for property suites.

Producers are drawn so the participation condition holds at the
no-intermediary distorted effort (h_min >= -p * bonus(e4_bar)); without it
the bankruptcy floor stops being the binding constraint and the screening
benchmarks lose their ordering.
"""

import random

from contract_forge import (
    IntermediarySpec,
    ProducerSpec,
    QuadraticCost,
    Scenario,
    bonus,
    solve_asym_effort,
)


def random_producer(
    rng: random.Random,
    name: str = "P0",
    a_range=(0.2, 3.0),
    b_range=(-1.5, 3.0),
    beta_f_range=(4.0, 25.0),
) -> ProducerSpec:
    while True:
        a = rng.uniform(*a_range)
        b = rng.uniform(*b_range)
        beta_f = rng.uniform(*beta_f_range)
        beta_d = rng.uniform(0.3, 0.95) * beta_f
        if beta_d <= b + 0.5:  # keep the unfavourable first-best effort well positive
            continue
        p = rng.uniform(0.05, 0.95)
        pi = rng.uniform(0.0, 0.95)
        probe = ProducerSpec(
            name=name, beta_f=beta_f, beta_d=beta_d, p=p, pi=pi,
            h_min=0.0, cost=QuadraticCost(a=a, b=b),
        )
        e4_bar = solve_asym_effort(probe).effort
        theta = bonus(probe.cost, probe.ratio, e4_bar)
        if theta <= 0.0:
            continue
        h_min = -rng.uniform(0.0, 1.0) * p * theta
        return ProducerSpec(
            name=name, beta_f=beta_f, beta_d=beta_d, p=p, pi=pi,
            h_min=h_min, cost=QuadraticCost(a=a, b=b),
        )


def random_scenario(rng: random.Random, n_producers: int = 1, mu_max: float = 1.0) -> Scenario:
    producers = tuple(
        random_producer(rng, name=f"P{k}") for k in range(n_producers)
    )
    intermediary = IntermediarySpec(mu=rng.uniform(0.0, mu_max), alpha=rng.uniform(0.05, 3.0))
    return Scenario(producers=producers, intermediary=intermediary)
