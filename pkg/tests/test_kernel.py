import random

import pytest
from hypothesis import given, settings, strategies as st

from contract_forge import (
    NoPositiveEffort,
    ProducerSpec,
    QuadraticCost,
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
from contract_forge.kernel import limited_multiplier, solver_tolerance
from contract_forge.oracles import central_difference

from helpers import random_producer

PHI1 = QuadraticCost(a=1.0, b=0.0)   # e^2
PHI2 = QuadraticCost(a=1.0, b=-1.0)  # e^2 - e
PHI3 = QuadraticCost(a=1.0, b=1.0)   # e^2 + e


def producer1(**overrides):
    base = dict(name="F1", beta_f=20.0, beta_d=10.0, p=0.5, pi=0.6, h_min=-3.0, cost=PHI1)
    base.update(overrides)
    return ProducerSpec(**base)


def producer2():
    return ProducerSpec(name="F2", beta_f=21.0, beta_d=7.0, p=0.4, pi=0.7, h_min=-2.0, cost=PHI2)


def producer3():
    return ProducerSpec(name="F3", beta_f=15.0, beta_d=5.0, p=0.5, pi=0.8, h_min=-1.0, cost=PHI3)


# ---------------------------------------------------------------------------
# Scalar formulas
# ---------------------------------------------------------------------------


def test_output():
    assert output(20.0, 10.0) == 200.0
    assert output(7.0, 0.0) == 0.0
    assert output(5.0, 2.0) == 10.0


def test_producer_payoff():
    assert producer_payoff(100.0, PHI1, 10.0, 0.0) == 0.0
    assert producer_payoff(0.0, PHI1, 0.0, 0.0) == 0.0
    assert producer_payoff(12.0, PHI2, 4.0, 0.0) == 0.0
    assert producer_payoff(10.0, PHI1, 2.0, 3.0) == 3.0


def test_intermediary_payoff():
    assert intermediary_payoff(1.8, 0.4, []) == 1.8
    assert intermediary_payoff(0.0, 1.0, [5.0, 5.0]) == 0.0
    assert intermediary_payoff(2.0, 0.4, [10.0]) == pytest.approx(8.0)


def test_first_best_efforts():
    assert first_best_effort(20.0, PHI1).effort == pytest.approx(10.0, abs=1e-12)
    assert first_best_effort(21.0, PHI2).effort == pytest.approx(11.0, abs=1e-12)
    assert first_best_effort(15.0, PHI3).effort == pytest.approx(7.0, abs=1e-12)


def test_first_best_requires_beta_above_marginal_cost_at_zero():
    with pytest.raises(NoPositiveEffort):
        first_best_effort(1.0, PHI3)  # phi'(0) = 1
    with pytest.raises(NoPositiveEffort):
        first_best_effort(0.5, QuadraticCost(a=1.0, b=2.0))


def test_first_best_bisection_for_generic_cost():
    class Quartic:
        def phi(self, e):
            return e**4

        def phi_prime(self, e):
            return 4 * e**3

    sol = first_best_effort(32.0, Quartic())
    assert sol.method == "bisection"
    assert sol.effort == pytest.approx(2.0, abs=1e-6)


def test_bonus_quadratic_families():
    # phi1 with ratio 1/2 collapses to (3/4) e^2
    for e in [0.5, 1.0, 2.0, 2.86, 7.0]:
        assert bonus(PHI1, 0.5, e) == pytest.approx(0.75 * e * e, abs=1e-12)
    assert bonus(PHI1, 0.5, 2.86) == pytest.approx(6.13, abs=0.01)
    # phi2 with ratio 1/3 collapses to (8/9) e^2 - (2/3) e
    for e in [0.8, 1.5, 2.65, 4.0]:
        expected = (8.0 / 9.0) * e * e - (2.0 / 3.0) * e
        assert bonus(PHI2, 1.0 / 3.0, e) == pytest.approx(expected, abs=1e-12)
    assert bonus(PHI1, 0.5, 0.0) == 0.0
    assert bonus(PHI3, 0.25, 0.0) == 0.0


def test_bonus_prime_quadratic_families():
    for e in [0.3, 1.0, 3.0, 9.0]:
        assert bonus_prime(PHI1, 0.5, e) == pytest.approx(1.5 * e, abs=1e-12)
        expected = (16.0 / 9.0) * e + 2.0 / 3.0
        assert bonus_prime(PHI3, 1.0 / 3.0, e) == pytest.approx(expected, abs=1e-12)


def test_bonus_prime_matches_central_difference():
    f = lambda e: bonus(PHI1, 0.5, e)
    assert abs(bonus_prime(PHI1, 0.5, 3.0) - central_difference(f, 3.0, h=1e-5)) <= 1e-6


# ---------------------------------------------------------------------------
# Screening solvers
# ---------------------------------------------------------------------------


def test_asym_efforts_worked_example():
    assert solve_asym_effort(producer1()).effort == pytest.approx(2.857, abs=0.005)
    assert solve_asym_effort(producer2()).effort == pytest.approx(2.651, abs=0.005)
    assert solve_asym_effort(producer3()).effort == pytest.approx(0.882, abs=0.005)


def test_asym_effort_approaches_first_best_as_types_merge():
    prod = producer1(beta_d=20.0 - 1e-6)
    e4 = solve_asym_effort(prod).effort
    e_d = first_best_effort(prod.beta_d, prod.cost).effort
    assert abs(e4 - e_d) < 1e-4


def test_limited_efforts_worked_example(example1):
    mu = example1.intermediary.mu
    assert solve_limited_effort(producer1(), mu).effort == pytest.approx(2.062, abs=0.005)
    # 5 = (2e + 1) + (1 + 4 * 0.6) * ((16/9) e + 2/3)  =>  e = (26/15) / (362/45)
    assert solve_limited_effort(producer3(), mu).effort == pytest.approx(39.0 / 181.0, abs=1e-12)
    assert solve_limited_effort(producer3(), mu).effort == pytest.approx(0.215, abs=0.005)


def test_limited_equals_asym_when_mu_one():
    for prod in [producer1(), producer2(), producer3()]:
        assert solve_limited_effort(prod, 1.0).effort == solve_asym_effort(prod).effort


def test_limited_equals_asym_when_pi_zero():
    prod = producer1(pi=0.0)
    assert solve_limited_effort(prod, 0.4).effort == solve_asym_effort(prod).effort


def test_closed_form_residuals_are_tiny():
    for prod in [producer1(), producer2(), producer3()]:
        for sol in (solve_asym_effort(prod), solve_limited_effort(prod, 0.4)):
            assert sol.method == "closed_form"
            assert not sol.shutdown
            assert abs(sol.residual) <= 1e-9


def test_closed_form_and_bisection_agree():
    rng = random.Random(20240817)
    tol_scale = 1e-8
    for _ in range(1000):
        prod = random_producer(rng)
        closed = solve_asym_effort(prod, method="closed_form")
        numeric = solve_asym_effort(prod, method="bisection")
        assert abs(closed.effort - numeric.effort) <= tol_scale
        assert abs(numeric.residual) <= solver_tolerance() * prod.beta_d


def test_bisection_respects_env_tolerance(monkeypatch):
    monkeypatch.setenv("CONTRACT_FORGE_TOL", "1e-4")
    assert solver_tolerance() == 1e-4
    sol = solve_asym_effort(producer1(), method="bisection")
    assert abs(sol.residual) <= 1e-4 * 10.0
    monkeypatch.delenv("CONTRACT_FORGE_TOL")
    assert solver_tolerance() == 1e-10
    assert solver_tolerance(2e-9) == 2e-9


def test_shutdown_when_no_interior_root():
    # marginal cost at zero effort (b = 4) plus the mimicry correction
    # already exceeds beta_d = 5 for p = 0.9
    prod = ProducerSpec(
        name="S", beta_f=50.0, beta_d=5.0, p=0.9, pi=0.0, h_min=0.0,
        cost=QuadraticCost(a=1.0, b=4.0),
    )
    for method in ("closed_form", "bisection"):
        sol = solve_asym_effort(prod, method=method)
        assert sol.shutdown
        assert sol.effort == 0.0
        assert sol.residual >= 0.0


def test_ordering_chain_on_random_specs():
    rng = random.Random(7)
    for _ in range(300):
        prod = random_producer(rng)
        mu = rng.uniform(0.0, 0.999)
        e_hat = solve_limited_effort(prod, mu).effort
        e_bar = solve_asym_effort(prod).effort
        e_d = first_best_effort(prod.beta_d, prod.cost).effort
        e_f = first_best_effort(prod.beta_f, prod.cost).effort
        assert 0.0 <= e_hat <= e_bar + 1e-12
        assert e_bar <= e_d + 1e-12
        assert e_d < e_f


def test_limited_effort_monotone_in_pi_and_mu():
    base = producer1()
    efforts = [
        solve_limited_effort(producer1(pi=pi), 0.4).effort
        for pi in [0.0, 0.2, 0.4, 0.6, 0.8, 0.95]
    ]
    assert all(e2 <= e1 + 1e-12 for e1, e2 in zip(efforts, efforts[1:]))
    efforts = [solve_limited_effort(base, mu).effort for mu in [0.0, 0.25, 0.5, 0.75, 1.0]]
    assert all(e2 >= e1 - 1e-12 for e1, e2 in zip(efforts, efforts[1:]))


@given(
    p=st.floats(0.05, 0.95),
    pi=st.floats(0.0, 0.95),
    mu=st.floats(0.0, 1.0),
)
@settings(max_examples=200)
def test_limited_multiplier_dominates_asym(p, pi, mu):
    assert limited_multiplier(p, pi, mu) >= p / (1.0 - p) - 1e-12


def test_expected_producer_payoff():
    prod = producer1()
    assert expected_producer_payoff(prod, 2.857) == pytest.approx(0.06, abs=0.01)
    assert expected_producer_payoff(prod, 0.0) == prod.h_min
    rich = producer1(h_min=0.0)
    for e4 in [0.5, 1.0, 2.0]:
        assert expected_producer_payoff(rich, e4) >= 0.0
