import json
import math

import numpy as np
import pytest

import rkbudget.budget as budget
from rkbudget.bounds import global_error_bound_noiseless, global_error_bound_noisy
from rkbudget.budget import (
    AnsatzDims,
    InfeasibleShotsError,
    argmin_order,
    budget_table,
    circuit_budget,
    cost_noiseless,
    cost_noisy,
    distinct_circuits,
    min_shots,
    min_steps_noiseless,
    min_steps_noisy,
    rows_to_csv,
    rows_to_json,
    s_factor,
    sigma_bound,
)
from rkbudget.tableaux import MethodProfile, min_stages


def prof_for(sc, p):
    return MethodProfile(order=p, stages=min_stages(p), a_max=sc.a_max, b_max=sc.b_max, error_const=sc.error_const)


# -- step counts and costs against the printed reference rows ----------------


@pytest.mark.parametrize("p,expected", [(1, 2.25e7), (4, 2.54e3), (6, 1.47e3)])
def test_min_steps_noiseless_anchors(classical, p, expected):
    assert min_steps_noiseless(classical.pb, prof_for(classical, p)) == pytest.approx(expected, rel=0.015)


@pytest.mark.parametrize("p,expected", [(1, 2.25e7), (4, 1.01e4)])
def test_cost_noiseless_anchors(classical, p, expected):
    assert cost_noiseless(classical.pb, prof_for(classical, p)) == pytest.approx(expected, rel=0.015)


def test_cost_ratio_anchor(classical):
    ratio = cost_noiseless(classical.pb, prof_for(classical, 1)) / cost_noiseless(classical.pb, prof_for(classical, 4))
    assert ratio == pytest.approx(2.22e3, rel=0.015)


@pytest.mark.parametrize("p,expected", [(1, 2.96e4), (2, 2.04e2)])
def test_min_steps_noisy_option_anchors(option_pricing, p, expected):
    assert min_steps_noisy(option_pricing.pb, prof_for(option_pricing, p)) == pytest.approx(expected, rel=0.015)


def test_min_steps_noisy_tuned_anchor(tuned):
    assert min_steps_noisy(tuned.pb, prof_for(tuned, 4)) == pytest.approx(5.41e3, rel=0.015)


@pytest.mark.parametrize("p,expected", [(1, 7.03e21), (2, 3.87e22)])
def test_min_shots_anchors(option_pricing, p, expected):
    prof = prof_for(option_pricing, p)
    n_steps = min_steps_noisy(option_pricing.pb, prof)
    assert min_shots(option_pricing.pb, prof, option_pricing.sigma, n_steps) == pytest.approx(expected, rel=0.015)


def test_min_shots_quadratic_in_sigma(option_pricing):
    prof = prof_for(option_pricing, 2)
    n_steps = min_steps_noisy(option_pricing.pb, prof)
    base = min_shots(option_pricing.pb, prof, option_pricing.sigma, n_steps)
    doubled = min_shots(option_pricing.pb, prof, 2.0 * option_pricing.sigma, n_steps)
    assert doubled == pytest.approx(4.0 * base, rel=1e-12)


def test_min_shots_infeasible_at_too_few_steps(option_pricing):
    # far below the minimal step count the truncation term alone exceeds the target
    prof = prof_for(option_pricing, 2)
    with pytest.raises(InfeasibleShotsError, match="truncation already exceeds"):
        min_shots(option_pricing.pb, prof, option_pricing.sigma, 10)


def test_noisy_chain_recovers_target_exactly(option_pricing, tuned):
    # plugging the minimal steps and shots back into the noisy bound returns
    # the target error: the shot formula inverts the bound exactly
    for sc in (option_pricing, tuned):
        for p in range(1, 11):
            prof = prof_for(sc, p)
            n_steps = min_steps_noisy(sc.pb, prof)
            n_shots = min_shots(sc.pb, prof, sc.sigma, n_steps)
            delta = sc.sigma / math.sqrt(n_shots)
            bound = global_error_bound_noisy(sc.pb, prof, n_steps, delta)
            assert bound == pytest.approx(sc.pb.target_error, rel=1e-9)


def test_noisy_to_noiseless_step_ratio(option_pricing):
    for p in range(1, 11):
        prof = prof_for(option_pricing, p)
        ratio = min_steps_noisy(option_pricing.pb, prof) / min_steps_noiseless(option_pricing.pb, prof)
        assert ratio == pytest.approx((2 * p + 1) ** (1.0 / p), rel=1e-12)


def test_cost_noisy_anchors(option_pricing, tuned):
    assert cost_noisy(option_pricing.pb, prof_for(option_pricing, 2), option_pricing.sigma) == pytest.approx(
        2 * 204 * 3.87e22, rel=0.02
    )
    assert cost_noisy(tuned.pb, prof_for(tuned, 4), tuned.sigma) == pytest.approx(4 * 5.41e3 * 1.98e26, rel=0.02)


def test_cost_noisy_single_stage_product(option_pricing):
    prof = prof_for(option_pricing, 1)
    n_steps = min_steps_noisy(option_pricing.pb, prof)
    n_shots = min_shots(option_pricing.pb, prof, option_pricing.sigma, n_steps)
    assert cost_noisy(option_pricing.pb, prof, option_pricing.sigma) == pytest.approx(n_steps * n_shots, rel=1e-12)


# -- circuit budgets ----------------------------------------------------------


def test_circuit_budget_option_anchor(option_pricing):
    prof = prof_for(option_pricing, 1)
    n_steps = min_steps_noisy(option_pricing.pb, prof)
    n_shots = min_shots(option_pricing.pb, prof, option_pricing.sigma, n_steps)
    n_circ = circuit_budget(n_steps, prof.stages, n_shots, option_pricing.dims)
    assert n_circ == pytest.approx(2.13e29, rel=0.015)


def test_circuit_budget_is_cost_times_ansatz_factor(option_pricing):
    dims = option_pricing.dims
    factor = dims.n_params * dims.n_strings * (dims.n_params * dims.n_strings + dims.n_pauli)
    for p in (1, 2, 5):
        prof = prof_for(option_pricing, p)
        n_steps = min_steps_noisy(option_pricing.pb, prof)
        n_shots = min_shots(option_pricing.pb, prof, option_pricing.sigma, n_steps)
        n_circ = circuit_budget(n_steps, prof.stages, n_shots, dims)
        assert n_circ == pytest.approx(cost_noisy(option_pricing.pb, prof, option_pricing.sigma) * factor, rel=1e-12)


def test_distinct_circuits_anchor(option_pricing):
    prof = prof_for(option_pricing, 2)
    n_steps = min_steps_noisy(option_pricing.pb, prof)
    assert distinct_circuits(n_steps, prof.stages, option_pricing.dims) == pytest.approx(4.19e5, rel=0.015)


# -- shot-noise scale and state sensitivity -----------------------------------


def test_sigma_bound_option_anchor(option_pricing):
    value = sigma_bound(option_pricing.dims, eta=0.05, cap=60.0, gamma=3.0)
    assert value == pytest.approx(3.4e8, rel=0.02)


def test_sigma_bound_trivial_case():
    dims = AnsatzDims(n_params=1, n_strings=1, n_pauli=1)
    assert sigma_bound(dims, eta=1.0 - 1e-12, cap=1.0, gamma=0.0) == pytest.approx(2.0, rel=1e-6)


def test_sigma_bound_linear_in_cap(option_pricing):
    one = sigma_bound(option_pricing.dims, eta=0.05, cap=60.0)
    two = sigma_bound(option_pricing.dims, eta=0.05, cap=120.0)
    assert two == pytest.approx(2.0 * one, rel=1e-14)


def test_sigma_bound_monotonicity():
    base = AnsatzDims(n_params=10, n_strings=2, n_pauli=8)
    ref = sigma_bound(base, eta=0.1)
    assert sigma_bound(AnsatzDims(11, 2, 8), eta=0.1) > ref
    assert sigma_bound(AnsatzDims(10, 3, 8), eta=0.1) > ref
    assert sigma_bound(AnsatzDims(10, 2, 9), eta=0.1) > ref
    assert sigma_bound(base, eta=0.05) > ref


def test_s_factor_single_parameter():
    assert s_factor([[0.5]], [3.0]) == pytest.approx(1.0, rel=1e-14)


def test_s_factor_single_nonzero_component():
    theta = np.zeros(5)
    theta[2] = -4.0
    assert s_factor(np.full((5, 1), 0.5), theta) == pytest.approx(1.0, rel=1e-14)


def test_s_factor_linear_in_coefficients():
    rng = np.random.default_rng(3)
    f = rng.uniform(0.1, 1.0, size=(6, 2))
    theta = rng.normal(size=6)
    assert s_factor(2.0 * f, theta) == pytest.approx(2.0 * s_factor(f, theta), rel=1e-12)


def test_s_factor_uniform_vector_scales_with_dimension():
    # with the Euclidean denominator a uniform vector yields sqrt(n)
    assert s_factor(np.full((4, 1), 0.5), np.ones(4)) == pytest.approx(2.0, rel=1e-14)


def test_s_factor_rejects_zero_vector():
    with pytest.raises(ValueError):
        s_factor([[0.5]], [0.0])


# -- table assembly ------------------------------------------------------------


def test_budget_table_classical_row(classical):
    rows = budget_table(classical.pb, error_const=classical.error_const)
    row = next(r for r in rows if r.order == 4)
    assert row.cost == pytest.approx(1.01e4, rel=0.015)
    assert row.n_steps == pytest.approx(2.54e3, rel=0.015)
    assert row.n_shots is None
    assert row.circuit_evals is None


def test_budget_table_option_row(option_pricing):
    rows = budget_table(
        option_pricing.pb,
        error_const=option_pricing.error_const,
        sigma=option_pricing.sigma,
        dims=option_pricing.dims,
    )
    row = next(r for r in rows if r.order == 3)
    assert row.circuit_evals == pytest.approx(1.75e28, rel=0.015)
    assert row.n_steps == pytest.approx(37.06, rel=0.015)


def test_budget_table_tuned_ratio(tuned):
    rows = budget_table(
        tuned.pb, error_const=tuned.error_const, a_max=tuned.a_max, b_max=tuned.b_max, sigma=tuned.sigma, dims=tuned.dims
    )
    row = next(r for r in rows if r.order == 10)
    assert row.ratio == pytest.approx(22.87, rel=0.015)


def test_budget_table_ratio_consistency(classical, option_pricing):
    for sc in (classical, option_pricing):
        rows = budget_table(
            sc.pb, error_const=sc.error_const, a_max=sc.a_max, b_max=sc.b_max, sigma=sc.sigma, dims=sc.dims
        )
        anchor = next(r for r in rows if r.order == 1)
        assert anchor.ratio == pytest.approx(1.0, rel=1e-12)
        for row in rows:
            assert row.ratio * row.cost == pytest.approx(anchor.cost, rel=1e-10)


def test_budget_table_flags_infeasible_rows(classical, monkeypatch):
    def fake_min_shots(pb, prof, sigma, n_steps):
        if prof.order == 2:
            raise InfeasibleShotsError("infeasible: truncation already exceeds target")
        return 1e6

    monkeypatch.setattr(budget, "min_shots", fake_min_shots)
    rows = budget_table(
        classical.pb, error_const=5.0, p_range=range(1, 4), sigma=1.0, dims=AnsatzDims(2, 1, 2)
    )
    assert [r.order for r in rows] == [1, 2, 3]
    flagged = rows[1]
    assert not flagged.feasible
    assert math.isnan(flagged.cost)
    assert rows[0].feasible and rows[2].feasible


def test_budget_table_rejects_bad_orders(classical):
    with pytest.raises(ValueError):
        budget_table(classical.pb, error_const=5.0, p_range=[0, 1])
    with pytest.raises(ValueError):
        budget_table(classical.pb, error_const=5.0, p_range=[11])


def test_argmin_order_scenarios(classical, option_pricing, tuned):
    expected = {"classical": 4, "option_pricing": 2, "tuned": 4}
    for sc in (classical, option_pricing, tuned):
        rows = budget_table(
            sc.pb, error_const=sc.error_const, a_max=sc.a_max, b_max=sc.b_max, sigma=sc.sigma, dims=sc.dims
        )
        assert argmin_order(rows) == expected[sc.name]


def test_argmin_order_tie_breaks_low():
    rows = [
        budget.BudgetRow(order=2, stages=2, n_steps=1.0, n_shots=None, cost=5.0, circuit_evals=None, circuits=None, ratio=1.0),
        budget.BudgetRow(order=1, stages=1, n_steps=1.0, n_shots=None, cost=5.0, circuit_evals=None, circuits=None, ratio=1.0),
    ]
    assert argmin_order(rows) == 1


def test_rows_to_csv_schema(classical):
    rows = budget_table(classical.pb, error_const=classical.error_const, p_range=[1, 2])
    text = rows_to_csv(rows)
    lines = text.strip().splitlines()
    assert lines[0] == "p,s,N_tau,N_r,cost,N_circ,circuits,ratio"
    cells = lines[1].split(",")
    assert cells[0] == "1"
    assert cells[3] == ""  # no shots in noiseless mode
    assert float(cells[4]) == pytest.approx(2.25e7, rel=0.015)
    # full-precision scientific notation: 16 digits after the point
    mantissa = cells[4].split("e")[0]
    assert len(mantissa.split(".")[1]) == 16


def test_rows_to_json_keys(option_pricing):
    rows = budget_table(
        option_pricing.pb,
        error_const=option_pricing.error_const,
        p_range=[1, 2],
        sigma=option_pricing.sigma,
        dims=option_pricing.dims,
    )
    records = json.loads(rows_to_json(rows))
    assert [r["p"] for r in records] == [1, 2]
    assert set(records[0]) == {"p", "s", "N_tau", "N_r", "cost", "N_circ", "circuits", "ratio"}
    assert records[1]["N_circ"] == pytest.approx(1.62e28, rel=0.015)


# -- self-consistency of the step formula (noiseless) -------------------------


@pytest.mark.parametrize("name", ["classical", "tuned"])
def test_noiseless_step_formula_self_consistency(request, name):
    # the closed form for the minimal step count is derived assuming the
    # per-step growth is small against the step count; where that premise
    # holds (these two parameter sets), plugging the count back into the
    # exact bound recovers the target within a few percent
    sc = request.getfixturevalue(name)
    for p in range(1, 11):
        prof = prof_for(sc, p)
        n_steps = min_steps_noiseless(sc.pb, prof)
        bound = global_error_bound_noiseless(sc.pb, prof, n_steps)
        assert 0.96 * sc.pb.target_error <= bound <= 1.04 * sc.pb.target_error


def test_ansatz_dims_validation():
    with pytest.raises(ValueError):
        AnsatzDims(n_params=0, n_strings=1, n_pauli=1)
    with pytest.raises(ValueError):
        AnsatzDims(n_params=1, n_strings=1, n_pauli=1, f_mag=0.0)
