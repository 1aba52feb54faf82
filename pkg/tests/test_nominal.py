"""Nominal optimizer tests: hand instances, the min-cost-flow oracle, and
dominance over FCFS."""

import numpy as np
import pytest

from evsched import (
    InfeasibleScenario,
    ViolationKind,
    check_feasibility,
    evaluate_cost,
    fcfs_with_report,
    optimize_nominal,
    validate_schedule,
)
from evsched.nominal import scheduling_network
from evsched.solver import FlowStatus, solve_min_cost_flow
from evsched.synth import random_scenario

from conftest import make_scenario


class TestFeasibilityCheck:
    def test_window_capacity_sufficient(self):
        sc = make_scenario([(1, 2)], [10.0], [1.0, 1.0], socket=7.0)
        report = check_feasibility(sc)
        assert report.feasible
        assert report.per_vehicle_slack[0] == pytest.approx(4.0)

    def test_window_capacity_insufficient(self):
        sc = make_scenario([(1, 2)], [15.0], [1.0, 1.0], socket=7.0)
        report = check_feasibility(sc)
        assert not report.feasible
        assert report.per_vehicle_slack[0] == pytest.approx(-1.0)

    def test_aggregate_capacity_binds(self):
        # two vehicles share the single step: per-vehicle fine, total 10 > C=8
        sc = make_scenario([(1, 1), (1, 1)], [5.0, 5.0], [1.0],
                           socket=7.0, capacity=8.0)
        report = check_feasibility(sc)
        assert (report.per_vehicle_slack >= 0).all()
        assert report.max_flow == pytest.approx(8.0)
        assert report.total_load == pytest.approx(10.0)
        assert not report.feasible

    def test_empty_scenario_feasible(self):
        sc = make_scenario([], [], [1.0, 1.0])
        assert check_feasibility(sc).feasible


class TestHandInstances:
    def test_two_step_instance(self, two_step_vehicle):
        result = optimize_nominal(two_step_vehicle)
        # all power in the cheap second step
        assert result.schedule.allocation[:, 0] == pytest.approx([0.0, 5.0], abs=1e-9)
        assert result.cost.total_cost == pytest.approx(5.05, abs=1e-9)
        assert result.lp_solution.objective_value == pytest.approx(
            result.cost.total_cost, abs=1e-9
        )

    def test_infeasible_scenario_raises(self):
        sc = make_scenario([(1, 2)], [15.0], [1.0, 1.0], socket=7.0)
        with pytest.raises(InfeasibleScenario) as err:
            optimize_nominal(sc)
        assert not err.value.report.feasible

    def test_empty_scenario(self):
        sc = make_scenario([], [], [1.0, 1.0])
        result = optimize_nominal(sc)
        assert result.cost.total_cost == 0.0
        assert result.schedule.allocation.shape == (2, 0)

    def test_zero_demand_vehicle(self):
        sc = make_scenario([(1, 2), None], [4.0, 0.0], [0.5, 0.2])
        result = optimize_nominal(sc)
        assert result.schedule.allocation[:, 1] == pytest.approx([0.0, 0.0])
        assert result.cost.total_cost == pytest.approx(0.2 * 4.0, abs=1e-9)


class TestProperties:
    def test_flat_price_identity(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            p = float(rng.uniform(0.05, 0.5))
            g = float(rng.uniform(0.0, 0.05))
            sc = random_scenario(rng, horizon_steps=int(rng.integers(2, 8)),
                                 max_vehicles=5, waste=g,
                                 price_low=p, price_high=p)
            result = optimize_nominal(sc)
            expected = p * (1.0 + g) * sc.step_hours * sc.load.sum()
            assert result.cost.total_cost == pytest.approx(expected, rel=1e-8)

    def test_demand_tight_at_positive_prices(self):
        rng = np.random.default_rng(12)
        for _ in range(20):
            sc = random_scenario(rng, horizon_steps=6, max_vehicles=4)
            result = optimize_nominal(sc)
            delivered = result.schedule.allocation.sum(axis=0)
            assert delivered == pytest.approx(sc.load, rel=1e-6, abs=1e-6)

    def test_matches_flow_oracle(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            sc = random_scenario(
                rng,
                horizon_steps=int(rng.integers(2, 7)),
                max_vehicles=4,
                capacity=float(rng.uniform(8.0, 25.0)),
            )
            result = optimize_nominal(sc)
            flow = solve_min_cost_flow(scheduling_network(sc), float(sc.load.sum()))
            assert flow.status is FlowStatus.OPTIMAL
            assert result.cost.total_cost == pytest.approx(
                flow.cost, rel=1e-6, abs=1e-9
            )

    def test_dominates_fcfs(self):
        rng = np.random.default_rng(14)
        checked = 0
        for _ in range(60):
            sc = random_scenario(rng, horizon_steps=8, max_vehicles=6)
            fcfs = fcfs_with_report(sc)
            if (fcfs.shortfall > 1e-9).any():
                continue
            fcfs_cost = evaluate_cost(fcfs.schedule, sc).total_cost
            opt_cost = optimize_nominal(sc).cost.total_cost
            assert opt_cost <= fcfs_cost + 1e-9
            checked += 1
        assert checked >= 40

    def test_schedule_validates(self):
        rng = np.random.default_rng(15)
        for _ in range(20):
            sc = random_scenario(rng, horizon_steps=6, max_vehicles=5)
            result = optimize_nominal(sc)
            assert validate_schedule(result.schedule, sc).feasible

    def test_permutation_leaves_cost_unchanged(self):
        rng = np.random.default_rng(16)
        sc = random_scenario(rng, horizon_steps=6, num_vehicles=5)
        base = optimize_nominal(sc).cost.total_cost
        perm = rng.permutation(5)
        permuted = make_scenario(
            [sc.window(i) for i in perm],
            sc.load[perm],
            sc.prices,
            capacity=sc.capacity[0],
            socket=sc.socket_limit[0],
            waste=sc.waste[0],
        )
        assert optimize_nominal(permuted).cost.total_cost == pytest.approx(
            base, abs=1e-9, rel=1e-9
        )

    def test_negative_prices_stay_bounded(self):
        # negative-price steps attract over-delivery, capped by the socket
        sc = make_scenario([(1, 2)], [3.0], [-0.5, 1.0], socket=7.0)
        result = optimize_nominal(sc)
        report = validate_schedule(result.schedule, sc)
        assert not report.of_kind(ViolationKind.SOCKET_EXCEEDED)
        assert result.schedule.allocation[0, 0] == pytest.approx(7.0, abs=1e-9)
        assert result.cost.total_cost == pytest.approx(-3.5, abs=1e-9)
