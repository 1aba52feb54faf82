"""Robust model tests: ball-radius behavior, worst-case load substitution."""

import numpy as np
import pytest

from evsched import (
    InfeasibleScenario,
    LoadInterval,
    PriceBall,
    ShapeMismatch,
    check_feasibility,
    optimize_nominal,
    optimize_robust_both,
    optimize_robust_price,
    robustify_load,
    validate_schedule,
)
from evsched.model import Method
from evsched.synth import random_scenario

from conftest import make_scenario


def spreading_scenario():
    """T=2, flat prices, one vehicle with demand 6 present both steps."""
    return make_scenario([(1, 2)], [6.0], [1.0, 1.0], socket=7.0)


class TestPriceBall:
    def test_radius_zero_matches_nominal(self):
        rng = np.random.default_rng(21)
        for _ in range(10):
            sc = random_scenario(rng, horizon_steps=5, max_vehicles=4)
            nominal = optimize_nominal(sc).cost.total_cost
            robust = optimize_robust_price(sc, PriceBall.around(sc, 0.0))
            assert robust.objective == pytest.approx(nominal, rel=1e-6)
            assert robust.converged

    def test_spreading_instance(self):
        sc = spreading_scenario()
        result = optimize_robust_price(sc, PriceBall.around(sc, 1.0))
        assert result.per_step_totals == pytest.approx([3.0, 3.0], abs=1e-4)
        assert result.objective == pytest.approx(6.0 + 3.0 * np.sqrt(2.0), rel=1e-6)

    def test_huge_radius_dominated_by_norm(self):
        sc = spreading_scenario()
        result = optimize_robust_price(sc, PriceBall.around(sc, 1e6))
        assert result.per_step_totals == pytest.approx([3.0, 3.0], abs=1e-3)
        assert result.objective == pytest.approx(
            6.0 + 1e6 * 3.0 * np.sqrt(2.0), rel=1e-9
        )

    def test_objective_nondecreasing_in_radius(self):
        rng = np.random.default_rng(22)
        for _ in range(8):
            sc = random_scenario(rng, horizon_steps=5, max_vehicles=4)
            values = [
                optimize_robust_price(sc, PriceBall.around(sc, r)).objective
                for r in (0.0, 0.1, 1.0, 10.0)
            ]
            assert all(a <= b + 1e-9 for a, b in zip(values, values[1:]))

    def test_schedule_feasible_for_nominal_constraints(self):
        rng = np.random.default_rng(23)
        for _ in range(10):
            sc = random_scenario(rng, horizon_steps=5, max_vehicles=4)
            result = optimize_robust_price(sc, PriceBall.around(sc, 0.5))
            assert validate_schedule(result.schedule, sc).feasible

    def test_ball_shape_checked(self):
        sc = spreading_scenario()
        with pytest.raises(ShapeMismatch):
            optimize_robust_price(sc, PriceBall(center=np.ones(3), radius=1.0))

    def test_negative_radius_rejected(self):
        with pytest.raises(ValueError):
            PriceBall(center=np.ones(2), radius=-0.1)

    def test_infeasible_scenario_raises(self):
        sc = make_scenario([(1, 1)], [15.0], [1.0], socket=7.0)
        with pytest.raises(InfeasibleScenario):
            optimize_robust_price(sc, PriceBall.around(sc, 1.0))


class TestLoadInterval:
    def test_degenerate_interval_is_identity(self):
        sc = spreading_scenario()
        out = robustify_load(sc, LoadInterval(sc.load, sc.load))
        assert np.array_equal(out.load, sc.load)
        assert np.array_equal(out.occupancy, sc.occupancy)

    def test_upper_substituted(self):
        sc = make_scenario([(1, 2)], [5.0], [1.0, 1.0])
        out = robustify_load(sc, LoadInterval([4.0], [8.0]))
        assert out.load == pytest.approx([8.0])
        assert np.array_equal(out.prices, sc.prices)

    def test_infeasible_worst_case_surfaces_in_check(self):
        sc = make_scenario([(1, 2)], [5.0], [1.0, 1.0], socket=7.0)
        out = robustify_load(sc, LoadInterval([5.0], [20.0]))
        assert not check_feasibility(out).feasible

    def test_interval_validation(self):
        with pytest.raises(ValueError):
            LoadInterval([2.0], [1.0])
        with pytest.raises(ValueError):
            LoadInterval([-1.0], [1.0])
        with pytest.raises(ShapeMismatch):
            LoadInterval([1.0, 2.0], [3.0])

    def test_shape_mismatch(self):
        sc = spreading_scenario()
        with pytest.raises(ShapeMismatch):
            robustify_load(sc, LoadInterval([1.0, 1.0], [2.0, 2.0]))


class TestBoth:
    def test_double_degenerate_equals_nominal(self):
        rng = np.random.default_rng(24)
        sc = random_scenario(rng, horizon_steps=5, max_vehicles=4)
        nominal = optimize_nominal(sc).cost.total_cost
        result = optimize_robust_both(
            sc, PriceBall.around(sc, 0.0), LoadInterval(sc.load, sc.load)
        )
        assert result.objective == pytest.approx(nominal, rel=1e-6)
        assert result.schedule.method is Method.ROBUST_LOAD

    def test_larger_load_costs_strictly_more(self):
        rng = np.random.default_rng(25)
        for _ in range(8):
            sc = random_scenario(rng, horizon_steps=5, max_vehicles=3,
                                 load_fraction=0.5, capacity=300.0)
            nominal = optimize_nominal(sc).cost.total_cost
            result = optimize_robust_both(
                sc, PriceBall.around(sc, 0.0),
                LoadInterval(sc.load, sc.load * 1.3),
            )
            assert result.objective > nominal + 1e-9

    def test_matches_price_model_on_worked_instance(self):
        base = make_scenario([(1, 2)], [4.0], [1.0, 1.0], socket=7.0)
        result = optimize_robust_both(
            base, PriceBall.around(base, 1.0), LoadInterval([4.0], [6.0])
        )
        assert result.per_step_totals == pytest.approx([3.0, 3.0], abs=1e-4)
        assert result.objective == pytest.approx(6.0 + 3.0 * np.sqrt(2.0), rel=1e-6)

    def test_schedule_validates_against_worst_case(self):
        rng = np.random.default_rng(26)
        for _ in range(8):
            sc = random_scenario(rng, horizon_steps=5, max_vehicles=3,
                                 load_fraction=0.5, capacity=300.0)
            interval = LoadInterval(sc.load, sc.load * 1.2)
            result = optimize_robust_both(sc, PriceBall.around(sc, 0.3), interval)
            worst = robustify_load(sc, interval)
            assert validate_schedule(result.schedule, worst).feasible
