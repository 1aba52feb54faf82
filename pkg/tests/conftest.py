import numpy as np
import pytest

from evsched import Scenario, occupancy_from_windows


def make_scenario(
    windows,
    load,
    prices,
    *,
    horizon=None,
    capacity=300.0,
    socket=7.0,
    waste=0.0,
    step_hours=1.0,
    scenario_id="test",
):
    """Small-scenario shorthand used across the suite."""
    prices = np.atleast_1d(np.asarray(prices, dtype=float))
    T = horizon if horizon is not None else prices.size
    return Scenario(
        horizon_steps=T,
        step_hours=step_hours,
        occupancy=occupancy_from_windows(T, windows),
        load=load,
        capacity=capacity,
        socket_limit=socket,
        waste=waste,
        prices=prices,
        scenario_id=scenario_id,
    )


@pytest.fixture
def two_step_vehicle():
    """The hand instance: T=2, prices [2, 1], waste 0.01, one vehicle
    present both steps with demand 5, socket 7, capacity 300."""
    return make_scenario([(1, 2)], [5.0], [2.0, 1.0], waste=0.01)
