"""Nominal cost-minimization for one scenario.

The allocation problem is an LP over the variables Y[t][i] for the
(step, vehicle) pairs where the vehicle is present: minimize the summed
step costs subject to demand satisfaction, the station power budget and
per-socket limits.  `check_feasibility` certifies up front that a
schedule meeting all demand exists (per-vehicle window capacity plus an
aggregate max-flow test); infeasible scenarios are a hard error because
silently under-delivering would corrupt every cost comparison downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import FEAS_TOL, CostBreakdown, Method, Scenario, Schedule, evaluate_cost
from .solver import (
    Arc,
    FlowNetwork,
    LinearProgram,
    LpSolution,
    LpStatus,
    NumericalFailure,
    max_flow_value,
    solve_lp,
)


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    per_vehicle_slack: np.ndarray  # window socket capacity minus demand
    max_flow: float
    total_load: float

    def __str__(self):
        verdict = "feasible" if self.feasible else "INFEASIBLE"
        worst = float(self.per_vehicle_slack.min(initial=np.inf))
        return (
            f"{verdict}: max-flow {self.max_flow:.6g} vs total load "
            f"{self.total_load:.6g}, tightest per-vehicle slack {worst:.6g} kW"
        )


class InfeasibleScenario(RuntimeError):
    def __init__(self, scenario_id: str, report: FeasibilityReport):
        super().__init__(f"scenario {scenario_id!r} is infeasible ({report})")
        self.scenario_id = scenario_id
        self.report = report


@dataclass
class NominalResult:
    schedule: Schedule
    cost: CostBreakdown
    lp_solution: LpSolution


def variable_index(scenario: Scenario) -> list[tuple[int, int]]:
    """(step, vehicle) pairs that get an LP variable, vehicle-major.

    Only in-window entries are instantiated; everything else is fixed 0.
    """
    occ = scenario.occupancy
    return [
        (t, i)
        for i in range(scenario.num_vehicles)
        for t in np.flatnonzero(occ[:, i])
    ]


def scheduling_network(scenario: Scenario) -> FlowNetwork:
    """Equivalent transportation network.

    Node layout: 0 = source, 1..N = vehicles, N+1..N+T = steps, N+T+1 = sink.
    Source->vehicle arcs carry each demand, vehicle->step arcs the socket
    limit at the step's unit cost, step->sink arcs the station budget.
    """
    T, n = scenario.horizon_steps, scenario.num_vehicles
    delta = scenario.step_hours
    step_cost = scenario.prices * (1.0 + scenario.waste) * delta
    arcs: list[Arc] = []
    for i in range(n):
        arcs.append(Arc(0, 1 + i, float(scenario.load[i])))
    for i in range(n):
        for t in np.flatnonzero(scenario.occupancy[:, i]):
            arcs.append(
                Arc(
                    1 + i,
                    1 + n + int(t),
                    float(scenario.socket_limit[t]),
                    float(step_cost[t]),
                )
            )
    for t in range(T):
        arcs.append(Arc(1 + n + t, 1 + n + T, float(scenario.capacity[t])))
    return FlowNetwork(num_nodes=n + T + 2, source=0, sink=1 + n + T, arcs=tuple(arcs))


def check_feasibility(scenario: Scenario, tol: float = FEAS_TOL) -> FeasibilityReport:
    """Can all demand be met?  Per-vehicle window capacity check plus the
    aggregate max-flow test on the transportation network."""
    slack = scenario.occupancy.T.astype(float) @ scenario.socket_limit - scenario.load
    total = float(scenario.load.sum())
    flow = max_flow_value(scheduling_network(scenario))
    feasible = bool(flow >= total - tol and (slack >= -tol).all())
    return FeasibilityReport(
        feasible=feasible,
        per_vehicle_slack=slack,
        max_flow=flow,
        total_load=total,
    )


def scheduling_lp(
    scenario: Scenario, prices: np.ndarray | None = None
) -> tuple[LinearProgram, list[tuple[int, int]]]:
    """Build the allocation LP; `prices` overrides the scenario's own
    price vector (used by the robust price model)."""
    pi = scenario.prices if prices is None else np.asarray(prices, dtype=float)
    if pi.shape != (scenario.horizon_steps,):
        raise ValueError("prices must have length horizon_steps")
    var_index = variable_index(scenario)
    T, n = scenario.horizon_steps, scenario.num_vehicles
    nv = len(var_index)
    delta = scenario.step_hours
    unit_cost = pi * (1.0 + scenario.waste) * delta

    c = np.empty(nv)
    up = np.empty(nv)
    G = np.zeros((n + T, nv))
    for k, (t, i) in enumerate(var_index):
        c[k] = unit_cost[t]
        up[k] = scenario.socket_limit[t]
        G[i, k] = -1.0  # demand row, as -sum(Y) <= -L
        G[n + t, k] = 1.0  # capacity row
    h = np.concatenate([-scenario.load, scenario.capacity])
    lp = LinearProgram(c=c, G=G, h=h, lo=np.zeros(nv), up=up)
    return lp, var_index


def schedule_from_x(
    scenario: Scenario,
    x: np.ndarray,
    var_index: list[tuple[int, int]],
    method: Method,
) -> Schedule:
    y = np.zeros((scenario.horizon_steps, scenario.num_vehicles))
    for k, (t, i) in enumerate(var_index):
        y[t, i] = min(max(x[k], 0.0), scenario.socket_limit[t])
    return Schedule(allocation=y, method=method, scenario_id=scenario.scenario_id)


def optimize_nominal(scenario: Scenario) -> NominalResult:
    """Certified-optimal schedule for one scenario.

    Raises InfeasibleScenario when demand cannot be met, and propagates
    NumericalFailure from the solver if certification fails.
    """
    report = check_feasibility(scenario)
    if not report.feasible:
        raise InfeasibleScenario(scenario.scenario_id, report)
    if not variable_index(scenario):
        # nothing schedulable: no vehicle is ever present
        schedule = Schedule(
            allocation=np.zeros((scenario.horizon_steps, scenario.num_vehicles)),
            method=Method.NOMINAL,
            scenario_id=scenario.scenario_id,
        )
        empty = LpSolution(status=LpStatus.OPTIMAL, x=np.zeros(0), objective_value=0.0)
        return NominalResult(
            schedule=schedule, cost=evaluate_cost(schedule, scenario), lp_solution=empty
        )
    lp, var_index = scheduling_lp(scenario)
    sol = solve_lp(lp)
    if sol.status is not LpStatus.OPTIMAL:
        # check_feasibility passed, so this is a numerical problem
        raise NumericalFailure(
            f"scenario {scenario.scenario_id!r}: LP reported {sol.status.value} "
            "after the feasibility check passed"
        )
    schedule = schedule_from_x(scenario, sol.x, var_index, Method.NOMINAL)
    return NominalResult(
        schedule=schedule,
        cost=evaluate_cost(schedule, scenario),
        lp_solution=sol,
    )
