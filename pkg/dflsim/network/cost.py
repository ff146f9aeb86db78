import math
import typing as t

import numpy as np
import numpy.typing as npt

from dflsim.models import Aggregation, CostConfig
from dflsim.network.topology import Assignment, FloatArray, NetworkState, packet_error_rate


def device_cost(theta: npt.ArrayLike, sinr: npt.ArrayLike, m: float) -> FloatArray:
    """
    Cost of one upload: (1 + theta) * (1 - exp(-m / sinr)), in (0, 2).
    """
    return t.cast(FloatArray, (1.0 + np.asarray(theta, dtype=np.float64)) * packet_error_rate(sinr, m))


def unscheduled_cost(theta: npt.ArrayLike) -> FloatArray:
    """Worst case for a device without SBS or RB: its upload always fails (PER = 1)."""
    return t.cast(FloatArray, 1.0 + np.asarray(theta, dtype=np.float64))


def waterfall_threshold(state: NetworkState, cfg: CostConfig | None = None) -> float:
    if cfg is not None and cfg.waterfall_threshold is not None:
        return cfg.waterfall_threshold
    return state.waterfall_threshold


def device_costs(state: NetworkState, assignment: Assignment, cfg: CostConfig | None = None) -> FloatArray:
    """
    Per-device cost under the assignment, worst case for unscheduled devices.
    """
    m = waterfall_threshold(state, cfg)
    costs = unscheduled_cost(state.device_thetas).copy()

    scheduled = [d for d in range(state.n_devices) if assignment.is_scheduled(d)]
    if scheduled:
        sbs = [assignment.assoc[d] for d in scheduled]
        rbs = [assignment.alloc[d] for d in scheduled]
        sinr = state.link_sinr(scheduled, sbs, rbs)
        costs[scheduled] = device_cost(state.device_thetas[scheduled], sinr, m)

    return costs


def aggregate_costs(costs: FloatArray, aggregation: Aggregation) -> float:
    # fsum keeps the result independent of device order
    total = math.fsum(costs.tolist())
    return total if aggregation == Aggregation.SUM else total / len(costs)


def network_cost(
    state: NetworkState,
    assignment: Assignment,
    cfg: CostConfig | None = None,
    quota: int | None = None,
) -> float:
    """
    Network-level cost of an assignment, the mean (or sum) of the device costs.

    Raises InfeasibleAssignment if the assignment is not feasible (see Assignment.check).
    The SBS quota defaults to ceil(n_devices / n_sbs).
    """
    cfg = cfg or CostConfig()
    quota = quota if quota is not None else math.ceil(state.n_devices / state.n_sbs)
    assignment.check(state.n_devices, state.n_sbs, state.n_rbs, quota)
    return aggregate_costs(device_costs(state, assignment, cfg), cfg.aggregation)


__all__ = [
    "device_cost",
    "unscheduled_cost",
    "waterfall_threshold",
    "device_costs",
    "aggregate_costs",
    "network_cost",
]
