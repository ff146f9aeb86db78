import dataclasses
import typing as t

import numpy as np
import numpy.typing as npt

from dflsim.models import CostConfig
from dflsim.network.cost import device_cost, unscheduled_cost, waterfall_threshold
from dflsim.network.topology import FloatArray, NetworkState


@dataclasses.dataclass(frozen=True)
class PreferenceProfile:
    """
    One-sided preferences of agents (resource blocks or SBSs) over devices.

    costs[d, a] is the cost of device d when matched with agent a; every agent ranks the
    candidate devices by ascending cost, ties broken by the lower device id.
    """

    # (n_devices, n_agents)
    costs: FloatArray
    # cost of a candidate device left unmatched, (n_devices,)
    unmatched_cost: FloatArray
    # devices taking part in the game, ascending ids
    devices: tuple[int, ...]
    # rankings[a] lists the candidate devices from most to least preferred
    rankings: tuple[tuple[int, ...], ...]

    @property
    def n_devices(self) -> int:
        return int(self.costs.shape[0])

    @property
    def n_agents(self) -> int:
        return int(self.costs.shape[1])

    @classmethod
    def from_costs(
        cls,
        costs: npt.ArrayLike,
        unmatched_cost: npt.ArrayLike | None = None,
        devices: t.Iterable[int] | None = None,
    ) -> "PreferenceProfile":
        """
        Build a profile from a (devices x agents) cost table.

        Without an explicit unmatched cost every device is charged one more than its worst
        match, so leaving it out is never preferred to matching it.
        """
        table = np.array(costs, dtype=np.float64, ndmin=2)
        if unmatched_cost is None:
            penalty = table.max(axis=1) + 1.0 if table.shape[1] else np.ones(table.shape[0])
        else:
            penalty = np.asarray(unmatched_cost, dtype=np.float64)

        candidates = tuple(sorted(devices)) if devices is not None else tuple(range(table.shape[0]))
        index = np.array(candidates, dtype=np.int64)

        rankings = []
        for agent in range(table.shape[1]):
            # stable sort keeps lower ids first on ties
            order = np.argsort(table[index, agent], kind="stable")
            rankings.append(tuple(int(index[i]) for i in order))

        table.setflags(write=False)
        penalty.setflags(write=False)
        return cls(costs=table, unmatched_cost=penalty, devices=candidates, rankings=tuple(rankings))

    def rank_of(self, agent: int, device: int) -> int:
        return self.rankings[agent].index(device)


def build_rb_preferences(
    state: NetworkState,
    assoc: dict[int, int],
    cfg: CostConfig | None = None,
) -> PreferenceProfile:
    """
    Resource block preferences over the associated devices, with the association fixed:
    the cost of (d, r) uses the SINR of d at its SBS when interfered by the incumbent of r.
    """
    m = waterfall_threshold(state, cfg)
    penalty = unscheduled_cost(state.device_thetas)
    costs = np.repeat(penalty[:, None], state.n_rbs, axis=1)

    devices = sorted(assoc)
    if devices:
        index = np.array(devices)
        sbs = np.array([assoc[d] for d in devices])
        sinr = state.link_sinr(index[:, None], sbs[:, None], np.arange(state.n_rbs)[None, :])
        costs[index] = device_cost(state.device_thetas[index][:, None], sinr, m)

    return PreferenceProfile.from_costs(costs, penalty, devices)


def build_sbs_preferences(
    state: NetworkState,
    alloc: dict[int, int],
    cfg: CostConfig | None = None,
) -> PreferenceProfile:
    """
    SBS preferences over all devices, with the resource block allocation fixed. A device
    without a resource block costs its worst case at every SBS.
    """
    m = waterfall_threshold(state, cfg)
    penalty = unscheduled_cost(state.device_thetas)
    costs = np.repeat(penalty[:, None], state.n_sbs, axis=1)

    if alloc:
        index = np.array(sorted(alloc))
        rbs = np.array([alloc[d] for d in index])
        sinr = state.link_sinr(index[:, None], np.arange(state.n_sbs)[None, :], rbs[:, None])
        costs[index] = device_cost(state.device_thetas[index][:, None], sinr, m)

    return PreferenceProfile.from_costs(costs, penalty, range(state.n_devices))


__all__ = ["PreferenceProfile", "build_rb_preferences", "build_sbs_preferences"]
