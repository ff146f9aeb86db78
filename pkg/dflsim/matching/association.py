import typing as t

from loguru import logger

from dflsim.errors import CapacityExceeded, EmptyInstance
from dflsim.matching import exchange
from dflsim.matching.outcome import MatchOutcome
from dflsim.matching.preferences import PreferenceProfile


def associate_devices(
    prefs: PreferenceProfile,
    quota: int,
    initial: t.Mapping[int, int] | None = None,
    strict: bool = False,
) -> MatchOutcome:
    """
    One-sided one-to-many matching of SBSs to devices, at most `quota` devices per SBS.

    Every device is associated when quota * n_sbs allows it; otherwise the cheapest devices
    are kept, or CapacityExceeded is raised in strict mode. Seeded greedily by ascending cost
    (or from `initial`), then improved by relocations and pairwise exchanges.
    """
    if quota < 1:
        raise ValueError(f"quota must be at least 1, got {quota}")
    if not prefs.devices or not prefs.n_agents:
        raise EmptyInstance(f"cannot associate {len(prefs.devices)} devices to {prefs.n_agents} SBSs")

    capacity = quota * prefs.n_agents
    if capacity < len(prefs.devices):
        if strict:
            raise CapacityExceeded(len(prefs.devices), prefs.n_agents, quota)
        logger.warning(f"only {capacity} of {len(prefs.devices)} devices can be associated with quota {quota}")

    if initial is not None:
        # devices missing from the warm start are placed greedily
        seed = exchange.fill(prefs, exchange.match_from_map(prefs, initial), quota)
    else:
        seed = exchange.greedy_seed(prefs, quota)
    match, trace = exchange.improve(prefs, seed, capacity=quota)

    logger.debug(f"association: {len(trace) - 1} moves, cost {trace[0]:.6f} -> {trace[-1]:.6f}")

    return MatchOutcome(
        assignment=exchange.match_to_map(prefs, match),
        total_cost=trace[-1],
        swap_iterations=len(trace) - 1,
        cost_trace=trace,
    )


__all__ = ["associate_devices"]
