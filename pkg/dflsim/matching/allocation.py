import typing as t

from loguru import logger

from dflsim.errors import EmptyInstance
from dflsim.matching import exchange
from dflsim.matching.outcome import MatchOutcome
from dflsim.matching.preferences import PreferenceProfile


def allocate_resources(
    prefs: PreferenceProfile,
    n_rbs: int,
    devices: t.Iterable[int] | None = None,
    initial: t.Mapping[int, int] | None = None,
) -> MatchOutcome:
    """
    One-sided one-to-one matching of resource blocks to devices.

    Starts from the greedy ascending-cost seed (or from `initial`, when warm-starting) and
    applies cost-reducing swaps until no blocking pair is left. Every RB serves at most one
    device and every device gets at most one RB.
    """
    if devices is not None:
        prefs = PreferenceProfile.from_costs(prefs.costs, prefs.unmatched_cost, devices)

    if not prefs.devices or n_rbs < 1:
        raise EmptyInstance(f"cannot allocate {n_rbs} resource blocks to {len(prefs.devices)} devices")
    if prefs.n_agents != n_rbs:
        raise ValueError(f"preference profile covers {prefs.n_agents} resource blocks, expected {n_rbs}")

    seed = exchange.match_from_map(prefs, initial) if initial is not None else exchange.greedy_seed(prefs, 1)
    match, trace = exchange.improve(prefs, seed, capacity=1)

    logger.debug(f"allocation: {len(trace) - 1} swaps, cost {trace[0]:.6f} -> {trace[-1]:.6f}")

    return MatchOutcome(
        assignment=exchange.match_to_map(prefs, match),
        total_cost=trace[-1],
        swap_iterations=len(trace) - 1,
        cost_trace=trace,
    )


__all__ = ["allocate_resources"]
