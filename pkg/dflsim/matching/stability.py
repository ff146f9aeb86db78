from enum import Enum

from dflsim.matching import exchange
from dflsim.matching.exchange import Move
from dflsim.matching.preferences import build_rb_preferences, build_sbs_preferences
from dflsim.models import CostConfig
from dflsim.network.topology import Assignment, NetworkState


class Mode(str, Enum):
    ALLOCATION = "allocation"
    ASSOCIATION = "association"


def find_blocking_improvement(
    state: NetworkState,
    assignment: Assignment,
    mode: Mode,
    cfg: CostConfig | None = None,
    quota: int | None = None,
) -> Move | None:
    """
    First cost-reducing relocation, exchange or displacement for one half of the
    assignment, holding the other half fixed. None certifies exchange stability.

    In allocation mode only associated devices take part; in association mode every
    device does and SBS capacity is `quota` (ceil(n_devices / n_sbs) when unset).
    """
    if mode == Mode.ALLOCATION:
        prefs = build_rb_preferences(state, assignment.assoc, cfg)
        return exchange.first_move(prefs, exchange.match_from_map(prefs, assignment.alloc), capacity=1)

    quota = quota if quota is not None else -(-state.n_devices // state.n_sbs)
    prefs = build_sbs_preferences(state, assignment.alloc, cfg)
    return exchange.first_move(prefs, exchange.match_from_map(prefs, assignment.assoc), capacity=quota)


__all__ = ["Mode", "find_blocking_improvement"]
