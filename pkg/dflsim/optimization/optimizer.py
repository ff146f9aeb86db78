import math

import numpy as np
from pydantic import BaseModel

from dflsim.errors import CapacityExceeded
from dflsim.matching import exchange
from dflsim.matching.allocation import allocate_resources
from dflsim.matching.association import associate_devices
from dflsim.matching.preferences import build_rb_preferences, build_sbs_preferences
from dflsim.models import CostConfig, OptimizerConfig, Scheme
from dflsim.network.cost import network_cost
from dflsim.network.topology import Assignment, NetworkState
from dflsim.runtime.events import on_event
from dflsim.seeding import Stream, generator


class CostTrace(BaseModel):
    # network cost after every iteration (one allocation game plus one association game)
    costs: list[float] = []
    converged: bool = False
    iterations_used: int = 0

    @property
    def final_cost(self) -> float:
        return self.costs[-1]


def scheme_generator(state: NetworkState, scheme: Scheme) -> np.random.Generator:
    # key 0 is reserved for the initial association shared by every scheme
    return generator(state.config.seed, Stream.OPTIMIZER, 1 + list(Scheme).index(scheme))


def random_association(state: NetworkState, quota: int, rng: np.random.Generator) -> dict[int, int]:
    """
    Every device, in random order, picks a uniform SBS; when that SBS is full it falls back
    to the nearest SBS (highest gain) with room. Devices beyond the total capacity stay out.
    """
    load = np.zeros(state.n_sbs, dtype=np.int64)
    assoc: dict[int, int] = {}
    for device in rng.permutation(state.n_devices):
        choice = int(rng.integers(state.n_sbs))
        if load[choice] >= quota:
            by_gain = np.argsort(-state.device_gains[device], kind="stable")
            room = [int(s) for s in by_gain if load[s] < quota]
            if not room:
                continue
            choice = room[0]
        assoc[int(device)] = choice
        load[choice] += 1
    return dict(sorted(assoc.items()))


def initial_association(state: NetworkState, quota: int) -> dict[int, int]:
    return random_association(state, quota, generator(state.config.seed, Stream.OPTIMIZER, 0))


def random_allocation(devices: list[int], n_rbs: int, rng: np.random.Generator) -> dict[int, int]:
    """
    Uniformly random feasible allocation: min(len(devices), n_rbs) random devices get
    distinct random resource blocks.
    """
    chosen = rng.permutation(np.array(sorted(devices), dtype=np.int64))[: min(len(devices), n_rbs)]
    rbs = rng.permutation(n_rbs)[: len(chosen)]
    return {int(d): int(r) for d, r in sorted(zip(chosen, rbs, strict=True))}


def check_capacity(state: NetworkState, cfg: OptimizerConfig) -> int:
    quota = cfg.resolve_quota(state.n_devices, state.n_sbs)
    if cfg.strict and quota * state.n_sbs < state.n_devices:
        raise CapacityExceeded(state.n_devices, state.n_sbs, quota)
    return quota


def has_converged(previous: float | None, current: float, rel_tolerance: float) -> bool:
    if previous is None:
        return False
    return abs(previous - current) < rel_tolerance * max(abs(previous), math.ulp(1.0))


def allocation_step(
    state: NetworkState,
    assoc: dict[int, int],
    alloc: dict[int, int] | None,
    cost_cfg: CostConfig | None,
) -> dict[int, int]:
    prefs = build_rb_preferences(state, assoc, cost_cfg)
    if not prefs.devices:
        return {}
    return allocate_resources(prefs, state.n_rbs, initial=alloc).assignment


def optimize(
    state: NetworkState,
    cfg: OptimizerConfig | None = None,
    cost_cfg: CostConfig | None = None,
    initial: Assignment | None = None,
) -> tuple[Assignment, CostTrace]:
    """
    Alternate the one-to-one resource allocation game (association fixed) and the
    one-to-many association game (allocation fixed) until the cost settles.

    Each game is warm-started from the current map, so neither half-step can raise the
    cost and the trace is non-increasing. Stops when an iteration leaves both maps
    exchange-stable, when the relative cost change drops below rel_tolerance, or after
    max_iterations. Non-proposed schemes are delegated to run_baseline.
    """
    cfg = cfg or OptimizerConfig()
    if cfg.scheme != Scheme.PROPOSED:
        from dflsim.optimization.baselines import run_baseline

        return run_baseline(state, cfg, cfg.scheme, cost_cfg)

    quota = check_capacity(state, cfg)
    assoc = dict(initial.assoc) if initial is not None else initial_association(state, quota)
    alloc = dict(initial.alloc) if initial is not None else None

    trace = CostTrace()
    previous: float | None = None
    assignment = Assignment(assoc=assoc, alloc=alloc or {})

    for iteration in range(1, cfg.max_iterations + 1):
        alloc = allocation_step(state, assoc, alloc, cost_cfg)

        outcome = associate_devices(build_sbs_preferences(state, alloc, cost_cfg), quota, initial=assoc)
        assoc_changed = outcome.assignment != assoc
        assoc = outcome.assignment

        assignment = Assignment(assoc=assoc, alloc=alloc)
        cost = network_cost(state, assignment, cost_cfg, quota)
        trace.costs.append(cost)
        trace.iterations_used = iteration

        on_event(
            "optimizer_iteration",
            {"seed": state.config.seed, "scheme": cfg.scheme.value, "iteration": iteration, "cost": cost},
        )

        stable = not assoc_changed and _allocation_is_stable(state, assignment, cost_cfg)
        if stable or has_converged(previous, cost, cfg.rel_tolerance):
            trace.converged = True
            break

        previous = cost

    return assignment, trace


def _allocation_is_stable(state: NetworkState, assignment: Assignment, cost_cfg: CostConfig | None) -> bool:
    prefs = build_rb_preferences(state, assignment.assoc, cost_cfg)
    if not prefs.devices:
        return True
    match = exchange.match_from_map(prefs, assignment.alloc)
    return exchange.first_move(prefs, match, capacity=1) is None


__all__ = [
    "CostTrace",
    "optimize",
    "random_association",
    "random_allocation",
    "initial_association",
]
