from dflsim.matching.association import associate_devices
from dflsim.matching.preferences import build_sbs_preferences
from dflsim.models import CostConfig, OptimizerConfig, Scheme
from dflsim.network.cost import network_cost
from dflsim.network.topology import Assignment, NetworkState
from dflsim.optimization.optimizer import (
    CostTrace,
    allocation_step,
    check_capacity,
    has_converged,
    initial_association,
    optimize,
    random_allocation,
    random_association,
    scheme_generator,
)
from dflsim.runtime.events import on_event


def run_baseline(
    state: NetworkState,
    cfg: OptimizerConfig,
    scheme: Scheme,
    cost_cfg: CostConfig | None = None,
) -> tuple[Assignment, CostTrace]:
    """
    Reference schemes sharing the proposed scheme's initial association and trace format.

    Every iteration first redraws the random half, then plays the matching half against it:

    - baseline1: random resource blocks, then matching association;
    - baseline2: random association, then matching resource allocation;
    - random: both halves random.
    """
    if scheme == Scheme.PROPOSED:
        return optimize(state, cfg.model_copy(update={"scheme": Scheme.PROPOSED}), cost_cfg)

    quota = check_capacity(state, cfg)
    rng = scheme_generator(state, scheme)
    assoc = initial_association(state, quota)
    alloc: dict[int, int] = {}

    trace = CostTrace()
    previous: float | None = None
    assignment = Assignment(assoc=assoc, alloc=alloc)

    for iteration in range(1, cfg.max_iterations + 1):
        if scheme == Scheme.BASELINE1:
            alloc = random_allocation(list(assoc), state.n_rbs, rng)
            prefs = build_sbs_preferences(state, alloc, cost_cfg)
            assoc = associate_devices(prefs, quota, initial=assoc).assignment
        elif scheme == Scheme.BASELINE2:
            assoc = random_association(state, quota, rng)
            alloc = allocation_step(state, assoc, None, cost_cfg)
        else:
            assoc = random_association(state, quota, rng)
            alloc = random_allocation(list(assoc), state.n_rbs, rng)

        assignment = Assignment(assoc=assoc, alloc=alloc)
        cost = network_cost(state, assignment, cost_cfg, quota)
        trace.costs.append(cost)
        trace.iterations_used = iteration

        on_event(
            "optimizer_iteration",
            {"seed": state.config.seed, "scheme": scheme.value, "iteration": iteration, "cost": cost},
        )

        if has_converged(previous, cost, cfg.rel_tolerance):
            trace.converged = True
            break

        previous = cost

    return assignment, trace


__all__ = ["run_baseline"]
