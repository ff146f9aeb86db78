import numpy as np
import pytest

from dflsim.models import OptimizerConfig, Scheme, TopologyConfig
from dflsim.network.topology import generate_topology
from dflsim.optimization.baselines import run_baseline
from dflsim.optimization.optimizer import optimize


def test_singleton_has_no_degrees_of_freedom() -> None:
    state = generate_topology(TopologyConfig(n_devices=1, n_sbs=1, n_rbs=1, seed=5))
    _, proposed = optimize(state)
    for scheme in (Scheme.BASELINE1, Scheme.BASELINE2, Scheme.RANDOM):
        _, trace = run_baseline(state, OptimizerConfig(), scheme)
        assert trace.final_cost == proposed.final_cost


def test_optimize_delegates_to_baselines() -> None:
    state = generate_topology(TopologyConfig(n_devices=6, n_sbs=2, n_rbs=6, seed=2))
    cfg = OptimizerConfig(scheme=Scheme.BASELINE2)
    assert optimize(state, cfg)[1].costs == run_baseline(state, cfg, Scheme.BASELINE2)[1].costs


def test_baselines_are_feasible_and_deterministic() -> None:
    state = generate_topology(TopologyConfig(seed=7))
    for scheme in (Scheme.BASELINE1, Scheme.BASELINE2, Scheme.RANDOM):
        assignment, trace = run_baseline(state, OptimizerConfig(), scheme)
        assignment.check(54, 6, 54, quota=9)
        assert 1 <= trace.iterations_used <= 50
        assert run_baseline(state, OptimizerConfig(), scheme)[1].costs == trace.costs


def test_random_scheme_is_no_better_than_proposed() -> None:
    proposed, random = [], []
    for seed in range(5):
        state = generate_topology(TopologyConfig(seed=seed))
        proposed.append(optimize(state)[1].final_cost)
        random.append(run_baseline(state, OptimizerConfig(), Scheme.RANDOM)[1].final_cost)

    assert np.mean(random) >= np.mean(proposed)


@pytest.mark.slow
def test_scheme_ordering_over_fifty_seeds() -> None:
    final: dict[Scheme, list[float]] = {Scheme.PROPOSED: [], Scheme.BASELINE1: [], Scheme.BASELINE2: []}
    for seed in range(50):
        state = generate_topology(TopologyConfig(seed=seed))
        for scheme in final:
            final[scheme].append(optimize(state, OptimizerConfig(scheme=scheme))[1].final_cost)

    proposed = float(np.mean(final[Scheme.PROPOSED]))
    baseline1 = float(np.mean(final[Scheme.BASELINE1]))
    baseline2 = float(np.mean(final[Scheme.BASELINE2]))
    assert proposed <= baseline1 <= baseline2
    assert proposed <= 0.95 * baseline2
