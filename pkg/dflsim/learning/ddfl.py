"""
Dispersed federated learning over the SBS groups of an association.

One global round runs S sub-global iterations inside every group (local training on each
associated device, then aggregation at the group's SBS), exchanges the sub-global models
between all SBSs over the backhaul and lets every SBS compute the same global model, which
is broadcast back to the devices. Traditional FL is the special case of a single group and
a single sub-global iteration.
"""

import numpy as np
from loguru import logger

from dflsim.dataset.samples import LabeledData
from dflsim.errors import EmptyAggregate, EmptyDataset
from dflsim.learning.classifiers import Classifier, make_classifier
from dflsim.learning.params import ModelParams, aggregate
from dflsim.learning.partition import DeviceDataset
from dflsim.learning.training import evaluate, initial_model, local_train
from dflsim.models import TrainConfig
from dflsim.network.topology import Assignment, NetworkState, packet_error_rate
from dflsim.runtime.events import on_event
from dflsim.runtime.metrics import RoundMetrics
from dflsim.seeding import Stream, generator

N_CLASSES: int = 10

ACCURACY: str = "accuracy"


def groups_from_assignment(assignment: Assignment, n_sbs: int) -> list[list[int]]:
    """Devices associated to every SBS, ascending ids, in SBS order."""

    groups: list[list[int]] = [[] for _ in range(n_sbs)]
    for device in sorted(assignment.assoc):
        groups[assignment.assoc[device]].append(device)
    return groups


def upload_error_rates(state: NetworkState, assignment: Assignment) -> dict[int, float]:
    """
    Packet error rate of every device's uplink; devices without an SBS or a resource
    block never get through.
    """
    rates = {}
    for device in range(state.n_devices):
        if assignment.is_scheduled(device):
            link = state.link_sinr(device, assignment.assoc[device], assignment.alloc[device])
            rates[device] = float(packet_error_rate(link, state.waterfall_threshold))
        else:
            rates[device] = 1.0
    return rates


def received_order(group_models: dict[int, ModelParams], receiver: int) -> list[int]:
    """
    SBS ids of the sub-global models in the order receiver gets them over the backhaul: its
    own model first, then the other SBSs cyclically after it.
    """
    senders = sorted(group_models)
    return [s for s in senders if s >= receiver] + [s for s in senders if s < receiver]


def global_aggregate(group_models: dict[int, ModelParams], n_aggregators: int) -> ModelParams:
    """
    Every SBS aggregates the sub-global models it received, sorted by SBS id so that all
    replicas of the global model are bit-identical.
    """
    replicas = []
    for receiver in range(n_aggregators):
        received = received_order(group_models, receiver)
        replicas.append(aggregate([group_models[s] for s in sorted(received)]))

    for sbs, replica in enumerate(replicas[1:], start=1):
        if not np.array_equal(replica.weights, replicas[0].weights):
            raise RuntimeError(f"SBS {sbs} disagrees with SBS 0 on the global model")
    return replicas[0]


def _hierarchical_training(
    groups: list[list[int]],
    n_aggregators: int,
    datasets: list[DeviceDataset],
    samples: LabeledData,
    test: LabeledData,
    cfg: TrainConfig,
    run_id: int,
    error_rates: dict[int, float] | None,
    label: str,
) -> RoundMetrics:
    if not any(groups):
        raise EmptyDataset("no device takes part in training")

    classifier: Classifier = make_classifier(cfg.model_kind, samples.n_features, N_CLASSES, cfg.hidden_units)

    local_data: dict[int, LabeledData] = {}
    for group in groups:
        for device in group:
            if len(datasets[device]) == 0:
                raise EmptyDataset(f"device {device} holds no samples")
            local_data[device] = samples.subset(datasets[device].indices)

    group_sizes = [sum(len(local_data[d]) for d in group) for group in groups]
    global_model = initial_model(classifier, cfg.seed)
    metrics = RoundMetrics()

    for round_idx in range(cfg.global_rounds):
        group_models: dict[int, ModelParams] = {}

        for sbs, (group, size) in enumerate(zip(groups, group_sizes, strict=True)):
            if not group:
                continue

            sub_global = global_model.with_samples(size)
            for sub_iter in range(cfg.subglobal_iters):
                uploads = []
                for device in group:
                    local = local_train(
                        sub_global,
                        local_data[device],
                        classifier,
                        cfg.local_iters,
                        cfg.learning_rate,
                        cfg.batch_size,
                        generator(cfg.seed, Stream.SHUFFLE, round_idx, sub_iter, device),
                    )
                    if error_rates is not None:
                        channel = generator(cfg.seed, Stream.CHANNEL, round_idx, sub_iter, device)
                        if channel.random() < error_rates[device]:
                            continue
                    uploads.append(local)

                try:
                    sub_global = aggregate(uploads).with_samples(size)
                except EmptyAggregate:
                    # every upload of the group was lost, keep the previous sub-global model
                    logger.debug(f"round {round_idx}: SBS {sbs} lost all uploads at sub-iteration {sub_iter}")

            group_models[sbs] = sub_global

        global_model = global_aggregate(group_models, n_aggregators)
        accuracy = evaluate(global_model, test, classifier)
        metrics.add(run_id, round_idx, ACCURACY, accuracy)

        on_event(
            "global_round",
            {"run_id": run_id, "scheme": label, "round": round_idx, "accuracy": accuracy},
        )

    return metrics


def run_ddfl(
    state: NetworkState,
    assignment: Assignment,
    datasets: list[DeviceDataset],
    samples: LabeledData,
    test: LabeledData,
    cfg: TrainConfig,
    run_id: int = 0,
) -> RoundMetrics:
    """
    Train with one sub-global aggregator per SBS of the association and record the test
    accuracy of the global model after every round.

    With coupled_channel each upload is lost with the packet error rate of the device's
    link, independently per sub-global iteration.
    """
    groups = groups_from_assignment(assignment, state.n_sbs)
    error_rates = upload_error_rates(state, assignment) if cfg.coupled_channel else None
    return _hierarchical_training(
        groups, state.n_sbs, datasets, samples, test, cfg, run_id, error_rates, f"ddfl_s{cfg.subglobal_iters}"
    )


def run_fl_baseline(
    datasets: list[DeviceDataset],
    samples: LabeledData,
    test: LabeledData,
    cfg: TrainConfig,
    run_id: int = 0,
) -> RoundMetrics:
    """
    Traditional FL: one aggregator over all devices, local_iters epochs per round, ideal
    channel. subglobal_iters is ignored.
    """
    groups = [list(range(len(datasets)))]
    flat = cfg.model_copy(update={"subglobal_iters": 1})
    return _hierarchical_training(groups, 1, datasets, samples, test, flat, run_id, None, "fl")


__all__ = ["groups_from_assignment", "upload_error_rates", "global_aggregate", "run_ddfl", "run_fl_baseline"]
