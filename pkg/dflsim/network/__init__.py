from dflsim.network.cost import device_cost, network_cost
from dflsim.network.topology import (
    Assignment,
    NetworkState,
    generate_topology,
    packet_error_rate,
    path_loss_db,
    sinr,
)

__all__ = [
    "Assignment",
    "NetworkState",
    "generate_topology",
    "path_loss_db",
    "sinr",
    "packet_error_rate",
    "device_cost",
    "network_cost",
]
