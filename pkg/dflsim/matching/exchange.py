"""
Exchange-stability machinery shared by the one-to-one and one-to-many matching games.

A matching is a vector `match` over devices holding the agent (resource block or SBS) each
device is matched with, or -1. With one-sided preferences a blocking pair is any local move
that lowers the total cost of the candidate devices:

- relocate: a device (matched or not) moves to an agent with spare capacity;
- exchange: two devices matched with different agents trade them;
- displace: an unmatched device takes the slot of a matched one, which becomes unmatched.

A matching with no such move is exchange-stable.
"""

import typing as t
from enum import Enum

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel

from dflsim.matching.preferences import PreferenceProfile
from dflsim.network.topology import FloatArray

IntArray = npt.NDArray[np.int64]

UNMATCHED: int = -1
# smallest cost decrease accepted as an improvement
TOLERANCE: float = 1e-12


class MoveKind(str, Enum):
    RELOCATE = "relocate"
    EXCHANGE = "exchange"
    DISPLACE = "displace"


class Move(BaseModel):
    kind: MoveKind
    device: int
    # destination agent for RELOCATE, the other device for EXCHANGE and DISPLACE
    target: int
    # change of total cost, always negative
    delta: float


def empty_match(prefs: PreferenceProfile) -> IntArray:
    return np.full(prefs.n_devices, UNMATCHED, dtype=np.int64)


def match_from_map(prefs: PreferenceProfile, mapping: t.Mapping[int, int]) -> IntArray:
    match = empty_match(prefs)
    candidates = set(prefs.devices)
    for device, agent in mapping.items():
        if device in candidates:
            match[device] = agent
    return match


def match_to_map(prefs: PreferenceProfile, match: IntArray) -> dict[int, int]:
    return {d: int(match[d]) for d in prefs.devices if match[d] != UNMATCHED}


def current_costs(prefs: PreferenceProfile, match: IntArray) -> FloatArray:
    cur = prefs.unmatched_cost.copy()
    matched = np.flatnonzero(match != UNMATCHED)
    cur[matched] = prefs.costs[matched, match[matched]]
    return cur


def total_cost(prefs: PreferenceProfile, match: IntArray) -> float:
    cur = current_costs(prefs, match)
    return float(np.sum(cur[list(prefs.devices)])) if prefs.devices else 0.0


def loads(prefs: PreferenceProfile, match: IntArray) -> IntArray:
    matched = match[match != UNMATCHED]
    return np.bincount(matched, minlength=prefs.n_agents).astype(np.int64)


def greedy_seed(prefs: PreferenceProfile, capacity: int) -> IntArray:
    """
    Walk all (device, agent) pairs by ascending cost (ties: lower device, then lower
    agent) and match every pair whose device is free and whose agent has room.
    """
    return fill(prefs, empty_match(prefs), capacity)


def fill(prefs: PreferenceProfile, match: IntArray, capacity: int) -> IntArray:
    """
    Greedily match the unmatched candidate devices into the remaining capacity.
    """
    match = match.copy()
    devices = np.array([d for d in prefs.devices if match[d] == UNMATCHED], dtype=np.int64)
    if not devices.size or not prefs.n_agents:
        return match

    table = prefs.costs[devices]
    rows, cols = np.meshgrid(np.arange(len(devices)), np.arange(prefs.n_agents), indexing="ij")
    order = np.lexsort((cols.ravel(), rows.ravel(), table.ravel()))

    load = loads(prefs, match)
    remaining = len(devices)
    for flat in order:
        device = devices[rows.ravel()[flat]]
        agent = cols.ravel()[flat]
        if match[device] == UNMATCHED and load[agent] < capacity:
            match[device] = agent
            load[agent] += 1
            remaining -= 1
            if remaining == 0:
                break

    return match


def _move_tables(
    prefs: PreferenceProfile,
    match: IntArray,
    capacity: int,
) -> list[tuple[MoveKind, FloatArray, IntArray, IntArray]]:
    """
    Cost deltas of every relocate, exchange and displace move as (kind, deltas, rows, cols):
    deltas[i, j] is the move of device rows[i] with target cols[j]; forbidden moves are +inf.
    """
    candidates = np.array(prefs.devices, dtype=np.int64)
    cur = current_costs(prefs, match)
    spare = loads(prefs, match) < capacity
    agents = np.arange(prefs.n_agents, dtype=np.int64)

    relocate = prefs.costs[candidates] - cur[candidates][:, None]
    blocked = ~spare[None, :] | (match[candidates][:, None] == agents[None, :])
    relocate = np.where(blocked, np.inf, relocate)

    matched = candidates[match[candidates] != UNMATCHED]
    unmatched = candidates[match[candidates] == UNMATCHED]
    held = match[matched]

    # device i takes j's agent and j takes i's
    exchange = (
        prefs.costs[matched][:, held]
        + prefs.costs[matched][:, held].T
        - cur[matched][:, None]
        - cur[matched][None, :]
    )
    upper = np.triu(np.ones((len(matched), len(matched)), dtype=bool), k=1)
    exchange = np.where(upper & (held[:, None] != held[None, :]), exchange, np.inf)

    # unmatched u takes the slot of matched m
    displace = (
        prefs.costs[unmatched][:, held]
        + (prefs.unmatched_cost[matched] - cur[matched])[None, :]
        - prefs.unmatched_cost[unmatched][:, None]
    )

    return [
        (MoveKind.RELOCATE, relocate, candidates, agents),
        (MoveKind.EXCHANGE, exchange, matched, matched),
        (MoveKind.DISPLACE, displace, unmatched, matched),
    ]


def _to_move(kind: MoveKind, deltas: FloatArray, rows: IntArray, cols: IntArray, flat: int) -> Move:
    i, j = np.unravel_index(flat, deltas.shape)
    return Move(kind=kind, device=int(rows[i]), target=int(cols[j]), delta=float(deltas[i, j]))


def first_move(prefs: PreferenceProfile, match: IntArray, capacity: int) -> Move | None:
    """
    First improving move in a fixed scan order (relocations, exchanges, displacements;
    row-major within each), or None if the matching is exchange-stable.
    """
    for kind, deltas, rows, cols in _move_tables(prefs, match, capacity):
        improving = np.flatnonzero(deltas.ravel() < -TOLERANCE)
        if improving.size:
            return _to_move(kind, deltas, rows, cols, int(improving[0]))
    return None


def best_move(prefs: PreferenceProfile, match: IntArray, capacity: int) -> Move | None:
    """
    Steepest improving move, or None if the matching is exchange-stable.
    """
    best: Move | None = None
    for kind, deltas, rows, cols in _move_tables(prefs, match, capacity):
        if not deltas.size:
            continue
        flat = int(np.argmin(deltas))
        if deltas.ravel()[flat] < -TOLERANCE and (best is None or deltas.ravel()[flat] < best.delta):
            best = _to_move(kind, deltas, rows, cols, flat)
    return best


def apply_move(match: IntArray, move: Move) -> None:
    if move.kind == MoveKind.RELOCATE:
        match[move.device] = move.target
    elif move.kind == MoveKind.EXCHANGE:
        match[move.device], match[move.target] = match[move.target], match[move.device]
    else:
        match[move.device] = match[move.target]
        match[move.target] = UNMATCHED


def improve(prefs: PreferenceProfile, match: IntArray, capacity: int) -> tuple[IntArray, list[float]]:
    """
    Apply steepest improving moves until the matching is exchange-stable.

    Every move lowers the total cost by more than TOLERANCE, so the loop terminates.
    Returns the stable matching and the total cost before and after each move.
    """
    match = match.copy()
    trace = [total_cost(prefs, match)]
    while (move := best_move(prefs, match, capacity)) is not None:
        apply_move(match, move)
        trace.append(total_cost(prefs, match))
    return match, trace
