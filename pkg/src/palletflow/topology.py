"""Deterministic layout of process points and junctions on the conveyor loops.

Points are spread near-evenly across loops (ceil-first round robin, which
yields the reference 7/7/6 storage, 2/1/1 incoming, 2/2/2 outgoing split) and
junctions form a bidirectional chain between adjacent loops. Within a loop,
non-storage roles are interleaved among the storage points, and all roles sit
on evenly spaced slots, so every incoming/storage pair has a distinct ring
distance.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import SimConfig
from .errors import ConfigError

# Point kinds used in placement keys.
INCOMING = "incoming"
STORAGE = "storage"
OUTGOING = "outgoing"
JUNCTION_FROM = "junction_from"
JUNCTION_TO = "junction_to"


@dataclass(frozen=True)
class JunctionLink:
    junction_id: int
    from_loop: int
    to_loop: int
    slot_from: int
    slot_to: int


@dataclass(frozen=True)
class Topology:
    n_loops: int
    slots_per_loop: int
    # (kind, point-id) -> (loop, slot); junctions appear via junction_links.
    point_placement: dict[tuple[str, int], tuple[int, int]]
    junction_links: tuple[JunctionLink, ...]
    loop_of_storage: dict[int, int]
    loop_of_incoming: dict[int, int]
    loop_of_outgoing: dict[int, int]
    storages_by_loop: tuple[tuple[int, ...], ...]

    def same_loop_storages(self, incoming_id: int) -> tuple[int, ...]:
        return self.storages_by_loop[self.loop_of_incoming[incoming_id]]

    def junction_hops(self, from_loop: int, to_loop: int) -> int:
        return abs(from_loop - to_loop)


def _split_counts(total: int, n_loops: int) -> list[int]:
    base, rem = divmod(total, n_loops)
    return [base + (1 if i < rem else 0) for i in range(n_loops)]


def _interleave(storages: list, others: list) -> list:
    """Merge two role lists by fractional position, spreading `others` evenly."""
    if not storages:
        return list(others)
    if not others:
        return list(storages)
    tagged = [((i + 0.5) / len(storages), 1, i, r) for i, r in enumerate(storages)]
    tagged += [((j + 0.5) / len(others), 0, j, r) for j, r in enumerate(others)]
    tagged.sort(key=lambda t: (t[0], t[1], t[2]))
    return [r for _, _, _, r in tagged]


def build_topology(config: SimConfig) -> Topology:
    """Lay out all points deterministically for a validated configuration."""
    config.validate()
    L = config.n_loops
    storage_split = _split_counts(config.n_storage, L)
    incoming_split = _split_counts(config.n_incoming, L)
    outgoing_split = _split_counts(config.n_outgoing, L)

    def assign(split: list[int]) -> dict[int, int]:
        out, next_id = {}, 0
        for loop, count in enumerate(split):
            for _ in range(count):
                out[next_id] = loop
                next_id += 1
        return out

    loop_of_storage = assign(storage_split)
    loop_of_incoming = assign(incoming_split)
    loop_of_outgoing = assign(outgoing_split)

    # Bidirectional chain: junctions 2i (loop i -> i+1) and 2i+1 (loop i+1 -> i).
    junction_dirs = []
    for i in range(L - 1):
        junction_dirs.append((2 * i, i, i + 1))
        junction_dirs.append((2 * i + 1, i + 1, i))

    roles_by_loop: list[list[tuple[str, int]]] = [[] for _ in range(L)]
    for loop in range(L):
        storages = [(STORAGE, s) for s, lp in loop_of_storage.items() if lp == loop]
        others = [(INCOMING, i) for i, lp in loop_of_incoming.items() if lp == loop]
        others += [(OUTGOING, o) for o, lp in loop_of_outgoing.items() if lp == loop]
        for jid, frm, to in junction_dirs:
            if frm == loop:
                others.append((JUNCTION_FROM, jid))
            if to == loop:
                others.append((JUNCTION_TO, jid))
        roles_by_loop[loop] = _interleave(storages, others)

    placement: dict[tuple[str, int], tuple[int, int]] = {}
    junction_pos: dict[tuple[str, int], tuple[int, int]] = {}
    for loop, roles in enumerate(roles_by_loop):
        if len(roles) > config.slots_per_loop:
            raise ConfigError(
                f"slots_per_loop={config.slots_per_loop} cannot place "
                f"{len(roles)} roles on loop {loop}"
            )
        for i, role in enumerate(roles):
            slot = (i * config.slots_per_loop) // max(len(roles), 1)
            if role[0] in (JUNCTION_FROM, JUNCTION_TO):
                junction_pos[role] = (loop, slot)
            else:
                placement[role] = (loop, slot)

    links = []
    for jid, frm, to in junction_dirs:
        slot_from = junction_pos[(JUNCTION_FROM, jid)][1]
        slot_to = junction_pos[(JUNCTION_TO, jid)][1]
        links.append(JunctionLink(jid, frm, to, slot_from, slot_to))

    storages_by_loop = tuple(
        tuple(sorted(s for s, lp in loop_of_storage.items() if lp == loop))
        for loop in range(L)
    )
    return Topology(
        n_loops=L,
        slots_per_loop=config.slots_per_loop,
        point_placement=placement,
        junction_links=tuple(links),
        loop_of_storage=loop_of_storage,
        loop_of_incoming=loop_of_incoming,
        loop_of_outgoing=loop_of_outgoing,
        storages_by_loop=storages_by_loop,
    )
