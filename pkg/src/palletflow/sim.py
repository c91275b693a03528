"""Discrete-event simulation of a multi-loop conveyor material handling system.

Pallets ride rotating ring belts; incoming, storage, and outgoing points pull
pallets off the belt into bounded FIFO buffers, hold them in a single
processing server, and merge them back when the slot under the point comes by
empty. Junctions transfer pallets between adjacent loops. Whenever an incoming
point finishes loading a good, the simulation pauses and emits a dispatch
event; the caller answers it with a destination storage point and resumes.

Time advances on a fixed tick. Between "interesting" ticks (belt advances,
server completions, demand arrivals) nothing can change, so the engine jumps
straight between them. Within one tick the processing order is fixed
(demand, then completions ordered by point kind/id, then belt movement with
stations visited loop- and slot-ascending), which makes a run fully
deterministic given (config, seed).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import SimConfig
from .errors import ActionError, ConfigError, UsageError
from .topology import (
    INCOMING,
    JUNCTION_FROM,
    JUNCTION_TO,
    OUTGOING,
    STORAGE,
    Topology,
    build_topology,
)

# Pallet payload codes.
EMPTY, INBOUND, OUTBOUND = 0, 1, 2
_PAYLOAD_NAMES = {EMPTY: "empty", INBOUND: "inbound", OUTBOUND: "outbound"}

# Server states.
_IDLE, _BUSY, _WAIT_DECISION, _WAIT_MERGE = 0, 1, 2, 3

# Heap/kind ranks fixing same-tick completion order.
_K_INC, _K_STO, _K_OUT, _K_JCT = 0, 1, 2, 3

# Role codes inside the per-loop station pass.
_R_INC, _R_STO, _R_OUT, _R_JFROM, _R_JTO = 0, 1, 2, 3, 4

_INF = 1 << 62

# Junction routing directions (see policies.route_junction).
STAY = "stay"
CROSS = "cross"


@dataclass(frozen=True)
class Observation:
    """State snapshot seen by policies: 20 + n_junctions + 20 counts."""

    heading_to_storage: np.ndarray
    junction_downstream: np.ndarray
    inventory: np.ndarray

    def vector(self) -> np.ndarray:
        return np.concatenate(
            [self.heading_to_storage, self.junction_downstream, self.inventory]
        )

    def __len__(self) -> int:
        return (
            len(self.heading_to_storage)
            + len(self.junction_downstream)
            + len(self.inventory)
        )


@dataclass(frozen=True)
class DispatchEvent:
    """A dispatch decision is required at `incoming_id` at simulated `time`."""

    time: float
    incoming_id: int
    observation: Observation
    _seq: int = 0


@dataclass(frozen=True)
class HeuristicContext:
    """Inputs the rule-based dispatch policies work from."""

    incoming_id: int
    origin_loop: int
    in_count: np.ndarray
    out_count: np.ndarray
    x_same: int
    x_other: int
    per_loop_assigned: np.ndarray
    same_loop_set: tuple[int, ...]
    other_loop_set: tuple[int, ...]
    storage_loops: tuple[int, ...]


@dataclass(frozen=True)
class ThroughputCounter:
    storage_receipts: int
    outgoing_deliveries: int
    total: int


@dataclass(frozen=True)
class Pallet:
    """Debug/inspection view of one pallet."""

    id: int
    payload_kind: str
    payload_dest: int | None
    position: tuple


class EpisodeEnd:
    """Sentinel returned once when the horizon elapses."""

    def __repr__(self) -> str:  # pragma: no cover
        return "EpisodeEnd"


EPISODE_END = EpisodeEnd()


class Simulation:
    """One independent, single-threaded simulation instance."""

    def __init__(
        self,
        config: SimConfig,
        seed: int,
        *,
        check_invariants: bool = False,
        junction_router: Callable[["Simulation", int], str] | None = None,
        topology: Topology | None = None,
    ):
        config.validate()
        self.config = config
        self.topology = topology if topology is not None else build_topology(config)
        if junction_router is None:
            from .policies import route_junction

            junction_router = route_junction
        self._router = junction_router
        self._check = check_invariants
        self.rng = np.random.default_rng(seed)
        self.seed = seed

        cfg = config
        self._travel_ticks = cfg.ticks(cfg.slot_travel_time)
        self._proc_ticks = {
            _K_INC: cfg.ticks(cfg.t_proc_incoming),
            _K_STO: cfg.ticks(cfg.t_proc_storage),
            _K_OUT: cfg.ticks(cfg.t_proc_outgoing),
            _K_JCT: cfg.ticks(cfg.t_proc_junction),
        }
        self._horizon_ticks = cfg.ticks(cfg.horizon)

        n = cfg.n_pallets
        self._payload_kind = [EMPTY] * n
        self._payload_dest = [-1] * n
        self._retrieval_dest = [-1] * n

        L = cfg.n_loops
        N = cfg.slots_per_loop
        self._belts: list[list[int]] = [[-1] * N for _ in range(L)]
        self._offsets = [0] * L
        for pid in range(n):
            self._belts[pid % L][pid // L] = pid
        self._loop_counts = [N - belt.count(-1) for belt in self._belts]

        topo = self.topology
        self._inc_loop = [topo.point_placement[(INCOMING, i)][0] for i in range(cfg.n_incoming)]
        self._sto_loop = [topo.point_placement[(STORAGE, s)][0] for s in range(cfg.n_storage)]
        self._out_loop = [topo.point_placement[(OUTGOING, o)][0] for o in range(cfg.n_outgoing)]

        self._inc_buf = [[] for _ in range(cfg.n_incoming)]
        self._inc_server = [-1] * cfg.n_incoming
        self._inc_state = [_IDLE] * cfg.n_incoming
        self.events_per_incoming = [0] * cfg.n_incoming

        self._sto_buf = [[] for _ in range(cfg.n_storage)]
        self._sto_server = [-1] * cfg.n_storage
        self._sto_state = [_IDLE] * cfg.n_storage
        self._sto_unclaimed: list[list[int]] = [[] for _ in range(cfg.n_storage)]
        self._sto_staged = [0] * cfg.n_storage
        self._out_count = [0] * cfg.n_storage
        self._inventory = [cfg.initial_inventory_per_storage] * cfg.n_storage
        self._heading = [0] * cfg.n_storage

        self._outg_buf = [[] for _ in range(cfg.n_outgoing)]
        self._outg_server = [-1] * cfg.n_outgoing
        self._outg_state = [_IDLE] * cfg.n_outgoing

        J = cfg.n_junctions
        self._j_from = [lk.from_loop for lk in topo.junction_links]
        self._j_to = [lk.to_loop for lk in topo.junction_links]
        self._j_slot_from = [lk.slot_from for lk in topo.junction_links]
        self._j_slot_to = [lk.slot_to for lk in topo.junction_links]
        self._j_queue: list[list[int]] = [[] for _ in range(J)]
        self._j_server = [-1] * J
        self._j_state = [_IDLE] * J

        self.storage_receipts = 0
        self.outgoing_deliveries = 0
        self.requests_seen = [0] * cfg.n_outgoing
        # Diagnostics: full-buffer pass-bys forcing another circulation, and
        # retrieval picks that found the shelf already emptied.
        self.missed_storage_admissions = 0
        self.missed_outgoing_admissions = 0
        self.failed_picks = 0

        self._n_on_slot = n
        self._n_in_buffer = 0
        self._n_processing = 0

        self._heap: list[tuple[int, int, int, int]] = []
        self._heap_seq = 0
        self._time_ticks = 0
        self._next_slot_tick = self._travel_ticks
        self._pending_events: list[int] = []
        self._unanswered: DispatchEvent | None = None
        self._event_seq = 0
        self._ended = False
        self._end_returned = False

        # Demand arrival schedule, one sorted tick array per outgoing point.
        rate = cfg.demand_rate_per_outgoing
        self._demand_ticks: list[np.ndarray] = []
        for _ in range(cfg.n_outgoing):
            if rate <= 0 or cfg.horizon <= 0:
                self._demand_ticks.append(np.empty(0, dtype=np.int64))
                continue
            gaps = []
            t = 0.0
            while True:
                t += self.rng.exponential(1.0 / rate)
                if t > cfg.horizon:
                    break
                gaps.append(int(t / cfg.tick) + 1)
            self._demand_ticks.append(np.asarray(gaps, dtype=np.int64))
        self._demand_ptr = [0] * cfg.n_outgoing
        self._deferred: list[int] = []
        self._refresh_next_demand()

        # Per-loop station pass order: (slot, role_code, index), slot-ascending.
        roles: list[list[tuple[int, int, int]]] = [[] for _ in range(L)]
        for i in range(cfg.n_incoming):
            lp, slot = topo.point_placement[(INCOMING, i)]
            roles[lp].append((slot, _R_INC, i))
        for s in range(cfg.n_storage):
            lp, slot = topo.point_placement[(STORAGE, s)]
            roles[lp].append((slot, _R_STO, s))
        for o in range(cfg.n_outgoing):
            lp, slot = topo.point_placement[(OUTGOING, o)]
            roles[lp].append((slot, _R_OUT, o))
        for j, lk in enumerate(topo.junction_links):
            roles[lk.from_loop].append((lk.slot_from, _R_JFROM, j))
            roles[lk.to_loop].append((lk.slot_to, _R_JTO, j))
        for lp in range(L):
            roles[lp].sort()
        self._roles = roles

        # Initial pull-in pass at t=0 (no belt movement, no merges possible).
        self._station_pass()
        if self._check:
            self._assert_census()

    # ------------------------------------------------------------------ #
    # Public surface                                                      #
    # ------------------------------------------------------------------ #

    @property
    def time(self) -> float:
        return self._time_ticks * self.config.tick

    def advance_to_next_event(self) -> DispatchEvent | EpisodeEnd:
        """Run until the next dispatch decision is required or the horizon ends."""
        if self._unanswered is not None:
            raise UsageError("previous dispatch event has not been answered")
        if self._end_returned:
            raise UsageError("advance_to_next_event called after EpisodeEnd")
        if not self._pending_events and not self._ended:
            self._run_until_event()
        if self._pending_events:
            return self._emit_event()
        self._end_returned = True
        return EPISODE_END

    def apply_dispatch(self, event: DispatchEvent, storage_id) -> None:
        """Answer `event` by dispatching the loaded pallet to `storage_id`."""
        if self._unanswered is None or event._seq != self._unanswered._seq:
            raise UsageError("stale or unknown dispatch event")
        if not isinstance(storage_id, (int, np.integer)):
            raise ActionError(f"storage id must be an integer, got {storage_id!r}")
        storage_id = int(storage_id)
        if not 0 <= storage_id < self.config.n_storage:
            raise ActionError(
                f"storage id {storage_id} outside [0, {self.config.n_storage})"
            )
        inc = event.incoming_id
        pid = self._inc_server[inc]
        self._payload_kind[pid] = INBOUND
        self._payload_dest[pid] = storage_id
        self._heading[storage_id] += 1
        self._inc_state[inc] = _WAIT_MERGE
        self._unanswered = None

    def observe(self, incoming_id: int) -> Observation:
        """Pure snapshot of the policy-visible state."""
        if not 0 <= incoming_id < self.config.n_incoming:
            raise UsageError(f"invalid incoming id {incoming_id}")
        junction = np.array(
            [
                len(self._j_queue[j]) + (1 if self._j_server[j] >= 0 else 0)
                for j in range(self.config.n_junctions)
            ],
            dtype=np.int64,
        )
        return Observation(
            heading_to_storage=np.array(self._heading, dtype=np.int64),
            junction_downstream=junction,
            inventory=np.array(self._inventory, dtype=np.int64),
        )

    def heuristic_context(self, incoming_id: int) -> HeuristicContext:
        if not 0 <= incoming_id < self.config.n_incoming:
            raise UsageError(f"invalid incoming id {incoming_id}")
        origin = self._inc_loop[incoming_id]
        in_count = np.array(self._heading, dtype=np.int64)
        per_loop = np.zeros(self.config.n_loops, dtype=np.int64)
        for s, lp in enumerate(self._sto_loop):
            per_loop[lp] += in_count[s]
        same = self.topology.storages_by_loop[origin]
        other = tuple(
            s for s in range(self.config.n_storage) if self._sto_loop[s] != origin
        )
        return HeuristicContext(
            incoming_id=incoming_id,
            origin_loop=origin,
            in_count=in_count,
            out_count=np.array(self._out_count, dtype=np.int64),
            x_same=int(sum(in_count[s] for s in same)),
            x_other=int(sum(in_count[s] for s in other)),
            per_loop_assigned=per_loop,
            same_loop_set=same,
            other_loop_set=other,
            storage_loops=tuple(self._sto_loop),
        )

    def throughput(self) -> ThroughputCounter:
        return ThroughputCounter(
            storage_receipts=self.storage_receipts,
            outgoing_deliveries=self.outgoing_deliveries,
            total=self.storage_receipts + self.outgoing_deliveries,
        )

    # -- helpers used by junction routing and tests ---------------------- #

    def junction_head_pallet(self, junction_id: int) -> int:
        """Pallet currently on the junction's from-slot, or -1."""
        lp = self._j_from[junction_id]
        belt = self._belts[lp]
        ci = (self._j_slot_from[junction_id] - self._offsets[lp]) % len(belt)
        return belt[ci]

    def junction_ends(self, junction_id: int) -> tuple[int, int]:
        return self._j_from[junction_id], self._j_to[junction_id]

    def loop_pallet_count(self, loop: int) -> int:
        return self._loop_counts[loop]

    def pallet_payload(self, pid: int) -> tuple[int, int]:
        return self._payload_kind[pid], self._payload_dest[pid]

    def destination_loop(self, pid: int) -> int | None:
        kind = self._payload_kind[pid]
        if kind == INBOUND:
            return self._sto_loop[self._payload_dest[pid]]
        if kind == OUTBOUND:
            return self._out_loop[self._payload_dest[pid]]
        return None

    def pallet(self, pid: int) -> Pallet:
        """Full inspection view (slow; walks the state)."""
        kind = self._payload_kind[pid]
        dest = self._payload_dest[pid] if kind != EMPTY else None
        position = None
        for lp, belt in enumerate(self._belts):
            if pid in belt:
                ci = belt.index(pid)
                position = ("slot", lp, (ci + self._offsets[lp]) % len(belt))
        groups = [
            (INCOMING, self._inc_buf, self._inc_server),
            (STORAGE, self._sto_buf, self._sto_server),
            (OUTGOING, self._outg_buf, self._outg_server),
            ("junction", self._j_queue, self._j_server),
        ]
        for name, bufs, servers in groups:
            for idx, buf in enumerate(bufs):
                if pid in buf:
                    position = ("buffer", name, idx, buf.index(pid))
            for idx, srv in enumerate(servers):
                if srv == pid:
                    position = ("processing", name, idx)
        if position is None:
            raise RuntimeError(f"pallet {pid} not found anywhere")
        return Pallet(pid, _PAYLOAD_NAMES[kind], dest, position)

    def census(self) -> tuple[int, int, int]:
        """Full structural recount of (on_slot, in_buffer, processing).

        Asserts every pallet appears in exactly one place.
        """
        seen = [0] * self.config.n_pallets
        on_slot = 0
        for belt in self._belts:
            for pid in belt:
                if pid >= 0:
                    seen[pid] += 1
                    on_slot += 1
        in_buffer = 0
        for bufs in (self._inc_buf, self._sto_buf, self._outg_buf, self._j_queue):
            for buf in bufs:
                for pid in buf:
                    seen[pid] += 1
                    in_buffer += 1
        processing = 0
        for servers in (self._inc_server, self._sto_server, self._outg_server, self._j_server):
            for pid in servers:
                if pid >= 0:
                    seen[pid] += 1
                    processing += 1
        bad = [pid for pid, c in enumerate(seen) if c != 1]
        if bad:
            raise AssertionError(f"pallets not in exactly one position: {bad[:10]}")
        return on_slot, in_buffer, processing

    def buffer_lengths(self) -> dict[str, list[int]]:
        return {
            INCOMING: [len(b) for b in self._inc_buf],
            STORAGE: [len(b) for b in self._sto_buf],
            OUTGOING: [len(b) for b in self._outg_buf],
        }

    # ------------------------------------------------------------------ #
    # Engine                                                              #
    # ------------------------------------------------------------------ #

    def _emit_event(self) -> DispatchEvent:
        inc = self._pending_events.pop(0)
        self._event_seq += 1
        event = DispatchEvent(
            time=self.time,
            incoming_id=inc,
            observation=self.observe(inc),
            _seq=self._event_seq,
        )
        self._unanswered = event
        return event

    def _run_until_event(self) -> None:
        heap = self._heap
        horizon = self._horizon_ticks
        while not self._pending_events:
            t_heap = heap[0][0] if heap else _INF
            t = min(self._next_slot_tick, t_heap, self._next_demand_tick)
            if t > horizon:
                self._time_ticks = horizon
                self._ended = True
                return
            self._time_ticks = t
            if t == self._next_demand_tick:
                self._process_demand(t)
            while heap and heap[0][0] == t:
                _, rank, idx, _ = heapq.heappop(heap)
                self._complete(rank, idx)
            if t == self._next_slot_tick:
                for lp in range(self.config.n_loops):
                    self._offsets[lp] += 1
                self._station_pass()
                self._next_slot_tick += self._travel_ticks
            if self._check:
                self._assert_census()

    def _refresh_next_demand(self) -> None:
        nxt = _INF
        for o in range(self.config.n_outgoing):
            ticks = self._demand_ticks[o]
            p = self._demand_ptr[o]
            if p < len(ticks) and ticks[p] < nxt:
                nxt = int(ticks[p])
        self._next_demand_tick = nxt

    def _process_demand(self, t: int) -> None:
        self._retry_deferred()
        for o in range(self.config.n_outgoing):
            ticks = self._demand_ticks[o]
            p = self._demand_ptr[o]
            while p < len(ticks) and ticks[p] == t:
                self.requests_seen[o] += 1
                if not self._place_request(o):
                    self._deferred.append(o)
                p += 1
            self._demand_ptr[o] = p
        self._refresh_next_demand()

    def _place_request(self, outgoing_id: int) -> bool:
        inventory = self._inventory
        available = [s for s in range(self.config.n_storage) if inventory[s] > 0]
        if not available:
            return False
        s = available[int(self.rng.integers(len(available)))]
        self._sto_unclaimed[s].append(outgoing_id)
        self._out_count[s] += 1
        return True

    def _retry_deferred(self) -> None:
        while self._deferred:
            if not self._place_request(self._deferred[0]):
                return
            self._deferred.pop(0)

    def _complete(self, rank: int, idx: int) -> None:
        if rank == _K_INC:
            # Good loaded; a dispatch decision is now required.
            self._inc_state[idx] = _WAIT_DECISION
            self.events_per_incoming[idx] += 1
            self._pending_events.append(idx)
        elif rank == _K_STO:
            pid = self._sto_server[idx]
            if self._payload_kind[pid] == INBOUND:
                self._inventory[idx] += 1
                self.storage_receipts += 1
                self._payload_kind[pid] = EMPTY
                self._payload_dest[pid] = -1
                self._retry_deferred()
            else:
                dest = self._retrieval_dest[pid]
                self._retrieval_dest[pid] = -1
                self._out_count[idx] -= 1
                self._sto_staged[idx] -= 1
                if self._inventory[idx] > 0:
                    self._payload_kind[pid] = OUTBOUND
                    self._payload_dest[pid] = dest
                    self._inventory[idx] -= 1
                else:
                    # Stock raced away between request placement and service:
                    # the pick fails, the pallet leaves empty, and the request
                    # is requeued against the current inventory picture.
                    self.failed_picks += 1
                    if not self._place_request(dest):
                        self._deferred.append(dest)
            self._sto_state[idx] = _WAIT_MERGE
        elif rank == _K_OUT:
            pid = self._outg_server[idx]
            self.outgoing_deliveries += 1
            self._payload_kind[pid] = EMPTY
            self._payload_dest[pid] = -1
            self._outg_state[idx] = _WAIT_MERGE
        else:
            self._j_state[idx] = _WAIT_MERGE

    def _start(self, rank: int, idx: int, buf: list[int], servers: list[int], states: list[int]) -> None:
        pid = buf.pop(0)
        servers[idx] = pid
        states[idx] = _BUSY
        self._n_in_buffer -= 1
        self._n_processing += 1
        self._heap_seq += 1
        heapq.heappush(
            self._heap,
            (self._time_ticks + self._proc_ticks[rank], rank, idx, self._heap_seq),
        )

    def _station_pass(self) -> None:
        cfg = self.config
        payload_kind = self._payload_kind
        payload_dest = self._payload_dest
        for lp in range(cfg.n_loops):
            belt = self._belts[lp]
            N = len(belt)
            off = self._offsets[lp]
            for slot, role, idx in self._roles[lp]:
                ci = (slot - off) % N
                pid = belt[ci]
                if role == _R_INC:
                    buf = self._inc_buf[idx]
                    if pid >= 0 and payload_kind[pid] == EMPTY and len(buf) < cfg.buf_incoming:
                        belt[ci] = -1
                        buf.append(pid)
                        self._n_on_slot -= 1
                        self._n_in_buffer += 1
                        pid = -1
                    if self._inc_state[idx] == _IDLE and buf:
                        self._start(_K_INC, idx, buf, self._inc_server, self._inc_state)
                    elif pid < 0 and self._inc_state[idx] == _WAIT_MERGE:
                        belt[ci] = self._inc_server[idx]
                        self._inc_server[idx] = -1
                        self._inc_state[idx] = _IDLE
                        self._n_processing -= 1
                        self._n_on_slot += 1
                        if buf:
                            self._start(_K_INC, idx, buf, self._inc_server, self._inc_state)
                elif role == _R_STO:
                    buf = self._sto_buf[idx]
                    if pid >= 0:
                        kind = payload_kind[pid]
                        if len(buf) < cfg.buf_storage:
                            if kind == INBOUND and payload_dest[pid] == idx:
                                belt[ci] = -1
                                buf.append(pid)
                                # Admission: the pallet has arrived, it is no
                                # longer "heading to" this storage point.
                                self._heading[idx] -= 1
                                self._n_on_slot -= 1
                                self._n_in_buffer += 1
                                pid = -1
                            elif (
                                kind == EMPTY
                                and self._sto_unclaimed[idx]
                                and self._sto_staged[idx] < cfg.retrieval_stage_limit
                            ):
                                belt[ci] = -1
                                buf.append(pid)
                                self._retrieval_dest[pid] = self._sto_unclaimed[idx].pop(0)
                                self._sto_staged[idx] += 1
                                self._n_on_slot -= 1
                                self._n_in_buffer += 1
                                pid = -1
                        elif kind == INBOUND and payload_dest[pid] == idx:
                            self.missed_storage_admissions += 1
                    if self._sto_state[idx] == _IDLE and buf:
                        self._start(_K_STO, idx, buf, self._sto_server, self._sto_state)
                    elif pid < 0 and self._sto_state[idx] == _WAIT_MERGE:
                        belt[ci] = self._sto_server[idx]
                        self._sto_server[idx] = -1
                        self._sto_state[idx] = _IDLE
                        self._n_processing -= 1
                        self._n_on_slot += 1
                        if buf:
                            self._start(_K_STO, idx, buf, self._sto_server, self._sto_state)
                elif role == _R_OUT:
                    buf = self._outg_buf[idx]
                    if pid >= 0 and payload_kind[pid] == OUTBOUND and payload_dest[pid] == idx:
                        if len(buf) < cfg.buf_outgoing:
                            belt[ci] = -1
                            buf.append(pid)
                            self._n_on_slot -= 1
                            self._n_in_buffer += 1
                            pid = -1
                        else:
                            self.missed_outgoing_admissions += 1
                    if self._outg_state[idx] == _IDLE and buf:
                        self._start(_K_OUT, idx, buf, self._outg_server, self._outg_state)
                    elif pid < 0 and self._outg_state[idx] == _WAIT_MERGE:
                        belt[ci] = self._outg_server[idx]
                        self._outg_server[idx] = -1
                        self._outg_state[idx] = _IDLE
                        self._n_processing -= 1
                        self._n_on_slot += 1
                        if buf:
                            self._start(_K_OUT, idx, buf, self._outg_server, self._outg_state)
                elif role == _R_JFROM:
                    if pid >= 0 and self._router(self, idx) == CROSS:
                        belt[ci] = -1
                        self._j_queue[idx].append(pid)
                        self._loop_counts[self._j_from[idx]] -= 1
                        self._loop_counts[self._j_to[idx]] += 1
                        self._n_on_slot -= 1
                        self._n_in_buffer += 1
                        if self._j_state[idx] == _IDLE:
                            self._start(_K_JCT, idx, self._j_queue[idx], self._j_server, self._j_state)
                else:  # _R_JTO: merge side of the junction on the destination loop
                    if pid < 0 and self._j_state[idx] == _WAIT_MERGE:
                        belt[ci] = self._j_server[idx]
                        self._j_server[idx] = -1
                        self._j_state[idx] = _IDLE
                        self._n_processing -= 1
                        self._n_on_slot += 1
                        if self._j_queue[idx]:
                            self._start(_K_JCT, idx, self._j_queue[idx], self._j_server, self._j_state)

    def _assert_census(self) -> None:
        total = self._n_on_slot + self._n_in_buffer + self._n_processing
        if total != self.config.n_pallets:
            raise AssertionError(
                f"pallet conservation violated at t={self.time}: {total} != {self.config.n_pallets}"
            )
        for buf, cap in (
            (self._inc_buf, self.config.buf_incoming),
            (self._sto_buf, self.config.buf_storage),
            (self._outg_buf, self.config.buf_outgoing),
        ):
            for b in buf:
                if len(b) > cap:
                    raise AssertionError(f"buffer overflow at t={self.time}: {len(b)} > {cap}")


def reset(
    config: SimConfig,
    seed: int,
    *,
    check_invariants: bool = False,
    junction_router: Callable[[Simulation, int], str] | None = None,
    topology: Topology | None = None,
) -> Simulation:
    """Create a fresh simulation: pallets empty and round-robin on slots,
    clocks and counters zero, RNG seeded, inventory at its initial level."""
    return Simulation(
        config,
        seed,
        check_invariants=check_invariants,
        junction_router=junction_router,
        topology=topology,
    )
