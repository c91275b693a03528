"""Dispatching policies: five rule-based heuristics, the loop cost function,
and the junction routing rule, all behind one dispatch-policy interface.

The rule-based dispatchers are pure functions of a HeuristicContext (plus
parameters and, where stochastic, an explicit RNG), which keeps them trivially
reproducible and safe to call from parallel simulation instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol

import numpy as np

from .config import HeuristicParams
from .errors import ConfigError
from .sim import (
    CROSS,
    EMPTY,
    STAY,
    DispatchEvent,
    HeuristicContext,
    Simulation,
)

HEURISTIC_NAMES = ("random", "low", "medium", "high", "sll")


@dataclass(frozen=True)
class LoopStats:
    """Per-loop assigned-pallet counts with their extremes."""

    assigned_per_loop: np.ndarray
    x_min: int
    x_max: int

    @classmethod
    def from_context(cls, ctx: HeuristicContext) -> "LoopStats":
        per_loop = ctx.per_loop_assigned
        return cls(per_loop, int(per_loop.min()), int(per_loop.max()))


def loop_cost(
    stats: LoopStats, candidate_loop: int, origin_loop: int, params: HeuristicParams
) -> float:
    """Congestion-normalized cost of sending a pallet to `candidate_loop`.

    When all loops carry the same load the normalized term is defined as 0,
    leaving only the distance cost.
    """
    spread = stats.x_max - stats.x_min
    if spread == 0:
        normalized = 0.0
    else:
        normalized = (int(stats.assigned_per_loop[candidate_loop]) - stats.x_min) / spread
    return normalized + params.cost(origin_loop, candidate_loop)


def dispatch_random(ctx: HeuristicContext, rng: np.random.Generator) -> int:
    """Uniform choice over every storage point."""
    return int(rng.integers(len(ctx.in_count)))


def dispatch_low(ctx: HeuristicContext, rng: np.random.Generator) -> int:
    """Uniform choice within the incoming point's own loop."""
    if not ctx.same_loop_set:
        raise ConfigError(
            f"incoming point {ctx.incoming_id} has no same-loop storage points"
        )
    return int(ctx.same_loop_set[int(rng.integers(len(ctx.same_loop_set)))])


def _argmin_by(candidates, key) -> int:
    """Deterministic argmin: ties broken by the lowest storage id."""
    best, best_key = None, None
    for s in candidates:
        k = key(s)
        if best_key is None or k < best_key or (k == best_key and s < best):
            best, best_key = s, k
    return int(best)


def dispatch_medium(ctx: HeuristicContext, params: HeuristicParams) -> int:
    """Keep lightly loaded storages, restrict to the cheapest loop, then pick
    the one with the fewest assigned pallets. Falls back to a global argmin
    when the occupancy filter empties the candidate set."""
    in_count = ctx.in_count
    all_storages = range(len(in_count))
    candidates = [s for s in all_storages if in_count[s] <= params.c1]
    if not candidates:
        return _argmin_by(all_storages, lambda s: int(in_count[s]))
    stats = LoopStats.from_context(ctx)
    loops = sorted({ctx.storage_loops[s] for s in candidates})
    best_loop = min(
        loops, key=lambda lp: (loop_cost(stats, lp, ctx.origin_loop, params), lp)
    )
    candidates = [s for s in candidates if ctx.storage_loops[s] == best_loop]
    if len(candidates) == 1:
        return int(candidates[0])
    return _argmin_by(candidates, lambda s: int(in_count[s]))


def dispatch_high(ctx: HeuristicContext, params: HeuristicParams) -> int:
    """Branch on same/other-loop congestion, filter by occupancy, prefer the
    own loop among survivors, then minimize the out-in difference."""
    in_count, out_count = ctx.in_count, ctx.out_count
    all_storages = range(len(in_count))
    same = set(ctx.same_loop_set)

    if ctx.x_same < params.c1 and ctx.x_other < params.c2:
        candidates = list(all_storages)
    elif ctx.x_same < params.c1 and ctx.x_other > params.c2:
        candidates = list(ctx.same_loop_set)
    elif ctx.x_same > params.c1 and ctx.x_other < params.c2:
        candidates = list(ctx.other_loop_set)
    else:
        candidates = list(all_storages)

    candidates = [s for s in candidates if in_count[s] <= params.c3]
    if not candidates:
        return _argmin_by(all_storages, lambda s: int(out_count[s] - in_count[s]))
    same_survivors = [s for s in candidates if s in same]
    if same_survivors:
        candidates = same_survivors
    if len(candidates) == 1:
        return int(candidates[0])
    return _argmin_by(candidates, lambda s: int(out_count[s] - in_count[s]))


def dispatch_sll(ctx: HeuristicContext) -> int:
    """Same loop, least assigned: deterministic argmin over the own loop."""
    if not ctx.same_loop_set:
        raise ConfigError(
            f"incoming point {ctx.incoming_id} has no same-loop storage points"
        )
    return _argmin_by(ctx.same_loop_set, lambda s: int(ctx.in_count[s]))


def route_junction(sim: Simulation, junction_id: int) -> str:
    """Routing rule at a junction head.

    Empty pallets cross when the downstream loop holds strictly fewer pallets
    than the current one; loaded pallets follow the unique shortest junction
    path toward their destination's loop.
    """
    pid = sim.junction_head_pallet(junction_id)
    from_loop, to_loop = sim.junction_ends(junction_id)
    kind, _ = sim.pallet_payload(pid)
    if kind == EMPTY:
        if sim.loop_pallet_count(to_loop) < sim.loop_pallet_count(from_loop):
            return CROSS
        return STAY
    dest_loop = sim.destination_loop(pid)
    if dest_loop == from_loop:
        return STAY
    return CROSS if abs(to_loop - dest_loop) < abs(from_loop - dest_loop) else STAY


class DispatchPolicy(Protocol):
    """A dispatching policy answers dispatch events with storage ids."""

    name: str

    def begin_episode(self, sim: Simulation) -> None: ...

    def decide(self, sim: Simulation, event: DispatchEvent) -> int: ...


class HeuristicPolicy:
    """Adapter putting the five rule functions behind the policy interface."""

    def __init__(
        self,
        name: str,
        params: HeuristicParams | None = None,
        rng: np.random.Generator | None = None,
    ):
        if name not in HEURISTIC_NAMES:
            raise ConfigError(f"unknown heuristic {name!r}; expected one of {HEURISTIC_NAMES}")
        self.name = name
        self.params = params or HeuristicParams()
        self.rng = rng if rng is not None else np.random.default_rng(0)

    def begin_episode(self, sim: Simulation) -> None:
        pass

    def decide(self, sim: Simulation, event: DispatchEvent) -> int:
        ctx = sim.heuristic_context(event.incoming_id)
        return dispatch_by_name(self.name, ctx, self.params, self.rng)


def dispatch_by_name(
    name: str,
    ctx: HeuristicContext,
    params: HeuristicParams,
    rng: np.random.Generator,
) -> int:
    if name == "random":
        return dispatch_random(ctx, rng)
    if name == "low":
        return dispatch_low(ctx, rng)
    if name == "medium":
        return dispatch_medium(ctx, params)
    if name == "high":
        return dispatch_high(ctx, params)
    if name == "sll":
        return dispatch_sll(ctx)
    raise ConfigError(f"unknown heuristic {name!r}")
