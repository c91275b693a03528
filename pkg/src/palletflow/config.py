"""System configuration: sizing, timing, and heuristic parameters.

The default values describe the reference three-loop installation; the
kinematic fields (slots_per_loop, slot_travel_time) and the demand rate are
the calibration knobs and are documented in the README. A configuration file
is a JSON document with two top-level objects::

    {"sim": {<SimConfig fields>}, "heuristics": {<HeuristicParams fields>}}

Missing fields fall back to defaults; unknown fields are an error. The
config hash recorded in every output is a SHA-256 prefix over the canonical
JSON of the *effective* configuration.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from .errors import ConfigError


def _is_multiple(value: float, tick: float) -> bool:
    n = round(value / tick)
    return abs(n * tick - value) < 1e-9


@dataclass(frozen=True)
class SimConfig:
    """Full system layout and timing parameters."""

    n_loops: int = 3
    n_incoming: int = 4
    n_storage: int = 20
    n_outgoing: int = 6
    n_junctions: int = 4
    t_proc_incoming: float = 5.0
    t_proc_storage: float = 10.0
    t_proc_outgoing: float = 6.0
    t_proc_junction: float = 0.5
    buf_incoming: int = 4
    buf_storage: int = 8
    buf_outgoing: int = 10
    n_pallets: int = 500
    tick: float = 0.1
    horizon: float = 3600.0
    # Calibrated kinematics and demand (see README "Calibration").
    slots_per_loop: int = 230
    slot_travel_time: float = 0.5
    demand_rate_per_outgoing: float = 0.13
    initial_inventory_per_storage: int = 10
    # Retrieval staging discipline: a storage holds at most this many claimed
    # empty pallets (queued + in service) at a time.
    retrieval_stage_limit: int = 2

    def validate(self) -> None:
        for name in (
            "n_loops", "n_incoming", "n_storage", "n_outgoing",
            "buf_incoming", "buf_storage", "buf_outgoing",
            "n_pallets", "slots_per_loop",
        ):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if self.n_junctions < 0:
            raise ConfigError(f"n_junctions must be non-negative, got {self.n_junctions}")
        if self.tick <= 0:
            raise ConfigError(f"tick must be positive, got {self.tick}")
        if self.horizon < 0:
            raise ConfigError(f"horizon must be non-negative, got {self.horizon}")
        if self.demand_rate_per_outgoing < 0:
            raise ConfigError("demand_rate_per_outgoing must be non-negative")
        if self.initial_inventory_per_storage < 0:
            raise ConfigError("initial_inventory_per_storage must be non-negative")
        if self.retrieval_stage_limit <= 0:
            raise ConfigError("retrieval_stage_limit must be positive")
        for name in (
            "t_proc_incoming", "t_proc_storage", "t_proc_outgoing",
            "t_proc_junction", "slot_travel_time", "horizon",
        ):
            value = getattr(self, name)
            if value <= 0 and name != "horizon":
                raise ConfigError(f"{name} must be positive, got {value}")
            if not _is_multiple(value, self.tick):
                raise ConfigError(f"{name}={value} is not an integer multiple of tick={self.tick}")
        expected_junctions = 2 * (self.n_loops - 1)
        if self.n_junctions != expected_junctions:
            raise ConfigError(
                f"n_junctions must be 2*(n_loops-1)={expected_junctions} for a "
                f"bidirectional loop chain, got {self.n_junctions}"
            )
        if self.n_pallets > self.n_loops * self.slots_per_loop:
            raise ConfigError(
                f"n_pallets={self.n_pallets} exceeds total belt capacity "
                f"{self.n_loops * self.slots_per_loop}"
            )

    def ticks(self, seconds: float) -> int:
        return round(seconds / self.tick)


def default_loop_cost(n_loops: int, per_hop: float = 0.5) -> dict[tuple[int, int], float]:
    """Distance cost between loops: per_hop times chain hops, zero on the diagonal."""
    return {
        (i, j): per_hop * abs(i - j)
        for i in range(n_loops)
        for j in range(n_loops)
    }


@dataclass(frozen=True)
class HeuristicParams:
    """Thresholds and loop distance costs used by the rule-based policies."""

    c1: int = 6
    c2: int = 12
    c3: int = 6
    loop_cost_per_hop: float = 0.5
    loop_cost: dict[tuple[int, int], float] | None = None

    def cost(self, origin_loop: int, candidate_loop: int) -> float:
        if self.loop_cost is not None:
            return self.loop_cost[(origin_loop, candidate_loop)]
        return self.loop_cost_per_hop * abs(origin_loop - candidate_loop)

    def validate(self, config: SimConfig) -> None:
        if not (0 < self.c1 <= config.buf_storage + 2):
            raise ConfigError(f"c1={self.c1} outside (0, buf_storage+2]")
        if not (0 < self.c3 <= config.buf_storage + 2):
            raise ConfigError(f"c3={self.c3} outside (0, buf_storage+2]")
        if not (0 < self.c2 <= 2 * config.buf_storage):
            raise ConfigError(f"c2={self.c2} outside (0, 2*buf_storage]")
        if self.loop_cost_per_hop < 0:
            raise ConfigError("loop_cost_per_hop must be non-negative")
        if self.loop_cost is not None:
            for i in range(config.n_loops):
                for j in range(config.n_loops):
                    if (i, j) not in self.loop_cost:
                        raise ConfigError(f"loop_cost missing entry ({i}, {j})")
                    if self.loop_cost[(i, j)] < 0:
                        raise ConfigError(f"loop_cost({i},{j}) must be non-negative")
                    if self.loop_cost[(i, j)] != self.loop_cost[(j, i)]:
                        raise ConfigError(f"loop_cost({i},{j}) not symmetric")
                if self.loop_cost[(i, i)] != 0:
                    raise ConfigError(f"loop_cost({i},{i}) must be zero")


def _config_dict(config: SimConfig, params: HeuristicParams) -> dict:
    sim = asdict(config)
    heur = {
        "c1": params.c1,
        "c2": params.c2,
        "c3": params.c3,
        "loop_cost_per_hop": params.loop_cost_per_hop,
    }
    if params.loop_cost is not None:
        heur["loop_cost"] = {f"{i},{j}": v for (i, j), v in sorted(params.loop_cost.items())}
    return {"sim": sim, "heuristics": heur}


def config_hash(config: SimConfig, params: HeuristicParams) -> str:
    """Short provenance hash over the effective configuration."""
    blob = json.dumps(_config_dict(config, params), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def save_config(path: str | Path, config: SimConfig, params: HeuristicParams) -> None:
    Path(path).write_text(json.dumps(_config_dict(config, params), indent=2) + "\n")


def load_config(path: str | Path) -> tuple[SimConfig, HeuristicParams]:
    """Load and validate a configuration file; unknown keys are rejected."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config file must hold a JSON object")
    unknown = set(doc) - {"sim", "heuristics"}
    if unknown:
        raise ConfigError(f"unknown top-level config keys: {sorted(unknown)}")

    sim_doc = doc.get("sim", {})
    sim_fields = {f.name for f in fields(SimConfig)}
    unknown = set(sim_doc) - sim_fields
    if unknown:
        raise ConfigError(f"unknown sim config fields: {sorted(unknown)}")
    config = replace(SimConfig(), **sim_doc)

    heur_doc = dict(doc.get("heuristics", {}))
    loop_cost = None
    if "loop_cost" in heur_doc:
        raw = heur_doc.pop("loop_cost")
        loop_cost = {}
        for key, value in raw.items():
            i, j = (int(p) for p in key.split(","))
            loop_cost[(i, j)] = float(value)
    heur_fields = {"c1", "c2", "c3", "loop_cost_per_hop"}
    unknown = set(heur_doc) - heur_fields
    if unknown:
        raise ConfigError(f"unknown heuristic config fields: {sorted(unknown)}")
    params = replace(HeuristicParams(), loop_cost=loop_cost, **heur_doc)

    config.validate()
    params.validate(config)
    return config, params
