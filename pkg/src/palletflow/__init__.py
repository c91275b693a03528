"""palletflow: multi-loop conveyor dispatching simulator, heuristic and
decision-transformer policies, trajectory datasets, and an evaluation harness."""

from .config import (
    HeuristicParams,
    SimConfig,
    config_hash,
    default_loop_cost,
    load_config,
    save_config,
)
from .errors import (
    ActionError,
    ConfigError,
    DatasetError,
    PalletflowError,
    UsageError,
    WeightFormatError,
)
from .sim import (
    EPISODE_END,
    DispatchEvent,
    EpisodeEnd,
    HeuristicContext,
    Observation,
    Pallet,
    Simulation,
    ThroughputCounter,
    reset,
)
from .topology import Topology, build_topology

__version__ = "0.1.0"

__all__ = [
    "ActionError",
    "ConfigError",
    "DatasetError",
    "DispatchEvent",
    "EPISODE_END",
    "EpisodeEnd",
    "HeuristicContext",
    "HeuristicParams",
    "Observation",
    "Pallet",
    "PalletflowError",
    "SimConfig",
    "Simulation",
    "ThroughputCounter",
    "Topology",
    "UsageError",
    "WeightFormatError",
    "build_topology",
    "config_hash",
    "default_loop_cost",
    "load_config",
    "reset",
    "save_config",
    "__version__",
]
