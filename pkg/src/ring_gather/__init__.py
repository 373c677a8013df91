"""Gathering an even number of anonymous robots on an odd ring: rule
engine, CORDA simulator, and lemma checkers."""

from .ring import (
    BlockDecomposition,
    DBlock,
    Hole,
    RingConfig,
    Segment,
    SymmetryInfo,
    View,
    canonical_form,
    classify_symmetry,
    compute_view,
    decompose_blocks,
    format_occupancy,
    holes,
    inter_distance,
    occupied_runs,
    parse_occupancy,
)
from .protocol import (
    Decision,
    MoveIntent,
    NoRuleError,
    Phase,
    ProtocolState,
    Tag,
    classify_protocol_state,
    enabled_moves,
    local_decide,
    phase_of,
)
from .simulate import (
    InvalidStartError,
    PendingIntent,
    Scheduler,
    SchedulerAction,
    SimState,
    Trace,
    TraceEvent,
    builtin_scheduler,
    read_trace,
    run,
    step,
    write_trace,
)
from .checker import (
    Verdict,
    build_phase2_instances,
    check_all_paths_gather,
    check_lemma1_views,
    check_never_periodic,
    check_no_tower_before_target,
    check_outdated_bound,
    check_phase2_transitions,
    check_phase_monotonic,
    check_round_bound,
    enumerate_initial_configs,
    explore,
    replay_trace,
    run_verification,
    successor_configs,
)

__all__ = [
    "BlockDecomposition",
    "DBlock",
    "Decision",
    "Hole",
    "InvalidStartError",
    "MoveIntent",
    "NoRuleError",
    "PendingIntent",
    "Phase",
    "ProtocolState",
    "RingConfig",
    "Scheduler",
    "SchedulerAction",
    "Segment",
    "SimState",
    "SymmetryInfo",
    "Tag",
    "Trace",
    "TraceEvent",
    "Verdict",
    "View",
    "build_phase2_instances",
    "builtin_scheduler",
    "canonical_form",
    "check_all_paths_gather",
    "check_lemma1_views",
    "check_never_periodic",
    "check_no_tower_before_target",
    "check_outdated_bound",
    "check_phase2_transitions",
    "check_phase_monotonic",
    "check_round_bound",
    "classify_protocol_state",
    "classify_symmetry",
    "compute_view",
    "decompose_blocks",
    "enabled_moves",
    "enumerate_initial_configs",
    "explore",
    "format_occupancy",
    "holes",
    "inter_distance",
    "local_decide",
    "occupied_runs",
    "parse_occupancy",
    "phase_of",
    "read_trace",
    "replay_trace",
    "run",
    "run_verification",
    "step",
    "successor_configs",
    "write_trace",
]

__version__ = "0.1.0"
