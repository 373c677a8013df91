"""Executable counterparts of the protocol's correctness lemmas.

Each check consumes a trace (or a constructed configuration set) and
returns a `Verdict`: pass, or the first violating step with a description
and the offending occupancy string.  The checks only ever look at traces
and replays of traces, never at simulator internals.

Asymptotic statements get concrete desk-scale constants, all overridable:
20·n² rounds for the whole gathering, small fixed action budgets for the
O(1) phase-2 lemmas, 3·k actions for the per-round-progress ones.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

from .ring import (
    RingConfig,
    canonical_form,
    classify_symmetry,
    compute_view,
    parse_occupancy,
)
from . import protocol as _protocol
from . import simulate as _simulate
from .protocol import (
    NoRuleError,
    Phase,
    Tag,
    classify_protocol_state,
    decide_targets,
    enabled_moves,
    phase_of,
)
from .simulate import Trace, TraceEvent, builtin_scheduler, run, _canon_of, _tag_of


def _clear_all_caches():
    _protocol.clear_caches()
    _simulate.clear_caches()


@dataclass(frozen=True)
class Violation:
    step: int | None
    description: str
    occ: str | None


@dataclass(frozen=True)
class Verdict:
    passed: bool
    violation: Violation | None = None

    @classmethod
    def ok(cls) -> "Verdict":
        return cls(True)

    @classmethod
    def fail(cls, step, description, occ) -> "Verdict":
        return cls(False, Violation(step, description, occ))

    def __bool__(self) -> bool:
        return self.passed


# ---------------------------------------------------------------------------
# initial configuration enumeration
# ---------------------------------------------------------------------------


def enumerate_initial_configs(n: int, k: int, relaxed: bool = False):
    """Yield one representative per ring-automorphism class of the
    towerless, non-periodic k-robot configurations on an n-ring, as
    canonical `RingConfig`s, in a deterministic order."""
    if not relaxed:
        if k % 2 != 0:
            raise ValueError("k even required")
        if k <= 8:
            raise ValueError("k>8 required")
        if n % 2 != 1:
            raise ValueError("n odd required")
        if n <= k + 3:
            raise ValueError("n>k+3 required")
    if k < 1 or k > n:
        raise ValueError("k must be between 1 and n")
    seen = set()
    # every class has a representative with a robot on node 0
    for rest in itertools.combinations(range(1, n), k - 1):
        cfg = RingConfig.from_positions(n, (0,) + rest)
        canon = canonical_form(cfg)
        if canon in seen:
            continue
        seen.add(canon)
        if classify_symmetry(cfg).periodic:
            continue
        yield RingConfig.from_string(canon)


# ---------------------------------------------------------------------------
# trace replay
# ---------------------------------------------------------------------------


class _Replay:
    """Walk a trace, maintaining the configuration and the pending intents,
    and verify that each recorded canonical occupancy matches."""

    def __init__(self, trace: Trace):
        self.trace = trace
        self.n = trace.n
        self.occ = list(parse_occupancy(trace.initial))
        self.pending: dict[int, tuple[int, object]] = {}  # robot -> (node, target)
        self.moves = 0

    def play(self):
        """Yield (event, mismatch) pairs; mismatch is None or a string."""
        for ev in self.trace.events:
            mismatch = None
            if ev.kind == "activate":
                if ev.robot in self.pending:
                    mismatch = "activate with intent pending"
                else:
                    target = self._decide(ev.from_node)
                    self.pending[ev.robot] = (ev.from_node, target)
                if ev.to_node is not None:
                    mismatch = mismatch or "activate with a target node"
            elif ev.kind == "fire":
                entry = self.pending.pop(ev.robot, None)
                if entry is None:
                    mismatch = "fire without intent"
                else:
                    node, target = entry
                    if ev.to_node is not None:
                        ok = (
                            target == ev.to_node
                            if not isinstance(target, tuple)
                            else ev.to_node in target
                        )
                        if not ok or node != ev.from_node:
                            mismatch = "fired move differs from intent"
                        self.occ[ev.from_node] -= 1
                        self.occ[ev.to_node] += 1
                        self.moves += 1
                    elif target is not None:
                        mismatch = "intent to move fired as stay"
            else:
                mismatch = f"unknown event kind {ev.kind!r}"
            occ = tuple(self.occ)
            if _canon_of(occ, self.n) != ev.occ:
                mismatch = mismatch or "occupancy diverged from recording"
            yield ev, mismatch

    def _decide(self, node):
        try:
            return decide_targets(RingConfig(self.n, tuple(self.occ)), node)
        except NoRuleError:
            return "no-rule"

    def incorrect_pending(self):
        """Robots holding a stale *move* whose fresh decision differs.

        A pending Stay is harmless (firing it changes nothing and the robot
        then re-observes), so only intents with a target destination can be
        outdated with an incorrect target.
        """
        cfg = RingConfig(self.n, tuple(self.occ))
        out = []
        for robot, (node, target) in self.pending.items():
            if target is None:
                continue
            try:
                now = decide_targets(cfg, node)
            except NoRuleError:
                now = "no-rule"
            if _norm(now) != _norm(target):
                out.append(robot)
        return out


def _norm(t):
    return tuple(sorted(t)) if isinstance(t, tuple) else t


def replay_trace(trace: Trace) -> Verdict:
    """Re-execute a trace and confirm every recorded occupancy string."""
    replay = _Replay(trace)
    for ev, mismatch in replay.play():
        if mismatch:
            return Verdict.fail(ev.step, mismatch, ev.occ)
    return Verdict.ok()


# ---------------------------------------------------------------------------
# lemma checks on traces
# ---------------------------------------------------------------------------

_P3_ENTRY = {Tag.TERMINAL_SKEW.value, Tag.TARGET.value}


def check_no_tower_before_target(trace: Trace) -> Verdict:
    """No tower may appear strictly before the first TerminalSkew or Target
    state: Phases 1 and 2 only ever move robots onto empty nodes."""
    for ev in trace.events:
        if ev.tag in _P3_ENTRY:
            return Verdict.ok()
        if any(ch not in ".1" for ch in ev.occ):
            return Verdict.fail(ev.step, "tower before Phase 3", ev.occ)
    return Verdict.ok()


def check_never_periodic(trace: Trace) -> Verdict:
    """No towerless configuration along the trace is periodic."""
    checked = set()
    for ev in trace.events:
        if ev.occ in checked:
            continue
        checked.add(ev.occ)
        cfg = RingConfig.from_string(ev.occ)
        if cfg.towerless and cfg.k and classify_symmetry(cfg).periodic:
            return Verdict.fail(ev.step, "periodic configuration reached", ev.occ)
    return Verdict.ok()


def check_outdated_bound(trace: Trace) -> Verdict:
    """During Phases 1 and 2 at most one pending intent may disagree with a
    fresh decision (at most one outdated robot with an incorrect target)."""
    replay = _Replay(trace)
    for ev, mismatch in replay.play():
        if mismatch:
            return Verdict.fail(ev.step, f"replay failed: {mismatch}", ev.occ)
        try:
            phase = phase_of(Tag(ev.tag))
        except ValueError:
            return Verdict.fail(ev.step, "unknown state reached", ev.occ)
        if phase in (Phase.PHASE1, Phase.PHASE2):
            bad = replay.incorrect_pending()
            if len(bad) > 1:
                return Verdict.fail(
                    ev.step,
                    f"{len(bad)} outdated robots with incorrect targets",
                    ev.occ,
                )
    return Verdict.ok()


def check_round_bound(trace: Trace, c: int = 20) -> Verdict:
    """The run must gather within c·n² asynchronous rounds."""
    if trace.outcome != "Gathered":
        return Verdict.fail(None, f"outcome {trace.outcome}, not Gathered", None)
    bound = c * trace.n * trace.n
    if trace.rounds > bound:
        return Verdict.fail(None, f"{trace.rounds} rounds > {bound}", None)
    return Verdict.ok()


def check_phase_monotonic(trace: Trace) -> Verdict:
    """Once a trace reaches Phase 3 it never returns to Phase 1 or 2."""
    reached_p3 = False
    for ev in trace.events:
        try:
            phase = phase_of(Tag(ev.tag))
        except ValueError:
            return Verdict.fail(ev.step, "unknown state reached", ev.occ)
        if phase in (Phase.PHASE3, Phase.DONE):
            reached_p3 = True
        elif reached_p3:
            return Verdict.fail(ev.step, f"fell back to {ev.tag}", ev.occ)
    return Verdict.ok()


def check_local_global_consistency(trace: Trace) -> Verdict:
    """On every configuration of the trace, the per-view decision must
    match the global rule for every robot."""
    seen = set()
    for ev in [_initial_event(trace)] + trace.events:
        occ = ev.occ
        if occ in seen:
            continue
        seen.add(occ)
        cfg = RingConfig.from_string(occ)
        tag = classify_protocol_state(cfg).tag
        if tag is Tag.UNKNOWN:
            return Verdict.fail(ev.step, "unknown state reached", occ)
        if tag is Tag.GATHERED:
            continue
        try:
            intents = {m.robot_node: frozenset(m.targets) for m in enabled_moves(cfg)}
        except NoRuleError:
            return Verdict.fail(ev.step, "no rule for visited state", occ)
        for node in cfg.occupied:
            local = decide_targets(cfg, node)
            if local is None:
                got = None
            elif isinstance(local, tuple):
                got = frozenset(local)
            else:
                got = frozenset((local,))
            want = None if cfg.occ[node] >= 2 else intents.get(node)
            if got != want:
                return Verdict.fail(
                    ev.step,
                    f"robot at {node}: local {local!r} vs global {want!r}",
                    occ,
                )
    return Verdict.ok()


def _initial_event(trace: Trace):
    cfg = RingConfig.from_string(trace.initial)
    occ = canonical_form(cfg)
    tag = classify_protocol_state(cfg).tag.value
    return TraceEvent(0, "initial", -1, -1, None, occ, tag, 0)


# ---------------------------------------------------------------------------
# bounded exhaustive exploration (the "exhaustive scheduler")
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _XState:
    occ: tuple[int, ...]
    pending: frozenset  # of (node, normalized target)


def _xstate(cfg: RingConfig) -> _XState:
    return _XState(cfg.occ, frozenset())


def _successors(n: int, state: _XState):
    """All (action-label, next-state) pairs under enabled activations and
    pending fires.  Activating a robot whose decision is Stay never changes
    any configuration, so those actions are omitted; every reachable
    configuration sequence is preserved."""
    cfg = RingConfig(n, state.occ)
    pending_nodes = {node for node, _ in state.pending}
    out = []
    tag = classify_protocol_state(cfg).tag
    if tag not in (Tag.GATHERED, Tag.UNKNOWN):
        for intent in sorted(enabled_moves(cfg), key=lambda m: m.robot_node):
            node = intent.robot_node
            if node in pending_nodes:
                continue
            new_pending = state.pending | {(node, intent.targets)}
            out.append((("activate", node), _XState(state.occ, new_pending)))
    for node, targets in sorted(state.pending):
        rest = state.pending - {(node, targets)}
        for t in targets:
            occ = list(state.occ)
            occ[node] -= 1
            occ[t] += 1
            out.append((("fire", node, t), _XState(tuple(occ), rest)))
    return out


def explore(cfg: RingConfig, depth: int):
    """Breadth-first enumeration of the action tree to the given depth.
    Returns {depth: set of _XState} for every level."""
    levels = {0: {_xstate(cfg)}}
    frontier = levels[0]
    seen = dict.fromkeys(frontier, 0)
    for d in range(1, depth + 1):
        nxt = set()
        for st in frontier:
            for _label, succ in _successors(cfg.n, st):
                if succ not in seen:
                    seen[succ] = d
                    nxt.add(succ)
        levels[d] = nxt
        frontier = nxt
        if not frontier:
            break
    return levels


def successor_configs(cfg: RingConfig, depth: int = 1):
    """Distinct configurations reachable within `depth` actions."""
    out = set()
    for states in explore(cfg, depth).values():
        for st in states:
            out.add(st.occ)
    return {RingConfig(cfg.n, occ) for occ in out}


def check_all_paths_gather(cfg: RingConfig, max_states: int = 200_000) -> Verdict:
    """Explore EVERY scheduler choice from `cfg` and demand that each
    branch ends gathered.  Every explored action moves a robot eventually
    (stale Stay cycles never change configurations and are omitted), so the
    search is finite; a branch that reaches a state with no applicable rule
    fails, as does exceeding the state budget."""
    n = cfg.n
    proven: set[_XState] = set()
    failure: list[Verdict] = []

    def gathered(state: _XState) -> bool:
        return sum(1 for c in state.occ if c) == 1

    def walk(state: _XState) -> bool:
        if state in proven:
            return True
        if gathered(state):
            proven.add(state)
            return True
        if len(proven) >= max_states:
            failure.append(
                Verdict.fail(None, f"state budget {max_states} exceeded", None)
            )
            return False
        try:
            succs = _successors(n, state)
        except NoRuleError:
            succs = []
        if not succs:
            failure.append(
                Verdict.fail(
                    None,
                    "branch ends without gathering",
                    RingConfig(n, state.occ).to_string(),
                )
            )
            return False
        for _label, nxt in succs:
            if not walk(nxt):
                return False
        proven.add(state)
        return True

    import sys

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 20_000))
    try:
        ok = walk(_xstate(cfg))
    finally:
        sys.setrecursionlimit(old_limit)
    if ok:
        return Verdict.ok()
    return failure[0]


# ---------------------------------------------------------------------------
# phase-2 transition conformance
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransitionSpec:
    targets: frozenset[Tag]
    allowed: frozenset[Tag]
    depth: int


def _transition_table(k: int) -> dict[Tag, TransitionSpec]:
    short = 8  # covers two full waves of a two-robot rule: the O(1) lemmas
    long = 3 * k  # per-round-progress lemmas: O(k) rounds
    t = lambda targets, allowed, depth: TransitionSpec(
        frozenset(targets), frozenset(allowed), depth
    )
    return {
        Tag.START: t({Tag.SPLIT_S}, {Tag.START, Tag.EVEN_T}, short),
        Tag.EVEN_T: t({Tag.SPLIT_S}, {Tag.EVEN_T}, short),
        Tag.SPLIT_S: t(
            {Tag.START, Tag.TERMINAL},
            {Tag.SPLIT_S, Tag.SPLIT_A, Tag.ODD_T},
            long,
        ),
        Tag.SPLIT_A: t({Tag.SPLIT_S}, {Tag.SPLIT_A}, short),
        Tag.ODD_T: t({Tag.START, Tag.TERMINAL}, {Tag.ODD_T}, short),
        Tag.BLOCK: t({Tag.TRI_BLOCK_S}, {Tag.BLOCK, Tag.BIBLOCK}, short),
        Tag.BIBLOCK: t({Tag.TRI_BLOCK_S}, {Tag.BIBLOCK}, short),
        # a TriBlockS middle of size 2 firing one border leaves the
        # (k/2, 1, k/2-1) shape, which the definitions class as OddT; its
        # rule performs the same catching-up move as TriBlockA's
        Tag.TRI_BLOCK_S: t(
            {Tag.START}, {Tag.TRI_BLOCK_S, Tag.TRI_BLOCK_A, Tag.ODD_T}, long
        ),
        Tag.TRI_BLOCK_A: t({Tag.START, Tag.TRI_BLOCK_S}, {Tag.TRI_BLOCK_A}, short),
        Tag.TERMINAL: t({Tag.TARGET}, {Tag.TERMINAL, Tag.TERMINAL_SKEW}, short),
    }


def check_phase2_transitions(type_instances, depth_override: int | None = None) -> Verdict:
    """For each constructed instance, explore every depth-bounded scheduler
    choice and demand that all paths reach the lemma's successor set while
    visiting only its allowed intermediate states.

    On arrival from Start the leader hole must have shrunk by two; on
    arrival from SplitS the slave hole must have grown by two.
    """
    instances = dict(type_instances)
    for tag, cfg in instances.items():
        tag = Tag(tag)
        actual = classify_protocol_state(cfg).tag
        if actual is not tag:
            return Verdict.fail(
                None, f"instance mislabeled: {tag.value} classifies {actual.value}",
                cfg.to_string(),
            )
        spec = _transition_table(cfg.k).get(tag)
        if spec is None:
            if tag is Tag.GATHERED:
                continue
            return Verdict.fail(None, f"no transition spec for {tag.value}", cfg.to_string())
        depth = depth_override or spec.depth
        verdict = _check_one_transition(cfg, tag, spec, depth)
        if not verdict.passed:
            return verdict
    return Verdict.ok()


def _arrival_ok(tag: Tag, start_cfg: RingConfig, arrival: RingConfig) -> str | None:
    if tag is Tag.START:
        before = classify_symmetry(start_cfg).leader_hole
        after = classify_symmetry(arrival).leader_hole
        if before and after and after.size != before.size - 2:
            return f"leader hole {before.size} -> {after.size}, expected -2"
    if tag is Tag.SPLIT_S:
        before = classify_symmetry(start_cfg).slave_hole
        after = classify_symmetry(arrival).slave_hole
        if before and after and after.size != before.size + 2:
            return f"slave hole {before.size} -> {after.size}, expected +2"
    return None


def _check_one_transition(cfg, tag, spec, depth) -> Verdict:
    n = cfg.n
    start = _xstate(cfg)
    # memo: states already proven to reach the target set within the budget
    proven: dict[_XState, int] = {}

    def walk(state: _XState, budget: int, depth_used: int):
        st_tag = Tag(_tag_of(state.occ, n))
        if st_tag in spec.targets:
            arrival = RingConfig(n, state.occ)
            problem = _arrival_ok(tag, cfg, arrival)
            if problem:
                return Verdict.fail(depth_used, problem, arrival.to_string())
            return Verdict.ok()
        if st_tag not in spec.allowed:
            return Verdict.fail(
                depth_used,
                f"{tag.value}: reached {st_tag.value}, outside allowed set",
                RingConfig(n, state.occ).to_string(),
            )
        if budget == 0:
            return Verdict.fail(
                depth_used,
                f"{tag.value}: target set not reached within {depth} actions",
                RingConfig(n, state.occ).to_string(),
            )
        if proven.get(state, -1) >= budget:
            return Verdict.ok()
        succs = _successors(n, state)
        if not succs:
            return Verdict.fail(
                depth_used, f"{tag.value}: dead end", RingConfig(n, state.occ).to_string()
            )
        for _label, nxt in succs:
            v = walk(nxt, budget - 1, depth_used + 1)
            if not v.passed:
                return v
        proven[state] = budget
        return Verdict.ok()

    return walk(start, depth, 0)


# ---------------------------------------------------------------------------
# instance builders for the nine special Phase-2 types and Terminal
# ---------------------------------------------------------------------------


def _cfg_from_layout(n: int, pieces) -> RingConfig:
    """Build a configuration from alternating (robots, hole) run lengths,
    starting at node 0 with a robot run."""
    occ = [0] * n
    pos = 0
    for robots, hole in pieces:
        for _ in range(robots):
            occ[pos % n] = 1
            pos += 1
        pos += hole
    if pos % n != 0:
        raise ValueError(f"layout covers {pos} of {n} nodes")
    return RingConfig(n, tuple(occ))


def _one_move(cfg: RingConfig, pick=min) -> RingConfig:
    """Apply one enabled move (the scheduler activates a single robot)."""
    intents = sorted(enabled_moves(cfg), key=lambda m: m.robot_node)
    if not intents:
        raise ValueError("no enabled move")
    chosen = pick(intents, key=lambda m: m.robot_node)
    occ = list(cfg.occ)
    occ[chosen.robot_node] -= 1
    occ[sorted(chosen.targets)[0]] += 1
    return RingConfig(cfg.n, tuple(occ))


def build_phase2_instances(n: int, k: int) -> dict[Tag, RingConfig]:
    """One instance of each special Phase-2 type plus Terminal at (n, k).
    Skewed types are derived from their symmetric siblings by letting a
    single robot move, exactly as an asynchronous scheduler would."""
    if k % 2 or k <= 8 or n % 2 == 0 or n <= k + 3:
        raise ValueError("instances need k even > 8 and n odd > k+3")
    spare = n - k  # total empty nodes, odd
    half = k // 2
    out: dict[Tag, RingConfig] = {}

    out[Tag.BLOCK] = _cfg_from_layout(n, [(k, spare)])
    out[Tag.BIBLOCK] = _one_move(out[Tag.BLOCK])
    out[Tag.TRI_BLOCK_S] = _cfg_from_layout(n, [(1, 1), (k - 2, 1), (1, spare - 2)])
    out[Tag.TRI_BLOCK_A] = _one_move(out[Tag.TRI_BLOCK_S])
    out[Tag.START] = _cfg_from_layout(n, [(half, 3), (half, spare - 3)])
    out[Tag.EVEN_T] = _one_move(out[Tag.START])
    # SplitS with slave blocks of size 2 and a leader hole of size 1
    out[Tag.SPLIT_S] = _cfg_from_layout(
        n, [(half - 2, 1), (2, spare - 3), (2, 1), (half - 2, 1)]
    )
    out[Tag.SPLIT_A] = _one_move(out[Tag.SPLIT_S])
    # singleton slave blocks: firing one of them yields OddT
    split_s_thin = _cfg_from_layout(
        n, [(half - 1, 1), (1, spare - 3), (1, 1), (half - 1, 1)]
    )
    out[Tag.ODD_T] = _one_move(split_s_thin)
    out[Tag.TERMINAL] = _cfg_from_layout(n, [(half, 1), (half, spare - 1)])
    return out


# ---------------------------------------------------------------------------
# view lemma sweep
# ---------------------------------------------------------------------------


def check_lemma1_views(n_max: int = 11) -> Verdict:
    """Exhaustively over towerless configurations with n <= n_max: rigid
    ones give pairwise distinct views; symmetric non-periodic ones share
    each view between at most two robots and report exactly one axis."""
    for n in range(1, n_max + 1):
        for bits in range(1, 1 << n):
            occ = tuple((bits >> i) & 1 for i in range(n))
            cfg = RingConfig(n, occ)
            info = classify_symmetry(cfg)
            if info.periodic:
                continue
            views = {}
            for v in cfg.occupied:
                views.setdefault(compute_view(cfg, v).dists, []).append(v)
            if info.rigid:
                if any(len(nodes) > 1 for nodes in views.values()):
                    return Verdict.fail(None, "rigid with duplicate views", cfg.to_string())
            else:
                if any(len(nodes) > 2 for nodes in views.values()):
                    return Verdict.fail(
                        None, "symmetric view shared by >2 robots", cfg.to_string()
                    )
                if info.axis_node is None and n % 2 == 1:
                    return Verdict.fail(None, "symmetric without axis", cfg.to_string())
    return Verdict.ok()


# ---------------------------------------------------------------------------
# verification driver
# ---------------------------------------------------------------------------


@dataclass
class CheckStats:
    passed: int = 0
    failed: int = 0
    first_failure: dict | None = None

    def record(self, verdict: Verdict, context: dict):
        if verdict.passed:
            self.passed += 1
        else:
            self.failed += 1
            if self.first_failure is None:
                v = verdict.violation
                self.first_failure = dict(
                    context,
                    step=v.step if v else None,
                    description=v.description if v else "",
                    occ=v.occ if v else None,
                )


TRACE_CHECKS = {
    "no_tower_before_target": check_no_tower_before_target,
    "never_periodic": check_never_periodic,
    "outdated_bound": check_outdated_bound,
    "phase_monotonic": check_phase_monotonic,
    "replay": replay_trace,
}


def verify_one_start(initial: RingConfig, random_seeds: int, lazy_seeds: int, c: int,
                     max_steps: int, consistency: bool = True):
    """Run one initial configuration under the full scheduler battery and
    apply every trace check; returns a list of (context, name, Verdict)."""
    results: list[tuple[dict, str, Verdict]] = []
    schedules: list[tuple[str, int | None]] = [("synchronous", None)]
    schedules += [("random", s) for s in range(random_seeds)]
    schedules += [("lazy", s) for s in range(lazy_seeds)]
    for name, seed in schedules:
        trace = run(initial, builtin_scheduler(name, seed), max_steps=max_steps)
        context = {
            "initial": initial.to_string(),
            "scheduler": name,
            "seed": seed,
        }
        results.append((context, "round_bound", check_round_bound(trace, c)))
        for cname, fn in TRACE_CHECKS.items():
            results.append((context, cname, fn(trace)))
        if consistency and name == "synchronous":
            results.append(
                (context, "local_global_consistency", check_local_global_consistency(trace))
            )
    return results


def run_verification(
    grids=((15, 10), (17, 10)),
    random_seeds: int = 50,
    lazy_seeds: int = 10,
    c: int = 20,
    transition_ns=(15, 17, 21),
    transition_k: int = 10,
    lemma1_n_max: int = 11,
    max_steps: int = 400_000,
    jobs: int | None = None,
) -> dict:
    """The full verification battery; returns the report as a dict ready
    for JSON serialization.  `jobs` > 1 fans configurations out to a
    process pool."""
    t0 = time.monotonic()
    stats: dict[str, CheckStats] = {}
    runs = 0

    def record(name, verdict, context):
        stats.setdefault(name, CheckStats()).record(verdict, context)

    for n, k in grids:
        starts = list(enumerate_initial_configs(n, k))
        record(
            "enumeration_nonempty",
            Verdict.ok() if starts else Verdict.fail(None, "no initial configs", None),
            {"n": n, "k": k},
        )
        if jobs and jobs > 1:
            import concurrent.futures as cf

            with cf.ProcessPoolExecutor(max_workers=jobs) as pool:
                futures = [
                    pool.submit(
                        verify_one_start, cfg, random_seeds, lazy_seeds, c, max_steps
                    )
                    for cfg in starts
                ]
                for fut in futures:
                    for context, name, verdict in fut.result():
                        record(name, verdict, context)
                        runs += 1
        else:
            for cfg in starts:
                for context, name, verdict in verify_one_start(
                    cfg, random_seeds, lazy_seeds, c, max_steps
                ):
                    record(name, verdict, context)
                    runs += 1
        _clear_all_caches()

    for n in transition_ns:
        instances = build_phase2_instances(n, transition_k)
        record(
            "phase2_transitions",
            check_phase2_transitions(instances),
            {"n": n, "k": transition_k},
        )

    record("lemma1_views", check_lemma1_views(lemma1_n_max), {"n_max": lemma1_n_max})

    elapsed = time.monotonic() - t0
    report = {
        "passed": all(s.failed == 0 for s in stats.values()),
        "checks": {
            name: {
                "passed": s.passed,
                "failed": s.failed,
                "first_counterexample": s.first_failure,
            }
            for name, s in sorted(stats.items())
        },
        "stats": {"wall_seconds": round(elapsed, 3), "check_results": runs},
    }
    return report
