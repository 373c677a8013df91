"""Geometry of robot configurations on an anonymous ring.

A configuration is an occupancy vector over the n nodes of an unoriented
ring: ``occ[i]`` robots stand on node ``i``, indices mod n.  Nodes carry no
labels as far as the robots are concerned; everything a robot may base a
decision on is derived from distances between occupied nodes.

This module is purely geometric and protocol-agnostic.  It provides:

* occupancy-string encoding ('.' = empty, digits/letters = robot count),
* segments, holes and maximal runs of occupied nodes,
* robot views (direction-maximal distance sequences plus a local tower flag),
* rigid / symmetric / periodic classification with axis and leader/slave
  hole reporting,
* inter-distance and d.block decomposition,
* a canonical form under the 2n ring automorphisms, used as a dedup key.

All functions are pure; `RingConfig` and the derived records are immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

# Occupancy-string alphabet, indexed by robot count.  The protocol grid uses
# k = 10, whose gathered state needs a count above 9, so counts 10..35 render
# as lowercase letters.  Counts above 35 have no encoding and are rejected.
_COUNT_CHARS = ".123456789abcdefghijklmnopqrstuvwxyz"
_CHAR_TO_COUNT = {ch: i for i, ch in enumerate(_COUNT_CHARS)}


def format_occupancy(occ) -> str:
    """Render an occupancy sequence as one character per node."""
    try:
        return "".join(_COUNT_CHARS[c] for c in occ)
    except IndexError:
        raise ValueError("unsupported occupancy count (max 35)") from None


def parse_occupancy(text: str) -> tuple[int, ...]:
    """Inverse of :func:`format_occupancy`."""
    try:
        return tuple(_CHAR_TO_COUNT[ch] for ch in text)
    except KeyError as exc:
        raise ValueError(f"bad occupancy character {exc.args[0]!r}") from None


@dataclass(frozen=True)
class RingConfig:
    """Occupancy of an n-node ring: ``occ[i]`` robots on node i."""

    n: int
    occ: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("ring needs at least one node")
        if len(self.occ) != self.n:
            raise ValueError("occupancy length differs from node count")
        if any(c < 0 for c in self.occ):
            raise ValueError("negative robot count")
        if not isinstance(self.occ, tuple):
            object.__setattr__(self, "occ", tuple(self.occ))

    @classmethod
    def from_positions(cls, n: int, positions) -> "RingConfig":
        occ = [0] * n
        for p in positions:
            occ[p % n] += 1
        return cls(n, tuple(occ))

    @classmethod
    def from_string(cls, text: str) -> "RingConfig":
        occ = parse_occupancy(text)
        return cls(len(occ), occ)

    @cached_property
    def k(self) -> int:
        """Total robot count."""
        return sum(self.occ)

    @cached_property
    def occupied(self) -> tuple[int, ...]:
        """Occupied node indices, ascending."""
        return tuple(i for i, c in enumerate(self.occ) if c)

    @property
    def towerless(self) -> bool:
        return all(c <= 1 for c in self.occ)

    @cached_property
    def towers(self) -> tuple[int, ...]:
        """Nodes hosting two or more robots."""
        return tuple(i for i, c in enumerate(self.occ) if c >= 2)

    def to_string(self) -> str:
        return format_occupancy(self.occ)

    def __str__(self) -> str:
        return self.to_string()


@dataclass(frozen=True)
class Segment:
    """Path between two occupied nodes whose interior is empty."""

    from_node: int
    to_node: int
    distance: int  # number of edges


@dataclass(frozen=True)
class Hole:
    """Maximal run of consecutive empty nodes."""

    start: int
    size: int

    def nodes(self, n: int) -> tuple[int, ...]:
        return tuple((self.start + i) % n for i in range(self.size))

    def contains(self, node: int, n: int) -> bool:
        return (node - self.start) % n < self.size


@dataclass(frozen=True)
class View:
    """What a robot perceives: the direction-maximal sequence of segment
    distances read from its own node, and whether its own node is a tower.

    ``dists`` sums to n and has one entry per occupied node.  Reading the
    ring the other way gives ``reversed(dists)``; the view keeps the
    lexicographically larger of the two readings.
    """

    dists: tuple[int, ...]
    tower_here: bool

    @property
    def symmetric(self) -> bool:
        """True when both directions read identically from this node."""
        return self.dists == self.dists[::-1]


@dataclass(frozen=True)
class SymmetryInfo:
    """Automorphism classification of a configuration.

    ``cfg_class`` is ``"periodic"`` when a nontrivial rotation fixes the
    occupancy, ``"symmetric"`` when it is non-periodic and a reflection
    fixes it (then exactly one does), and ``"rigid"`` otherwise.

    For symmetric configurations on an odd ring the single axis passes
    through one node (``axis_node``) and one edge (``axis_edge``).  When the
    axis node is empty, ``leader_hole`` is the hole containing it; when both
    axis-edge endpoints are empty, ``slave_hole`` is the hole containing
    them.  Either hole may be absent (the axis may cross a d.block).
    """

    cfg_class: str
    axis_node: int | None = None
    axis_edge: tuple[int, int] | None = None
    leader_hole: Hole | None = None
    slave_hole: Hole | None = None

    @property
    def rigid(self) -> bool:
        return self.cfg_class == "rigid"

    @property
    def symmetric(self) -> bool:
        return self.cfg_class == "symmetric"

    @property
    def periodic(self) -> bool:
        return self.cfg_class == "periodic"


@dataclass(frozen=True)
class DBlock:
    """Maximal run of robots spaced exactly ``step`` edges apart."""

    start: int
    size: int
    step: int

    def nodes(self, n: int) -> tuple[int, ...]:
        return tuple((self.start + i * self.step) % n for i in range(self.size))

    def borders(self, n: int) -> tuple[int, int]:
        return (self.start, (self.start + (self.size - 1) * self.step) % n)

    def span(self) -> int:
        """Edges covered from first to last robot."""
        return (self.size - 1) * self.step


@dataclass(frozen=True)
class BlockDecomposition:
    """d.block structure of a towerless configuration."""

    d: int
    blocks: tuple[DBlock, ...]
    isolated: tuple[int, ...]
    holes: tuple[Hole, ...]


def _runs_of(indices: tuple[int, ...], n: int) -> list[tuple[int, int]]:
    """Group sorted node indices into maximal circular runs of consecutive
    nodes; returns (start, length) pairs in ascending start order."""
    if not indices:
        return []
    if len(indices) == n:
        return [(0, n)]
    runs = []
    start = prev = indices[0]
    for v in indices[1:]:
        if v == prev + 1:
            prev = v
        else:
            runs.append((start, prev - start + 1))
            start = prev = v
    runs.append((start, prev - start + 1))
    # merge across the wrap
    if len(runs) > 1 and indices[0] == 0 and indices[-1] == n - 1:
        first = runs.pop(0)
        s, size = runs.pop()
        runs.append((s, size + first[1]))
        runs.sort()
    return runs


def occupied_runs(cfg: RingConfig) -> list[tuple[int, int]]:
    """Maximal runs of consecutive occupied nodes as (start, size) pairs.

    These are the 1.blocks of the configuration, with single robots counted
    as runs of size 1.
    """
    return _runs_of(cfg.occupied, cfg.n)


def holes(cfg: RingConfig) -> tuple[Hole, ...]:
    """All maximal runs of empty nodes."""
    empty = tuple(i for i, c in enumerate(cfg.occ) if c == 0)
    return tuple(Hole(s, sz) for s, sz in _runs_of(empty, cfg.n))


def hole_at(cfg: RingConfig, node: int) -> Hole:
    """The hole containing an empty node."""
    if cfg.occ[node % cfg.n]:
        raise ValueError(f"node {node} is occupied")
    n = cfg.n
    start = node % n
    while cfg.occ[(start - 1) % n] == 0:
        start = (start - 1) % n
        if start == node % n:  # fully empty ring
            return Hole(0, n)
    size = 1
    while cfg.occ[(start + size) % n] == 0:
        size += 1
    return Hole(start, size)


def segments(cfg: RingConfig) -> tuple[Segment, ...]:
    """Segments between consecutive occupied nodes, clockwise."""
    occ_nodes = cfg.occupied
    if len(occ_nodes) < 2:
        raise ValueError("segments need at least 2 occupied nodes")
    n = cfg.n
    out = []
    for i, u in enumerate(occ_nodes):
        v = occ_nodes[(i + 1) % len(occ_nodes)]
        out.append(Segment(u, v, (v - u) % n))
    return tuple(out)


def compute_view(cfg: RingConfig, node: int) -> View:
    """The view of a robot standing on ``node``.

    The clockwise reading lists the distances to successive occupied nodes
    starting from the observer; the counter-clockwise reading is its
    reverse.  The view keeps the lexicographic maximum of the two.
    """
    node %= cfg.n
    if cfg.occ[node] == 0:
        raise ValueError(f"no robot at node {node}")
    cw = _cw_reading(cfg, node)
    return View(max(cw, cw[::-1]), cfg.occ[node] >= 2)


def _cw_reading(cfg: RingConfig, node: int) -> tuple[int, ...]:
    occ_nodes = cfg.occupied
    n = cfg.n
    if len(occ_nodes) == 1:
        return (n,)
    i = occ_nodes.index(node)
    ordered = occ_nodes[i:] + occ_nodes[:i]
    return tuple(
        (ordered[(j + 1) % len(ordered)] - ordered[j]) % n for j in range(len(ordered))
    )


def view_direction(cfg: RingConfig, node: int) -> int:
    """Which ring direction the view's reading follows: +1 when the
    clockwise reading is the lexicographic maximum, -1 otherwise.  Ties
    (palindromic views) report +1; both directions are then equivalent."""
    cw = _cw_reading(cfg, node % cfg.n)
    return 1 if cw >= cw[::-1] else -1


def rotations_fixing(occ: tuple[int, ...]) -> list[int]:
    """Nontrivial rotation amounts r with occ[(i+r) % n] == occ[i] for all i."""
    n = len(occ)
    doubled = occ + occ
    return [r for r in range(1, n) if doubled[r : r + n] == occ]


def reflections_fixing(occ: tuple[int, ...]) -> list[int]:
    """Reflection parameters c (i -> c - i mod n) fixing the occupancy."""
    n = len(occ)
    return [c for c in range(n) if all(occ[(c - i) % n] == occ[i] for i in range(n))]


def classify_symmetry(cfg: RingConfig) -> SymmetryInfo:
    """Classify a nonempty configuration as periodic, symmetric or rigid.

    On an odd ring, a symmetric non-periodic configuration has exactly one
    axis, passing through one node and one edge; the axis node, axis edge
    and (when they sit in holes) the leader and slave holes are reported.
    """
    if cfg.k == 0:
        raise ValueError("symmetry undefined for empty configuration")
    occ = cfg.occ
    n = cfg.n
    if rotations_fixing(occ):
        return SymmetryInfo("periodic")
    refl = reflections_fixing(occ)
    if not refl:
        return SymmetryInfo("rigid")
    # non-periodic with >1 reflection would imply a fixing rotation
    c = refl[0]
    if n % 2 == 0:
        return SymmetryInfo("symmetric")
    inv2 = (n + 1) // 2
    axis_node = (c * inv2) % n
    x = ((c - 1) * inv2) % n
    axis_edge = (x, (x + 1) % n)
    leader = hole_at(cfg, axis_node) if occ[axis_node] == 0 else None
    slave = None
    if occ[x] == 0 and occ[(x + 1) % n] == 0:
        slave = hole_at(cfg, x)
    return SymmetryInfo("symmetric", axis_node, axis_edge, leader, slave)


def reflect_node(node: int, c: int, n: int) -> int:
    """Image of a node under the reflection i -> c - i mod n."""
    return (c - node) % n


def axis_reflection_param(info: SymmetryInfo, n: int) -> int:
    """Recover the reflection parameter c from a reported axis node."""
    if info.axis_node is None:
        raise ValueError("no axis reported")
    return (2 * info.axis_node) % n


def inter_distance(cfg: RingConfig) -> int:
    """Minimum distance between distinct robots (edges along the ring)."""
    occ_nodes = cfg.occupied
    if len(occ_nodes) < 2:
        if cfg.k >= 2:
            return 0  # two robots on one node
        raise ValueError("inter-distance undefined")
    n = cfg.n
    return min(
        (occ_nodes[(i + 1) % len(occ_nodes)] - occ_nodes[i]) % n
        for i in range(len(occ_nodes))
    )


def decompose_blocks(cfg: RingConfig) -> BlockDecomposition:
    """Split a towerless configuration into maximal d.blocks, isolated
    robots, and holes, where d is the inter-distance.

    A d.block is a maximal run of robots spaced exactly d apart and has at
    least two robots; robots in no d.block are isolated.
    """
    if not cfg.towerless:
        raise ValueError("decomposition on tower configuration")
    occ_nodes = cfg.occupied
    if len(occ_nodes) < 2:
        raise ValueError("decomposition needs at least 2 robots")
    d = inter_distance(cfg)
    n = cfg.n
    w = len(occ_nodes)
    gaps = [(occ_nodes[(i + 1) % w] - occ_nodes[i]) % n for i in range(w)]
    if all(g == d for g in gaps):
        # robots evenly spaced around the whole ring (periodic); report one
        # block so the decomposition stays a partition
        blocks = (DBlock(occ_nodes[0], w, d),)
        return BlockDecomposition(d, blocks, (), holes(cfg))
    # rotate so the list starts just after a gap > d
    cut = next(i for i in range(w) if gaps[i] != d)
    order = [(cut + 1 + i) % w for i in range(w)]
    blocks = []
    isolated = []
    run = [occ_nodes[order[0]]]
    for idx in order:
        g = gaps[idx]
        nxt = occ_nodes[(idx + 1) % w]
        if g == d:
            run.append(nxt)
        else:
            if len(run) >= 2:
                blocks.append(DBlock(run[0], len(run), d))
            else:
                isolated.append(run[0])
            run = [nxt]
    blocks.sort(key=lambda b: b.start)
    return BlockDecomposition(d, tuple(blocks), tuple(sorted(isolated)), holes(cfg))


def ring_distance(a: int, b: int, n: int) -> int:
    """Shortest distance between two nodes along the ring."""
    diff = (a - b) % n
    return min(diff, n - diff)


def canonical_form(cfg: RingConfig) -> str:
    """Lexicographically minimal occupancy string over all 2n rotations and
    reflections.  Equal canonical forms identify configurations that agree
    up to a ring automorphism."""
    occ = cfg.occ
    n = cfg.n
    rev = occ[::-1]
    best = None
    for seq in (occ, rev):
        doubled = seq + seq
        for r in range(n):
            cand = doubled[r : r + n]
            if best is None or cand < best:
                best = cand
    return format_occupancy(best)
