"""Independent brute-force oracles the tests check the package against.

Everything here is written directly from first principles (explicit
permutation images, full scans); none of it calls into ring_gather's
geometry so that agreement between the two is meaningful.
"""

from itertools import combinations


def rotate(occ, r):
    n = len(occ)
    return tuple(occ[(i - r) % n] for i in range(n))


def reflect(occ, c):
    n = len(occ)
    return tuple(occ[(c - i) % n] for i in range(n))


def all_images(occ):
    n = len(occ)
    out = []
    for r in range(n):
        out.append(rotate(occ, r))
    for c in range(n):
        out.append(reflect(occ, c))
    return out


def brute_symmetry_class(occ):
    """'periodic' | 'symmetric' | 'rigid' by explicit stabilizer search."""
    n = len(occ)
    if any(rotate(occ, r) == occ for r in range(1, n)):
        return "periodic"
    if any(reflect(occ, c) == occ for c in range(n)):
        return "symmetric"
    return "rigid"


def brute_axes(occ):
    """All reflection parameters fixing the occupancy."""
    n = len(occ)
    return [c for c in range(n) if reflect(occ, c) == occ]


def brute_view(occ, node):
    """Both direction readings from an occupied node by explicit walking."""
    n = len(occ)
    assert occ[node]
    readings = []
    for step in (1, -1):
        dists = []
        pos = node
        total = 0
        while True:
            d = 0
            while True:
                pos = (pos + step) % n
                d += 1
                if occ[pos]:
                    break
            dists.append(d)
            total += d
            if pos == node:
                break
        assert total == n
        readings.append(tuple(dists))
    return max(readings)


def brute_inter_distance(occ):
    n = len(occ)
    nodes = [i for i, c in enumerate(occ) if c]
    best = None
    for a, b in combinations(nodes, 2):
        d = min((a - b) % n, (b - a) % n)
        if best is None or d < best:
            best = d
    # robots sharing a node are at distance 0
    if any(c >= 2 for c in occ):
        best = 0
    return best


def brute_blocks(occ):
    """(d, blocks as node tuples, isolated) by direct scanning."""
    n = len(occ)
    d = brute_inter_distance(occ)
    nodes = [i for i, c in enumerate(occ) if c]
    in_block = {}
    blocks = []
    for start in nodes:
        # walk forward while the spacing is exactly d
        prev = (start - d) % n
        if occ[prev] and all(occ[(start - j) % n] == 0 for j in range(1, d)):
            continue  # not the first robot of a run
        run = [start]
        cur = start
        while True:
            nxt = (cur + d) % n
            if nxt == start:
                break
            if occ[nxt] and all(occ[(cur + j) % n] == 0 for j in range(1, d)):
                run.append(nxt)
                cur = nxt
            else:
                break
        if len(run) >= 2:
            blocks.append(tuple(run))
            for v in run:
                in_block[v] = True
    isolated = [v for v in nodes if v not in in_block]
    return d, blocks, isolated


def orbit_classes(n, k, include_periodic=False):
    """Enumerate towerless k-subset classes of the n-ring up to the
    dihedral group by explicit orbit sweeping; returns a list of frozensets
    (one arbitrary member per orbit)."""
    seen = set()
    classes = []
    for nodes in combinations(range(n), k):
        occ = tuple(1 if i in set(nodes) else 0 for i in range(n))
        if occ in seen:
            continue
        orbit = set(all_images(occ))
        seen.update(orbit)
        if not include_periodic and brute_symmetry_class(occ) == "periodic":
            continue
        classes.append(occ)
    return classes
