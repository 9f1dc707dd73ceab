"""Combinatorial engines: perfect matchings of triple systems and rainbow
Hamilton cycles of colored multigraphs.

Each problem gets an exact engine (complete search, size-capped) and a
randomized heuristic (incomplete, budgeted in steps so runs reproduce
across machines).  Both kinds return only witnesses that pass their
verifier; the exact engines are additionally complete, which the test
suite checks against unpruned enumeration oracles at small sizes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .colored import ColoredMultigraph, RainbowCycleCert, verify_rainbow_hamilton
from .hypergraph import SizeCapExceeded, Verdict
from .sampling import Slot, TripleSystem, as_generator

MatchTriple = tuple[tuple[int, int], Slot]


@dataclass(frozen=True)
class PerfectMatching:
    """m triples ((x, x'), slot) whose pairs partition X and slots cover Y."""

    triples: tuple[MatchTriple, ...]

    def __post_init__(self):
        object.__setattr__(
            self,
            "triples",
            tuple(((int(x1), int(x2)), slot) for (x1, x2), slot in self.triples),
        )


def verify_matching(ts: TripleSystem, matching) -> Verdict:
    """Check that a claimed matching covers X and the slots using only
    present triples."""
    triples = matching.triples if isinstance(matching, PerfectMatching) \
        else tuple(matching)
    if len(triples) != ts.m:
        return Verdict(False, f"expected {ts.m} triples, got {len(triples)}")
    used_x: list[int] = []
    used_slots = []
    for i, t in enumerate(triples):
        if t not in ts.present:
            return Verdict(False, "triple not present in the system", index=i + 1)
        (x1, x2), slot = t
        used_x += [x1, x2]
        used_slots.append(slot)
    if sorted(used_x) != list(ts.xs):
        return Verdict(False, "pairs do not partition X")
    if sorted(used_slots, key=repr) != sorted(ts.slots, key=repr):
        return Verdict(False, "slots are not each used exactly once")
    return Verdict(True)


def _sorted_rows(ts: TripleSystem) -> list[MatchTriple]:
    rank = {s: i for i, s in enumerate(ts.slots)}
    return sorted(ts.present, key=lambda t: (t[0], rank[t[1]]))


# ---------------------------------------------------------------------------
# exact matching: exact cover over columns = X vertices + slots
# ---------------------------------------------------------------------------


def exact_matching(ts: TripleSystem, *, cap: int = 64, row_cap: int = 200_000,
                   stats: Optional[dict] = None) -> Optional[PerfectMatching]:
    """Complete perfect-matching search, framed as exact cover.

    Rows are present triples; columns are the 2m X-vertices and the m
    slots; the most constrained column is branched first, ties broken by
    lowest column index.  Returns a verified matching iff one exists.
    """
    m = ts.m
    if m > cap:
        raise SizeCapExceeded(f"m={m} exceeds the exact-matching cap {cap}")
    if len(ts.present) > row_cap:
        raise SizeCapExceeded(
            f"{len(ts.present)} triples exceed the row cap {row_cap}")
    if m == 0:
        return PerfectMatching(())
    rows = _sorted_rows(ts)
    if not rows:
        return None
    xcol = {x: i for i, x in enumerate(ts.xs)}
    scol = {s: len(ts.xs) + i for i, s in enumerate(ts.slots)}
    row_cols = [
        (xcol[x1], xcol[x2], scol[slot]) for (x1, x2), slot in rows
    ]
    cols: dict[int, set[int]] = {c: set() for c in range(len(ts.xs) + m)}
    for rid, rc in enumerate(row_cols):
        for c in rc:
            cols[c].add(rid)

    def select(rid: int) -> list[set[int]]:
        removed = []
        for j in row_cols[rid]:
            for i in cols[j]:
                for k in row_cols[i]:
                    if k != j:
                        cols[k].discard(i)
            removed.append(cols.pop(j))
        return removed

    def deselect(rid: int, removed: list[set[int]]) -> None:
        for j in reversed(row_cols[rid]):
            cols[j] = removed.pop()
            for i in cols[j]:
                for k in row_cols[i]:
                    if k != j:
                        cols[k].add(i)

    chosen: list[int] = []

    def solve() -> bool:
        if stats is not None:
            stats["nodes"] = stats.get("nodes", 0) + 1
        if not cols:
            return True
        col = min(cols, key=lambda c: (len(cols[c]), c))
        if not cols[col]:
            return False
        for rid in sorted(cols[col]):
            chosen.append(rid)
            removed = select(rid)
            if solve():
                return True
            deselect(rid, removed)
            chosen.pop()
        return False

    if solve():
        return PerfectMatching(tuple(sorted((rows[rid] for rid in chosen),
                                            key=lambda t: t[0])))
    return None


# ---------------------------------------------------------------------------
# heuristic matching: randomized greedy + eviction walk + 2-for-2 swaps
# ---------------------------------------------------------------------------


def heuristic_matching(ts: TripleSystem, budget: Optional[int] = None, rng=None,
                       stats: Optional[dict] = None) -> Optional[PerfectMatching]:
    """Incomplete randomized search; any returned matching is verified.

    Greedy construction from a shuffled triple order, then a random walk:
    pick an uncovered X vertex, force in a random triple through it and
    evict whatever it collides with.  Occasionally two chosen triples are
    swapped for an alternative pair covering the same six elements, and
    long stagnation triggers a greedy restart.  ``budget`` counts walk
    steps, not wall-clock.
    """
    m = ts.m
    if m == 0:
        return PerfectMatching(())
    rows = _sorted_rows(ts)
    if not rows:
        return None
    if budget is None:
        budget = 300 + 240 * m
    gen = as_generator(rng)

    by_x: dict[int, list[int]] = {x: [] for x in ts.xs}
    by_slot: dict[Slot, list[int]] = {s: [] for s in ts.slots}
    for rid, ((x1, x2), slot) in enumerate(rows):
        by_x[x1].append(rid)
        by_x[x2].append(rid)
        by_slot[slot].append(rid)
    if any(not v for v in by_x.values()) or any(not v for v in by_slot.values()):
        return None  # some element is uncoverable, no matching exists

    owner_x: dict[int, int] = {}
    owner_slot: dict[Slot, int] = {}
    chosen: set[int] = set()

    def add(rid: int) -> None:
        (x1, x2), slot = rows[rid]
        owner_x[x1] = rid
        owner_x[x2] = rid
        owner_slot[slot] = rid
        chosen.add(rid)

    def drop(rid: int) -> None:
        (x1, x2), slot = rows[rid]
        del owner_x[x1]
        del owner_x[x2]
        del owner_slot[slot]
        chosen.discard(rid)

    def greedy() -> None:
        for rid in list(chosen):
            drop(rid)
        for rid in gen.permutation(len(rows)).tolist():
            (x1, x2), slot = rows[rid]
            if x1 not in owner_x and x2 not in owner_x and slot not in owner_slot:
                add(rid)

    def pair_swap() -> None:
        if len(chosen) < 2:
            return
        pool = sorted(chosen)
        i, j = gen.choice(len(pool), size=2, replace=False).tolist()
        r1, r2 = pool[i], pool[j]
        xs4 = set(rows[r1][0]) | set(rows[r2][0])
        sl2 = {rows[r1][1], rows[r2][1]}
        local = [rid for x in xs4 for rid in by_x[x]
                 if set(rows[rid][0]) <= xs4 and rows[rid][1] in sl2]
        local = sorted(set(local))
        for a_idx in gen.permutation(len(local)).tolist():
            ra = local[a_idx]
            for rb in local:
                if rb == ra:
                    continue
                pa, sa = rows[ra]
                pb, sb = rows[rb]
                if set(pa) | set(pb) == xs4 and not set(pa) & set(pb) \
                        and {sa, sb} == sl2 and {ra, rb} != {r1, r2}:
                    drop(r1)
                    drop(r2)
                    add(ra)
                    add(rb)
                    return
        return

    greedy()
    best = len(chosen)
    stale = 0
    steps = 0
    restart_after = 40 + 8 * m
    while len(chosen) < m and steps < budget:
        steps += 1
        free_x = sorted(set(ts.xs) - owner_x.keys())
        x = free_x[int(gen.integers(len(free_x)))]
        cands = by_x[x]
        rid = cands[int(gen.integers(len(cands)))]
        (x1, x2), slot = rows[rid]
        blockers = {owner_x.get(x1), owner_x.get(x2), owner_slot.get(slot)}
        blockers.discard(None)
        for b in sorted(blockers):
            drop(b)
        add(rid)
        if len(chosen) > best:
            best = len(chosen)
            stale = 0
        else:
            stale += 1
            if stale % 17 == 0:
                pair_swap()
            if stale >= restart_after:
                greedy()
                best = len(chosen)
                stale = 0
    if stats is not None:
        stats["steps"] = steps
    if len(chosen) == m:
        result = PerfectMatching(tuple(sorted((rows[rid] for rid in chosen),
                                              key=lambda t: t[0])))
        if verify_matching(ts, result):
            return result
    return None


# ---------------------------------------------------------------------------
# exact rainbow Hamilton cycle: pruned backtracking over (vertex, color)
# ---------------------------------------------------------------------------


def _rainbow_adjacency(g: ColoredMultigraph) -> dict[int, dict[int, tuple[int, ...]]]:
    adj: dict[int, dict[int, set[int]]] = {v: {} for v in range(1, g.num_vertices + 1)}
    for e in g.edges:
        if e.u == e.v:
            continue  # loops cannot appear on a Hamilton cycle
        adj[e.u].setdefault(e.v, set()).add(e.color)
        adj[e.v].setdefault(e.u, set()).add(e.color)
    return {v: {w: tuple(sorted(cs)) for w, cs in sorted(nb.items())}
            for v, nb in adj.items()}


def exact_rainbow_hamilton(g: ColoredMultigraph, *, cap: int = 20,
                           stats: Optional[dict] = None
                           ) -> Optional[RainbowCycleCert]:
    """Complete search for a rainbow Hamilton cycle.

    Backtracks over (next vertex, edge color) extensions from vertex 1,
    with the closing direction canonicalized (second vertex below the
    last).  Prunes on used colors, on unvisited vertices left with fewer
    than two usable distinct colors (or, above 2 vertices, fewer than two
    usable neighbors), and on usable-edge connectivity of the region still
    to be traversed.
    """
    nv = g.num_vertices
    if nv > cap:
        raise SizeCapExceeded(f"{nv} vertices exceed the exact-rainbow cap {cap}")
    if nv < 2:
        return None
    adj = _rainbow_adjacency(g)
    if any(not adj[v] for v in adj):
        return None
    if len({e.color for e in g.edges if e.u != e.v}) < nv:
        return None
    start = 1
    path = [start]
    visited = {start}
    used_colors: set[int] = set()
    colors_seq: list[int] = []

    def viable(u: int) -> bool:
        allowed = (set(range(1, nv + 1)) - visited) | {u, start}
        unvisited = allowed - {u, start}
        for w in unvisited:
            usable_colors: set[int] = set()
            usable_neighbors = 0
            for w2, cs in adj[w].items():
                if w2 in allowed:
                    free = [c for c in cs if c not in used_colors]
                    if free:
                        usable_neighbors += 1
                        usable_colors.update(free)
            if len(usable_colors) < 2 or (nv > 2 and usable_neighbors < 2):
                return False
        # the rest of the cycle must connect u to start through the
        # unvisited region using edges with unused colors
        frontier = [u]
        seen = {u}
        while frontier:
            x = frontier.pop()
            for w2, cs in adj[x].items():
                if w2 in allowed and w2 not in seen \
                        and any(c not in used_colors for c in cs):
                    seen.add(w2)
                    frontier.append(w2)
        return allowed <= seen

    result: Optional[RainbowCycleCert] = None

    def dfs(u: int) -> bool:
        nonlocal result
        if stats is not None:
            stats["nodes"] = stats.get("nodes", 0) + 1
        if len(path) == nv:
            if nv > 2 and path[1] > path[-1]:
                return False
            for c in adj[u].get(start, ()):
                if c not in used_colors:
                    result = RainbowCycleCert(tuple(path), tuple(colors_seq) + (c,))
                    return True
            return False
        if not viable(u):
            return False
        for w, cs in adj[u].items():
            if w in visited:
                continue
            for c in cs:
                if c in used_colors:
                    continue
                path.append(w)
                visited.add(w)
                used_colors.add(c)
                colors_seq.append(c)
                if dfs(w):
                    return True
                path.pop()
                visited.discard(w)
                used_colors.discard(c)
                colors_seq.pop()
        return False

    dfs(start)
    return result


# ---------------------------------------------------------------------------
# heuristic rainbow Hamilton cycle: rotation walk with color bookkeeping
# ---------------------------------------------------------------------------


def heuristic_rainbow_hamilton(g: ColoredMultigraph, budget: Optional[int] = None,
                               rng=None, stats: Optional[dict] = None
                               ) -> Optional[RainbowCycleCert]:
    """Incomplete rotation-style local search; returned certs are verified.

    Grows a rainbow path greedily; when stuck, applies a rotation (the new
    edge's color replaces the color freed by the removed path edge) to
    move the endpoint, and restarts from a fresh random vertex after long
    stagnation.  ``budget`` counts loop steps.
    """
    nv = g.num_vertices
    if nv < 2:
        return None
    adj = _rainbow_adjacency(g)
    if any(not adj[v] for v in adj):
        return None
    if len({e.color for e in g.edges if e.u != e.v}) < nv:
        return None
    if budget is None:
        budget = 1200 + 2400 * nv
    gen = as_generator(rng)

    path: list[int] = []
    pos: dict[int, int] = {}
    path_colors: list[int] = []
    used_colors: set[int] = set()

    def restart() -> None:
        path.clear()
        pos.clear()
        path_colors.clear()
        used_colors.clear()
        v = int(gen.integers(1, nv + 1))
        path.append(v)
        pos[v] = 0

    def rotate(i: int, new_color: int) -> None:
        # new edge (end, path[i]); edge (path[i], path[i+1]) leaves the path
        freed = path_colors[i]
        used_colors.discard(freed)
        used_colors.add(new_color)
        tail = path[i + 1:]
        tail.reverse()
        del path[i + 1:]
        path.extend(tail)
        tail_colors = path_colors[i + 1:]
        tail_colors.reverse()
        del path_colors[i:]
        path_colors.append(new_color)
        path_colors.extend(tail_colors)
        for k in range(i + 1, len(path)):
            pos[path[k]] = k

    def free_color_by_recoloring(c: int) -> bool:
        # color c blocks the closing edge; try to give the path edge that
        # holds it another unused parallel color
        j = path_colors.index(c)
        for alt in adj[path[j]].get(path[j + 1], ()):
            if alt not in used_colors:
                used_colors.discard(c)
                used_colors.add(alt)
                path_colors[j] = alt
                return True
        return False

    restart()
    stale = 0
    steps = 0
    while steps < budget:
        steps += 1
        u = path[-1]
        if len(path) == nv:
            first = path[0]
            closing = [c for c in adj[u].get(first, ())
                       if c not in used_colors]
            if not closing:
                for c in adj[u].get(first, ()):
                    if free_color_by_recoloring(c):
                        closing = [c]
                        break
            if closing:
                cert = RainbowCycleCert(tuple(path),
                                        tuple(path_colors) + (closing[0],))
                if verify_rainbow_hamilton(g, cert):
                    if stats is not None:
                        stats["steps"] = steps
                    return cert
        extensions = []
        rotations = []
        for w, cs in adj[u].items():
            free = [c for c in cs if c not in used_colors]
            if not free:
                continue
            if w not in pos:
                extensions.append((w, free))
            elif len(path) >= 3 and pos[w] < len(path) - 2:
                rotations.append((pos[w], free))
        if extensions:
            w, free = extensions[int(gen.integers(len(extensions)))]
            c = free[int(gen.integers(len(free)))]
            path.append(w)
            pos[w] = len(path) - 1
            path_colors.append(c)
            used_colors.add(c)
            stale = 0
        elif rotations:
            i, free = rotations[int(gen.integers(len(rotations)))]
            c = free[int(gen.integers(len(free)))]
            rotate(i, c)
            stale += 1
        else:
            restart()
            stale = 0
            continue
        if stale > 6 * nv + 20:
            restart()
            stale = 0
    if stats is not None:
        stats["steps"] = steps
    return None
