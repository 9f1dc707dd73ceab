from itertools import combinations

import pytest

from looselab import (
    ColoredEdge,
    ColoredMultigraph,
    SizeCapExceeded,
    TripleSystem,
    complete_triple_system,
    exact_matching,
    exact_rainbow_hamilton,
    heuristic_matching,
    heuristic_rainbow_hamilton,
    sample_union_matchings,
    verify_matching,
    verify_rainbow_hamilton,
)
from looselab.sampling import rng_from_seed

from oracles import perfect_matching_exists_naive, rainbow_hamilton_exists_naive

XS4 = (1, 2, 3, 4)
SLOTS2 = ("a", "b")
ALL_TRIPLES_M2 = [((x1, x2), s)
                  for x1, x2 in combinations(XS4, 2) for s in SLOTS2]


def system_m2(present):
    return TripleSystem(XS4, SLOTS2, frozenset(present))


def random_system(rng, xs, slots, density):
    pool = [((x1, x2), s)
            for x1, x2 in combinations(xs, 2) for s in slots]
    mask = rng.random(len(pool)) < density
    return TripleSystem(tuple(xs), tuple(slots),
                        frozenset(t for t, keep in zip(pool, mask) if keep))


class TestExactMatching:
    def test_simple_instance(self):
        ts = system_m2([((1, 2), "a"), ((3, 4), "b")])
        pm = exact_matching(ts)
        assert pm is not None
        assert set(pm.triples) == {((1, 2), "a"), ((3, 4), "b")}

    def test_uncoverable_vertex(self):
        ts = system_m2([((1, 2), "a"), ((1, 3), "b")])
        assert exact_matching(ts) is None

    def test_exhaustive_m2_space_agrees_with_naive(self):
        # every subset of the 12 possible triples
        for mask in range(1 << len(ALL_TRIPLES_M2)):
            ts = system_m2([t for i, t in enumerate(ALL_TRIPLES_M2)
                            if mask >> i & 1])
            got = exact_matching(ts) is not None
            assert got == perfect_matching_exists_naive(ts), f"mask={mask}"

    def test_returned_matchings_verify(self):
        rng = rng_from_seed(1)
        for _ in range(100):
            ts = random_system(rng, range(1, 7), ("a", "b", "c"), 0.3)
            pm = exact_matching(ts)
            if pm is not None:
                assert verify_matching(ts, pm)

    def test_matches_naive_on_m3(self):
        rng = rng_from_seed(2)
        for _ in range(150):
            ts = random_system(rng, range(1, 7), ("a", "b", "c"), 0.25)
            assert (exact_matching(ts) is not None) == \
                perfect_matching_exists_naive(ts)

    def test_monotone_under_added_triples(self):
        rng = rng_from_seed(3)
        for _ in range(80):
            ts = random_system(rng, range(1, 7), ("a", "b", "c"), 0.2)
            pool = [((x1, x2), s) for x1, x2 in combinations(range(1, 7), 2)
                    for s in ("a", "b", "c")]
            extra = {pool[i] for i in
                     rng.choice(len(pool), size=6, replace=False).tolist()}
            bigger = TripleSystem(ts.xs, ts.slots, ts.present | extra)
            if exact_matching(ts) is not None:
                assert exact_matching(bigger) is not None

    def test_cap(self):
        xs = tuple(range(1, 2 * 70 + 1))
        slots = tuple(range(1000, 1070))
        ts = TripleSystem(xs, slots, frozenset())
        with pytest.raises(SizeCapExceeded):
            exact_matching(ts)

    def test_seed_free_deterministic(self):
        ts = complete_triple_system(range(1, 9), ("a", "b", "c", "d"))
        assert exact_matching(ts) == exact_matching(ts)


class TestHeuristicMatching:
    def test_empty_system_absent(self):
        assert heuristic_matching(system_m2([]), rng=rng_from_seed(0)) is None

    def test_complete_system_first_pass(self):
        ts = complete_triple_system(range(1, 9), ("a", "b", "c", "d"))
        stats = {}
        pm = heuristic_matching(ts, rng=rng_from_seed(1), stats=stats)
        assert pm is not None
        assert verify_matching(ts, pm)
        assert stats["steps"] == 0  # greedy alone completes

    def test_calibration_against_exact(self):
        # solvable instances at m <= 4 should be found almost always
        rng = rng_from_seed(4)
        instances = []
        while len(instances) < 15:
            m = 2 + len(instances) % 3
            ts = random_system(rng, range(1, 2 * m + 1),
                               tuple(range(100, 100 + m)), 0.35)
            if exact_matching(ts) is not None:
                instances.append(ts)
        for ts in instances:
            hits = sum(
                heuristic_matching(ts, rng=rng_from_seed(seed)) is not None
                for seed in range(100))
            assert hits >= 95, f"only {hits}/100 on {ts}"

    def test_deterministic_given_seed_and_budget(self):
        ts = complete_triple_system(range(1, 9), ("a", "b", "c", "d"))
        a = heuristic_matching(ts, budget=500, rng=rng_from_seed(9))
        b = heuristic_matching(ts, budget=500, rng=rng_from_seed(9))
        assert a == b


def rainbow_square_with_clutter():
    edges = [ColoredEdge(1, 2, 5), ColoredEdge(2, 3, 6), ColoredEdge(3, 4, 7),
             ColoredEdge(1, 4, 8)]
    edges += [ColoredEdge(1, 3, 5), ColoredEdge(2, 4, 5), ColoredEdge(1, 2, 5)]
    return ColoredMultigraph(4, (5, 6, 7, 8), edges)


def random_colored(rng, nv=4, max_edges=8, palette=(5, 6, 7, 8)):
    pairs = list(combinations(range(1, nv + 1), 2))
    k = int(rng.integers(0, max_edges + 1))
    edges = []
    for _ in range(k):
        u, v = pairs[int(rng.integers(len(pairs)))]
        edges.append(ColoredEdge(u, v, palette[int(rng.integers(len(palette)))]))
    return ColoredMultigraph(nv, palette, edges)


class TestExactRainbow:
    def test_square_with_clutter_found(self):
        g = rainbow_square_with_clutter()
        cert = exact_rainbow_hamilton(g)
        assert cert is not None
        assert verify_rainbow_hamilton(g, cert)

    def test_monochromatic_absent(self):
        edges = [ColoredEdge(u, v, 5)
                 for u, v in combinations(range(1, 5), 2)]
        g = ColoredMultigraph(4, (5, 6, 7, 8), edges)
        assert exact_rainbow_hamilton(g) is None

    def test_two_vertex_parallel_edges(self):
        g = ColoredMultigraph(2, (3, 4),
                              [ColoredEdge(1, 2, 3), ColoredEdge(1, 2, 4)])
        cert = exact_rainbow_hamilton(g)
        assert cert is not None
        assert verify_rainbow_hamilton(g, cert)

    def test_matches_naive_oracle(self):
        rng = rng_from_seed(5)
        for _ in range(200):
            g = random_colored(rng)
            assert (exact_rainbow_hamilton(g) is not None) == \
                rainbow_hamilton_exists_naive(g), g.edges

    def test_cap(self):
        g = ColoredMultigraph(24, (), [])
        with pytest.raises(SizeCapExceeded):
            exact_rainbow_hamilton(g)

    def test_seed_free_deterministic(self):
        g = rainbow_square_with_clutter()
        assert exact_rainbow_hamilton(g) == exact_rainbow_hamilton(g)


class TestHeuristicRainbow:
    def test_isolated_vertex_absent(self):
        g = ColoredMultigraph(4, (5, 6, 7, 8),
                              [ColoredEdge(1, 2, 5), ColoredEdge(2, 3, 6),
                               ColoredEdge(1, 3, 7)])
        assert heuristic_rainbow_hamilton(g, rng=rng_from_seed(0)) is None

    def test_pure_cycle_found(self):
        nv = 10
        edges = [ColoredEdge(i, i % nv + 1, nv + i) for i in range(1, nv + 1)]
        g = ColoredMultigraph(nv, tuple(range(nv + 1, 2 * nv + 1)), edges)
        cert = heuristic_rainbow_hamilton(g, rng=rng_from_seed(1))
        assert cert is not None
        assert verify_rainbow_hamilton(g, cert)

    def test_calibration_against_exact(self):
        # equitably colored unions of matchings at 10 vertices; keep the
        # exact-solvable ones and expect the walk to find nearly all
        rng = rng_from_seed(6)
        instances = []
        while len(instances) < 10:
            g = sample_union_matchings(10, 3, rng, colored=True)
            if exact_rainbow_hamilton(g) is not None:
                instances.append(g)
        for g in instances:
            hits = 0
            for seed in range(100):
                cert = heuristic_rainbow_hamilton(g, rng=rng_from_seed(seed))
                if cert is not None:
                    assert verify_rainbow_hamilton(g, cert)
                    hits += 1
            assert hits >= 90, f"only {hits}/100"

    def test_deterministic_given_seed_and_budget(self):
        g = rainbow_square_with_clutter()
        a = heuristic_rainbow_hamilton(g, budget=300, rng=rng_from_seed(3))
        b = heuristic_rainbow_hamilton(g, budget=300, rng=rng_from_seed(3))
        assert a == b
