import json
from collections import Counter

import pytest

from looselab import (
    CopySet,
    PerfectMatching,
    build_gstar,
    exact_loose_hamilton,
    is_equitable,
    pipeline_vs_oracle,
    recolor_edges,
    run_pipeline,
    sample_coupled,
    verify_loose_hamilton,
)
from looselab.sampling import rng_from_seed
from looselab.solvers import exact_matching


class TestBuildGstar:
    def test_two_parallel_edges_smallest_case(self):
        # r=1, m=1: two matchings over X={1,2} give two parallel edges
        # with the two distinct colors
        cs = CopySet(1, (3, 4), ((((3, 1)),), (((4, 1)),)))
        m1 = PerfectMatching((((1, 2), (3, 1)),))
        m2 = PerfectMatching((((1, 2), (4, 1)),))
        g = build_gstar([m1, m2], cs)
        assert len(g.edges) == 2
        assert {e.pair for e in g.edges} == {(1, 2)}
        assert {e.color for e in g.edges} == {3, 4}
        assert is_equitable(g, 1)

    def test_pipeline_inputs_regular_and_equitable(self):
        gen = rng_from_seed(0)
        for _ in range(25):
            h, cs, systems = sample_coupled(16, 1.0, 4, gen)
            matchings = [exact_matching(ts) for ts in systems]
            g = build_gstar(matchings, cs)
            assert len(g.edges) == 2 * 4 * 4
            assert all(d == 8 for d in g.degrees.values())
            assert is_equitable(g, 4)

    def test_edge_multiset_is_projection_of_triples(self):
        gen = rng_from_seed(1)
        h, cs, systems = sample_coupled(8, 1.0, 4, gen)
        matchings = [exact_matching(ts) for ts in systems]
        g = build_gstar(matchings, cs)
        want = Counter()
        for pm in matchings:
            for (x1, x2), (y, _i) in pm.triples:
                want[(x1, x2, y)] += 1
        got = Counter((e.u, e.v, e.color) for e in g.edges)
        assert got == want

    def test_rejects_inconsistent_inputs(self):
        cs = CopySet(1, (3, 4), ((((3, 1)),), (((4, 1)),)))
        wrong_slot = PerfectMatching((((1, 2), (4, 1)),))
        with pytest.raises(ValueError, match="block"):
            build_gstar([wrong_slot, wrong_slot], cs)
        with pytest.raises(ValueError, match="expected 2 matchings"):
            build_gstar([wrong_slot], cs)


class TestRunPipeline:
    @pytest.mark.parametrize("n", [8, 12, 16])
    def test_p_one_succeeds_exact(self, n):
        rep = run_pipeline(n, 1.0, 4, seed=5, keep_instance=True)
        assert rep.success
        assert rep.failed_stage is None
        assert rep.matchings_found == 8
        assert verify_loose_hamilton(rep.hypergraph, rep.loose_cycle)

    def test_p_zero_fails_at_matching(self):
        rep = run_pipeline(8, 0.0, 4, seed=5)
        assert not rep.success
        assert rep.failed_stage == "matching"
        assert rep.matchings_found == 0

    def test_heuristic_solver_succeeds_at_p_one(self):
        rep = run_pipeline(8, 1.0, 4, seed=7, solver="heuristic",
                           keep_instance=True)
        assert rep.success
        assert verify_loose_hamilton(rep.hypergraph, rep.loose_cycle)

    def test_rejects_bad_n(self):
        with pytest.raises(ValueError):
            run_pipeline(10, 0.5, 4, seed=0)

    def test_rejects_bad_solver(self):
        with pytest.raises(ValueError):
            run_pipeline(8, 0.5, 4, seed=0, solver="magic")

    def test_soundness_and_oracle_confirmation(self):
        # every reported success verifies and is confirmed by the oracle
        successes = 0
        for seed in range(200):
            rep = run_pipeline(8, 0.9, 4, seed=seed, keep_instance=True)
            if rep.success:
                successes += 1
                assert verify_loose_hamilton(rep.hypergraph, rep.loose_cycle)
                assert exact_loose_hamilton(rep.hypergraph) is not None

    def test_deterministic_report(self):
        a = run_pipeline(16, 0.9, 4, seed=11).to_dict()
        b = run_pipeline(16, 0.9, 4, seed=11).to_dict()
        a.pop("stage_seconds")
        b.pop("stage_seconds")
        assert a == b

    def test_deterministic_heuristic_report(self):
        a = run_pipeline(16, 0.95, 4, seed=12, solver="heuristic").to_dict()
        b = run_pipeline(16, 0.95, 4, seed=12, solver="heuristic").to_dict()
        a.pop("stage_seconds")
        b.pop("stage_seconds")
        assert a == b

    def test_report_serializes(self):
        rep = run_pipeline(8, 1.0, 4, seed=1)
        payload = json.loads(rep.to_json())
        assert payload["success"] is True
        assert payload["loose_cycle"]["links"]
        assert payload["seed"] == 1

    def test_success_carries_witnesses(self):
        rep = run_pipeline(16, 1.0, 4, seed=2)
        assert rep.loose_cycle is not None
        assert rep.rainbow_cert is not None
        assert rep.matchings is not None and len(rep.matchings) == 8


class TestPipelineVsOracle:
    def test_p_one_both_always_yes(self):
        table = pipeline_vs_oracle(8, 1.0, 4, trials=20, seed=3)
        assert table.pipeline_yes == 20
        assert table.oracle_yes == 20
        assert table.loss_count == 0

    def test_no_unsound_successes_across_grid(self):
        # raises internally on any pipeline-yes/oracle-no row; the loss
        # rates themselves are measured, not asserted
        for p in (0.3, 0.6, 0.9):
            table = pipeline_vs_oracle(8, p, 4, trials=200, seed=4)
            assert all(not (s and not o) for _, s, o in table.rows)
            assert table.loss_count == sum(
                1 for _, s, o in table.rows if o and not s)
            assert 0.0 <= table.loss_rate <= 1.0

    def test_loss_table_serializes(self):
        table = pipeline_vs_oracle(8, 0.6, 4, trials=50, seed=5)
        d = table.to_dict()
        assert d["trials"] == 50
        assert len(d["rows"]) == 50

    def test_rejects_oversized_n(self):
        with pytest.raises(ValueError):
            pipeline_vs_oracle(20, 0.5, 4, trials=5, seed=0)


class TestRecolor:
    def test_recolor_preserves_structure_and_equitability(self):
        gen = rng_from_seed(6)
        h, cs, systems = sample_coupled(16, 1.0, 4, gen)
        matchings = [exact_matching(ts) for ts in systems]
        g = build_gstar(matchings, cs)
        g2 = recolor_edges(g, cs, gen)
        assert Counter(e.pair for e in g2.edges) == Counter(e.pair for e in g.edges)
        assert is_equitable(g2, 4)

    def test_rainbow_frequency_comparable_under_recoloring(self):
        # measured side by side; no equality is claimed, only that the
        # recolored graphs remain legitimate rainbow instances
        from looselab.solvers import exact_rainbow_hamilton

        gen = rng_from_seed(7)
        kept = recolored = graphs = 0
        for seed in range(60):
            rep = run_pipeline(16, 0.95, 4, seed=seed, keep_instance=True)
            if rep.gstar is None:
                continue
            graphs += 1
            kept += exact_rainbow_hamilton(rep.gstar) is not None
            g2 = recolor_edges(rep.gstar, rep.copyset, gen)
            recolored += exact_rainbow_hamilton(g2) is not None
        assert graphs > 20
        assert 0 <= kept <= graphs and 0 <= recolored <= graphs
