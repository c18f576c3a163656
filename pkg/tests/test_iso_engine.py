import json

import numpy as np
import pytest

from recon_census.deletion_maps import DeletionMap, build_all_maps
from recon_census.digraph_builder import Digraph, standard_pair, variant_pair
from recon_census.errors import BudgetExhausted
from recon_census.iso_engine import (
    IsoStatus,
    REASON_BASE_CASE,
    REASON_SCORE_SPLIT,
    are_isomorphic,
    deck,
    decks_match_independent,
    verify_hypomorphic_by_sigma,
    verify_nonisomorphic_inductive,
)


def random_digraph(rng: np.random.Generator, p: int, density: float = 0.5) -> Digraph:
    a = (rng.random((p, p)) < density).astype(np.uint8)
    np.fill_diagonal(a, 0)
    return Digraph(p, a)


def transitive_tournament(p: int) -> Digraph:
    return Digraph(p, np.triu(np.ones((p, p), dtype=np.uint8), 1))


class TestAreIsomorphic:
    def test_order_4_pair_differs(self):
        g, h = standard_pair(4)
        assert are_isomorphic(g, h).status is IsoStatus.NON_ISOMORPHIC

    def test_identity_witness(self):
        g, _ = standard_pair(8)
        verdict = are_isomorphic(g, g)
        assert verdict.isomorphic
        assert verdict.witness == tuple(range(1, 9))

    def test_order_8_pair_differs(self):
        g, h = standard_pair(8)
        assert are_isomorphic(g, h).status is IsoStatus.NON_ISOMORPHIC

    def test_order_mismatch(self):
        g, _ = standard_pair(4)
        h, _ = standard_pair(8)
        with pytest.raises(ValueError):
            are_isomorphic(g, h)

    def test_budget_exhaustion_is_undecided(self):
        a = np.ones((8, 8), dtype=np.uint8)
        np.fill_diagonal(a, 0)
        complete = Digraph(8, a)
        verdict = are_isomorphic(complete, complete, budget=3)
        assert verdict.status is IsoStatus.UNDECIDED
        assert verdict.budget == 3

    def test_witnesses_verify_on_relabeled_digraphs(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            p = int(rng.integers(3, 8))
            g = random_digraph(rng, p)
            perm = rng.permutation(p) + 1
            h = g.relabel(perm)
            verdict = are_isomorphic(h, g)
            assert verdict.isomorphic
            w = verdict.witness
            for i in range(1, p + 1):
                for j in range(1, p + 1):
                    if i != j:
                        assert h.arc(i, j) == g.arc(w[i - 1], w[j - 1])

    def test_pruning_never_changes_verdicts(self):
        # seeded suite of 100 small pairs, half relabelings, half random
        rng = np.random.default_rng(2024)
        for t in range(100):
            p = int(rng.integers(4, 8))
            g = random_digraph(rng, p)
            if t % 2 == 0:
                h = g.relabel(rng.permutation(p) + 1)
            else:
                h = random_digraph(rng, p)
            pruned = are_isomorphic(g, h, degree_pruning=True)
            unpruned = are_isomorphic(g, h, degree_pruning=False)
            assert pruned.status == unpruned.status, (t, p)


class TestDeck:
    def test_first_card_of_order_4_is_a_cycle(self):
        g, _ = standard_pair(4)
        card = deck(g).card(1)
        assert np.array_equal(
            card.adjacency,
            np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]], dtype=np.uint8),
        )

    def test_starred_first_card_is_a_cycle(self):
        _, h = standard_pair(4)
        card = deck(h).card(1)
        power = np.linalg.matrix_power(card.adjacency.astype(int), 3)
        assert np.trace(power) == 3  # one directed 3-cycle through every point

    def test_card_counts_and_orders(self):
        g, _ = standard_pair(8)
        d = deck(g)
        assert d.order == 8
        assert all(card.order == 7 for card in d.cards)

    def test_card_index_bounds(self):
        g, _ = standard_pair(4)
        with pytest.raises(IndexError):
            deck(g).card(5)


class TestHypomorphicBySigma:
    @pytest.mark.parametrize("p", [8, 16])
    def test_standard_pair(self, p):
        g, h = standard_pair(p)
        report = verify_hypomorphic_by_sigma(g, h, build_all_maps(p))
        assert report.passed
        assert report.checked_count == p * (p - 1) ** 2

    @pytest.mark.parametrize("p", [8, 16])
    def test_variant_pair(self, p):
        g, h = variant_pair(p)
        assert verify_hypomorphic_by_sigma(g, h, build_all_maps(p)).passed

    def test_self_hypomorphic_under_identity_maps(self):
        g, _ = standard_pair(8)
        maps = []
        for k in range(1, 9):
            table = np.arange(1, 9, dtype=np.int32)
            table[k - 1] = 0
            maps.append(DeletionMap(8, k, table))
        assert verify_hypomorphic_by_sigma(g, g, maps).passed

    def test_detects_mismatch(self):
        g, _ = standard_pair(8)
        report = verify_hypomorphic_by_sigma(g, transitive_tournament(8), build_all_maps(8))
        assert not report.passed
        k, i, j, lhs, rhs = report.counterexample
        assert 1 <= k <= 8 and lhs != rhs

    def test_map_set_validated(self):
        g, h = standard_pair(8)
        with pytest.raises(ValueError):
            verify_hypomorphic_by_sigma(g, h, build_all_maps(8)[:4])


class TestDeckMatching:
    def test_order_4_pair_matches(self):
        g, h = standard_pair(4)
        assert decks_match_independent(g, h) is not None

    def test_order_8_pair_matches_and_identity_works(self):
        g, h = standard_pair(8)
        assert decks_match_independent(g, h) is not None
        for k in range(1, 9):
            verdict = are_isomorphic(deck(g).card(k), deck(h).card(k))
            assert verdict.isomorphic

    def test_transitive_tournament_deck_differs(self):
        g, _ = standard_pair(4)
        tt = transitive_tournament(4)
        assert decks_match_independent(g, tt) is None
        # independent confirmation: g's deck contains a card with a
        # directed 3-cycle, while every card of the transitive
        # tournament is acyclic
        def has_cycle(card):
            power = np.linalg.matrix_power(card.adjacency.astype(int), 3)
            return np.trace(power) > 0

        assert any(has_cycle(c) for c in deck(g).cards)
        assert not any(has_cycle(c) for c in deck(tt).cards)

    def test_order_bound(self):
        g, h = standard_pair(16)
        with pytest.raises(ValueError):
            decks_match_independent(g, h)

    def test_budget_exhaustion_raises(self):
        g, h = standard_pair(8)
        with pytest.raises(BudgetExhausted):
            decks_match_independent(g, h, budget=1)


class TestInductiveNonIsomorphism:
    def test_base_case_trace(self):
        trace = verify_nonisomorphic_inductive(4)
        assert len(trace.steps) == 1
        assert trace.steps[0].order == 4
        assert trace.steps[0].reason == REASON_BASE_CASE

    def test_three_step_trace(self):
        trace = verify_nonisomorphic_inductive(16)
        assert [s.order for s in trace.steps] == [16, 8, 4]
        assert trace.steps[0].reason == REASON_SCORE_SPLIT

    def test_nine_step_trace(self):
        trace = verify_nonisomorphic_inductive(1024)
        assert len(trace.steps) == 9

    def test_agrees_with_search_oracle(self):
        for p in (4, 8):
            g, h = standard_pair(p)
            assert are_isomorphic(g, h).status is IsoStatus.NON_ISOMORPHIC
            verify_nonisomorphic_inductive(p)

    @pytest.mark.parametrize("p", [8, 16, 32])
    def test_induced_halves_equal_smaller_pair(self, p):
        h = p // 2
        g_big, s_big = standard_pair(p)
        g_small, s_small = standard_pair(h)
        assert np.array_equal(g_big.adjacency[:h, :h], g_small.adjacency)
        assert np.array_equal(s_big.adjacency[h:, h:], s_small.adjacency)

    def test_json_serialization(self):
        trace = verify_nonisomorphic_inductive(16)
        doc = trace.to_json()
        assert [row["p"] for row in doc] == [16, 8, 4]
        assert all(set(row) == {"p", "reason", "detail"} for row in doc)
        json.dumps(doc)
