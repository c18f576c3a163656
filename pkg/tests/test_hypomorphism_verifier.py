from collections import Counter

import numpy as np
import pytest

from recon_census.deletion_maps import sigma
from recon_census.hypomorphism_verifier import (
    check_lemma3,
    check_theorem1,
    sample_theorem1,
)
from recon_census.report import VerificationReport
from recon_census.weight_matrix import MatrixVariant, build_dense

PLAIN = MatrixVariant.PLAIN
STAR = MatrixVariant.STAR


class TestLemma3:
    @pytest.mark.parametrize("p", [4, 8, 32])
    def test_passes(self, p):
        report = check_lemma3(p)
        assert report.passed
        assert report.checked_count == 2 * p * (p - 1)

    def test_minus_sign_everywhere_at_order_4(self):
        m = build_dense(4, PLAIN)
        ms = build_dense(4, STAR)
        for i in range(1, 5):
            for j in range(1, 5):
                if i == j:
                    continue
                assert m.entry(i, j) == -ms.entry(i, sigma(4, i, j))
                assert m.entry(i, j) == -ms.entry(sigma(4, j, i), j)

    def test_minus_sign_only_at_half_offset_for_order_8(self):
        m = build_dense(8, PLAIN)
        ms = build_dense(8, STAR)
        for i in range(1, 9):
            for j in range(1, 9):
                if i == j:
                    continue
                s = -1 if abs(i - j) == 4 else 1
                assert m.entry(i, j) == s * ms.entry(i, sigma(8, i, j))


class TestTheorem1:
    def test_order_4_triple_count(self):
        report = check_theorem1(4)
        assert report.passed
        assert report.checked_count == 36

    @pytest.mark.parametrize("p", [8, 16, 64])
    def test_passes(self, p):
        report = check_theorem1(p)
        assert report.passed
        assert report.checked_count == p * (p - 1) ** 2

    def test_spot_instance(self):
        # k=3, i=1, j=2 at order 8: both sides equal 1
        m = build_dense(8, PLAIN)
        ms = build_dense(8, STAR)
        assert m.entry(1, 2) == 1
        assert sigma(8, 3, 1) == 8 and sigma(8, 3, 2) == 5
        assert ms.entry(8, 5) == 1

    @pytest.mark.parametrize("p", [8, 16])
    def test_weighted_deck_multisets_agree(self, p):
        # consequence: deleting any point leaves entry multisets equal
        m = build_dense(p, PLAIN).entries
        ms = build_dense(p, STAR).entries
        for k in range(p):
            keep = [v for v in range(p) if v != k]
            sub = m[np.ix_(keep, keep)]
            sub_star = ms[np.ix_(keep, keep)]
            assert Counter(sub.ravel().tolist()) == Counter(sub_star.ravel().tolist())


class TestSampleTheorem1:
    def test_small_order_subsumed_by_exhaustive(self):
        report = sample_theorem1(8, 100, rng_seed=7)
        assert report.passed
        assert report.checked_count == 100
        assert report.seed == 7

    def test_large_order(self):
        report = sample_theorem1(4096, 50_000, rng_seed=1)
        assert report.passed

    def test_deterministic_under_seed(self):
        a = sample_theorem1(64, 5_000, rng_seed=42)
        b = sample_theorem1(64, 5_000, rng_seed=42)
        assert a == b

    def test_rejects_zero_trials(self):
        with pytest.raises(ValueError):
            sample_theorem1(8, 0, rng_seed=1)


class TestReportShape:
    def test_outcome_and_counterexample_coupled(self):
        with pytest.raises(ValueError):
            VerificationReport("x", 8, True, (0, 1, 2, 3, 4), 1)
        with pytest.raises(ValueError):
            VerificationReport("x", 8, False, None, 1)

    def test_json_fields(self):
        doc = check_theorem1(8).to_json_dict()
        assert doc["schema"] == "1.0.0"
        assert set(doc) == {"schema", "check", "p", "outcome", "checked"}
        assert doc["outcome"] == "pass"

    def test_json_seed_field(self):
        doc = sample_theorem1(8, 10, rng_seed=3).to_json_dict()
        assert doc["seed"] == 3
