import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from recon_census.deletion_maps import (
    DeletionMap,
    ExtendedMap,
    base_sigma,
    build_all_maps,
    build_map,
    check_lemma2,
    extend_sigma_p1,
    sigma,
    sigma_reference,
    sigma_table_tsv,
    sigma_values,
)

from conftest import load_sigma_fixture


class TestSigmaValues:
    def test_printed_values(self):
        assert sigma(8, 1, 2) == 8
        assert sigma(8, 1, 5) == 5
        assert sigma(16, 1, 9) == 9
        assert sigma(16, 2, 5) == 11

    def test_base_tables(self):
        assert [base_sigma(1).apply(i) for i in (2, 3, 4)] == [4, 2, 3]
        assert [base_sigma(4).apply(i) for i in (1, 2, 3)] == [2, 3, 1]

    def test_deleted_point_undefined(self):
        with pytest.raises(ValueError):
            sigma(8, 2, 2)
        with pytest.raises(ValueError):
            base_sigma(2).apply(2)

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            sigma(8, 0, 1)
        with pytest.raises(IndexError):
            sigma(8, 1, 9)

    @pytest.mark.parametrize("p", [4, 8, 16, 32, 64])
    def test_folded_equals_reference(self, p):
        for k in range(1, p + 1):
            for i in range(1, p + 1):
                if i != k:
                    assert sigma(p, k, i) == sigma_reference(p, k, i), (p, k, i)

    @given(p=st.sampled_from([8, 16, 128, 1024]), data=st.data())
    @settings(max_examples=200, deadline=None)
    def test_vectorized_matches_scalar(self, p, data):
        k = data.draw(st.integers(1, p))
        i = data.draw(st.integers(1, p).filter(lambda v: v != k))
        assert int(sigma_values(p, k, i)) == sigma(p, k, i)

    def test_vectorized_rejects_deleted_point(self):
        with pytest.raises(ValueError):
            sigma_values(8, np.array([1, 2]), np.array([2, 2]))


class TestBuildMap:
    @pytest.mark.parametrize("p", [4, 8, 16, 32])
    def test_bijectivity_every_column(self, p):
        for k in range(1, p + 1):
            m = build_map(p, k)
            images = sorted(image for _, image in m.items())
            assert images == [v for v in range(1, p + 1) if v != k]

    def test_base_case_equality(self):
        assert build_map(4, 2) == base_sigma(2)

    def test_tables_cached(self):
        assert build_map(8, 3).table is build_map(8, 3).table

    def test_absent_slot_is_zero(self):
        m = build_map(8, 5)
        assert m.table[4] == 0

    def test_table_read_only(self):
        with pytest.raises(ValueError):
            build_map(8, 1).table[2] = 9

    def test_direct_construction_validates(self):
        with pytest.raises(ValueError):
            DeletionMap(4, 1, np.array([0, 4, 4, 3]))
        with pytest.raises(ValueError):
            DeletionMap(4, 1, np.array([1, 4, 2, 3]))

    def test_build_all_maps(self):
        maps = build_all_maps(8)
        assert len(maps) == 8
        assert [m.deleted_point for m in maps] == list(range(1, 9))


class TestGoldenTables:
    @pytest.mark.parametrize("p", [4, 8, 16])
    def test_tsv_matches_fixture(self, p):
        assert sigma_table_tsv(p) == load_sigma_fixture(p)

    def test_single_column_via_build_map(self):
        want = load_sigma_fixture(8).splitlines()
        m = build_map(8, 3)
        column = [row.split("\t")[2] for row in want]
        got = ["X" if i == 3 else str(m.apply(i)) for i in range(1, 9)]
        assert got == column

    def test_order16_last_column(self):
        want = load_sigma_fixture(16).splitlines()
        m = build_map(16, 16)
        column = [row.split("\t")[15] for row in want]
        got = ["X" if i == 16 else str(m.apply(i)) for i in range(1, 17)]
        assert got == column


class TestLemma2:
    @pytest.mark.parametrize("p", [8, 16, 128])
    def test_passes(self, p):
        report = check_lemma2(p)
        assert report.passed
        assert report.counterexample is None

    def test_rejects_order_4(self):
        with pytest.raises(ValueError):
            check_lemma2(4)

    @pytest.mark.parametrize("p", [8, 16, 32])
    def test_half_shift_property_directly(self, p):
        h = p // 2
        for k in range(1, p + 1):
            for i in range(1, h + 1):
                if k in (i, i + h):
                    continue
                assert sigma(p, k, i + h) == sigma(p, k, i) - h

    @pytest.mark.parametrize("p", [8, 16])
    def test_column_halving_directly(self, p):
        h = p // 2
        for k in range(1, h + 1):
            for i in range(1, p + 1):
                if i in (k, k + h):
                    continue
                assert sigma(p, k, i) == sigma(p, k + h, i)


class TestExtendedMap:
    def test_fixes_point_one(self):
        ext = extend_sigma_p1(8)
        assert ext.apply(1) == 1
        assert ext.apply(2) == 8

    def test_is_bijection(self):
        ext = extend_sigma_p1(8)
        assert sorted(ext.apply(i) for i in range(1, 9)) == list(range(1, 9))

    def test_restriction_matches_map(self):
        ext = extend_sigma_p1(16)
        m = build_map(16, 1)
        for i in range(2, 17):
            assert ext.apply(i) == m.apply(i)

    def test_requires_order_8(self):
        with pytest.raises(ValueError):
            extend_sigma_p1(4)

    def test_direct_construction_validates(self):
        good = extend_sigma_p1(8).as_array().copy()
        ExtendedMap(8, good)
        bad = good.copy()
        bad[[1, 2]] = bad[[2, 1]]
        with pytest.raises(ValueError):
            ExtendedMap(8, bad)
