import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybridmethods.dataset import CleaningPolicy, clean
from hybridmethods.errors import DegenerateTableError, UnknownVariableError
from hybridmethods.stats import (
    ContingencyTable,
    Continuity,
    bonferroni,
    chi2_sf,
    chi_squared,
    company_size_table,
    regularized_gamma_q,
    company_size_independence,
    sector_independence,
)

from conftest import table_from_rows


def pearson_2x2_closed_form(a, b, c, d):
    """Independent oracle: N(ad-bc)^2 / (r1 r2 c1 c2)."""
    n = a + b + c + d
    return n * (a * d - b * c) ** 2 / ((a + b) * (c + d) * (a + c) * (b + d))


def yates_2x2_closed_form(a, b, c, d):
    n = a + b + c + d
    num = max(0.0, abs(a * d - b * c) - n / 2)
    return n * num * num / ((a + b) * (c + d) * (a + c) * (b + d))


class TestGamma:
    def test_q_at_zero_is_one(self):
        for a in (0.5, 1.0, 1.5, 2.0, 10.0):
            assert regularized_gamma_q(a, 0.0) == 1.0

    def test_q_vanishes_in_the_tail(self):
        for a in (0.5, 1.0, 5.0):
            assert regularized_gamma_q(a, 1e3) < 1e-12

    def test_against_scipy_grid(self):
        scipy_special = pytest.importorskip("scipy.special")
        for a in (0.5, 1.0, 1.5, 2.5, 5.0, 10.0):
            for x in (0.01, 0.3, 0.9, a, a + 1, 2 * a + 3, 30.0):
                ours = regularized_gamma_q(a, x)
                ref = float(scipy_special.gammaincc(a, x))
                assert ours == pytest.approx(ref, abs=1e-10)

    def test_known_quantiles(self):
        # upper-tail 0.05 quantiles of the chi-squared distribution
        assert chi2_sf(3.841458821, 1) == pytest.approx(0.05, abs=1e-6)
        assert chi2_sf(7.814727903, 3) == pytest.approx(0.05, abs=1e-6)

    @given(st.integers(min_value=1, max_value=12),
           st.floats(min_value=0, max_value=50),
           st.floats(min_value=0.001, max_value=10))
    @settings(max_examples=100, deadline=None)
    def test_p_monotone_in_statistic(self, df, chi2, delta):
        assert chi2_sf(chi2 + delta, df) <= chi2_sf(chi2, df) + 1e-12


class TestChiSquared:
    def test_perfect_independence_with_yates_clamp(self):
        result = chi_squared(ContingencyTable.from_rows([[10, 10], [10, 10]]))
        assert result.chi2 == 0.0
        assert result.p == 1.0

    def test_continuity_off_matches_direct_sum(self):
        table = ContingencyTable.from_rows([[10, 20], [30, 40]])
        result = chi_squared(table, Continuity.OFF)
        assert result.chi2 == pytest.approx(pearson_2x2_closed_form(10, 20, 30, 40),
                                            rel=1e-12)
        assert result.chi2 == pytest.approx(0.7936507936507936, rel=1e-12)

    def test_continuity_on_matches_yates_closed_form(self):
        table = ContingencyTable.from_rows([[10, 20], [30, 40]])
        result = chi_squared(table, Continuity.ON)
        assert result.chi2 == pytest.approx(yates_2x2_closed_form(10, 20, 30, 40),
                                            rel=1e-12)
        assert result.chi2 == pytest.approx(0.44642857142857145, rel=1e-12)

    def test_auto_applies_yates_only_to_2x2(self):
        square = ContingencyTable.from_rows([[10, 20], [30, 40]])
        wide = ContingencyTable.from_rows([[10, 20, 5], [30, 40, 10]])
        assert chi_squared(square).chi2 == chi_squared(square, Continuity.ON).chi2
        assert chi_squared(wide).chi2 == chi_squared(wide, Continuity.OFF).chi2
        assert chi_squared(wide).df == 2

    def test_reference_sector_rows(self):
        # Published sector tables from the survey analysis; the Yates value
        # for the first row is 1.3647 (its published statistic, 1.37, is
        # inconsistent with its own published counts).
        automotive = chi_squared(ContingencyTable.from_rows([[14, 66], [163, 515]]))
        assert round(automotive.chi2, 2) == 1.36
        assert round(automotive.p, 2) == 0.24
        defense = chi_squared(ContingencyTable.from_rows([[2, 26], [175, 555]]))
        assert round(defense.chi2, 2) == 3.38
        assert round(defense.p, 2) == 0.07

    def test_degenerate_rows_and_columns(self):
        with pytest.raises(DegenerateTableError):
            chi_squared(ContingencyTable.from_rows([[0, 0], [5, 5]]))
        with pytest.raises(DegenerateTableError):
            chi_squared(ContingencyTable.from_rows([[5, 0], [5, 0]]))
        with pytest.raises(DegenerateTableError):
            chi_squared(ContingencyTable.from_rows([[0, 0], [0, 0]]))

    @given(st.tuples(st.integers(1, 200), st.integers(1, 200),
                     st.integers(1, 200), st.integers(1, 200)))
    @settings(max_examples=200, deadline=None)
    def test_2x2_symmetries_and_closed_form(self, counts):
        a, b, c, d = counts
        base = ContingencyTable.from_rows([[a, b], [c, d]])
        swapped_rows = ContingencyTable.from_rows([[c, d], [a, b]])
        swapped_cols = ContingencyTable.from_rows([[b, a], [d, c]])
        transposed = ContingencyTable.from_rows([[a, c], [b, d]])
        for continuity in (Continuity.ON, Continuity.OFF):
            x = chi_squared(base, continuity).chi2
            assert chi_squared(swapped_rows, continuity).chi2 == pytest.approx(x, rel=1e-12)
            assert chi_squared(swapped_cols, continuity).chi2 == pytest.approx(x, rel=1e-12)
            assert chi_squared(transposed, continuity).chi2 == pytest.approx(x, rel=1e-12)
        off = chi_squared(base, Continuity.OFF).chi2
        assert off == pytest.approx(pearson_2x2_closed_form(a, b, c, d), rel=1e-9)

    def test_result_significance_flag(self):
        table = ContingencyTable.from_rows([[50, 10], [10, 50]])
        strict = chi_squared(table, alpha=1e-12)
        loose = chi_squared(table, alpha=0.05)
        assert loose.significant and not strict.significant


class TestBonferroni:
    def test_reference_correction(self):
        assert bonferroni(0.05, 20) == 0.0025

    def test_single_test_identity(self):
        assert bonferroni(0.05, 1) == 0.05

    def test_arithmetic(self):
        assert bonferroni(0.01, 4) == 0.0025

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            bonferroni(0.05, 0)
        with pytest.raises(ValueError):
            bonferroni(0.0, 5)
        with pytest.raises(ValueError):
            bonferroni(1.5, 5)


def h2_fixture_table():
    # Three sectors; multi-select: r5 selects sectors 1 and 2.
    return table_from_rows(
        ["PU04", "D005_s01", "D005_s02", "D005_s03"],
        [
            [True, True, False, False],
            [True, True, False, False],
            [False, True, False, False],
            [True, False, True, False],
            [False, True, True, False],
            [False, False, True, False],
            [True, False, False, True],
            [True, False, False, True],
            [False, False, False, True],
            [True, False, False, True],
        ])


class TestHypothesisDrivers:
    def test_h2_matches_manual_contingency(self):
        table = h2_fixture_table()
        results = sector_independence(table, alpha=0.05)
        assert [r.sector for r in results] == ["D005_s01", "D005_s02", "D005_s03"]
        by_sector = {r.sector: r for r in results}
        # sector 1: selected by r1,r2,r3,r5 -> NH 2 (r3,r5), H 2; others: r4,r6..r10
        assert by_sector["D005_s01"].table.counts == ((2, 2), (2, 4))
        # sector 2: r4,r5,r6 -> NH 2, H 1; others NH 2, H 5
        assert by_sector["D005_s02"].table.counts == ((2, 1), (2, 5))
        # sector 3: r7..r10 -> NH 1, H 3; others NH 3, H 3
        assert by_sector["D005_s03"].table.counts == ((1, 3), (3, 3))
        for r in results:
            manual = chi_squared(r.table, Continuity.AUTO,
                                 alpha=bonferroni(0.05, 3))
            assert r.result.chi2 == manual.chi2
            assert r.result.p == manual.p
            assert r.result.corrected_alpha == pytest.approx(0.05 / 3)

    def test_h2_degenerate_sector_warns_without_result(self):
        table = table_from_rows(
            ["PU04", "D005_s01"],
            [[True, True], [True, True], [True, False], [True, False]])
        results = sector_independence(table)
        assert results[0].result is None
        assert results[0].warning is not None

    def test_h2_sector_with_zero_selections_excluded_with_warning(self):
        table = table_from_rows(
            ["PU04", "D005_s01", "D005_s02"],
            [[True, True, False], [False, True, False]])
        results = sector_independence(table)
        by_sector = {r.sector: r for r in results}
        assert by_sector["D005_s02"].table is None
        assert "no selections" in by_sector["D005_s02"].warning

    def test_h2_requires_sector_variables(self):
        table = table_from_rows(["PU04"], [[True]])
        with pytest.raises(UnknownVariableError):
            sector_independence(table)

    def test_h1_company_size_cross_tab(self):
        rows = []
        # 4 size categories x (no, yes) counts
        grid = {"Large": (5, 10), "Medium": (4, 12), "MicroAndSmall": (6, 9),
                "VeryLarge": (3, 11)}
        for size, (no, yes) in grid.items():
            rows += [[False, size]] * no + [[True, size]] * yes
        table = table_from_rows(["PU04", "D001"], rows)
        tab, result = company_size_independence(table)
        assert tab.row_labels == ("Large", "Medium", "MicroAndSmall", "VeryLarge")
        assert tab.counts == ((5, 10), (4, 12), (6, 9), (3, 11))
        assert result.df == 3  # 2 x 4 table

    def test_h1_skips_rows_missing_either_variable(self):
        table = table_from_rows(
            ["PU04", "D001"],
            [[True, "Large"], [None, "Large"], [True, None],
             [False, "Medium"], [True, "Medium"]])
        tab = company_size_table(table)
        assert tab.total == 3

    def test_h1_after_cleaning_merges_micro_and_small(self):
        table = table_from_rows(
            ["PU04", "D001"],
            [[True, "Micro"], [False, "Small"], [True, "Medium"],
             [False, "Micro"], [True, "Large"], [False, "Large"]])
        cleaned = clean(table, CleaningPolicy())
        tab = company_size_table(cleaned)
        assert tab.row_labels == ("Large", "Medium", "MicroAndSmall")
        assert tab.counts[2] == (2, 1)
