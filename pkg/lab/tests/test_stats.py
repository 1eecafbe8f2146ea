import math

import numpy as np
import pytest
from scipy import stats as scipy_stats

from evolab.stats import chi2_sf
from evolab.stats import format_p
from evolab.stats import kruskal_wallis
from evolab.stats import summarize
from evolab.utils.errors import DegenerateDataError
from evolab.utils.errors import InvalidInputError


class TestKruskalWallis:
    def test_separated_groups(self):
        result = kruskal_wallis([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
        assert result.h == pytest.approx(7.2)
        assert result.df == 2
        assert result.p == pytest.approx(math.exp(-3.6), abs=1e-6)
        assert result.tie_correction == 1.0

    def test_identical_groups(self):
        result = kruskal_wallis([[1, 2], [1, 2]])
        assert result.h == pytest.approx(0.0)
        assert result.p == 1.0
        assert result.tie_correction == pytest.approx(0.8)

    def test_six_groups(self):
        rng = np.random.default_rng(0)
        result = kruskal_wallis([rng.standard_normal(10) + shift for shift in range(6)])
        assert result.df == 5

    def test_matches_scipy_with_ties(self):
        groups = [[1.0, 2.0, 2.0, 5.0], [2.0, 3.0, 3.0], [5.0, 5.0, 8.0, 9.0, 1.0]]
        ours = kruskal_wallis(groups)
        reference = scipy_stats.kruskal(*groups)
        assert ours.h == pytest.approx(reference.statistic, rel=1e-12)
        assert ours.p == pytest.approx(reference.pvalue, rel=1e-9)

    def test_invariant_under_monotone_transform(self):
        groups = [[0.1, 0.4, 0.2], [0.9, 0.3], [0.5, 0.8, 0.7, 0.6]]
        transformed = [np.exp(np.asarray(g) * 5.0) for g in groups]
        assert kruskal_wallis(groups).h == pytest.approx(kruskal_wallis(transformed).h)

    def test_all_values_identical(self):
        with pytest.raises(DegenerateDataError):
            kruskal_wallis([[4.0, 4.0], [4.0, 4.0, 4.0]])

    @pytest.mark.parametrize("groups", [[[1, 2, 3]], [[1, 2], []], [[1], [2]]])
    def test_invalid_input(self, groups):
        with pytest.raises(InvalidInputError):
            kruskal_wallis(groups)


class TestChi2Sf:
    def test_two_degrees_of_freedom_closed_form(self):
        for x in np.linspace(0.0, 50.0, 201):
            assert abs(chi2_sf(float(x), 2) - math.exp(-x / 2.0)) <= 1e-10

    @pytest.mark.parametrize("df", [1, 3, 4, 5, 10])
    def test_matches_scipy(self, df):
        for x in (0.5, 2.0, 7.5, 17.864, 40.0):
            assert chi2_sf(x, df) == pytest.approx(scipy_stats.chi2.sf(x, df), abs=1e-10)

    def test_strictly_decreasing(self):
        values = [chi2_sf(x, 5) for x in (1.0, 5.0, 10.0, 20.0)]
        assert values == sorted(values, reverse=True)
        assert len(set(values)) == 4

    def test_highly_significant_sweep(self):
        assert chi2_sf(25.84, 5) < 0.001

    def test_invalid(self):
        with pytest.raises(InvalidInputError):
            chi2_sf(1.0, 0)
        with pytest.raises(InvalidInputError):
            chi2_sf(-1.0, 2)


def test_summarize():
    summary = summarize([1.0, 2.0, 3.0, 4.0, 5.0])
    assert summary.mean == 3.0
    assert summary.median == 3.0
    assert summary.iqr == 2.0
    assert summary.std == pytest.approx(math.sqrt(2.5))
    assert summarize([7.0]).std == 0.0
    with pytest.raises(InvalidInputError):
        summarize([])


@pytest.mark.parametrize("p, text", [(0.0004, "p<.001"), (0.2631, "p=0.263"), (1.0, "p=1.000")])
def test_format_p(p, text):
    assert format_p(p) == text
