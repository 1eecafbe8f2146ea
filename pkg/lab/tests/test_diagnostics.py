import pytest

from evolab.metrics.diagnostics import AdviceLevel
from evolab.metrics.diagnostics import assess_variation_impact
from evolab.metrics.iev import IevSample
from evolab.metrics.iev import snr
from evolab.utils.errors import InvalidInputError
from evolab.utils.window import RollingWindow


def samples(values):
    return [IevSample(iev=v, snr=snr(v), generation=g) for g, v in enumerate(values)]


class TestRollingWindow:
    def test_drops_oldest(self):
        window = RollingWindow([1, 2, 3, 4], capacity=3)
        assert list(window) == [2, 3, 4]
        assert len(window) == window.capacity

    def test_unbounded(self):
        window = RollingWindow(capacity=-1)
        for value in range(100):
            window.append(value)
        assert len(window) == 100


class TestAssessVariationImpact:
    def test_low_iev_is_ok(self):
        advice = assess_variation_impact(samples([0.1] * 5), [1, 2, 3, 4, 5])
        assert advice.level is AdviceLevel.OK
        assert advice.mean_iev == pytest.approx(0.1)

    def test_high_iev_with_progress(self):
        advice = assess_variation_impact(samples([0.3] * 5), [1, 2, 3, 4, 5])
        assert advice.level is AdviceLevel.HIGH_IMPACT
        assert advice.progress == pytest.approx(4.0)

    def test_high_iev_without_progress(self):
        advice = assess_variation_impact(samples([0.3] * 5), [2, 2, 2, 2, 2])
        assert advice.level is AdviceLevel.STAGNATING_UNDER_NOISE
        assert advice.mean_snr == pytest.approx(snr(0.3))

    def test_only_recent_window_counts(self):
        iev_values = [0.9] * 10 + [0.1] * 20
        fitness = list(range(30))
        advice = assess_variation_impact(samples(iev_values), fitness, window=20)
        assert advice.mean_iev == pytest.approx(0.1)
        assert advice.progress == pytest.approx(19.0)

    def test_empty(self):
        with pytest.raises(InvalidInputError):
            assess_variation_impact([], [])

    def test_length_mismatch(self):
        with pytest.raises(InvalidInputError):
            assess_variation_impact(samples([0.1, 0.2]), [1.0])
