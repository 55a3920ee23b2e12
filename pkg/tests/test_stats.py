import numpy as np
import pytest
from scipy import special
from scipy import stats as sps

import irsnoma.analysis
from irsnoma import stats


def test_ks_distance_of_exact_sample():
    x = np.random.default_rng(0).uniform(size=10**6)
    assert stats.ks_distance(x, lambda v: v) < 0.002
    ref = sps.kstest(x[:1000], "uniform").statistic
    assert stats.ks_distance(x[:1000], lambda v: v) == pytest.approx(ref, abs=1e-12)


def test_ks_distance_point_mass():
    assert stats.ks_distance(np.zeros(100), sps.norm.cdf) >= 0.5


def test_ks_inputs_checked():
    with pytest.raises(ValueError):
        stats.ks_distance([1.0], sps.norm.cdf)
    with pytest.raises(ValueError):
        stats.ks_distance([1.0, np.nan], sps.norm.cdf)


def test_ks_critical():
    assert stats.ks_critical(10**6) == pytest.approx(1.9495 / 1000, rel=1e-3)


def test_check_semantics():
    assert stats.Check("a", 1.0, 1.1, 0.2).passed
    assert not stats.Check("a", 1.5, 1.1, 0.2).passed
    assert stats.Check("a", -5.0, 0.0, 0.0, one_sided=True).passed
    assert not stats.Check("a", 0.1, 0.0, 0.0, one_sided=True).passed


def test_prop1_passes_for_both_parts():
    re = stats.test_prop1()
    im = stats.test_prop1(part="im")
    assert re.passed, re.to_text()
    assert im.passed, im.to_text()
    assert re.ks_distance < 0.002


def test_prop1_target_fails_for_large_array():
    assert not stats.test_prop1(trials=200_000, n=64).passed


def test_gaussian_fit_passes_at_64():
    rep = stats.test_lemma2(64)
    assert rep.passed, rep.to_text()
    names = [d[0] for d in rep.moment_deltas]
    assert "excess_kurtosis" in names and "ks_gaussian" not in names


def test_gaussian_fit_kurtosis_fails_for_single_element():
    rep = stats.test_lemma2(1, 200_000)
    kurt = next(c for c in rep.checks if c.name == "excess_kurtosis")
    assert not kurt.passed
    assert kurt.observed == pytest.approx(3.0, abs=0.3)


def test_variance_doubles_with_array_size():
    v16 = np.var(stats.sample_xi(16, 200_000, 4).real)
    v32 = np.var(stats.sample_xi(32, 200_000, 5).real)
    assert v32 / v16 == pytest.approx(2.0, abs=0.05)


def test_product_channel_passes_and_prints_targets():
    rep = stats.test_product_channel()
    assert rep.passed, rep.to_text()
    text = rep.to_text()
    # 1 - pi^2/16 = 0.3831497...
    assert "target=0.785398" in text and "target=0.38315 " in text
    assert text.startswith("[PASS] product_channel")


def test_product_channel_detects_corrupted_k1(monkeypatch):
    monkeypatch.setattr(irsnoma.analysis, "bessel_k1", lambda x: 1.05 * special.k1(x))
    rep = stats.test_product_channel(200_000)
    ks = next(c for c in rep.checks if c.name == "ks_product_sq")
    assert not ks.passed


def test_reports_are_deterministic():
    a = stats.test_product_channel(50_000, 3)
    b = stats.test_product_channel(50_000, 3)
    assert a.to_text() == b.to_text()
