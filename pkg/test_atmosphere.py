"""
Test script for the Hartle-Hawking atmosphere: temperatures, inversion,
peak and critical-constant searches.
Run directly for a ✓/✗ summary, or collect with pytest.
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / 'src'))

from atmosphere import (
    AtmospherePoint,
    critical_constant,
    dhh_from_observables,
    hawking_temperature,
    local_temperature,
    min_radicand,
    peak_radius,
    radicand,
    temperature_ratio,
)
from errors import DomainError, PoleError, SearchError, SubcriticalError

FIGURE_DHH = [23.03, 40.0, 60.0, 80.0]


def analytic_critical_constant():
    """Tangency of the radicand with zero: 18u² - u - 1 = 0, u = r_H / r."""
    u = (1.0 + math.sqrt(73.0)) / 36.0
    return (-(1.0 + 2.0 * u) / (u * u) - 36.0 * math.log(u) - 9.0) / 4.0, 1.0 / u


# ==================== Temperatures ====================

def test_hawking_temperature():
    assert hawking_temperature(1.0).value == pytest.approx(0.07957747, abs=1e-8)
    assert hawking_temperature(2.0).value == pytest.approx(0.03978873, abs=1e-8)
    assert hawking_temperature(3.0).value / hawking_temperature(1.5).value == 0.5
    with pytest.raises(DomainError):
        hawking_temperature(0.0)


def test_local_temperature_at_horizon_and_infinity():
    for d_hh in FIGURE_DHH:
        assert local_temperature(AtmospherePoint(1.0, 1.0, d_hh)).value == 0.0
        far = local_temperature(AtmospherePoint(1e6, 1.0, d_hh)).value
        assert abs(far / hawking_temperature(1.0).value - 1.0) < 1e-5


def test_local_temperature_scales_with_horizon():
    near = local_temperature(AtmospherePoint(2.0, 1.0, 40.0)).value
    big = local_temperature(AtmospherePoint(6.0, 3.0, 40.0)).value
    assert big == pytest.approx(near / 3.0, rel=1e-14)


def test_subcritical_radicand():
    with pytest.raises(SubcriticalError) as info:
        local_temperature(AtmospherePoint(3.77, 1.0, 0.0))
    assert info.value.r == 3.77
    assert info.value.radicand < 0.0
    assert info.value.reason == "subcritical-D"


def test_point_validation():
    with pytest.raises(DomainError):
        AtmospherePoint(0.5, 1.0, 40.0)
    with pytest.raises(DomainError):
        AtmospherePoint(2.0, 0.0, 40.0)
    with pytest.raises(DomainError):
        temperature_ratio(0.9, 40.0)


def test_temperature_increases_with_dhh():
    ratios = [temperature_ratio(2.0, d) for d in FIGURE_DHH]
    assert all(a < b for a, b in zip(ratios, ratios[1:]))


# ==================== Inversion ====================

def test_inversion_examples():
    assert dhh_from_observables(2.0, 0.0) == pytest.approx(0.25 * (-17.0 + 36.0 * math.log(2.0)), abs=1e-12)
    tau = temperature_ratio(2.0, 40.0)
    assert abs(dhh_from_observables(2.0, tau) - 40.0) < 1e-10
    with pytest.raises(PoleError):
        dhh_from_observables(1.0, 0.5)
    with pytest.raises(DomainError):
        dhh_from_observables(2.0, -0.1)


def test_inversion_round_trip():
    rng = np.random.default_rng(1234)
    xs = rng.uniform(1.01, 20.0, size=50)
    ds = rng.uniform(24.0, 100.0, size=50)
    for x, d_hh in zip(xs, ds):
        tau = local_temperature(AtmospherePoint(float(x), 1.0, float(d_hh))).value / hawking_temperature(1.0).value
        assert abs(dhh_from_observables(float(x), tau) - d_hh) < 1e-10, f"x={x}, D={d_hh}"


# ==================== Peak ====================

def test_peak_radius_examples():
    assert peak_radius(23.03) == pytest.approx(1.43, abs=0.01)
    for d_hh in FIGURE_DHH:
        assert 1.42 <= peak_radius(d_hh) <= 1.52
    assert peak_radius(1e6) == pytest.approx(1.5, abs=1e-3)


def test_peak_is_a_maximum():
    for d_hh in FIGURE_DHH:
        x_peak = peak_radius(d_hh)
        peak = temperature_ratio(x_peak, d_hh)
        for dx in (-1e-3, 1e-3):
            assert temperature_ratio(x_peak + dx, d_hh) < peak


def test_peak_is_stationary():
    h = 1e-6
    t_h_sq = hawking_temperature(1.0).value ** 2
    for d_hh in FIGURE_DHH:
        x_peak = peak_radius(d_hh)
        slope = (temperature_ratio(x_peak + h, d_hh) ** 2 - temperature_ratio(x_peak - h, d_hh) ** 2) / (2 * h)
        assert abs(slope * t_h_sq) < 1e-6 * t_h_sq


def test_ratio_approaches_one():
    gaps = [abs(temperature_ratio(x, 40.0) - 1.0) for x in (1e3, 1e4, 1e5)]
    assert gaps[0] > gaps[1] > gaps[2]


def test_peak_radius_rejects_subcritical():
    with pytest.raises(SubcriticalError):
        peak_radius(0.0)


# ==================== Critical constant ====================

def test_radicand_vectorises():
    xs = np.array([1.5, 2.0, 4.0])
    values = radicand(xs, 40.0)
    assert values.shape == (3,)
    assert values[1] == pytest.approx(radicand(2.0, 40.0))


def test_critical_constant_tangency():
    report = critical_constant()
    d_c, x_t = analytic_critical_constant()

    assert abs(report.d_c - d_c) < 1e-5
    assert report.tangency_x == pytest.approx(x_t, rel=1e-3)
    assert abs(report.tangency_residual) < 1e-5
    assert report.tangency_residual >= 0.0
    assert min_radicand(report.d_c)[1] >= 0.0
    assert report.published_value == 23.03
    assert report.deviation == pytest.approx(report.d_c - 23.03)


def test_critical_constant_brackets_positivity():
    d_c = critical_constant().d_c
    xs = np.linspace(1.0, 100.0, 10_001)[1:]
    assert np.any(radicand(xs, d_c - 1.0) < 0.0)
    assert np.all(radicand(xs, d_c + 1.0) >= 0.0)


def test_min_radicand_sign():
    d_c, _ = analytic_critical_constant()
    assert min_radicand(d_c - 0.5)[1] < 0.0
    assert min_radicand(d_c + 0.5)[1] > 0.0


def test_critical_constant_bad_bounds():
    with pytest.raises(SearchError):
        critical_constant((10.0, 50.0))
    with pytest.raises(SearchError):
        critical_constant((5.0, 1.0))


def test_critical_report_serialises():
    out = critical_constant().to_dict()
    assert out['criterion'] == "radicand-positivity"
    assert out['search_bounds'] == [0.0, 50.0]
    assert 'deviation' in out


TESTS = [
    ("Hawking temperature", test_hawking_temperature),
    ("Horizon and infinity limits", test_local_temperature_at_horizon_and_infinity),
    ("Horizon scaling", test_local_temperature_scales_with_horizon),
    ("Subcritical radicand", test_subcritical_radicand),
    ("Point validation", test_point_validation),
    ("T_HH increasing in D_HH", test_temperature_increases_with_dhh),
    ("Inversion examples", test_inversion_examples),
    ("Inversion round trip", test_inversion_round_trip),
    ("Peak radius", test_peak_radius_examples),
    ("Peak is a maximum", test_peak_is_a_maximum),
    ("Peak is stationary", test_peak_is_stationary),
    ("Ratio tends to one", test_ratio_approaches_one),
    ("Peak rejects subcritical D", test_peak_radius_rejects_subcritical),
    ("Radicand vectorises", test_radicand_vectorises),
    ("Critical constant tangency", test_critical_constant_tangency),
    ("Critical constant bracket", test_critical_constant_brackets_positivity),
    ("Inner minimum sign", test_min_radicand_sign),
    ("Critical bad bounds", test_critical_constant_bad_bounds),
    ("Critical report", test_critical_report_serialises),
]


def main():
    print("\n" + "=" * 50)
    print("  Atmosphere Test Suite")
    print("=" * 50)

    results = []
    for name, test in TESTS:
        try:
            test()
            results.append((name, True))
        except Exception as e:
            print(f"  ✗ {name}: {type(e).__name__}: {e}")
            results.append((name, False))

    print("\n" + "=" * 50)
    print("  SUMMARY")
    print("=" * 50)

    for name, passed in results:
        status = "✓ PASS" if passed else "✗ FAIL"
        print(f"  {status}: {name}")
    return all(passed for _, passed in results)


if __name__ == "__main__":
    sys.exit(0 if main() else 1)
