import math

import numpy as np
import pytest

import srgkit


def test_interval_inversion():
    inv = srgkit.region_inverse(srgkit.interval_region(1.0, 2.0))
    centre, radius = inv["upper"][0]
    assert centre == pytest.approx(0.75)
    assert radius == pytest.approx(0.25)
    assert srgkit.region_rmin(inv) == pytest.approx(1.0)


def test_unbounded_inverse_serializes_infinity():
    inv = srgkit.region_inverse(srgkit.interval_region(-1.0, 1.0))
    assert inv["infinity"] is True
    assert math.isinf(srgkit.region_rmin(inv))


def test_first_order_lag():
    A, B, C, D = (np.array([[v]]) for v in (-1.0, 1.0, 1.0, 0.0))
    g = srgkit.freq_response(A, B, C, D, 1.0)
    assert g[0, 0] == pytest.approx(1.0 / (1.0 + 1.0j))
    region = srgkit.srg_lti(A, B, C, D, base_points=11)
    # the Nyquist circle lies in the SRG; its centre does not
    assert srgkit.region_contains(region, 1.0 / (1.0 + 1.0j), tol=1e-9)
    assert srgkit.region_contains(region, 1.0 / (1.0 - 2.0j), tol=1e-9)
    assert not srgkit.region_contains(region, 2.0 + 0.0j)


def test_sector_region():
    r = srgkit.sector_region([(0.0, 1.0), (-1.0, 0.5)])
    assert srgkit.region_rmin(r) == pytest.approx(1.0)


def test_feedback_certificate():
    rep = srgkit.analyze_feedback(srgkit.interval_region(0.5, 1.0), srgkit.interval_region(0.0, 1.0),
                                  resolution=0.01, tau_points=21)
    assert rep["verdict"] == "certified"
    assert 1.0 <= rep["gain_bound"] <= 1.03


def test_errors_map_to_python_exceptions():
    with pytest.raises(srgkit.InputError):
        srgkit.sector_region([(1.0, 0.0)])
    with pytest.raises(srgkit.HypothesisError):
        srgkit.analyze_feedback(srgkit.interval_region(0.5, 1.0), srgkit.interval_region(0.0, 1.0),
                                incremental=False, resolution=0.01)


def test_lure_example_coarse():
    model = srgkit.example_model("lure_2_3")
    rep = srgkit.analyze_lfr(model, resolution=0.01, tau_points=21)
    assert rep["verdict"] == "certified"
    gain = srgkit.empirical_gain(model, multisines=2, noise=2)
    assert gain["value"] <= rep["gain_bound"]
    assert srgkit.references()["lure kappa=(2,3)"] == pytest.approx(2.33)
