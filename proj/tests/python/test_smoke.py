import json
import math
import pathlib

import numpy as np
import pytest

import subdense

MODELS = pathlib.Path(__file__).resolve().parents[2] / "models"


def half_stable(t, x):
    return t / (2.0 * math.sqrt(math.pi)) * x ** -1.5 * math.exp(-t * t / (4.0 * x))


def test_exponent_closed_forms():
    m = subdense.Model.stable(0.5)
    assert m.phi(4.0) == pytest.approx(2.0, rel=1e-14)
    assert m.derivative(0.25, 2) == pytest.approx(-2.0, rel=1e-13)
    z = m.phi_complex(0.0, 1.0)
    assert z.real == pytest.approx(math.sqrt(0.5)) and z.imag == pytest.approx(math.sqrt(0.5))
    assert subdense.Model.pure_drift(1.0).phi(3.0) == pytest.approx(3.0)


def test_density_matches_closed_form():
    m = subdense.Model.load(str(MODELS / "stable05.json"))
    for t, x in [(1.0, 1.0), (1.0, 100.0), (4.0, 1.0)]:
        r = subdense.density(m, t, x, "both")
        assert r["value"] == pytest.approx(half_stable(t, x), rel=1e-7)
        assert r["ratio"] == pytest.approx(1.0, abs=1e-6)


def test_support_flag_and_errors():
    m = subdense.Model.stable(0.5, drift=1.0)
    r = subdense.density(m, 1.0, 0.9)
    assert r["value"] == 0.0 and r["flag"] == "support"
    with pytest.raises(subdense.CapabilityError):
        subdense.sharp_estimate(subdense.Model.gamma(), 1.0, 1.0)
    with pytest.raises(subdense.SpecFormatError):
        subdense.Model.from_json('{"family": "stable", "alpha": "half"}')
    with pytest.raises(subdense.SubdenseError):
        subdense.Model.stable(2.0)


def test_concentration_values():
    m = subdense.Model.stable(0.5)
    assert subdense.concentration_K(m, 1.0) == pytest.approx(0.188063, abs=1e-6)
    assert subdense.concentration_h(m, 1.0) == pytest.approx(0.752253, abs=1e-6)
    assert subdense.psi_star(m, 1.0) == pytest.approx(0.707107, abs=1e-6)


def test_estimates_and_green():
    m = subdense.Model.stable(0.5)
    regime, form, coord = subdense.sharp_estimate(m, 1.0, 100.0)
    assert regime == "tail" and form == pytest.approx(1e-3)
    g, est = subdense.green(m, 1.0)
    assert g == pytest.approx(1.0 / math.sqrt(math.pi), rel=1e-6) and est == pytest.approx(1.0)
    h = subdense.heat_kernel(m, 1.0, 10.0, json.dumps({"kind": "gaussian", "n": 1, "c1": 1, "c2": 1}))
    assert h["case"] == "far" and h["estimate_form"] == pytest.approx(0.01)
    assert h["lower"] <= h["upper"] * (1 + 1e-12)


def test_sampler_is_seeded_and_sorted():
    m = subdense.Model.stable(0.5)
    a = subdense.sample(m, 1.0, 2000, 1e-4, 3)
    b = subdense.sample(m, 1.0, 2000, 1e-4, 3)
    assert isinstance(a, np.ndarray) and a.shape == (2000,)
    assert np.array_equal(a, b)
    assert np.all(np.diff(a) >= 0)
    # P(T_1 <= 1) = erfc(1/2)
    assert abs(np.mean(a <= 1.0) - math.erfc(0.5)) < 0.04


def test_verify_reports_json():
    rep = subdense.verify(subdense.Model.pure_drift(1.0))
    assert rep["degenerate"] is True
