import math

import numpy as np
import pytest

import fivmon

FS = 25641.03


def tone(freq, n=10240, amplitude=1.0):
    t = np.arange(n) / FS
    return amplitude * np.sin(2 * np.pi * freq * t)


def test_version():
    assert fivmon.__version__


def test_spectrum_and_dominant():
    x = tone(2332.0)
    f, p = fivmon.power_spectrum(x, FS)
    assert f.shape == p.shape == (1025,)
    assert abs(f[np.argmax(p)] - 2332.0) <= FS / 2048
    assert abs(fivmon.dominant_frequency(x, FS) - 2332.0) <= FS / 2048
    assert math.isclose(fivmon.rms(x), np.sqrt(np.mean(x * x)), rel_tol=1e-12)


def test_band_selection():
    assert fivmon.select_band(10240, FS, 7, 2385.0) == 23
    lo, hi = fivmon.band_range(10240, FS, 7, 23)
    assert lo == pytest.approx(23 * FS / 256)
    assert hi == pytest.approx(24 * FS / 256)


def test_hwpt_energy_and_extraction():
    rng = np.random.default_rng(1)
    x = rng.standard_normal(10000)
    e = fivmon.band_energies(x, FS, 7)
    assert e.shape == (128,)
    assert e.sum() == pytest.approx(np.mean(x * x), rel=1e-9)
    recon = sum(fivmon.extract_band(x, FS, 7, k) for k in range(128))
    assert np.max(np.abs(recon - x)) < 1e-9


def test_reference_frequency():
    recs = fivmon.generate_squeal_records(list(fivmon.SQUEAL_FREQUENCIES_HZ), FS, 10240, 20.0)
    ref = fivmon.identify_reference_frequency(recs, FS)
    assert abs(ref["mean_hz"] - 2385.4) <= FS / 2048


def test_lubrication():
    spec = fivmon.ContactSpec()
    assert fivmon.composite_modulus(spec) / 1e9 == pytest.approx(226.9, abs=0.1)
    rep = fivmon.lubrication_report(spec, 0.554, 0.279, h_min_m=5.51e-9)
    assert rep["lambda"] == pytest.approx(0.0089, abs=2e-4)
    assert rep["regime"] == "boundary"
    assert fivmon.classify_regime(2.0) == "mixed"


def test_friction_segmentation():
    t = np.arange(0, 60.01, 0.1)
    mu = 0.103 + 0.026 * np.exp(-t / 10.0)
    seg = fivmon.segment_stages(t, mu)
    assert seg["boundary_minutes"] == pytest.approx(40.0, abs=2.0)
    assert [s["label"] for s in seg["stages"]] == ["running-in", "stable"]


def test_analyze_small_scenario():
    scenario = {"duration_minutes": 12, "record_samples": 4096,
                "fiv_envelope": {"A_inf": 0.2, "tau_minutes": 1.5},
                "friction": {"tau_minutes": 2.0}}
    ds = fivmon.generate_runin(scenario)
    assert len(ds["records"]) == 120
    kwargs = dict(friction_times=ds["friction_times"], friction_mu=ds["friction_mu"],
                  reference_hz=2385.0, config={"slope_threshold_per_min": 5e-4}, clock="T")
    a = fivmon.analyze(ds["records"], ds["t_capture"], ds["sample_rate"], **kwargs)
    b = fivmon.analyze(ds["records"], ds["t_capture"], ds["sample_rate"], **kwargs)
    assert a == b
    assert a["selected_band"]["band_index"] == 23
    assert a["rms_trend"]["stages"][0]["trend"] == "rising"


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        fivmon.rms(np.array([]))
    with pytest.raises(fivmon.InputError):
        fivmon.band_range(100, FS, 7, 0)
    with pytest.raises(RuntimeError):
        fivmon.dominant_frequency(np.zeros(4096), FS)
