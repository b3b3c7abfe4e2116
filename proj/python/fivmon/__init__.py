"""Friction-induced vibration monitoring.

Thin Python layer over the C++ core. Arrays are NumPy float64; functions
that produce structured reports return plain dicts.
"""

import json as _json

from . import _fivmon
from ._fivmon import (
    AnalysisError,
    ContactSpec,
    InputError,
    band_energies,
    band_range,
    classify_regime,
    composite_modulus,
    composite_roughness,
    dominant_frequency,
    extract_band,
    film_thickness_ratio,
    fit_friction_trend,
    generate_squeal_records,
    hamrock_dowson_hmin,
    hertz_max_pressure,
    power_spectrum,
    reciprocating_velocities,
    rms,
    rms_series,
    segment_stages,
    select_band,
)

__version__ = _fivmon.__version__

SQUEAL_FREQUENCIES_HZ = (2325.0, 2412.0, 2381.0, 2384.0, 2425.0)


def identify_reference_frequency(records, sample_rate, lo_hz=1000.0, hi_hz=5000.0):
    return _json.loads(_fivmon.identify_reference_frequency(list(records), sample_rate, lo_hz, hi_hz))


def lubrication_report(spec, sigma1_um, sigma2_um, h_min_m=None):
    return _json.loads(_fivmon.lubrication_report(spec, sigma1_um, sigma2_um, h_min_m))


def generate_runin(scenario=None):
    """Synthetic running-in data set; ``scenario`` uses the synth JSON keys."""
    return _fivmon.generate_runin(_json.dumps(scenario or {}))


def analyze(records, t_capture, sample_rate, friction_times=None, friction_mu=None,
            squeal_records=None, reference_hz=None, config=None, clock=""):
    """Full pipeline; returns the report as a dict (same layout as the CLI)."""
    text = _fivmon.analyze(
        list(records), list(t_capture), sample_rate,
        None if friction_times is None else list(friction_times),
        None if friction_mu is None else list(friction_mu),
        None if squeal_records is None else list(squeal_records),
        reference_hz, _json.dumps(config or {}), clock)
    return _json.loads(text)


__all__ = [name for name in dir() if not name.startswith("_")]
