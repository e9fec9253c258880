"""Scaled relative graph analysis of Lur'e-type systems.

Thin wrapper over the C++ core: regions, models and reports travel as JSON
and come back as plain dicts.
"""

import json

from . import _srgkit
from ._srgkit import HypothesisError, InputError, NumericalError

__all__ = [
    "HypothesisError",
    "InputError",
    "NumericalError",
    "analyze_feedback",
    "analyze_lfr",
    "empirical_gain",
    "example_model",
    "freq_response",
    "interval_region",
    "references",
    "region_contains",
    "region_inverse",
    "region_rmin",
    "sector_region",
    "srg_lti",
]


def _dump(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def interval_region(lo, hi):
    return json.loads(_srgkit.interval_region(lo, hi))


def sector_region(channels):
    return json.loads(_srgkit.sector_region([tuple(c) for c in channels]))


def region_contains(region, z, tol=1e-12):
    return _srgkit.region_contains(_dump(region), complex(z), tol)


def region_rmin(region):
    return _srgkit.region_rmin(_dump(region))


def region_inverse(region):
    return json.loads(_srgkit.region_inverse(_dump(region)))


def freq_response(A, B, C, D, omega):
    return _srgkit.freq_response(A, B, C, D, omega)


def srg_lti(A, B, C, D, base_points=41, freq_points=400):
    return json.loads(_srgkit.srg_lti(A, B, C, D, base_points, freq_points))


def analyze_lfr(model, resolution=0.002, tau_points=101, assume_wellposed=False,
                improved=True, non_incremental=False):
    return json.loads(_srgkit.analyze_lfr(_dump(model), resolution, tau_points,
                                          assume_wellposed, improved, non_incremental))


def analyze_feedback(h1, h2, incremental=True, resolution=0.002, tau_points=101,
                     assume_wellposed=False):
    return json.loads(_srgkit.analyze_feedback(_dump(h1), _dump(h2), incremental,
                                               resolution, tau_points, assume_wellposed))


def empirical_gain(model, seed=1, multisines=20, noise=20, incremental=True):
    return json.loads(_srgkit.empirical_gain(_dump(model), seed, multisines, noise, incremental))


def example_model(name):
    """One of 'lure_2_3', 'lure_0.5_1.5', 'msd', 'iqc'."""
    return json.loads(_srgkit.example_model(name))


def references():
    return dict(_srgkit.references())
