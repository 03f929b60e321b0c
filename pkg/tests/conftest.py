import numpy as np
import pytest
from scipy.signal import find_peaks

import movingwell as mw


@pytest.fixture(scope="session")
def P():
    return mw.PhysicalParams.natural()


@pytest.fixture(scope="session")
def P_si():
    return mw.PhysicalParams.si()


def peak_positions(x, density, frac=0.5):
    """Locations of local maxima above frac * global max (plateau-safe)."""
    idx, _ = find_peaks(density, height=frac * float(np.max(density)))
    return np.asarray(x)[idx]


def overlap_fidelity(f, g):
    """Fidelity after resampling g onto f's grid."""
    return mw.fidelity(f, mw.resample(g, f.grid))
