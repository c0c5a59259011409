from importlib import resources

import numpy as np
import pytest

from herdlab.model import ModelParams
from herdlab.signal import InformationSignal, load_signal_csv


@pytest.fixture(scope="session")
def bundled_signal():
    with resources.as_file(resources.files("herdlab") / "data" / "synthetic_264.csv") as path:
        return load_signal_csv(path, "unit")


@pytest.fixture
def driven_params():
    return ModelParams(N=200, a=5e-3, h0=1e-3, F=0.02)


@pytest.fixture
def two_month_signal():
    return InformationSignal.from_monthly(np.array([0.5, -0.3]), period=20)
