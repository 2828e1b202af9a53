"""Shared fixtures: expensive objects built once per session."""

import numpy as np
import pytest

from oscillax import delta_method, forms, lfunction


@pytest.fixture(scope="session")
def delta_q10():
    """Calibrated delta expansion at Q = 10 (full zeta span)."""
    return delta_method.build(10.0)


@pytest.fixture(scope="session")
def delta_form():
    """Weight-12 form with a table long enough for the dual sums."""
    return forms.delta_qexp(30000)


@pytest.fixture(scope="session")
def weight16_form():
    return forms.eigenform_weight16(30000)


@pytest.fixture(scope="session")
def l_context():
    return lfunction.context_delta_e4delta()


@pytest.fixture()
def rng():
    return np.random.default_rng(0)
