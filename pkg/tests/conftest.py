"""Shared strategies and fixtures for the test suite."""

import numpy as np
import pytest
from hypothesis import strategies as st

from schlicht.series import TruncatedSeries


def bounded_complex(max_mod: float = 2.0):
    return st.builds(
        complex,
        st.floats(-max_mod, max_mod, allow_nan=False, allow_infinity=False),
        st.floats(-max_mod, max_mod, allow_nan=False, allow_infinity=False),
    )


@st.composite
def series_of_order(draw, order: int = 8, max_mod: float = 2.0):
    coeffs = draw(st.lists(bounded_complex(max_mod),
                           min_size=order + 1, max_size=order + 1))
    return TruncatedSeries(np.asarray(coeffs, dtype=complex))


@st.composite
def invertible_series(draw, order: int = 8):
    s = draw(series_of_order(order))
    c0 = draw(bounded_complex(2.0).filter(lambda c: abs(c) > 0.1))
    coeffs = s.coeffs.copy()
    coeffs[0] = c0
    return TruncatedSeries(coeffs)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
