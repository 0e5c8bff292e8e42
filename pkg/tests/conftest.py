"""Shared fixtures and cached builders for the test suite.

The expensive objects (correlator tables, tau series) are pure functions of
(r, weight), so they are built once per session and shared.  Import the
cached builders directly where parametrization is more natural than a
fixture.
"""

import pathlib
import sys
from functools import lru_cache

try:
    import gdtau  # noqa: F401
except ImportError:  # running from a checkout without an editable install
    sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

import pytest

from gdtau import connected_correlators_pde, series_from_correlators, tau_exp


@lru_cache(maxsize=None)
def conn_table(r: int, weight: int):
    """Connected correlators through `weight`, d alphabet (density route)."""
    return connected_correlators_pde(r, weight)


@lru_cache(maxsize=None)
def bgw_tau(r: int, cap: int):
    """The tau series itself (constant term 1), exact through `cap`."""
    return tau_exp(series_from_correlators(conn_table(r, cap)))


@pytest.fixture(scope="session")
def tau3():
    return bgw_tau(3, 8)


@pytest.fixture(scope="session")
def tau4():
    return bgw_tau(4, 8)
