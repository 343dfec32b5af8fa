import pytest

from walklab import report


@pytest.fixture(scope="session")
def nine_fits():
    """The nine deviation series + power-law fits on the standard window
    (expensive; computed once per session)."""
    return report.compute_deviation_fits()
