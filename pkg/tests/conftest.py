import pytest

from spinxfer.cli import run_reference_experiments


@pytest.fixture(scope="session")
def reference_results():
    """The eight ten-node reference runs, computed once per session."""
    return run_reference_experiments()
