import pytest

from gammainterp.branchlog import rel_diff


def assert_close(a, b, tol):
    d = rel_diff(a, b)
    assert d <= tol, f"relative deviation {d:.3e} exceeds {tol:.1e}"


@pytest.fixture
def close():
    return assert_close
