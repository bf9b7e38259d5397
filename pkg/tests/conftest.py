from __future__ import annotations

import pytest

from equichern.data import bundled_group, bundled_group_names


@pytest.fixture(scope="session")
def groups():
    """All bundled groups, keyed by name."""
    return {name: bundled_group(name) for name in bundled_group_names()}


@pytest.fixture(scope="session")
def s3(groups):
    return groups["s3"]


@pytest.fixture(scope="session")
def d4(groups):
    return groups["d4"]


@pytest.fixture(scope="session")
def q8(groups):
    return groups["q8"]


@pytest.fixture(scope="session")
def a4(groups):
    return groups["a4"]


@pytest.fixture(scope="session")
def s4(groups):
    return groups["s4"]


@pytest.fixture(scope="session")
def z2(groups):
    return groups["z2"]


@pytest.fixture(scope="session")
def z4(groups):
    return groups["z4"]


@pytest.fixture(scope="session")
def z6(groups):
    return groups["z6"]
