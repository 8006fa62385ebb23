"""Shared fixtures and field constructors for the test suite."""

import pytest

from hfeit import FieldSpec, build_basis, scenario_full, scenario_truncated

Z = (0.0, 0.0, 1.0)
X = (1.0, 0.0, 0.0)
Y = (0.0, 1.0, 0.0)


def probe_field(rabi=0.5, pol=Z):
    return FieldSpec("probe", ("ground", "intermediate"), rabi, pol)


def coupling_field(rabi=20.0, pol=Z):
    return FieldSpec("coupling", ("intermediate", "rydberg_lower"), rabi, pol)


def rf_field(rabi=200.0, pol=Z):
    return FieldSpec("rf", ("rydberg_lower", "rydberg_upper"), rabi, pol)


@pytest.fixture(scope="session")
def full_basis():
    return build_basis(scenario_full())


@pytest.fixture(scope="session")
def truncated_basis():
    return build_basis(scenario_truncated())
