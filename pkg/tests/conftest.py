"""Shared fixtures: the expensive background solve and its derived products
are computed once per session."""

import pytest

import inflatonlab as il


@pytest.fixture(scope="session")
def params():
    return il.PotentialParams()


@pytest.fixture(scope="session")
def derived(params):
    return il.derive_constants(params)


@pytest.fixture(scope="session")
def background(params):
    return il.integrate(params)


@pytest.fixture(scope="session")
def consts():
    return il.DEFAULT_CONSTANTS


@pytest.fixture(scope="session")
def exit_point(background, consts):
    return il.solve_exit_reference(background, consts)


@pytest.fixture(scope="session")
def report(params, exit_point):
    return il.spectra_report(params, exit_point, gravity=il.GravityMode.QUANTUM)


@pytest.fixture(scope="session")
def scalar_mode(background, consts):
    return il.integrate_scalar(background, consts.q_R, consts)


@pytest.fixture(scope="session")
def tensor_mode(background, consts):
    return il.integrate_tensor(background, consts.q_R, consts)
