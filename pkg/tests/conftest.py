"""Shared session-scoped fixtures for the expensive representations."""

import time

import pytest

from qps_casimir import boson as bos
from qps_casimir import fermion as fer
from qps_casimir import hybrid as hyb
from qps_casimir.suites import RunConfig, SUITE_NAMES, run_suite


@pytest.fixture(scope="session")
def frep():
    return fer.build_fermion_rep()


@pytest.fixture(scope="session")
def xi(frep):
    return fer.build_xi(frep)


@pytest.fixture(scope="session")
def sigma(frep):
    return fer.build_sigma(frep)


@pytest.fixture(scope="session")
def brep3():
    return bos.build_boson_rep(3, 2)


@pytest.fixture(scope="session")
def upsilon3(brep3):
    return bos.build_upsilon(brep3)


@pytest.fixture(scope="session")
def convention_report():
    return hyb.resolve_conventions()


@pytest.fixture(scope="session")
def timed_suite_reports():
    """All four suites with their wall-clock times, run once per session."""
    cfg = RunConfig()
    reports = {}
    timings = {}
    for name in SUITE_NAMES:
        start = time.perf_counter()
        reports[name] = run_suite(cfg, name)[0]
        timings[name] = time.perf_counter() - start
    return reports, timings
