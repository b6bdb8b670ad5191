import numpy as np
import pytest

from chernricci.catalog import default_catalog, instantiate

ACCEPTANCE = {}


def catalog_instances(samples=1):
    """(entry, params, Instance) for every row, ``samples`` parameter draws per family."""
    out = []
    for entry in default_catalog():
        for params in entry.samples(samples):
            out.append((entry, params, instantiate(entry, params=params)))
    return out


def structure(algebra, variant=None, J=None, **params):
    return instantiate(algebra, variant, J, params).structure


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, line = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {line}")
