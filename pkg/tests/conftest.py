import pytest

from dimerdual import catalog

HANDWRITTEN = ["c3", "conifold", "p2", "p1xp1", "inconsistent", "genus2"]


@pytest.fixture(scope="session")
def load():
    return catalog.load


def catalog_names():
    return catalog.available()


def torus_names():
    return [n for n in catalog.available() if catalog.ENTRIES[n].genus == 1]


def consistent_names():
    return [n for n in catalog.available() if catalog.ENTRIES[n].consistent]


def weak_fano_names():
    return [n for n in catalog.available() if catalog.ENTRIES[n].weak_fano]
