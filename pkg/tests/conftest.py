from pathlib import Path

import hypothesis
import pytest

import coxlimits as cx

hypothesis.settings.register_profile(
    "ci", derandomize=True, max_examples=40, deadline=None
)
hypothesis.settings.load_profile("ci")

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


def _datum(name: str) -> cx.CoxeterDatum:
    return cx.load_datum(DATA / f"{name}.cox")


@pytest.fixture(scope="session")
def a2():
    return _datum("a2")


@pytest.fixture(scope="session")
def b2():
    return _datum("b2")


@pytest.fixture(scope="session")
def h3():
    return _datum("h3")


@pytest.fixture(scope="session")
def aff_dihedral():
    """Infinite dihedral group with Gram value -1 (affine)."""
    return _datum("afftilde1")


@pytest.fixture(scope="session")
def afftilde2():
    """Affine rank-3 group: triangle of 3-bonds."""
    return _datum("afftilde2")


@pytest.fixture(scope="session")
def dih15():
    """Infinite non-affine dihedral group, Gram value -1.5."""
    return _datum("dih15")


@pytest.fixture(scope="session")
def twin_affine():
    """Rank-5 group with two orthogonal affine dihedral parabolics."""
    return _datum("twin_affine")


@pytest.fixture(scope="session")
def tri101():
    return _datum("tri101")


@pytest.fixture(scope="session")
def triuniv():
    return _datum("triuniv")
