import pytest

from symred.catalog import catalog_model
from symred.model import SymmetryModel


@pytest.fixture(scope="session")
def rotation() -> SymmetryModel:
    return catalog_model("so3_r3")


@pytest.fixture(scope="session")
def cotangent() -> SymmetryModel:
    return catalog_model("so3_cotangent_r6")


@pytest.fixture(scope="session")
def diagonal_r6() -> SymmetryModel:
    return catalog_model("so3_diag_r6")


@pytest.fixture(scope="session")
def diagonal_r9() -> SymmetryModel:
    return catalog_model("so3_diag_r9")


@pytest.fixture(scope="session")
def scaled() -> SymmetryModel:
    return catalog_model("so3_diag_r9_scaled")


@pytest.fixture(scope="session")
def resonance() -> SymmetryModel:
    return catalog_model("kl_resonance")
