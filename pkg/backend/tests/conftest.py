"""Shared fixtures for the CloudChem test suite."""

from pathlib import Path

import numpy as np
import pytest

from backend.src.config import reset_settings
from backend.src.models.core import NuclearFrame, StoBasis
from backend.src.services.hartree_fock import scf_solve

from .factories import HELIUM_ZETAS, hydrogen_like, single_center_basis

DATA_DIR = Path(__file__).resolve().parents[1] / "data"


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Every test sees settings rebuilt from a clean environment."""
    for name in (
        "CLOUDCHEM_THREADS",
        "CLOUDCHEM_LOG_LEVEL",
        "CLOUDCHEM_OUTPUT_DIR",
        "CLOUDCHEM_RADIAL_NODES",
        "CLOUDCHEM_RADIAL_SCALE",
    ):
        monkeypatch.delenv(name, raising=False)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def helium_frame() -> NuclearFrame:
    return NuclearFrame.from_arrays([2.0], [(0.0, 0.0, 0.0)], labels=["He"])


@pytest.fixture(scope="session")
def helium_basis() -> StoBasis:
    return single_center_basis(HELIUM_ZETAS)


@pytest.fixture(scope="session")
def helium_scf(helium_frame, helium_basis):
    """Converged five-function helium ground state."""
    return scf_solve(helium_frame, helium_basis, 2)


@pytest.fixture(scope="session")
def hydrogen_frame() -> NuclearFrame:
    return NuclearFrame.from_arrays([1.0], [(0.0, 0.0, 0.0)], labels=["H"])


@pytest.fixture(scope="session")
def hydrogen_atom():
    """(basis, wavefunction) of the exact hydrogen ground state."""
    return hydrogen_like(1.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)
