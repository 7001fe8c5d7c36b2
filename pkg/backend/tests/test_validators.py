"""Tests for overlap and orbital validators."""

import logging

import numpy as np
import pytest

from backend.src.errors import LinearDependenceError, OrbitalValidationError
from backend.src.models.core import DeterminantWavefunction, Spin, SpinOrbital
from backend.src.models.validators import OrbitalValidator, OverlapValidator
from backend.src.services.integrals import overlap_matrix

from .factories import single_center_basis


def _orbitals(*rows):
    return DeterminantWavefunction(
        orbitals=tuple(SpinOrbital(coefficients=tuple(c), spin=s) for s, c in rows)
    )


class TestOverlapValidator:
    """Tests for OverlapValidator."""

    def test_positive_definite_basis_passes(self, helium_basis):
        S = overlap_matrix(helium_basis)
        assert OverlapValidator.smallest_eigenvalue(S) > 1e-4
        OverlapValidator.require_positive_definite(S)

    def test_repeated_exponent_is_linearly_dependent(self):
        """Two identical primitives make S singular."""
        S = overlap_matrix(single_center_basis([1.0, 1.0]))
        with pytest.raises(LinearDependenceError) as exc_info:
            OverlapValidator.require_positive_definite(S)
        assert exc_info.value.details["smallest_eigenvalue"] <= 1e-10
        assert exc_info.value.code == "LINEAR_DEPENDENCE"


class TestOrbitalValidator:
    """Tests for OrbitalValidator."""

    def test_paired_orbitals_accepted_unchanged(self):
        basis = single_center_basis([1.0])
        wavefunction = _orbitals((Spin.UP, [1.0]), (Spin.DOWN, [1.0]))
        assert OrbitalValidator.validate(wavefunction, overlap_matrix(basis)) is wavefunction

    def test_same_spin_duplicate_rejected(self):
        """Two identical spin-up orbitals have same-spin overlap 1."""
        basis = single_center_basis([1.0])
        wavefunction = _orbitals((Spin.UP, [1.0]), (Spin.UP, [1.0]))
        with pytest.raises(OrbitalValidationError, match="not S-orthonormal"):
            OrbitalValidator.validate(wavefunction, overlap_matrix(basis))

    def test_small_deviation_renormalized(self, caplog):
        """Deviations between the exact and reject thresholds are removed with a warning."""
        basis = single_center_basis([1.0])
        wavefunction = _orbitals((Spin.UP, [1.0 + 1e-8]))
        with caplog.at_level(logging.WARNING):
            fixed = OrbitalValidator.validate(wavefunction, overlap_matrix(basis))
        assert fixed.orbitals[0].coefficients[0] == pytest.approx(1.0, abs=1e-14)
        assert "Orthonormalizing" in caplog.text

    def test_large_deviation_rejected(self):
        basis = single_center_basis([1.0])
        with pytest.raises(OrbitalValidationError):
            OrbitalValidator.validate(_orbitals((Spin.UP, [1.01])), overlap_matrix(basis))

    def test_opposite_spins_need_not_be_orthogonal(self):
        """Orthogonality is checked within spin blocks only."""
        basis = single_center_basis([1.0, 2.0])
        S = overlap_matrix(basis)
        first = np.array([1.0, 0.0])
        second = np.array([0.0, 1.0])
        wavefunction = _orbitals((Spin.UP, first), (Spin.DOWN, second))
        assert first @ S @ second > 0.5
        assert OrbitalValidator.max_deviation(wavefunction, S) == pytest.approx(0.0, abs=1e-14)

    def test_dimension_mismatch_rejected(self):
        basis = single_center_basis([1.0, 2.0])
        with pytest.raises(OrbitalValidationError, match="coefficients"):
            OrbitalValidator.validate(_orbitals((Spin.UP, [1.0])), overlap_matrix(basis))

    def test_same_spin_determinant_vanishes_at_coincidence(self, rng):
        """The same-spin pair amplitude is antisymmetric and zero at x1 = x2."""
        basis = single_center_basis([1.0, 2.0])
        S = overlap_matrix(basis)
        orthonormal = np.linalg.inv(np.linalg.cholesky(S)).T
        wavefunction = _orbitals((Spin.UP, orthonormal[:, 0]), (Spin.UP, orthonormal[:, 1]))
        points = rng.normal(size=(10, 2, 3))
        swapped = points[:, ::-1, :]
        amplitude = OrbitalValidator.same_spin_determinant(wavefunction, basis, 0, 1, points)
        exchanged = OrbitalValidator.same_spin_determinant(wavefunction, basis, 0, 1, swapped)
        np.testing.assert_allclose(amplitude, -exchanged, atol=1e-14)

        coincident = np.repeat(points[:, :1, :], 2, axis=1)
        np.testing.assert_allclose(
            OrbitalValidator.same_spin_determinant(wavefunction, basis, 0, 1, coincident), 0.0, atol=1e-14
        )
