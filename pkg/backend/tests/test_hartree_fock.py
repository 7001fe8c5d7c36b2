"""Tests for the Roothaan SCF and the energy decomposition."""

import numpy as np
import pytest

from backend.src.errors import LinearDependenceError, ScfConvergenceError, UnsupportedGeometryError
from backend.src.models.core import (
    HARTREE_TO_EV,
    DeterminantWavefunction,
    NuclearFrame,
    ScfSettings,
    Spin,
    SpinOrbital,
    StoBasis,
    StoPrimitive,
)
from backend.src.services.hartree_fock import (
    decompose_energy,
    expectation_energy,
    optimize_exponent_scale,
    orient_columns,
    scf_solve,
)
from backend.src.services.integrals import overlap_matrix

from .factories import single_center_basis

CLEMENTI_COEFFICIENTS = (0.76838, 0.22346, 0.04082, -0.00994, 0.00230)


def minimal_helium_energy(zeta: float) -> float:
    return zeta**2 - 4.0 * zeta + 5.0 / 8.0 * zeta


class TestMinimalHelium:
    """Single-exponent helium against its closed form."""

    @pytest.mark.parametrize("zeta", [1.0, 27.0 / 16.0, 2.0])
    def test_energy_closed_form(self, helium_frame, zeta):
        result = scf_solve(helium_frame, single_center_basis([zeta]), 2)
        assert result.converged
        assert result.energy.total == pytest.approx(minimal_helium_energy(zeta), abs=1e-10)

    def test_optimal_exponent(self, helium_frame):
        """Scanning a uniform scale on zeta = 1 finds zeta = 27/16 and the virial ratio 1."""
        scan = optimize_exponent_scale(helium_frame, single_center_basis([1.0]), 2)
        assert scan.scale == pytest.approx(27.0 / 16.0, abs=1e-6)
        assert scan.total == pytest.approx(-((27.0 / 16.0) ** 2), abs=1e-10)
        assert scan.virial_ratio == pytest.approx(1.0, abs=1e-6)


class TestHeliumGroundState:
    """Five-exponent helium reproduces the published breakdown."""

    def test_energy_breakdown_ev(self, helium_scf):
        report = helium_scf.energy
        assert report.total_ev == pytest.approx(-77.9, abs=0.1)
        assert report.kinetic_ev == pytest.approx(77.9, abs=0.1)
        assert report.electron_nucleus_ev == pytest.approx(-183.7, abs=0.1)
        assert report.electron_repulsion_total_ev == pytest.approx(83.7, abs=0.1)
        assert report.self_repulsion_ev == pytest.approx(2 * 27.9, abs=0.1)
        assert report.exchange == 0.0
        assert report.nucleus_nucleus == 0.0

    def test_coefficients(self, helium_scf):
        """Converged coefficients follow the tabulated ones, largest entry positive."""
        orbital = helium_scf.wavefunction.orbitals[0].vector
        assert orbital[0] > 0
        np.testing.assert_allclose(np.abs(orbital), np.abs(CLEMENTI_COEFFICIENTS), atol=5e-3)
        assert list(np.sign(orbital)) == list(np.sign(CLEMENTI_COEFFICIENTS))

    def test_orbitals_are_paired_and_normalized(self, helium_scf, helium_basis):
        wavefunction = helium_scf.wavefunction
        assert wavefunction.is_restricted_closed_shell
        S = overlap_matrix(helium_basis)
        for orbital in wavefunction.orbitals:
            assert orbital.vector @ S @ orbital.vector == pytest.approx(1.0, abs=1e-12)

    def test_trace_is_monotone(self, helium_scf):
        energies = [entry.energy for entry in helium_scf.trace]
        assert all(b <= a + 1e-12 for a, b in zip(energies, energies[1:]))
        assert helium_scf.iterations == len(helium_scf.trace)

    def test_converged_commutator(self, helium_scf):
        assert helium_scf.commutator_norm < 1e-8
        assert helium_scf.orbital_energies[0] < 0

    def test_seeded_restart_converges_in_one_iteration(self, helium_frame, helium_basis, helium_scf):
        result = scf_solve(helium_frame, helium_basis, 2, initial_guess=helium_scf.wavefunction)
        assert result.iterations == 1
        assert result.energy.total == pytest.approx(helium_scf.energy.total, abs=1e-10)

    def test_sign_flip_leaves_energy_unchanged(self, helium_frame, helium_basis, helium_scf):
        flipped = helium_scf.wavefunction.sign_flipped(0)
        assert expectation_energy(helium_frame, flipped, helium_basis) == pytest.approx(
            helium_scf.energy.total, abs=1e-12
        )

    def test_perturbations_never_lower_energy(self, helium_frame, helium_basis, helium_scf, rng):
        """Variational principle over 100 normalized perturbations."""
        S = overlap_matrix(helium_basis)
        reference = helium_scf.energy.total
        spatial = helium_scf.wavefunction.orbitals[0].vector
        for _ in range(100):
            trial = spatial + 1e-3 * rng.uniform(-1.0, 1.0, size=spatial.shape)
            trial = trial / np.sqrt(trial @ S @ trial)
            wavefunction = DeterminantWavefunction.restricted(trial[:, None])
            assert expectation_energy(helium_frame, wavefunction, helium_basis) >= reference - 1e-12


class TestScfFailures:
    """Error paths of scf_solve."""

    def test_iteration_limit(self, helium_frame, helium_basis):
        with pytest.raises(ScfConvergenceError) as exc_info:
            scf_solve(helium_frame, helium_basis, 2, ScfSettings(max_iterations=1))
        error = exc_info.value
        assert len(error.trace) == 1
        assert error.exit_code == 2
        assert error.result is not None and not error.result.converged

    @pytest.mark.parametrize("electrons", [0, 1, 3])
    def test_odd_or_zero_electrons(self, helium_frame, helium_basis, electrons):
        with pytest.raises(ValueError, match="even electron count"):
            scf_solve(helium_frame, helium_basis, electrons)

    def test_too_many_electrons(self, helium_frame):
        with pytest.raises(ValueError, match="do not fit"):
            scf_solve(helium_frame, single_center_basis([1.0]), 4)

    def test_linear_dependence(self, helium_frame):
        with pytest.raises(LinearDependenceError):
            scf_solve(helium_frame, single_center_basis([1.5, 1.5]), 2)

    def test_multi_center_basis(self):
        frame = NuclearFrame.from_arrays([1.0, 1.0], [(0, 0, 0), (0, 0, 1.4)])
        basis = StoBasis(
            primitives=(
                StoPrimitive(zeta=1.0, center=0),
                StoPrimitive(zeta=1.0, center=1, position=(0, 0, 1.4)),
            )
        )
        with pytest.raises(UnsupportedGeometryError):
            scf_solve(frame, basis, 2)


class TestDecomposition:
    """Tests for decompose_energy."""

    def test_hydrogen_exact(self, hydrogen_frame, hydrogen_atom):
        """One electron: repulsion and self-repulsion cancel exactly."""
        basis, wavefunction = hydrogen_atom
        report = decompose_energy(hydrogen_frame, wavefunction, basis)
        assert report.repulsion_minus_self == 0.0
        assert report.coulomb_integral == 0.0
        assert report.self_repulsion == pytest.approx(5.0 / 8.0, rel=1e-14)
        assert report.total == pytest.approx(-0.5, abs=1e-14)
        assert report.total_ev == pytest.approx(-0.5 * HARTREE_TO_EV)

    def test_same_spin_pair_has_exchange(self, helium_frame):
        """Two orthonormal spin-up orbitals pick up a positive exchange term."""
        basis = single_center_basis([1.0, 3.0])
        S = overlap_matrix(basis)
        orthonormal = np.linalg.inv(np.linalg.cholesky(S)).T
        wavefunction = DeterminantWavefunction(
            orbitals=tuple(
                SpinOrbital(coefficients=tuple(orthonormal[:, k]), spin=Spin.UP) for k in range(2)
            )
        )
        report = decompose_energy(helium_frame, wavefunction, basis)
        assert report.exchange > 0.0
        opposite = DeterminantWavefunction(
            orbitals=(
                SpinOrbital(coefficients=tuple(orthonormal[:, 0]), spin=Spin.UP),
                SpinOrbital(coefficients=tuple(orthonormal[:, 1]), spin=Spin.DOWN),
            )
        )
        assert decompose_energy(helium_frame, opposite, basis).exchange == 0.0

    def test_sum_identity_on_every_iterate(self, helium_frame, helium_basis):
        with pytest.raises(ScfConvergenceError) as exc_info:
            scf_solve(helium_frame, helium_basis, 2, ScfSettings(max_iterations=3))
        report = exc_info.value.result.energy
        expected = (
            report.kinetic
            + report.nucleus_nucleus
            + report.electron_nucleus
            + report.electron_repulsion_total
            - report.self_repulsion
            - report.exchange
        )
        assert report.total == pytest.approx(expected, abs=1e-12)


class TestOrientColumns:
    """Tests for orient_columns."""

    def test_largest_entry_positive(self):
        oriented = orient_columns(np.array([[0.1, -0.9], [-0.8, 0.2]]))
        np.testing.assert_array_equal(oriented, [[-0.1, -0.9], [0.8, 0.2]])
