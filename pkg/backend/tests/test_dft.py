"""Tests for the Kohn-Sham energy functional and its pieces."""

import math

import numpy as np
import pytest

from backend.src.errors import QuadratureError, UnsupportedGeometryError
from backend.src.models.core import HARTREE_TO_EV, BoxGridSpec, DeterminantWavefunction, NuclearFrame
from backend.src.services.charge_density import (
    ChargeDensityField,
    DensityProvenance,
    density_from_determinant,
)
from backend.src.services.dft import (
    EXCHANGE_CONSTANT,
    external_energy,
    get_xc_functional,
    hartree_energy,
    kohn_sham_energy,
    lda_exchange,
    pz_self_interaction_correction,
    ts_noninteracting,
    variational_probe,
)
from backend.src.services.hartree_fock import expectation_energy
from backend.src.services.ingestion import load_basis, load_geometry, load_orbitals
from backend.src.services import dft
from backend.src.services.quadrature import box_grid, spherical_grid

from . import oracles
from .factories import hydrogen_like


def hydrogen_density(zeta=1.0):
    basis, wavefunction = hydrogen_like(zeta)
    return density_from_determinant(wavefunction, basis)


class TestHartreeEnergy:
    """Tests for hartree_energy."""

    def test_hydrogen(self):
        """Half of (aa|aa) = 5/16 hartree."""
        assert hartree_energy(hydrogen_density()) == pytest.approx(5.0 / 16.0, rel=1e-10)

    def test_helium_equals_twice_coulomb(self, helium_scf, helium_basis):
        """For a paired state the functional is the full self term 2J."""
        field = density_from_determinant(helium_scf.wavefunction, helium_basis)
        energy = hartree_energy(field)
        assert energy == pytest.approx(helium_scf.energy.self_repulsion, rel=1e-8)
        assert energy * HARTREE_TO_EV == pytest.approx(2 * 27.9, abs=0.1)

    def test_non_spherical_density_unsupported(self, data_dir):
        frame = load_geometry(data_dir / "h2.geom")
        basis = load_basis(data_dir / "h2.basis", frame)
        field = density_from_determinant(load_orbitals(data_dir / "h2.orb", basis), basis)
        with pytest.raises(UnsupportedGeometryError):
            hartree_energy(field)

    def test_coarse_rule_disagreement_raises(self):
        """A radial mapping far too short for the density trips the error estimate."""
        field = hydrogen_density(1.0).model_copy(update={"decay": 1e3})
        with pytest.raises(QuadratureError) as exc_info:
            hartree_energy(field, n_nodes=16)
        assert exc_info.value.exit_code == 3

    @pytest.mark.parametrize("factor", [0.5, 2.0, 3.0])
    def test_quadratic_in_density_scale(self, helium_scf, helium_basis, factor):
        field = density_from_determinant(helium_scf.wavefunction, helium_basis)
        assert hartree_energy(field.scaled(factor)) == pytest.approx(factor**2 * hartree_energy(field), rel=1e-12)


class TestExternalEnergy:
    """Tests for external_energy."""

    def test_hydrogen_on_center(self, hydrogen_frame):
        assert external_energy(hydrogen_density(), hydrogen_frame) == pytest.approx(-1.0, rel=1e-10)

    def test_helium_matches_analytic(self, helium_scf, helium_basis, helium_frame):
        field = density_from_determinant(helium_scf.wavefunction, helium_basis)
        energy = external_energy(field, helium_frame)
        assert energy == pytest.approx(helium_scf.energy.electron_nucleus, rel=1e-9)
        assert energy * HARTREE_TO_EV == pytest.approx(-183.7, abs=0.1)

    def test_no_electrons(self, helium_frame):
        basis, _ = hydrogen_like()
        empty = density_from_determinant(DeterminantWavefunction(), basis)
        assert external_energy(empty, helium_frame) == 0.0

    def test_explicit_grid_replaces_shell_theorem(self, hydrogen_frame):
        field = hydrogen_density()
        grid = spherical_grid((0.0, 0.0, 0.0), n_radial=24, n_theta=4, n_phi=8)
        on_grid = external_energy(field, hydrogen_frame, grid)
        assert on_grid == pytest.approx(grid.integrate(field(grid.points) / np.linalg.norm(grid.points, axis=1)))
        assert on_grid == pytest.approx(-1.0, rel=1e-3)


class TestKineticAndExchange:
    """Tests for ts_noninteracting and lda_exchange."""

    def test_helium_kinetic(self, helium_scf, helium_basis):
        ts = ts_noninteracting(helium_scf.wavefunction, helium_basis)
        assert ts == pytest.approx(helium_scf.energy.kinetic, rel=1e-14)
        assert ts * HARTREE_TO_EV == pytest.approx(77.9, abs=0.1)

    def test_uniform_density_closed_form(self):
        spec = BoxGridSpec(nx=4, ny=4, nz=4, half_width=1.0)
        n = 0.3
        field = ChargeDensityField(
            evaluator=lambda points: np.full(len(points), -n),
            electron_count=2,
            provenance=DensityProvenance.DETERMINANT,
        )
        expected = -EXCHANGE_CONSTANT * n ** (4.0 / 3.0) * 8.0
        assert lda_exchange(field, box_grid(spec)) == pytest.approx(expected, rel=1e-12)

    def test_hydrogen_matches_oracle(self):
        expected = -EXCHANGE_CONSTANT * oracles.radial_integral(
            lambda r: (np.exp(-2.0 * r) / math.pi) ** (4.0 / 3.0), 8.0 / 3.0
        )
        assert lda_exchange(hydrogen_density()) == pytest.approx(expected, rel=1e-8)

    def test_zero_density(self):
        basis, _ = hydrogen_like()
        empty = density_from_determinant(DeterminantWavefunction(), basis)
        assert lda_exchange(empty) == 0.0

    @pytest.mark.parametrize("scale", [0.5, 2.0, 3.0])
    def test_coordinate_scaling(self, scale):
        """E_x of the scaled 1s density is scale times the original."""
        assert lda_exchange(hydrogen_density(scale)) == pytest.approx(
            scale * lda_exchange(hydrogen_density(1.0)), rel=1e-10
        )


class TestSelfInteractionCorrection:
    """Tests for pz_self_interaction_correction."""

    def test_helium_hartree_part(self, helium_scf, helium_basis):
        """Each orbital density carries half of J, so the correction is -J."""
        correction = pz_self_interaction_correction(
            helium_scf.wavefunction, helium_basis, include_exchange=False
        )
        assert correction == pytest.approx(-0.5 * helium_scf.energy.self_repulsion, rel=1e-8)
        assert correction * HARTREE_TO_EV == pytest.approx(-2 * 13.95, abs=0.1)

    def test_zero_orbitals(self, hydrogen_atom):
        assert pz_self_interaction_correction(DeterminantWavefunction(), hydrogen_atom[0]) == 0.0

    def test_spin_polarized_scales_exchange(self, hydrogen_atom):
        basis, wavefunction = hydrogen_atom
        hartree_only = pz_self_interaction_correction(wavefunction, basis, include_exchange=False)
        unpolarized = pz_self_interaction_correction(wavefunction, basis)
        polarized = pz_self_interaction_correction(wavefunction, basis, spin_polarized=True)
        assert polarized - hartree_only == pytest.approx(2 ** (1.0 / 3.0) * (unpolarized - hartree_only), rel=1e-12)


class TestKohnShamEnergy:
    """Tests for kohn_sham_energy."""

    def test_exact_xc_reproduces_hartree_fock_for_helium(self, helium_scf, helium_basis, helium_frame):
        breakdown = kohn_sham_energy(
            helium_scf.wavefunction, helium_frame, get_xc_functional("exact-from-hf"), helium_basis
        )
        assert breakdown.total == pytest.approx(helium_scf.energy.total, abs=1e-10)
        assert breakdown.total_ev == pytest.approx(-77.9, abs=0.1)

    def test_exact_xc_reproduces_hartree_fock_for_hydrogen(self, hydrogen_atom, hydrogen_frame):
        basis, wavefunction = hydrogen_atom
        breakdown = kohn_sham_energy(wavefunction, hydrogen_frame, get_xc_functional("exact-from-hf"), basis)
        assert breakdown.total == pytest.approx(expectation_energy(hydrogen_frame, wavefunction, basis), abs=1e-10)

    def test_exact_xc_is_exchange_minus_half_self_repulsion(self, helium_scf, helium_basis, helium_frame):
        breakdown = kohn_sham_energy(
            helium_scf.wavefunction, helium_frame, get_xc_functional("exact-from-hf"), helium_basis
        )
        energy = helium_scf.energy
        assert breakdown.xc == pytest.approx(-0.5 * energy.self_repulsion - energy.exchange, rel=1e-14)

    def test_exact_xc_does_not_absorb_external_error(self, helium_scf, helium_basis, helium_frame, monkeypatch):
        """A wrong external term must show up in the total instead of cancelling against xc."""
        original = dft.external_energy
        monkeypatch.setattr(dft, "external_energy", lambda *args: original(*args) + 0.5)
        breakdown = kohn_sham_energy(
            helium_scf.wavefunction, helium_frame, get_xc_functional("exact-from-hf"), helium_basis
        )
        assert breakdown.total - helium_scf.energy.total == pytest.approx(0.5, abs=1e-8)

    def test_exact_xc_does_not_absorb_hartree_error(self, hydrogen_atom, hydrogen_frame, monkeypatch):
        basis, wavefunction = hydrogen_atom
        original = dft.hartree_energy
        monkeypatch.setattr(dft, "hartree_energy", lambda *args: original(*args) * 2.0)
        breakdown = kohn_sham_energy(wavefunction, hydrogen_frame, get_xc_functional("exact-from-hf"), basis)
        assert breakdown.total - (-0.5) == pytest.approx(5.0 / 16.0, rel=1e-8)

    def test_no_grid_built_without_grid_functional(self, hydrogen_atom, hydrogen_frame, monkeypatch):
        def fail(field):
            raise AssertionError("grid should not be built")

        monkeypatch.setattr(dft, "default_grid", fail)
        basis, wavefunction = hydrogen_atom
        breakdown = kohn_sham_energy(wavefunction, hydrogen_frame, get_xc_functional("none"), basis)
        assert breakdown.external == pytest.approx(-1.0, rel=1e-10)

    def test_explicit_grid_reaches_external_term(self, hydrogen_atom, hydrogen_frame):
        basis, wavefunction = hydrogen_atom
        grid = spherical_grid((0.0, 0.0, 0.0), n_radial=24, n_theta=4, n_phi=8)
        breakdown = kohn_sham_energy(wavefunction, hydrogen_frame, get_xc_functional("none"), basis, grid=grid)
        field = density_from_determinant(wavefunction, basis)
        assert breakdown.external == external_energy(field, hydrogen_frame, grid)

    def test_no_xc_overcounts_by_coulomb(self, helium_scf, helium_basis, helium_frame):
        """Without exchange-correlation the paired-electron Hartree term counts J once too often."""
        breakdown = kohn_sham_energy(helium_scf.wavefunction, helium_frame, get_xc_functional("none"), helium_basis)
        coulomb = 0.5 * helium_scf.energy.self_repulsion
        assert breakdown.total - helium_scf.energy.total == pytest.approx(coulomb, rel=1e-7)
        assert breakdown.xc == 0.0

    @pytest.mark.parametrize("zeta", [1.0, 2.0, 3.0])
    def test_one_electron_sic_is_exact(self, zeta):
        """Hydrogen-like ions: SIC removes the spurious Hartree term entirely."""
        basis, wavefunction = hydrogen_like(zeta)
        frame = NuclearFrame.from_arrays([zeta], [(0.0, 0.0, 0.0)])
        breakdown = kohn_sham_energy(wavefunction, frame, get_xc_functional("none"), basis, sic=True)
        assert breakdown.hartree_term + breakdown.xc == pytest.approx(0.0, abs=1e-15)
        assert breakdown.total == pytest.approx(-0.5 * zeta**2, rel=1e-10)

    def test_lda_breakdown(self, helium_scf, helium_basis, helium_frame):
        breakdown = kohn_sham_energy(
            helium_scf.wavefunction, helium_frame, get_xc_functional("lda-exchange"), helium_basis
        )
        assert breakdown.xc < 0.0
        assert breakdown.xc_name == "lda-exchange"
        with_sic = kohn_sham_energy(
            helium_scf.wavefunction, helium_frame, get_xc_functional("lda-exchange"), helium_basis, sic=True
        )
        assert with_sic.sic
        assert with_sic.total != breakdown.total

    def test_unknown_functional(self):
        with pytest.raises(ValueError):
            get_xc_functional("b3lyp")


class TestVariationalProbe:
    """Tests for variational_probe."""

    def test_no_violations_around_helium(self, helium_scf, helium_basis, helium_frame):
        report = variational_probe(
            helium_frame,
            helium_basis,
            get_xc_functional("exact-from-hf"),
            scale=1e-3,
            count=200,
            seed=7,
            reference=helium_scf.wavefunction,
        )
        assert report.violations == 0
        assert report.worst_delta >= -report.tolerance
        assert report.perturbation_count == 200

    def test_zero_scale_changes_nothing(self, helium_scf, helium_basis, helium_frame):
        report = variational_probe(
            helium_frame,
            helium_basis,
            get_xc_functional("none"),
            scale=0.0,
            count=10,
            reference=helium_scf.wavefunction,
        )
        assert report.max_delta == 0.0
        assert report.worst_delta == 0.0

    def test_deterministic_across_worker_counts(self, helium_scf, helium_basis, helium_frame):
        kwargs = dict(
            frame=helium_frame,
            basis=helium_basis,
            xc=get_xc_functional("lda-exchange"),
            scale=1e-2,
            count=12,
            seed=3,
            reference=helium_scf.wavefunction,
        )
        assert variational_probe(max_workers=1, **kwargs) == variational_probe(max_workers=4, **kwargs)
