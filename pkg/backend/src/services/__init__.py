"""Services package for CloudChem computations."""

from .charge_density import (
    ChargeDensityField,
    NumberDensityField,
    density_from_determinant,
    density_from_explicit_pair,
    dipole_moment,
    expected_number_density,
    export_grid,
    rms_charge_radius,
    total_charge,
)
from .dft import (
    get_xc_functional,
    hartree_energy,
    kohn_sham_energy,
    lda_exchange,
    pz_self_interaction_correction,
    variational_probe,
)
from .electrostatics import (
    bohr_radius,
    classical_interaction_energy,
    hellmann_feynman_force,
    potential_from_nuclei,
    scale_experiment,
)
from .hartree_fock import decompose_energy, expectation_energy, scf_solve
from .ingestion import parse_basis, parse_geometry, parse_orbitals

__all__ = [
    "ChargeDensityField",
    "NumberDensityField",
    "density_from_determinant",
    "density_from_explicit_pair",
    "dipole_moment",
    "expected_number_density",
    "export_grid",
    "rms_charge_radius",
    "total_charge",
    "get_xc_functional",
    "hartree_energy",
    "kohn_sham_energy",
    "lda_exchange",
    "pz_self_interaction_correction",
    "variational_probe",
    "bohr_radius",
    "classical_interaction_energy",
    "hellmann_feynman_force",
    "potential_from_nuclei",
    "scale_experiment",
    "decompose_energy",
    "expectation_energy",
    "scf_solve",
    "parse_basis",
    "parse_geometry",
    "parse_orbitals",
]
