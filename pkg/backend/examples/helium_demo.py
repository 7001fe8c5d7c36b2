#!/usr/bin/env python3
"""
Demo script for the helium atom.
Converges orbitals, prints the energy decomposition and compares Kohn-Sham
functionals evaluated on the same density.
"""

import sys
import time
from pathlib import Path

# Add the repository root to the path
sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from backend.src.services.charge_density import density_from_determinant, rms_charge_radius, total_charge
from backend.src.services.dft import get_xc_functional, kohn_sham_energy, variational_probe
from backend.src.services.hartree_fock import optimize_exponent_scale, scf_solve
from backend.src.services.ingestion import load_basis, load_geometry

DATA_DIR = Path(__file__).parent.parent / "data"


def demo_hartree_fock():
    """Converge helium in the five-function basis."""
    print("=== Hartree-Fock Demo ===")

    frame = load_geometry(DATA_DIR / "he.geom")
    basis = load_basis(DATA_DIR / "he5.basis", frame)

    start_time = time.time()
    result = scf_solve(frame, basis, 2)
    end_time = time.time()

    report = result.energy
    print(f"Converged in {len(result.trace)} iterations ({(end_time - start_time) * 1000:.2f}ms)")
    print(f"  kinetic            {report.kinetic_ev:10.3f} eV")
    print(f"  electron-nucleus   {report.electron_nucleus_ev:10.3f} eV")
    print(f"  electron repulsion {report.electron_repulsion_total_ev:10.3f} eV")
    print(f"  self-repulsion     {report.self_repulsion_ev:10.3f} eV")
    print(f"  exchange           {report.exchange_ev:10.3f} eV")
    print(f"  total              {report.total_ev:10.3f} eV")
    print()
    return frame, basis, result


def demo_single_exponent(frame):
    """Optimize one exponent and show the virial ratio."""
    print("=== Single Exponent Demo ===")

    basis = load_basis(DATA_DIR / "he1.basis", frame)
    scan = optimize_exponent_scale(frame, basis, 2)
    print(f"Optimal zeta: {basis.primitives[0].zeta * scan.scale:.6f}")
    print(f"Energy: {scan.total:.8f} hartree, <T>/|E| = {scan.virial_ratio:.8f}")
    print()


def demo_density(basis, result):
    """Charge and size of the electron cloud."""
    print("=== Charge Density Demo ===")

    field = density_from_determinant(result.wavefunction, basis)
    print(f"Total charge: {total_charge(field):.8f} e")
    print(f"RMS radius: {rms_charge_radius(field):.6f} bohr")
    print()


def demo_functionals(frame, basis, result):
    """Evaluate several exchange-correlation choices on one density."""
    print("=== Kohn-Sham Demo ===")

    for name, sic in [("none", False), ("none", True), ("lda-exchange", False), ("lda-exchange", True), ("exact-from-hf", False)]:
        breakdown = kohn_sham_energy(result.wavefunction, frame, get_xc_functional(name), basis, sic=sic)
        label = f"{name}{' + SIC' if sic else ''}"
        print(f"  {label:<20} {breakdown.total:12.6f} hartree")

    probe = variational_probe(frame, basis, get_xc_functional("exact-from-hf"), 1e-3, count=50, reference=result.wavefunction)
    print(f"Variational probe: {probe.violations} of {probe.perturbation_count} perturbations lowered the energy")
    print()


def main():
    """Run all demos."""
    print("CloudChem Helium Demo")
    print("=" * 50)

    try:
        frame, basis, result = demo_hartree_fock()
        demo_single_exponent(frame)
        demo_density(basis, result)
        demo_functionals(frame, basis, result)
        print("Demo completed successfully!")
    except Exception as e:
        print(f"Demo failed with error: {e}")
        sys.exit(1)


if __name__ == "__main__":
    main()
