"""CloudChem: Hartree-Fock, charge densities and energy functionals for small atoms."""

__version__ = "0.1.0"
