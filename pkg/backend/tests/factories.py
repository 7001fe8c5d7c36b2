"""Small builders for test systems."""

from backend.src.models.core import DeterminantWavefunction, Spin, SpinOrbital, StoBasis, StoPrimitive

HELIUM_ZETAS = (1.41714, 2.37682, 4.39628, 6.52699, 7.94252)


def single_center_basis(zetas, position=(0.0, 0.0, 0.0)) -> StoBasis:
    return StoBasis(
        primitives=tuple(StoPrimitive(zeta=z, center=0, position=position) for z in zetas)
    )


def hydrogen_like(zeta: float = 1.0, position=(0.0, 0.0, 0.0)):
    """One electron in a single 1s primitive, as (basis, wavefunction)."""
    basis = single_center_basis([zeta], position)
    wavefunction = DeterminantWavefunction(
        orbitals=(SpinOrbital(coefficients=(1.0,), spin=Spin.UP),)
    )
    return basis, wavefunction
