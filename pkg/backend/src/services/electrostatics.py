"""
Electrostatic consequences of a charge density: nuclear potentials,
clamped-density Hellmann-Feynman forces and the hydrogenic response to
rescaled electron mass and charge.
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np

from ..errors import SingularPotentialError, UnsupportedGeometryError
from ..models.core import (
    DeterminantWavefunction,
    NuclearFrame,
    ScaledConstants,
    Spin,
    SpinOrbital,
    StoBasis,
    StoPrimitive,
)
from ..models.reports import DipoleReport, ForceReport, NucleusForce, ScaleExperimentReport
from .charge_density import (
    ChargeDensityField,
    default_grid,
    density_from_determinant,
    dipole_components,
    rms_charge_radius,
)
from .dft import external_energy
from .integrals import overlap
from .quadrature import QuadratureGrid

logger = logging.getLogger(__name__)

SINGULAR_DISTANCE = 1e-12


def potential_from_nuclei(frame: NuclearFrame, position: Sequence[float]) -> float:
    """sum_k q_k / |x - r_k| in hartree per e."""
    position = np.asarray(position, dtype=float)
    value = 0.0
    for index, nucleus in enumerate(frame.nuclei):
        distance = float(np.linalg.norm(position - np.asarray(nucleus.position)))
        if distance <= SINGULAR_DISTANCE:
            raise SingularPotentialError(index)
        value += nucleus.charge / distance
    return value


def nuclear_force(frame: NuclearFrame, k: int) -> np.ndarray:
    """Coulomb force on nucleus k from every other nucleus."""
    positions = frame.positions
    charges = frame.charges
    force = np.zeros(3)
    for l in range(frame.size):
        if l == k:
            continue
        separation = positions[k] - positions[l]
        force += charges[k] * charges[l] * separation / np.linalg.norm(separation) ** 3
    return force


def electronic_force(
    field: ChargeDensityField, frame: NuclearFrame, k: int, grid: Optional[QuadratureGrid] = None
) -> np.ndarray:
    """Force on nucleus k from the electron cloud held fixed."""
    if field.electron_count == 0:
        return np.zeros(3)
    charge = frame.charges[k]
    position = frame.positions[k]
    if field.is_spherical and grid is None:
        offset = position - np.asarray(field.center)
        distance = float(np.linalg.norm(offset))
        if distance <= SINGULAR_DISTANCE:
            return np.zeros(3)
        enclosed = float(field.radial_integrator().enclosed(np.array([distance]))[0])
        return charge * enclosed * offset / distance**3
    grid = grid or default_grid(field)
    separation = position[None, :] - grid.points
    distances = np.linalg.norm(separation, axis=1)
    values = grid.weights * field(grid.points) / distances**3
    return charge * (values @ separation)


def hellmann_feynman_force(
    field: ChargeDensityField, frame: NuclearFrame, k: int, grid: Optional[QuadratureGrid] = None
) -> np.ndarray:
    """Total clamped-density force on nucleus k, hartree/bohr."""
    return nuclear_force(frame, k) + electronic_force(field, frame, k, grid)


def force_report(
    field: ChargeDensityField, frame: NuclearFrame, grid: Optional[QuadratureGrid] = None
) -> ForceReport:
    forces = []
    for k in range(frame.size):
        nuclear = nuclear_force(frame, k)
        electronic = electronic_force(field, frame, k, grid)
        forces.append(
            NucleusForce(
                index=k,
                nuclear=tuple(float(c) for c in nuclear),
                electronic=tuple(float(c) for c in electronic),
                total=tuple(float(c) for c in nuclear + electronic),
            )
        )
    return ForceReport(forces=forces)


def classical_interaction_energy(
    field: ChargeDensityField, frame: NuclearFrame, grid: Optional[QuadratureGrid] = None
) -> float:
    """Energy of the electron charge in the potential of the nuclei."""
    return external_energy(field, frame, grid)


def dipole_report(
    field: ChargeDensityField, frame: NuclearFrame, grid: Optional[QuadratureGrid] = None
) -> DipoleReport:
    nuclear, electronic = dipole_components(field, frame, grid)
    return DipoleReport(
        dipole=tuple(float(c) for c in nuclear + electronic),
        nuclear=tuple(float(c) for c in nuclear),
        electronic=tuple(float(c) for c in electronic),
    )


def bohr_radius(mass_factor: float, charge_factor: float) -> float:
    """a0'/a0 = 1/(m e^2) for multipliers on m and e."""
    if mass_factor <= 0 or charge_factor <= 0:
        raise ValueError("Mass and charge factors must be positive")
    return 1.0 / (mass_factor * charge_factor**2)


def hydrogenic_ground_state(zeta: float) -> ChargeDensityField:
    primitive = StoPrimitive(zeta=zeta, center=0)
    basis = StoBasis(primitives=(primitive,))
    wavefunction = DeterminantWavefunction(orbitals=(SpinOrbital(coefficients=(1.0,), spin=Spin.UP),))
    return density_from_determinant(wavefunction, basis)


def _require_hydrogenic(frame: Optional[NuclearFrame], electron_count: int) -> None:
    if electron_count != 1:
        raise UnsupportedGeometryError(
            f"scaled-constants experiment needs one electron, got {electron_count}"
        )
    if frame is not None and (frame.size != 1 or frame.nuclei[0].charge != 1.0):
        raise UnsupportedGeometryError("scaled-constants experiment needs a single q=1 nucleus")


def scale_experiment(
    constants: ScaledConstants,
    frame: Optional[NuclearFrame] = None,
    electron_count: int = 1,
) -> ScaleExperimentReport:
    """
    Compare the hydrogen ground state before and after rescaling m and e.

    Lengths are in the original bohr and energies in the original hartree.
    The old ground state becomes an excited state whenever the Bohr radius
    changes.
    """
    _require_hydrogenic(frame, electron_count)
    ratio = bohr_radius(constants.mass_factor, constants.charge_factor)
    zeta_before = 1.0
    zeta_after = 1.0 / ratio

    rms_before = rms_charge_radius(hydrogenic_ground_state(zeta_before), center=(0.0, 0.0, 0.0))
    rms_after = rms_charge_radius(hydrogenic_ground_state(zeta_after), center=(0.0, 0.0, 0.0))

    energy_before = -0.5
    energy_after = -0.5 * constants.mass_factor * constants.charge_factor**4
    state_overlap = overlap(StoPrimitive(zeta=zeta_before, center=0), StoPrimitive(zeta=zeta_after, center=0))
    logger.info(f"Scaled constants {constants.model_dump()}: radius ratio {ratio}")
    return ScaleExperimentReport(
        mass_factor=constants.mass_factor,
        charge_factor=constants.charge_factor,
        radius_ratio=ratio,
        zeta_before=zeta_before,
        zeta_after=zeta_after,
        rms_before=rms_before,
        rms_after=rms_after,
        rms_ratio=rms_after / rms_before,
        energy_before=energy_before,
        energy_after=energy_after,
        energy_ratio=energy_after / energy_before,
        ground_state_overlap=state_overlap,
        excited_after_scaling=not math.isclose(ratio, 1.0, rel_tol=0.0, abs_tol=1e-15),
    )
