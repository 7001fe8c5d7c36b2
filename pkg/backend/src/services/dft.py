"""
Kohn-Sham energy functional evaluation.

The density comes with an orbital representative that supplies the
non-interacting kinetic energy. Exchange-correlation pieces are pluggable:
``none``, Dirac ``lda-exchange`` and ``exact-from-hf``, the Hartree-Fock
exchange of the orbitals minus the self-repulsion half of their analytic
Hartree energy. A Perdew-Zunger self-interaction correction can be added on
top of any of them.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from typing import Callable, List, Optional

import numpy as np
from pydantic import BaseModel

from ..config import get_settings
from ..errors import QuadratureError, UnsupportedGeometryError
from ..models.core import DeterminantWavefunction, NuclearFrame, ScfSettings, Spin, StoBasis
from ..models.reports import KohnShamBreakdown, ProbeReport
from .charge_density import (
    ChargeDensityField,
    default_grid,
    density_from_determinant,
    expected_number_density,
    orbital_densities,
)
from .hartree_fock import electron_interaction_terms, scf_solve, symmetric_orthogonalizer
from .integrals import electron_repulsion_tensor, kinetic_matrix, overlap_matrix
from .quadrature import QuadratureGrid

logger = logging.getLogger(__name__)

EXCHANGE_CONSTANT = 0.75 * (3.0 / np.pi) ** (1.0 / 3.0)
SPIN_POLARIZATION_FACTOR = 2.0 ** (1.0 / 3.0)
HARTREE_RELATIVE_TOLERANCE = 1e-6
VARIATIONAL_TOLERANCE = 1e-10


class XcName(str, Enum):
    NONE = "none"
    LDA_EXCHANGE = "lda-exchange"
    EXACT_FROM_HF = "exact-from-hf"


class XcInputs(BaseModel):
    """Everything an exchange-correlation evaluator may draw on."""

    model_config = {"arbitrary_types_allowed": True}

    field: ChargeDensityField
    grid: Optional[QuadratureGrid] = None
    wavefunction: DeterminantWavefunction
    basis: StoBasis


class XcFunctional(BaseModel):
    """Named exchange-correlation energy evaluator."""

    model_config = {"arbitrary_types_allowed": True, "frozen": True}

    name: XcName
    evaluator: Callable[[XcInputs], float]

    def evaluate(self, inputs: XcInputs) -> float:
        return float(self.evaluator(inputs))


def hartree_energy(field: ChargeDensityField, n_nodes: Optional[int] = None) -> float:
    """
    Classical Coulomb self-energy 1/2 integral rho(x) rho(x') / |x - x'|.

    Spherical densities are reduced to radial integrals with the shell
    theorem. The result is compared against a rule with half the nodes.

    Raises:
        UnsupportedGeometryError: for densities that are not spherically symmetric
        QuadratureError: when the two rules disagree beyond tolerance
    """
    if not field.is_spherical:
        raise UnsupportedGeometryError("Hartree energy needs a spherically symmetric density")
    integrator = field.radial_integrator(n_nodes)
    energy = integrator.self_energy()
    coarse = field.radial_integrator(max(8, integrator.n_nodes // 2)).self_energy()
    estimate = abs(energy - coarse)
    tolerance = HARTREE_RELATIVE_TOLERANCE * max(1.0, abs(energy))
    if estimate > tolerance:
        raise QuadratureError(
            f"Hartree energy quadrature error {estimate:.3e} exceeds {tolerance:.3e}", estimate, tolerance
        )
    return energy


def external_energy(
    field: ChargeDensityField, frame: NuclearFrame, grid: Optional[QuadratureGrid] = None
) -> float:
    """Integral of rho(x) V(x), V the potential of the point nuclei.

    Spherical densities use the shell theorem unless an explicit grid is given.
    """
    if frame.size == 0 or field.electron_count == 0:
        return 0.0
    if field.is_spherical and grid is None:
        integrator = field.radial_integrator()
        distances = np.linalg.norm(frame.positions - np.asarray(field.center), axis=1)
        return float(frame.charges @ integrator.potential(distances))
    grid = grid or default_grid(field)
    distances = np.linalg.norm(grid.points[:, None, :] - frame.positions[None, :, :], axis=2)
    potential = (frame.charges[None, :] / distances).sum(axis=1)
    return grid.integrate(field(grid.points) * potential)


def ts_noninteracting(orbitals: DeterminantWavefunction, basis: StoBasis) -> float:
    """Sum of orbital kinetic energies."""
    T = kinetic_matrix(basis)
    return float(sum(o.vector @ T @ o.vector for o in orbitals.orbitals))


def lda_exchange(field: ChargeDensityField, grid: Optional[QuadratureGrid] = None) -> float:
    """Dirac exchange -C_x integral n^(4/3) of the number density n."""
    grid = grid or default_grid(field)
    number = np.clip(expected_number_density(field)(grid.points), 0.0, None)
    return -EXCHANGE_CONSTANT * grid.integrate(number ** (4.0 / 3.0))


def pz_self_interaction_correction(
    orbitals: DeterminantWavefunction,
    basis: StoBasis,
    include_exchange: bool = True,
    spin_polarized: bool = False,
) -> float:
    """
    Perdew-Zunger correction: minus the Hartree and exchange self-energy of
    each single-orbital density.

    Args:
        orbitals: Orbital representative of the density
        basis: Basis the orbitals are expanded in
        include_exchange: Subtract the LDA exchange of each orbital density
        spin_polarized: Evaluate orbital exchange for a fully polarized density
    """
    factor = SPIN_POLARIZATION_FACTOR if spin_polarized else 1.0
    correction = 0.0
    for density in orbital_densities(orbitals, basis):
        correction -= hartree_energy(density)
        if include_exchange:
            correction -= factor * lda_exchange(density)
    return correction


def _none(inputs: XcInputs) -> float:
    return 0.0


def _lda(inputs: XcInputs) -> float:
    return lda_exchange(inputs.field, inputs.grid)


def _exact_from_hf(inputs: XcInputs) -> float:
    # the Hartree term already carries coulomb_integral + self_repulsion / 2
    terms = electron_interaction_terms(inputs.wavefunction, electron_repulsion_tensor(inputs.basis))
    return -0.5 * terms.self_repulsion - terms.exchange


_FUNCTIONALS = {
    XcName.NONE: _none,
    XcName.LDA_EXCHANGE: _lda,
    XcName.EXACT_FROM_HF: _exact_from_hf,
}


def get_xc_functional(name: str) -> XcFunctional:
    """Look up a functional by its command-line name."""
    key = XcName(name)
    return XcFunctional(name=key, evaluator=_FUNCTIONALS[key])


def kohn_sham_energy(
    orbitals: DeterminantWavefunction,
    frame: NuclearFrame,
    xc: XcFunctional,
    basis: StoBasis,
    grid: Optional[QuadratureGrid] = None,
    sic: bool = False,
    spin_polarized: bool = False,
) -> KohnShamBreakdown:
    """Assemble T_s, E_nn, external, Hartree and exchange-correlation terms."""
    field = density_from_determinant(orbitals, basis)
    ts = ts_noninteracting(orbitals, basis)
    nucleus_nucleus = frame.nuclear_repulsion()
    external = external_energy(field, frame, grid)
    hartree = hartree_energy(field)
    xc_energy = xc.evaluate(
        XcInputs(
            field=field,
            grid=grid,
            wavefunction=orbitals,
            basis=basis,
        )
    )
    if sic:
        xc_energy += pz_self_interaction_correction(
            orbitals,
            basis,
            include_exchange=xc.name == XcName.LDA_EXCHANGE,
            spin_polarized=spin_polarized,
        )
    total = ts + nucleus_nucleus + external + hartree + xc_energy
    logger.debug(f"Kohn-Sham energy ({xc.name.value}, sic={sic}): {total:.10f} hartree")
    return KohnShamBreakdown(
        xc_name=xc.name.value,
        sic=sic,
        ts=ts,
        nucleus_nucleus=nucleus_nucleus,
        external=external,
        hartree_term=hartree,
        xc=xc_energy,
        total=total,
    )


def perturb_restricted(
    reference: DeterminantWavefunction,
    overlap: np.ndarray,
    scale: float,
    rng: np.random.Generator,
) -> DeterminantWavefunction:
    """Add Gaussian noise to the shared spatial orbitals and re-orthonormalize."""
    if scale == 0.0:
        return reference
    spatial = np.array([o.coefficients for o in reference.orbitals if o.spin == Spin.UP], dtype=float).T
    perturbed = spatial + scale * rng.standard_normal(spatial.shape)
    gram = perturbed.T @ overlap @ perturbed
    return DeterminantWavefunction.restricted(perturbed @ symmetric_orthogonalizer(gram))


def variational_probe(
    frame: NuclearFrame,
    basis: StoBasis,
    xc: XcFunctional,
    scale: float,
    n_electrons: int = 2,
    count: int = 200,
    seed: int = 0,
    settings: Optional[ScfSettings] = None,
    reference: Optional[DeterminantWavefunction] = None,
    max_workers: Optional[int] = None,
) -> ProbeReport:
    """
    Evaluate the functional on randomly perturbed copies of a converged
    reference and count perturbations that lower the energy.

    Each perturbation draws from its own child of one seed sequence, so the
    report does not depend on worker scheduling.
    """
    if reference is None:
        reference = scf_solve(frame, basis, n_electrons, settings).wavefunction
    overlap = overlap_matrix(basis)
    reference_energy = kohn_sham_energy(reference, frame, xc, basis).total
    children = np.random.SeedSequence(seed).spawn(count)

    def evaluate(child: np.random.SeedSequence) -> float:
        wavefunction = perturb_restricted(reference, overlap, scale, np.random.default_rng(child))
        return kohn_sham_energy(wavefunction, frame, xc, basis).total - reference_energy

    workers = max_workers or get_settings().threads
    with ThreadPoolExecutor(max_workers=workers) as executor:
        deltas: List[float] = list(executor.map(evaluate, children))

    values = np.array(deltas) if deltas else np.zeros(1)
    violations = int(np.sum(values < -VARIATIONAL_TOLERANCE))
    if violations:
        logger.warning(f"{violations} of {count} perturbations lowered the {xc.name.value} energy")
    return ProbeReport(
        xc_name=xc.name.value,
        perturbation_count=count,
        scale=scale,
        seed=seed,
        reference_energy=reference_energy,
        max_delta=float(values.max()),
        mean_delta=float(values.mean()),
        worst_delta=float(values.min()),
        violations=violations,
        tolerance=VARIATIONAL_TOLERANCE,
    )
