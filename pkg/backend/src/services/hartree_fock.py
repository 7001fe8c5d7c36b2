"""
Restricted closed-shell Roothaan SCF over a single-center 1s STO basis and
the five-contribution energy decomposition of a Slater determinant.
"""

import logging
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel
from scipy.linalg import eigh
from scipy.optimize import minimize_scalar

from ..errors import ScfConvergenceError
from ..models.core import DeterminantWavefunction, NuclearFrame, ScfSettings, Spin, StoBasis
from ..models.reports import EnergyReport, ExponentScanResult, ScfIteration, ScfResult
from ..models.validators import OverlapValidator
from .integrals import OneElectronMatrices, electron_repulsion_tensor, one_electron_matrices

logger = logging.getLogger(__name__)


class ElectronInteractionTerms(BaseModel):
    """Pairwise Coulomb and exchange sums over the orbitals of a determinant."""

    coulomb_integral: float
    self_repulsion: float
    exchange: float

    @property
    def electron_repulsion_total(self) -> float:
        return self.coulomb_integral + self.self_repulsion


def orient_columns(coefficients: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive."""
    coefficients = np.array(coefficients, dtype=float, copy=True)
    for j in range(coefficients.shape[1]):
        pivot = int(np.argmax(np.abs(coefficients[:, j])))
        if coefficients[pivot, j] < 0:
            coefficients[:, j] = -coefficients[:, j]
    return coefficients


def symmetric_orthogonalizer(overlap: np.ndarray) -> np.ndarray:
    """S^(-1/2) via the eigendecomposition of S."""
    values, vectors = eigh(overlap)
    return vectors @ np.diag(values**-0.5) @ vectors.T


def solve_roothaan(fock: np.ndarray, orthogonalizer: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Solve FC = SCe in the Lowdin-orthogonalized basis."""
    transformed = orthogonalizer.T @ fock @ orthogonalizer
    energies, vectors = eigh(transformed)
    return energies, orient_columns(orthogonalizer @ vectors)


def closed_shell_density(coefficients: np.ndarray, n_occupied: int) -> np.ndarray:
    occupied = coefficients[:, :n_occupied]
    return 2.0 * occupied @ occupied.T


def two_electron_operator(density: np.ndarray, eri: np.ndarray) -> np.ndarray:
    """G(P) = J(P) - K(P)/2 for a closed-shell density matrix."""
    coulomb = np.einsum("abcd,cd->ab", eri, density)
    exchange = np.einsum("acbd,cd->ab", eri, density)
    return coulomb - 0.5 * exchange


def electron_interaction_terms(
    wavefunction: DeterminantWavefunction, eri: np.ndarray
) -> ElectronInteractionTerms:
    """Coulomb sum over i<j, self terms J_ii and same-spin exchange K_ij over i<j."""
    n = wavefunction.electron_count
    if n == 0:
        return ElectronInteractionTerms(coulomb_integral=0.0, self_repulsion=0.0, exchange=0.0)
    C = wavefunction.coefficient_matrix
    densities = np.einsum("ia,ib->iab", C, C)
    coulomb_matrix = np.einsum("iab,abcd,jcd->ij", densities, eri, densities)

    coulomb = 0.0
    exchange = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            coulomb += coulomb_matrix[i, j]
            if wavefunction.orbitals[i].spin == wavefunction.orbitals[j].spin:
                transition = np.outer(C[i], C[j])
                exchange += float(np.einsum("ab,abcd,cd->", transition, eri, transition))
    self_repulsion = float(sum(coulomb_matrix[i, i] for i in range(n)))
    return ElectronInteractionTerms(
        coulomb_integral=float(coulomb), self_repulsion=self_repulsion, exchange=exchange
    )


def _decompose(
    frame: NuclearFrame,
    wavefunction: DeterminantWavefunction,
    matrices: OneElectronMatrices,
    eri: np.ndarray,
) -> EnergyReport:
    kinetic = 0.0
    electron_nucleus = 0.0
    for orbital in wavefunction.orbitals:
        c = orbital.vector
        kinetic += float(c @ matrices.T @ c)
        electron_nucleus += float(c @ matrices.Vne @ c)
    interaction = electron_interaction_terms(wavefunction, eri)
    return EnergyReport.from_terms(
        kinetic=kinetic,
        nucleus_nucleus=frame.nuclear_repulsion(),
        electron_nucleus=electron_nucleus,
        coulomb_integral=interaction.coulomb_integral,
        self_repulsion=interaction.self_repulsion,
        exchange=interaction.exchange,
    )


def decompose_energy(
    frame: NuclearFrame, wavefunction: DeterminantWavefunction, basis: StoBasis
) -> EnergyReport:
    """Kinetic, nuclear, electron repulsion, self-repulsion and exchange terms."""
    return _decompose(frame, wavefunction, one_electron_matrices(basis, frame), electron_repulsion_tensor(basis))


def expectation_energy(
    frame: NuclearFrame, wavefunction: DeterminantWavefunction, basis: StoBasis
) -> float:
    """<H> of the determinant in hartree."""
    return decompose_energy(frame, wavefunction, basis).total


def _validate_electron_count(n_electrons: int, basis: StoBasis) -> int:
    if n_electrons <= 0 or n_electrons % 2:
        raise ValueError(f"Restricted closed-shell SCF needs a positive even electron count, got {n_electrons}")
    n_occupied = n_electrons // 2
    if n_occupied > basis.size:
        raise ValueError(f"{n_electrons} electrons do not fit in {basis.size} basis functions")
    return n_occupied


def scf_solve(
    frame: NuclearFrame,
    basis: StoBasis,
    n_electrons: int,
    settings: Optional[ScfSettings] = None,
    initial_guess: Optional[DeterminantWavefunction] = None,
) -> ScfResult:
    """
    Converge restricted closed-shell orbitals by damped Roothaan iteration.

    Args:
        frame: Nuclei generating the external potential
        basis: Single-center basis
        n_electrons: Even electron count
        settings: Convergence controls
        initial_guess: Determinant whose density seeds the iteration; the
            core-Hamiltonian guess is used when omitted

    Returns:
        Converged result with the per-iteration trace

    Raises:
        ScfConvergenceError: when max_iterations is exhausted; carries the trace
    """
    settings = settings or ScfSettings()
    n_occupied = _validate_electron_count(n_electrons, basis)

    matrices = one_electron_matrices(basis, frame)
    OverlapValidator.require_positive_definite(matrices.S)
    eri = electron_repulsion_tensor(basis)
    orthogonalizer = symmetric_orthogonalizer(matrices.S)
    core = matrices.core

    logger.info(f"Starting SCF: {basis.size} basis functions, {n_electrons} electrons")

    if initial_guess is not None:
        spatial = np.array(
            [o.coefficients for o in initial_guess.orbitals if o.spin == Spin.UP], dtype=float
        ).T
        if spatial.shape != (basis.size, n_occupied):
            raise ValueError("Initial guess does not match basis size and electron count")
        density = closed_shell_density(spatial, n_occupied)
    else:
        _, guess = solve_roothaan(core, orthogonalizer)
        spatial = guess[:, :n_occupied]
        density = closed_shell_density(guess, n_occupied)

    previous_energy = _decompose(
        frame, DeterminantWavefunction.restricted(spatial), matrices, eri
    ).total
    trace: List[ScfIteration] = []
    result: Optional[ScfResult] = None

    for iteration in range(1, settings.max_iterations + 1):
        fock = core + two_electron_operator(density, eri)
        orbital_energies, coefficients = solve_roothaan(fock, orthogonalizer)
        new_density = closed_shell_density(coefficients, n_occupied)

        wavefunction = DeterminantWavefunction.restricted(coefficients[:, :n_occupied])
        report = _decompose(frame, wavefunction, matrices, eri)

        new_fock = core + two_electron_operator(new_density, eri)
        commutator = new_fock @ new_density @ matrices.S - matrices.S @ new_density @ new_fock
        commutator_norm = float(np.max(np.abs(commutator)))
        delta_energy = report.total - previous_energy
        delta_density = float(np.max(np.abs(new_density - density)))

        trace.append(
            ScfIteration(
                iteration=iteration,
                energy=report.total,
                delta_energy=delta_energy,
                delta_density=delta_density,
                commutator_norm=commutator_norm,
            )
        )
        logger.debug(
            f"SCF iteration {iteration}: E={report.total:.12f} dE={delta_energy:.3e} "
            f"dP={delta_density:.3e} [F,P]={commutator_norm:.3e}"
        )

        converged = (
            abs(delta_energy) < settings.energy_tolerance
            and delta_density < settings.density_tolerance
            and commutator_norm < settings.density_tolerance
        )
        result = ScfResult(
            wavefunction=wavefunction,
            energy=report,
            trace=list(trace),
            converged=converged,
            orbital_energies=tuple(float(e) for e in orbital_energies),
            commutator_norm=commutator_norm,
        )
        if converged:
            logger.info(f"SCF converged in {iteration} iterations: E = {report.total:.10f} hartree")
            return result

        density = (1.0 - settings.damping) * new_density + settings.damping * density
        previous_energy = report.total

    logger.warning(f"SCF did not converge in {settings.max_iterations} iterations")
    raise ScfConvergenceError(
        f"SCF did not converge in {settings.max_iterations} iterations", trace, result
    )


def optimize_exponent_scale(
    frame: NuclearFrame,
    basis: StoBasis,
    n_electrons: int,
    settings: Optional[ScfSettings] = None,
    bounds: Tuple[float, float] = (0.2, 5.0),
    tolerance: float = 1e-10,
) -> ExponentScanResult:
    """Minimize the SCF energy over a uniform scale factor on every exponent.

    At the optimum the virial ratio <T>/|E| equals one.
    """
    settings = settings or ScfSettings()

    def energy(scale: float) -> float:
        return scf_solve(frame, basis.scaled(scale), n_electrons, settings).energy.total

    optimum = minimize_scalar(energy, bounds=bounds, method="bounded", options={"xatol": tolerance})
    best = scf_solve(frame, basis.scaled(float(optimum.x)), n_electrons, settings).energy
    logger.info(f"Optimal exponent scale {optimum.x:.8f}, E = {best.total:.10f} hartree")
    return ExponentScanResult(
        scale=float(optimum.x),
        total=best.total,
        kinetic=best.kinetic,
        virial_ratio=best.kinetic / abs(best.total),
    )
