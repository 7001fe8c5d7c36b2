"""Linear-algebra checks on basis overlaps and orbital sets."""

import logging
from typing import List, Tuple

import numpy as np
from scipy.linalg import eigh

from ..errors import LinearDependenceError, OrbitalValidationError
from .core import DeterminantWavefunction, Spin, StoBasis

logger = logging.getLogger(__name__)


class OverlapValidator:
    """Checks on the basis overlap matrix."""

    LINEAR_DEPENDENCE_THRESHOLD = 1e-10

    @classmethod
    def smallest_eigenvalue(cls, overlap: np.ndarray) -> float:
        return float(eigh(overlap, eigvals_only=True)[0])

    @classmethod
    def require_positive_definite(cls, overlap: np.ndarray) -> None:
        """Raise if the smallest eigenvalue of S is at or below threshold."""
        smallest = cls.smallest_eigenvalue(overlap)
        if smallest <= cls.LINEAR_DEPENDENCE_THRESHOLD:
            raise LinearDependenceError(smallest)


class OrbitalValidator:
    """Normalization and same-spin orthogonality of determinant orbitals."""

    REJECT_TOLERANCE = 1e-6
    EXACT_TOLERANCE = 1e-10

    @classmethod
    def spin_block_overlap(
        cls, wavefunction: DeterminantWavefunction, overlap: np.ndarray, spin: Spin
    ) -> Tuple[List[int], np.ndarray]:
        indices = wavefunction.spin_indices(spin)
        if not indices:
            return indices, np.zeros((0, 0))
        block = wavefunction.coefficient_matrix[indices]
        return indices, block @ overlap @ block.T

    @classmethod
    def max_deviation(cls, wavefunction: DeterminantWavefunction, overlap: np.ndarray) -> float:
        """Largest |C S C^T - 1| entry over both spin blocks."""
        deviation = 0.0
        for spin in Spin:
            _, gram = cls.spin_block_overlap(wavefunction, overlap, spin)
            if gram.size:
                deviation = max(deviation, float(np.max(np.abs(gram - np.eye(len(gram))))))
        return deviation

    @classmethod
    def validate(
        cls, wavefunction: DeterminantWavefunction, overlap: np.ndarray
    ) -> DeterminantWavefunction:
        """Return an S-orthonormal copy of the orbitals or raise.

        Deviations above ``REJECT_TOLERANCE`` are rejected. Smaller deviations
        above ``EXACT_TOLERANCE`` are removed by Lowdin orthonormalization of
        each spin block; anything tighter is returned unchanged.
        """
        if wavefunction.electron_count and wavefunction.coefficient_matrix.shape[1] != overlap.shape[0]:
            raise OrbitalValidationError(
                f"orbitals have {wavefunction.coefficient_matrix.shape[1]} coefficients, "
                f"basis has {overlap.shape[0]} functions",
                {"nbasis": overlap.shape[0]},
            )

        deviation = cls.max_deviation(wavefunction, overlap)
        if deviation > cls.REJECT_TOLERANCE:
            raise OrbitalValidationError(
                f"orbitals are not S-orthonormal within same-spin blocks (max deviation {deviation:.3e})",
                {"max_deviation": deviation},
            )
        if deviation <= cls.EXACT_TOLERANCE:
            return wavefunction

        logger.warning(f"Orthonormalizing orbitals with max deviation {deviation:.3e}")
        coefficients = wavefunction.coefficient_matrix.copy()
        for spin in Spin:
            indices, gram = cls.spin_block_overlap(wavefunction, overlap, spin)
            if not indices:
                continue
            values, vectors = eigh(gram)
            inverse_sqrt = vectors @ np.diag(values**-0.5) @ vectors.T
            coefficients[indices] = inverse_sqrt @ coefficients[indices]
        orbitals = tuple(
            orbital.with_coefficients(row) for orbital, row in zip(wavefunction.orbitals, coefficients)
        )
        return DeterminantWavefunction(orbitals=orbitals)

    @classmethod
    def same_spin_determinant(
        cls,
        wavefunction: DeterminantWavefunction,
        basis: StoBasis,
        first: int,
        second: int,
        points: np.ndarray,
    ) -> np.ndarray:
        """2x2 Slater determinant of two orbitals at each pair of points.

        ``points`` has shape (n, 2, 3); element n holds the two electron positions.
        """
        points = np.asarray(points, dtype=float)
        c1 = wavefunction.orbitals[first].vector
        c2 = wavefunction.orbitals[second].vector
        at_1 = basis.evaluate(points[:, 0, :])
        at_2 = basis.evaluate(points[:, 1, :])
        return (at_1 @ c1) * (at_2 @ c2) - (at_1 @ c2) * (at_2 @ c1)
