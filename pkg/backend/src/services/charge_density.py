"""
Charge densities of determinant and explicit two-electron wavefunctions,
their moments, and grid exports for plotting.
"""

import csv
import json
import logging
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field
from scipy.spatial import cKDTree

from .. import __version__
from ..config import get_settings
from ..errors import CloudChemError, ExportError
from ..models.core import BoxGridSpec, DeterminantWavefunction, NuclearFrame, SliceAxis, StoBasis
from ..models.reports import DensityReport
from .quadrature import QuadratureGrid, RadialIntegrator, becke_grid, box_grid, spherical_grid

logger = logging.getLogger(__name__)

ELEMENTARY_CHARGE = 1.0
PAIR_NORM_TOLERANCE = 1e-6

DensityEvaluator = Callable[[np.ndarray], np.ndarray]


class DensityProvenance(str, Enum):
    DETERMINANT = "determinant"
    EXPLICIT_PAIR = "explicit-pair"


class PairSymmetry(str, Enum):
    """Exchange symmetry of a two-electron spatial amplitude."""

    SYMMETRIC = "symmetric"
    ANTISYMMETRIC = "antisymmetric"


class MarginalMethod(str, Enum):
    SUM_OF_TERMS = "sum-of-terms"
    EQUAL_TERMS = "equal-terms"


class ChargeDensityField(BaseModel):
    """Scalar charge density in e per bohr^3, negative for electrons.

    ``center`` and ``decay`` are set for spherically symmetric fields; they
    pick the default radial grid and enable shell-theorem reductions.
    """

    model_config = {"arbitrary_types_allowed": True, "frozen": True}

    evaluator: DensityEvaluator
    electron_count: int = Field(..., ge=0)
    provenance: DensityProvenance
    center: Optional[Tuple[float, float, float]] = None
    decay: float = Field(1.0, gt=0.0, description="Smallest orbital exponent, inverse bohr")
    centers: Tuple[Tuple[float, float, float], ...] = ()
    node_values: Optional[np.ndarray] = None

    def __call__(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float).reshape(-1, 3)
        return self.evaluator(points)

    @property
    def is_spherical(self) -> bool:
        return self.center is not None

    def scaled(self, factor: float) -> "ChargeDensityField":
        """Field multiplied pointwise by ``factor`` (no renormalization)."""
        base = self.evaluator
        return self.model_copy(update={"evaluator": lambda points: factor * base(points)})

    def radial(self, r: np.ndarray) -> np.ndarray:
        """Values along a ray from the center of a spherical field."""
        if self.center is None:
            raise CloudChemError("radial profile requested for a non-spherical density")
        r = np.asarray(r, dtype=float)
        points = np.asarray(self.center) + np.outer(r.reshape(-1), [0.0, 0.0, 1.0])
        return self.evaluator(points).reshape(r.shape)

    def radial_integrator(self, n_nodes: Optional[int] = None) -> RadialIntegrator:
        settings = get_settings()
        return RadialIntegrator(
            self.radial,
            scale=settings.radial_scale / self.decay,
            n_nodes=n_nodes or settings.radial_nodes,
        )


def default_grid(field: ChargeDensityField) -> QuadratureGrid:
    """Radial product grid for spherical fields, Becke grid otherwise."""
    settings = get_settings()
    scale = settings.radial_scale / field.decay
    if field.is_spherical:
        return spherical_grid(field.center, n_radial=settings.radial_nodes, scale=scale)
    if field.centers:
        return becke_grid(np.array(field.centers), n_radial=settings.radial_nodes, scale=scale)
    raise CloudChemError("density has no center for a default grid; pass an explicit grid")


def density_from_determinant(
    wavefunction: DeterminantWavefunction, basis: StoBasis
) -> ChargeDensityField:
    """rho(x) = -e sum_i |chi_i(x)|^2 over the occupied spin orbitals."""
    coefficients = wavefunction.coefficient_matrix

    def evaluate(points: np.ndarray) -> np.ndarray:
        if wavefunction.electron_count == 0:
            return np.zeros(len(points))
        amplitudes = basis.evaluate(points) @ coefficients.T
        return -ELEMENTARY_CHARGE * np.sum(amplitudes**2, axis=1)

    spherical = basis.is_single_center
    return ChargeDensityField(
        evaluator=evaluate,
        electron_count=wavefunction.electron_count,
        provenance=DensityProvenance.DETERMINANT,
        center=tuple(float(c) for c in basis.origin) if spherical else None,
        decay=float(basis.zetas.min()),
        centers=tuple(tuple(float(c) for c in p) for p in basis.center_positions),
    )


def orbital_densities(
    wavefunction: DeterminantWavefunction, basis: StoBasis
) -> Tuple[ChargeDensityField, ...]:
    """One single-electron field per spin orbital."""
    return tuple(
        density_from_determinant(DeterminantWavefunction(orbitals=(orbital,)), basis)
        for orbital in wavefunction.orbitals
    )


def pair_amplitude(
    first: np.ndarray, second: np.ndarray, weights: np.ndarray, symmetry: PairSymmetry
) -> np.ndarray:
    """Normalized two-electron spatial amplitude from two orbitals sampled on a grid."""
    if symmetry == PairSymmetry.ANTISYMMETRIC:
        psi = np.outer(first, second) - np.outer(second, first)
    else:
        psi = np.outer(first, second) + np.outer(second, first)
    norm = float(np.einsum("i,j,ij->", weights, weights, psi**2))
    return psi / np.sqrt(norm)


def density_from_explicit_pair(
    psi: np.ndarray,
    grid: QuadratureGrid,
    symmetry: PairSymmetry,
    method: MarginalMethod = MarginalMethod.SUM_OF_TERMS,
) -> ChargeDensityField:
    """
    Marginal charge density of a two-electron spatial amplitude on a grid.

    Args:
        psi: Amplitude psi[i, j] = psi(x_i, x_j) on the grid nodes
        grid: Grid holding the nodes and weights
        symmetry: Declared exchange symmetry of psi
        method: Integrate out each coordinate separately and add both terms,
            or use twice the first term as the exchange symmetry allows

    Returns:
        Field whose ``node_values`` hold the density at the grid nodes
    """
    psi = np.asarray(psi, dtype=float)
    weights = grid.weights
    if psi.shape != (grid.size, grid.size):
        raise ValueError(f"Pair amplitude must have shape {(grid.size, grid.size)}, got {psi.shape}")
    norm = float(np.einsum("i,j,ij->", weights, weights, psi**2))
    if abs(norm - 1.0) > PAIR_NORM_TOLERANCE:
        raise ValueError(f"Pair amplitude is not normalized on its grid (norm {norm:.9f})")
    sign = -1.0 if symmetry == PairSymmetry.ANTISYMMETRIC else 1.0
    asymmetry = float(np.max(np.abs(psi - sign * psi.T)))
    if asymmetry > PAIR_NORM_TOLERANCE * float(np.max(np.abs(psi))):
        raise ValueError(f"Pair amplitude is not {symmetry.value} under exchange")

    probability = psi**2
    first_term = probability @ weights
    if method == MarginalMethod.EQUAL_TERMS:
        values = -ELEMENTARY_CHARGE * 2.0 * first_term
    else:
        second_term = weights @ probability
        values = -ELEMENTARY_CHARGE * (first_term + second_term)
    logger.debug(f"Pair marginal ({symmetry.value}, {method.value}) on {grid.size} nodes")

    tree = cKDTree(grid.points)

    def lookup(x: np.ndarray) -> np.ndarray:
        _, nearest = tree.query(np.asarray(x, dtype=float))
        return values[nearest]

    return ChargeDensityField(
        evaluator=lookup,
        electron_count=2,
        provenance=DensityProvenance.EXPLICIT_PAIR,
        node_values=values,
    )


class NumberDensityField(BaseModel):
    """Expected electron number per bohr^3, the charge field divided by -e."""

    model_config = {"arbitrary_types_allowed": True, "frozen": True}

    charge: ChargeDensityField

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return self.charge(points) / -ELEMENTARY_CHARGE

    def electrons(self, grid: Optional[QuadratureGrid] = None) -> float:
        grid = grid or default_grid(self.charge)
        return grid.integrate(self(grid.points))


def expected_number_density(field: ChargeDensityField) -> NumberDensityField:
    return NumberDensityField(charge=field)


def total_charge(field: ChargeDensityField, grid: Optional[QuadratureGrid] = None) -> float:
    """Integrated charge in units of e."""
    if field.electron_count == 0:
        return 0.0
    grid = grid or default_grid(field)
    return grid.integrate(field(grid.points))


def charge_centroid(field: ChargeDensityField, grid: Optional[QuadratureGrid] = None) -> np.ndarray:
    grid = grid or default_grid(field)
    values = field(grid.points)
    charge = grid.integrate(values)
    if charge == 0.0:
        raise ValueError("Charge centroid of a field with zero total charge")
    return (grid.weights * values) @ grid.points / charge


def rms_charge_radius(
    field: ChargeDensityField,
    grid: Optional[QuadratureGrid] = None,
    center: Optional[Sequence[float]] = None,
) -> float:
    """sqrt of the charge-weighted mean of |x - center|^2."""
    if field.electron_count == 0:
        raise ValueError("RMS charge radius of a field with zero total charge")
    grid = grid or default_grid(field)
    if center is None:
        center = charge_centroid(field, grid)
    values = field(grid.points) / (-ELEMENTARY_CHARGE * field.electron_count)
    squared = np.sum((grid.points - np.asarray(center, dtype=float)) ** 2, axis=1)
    return float(np.sqrt(grid.integrate(values * squared)))


def dipole_components(
    field: ChargeDensityField, frame: NuclearFrame, grid: Optional[QuadratureGrid] = None
) -> Tuple[np.ndarray, np.ndarray]:
    """(nuclear, electronic) contributions to the dipole in e*bohr."""
    nuclear = frame.charges @ frame.positions if frame.size else np.zeros(3)
    if field.electron_count == 0:
        return nuclear, np.zeros(3)
    grid = grid or default_grid(field)
    electronic = (grid.weights * field(grid.points)) @ grid.points
    return nuclear, electronic


def dipole_moment(
    field: ChargeDensityField, frame: NuclearFrame, grid: Optional[QuadratureGrid] = None
) -> np.ndarray:
    """sum_k q_k r_k plus the first moment of the electron charge."""
    nuclear, electronic = dipole_components(field, frame, grid)
    return nuclear + electronic


def _plane_points(spec: BoxGridSpec, axis: SliceAxis) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    normal = "xyz".index(axis.value)
    u_axis, v_axis = [a for a in range(3) if a != normal]
    u = spec.axis_nodes(u_axis)
    v = spec.axis_nodes(v_axis)
    uu, vv = np.meshgrid(u, v, indexing="ij")
    points = np.zeros((uu.size, 3))
    points[:, normal] = spec.center[normal]
    points[:, u_axis] = uu.reshape(-1)
    points[:, v_axis] = vv.reshape(-1)
    return points, uu.reshape(-1), vv.reshape(-1)


def export_grid(
    field: ChargeDensityField,
    spec: BoxGridSpec,
    destination: Path,
    plane: Optional[SliceAxis] = None,
    grid: Optional[QuadratureGrid] = None,
) -> DensityReport:
    """
    Write the density on a uniform box (``x,y,z,rho``) or a plane (``u,v,rho``).

    A ``<name>.meta.json`` sidecar records the grid spec, electron count,
    quadrature and box-integrated charges, toolkit version and a timestamp.

    Raises:
        ExportError: when the destination cannot be written
    """
    destination = Path(destination)
    box = box_grid(spec)
    values = field(box.points)
    box_charge = box.integrate(values)
    quadrature_charge = total_charge(field, grid)
    report = DensityReport(
        electron_count=field.electron_count,
        quadrature_charge=quadrature_charge,
        box_charge=box_charge,
        charge_error=abs(box_charge - quadrature_charge),
        shape=spec.shape,
        half_width=spec.half_width,
    )

    try:
        destination.parent.mkdir(parents=True, exist_ok=True)
        with destination.open("w", newline="") as handle:
            writer = csv.writer(handle)
            if plane is None:
                writer.writerow(["x", "y", "z", "rho"])
                for point, value in zip(box.points, values):
                    writer.writerow([repr(float(c)) for c in point] + [repr(float(value))])
            else:
                points, u, v = _plane_points(spec, plane)
                writer.writerow(["u", "v", "rho"])
                for a, b, value in zip(u, v, field(points)):
                    writer.writerow([repr(float(a)), repr(float(b)), repr(float(value))])

        metadata = {
            "grid": spec.model_dump(),
            "plane": plane.value if plane else None,
            "columns": ["u", "v", "rho"] if plane else ["x", "y", "z", "rho"],
            "cell_volume": spec.cell_volume,
            "electron_count": field.electron_count,
            "quadrature_charge": quadrature_charge,
            "box_charge": box_charge,
            "charge_error": report.charge_error,
            "version": __version__,
            "created_at": datetime.now(timezone.utc).isoformat(),
        }
        sidecar = destination.with_suffix(".meta.json")
        sidecar.write_text(json.dumps(metadata, indent=2))
    except OSError as e:
        logger.error(f"Failed to export density to {destination}: {e}")
        raise ExportError(f"cannot write {destination}: {e}", {"path": str(destination)}) from e

    logger.info(f"Exported density to {destination}")
    return report


def import_grid(path: Path) -> Tuple[np.ndarray, np.ndarray]:
    """Read an ``x,y,z,rho`` export back as (points, values)."""
    with Path(path).open(newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        if header != ["x", "y", "z", "rho"]:
            raise ValueError(f"Not a box density export: header {header}")
        rows = np.array([[float(c) for c in row] for row in reader], dtype=float)
    return rows[:, :3], rows[:, 3]
