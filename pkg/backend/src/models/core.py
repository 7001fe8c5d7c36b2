"""Core data models for CloudChem.

All quantities are in Hartree atomic units: lengths in bohr, energies in
hartree, charges in multiples of the elementary charge.
"""

import math
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

HARTREE_TO_EV = 27.211386

Vector3 = Tuple[float, float, float]


class Spin(str, Enum):
    """Spin label of an orbital, as written in orbital files."""

    UP = "u"
    DOWN = "d"


class Nucleus(BaseModel):
    """Point nucleus."""

    model_config = {"frozen": True}

    label: str = Field("X", min_length=1, max_length=16)
    charge: float = Field(..., description="Charge in units of e")
    position: Vector3

    @field_validator("charge")
    @classmethod
    def validate_charge(cls, v: float) -> float:
        if not math.isfinite(v) or v <= 0:
            raise ValueError(f"Nuclear charge must be positive, got {v}")
        return v

    @field_validator("position")
    @classmethod
    def validate_position(cls, v: Vector3) -> Vector3:
        if not all(math.isfinite(c) for c in v):
            raise ValueError("Nuclear position must be finite")
        return v


class NuclearFrame(BaseModel):
    """Point nuclei that generate the external potential."""

    model_config = {"frozen": True}

    nuclei: Tuple[Nucleus, ...] = ()

    @model_validator(mode="after")
    def validate_distinct_positions(self) -> "NuclearFrame":
        seen = set()
        for index, nucleus in enumerate(self.nuclei):
            if nucleus.position in seen:
                raise ValueError(f"Duplicate nuclear position at nucleus {index}: {nucleus.position}")
            seen.add(nucleus.position)
        return self

    @classmethod
    def from_arrays(cls, charges, positions, labels: Optional[List[str]] = None) -> "NuclearFrame":
        """Build a frame from parallel charge and position sequences."""
        labels = labels or ["X"] * len(charges)
        return cls(
            nuclei=tuple(
                Nucleus(label=label, charge=float(q), position=tuple(float(c) for c in r))
                for label, q, r in zip(labels, charges, positions)
            )
        )

    @property
    def size(self) -> int:
        return len(self.nuclei)

    @property
    def charges(self) -> np.ndarray:
        return np.array([n.charge for n in self.nuclei], dtype=float)

    @property
    def positions(self) -> np.ndarray:
        return np.array([n.position for n in self.nuclei], dtype=float).reshape(-1, 3)

    @property
    def total_charge(self) -> float:
        return float(self.charges.sum())

    def nuclear_repulsion(self) -> float:
        """Coulomb repulsion between all nucleus pairs."""
        charges = self.charges
        positions = self.positions
        energy = 0.0
        for k in range(self.size):
            for l in range(k + 1, self.size):
                energy += charges[k] * charges[l] / float(np.linalg.norm(positions[k] - positions[l]))
        return energy

    def scaled_charges(self, factor: float) -> "NuclearFrame":
        return NuclearFrame(
            nuclei=tuple(n.model_copy(update={"charge": n.charge * factor}) for n in self.nuclei)
        )

    def translated(self, shift) -> "NuclearFrame":
        shift = np.asarray(shift, dtype=float)
        return NuclearFrame(
            nuclei=tuple(
                n.model_copy(update={"position": tuple(float(c) for c in np.asarray(n.position) + shift)})
                for n in self.nuclei
            )
        )

    def moved(self, index: int, position) -> "NuclearFrame":
        """Copy of the frame with one nucleus relocated."""
        nuclei = list(self.nuclei)
        nuclei[index] = nuclei[index].model_copy(
            update={"position": tuple(float(c) for c in position)}
        )
        return NuclearFrame(nuclei=tuple(nuclei))


class StoPrimitive(BaseModel):
    """Normalized 1s Slater-type orbital (zeta^3/pi)^(1/2) exp(-zeta |x - r|)."""

    model_config = {"frozen": True}

    zeta: float = Field(..., description="Exponent in inverse bohr")
    center: int = Field(..., ge=0, description="Index into the nuclear frame")
    position: Vector3 = (0.0, 0.0, 0.0)
    angular_momentum: int = 0

    @field_validator("zeta")
    @classmethod
    def validate_zeta(cls, v: float) -> float:
        if not math.isfinite(v) or v <= 0:
            raise ValueError(f"Exponent must be positive, got {v}")
        return v

    @field_validator("angular_momentum")
    @classmethod
    def validate_angular_momentum(cls, v: int) -> int:
        if v != 0:
            raise ValueError(f"Only 1s functions are supported, got angular momentum {v}")
        return v

    @property
    def norm(self) -> float:
        return math.sqrt(self.zeta**3 / math.pi)

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float).reshape(-1, 3)
        r = np.linalg.norm(points - np.asarray(self.position), axis=1)
        return self.norm * np.exp(-self.zeta * r)

    def scaled(self, factor: float) -> "StoPrimitive":
        return self.model_copy(update={"zeta": self.zeta * factor})


class StoBasis(BaseModel):
    """Contracted set of 1s primitives."""

    model_config = {"frozen": True}

    primitives: Tuple[StoPrimitive, ...] = Field(..., min_length=1)

    @property
    def size(self) -> int:
        return len(self.primitives)

    @property
    def zetas(self) -> np.ndarray:
        return np.array([p.zeta for p in self.primitives], dtype=float)

    @property
    def centers(self) -> List[int]:
        return sorted({p.center for p in self.primitives})

    @property
    def is_single_center(self) -> bool:
        return len({p.position for p in self.primitives}) == 1

    @property
    def origin(self) -> np.ndarray:
        """Position shared by all primitives of a single-center basis."""
        return np.asarray(self.primitives[0].position, dtype=float)

    @property
    def center_positions(self) -> np.ndarray:
        unique = []
        for p in self.primitives:
            if p.position not in unique:
                unique.append(p.position)
        return np.array(unique, dtype=float)

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Primitive values, shape (n_points, n_basis)."""
        return np.column_stack([p.evaluate(points) for p in self.primitives])

    def scaled(self, factor: float) -> "StoBasis":
        """Basis with every exponent multiplied by ``factor``."""
        return StoBasis(primitives=tuple(p.scaled(factor) for p in self.primitives))


class SpinOrbital(BaseModel):
    """Spatial coefficient vector over a basis plus a spin label."""

    model_config = {"frozen": True}

    coefficients: Tuple[float, ...] = Field(..., min_length=1)
    spin: Spin

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.coefficients, dtype=float)

    def with_coefficients(self, coefficients) -> "SpinOrbital":
        return SpinOrbital(coefficients=tuple(float(c) for c in coefficients), spin=self.spin)


class DeterminantWavefunction(BaseModel):
    """Antisymmetrized product of spin orbitals."""

    model_config = {"frozen": True}

    orbitals: Tuple[SpinOrbital, ...] = ()

    @model_validator(mode="after")
    def validate_dimensions(self) -> "DeterminantWavefunction":
        sizes = {len(o.coefficients) for o in self.orbitals}
        if len(sizes) > 1:
            raise ValueError(f"Orbitals have inconsistent basis dimensions: {sorted(sizes)}")
        return self

    @property
    def electron_count(self) -> int:
        return len(self.orbitals)

    @property
    def coefficient_matrix(self) -> np.ndarray:
        """Rows are orbital coefficient vectors."""
        if not self.orbitals:
            return np.zeros((0, 0))
        return np.array([o.coefficients for o in self.orbitals], dtype=float)

    def spin_indices(self, spin: Spin) -> List[int]:
        return [i for i, o in enumerate(self.orbitals) if o.spin == spin]

    @property
    def is_restricted_closed_shell(self) -> bool:
        """True when orbitals come as up/down pairs sharing spatial coefficients."""
        up = [o.coefficients for o in self.orbitals if o.spin == Spin.UP]
        down = [o.coefficients for o in self.orbitals if o.spin == Spin.DOWN]
        return len(up) == len(down) and sorted(up) == sorted(down)

    @classmethod
    def restricted(cls, spatial: np.ndarray) -> "DeterminantWavefunction":
        """Closed-shell determinant from spatial orbitals given as columns."""
        spatial = np.atleast_2d(np.asarray(spatial, dtype=float))
        orbitals = []
        for column in spatial.T:
            coefficients = tuple(float(c) for c in column)
            orbitals.append(SpinOrbital(coefficients=coefficients, spin=Spin.UP))
            orbitals.append(SpinOrbital(coefficients=coefficients, spin=Spin.DOWN))
        return cls(orbitals=tuple(orbitals))

    def sign_flipped(self, index: int) -> "DeterminantWavefunction":
        orbitals = list(self.orbitals)
        orbitals[index] = orbitals[index].with_coefficients(-orbitals[index].vector)
        return DeterminantWavefunction(orbitals=tuple(orbitals))


class ScfSettings(BaseModel):
    """Convergence controls for the Roothaan iteration."""

    model_config = {"frozen": True}

    max_iterations: int = Field(100, ge=1)
    energy_tolerance: float = Field(1e-10, gt=0.0)
    density_tolerance: float = Field(1e-8, gt=0.0)
    damping: float = Field(0.3, ge=0.0, lt=1.0)


class ScaledConstants(BaseModel):
    """Multipliers applied to the electron mass and the elementary charge."""

    model_config = {"frozen": True}

    mass_factor: float = Field(1.0, gt=0.0)
    charge_factor: float = Field(1.0, gt=0.0)


class SliceAxis(str, Enum):
    """Normal of the plane used for slice exports."""

    X = "x"
    Y = "y"
    Z = "z"


class BoxGridSpec(BaseModel):
    """Uniform cell-centered box, ``nx,ny,nz,halfwidth`` on the command line."""

    model_config = {"frozen": True}

    nx: int = Field(..., ge=1)
    ny: int = Field(..., ge=1)
    nz: int = Field(..., ge=1)
    half_width: float = Field(..., gt=0.0)
    center: Vector3 = (0.0, 0.0, 0.0)

    @classmethod
    def parse(cls, text: str) -> "BoxGridSpec":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"Grid spec must be 'nx,ny,nz,halfwidth', got '{text}'")
        try:
            nx, ny, nz = (int(p) for p in parts[:3])
            half_width = float(parts[3])
        except ValueError as e:
            raise ValueError(f"Grid spec must be 'nx,ny,nz,halfwidth', got '{text}'") from e
        return cls(nx=nx, ny=ny, nz=nz, half_width=half_width)

    @property
    def shape(self) -> Tuple[int, int, int]:
        return (self.nx, self.ny, self.nz)

    @property
    def spacing(self) -> Tuple[float, float, float]:
        return tuple(2.0 * self.half_width / n for n in self.shape)

    @property
    def cell_volume(self) -> float:
        hx, hy, hz = self.spacing
        return hx * hy * hz

    def axis_nodes(self, axis: int) -> np.ndarray:
        n = self.shape[axis]
        h = self.spacing[axis]
        return self.center[axis] - self.half_width + (np.arange(n) + 0.5) * h

    def points(self) -> np.ndarray:
        """Node positions in x-major order, shape (nx*ny*nz, 3)."""
        x, y, z = (self.axis_nodes(a) for a in range(3))
        grid = np.stack(np.meshgrid(x, y, z, indexing="ij"), axis=-1)
        return grid.reshape(-1, 3)
