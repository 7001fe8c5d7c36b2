"""
Subcommand handlers.

Every handler reads and validates all inputs before touching the output
directory, then writes its reports and returns the process exit code.
"""

import logging
from pathlib import Path
from typing import Optional, Tuple

from pydantic import BaseModel, Field, field_validator

from ..config import get_settings
from ..errors import ScfConvergenceError
from ..models.core import (
    BoxGridSpec,
    DeterminantWavefunction,
    NuclearFrame,
    ScaledConstants,
    ScfSettings,
    SliceAxis,
    StoBasis,
)
from ..models.reports import RadiusReport
from ..services.charge_density import (
    charge_centroid,
    default_grid,
    density_from_determinant,
    export_grid,
    rms_charge_radius,
    total_charge,
)
from ..services.dft import XcName, get_xc_functional, kohn_sham_energy
from ..services.electrostatics import dipole_report, force_report, scale_experiment
from ..services.hartree_fock import decompose_energy, scf_solve
from ..services.ingestion import load_basis, load_geometry, load_orbitals, serialize_orbitals
from ..services.reporting import UnitPreference, write_report, write_trace

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_SCF_NOT_CONVERGED = 2
DEFAULT_GRID = "64,64,64,4.0"


class RunConfig(BaseModel):
    """Validated command-line configuration of one run."""

    subcommand: str
    geometry: Optional[Path] = None
    basis: Optional[Path] = None
    orbitals: Optional[Path] = None
    electrons: Optional[int] = Field(None, ge=0)
    units: UnitPreference = UnitPreference.BOTH
    grid: BoxGridSpec = Field(default_factory=lambda: BoxGridSpec.parse(DEFAULT_GRID))
    plane: Optional[SliceAxis] = None
    scf: ScfSettings = Field(default_factory=ScfSettings)
    xc: XcName = XcName.NONE
    sic: bool = False
    mass: float = Field(1.0, gt=0.0)
    charge: float = Field(1.0, gt=0.0)
    out: Path = Field(default_factory=lambda: get_settings().output_dir)

    @field_validator("geometry", "basis", "orbitals")
    @classmethod
    def validate_exists(cls, v: Optional[Path]) -> Optional[Path]:
        if v is not None and not v.is_file():
            raise FileNotFoundError(f"input file not found: {v}")
        return v

    @field_validator("out")
    @classmethod
    def validate_out(cls, v: Path) -> Path:
        if v.exists() and not v.is_dir():
            raise ValueError(f"output path exists and is not a directory: {v}")
        return v


def _require(config: RunConfig, *names: str) -> None:
    missing = [f"--{n}" for n in names if getattr(config, n) is None]
    if missing:
        raise ValueError(f"{config.subcommand} requires {', '.join(missing)}")


def _load_system(config: RunConfig) -> Tuple[NuclearFrame, StoBasis]:
    _require(config, "geometry", "basis")
    frame = load_geometry(config.geometry)
    return frame, load_basis(config.basis, frame)


def _load_wavefunction(config: RunConfig, frame: NuclearFrame, basis: StoBasis) -> DeterminantWavefunction:
    """Orbitals from ``--orbitals``, or converged SCF orbitals for ``--electrons``."""
    if config.orbitals is not None:
        return load_orbitals(config.orbitals, basis)
    if config.electrons is None:
        raise ValueError(f"{config.subcommand} requires --orbitals or --electrons")
    return scf_solve(frame, basis, config.electrons, config.scf).wavefunction


def cmd_scf(config: RunConfig) -> int:
    """Converge orbitals and write ``orbitals.txt``, the energy report and ``trace.json``."""
    _require(config, "electrons")
    frame, basis = _load_system(config)
    initial_guess = load_orbitals(config.orbitals, basis) if config.orbitals else None
    try:
        result = scf_solve(frame, basis, config.electrons, config.scf, initial_guess=initial_guess)
    except ScfConvergenceError as e:
        write_trace(e.trace, config.out)
        raise

    config.out.mkdir(parents=True, exist_ok=True)
    (config.out / "orbitals.txt").write_text(serialize_orbitals(result.wavefunction))
    write_report(result.energy, config.out, "energy", config.units)
    write_trace(result.trace, config.out)
    return EXIT_OK


def cmd_energy(config: RunConfig) -> int:
    frame, basis = _load_system(config)
    wavefunction = _load_wavefunction(config, frame, basis)
    write_report(decompose_energy(frame, wavefunction, basis), config.out, "energy", config.units)
    return EXIT_OK


def cmd_density(config: RunConfig) -> int:
    """Export the charge density grid with its metadata sidecar and charge report."""
    frame, basis = _load_system(config)
    field = density_from_determinant(_load_wavefunction(config, frame, basis), basis)
    name = f"density_{config.plane.value}" if config.plane else "density"
    report = export_grid(field, config.grid, config.out / f"{name}.csv", plane=config.plane)
    write_report(report, config.out, "density", config.units)
    return EXIT_OK


def cmd_radius(config: RunConfig) -> int:
    frame, basis = _load_system(config)
    field = density_from_determinant(_load_wavefunction(config, frame, basis), basis)
    grid = default_grid(field)
    center = field.center
    if center is None:
        center = tuple(float(c) for c in charge_centroid(field, grid))
    report = RadiusReport(
        electron_count=field.electron_count,
        total_charge=total_charge(field),
        center=center,
        rms_bohr=rms_charge_radius(field, grid, center),
    )
    write_report(report, config.out, "radius", config.units)
    return EXIT_OK


def cmd_dipole(config: RunConfig) -> int:
    frame, basis = _load_system(config)
    field = density_from_determinant(_load_wavefunction(config, frame, basis), basis)
    write_report(dipole_report(field, frame), config.out, "dipole", config.units)
    return EXIT_OK


def cmd_forces(config: RunConfig) -> int:
    frame, basis = _load_system(config)
    field = density_from_determinant(_load_wavefunction(config, frame, basis), basis)
    write_report(force_report(field, frame), config.out, "forces", config.units)
    return EXIT_OK


def cmd_dft(config: RunConfig) -> int:
    frame, basis = _load_system(config)
    xc = get_xc_functional(config.xc)
    wavefunction = _load_wavefunction(config, frame, basis)
    breakdown = kohn_sham_energy(wavefunction, frame, xc, basis, sic=config.sic)
    write_report(breakdown, config.out, "dft", config.units)
    return EXIT_OK


def cmd_scale(config: RunConfig) -> int:
    frame = load_geometry(config.geometry) if config.geometry else None
    electrons = config.electrons if config.electrons is not None else 1
    constants = ScaledConstants(mass_factor=config.mass, charge_factor=config.charge)
    write_report(scale_experiment(constants, frame, electrons), config.out, "scale", config.units)
    return EXIT_OK


COMMANDS = {
    "scf": cmd_scf,
    "energy": cmd_energy,
    "density": cmd_density,
    "radius": cmd_radius,
    "dipole": cmd_dipole,
    "forces": cmd_forces,
    "dft": cmd_dft,
    "scale": cmd_scale,
}
