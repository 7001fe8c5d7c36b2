"""Result models written by the toolkit.

Energy fields are stored in hartree; each has an ``<field>_ev`` mirror
exposed as a computed field so both unit systems serialize together.
"""

from typing import List, Tuple

from pydantic import BaseModel, Field, computed_field, model_validator

from .core import HARTREE_TO_EV, DeterminantWavefunction, Vector3

SUM_TOLERANCE = 1e-12


def _sum_tolerance(*terms: float) -> float:
    return SUM_TOLERANCE * max(1.0, sum(abs(t) for t in terms))


class EnergyReport(BaseModel):
    """Five-contribution decomposition of a determinant's energy."""

    model_config = {"frozen": True}

    kinetic: float
    nucleus_nucleus: float
    electron_nucleus: float
    electron_repulsion_total: float
    self_repulsion: float = Field(..., description="Entered with a minus sign")
    exchange: float = Field(..., description="Entered with a minus sign")
    coulomb_integral: float
    total: float

    @classmethod
    def from_terms(
        cls,
        kinetic: float,
        nucleus_nucleus: float,
        electron_nucleus: float,
        coulomb_integral: float,
        self_repulsion: float,
        exchange: float,
    ) -> "EnergyReport":
        electron_repulsion_total = coulomb_integral + self_repulsion
        total = (
            kinetic
            + nucleus_nucleus
            + electron_nucleus
            + electron_repulsion_total
            - self_repulsion
            - exchange
        )
        return cls(
            kinetic=kinetic,
            nucleus_nucleus=nucleus_nucleus,
            electron_nucleus=electron_nucleus,
            electron_repulsion_total=electron_repulsion_total,
            self_repulsion=self_repulsion,
            exchange=exchange,
            coulomb_integral=coulomb_integral,
            total=total,
        )

    @model_validator(mode="after")
    def validate_identities(self) -> "EnergyReport":
        terms = (
            self.kinetic,
            self.nucleus_nucleus,
            self.electron_nucleus,
            self.electron_repulsion_total,
            self.self_repulsion,
            self.exchange,
        )
        expected = (
            self.kinetic
            + self.nucleus_nucleus
            + self.electron_nucleus
            + self.electron_repulsion_total
            - self.self_repulsion
            - self.exchange
        )
        if abs(expected - self.total) > _sum_tolerance(*terms):
            raise ValueError(f"Energy terms sum to {expected}, total is {self.total}")
        net = self.electron_repulsion_total - self.self_repulsion
        if abs(net - self.coulomb_integral) > _sum_tolerance(*terms):
            raise ValueError("coulomb_integral must equal electron_repulsion_total - self_repulsion")
        if self.kinetic < 0 or self.exchange < 0 or self.self_repulsion < 0:
            raise ValueError("kinetic, exchange and self_repulsion must be non-negative")
        return self

    @computed_field
    @property
    def repulsion_minus_self(self) -> float:
        return self.electron_repulsion_total - self.self_repulsion

    @computed_field
    @property
    def kinetic_ev(self) -> float:
        return self.kinetic * HARTREE_TO_EV

    @computed_field
    @property
    def nucleus_nucleus_ev(self) -> float:
        return self.nucleus_nucleus * HARTREE_TO_EV

    @computed_field
    @property
    def electron_nucleus_ev(self) -> float:
        return self.electron_nucleus * HARTREE_TO_EV

    @computed_field
    @property
    def electron_repulsion_total_ev(self) -> float:
        return self.electron_repulsion_total * HARTREE_TO_EV

    @computed_field
    @property
    def self_repulsion_ev(self) -> float:
        return self.self_repulsion * HARTREE_TO_EV

    @computed_field
    @property
    def exchange_ev(self) -> float:
        return self.exchange * HARTREE_TO_EV

    @computed_field
    @property
    def coulomb_integral_ev(self) -> float:
        return self.coulomb_integral * HARTREE_TO_EV

    @computed_field
    @property
    def repulsion_minus_self_ev(self) -> float:
        return self.repulsion_minus_self * HARTREE_TO_EV

    @computed_field
    @property
    def total_ev(self) -> float:
        return self.total * HARTREE_TO_EV


class ScfIteration(BaseModel):
    """One entry of the convergence trace."""

    iteration: int
    energy: float
    delta_energy: float
    delta_density: float
    commutator_norm: float


class ScfResult(BaseModel):
    """Outcome of a Roothaan SCF run."""

    wavefunction: DeterminantWavefunction
    energy: EnergyReport
    trace: List[ScfIteration]
    converged: bool
    orbital_energies: Tuple[float, ...]
    commutator_norm: float

    @property
    def iterations(self) -> int:
        return len(self.trace)


class ExponentScanResult(BaseModel):
    """Optimum of the total energy under uniform exponent scaling."""

    scale: float
    total: float
    kinetic: float
    virial_ratio: float


class KohnShamBreakdown(BaseModel):
    """Energy functional terms for a density with an orbital representative."""

    model_config = {"frozen": True}

    xc_name: str
    sic: bool = False
    ts: float
    nucleus_nucleus: float
    external: float
    hartree_term: float
    xc: float
    total: float

    @model_validator(mode="after")
    def validate_sum(self) -> "KohnShamBreakdown":
        terms = (self.ts, self.nucleus_nucleus, self.external, self.hartree_term, self.xc)
        expected = self.ts + self.nucleus_nucleus + self.external + self.hartree_term + self.xc
        if abs(expected - self.total) > _sum_tolerance(*terms):
            raise ValueError(f"Kohn-Sham terms sum to {expected}, total is {self.total}")
        if self.hartree_term < 0:
            raise ValueError("hartree_term must be non-negative")
        return self

    @computed_field
    @property
    def ts_ev(self) -> float:
        return self.ts * HARTREE_TO_EV

    @computed_field
    @property
    def nucleus_nucleus_ev(self) -> float:
        return self.nucleus_nucleus * HARTREE_TO_EV

    @computed_field
    @property
    def external_ev(self) -> float:
        return self.external * HARTREE_TO_EV

    @computed_field
    @property
    def hartree_term_ev(self) -> float:
        return self.hartree_term * HARTREE_TO_EV

    @computed_field
    @property
    def xc_ev(self) -> float:
        return self.xc * HARTREE_TO_EV

    @computed_field
    @property
    def total_ev(self) -> float:
        return self.total * HARTREE_TO_EV


class ProbeReport(BaseModel):
    """Energy changes observed under random orbital perturbations."""

    xc_name: str
    perturbation_count: int
    scale: float
    seed: int
    reference_energy: float
    max_delta: float
    mean_delta: float
    worst_delta: float = Field(..., description="Most negative observed change")
    violations: int
    tolerance: float


class NucleusForce(BaseModel):
    """Force on one nucleus, in hartree/bohr."""

    index: int
    nuclear: Vector3
    electronic: Vector3
    total: Vector3


class ForceReport(BaseModel):
    """Clamped-density Hellmann-Feynman forces on every nucleus."""

    forces: List[NucleusForce]


class DipoleReport(BaseModel):
    """Dipole of nuclei plus electron cloud, in e*bohr."""

    dipole: Vector3
    nuclear: Vector3
    electronic: Vector3


class RadiusReport(BaseModel):
    electron_count: int
    total_charge: float
    center: Vector3
    rms_bohr: float


class DensityReport(BaseModel):
    """Charge bookkeeping for an exported density grid."""

    electron_count: int
    quadrature_charge: float
    box_charge: float
    charge_error: float
    shape: Tuple[int, int, int]
    half_width: float


class ScaleExperimentReport(BaseModel):
    """Hydrogenic ground state before and after rescaling m and e."""

    mass_factor: float
    charge_factor: float
    radius_ratio: float
    zeta_before: float
    zeta_after: float
    rms_before: float
    rms_after: float
    rms_ratio: float
    energy_before: float
    energy_after: float
    energy_ratio: float
    ground_state_overlap: float
    excited_after_scaling: bool

