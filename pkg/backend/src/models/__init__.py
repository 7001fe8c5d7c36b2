"""Data models for CloudChem."""

from .core import (
    HARTREE_TO_EV,
    BoxGridSpec,
    DeterminantWavefunction,
    NuclearFrame,
    Nucleus,
    ScaledConstants,
    ScfSettings,
    SliceAxis,
    Spin,
    SpinOrbital,
    StoBasis,
    StoPrimitive,
)
from .reports import (
    DensityReport,
    DipoleReport,
    EnergyReport,
    ExponentScanResult,
    ForceReport,
    KohnShamBreakdown,
    NucleusForce,
    ProbeReport,
    RadiusReport,
    ScaleExperimentReport,
    ScfIteration,
    ScfResult,
)

__all__ = [
    "HARTREE_TO_EV",
    "BoxGridSpec",
    "DeterminantWavefunction",
    "NuclearFrame",
    "Nucleus",
    "ScaledConstants",
    "ScfSettings",
    "SliceAxis",
    "Spin",
    "SpinOrbital",
    "StoBasis",
    "StoPrimitive",
    "DensityReport",
    "DipoleReport",
    "EnergyReport",
    "ExponentScanResult",
    "ForceReport",
    "KohnShamBreakdown",
    "NucleusForce",
    "ProbeReport",
    "RadiusReport",
    "ScaleExperimentReport",
    "ScfIteration",
    "ScfResult",
]
