"""
Closed-form integrals over normalized 1s Slater-type orbitals.

Same-center one- and two-electron integrals are analytic. Two-center
overlaps use the prolate-spheroidal auxiliary integrals A_n and B_n.
Nuclei away from the basis center are handled with the shell theorem on
the spherically symmetric product of two primitives.
"""

import logging
import math

import numpy as np
from pydantic import BaseModel

from ..errors import UnsupportedGeometryError
from ..models.core import NuclearFrame, StoBasis, StoPrimitive
from .quadrature import RadialIntegrator

logger = logging.getLogger(__name__)

CENTER_TOLERANCE = 1e-12
B_SERIES_CUTOFF = 0.5
B_SERIES_TERMS = 30


class OneElectronMatrices(BaseModel):
    """Overlap, kinetic and nuclear-attraction matrices of a basis."""

    model_config = {"arbitrary_types_allowed": True, "frozen": True}

    S: np.ndarray
    T: np.ndarray
    Vne: np.ndarray

    @property
    def core(self) -> np.ndarray:
        return self.T + self.Vne


def _separation(a: StoPrimitive, b: StoPrimitive) -> float:
    return float(np.linalg.norm(np.asarray(a.position) - np.asarray(b.position)))


def _require_same_center(*primitives: StoPrimitive) -> None:
    first = primitives[0]
    for other in primitives[1:]:
        if _separation(first, other) > CENTER_TOLERANCE:
            raise UnsupportedGeometryError(
                "closed-form integrals need primitives on a single center",
                {"centers": sorted({p.center for p in primitives})},
            )


def overlap(a: StoPrimitive, b: StoPrimitive) -> float:
    """<a|b> for primitives on the same center."""
    _require_same_center(a, b)
    return 8.0 * (a.zeta * b.zeta) ** 1.5 / (a.zeta + b.zeta) ** 3


def kinetic(a: StoPrimitive, b: StoPrimitive) -> float:
    """<a|-1/2 laplacian|b> for primitives on the same center."""
    _require_same_center(a, b)
    return 4.0 * (a.zeta * b.zeta) ** 2.5 / (a.zeta + b.zeta) ** 3


def _product_density(a: StoPrimitive, b: StoPrimitive):
    alpha = a.zeta + b.zeta
    prefactor = a.norm * b.norm
    return lambda r: prefactor * np.exp(-alpha * r)


def nuclear_attraction(a: StoPrimitive, b: StoPrimitive, frame: NuclearFrame) -> float:
    """-sum_k q_k <a| 1/|x - r_k| |b> for primitives sharing a center."""
    _require_same_center(a, b)
    center = np.asarray(a.position)
    on_center = 4.0 * (a.zeta * b.zeta) ** 1.5 / (a.zeta + b.zeta) ** 2
    integrator = None
    value = 0.0
    for nucleus in frame.nuclei:
        distance = float(np.linalg.norm(np.asarray(nucleus.position) - center))
        if distance <= CENTER_TOLERANCE:
            value -= nucleus.charge * on_center
            continue
        if integrator is None:
            integrator = RadialIntegrator(_product_density(a, b), scale=3.0 / (a.zeta + b.zeta))
        value -= nucleus.charge * float(integrator.potential(np.array([distance]))[0])
    return value


def electron_repulsion(a: StoPrimitive, b: StoPrimitive, c: StoPrimitive, d: StoPrimitive) -> float:
    """(ab|cd) in chemists' notation for same-center primitives."""
    _require_same_center(a, b, c, d)
    return _repulsion_closed_form(a.zeta * b.zeta, a.zeta + b.zeta, c.zeta * d.zeta, c.zeta + d.zeta)


def _repulsion_closed_form(p_ab, alpha, p_cd, beta):
    # symmetric in (alpha, beta) term by term so (ab|cd) == (cd|ab) bitwise
    s = alpha + beta
    numerator = s * s + alpha * beta
    return 32.0 * (p_ab * p_cd) ** 1.5 * numerator / ((alpha * beta) ** 2 * s**3)


def _a_integral(n: int, p: float) -> float:
    """A_n(p) = integral of xi^n exp(-p xi) over [1, inf)."""
    total = 0.0
    for k in range(n + 1):
        total += math.factorial(n) / (math.factorial(k) * p ** (n - k + 1))
    return math.exp(-p) * total


def _b_integral(n: int, q: float) -> float:
    """B_n(q) = integral of eta^n exp(-q eta) over [-1, 1]."""
    if abs(q) < B_SERIES_CUTOFF:
        total = 0.0
        for k in range(B_SERIES_TERMS):
            if (n + k) % 2 == 0:
                total += (-q) ** k / math.factorial(k) * 2.0 / (n + k + 1)
        return total
    value = (math.exp(q) - math.exp(-q)) / q
    for m in range(1, n + 1):
        value = ((-1) ** m * math.exp(q) - math.exp(-q) + m * value) / q
    return value


def two_center_overlap(a: StoPrimitive, b: StoPrimitive) -> float:
    """<a|b> for primitives on any two centers."""
    distance = _separation(a, b)
    if distance <= CENTER_TOLERANCE:
        return overlap(a, b)
    p = 0.5 * distance * (a.zeta + b.zeta)
    q = 0.5 * distance * (a.zeta - b.zeta)
    bracket = _a_integral(2, p) * _b_integral(0, q) - _a_integral(0, p) * _b_integral(2, q)
    return (a.zeta * b.zeta) ** 1.5 * distance**3 / 4.0 * bracket


def overlap_matrix(basis: StoBasis) -> np.ndarray:
    """Overlap matrix of a basis on one or several centers."""
    n = basis.size
    S = np.empty((n, n))
    for i, a in enumerate(basis.primitives):
        for j in range(i, n):
            S[i, j] = S[j, i] = two_center_overlap(a, basis.primitives[j])
    return S


def _pair_matrix(basis: StoBasis, integral) -> np.ndarray:
    n = basis.size
    M = np.empty((n, n))
    for i, a in enumerate(basis.primitives):
        for j in range(i, n):
            M[i, j] = M[j, i] = integral(a, basis.primitives[j])
    return M


def kinetic_matrix(basis: StoBasis) -> np.ndarray:
    _require_same_center(*basis.primitives)
    return _pair_matrix(basis, kinetic)


def one_electron_matrices(basis: StoBasis, frame: NuclearFrame) -> OneElectronMatrices:
    """S, T and Vne for a single-center basis."""
    _require_same_center(*basis.primitives)
    return OneElectronMatrices(
        S=_pair_matrix(basis, overlap),
        T=kinetic_matrix(basis),
        Vne=_pair_matrix(basis, lambda a, b: nuclear_attraction(a, b, frame)),
    )


def electron_repulsion_tensor(basis: StoBasis) -> np.ndarray:
    """Dense (ab|cd) tensor for a single-center basis."""
    _require_same_center(*basis.primitives)
    zetas = basis.zetas
    products = np.multiply.outer(zetas, zetas)
    sums = np.add.outer(zetas, zetas)
    tensor = _repulsion_closed_form(
        products[:, :, None, None], sums[:, :, None, None], products[None, None, :, :], sums[None, None, :, :]
    )
    logger.debug(f"Assembled repulsion tensor for {basis.size} functions")
    return tensor
