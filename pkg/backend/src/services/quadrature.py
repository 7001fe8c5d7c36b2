"""
Quadrature grids: mapped Gauss-Legendre radial rules, product angular rules,
Becke multicenter partitioning and uniform boxes.
"""

import logging
from enum import Enum
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, field_validator

from ..models.core import BoxGridSpec

logger = logging.getLogger(__name__)

RadialFunction = Callable[[np.ndarray], np.ndarray]

BECKE_SMOOTHING_STEPS = 3


class GridScheme(str, Enum):
    RADIAL_SPHERICAL = "radial-spherical"
    BECKE = "becke"
    UNIFORM_BOX = "uniform-box"


class QuadratureGrid(BaseModel):
    """Integration nodes (bohr) and positive weights (bohr^3)."""

    model_config = {"arbitrary_types_allowed": True, "frozen": True}

    scheme: GridScheme
    points: np.ndarray
    weights: np.ndarray

    @field_validator("points")
    @classmethod
    def validate_points(cls, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3:
            raise ValueError(f"Grid points must have shape (n, 3), got {v.shape}")
        return v

    @field_validator("weights")
    @classmethod
    def validate_weights(cls, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if np.any(v < 0):
            raise ValueError("Quadrature weights must be non-negative")
        return v

    @property
    def size(self) -> int:
        return len(self.weights)

    def integrate(self, values: np.ndarray) -> float:
        return float(np.dot(self.weights, values))


def mapped_radial_rule(n: int, scale: float, start: float = 0.0) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes on [start, inf) via r = start + R(1+t)/(1-t); weights include dr/dt only."""
    t, w = np.polynomial.legendre.leggauss(n)
    r = start + scale * (1.0 + t) / (1.0 - t)
    return r, w * 2.0 * scale / (1.0 - t) ** 2


def angular_rule(n_theta: int, n_phi: int) -> Tuple[np.ndarray, np.ndarray]:
    """Unit directions and solid-angle weights summing to 4*pi.

    Gauss-Legendre in cos(theta) times a uniform rule in phi.
    """
    cos_theta, w_theta = np.polynomial.legendre.leggauss(n_theta)
    phi = 2.0 * np.pi * (np.arange(n_phi) + 0.5) / n_phi
    sin_theta = np.sqrt(1.0 - cos_theta**2)
    directions = np.stack(
        [
            np.outer(sin_theta, np.cos(phi)),
            np.outer(sin_theta, np.sin(phi)),
            np.outer(cos_theta, np.ones_like(phi)),
        ],
        axis=-1,
    ).reshape(-1, 3)
    weights = np.outer(w_theta, np.full(n_phi, 2.0 * np.pi / n_phi)).reshape(-1)
    return directions, weights


def _atomic_product(
    center: np.ndarray, n_radial: int, scale: float, n_theta: int, n_phi: int
) -> Tuple[np.ndarray, np.ndarray]:
    r, w_r = mapped_radial_rule(n_radial, scale)
    directions, w_omega = angular_rule(n_theta, n_phi)
    points = center + (r[:, None, None] * directions[None, :, :]).reshape(-1, 3)
    weights = ((w_r * r**2)[:, None] * w_omega[None, :]).reshape(-1)
    return points, weights


def spherical_grid(
    center: Sequence[float],
    n_radial: int = 96,
    scale: float = 3.0,
    n_theta: int = 8,
    n_phi: int = 16,
) -> QuadratureGrid:
    """Single-center radial x angular product grid."""
    points, weights = _atomic_product(np.asarray(center, dtype=float), n_radial, scale, n_theta, n_phi)
    logger.debug(f"Spherical grid: {n_radial} radial x {n_theta * n_phi} angular nodes")
    return QuadratureGrid(scheme=GridScheme.RADIAL_SPHERICAL, points=points, weights=weights)


def _becke_step(mu: np.ndarray) -> np.ndarray:
    for _ in range(BECKE_SMOOTHING_STEPS):
        mu = 1.5 * mu - 0.5 * mu**3
    return 0.5 * (1.0 - mu)


def becke_cell_weights(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Normalized fuzzy-cell membership of every point, shape (n_points, n_centers)."""
    distances = np.linalg.norm(points[:, None, :] - centers[None, :, :], axis=2)
    n_centers = len(centers)
    cell = np.ones((len(points), n_centers))
    for a in range(n_centers):
        for b in range(n_centers):
            if a == b:
                continue
            separation = float(np.linalg.norm(centers[a] - centers[b]))
            mu = (distances[:, a] - distances[:, b]) / separation
            cell[:, a] *= _becke_step(mu)
    return cell / cell.sum(axis=1, keepdims=True)


def becke_grid(
    centers: np.ndarray,
    n_radial: int = 96,
    scale: float = 3.0,
    n_theta: int = 16,
    n_phi: int = 32,
) -> QuadratureGrid:
    """Multicenter grid: atomic product grids weighted by Becke partition functions."""
    centers = np.asarray(centers, dtype=float).reshape(-1, 3)
    if len(centers) == 1:
        return spherical_grid(centers[0], n_radial, scale, n_theta, n_phi)
    all_points = []
    all_weights = []
    for a, center in enumerate(centers):
        points, weights = _atomic_product(center, n_radial, scale, n_theta, n_phi)
        cell = becke_cell_weights(points, centers)
        all_points.append(points)
        all_weights.append(weights * cell[:, a])
    points = np.concatenate(all_points)
    weights = np.concatenate(all_weights)
    logger.debug(f"Becke grid: {len(centers)} centers, {len(weights)} nodes")
    return QuadratureGrid(scheme=GridScheme.BECKE, points=points, weights=weights)


def box_grid(spec: BoxGridSpec) -> QuadratureGrid:
    """Cell-centered midpoint rule on a uniform box."""
    points = spec.points()
    weights = np.full(len(points), spec.cell_volume)
    return QuadratureGrid(scheme=GridScheme.UNIFORM_BOX, points=points, weights=weights)


class RadialIntegrator:
    """Shell-theorem integrals of a spherically symmetric function f(r).

    ``f`` is evaluated on arrays of radii. ``scale`` sets the length of the
    mapped radial rule and should be comparable to the decay length of f.
    """

    def __init__(self, function: RadialFunction, scale: float, n_nodes: int = 96):
        self.function = function
        self.scale = scale
        self.n_nodes = n_nodes
        r, w = mapped_radial_rule(n_nodes, scale)
        self._total = float(np.sum(w * 4.0 * np.pi * r**2 * function(r)))

    @property
    def total(self) -> float:
        """Integral of f over all space."""
        return self._total

    def enclosed(self, radii: np.ndarray) -> np.ndarray:
        """Integral of f over the ball of each radius.

        Direct Gauss-Legendre on [0, r] inside the mapping scale, total minus
        the mapped tail outside it.
        """
        radii = np.atleast_1d(np.asarray(radii, dtype=float))
        t, w = np.polynomial.legendre.leggauss(self.n_nodes)
        result = np.empty_like(radii)
        inner = radii <= self.scale
        if np.any(inner):
            d = radii[inner][:, None]
            s = 0.5 * d * (t + 1.0)
            values = 4.0 * np.pi * s**2 * self.function(s.reshape(-1)).reshape(s.shape)
            result[inner] = np.sum(0.5 * d * w * values, axis=1)
        outer = ~inner
        if np.any(outer):
            d = radii[outer][:, None]
            s = d + self.scale * (1.0 + t) / (1.0 - t)
            ds = w * 2.0 * self.scale / (1.0 - t) ** 2
            values = 4.0 * np.pi * s**2 * self.function(s.reshape(-1)).reshape(s.shape)
            result[outer] = self._total - np.sum(ds * values, axis=1)
        return result

    def outer_potential(self, radii: np.ndarray) -> np.ndarray:
        """Integral of 4*pi*s*f(s) over s > r."""
        radii = np.atleast_1d(np.asarray(radii, dtype=float))
        t, w = np.polynomial.legendre.leggauss(self.n_nodes)
        d = radii[:, None]
        s = d + self.scale * (1.0 + t) / (1.0 - t)
        ds = w * 2.0 * self.scale / (1.0 - t) ** 2
        values = 4.0 * np.pi * s * self.function(s.reshape(-1)).reshape(s.shape)
        return np.sum(ds * values, axis=1)

    def potential(self, radii: np.ndarray) -> np.ndarray:
        """Coulomb potential of f at distance r from its center."""
        radii = np.atleast_1d(np.asarray(radii, dtype=float))
        inner = np.zeros_like(radii)
        nonzero = radii > 0
        if np.any(nonzero):
            inner[nonzero] = self.enclosed(radii[nonzero]) / radii[nonzero]
        return inner + self.outer_potential(radii)

    def self_energy(self, n_nodes: Optional[int] = None) -> float:
        """Half the Coulomb self-interaction of f."""
        r, w = mapped_radial_rule(n_nodes or self.n_nodes, self.scale)
        f = self.function(r)
        return float(0.5 * np.sum(w * 4.0 * np.pi * r**2 * f * self.potential(r)))
