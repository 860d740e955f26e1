"""Nanoparticle above a perfectly conducting plate.

All quantities are in natural units (hbar = c = k_B = 1) with
polarizabilities in volume units.  The scaled functions of ``(gamma, y)``
follow the normalisation in which ``f_plate(1, 0) == 1``.

Internally the free energy is written component-wise,

    F = -(1 / (16 pi Z^4)) * [(a_perp - b_perp) P_perp(y) + (a_z - b_z) P_z(y)]

with ``P_perp = y (1 - y d + y^2 d^2) C`` and ``P_z = y (1 - y d) C``, so no
anisotropy ratio is ever formed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .special_functions import EulerOperator

__all__ = [
    "Polarizability",
    "ThermalGeometry",
    "f_plate",
    "s_plate",
    "s_tilde",
    "f_plate_TE",
    "s_plate_TE",
    "s_plate_TM",
    "plate_free_energy",
    "plate_entropy",
    "plate_entropy_TE",
    "plate_entropy_TM",
    "PERP",
    "AXIAL",
    "PERP_TE",
    "PERP_TM",
]

DIPOLE_RATIO = 0.1

# shape functions of the image-dyadic sums
PERP = EulerOperator([1.0, -1.0, 1.0])
AXIAL = EulerOperator([1.0, -1.0])
PERP_TE = EulerOperator([0.0, 0.0, 0.5])
PERP_TM = EulerOperator([1.0, -1.0, 0.5])


@dataclass(frozen=True)
class Polarizability:
    """Static electric and magnetic polarizabilities of a uniaxial particle.

    The symmetry axis is the z axis, which is normal to the plate or along
    the line joining two particles.
    """

    alpha_perp: float = 0.0
    alpha_z: float = 0.0
    beta_perp: float = 0.0
    beta_z: float = 0.0

    def __post_init__(self):
        for name in ("alpha_perp", "alpha_z", "beta_perp", "beta_z"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")

    @classmethod
    def from_anisotropy(cls, alpha_z=0.0, gamma_alpha=1.0, beta_z=0.0, gamma_beta=1.0):
        return cls(gamma_alpha * alpha_z, alpha_z, gamma_beta * beta_z, beta_z)

    @classmethod
    def isotropic(cls, alpha=0.0, beta=0.0):
        return cls(alpha, alpha, beta, beta)

    @classmethod
    def perfect_conductor(cls, radius=1.0):
        """Dipole limit of a conducting sphere: alpha = a^3, beta = -a^3/2."""
        a3 = radius**3
        return cls.isotropic(a3, -0.5 * a3)

    @property
    def gamma_alpha(self) -> float:
        if self.alpha_z == 0:
            raise ZeroDivisionError("gamma_alpha undefined for alpha_z == 0")
        return self.alpha_perp / self.alpha_z

    @property
    def gamma_beta(self) -> float:
        if self.beta_z == 0:
            raise ZeroDivisionError("gamma_beta undefined for beta_z == 0")
        return self.beta_perp / self.beta_z

    def dual(self) -> Polarizability:
        """Swap electric and magnetic responses."""
        return Polarizability(self.beta_perp, self.beta_z, self.alpha_perp, self.alpha_z)

    def scaled(self, factor: float) -> Polarizability:
        return Polarizability(*(factor * v for v in self.as_tuple()))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.alpha_perp, self.alpha_z, self.beta_perp, self.beta_z)

    def electric_only(self) -> Polarizability:
        return replace(self, beta_perp=0.0, beta_z=0.0)

    def __add__(self, other: Polarizability) -> Polarizability:
        return Polarizability(*(a + b for a, b in zip(self.as_tuple(), other.as_tuple())))


@dataclass(frozen=True)
class ThermalGeometry:
    """Separation ``Z`` and temperature ``T``; ``y = 4 pi Z T``.

    ``size`` is an optional particle scale recorded only to flag whether the
    dipole approximation is trustworthy (``size / Z < 0.1``).
    """

    Z: float
    T: float = 0.0
    size: float | None = field(default=None, compare=False)

    def __post_init__(self):
        if not (math.isfinite(self.Z) and self.Z > 0):
            raise ValueError(f"separation Z must be positive and finite, got {self.Z!r}")
        if not (math.isfinite(self.T) and self.T >= 0):
            raise ValueError(f"temperature T must be non-negative and finite, got {self.T!r}")

    @classmethod
    def from_y(cls, y: float, Z: float = 1.0, size: float | None = None) -> ThermalGeometry:
        return cls(Z, y / (4.0 * math.pi * Z), size)

    @property
    def y(self) -> float:
        return 4.0 * math.pi * self.Z * self.T

    @property
    def dipole_valid(self) -> bool | None:
        if self.size is None:
            return None
        return abs(self.size) / self.Z < DIPOLE_RATIO


def _check_gamma(gamma):
    if not np.all(np.isfinite(gamma)):
        raise ValueError(f"gamma must be finite, got {gamma!r}")


def f_plate(gamma, y):
    """Scaled free energy ``f(gamma, y)``; ``f(gamma, 0) = (1 + 2 gamma) / 3``."""
    _check_gamma(gamma)
    return (AXIAL(y) + gamma * PERP(y)) / 6.0


def s_plate(gamma, y):
    """Scaled entropy ``s = df/dy``.

    Tends to ``(1 + gamma) / 12`` for large y and behaves as
    ``(1 - 2 gamma) y^3 / 540`` for small y.
    """
    _check_gamma(gamma)
    return (AXIAL.derivative(y) + gamma * PERP.derivative(y)) / 6.0


def s_tilde(gamma, y):
    """Rescaled entropy ``s / y^3``, finite as y -> 0."""
    _check_gamma(gamma)
    yarr = np.asarray(y, dtype=float)
    if np.any(yarr < 0):
        raise ValueError("y must be non-negative")
    limit = (1.0 - 2.0 * gamma) / 540.0
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(yarr > 0, s_plate(gamma, yarr) / yarr**3, limit)
    return float(out) if out.ndim == 0 else out


def f_plate_TE(gamma, y):
    """TE part ``gamma y^3 C''(y) / 12`` of the scaled free energy."""
    _check_gamma(gamma)
    return gamma * PERP_TE(y) / 6.0


def s_plate_TE(gamma, y):
    """TE contribution to the scaled entropy; never positive for gamma >= 0."""
    _check_gamma(gamma)
    return gamma * PERP_TE.derivative(y) / 6.0


def s_plate_TM(gamma, y):
    """TM contribution, ``s_plate - s_plate_TE``."""
    _check_gamma(gamma)
    return (AXIAL.derivative(y) + gamma * PERP_TM.derivative(y)) / 6.0


def _net(p: Polarizability) -> tuple[float, float]:
    # magnetic response enters through alpha -> -beta
    return p.alpha_perp - p.beta_perp, p.alpha_z - p.beta_z


def plate_free_energy(p: Polarizability, geom: ThermalGeometry) -> float:
    """Casimir-Polder free energy above a perfectly conducting plate."""
    perp, axial = _net(p)
    y = geom.y
    return -(perp * PERP(y) + axial * AXIAL(y)) / (16.0 * math.pi * geom.Z**4)


def plate_entropy(p: Polarizability, geom: ThermalGeometry) -> float:
    """Interaction entropy ``S = -dF/dT``; exactly zero at ``T = 0``."""
    perp, axial = _net(p)
    y = geom.y
    return (perp * PERP.derivative(y) + axial * AXIAL.derivative(y)) / (4.0 * geom.Z**3)


def plate_entropy_TE(p: Polarizability, geom: ThermalGeometry) -> float:
    perp, _ = _net(p)
    return perp * PERP_TE.derivative(geom.y) / (4.0 * geom.Z**3)


def plate_entropy_TM(p: Polarizability, geom: ThermalGeometry) -> float:
    perp, axial = _net(p)
    y = geom.y
    return (perp * PERP_TM.derivative(y) + axial * AXIAL.derivative(y)) / (4.0 * geom.Z**3)
