"""Two uniaxial nanoparticles with symmetry axes along their separation.

The free energy splits into an electric-electric sector, a magnetic-magnetic
sector with the same form, and an electric-magnetic cross term.  In
component form (``Z`` is the centre-to-centre distance)::

    F = -(1/(4 pi Z^7)) [a_z1 a_z2 Q_z + a_p1 a_p2 Q_p + (same for beta)]
        +(1/(4 pi Z^7)) (a_p1 b_p2 + b_p1 a_p2) Q_em

where ``Q_z + gamma Q_p = 23 f(gamma, y)`` and ``Q_em = 7 g(y)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .plate import Polarizability, ThermalGeometry
from .special_functions import EulerOperator

__all__ = [
    "ParticlePair",
    "f_pair_EE",
    "s_pair_EE",
    "g_pair_EM",
    "s_pair_EM",
    "pair_free_energy",
    "pair_entropy",
    "pair_entropy_small_y",
    "pair_entropy_sectors",
    "pair_scaled_entropy",
    "pair_scaled_series",
    "EE_AXIAL",
    "EE_PERP",
    "EM_PERP",
]

EE_AXIAL = EulerOperator([4.0, -4.0, 1.0])
EE_PERP = EulerOperator([2.0, -2.0, 1.5, -0.5, 0.125])
EM_PERP = EulerOperator([0.0, 0.0, 0.5, -0.5, 0.125])


@dataclass(frozen=True)
class ParticlePair:
    p1: Polarizability
    p2: Polarizability
    geom: ThermalGeometry

    def swapped(self) -> ParticlePair:
        return ParticlePair(self.p2, self.p1, self.geom)

    def dual(self) -> ParticlePair:
        return ParticlePair(self.p1.dual(), self.p2.dual(), self.geom)


def f_pair_EE(gamma, y):
    """Scaled EE free energy, normalised so that ``f(1, 0) == 1``."""
    return (EE_AXIAL(y) + gamma * EE_PERP(y)) / 23.0


def s_pair_EE(gamma, y):
    """EE entropy ``df/dy``: ``(2 + gamma)/23`` at large y, ``(1 - gamma) y^3/2070`` at small y."""
    return (EE_AXIAL.derivative(y) + gamma * EE_PERP.derivative(y)) / 23.0


def g_pair_EM(y):
    """Scaled EM free energy, ``g(0) == 1``; decays as exp(-y)."""
    return EM_PERP(y) / 7.0


def s_pair_EM(y):
    """EM entropy ``dg/dy``; non-positive, ``~ -y^5/7056`` for small y."""
    return EM_PERP.derivative(y) / 7.0


def _weights(p1: Polarizability, p2: Polarizability) -> tuple[float, float, float]:
    axial = p1.alpha_z * p2.alpha_z + p1.beta_z * p2.beta_z
    perp = p1.alpha_perp * p2.alpha_perp + p1.beta_perp * p2.beta_perp
    cross = p1.alpha_perp * p2.beta_perp + p1.beta_perp * p2.alpha_perp
    return axial, perp, cross


def pair_free_energy(pair: ParticlePair) -> float:
    axial, perp, cross = _weights(pair.p1, pair.p2)
    y = pair.geom.y
    bracket = axial * EE_AXIAL(y) + perp * EE_PERP(y) - cross * EM_PERP(y)
    return -bracket / (4.0 * math.pi * pair.geom.Z**7)


def pair_scaled_entropy(p1: Polarizability, p2: Polarizability, y):
    """``Z^6 S`` as a function of y (vectorised over y)."""
    axial, perp, cross = _weights(p1, p2)
    return (
        axial * EE_AXIAL.derivative(y)
        + perp * EE_PERP.derivative(y)
        - cross * EM_PERP.derivative(y)
    )


def pair_scaled_series(p1: Polarizability, p2: Polarizability, nterms: int = 4) -> np.ndarray:
    """Coefficients of y^-1, y^1, y^3, ... in the small-y series of ``Z^6 S``."""
    axial, perp, cross = _weights(p1, p2)
    return (
        axial * EE_AXIAL.series_coefficients(nterms, True)
        + perp * EE_PERP.series_coefficients(nterms, True)
        - cross * EM_PERP.series_coefficients(nterms, True)
    )


def pair_entropy(pair: ParticlePair) -> float:
    """Total interaction entropy ``S = -dF/dT`` of the pair."""
    return float(pair_scaled_entropy(pair.p1, pair.p2, pair.geom.y)) / pair.geom.Z**6


def pair_entropy_sectors(pair: ParticlePair) -> dict[str, float]:
    """Entropy split into EE, MM and EM contributions."""
    p1, p2, y = pair.p1, pair.p2, pair.geom.y
    z6 = pair.geom.Z**6
    ee = p1.alpha_z * p2.alpha_z * EE_AXIAL.derivative(y) + p1.alpha_perp * p2.alpha_perp * EE_PERP.derivative(y)
    mm = p1.beta_z * p2.beta_z * EE_AXIAL.derivative(y) + p1.beta_perp * p2.beta_perp * EE_PERP.derivative(y)
    _, _, cross = _weights(p1, p2)
    em = -cross * EM_PERP.derivative(y)
    return {"EE": ee / z6, "MM": mm / z6, "EM": em / z6}


def pair_entropy_small_y(pair: ParticlePair) -> float:
    """Two-term small-y expansion of the pair entropy (through y^5).

    Raises
    ------
    ValueError
        If ``y >= 2 pi``, where the expansion no longer converges.
    """
    y = pair.geom.y
    if y >= 2.0 * math.pi:
        raise ValueError(f"small-y expansion requires y < 2 pi, got y = {y}")
    p1, p2 = pair.p1, pair.p2
    # written with perpendicular components: a_z1 a_z2 gamma1 gamma2 = a_p1 a_p2
    ee = p1.alpha_z * p2.alpha_z
    mm = p1.beta_z * p2.beta_z
    ee_p = p1.alpha_perp * p2.alpha_perp
    mm_p = p1.beta_perp * p2.beta_perp
    cross = p1.alpha_perp * p2.beta_perp + p1.beta_perp * p2.alpha_perp
    cubic = (ee - ee_p + mm - mm_p) / 90.0
    quintic = (4.0 * (ee + mm) + 7.0 * (ee_p + mm_p) + 5.0 * cross) / 5040.0
    return (cubic * y**3 + quintic * y**5) / pair.geom.Z**6
