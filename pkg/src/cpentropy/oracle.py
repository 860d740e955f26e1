"""Free energies by direct Matsubara summation.

This module deliberately shares nothing with the closed-form path: every
per-mode summand is assembled from the free Green's dyadic along the
symmetry axis,

    Gamma_0(R) = -[1 u(x) - R R v(x)] exp(-x) / (4 pi R^3),
    u(x) = 1 + x + x^2,  v(x) = 3 + 3x + x^2,   x = |zeta| R,

and the frequency integral is replaced by ``T * sum_m`` over
``zeta_m = 2 pi m T``.  Summands are exponential-polynomials
``exp(-w) P(w)`` in ``w = |m| y``, which gives a rigorous geometric tail
bound for truncation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np
from numpy.polynomial import Polynomial

from .pair import ParticlePair
from .plate import Polarizability, ThermalGeometry

__all__ = [
    "MatsubaraSum",
    "TruncationError",
    "matsubara_sum",
    "free_dyadic_axis",
    "plate_image_summand",
    "plate_mode_polynomials",
    "pair_mode_polynomials",
    "plate_free_energy_oracle",
    "pair_free_energy_oracle",
    "entropy_oracle",
    "te_mode_zero_check",
]

U = Polynomial([1.0, 1.0, 1.0])
V = Polynomial([3.0, 3.0, 1.0])
W = Polynomial([0.0, 1.0])

M_MIN = 8
M_LIMIT = 10**7


class TruncationError(RuntimeError):
    """Requested tolerance not reached before the mode limit."""


@dataclass(frozen=True)
class MatsubaraSum:
    """Result of ``sum_{m=-inf}^{inf} exp(-|m| y) P(|m| y)``."""

    y: float
    m_max: int
    tail_bound: float
    partial: float


def free_dyadic_axis(x: Polynomial) -> tuple[Polynomial, Polynomial]:
    """(perpendicular, axial) entries of ``Gamma_0`` along the axis, in units of
    ``exp(-x) / (4 pi R^3)``, as polynomials in whatever variable ``x`` is."""
    return -U(x), V(x) - U(x)


def plate_image_summand(x: Polynomial = W) -> tuple[Polynomial, Polynomial]:
    """Diagonal of ``Gamma - Gamma_0`` at the particle, image at distance 2Z.

    The image term is ``-Gamma_0(2Z z) . (1 - 2 z z)``; returned in units of
    ``exp(-x) / (32 pi Z^3)`` with ``x = 2 |zeta| Z``.
    """
    perp, axial = free_dyadic_axis(x)
    return -perp, axial  # reflection flips the sign of the axial entry only


def plate_mode_polynomials(p: Polarizability, sector: str = "total") -> Polynomial:
    """``P(w)`` such that ``F = -(T / (16 Z^3)) sum_m exp(-w) P(w)``.

    ``sector`` selects the plate's TE or TM response; those come from the
    k_perp integrals of the E and H polarisation tensors,
    ``int_{|zeta|}^inf dk k^n exp(-2 k Z)``, and add up to the image result.
    """
    ap = p.alpha_perp - p.beta_perp
    az = p.alpha_z - p.beta_z
    if sector == "total":
        perp, axial = plate_image_summand()
        return 2.0 * ap * perp + az * axial
    if sector == "TE":
        # E = -(zeta^2 / 2) 1_perp
        return ap * W**2
    if sector == "TM":
        # H = (kappa^2 / 2) 1_perp + (kappa^2 - zeta^2) z z
        return ap * Polynomial([2.0, 2.0, 1.0]) + az * Polynomial([2.0, 2.0])
    raise ValueError(f"unknown plate sector {sector!r}")


def pair_mode_polynomials(p1: Polarizability, p2: Polarizability) -> dict[str, Polynomial]:
    """Per-sector ``P(w)`` with ``F_sector = sign * (T / Z^6) sum_m exp(-w) P(w)``.

    EE and MM carry sign -1, EM carries +1.  Here ``x = |zeta| Z = w / 2``.
    """
    x = W / 2.0
    perp, axial = free_dyadic_axis(x)
    # -(T/2) tr[4 pi a1 G0 4 pi a2 G0] = -(T / (2 Z^6)) exp(-w) [2 a_p a_p perp^2 + a_z a_z axial^2]
    ee = 0.5 * (2.0 * p1.alpha_perp * p2.alpha_perp * perp**2 + p1.alpha_z * p2.alpha_z * axial**2)
    mm = 0.5 * (2.0 * p1.beta_perp * p2.beta_perp * perp**2 + p1.beta_z * p2.beta_z * axial**2)
    # Phi_0 = -(zeta / 4 pi Z^3) R x (1 + |zeta| Z) exp(-|zeta| Z); tr[(z x) a (z x) b] = -2 a_p b_p
    cross = p1.alpha_perp * p2.beta_perp + p1.beta_perp * p2.alpha_perp
    em = cross * (x * (1.0 + x)) ** 2
    return {"EE": ee, "MM": mm, "EM": em}


def _tail_ratio(y: float, m: int, degree: int) -> float:
    return math.exp(-y) * ((m + 1) / m) ** degree


def matsubara_sum(poly: Polynomial, y: float, tol: float = 1e-15, dps: int | None = None) -> MatsubaraSum:
    """Sum ``exp(-|m| y) P(|m| y)`` over all integers m.

    Modes are added until the geometric envelope of the remaining tail is
    below ``tol * |partial|``.  With ``dps`` set, the sum is carried out in
    mpmath at that many decimal digits (``partial`` is then an ``mpf``).
    """
    if not (math.isfinite(y) and y > 0):
        raise ValueError(f"Matsubara sum needs y > 0, got {y!r}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    coeffs = [float(c) for c in poly.coef]
    degree = len(coeffs) - 1
    if dps is None:
        return _sum_float(coeffs, degree, y, tol)
    with mpmath.workdps(dps):
        return _sum_mp(coeffs, degree, y, tol)


def _sum_float(coeffs, degree, y, tol) -> MatsubaraSum:
    poly = Polynomial(coeffs)
    terms = [0.5 * poly(0.0)]  # m = 0 counted once; the rest doubled at the end
    m_max = 0
    block = M_MIN
    while True:
        m = np.arange(m_max + 1, m_max + block + 1, dtype=float)
        w = m * y
        terms.extend(np.exp(-w) * poly(w))
        m_max += block
        partial = 2.0 * math.fsum(terms)
        nxt = (m_max + 1) * y
        ratio = _tail_ratio(y, m_max + 1, degree)
        if ratio < 1.0:
            env = math.exp(-nxt) * float(np.polynomial.polynomial.polyval(nxt, np.abs(coeffs)))
            tail = 2.0 * env / (1.0 - ratio)
            if tail <= tol * abs(partial) or partial == 0.0 and tail == 0.0:
                return MatsubaraSum(y, m_max, tail, partial)
        if m_max >= M_LIMIT:
            raise TruncationError(f"tolerance {tol} not reached with {m_max} modes at y={y}")
        block = min(2 * block, M_LIMIT - m_max)


def _sum_mp(coeffs, degree, y, tol) -> MatsubaraSum:
    cs = [mpmath.mpf(c) for c in coeffs]
    ymp = mpmath.mpf(y)

    def term(m):
        w = m * ymp
        return mpmath.exp(-w) * mpmath.polyval(cs[::-1], w)

    partial = term(0)
    m = 0
    tol_mp = mpmath.mpf(tol)
    while True:
        m += 1
        partial += 2 * term(m)
        if m < M_MIN:
            continue
        ratio = mpmath.exp(-ymp) * mpmath.mpf(m + 2) ** degree / mpmath.mpf(m + 1) ** degree
        if ratio < 1:
            nxt = (m + 1) * ymp
            env = mpmath.exp(-nxt) * mpmath.polyval([abs(c) for c in cs[::-1]], nxt)
            tail = 2 * env / (1 - ratio)
            if tail <= tol_mp * abs(partial):
                return MatsubaraSum(y, m, float(tail), partial)
        if m >= M_LIMIT:
            raise TruncationError(f"tolerance {tol} not reached with {m} modes at y={y}")


def plate_free_energy_oracle(p: Polarizability, geom: ThermalGeometry, tol: float = 1e-15,
                             sector: str = "total", dps: int | None = None):
    """Plate free energy from the mode sum; requires ``T > 0``."""
    if geom.T <= 0:
        raise ValueError("Matsubara oracle needs T > 0; use the closed form at T = 0")
    poly = plate_mode_polynomials(p, sector)
    if not np.any(poly.coef):
        return 0.0
    res = matsubara_sum(poly, geom.y, tol, dps)
    return -geom.T * res.partial / (16.0 * geom.Z**3)


def pair_free_energy_oracle(pair: ParticlePair, tol: float = 1e-15, sectors=("EE", "MM", "EM"),
                            dps: int | None = None):
    """Pair free energy from the mode sum over the requested sectors."""
    geom = pair.geom
    if geom.T <= 0:
        raise ValueError("Matsubara oracle needs T > 0; use the closed form at T = 0")
    polys = pair_mode_polynomials(pair.p1, pair.p2)
    total = 0.0
    for name in sectors:
        poly = polys[name]
        if not np.any(poly.coef):
            continue
        sign = 1.0 if name == "EM" else -1.0
        total = total + sign * matsubara_sum(poly, geom.y, tol, dps).partial
    return geom.T * total / geom.Z**6


def entropy_oracle(free_energy, T: float, rel_step: float = 1e-4, dps: int = 40) -> float:
    """``-dF/dT`` by central differences with one Richardson step.

    ``free_energy(T, dps)`` must return F at temperature T, computed with
    ``dps`` digits so that the difference quotient does not lose precision.
    """
    if T <= 0:
        raise ValueError("entropy oracle needs T > 0")
    with mpmath.workdps(dps):
        Tm = mpmath.mpf(T)
        h = Tm * rel_step

        def central(step):
            return -(free_energy(Tm + step, dps) - free_energy(Tm - step, dps)) / (2 * step)

        d1 = central(h)
        d2 = central(h / 2)
        return float((4 * d2 - d1) / 3)


def te_mode_zero_check(geom: ThermalGeometry) -> bool:
    """True iff the TE summand of the static (m = 0) mode vanishes exactly.

    A Drude plate differs from a perfect conductor only by dropping that
    mode, so this is the statement that both plates give the same answer.
    """
    unit = Polarizability(1.0, 1.0)
    te = plate_mode_polynomials(unit, "TE")
    # m = 0 means w = 0 at any temperature
    return float(te(0.0)) == 0.0 and geom.y >= 0.0
