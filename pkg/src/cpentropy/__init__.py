"""Casimir-Polder free energies and interaction entropies of anisotropic
nanoparticles near a perfectly conducting plate or near each other."""
from .analysis import (
    CriticalResult,
    SystemConfig,
    classify_table,
    critical_anisotropy,
    min_entropy,
    zero_crossings,
)
from .pair import (
    ParticlePair,
    f_pair_EE,
    g_pair_EM,
    pair_entropy,
    pair_entropy_small_y,
    pair_free_energy,
    s_pair_EE,
    s_pair_EM,
)
from .plate import (
    Polarizability,
    ThermalGeometry,
    f_plate,
    plate_entropy,
    plate_free_energy,
    s_plate,
    s_plate_TE,
    s_plate_TM,
    s_tilde,
)
from .special_functions import CothKernel, coth_kernel

__version__ = "0.1.0"
