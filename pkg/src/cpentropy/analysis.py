"""Locating negative-entropy regions.

Root finding on entropy curves, window minimisation, critical anisotropy
searches and the regeneration of the summary table of which systems show
negative interaction entropy.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from . import pair as _pair
from . import plate as _plate
from .plate import Polarizability

__all__ = [
    "CriticalResult",
    "SystemConfig",
    "TableRow",
    "ConfigurationError",
    "EvaluationError",
    "DEFAULT_Y_RANGE",
    "zero_crossings",
    "min_entropy",
    "has_negative_entropy",
    "negativity_objective",
    "critical_anisotropy",
    "table_one_rows",
    "classify_table",
]

DEFAULT_Y_RANGE = (0.05, 50.0)
DEFAULT_GRID = 400
NOISE_FLOOR = 1e-14
SERIES_ZERO = 1e-12
SWEEPS = (
    "gamma_alpha",
    "gamma_beta",
    "gamma_alpha_1",
    "gamma_alpha_2",
    "gamma_beta_1",
    "gamma_beta_2",
    "ratio",
)


class ConfigurationError(ValueError):
    pass


class EvaluationError(ArithmeticError):
    """An entropy curve returned a non-finite value."""


@dataclass(frozen=True)
class CriticalResult:
    """A located zero crossing in y or a critical anisotropy.

    ``status`` is ``"ok"`` or ``"none-in-range"``; in the latter case
    ``value`` and ``bracket`` are ``None``.
    """

    kind: str
    value: float | None
    bracket: tuple[float, float] | None
    objective_at_value: float | None
    iterations: int
    tol: float
    status: str = "ok"
    parameter: str | None = None
    negative_side: str | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.bracket is not None:
            d["bracket"] = list(self.bracket)
        return d


def _evaluate(curve: Callable, ys: np.ndarray) -> np.ndarray:
    try:
        vals = np.asarray(curve(ys), dtype=float)
        if vals.shape != ys.shape:
            raise TypeError
    except (TypeError, ValueError):
        vals = np.array([float(curve(float(y))) for y in ys])
    if not np.all(np.isfinite(vals)):
        bad = ys[~np.isfinite(vals)][0]
        raise EvaluationError(f"non-finite entropy at y = {bad}")
    return vals


def _scalar(curve: Callable, y: float) -> float:
    v = float(curve(y))
    if not math.isfinite(v):
        raise EvaluationError(f"non-finite entropy at y = {y}")
    return v


def _grid(y_range, n_grid: int) -> np.ndarray:
    lo, hi = y_range
    if not (0 < lo < hi and math.isfinite(hi)):
        raise ValueError(f"y range must satisfy 0 < lo < hi < inf, got {y_range}")
    return np.geomspace(lo, hi, n_grid)


def zero_crossings(curve: Callable, y_range=DEFAULT_Y_RANGE, tol: float = 1e-10,
                   n_grid: int = DEFAULT_GRID) -> list[CriticalResult]:
    """All sign changes of ``curve`` on ``y_range``, each refined by bisection.

    The curve is scanned on a geometric grid; every bracketed sign change is
    bisected until the bracket is narrower than ``tol``.  An empty list means
    no sign change was seen.
    """
    ys = _grid(y_range, n_grid)
    vals = _evaluate(curve, ys)
    roots = []
    for i in range(n_grid - 1):
        a, b, fa, fb = ys[i], ys[i + 1], vals[i], vals[i + 1]
        if fa == 0.0:
            if i == 0 or vals[i - 1] != 0.0:
                roots.append(CriticalResult("zero_crossing_y", a, (a, a), 0.0, 0, tol))
            continue
        if fb == 0.0 or fa * fb > 0:
            continue
        roots.append(_bisect_root(curve, a, b, fa, fb, tol))
    if vals[-1] == 0.0 and (n_grid == 1 or vals[-2] != 0.0):
        roots.append(CriticalResult("zero_crossing_y", ys[-1], (ys[-1], ys[-1]), 0.0, 0, tol))
    return roots


def _bisect_root(curve, lo, hi, flo, fhi, tol) -> CriticalResult:
    it = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = _scalar(curve, mid)
        it += 1
        if fm == 0.0:
            return CriticalResult("zero_crossing_y", mid, (mid, mid), 0.0, it, tol)
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    value, fval = (lo, flo) if abs(flo) <= abs(fhi) else (hi, fhi)
    return CriticalResult("zero_crossing_y", value, (lo, hi), fval, it, tol)


def min_entropy(curve: Callable, y_range=DEFAULT_Y_RANGE, n_grid: int = DEFAULT_GRID,
                xtol: float = 1e-10) -> tuple[float, float]:
    """Minimum of ``curve`` on ``y_range``: grid scan, then bounded Brent
    refinement between the neighbours of the best grid point."""
    ys = _grid(y_range, n_grid)
    vals = _evaluate(curve, ys)
    i = int(np.argmin(vals))
    best_y, best_s = float(ys[i]), float(vals[i])
    lo, hi = ys[max(i - 1, 0)], ys[min(i + 1, n_grid - 1)]
    if hi > lo:
        res = minimize_scalar(lambda y: _scalar(curve, y), bounds=(lo, hi), method="bounded",
                              options={"xatol": xtol * max(1.0, lo)})
        if res.fun < best_s:
            best_y, best_s = float(res.x), float(res.fun)
    return best_y, best_s


@dataclass(frozen=True)
class SystemConfig:
    """A plate or pair system with at most one swept parameter.

    For plates ``sector`` selects the total, TE or TM entropy.  The swept
    parameter is applied with :meth:`at`.
    """

    kind: str
    particles: tuple[Polarizability, ...]
    swept: str | None = None
    sector: str = "total"
    label: str = ""

    def __post_init__(self):
        if self.kind not in ("plate", "pair"):
            raise ConfigurationError(f"unknown system kind {self.kind!r}")
        need = 1 if self.kind == "plate" else 2
        if len(self.particles) != need:
            raise ConfigurationError(f"{self.kind} system needs {need} particle(s)")
        if self.swept is not None and self.swept not in SWEEPS:
            raise ConfigurationError(f"unknown swept parameter {self.swept!r}")
        if self.sector not in ("total", "TE", "TM"):
            raise ConfigurationError(f"unknown plate sector {self.sector!r}")
        if self.kind == "pair" and self.sector != "total":
            raise ConfigurationError("pair systems have no plate sector")

    def at(self, value: float) -> SystemConfig:
        """The configuration with the swept parameter set to ``value``."""
        if self.swept is None:
            raise ConfigurationError("configuration has no swept parameter")
        parts = list(self.particles)
        name = self.swept
        if name == "ratio":
            parts = [replace(p, beta_perp=value * p.alpha_perp, beta_z=value * p.alpha_z) for p in parts]
            return replace(self, particles=tuple(parts))
        which = range(len(parts))
        if name[-2:] in ("_1", "_2"):
            idx = int(name[-1]) - 1
            if idx >= len(parts):
                raise ConfigurationError(f"{name} needs a second particle")
            which = [idx]
            name = name[:-2]
        for i in which:
            p = parts[i]
            if name == "gamma_alpha":
                if p.alpha_z == 0:
                    raise ConfigurationError("cannot set gamma_alpha with alpha_z = 0")
                parts[i] = replace(p, alpha_perp=value * p.alpha_z)
            else:
                if p.beta_z == 0:
                    raise ConfigurationError("cannot set gamma_beta with beta_z = 0")
                parts[i] = replace(p, beta_perp=value * p.beta_z)
        return replace(self, particles=tuple(parts))

    def scaled(self, factor: float) -> SystemConfig:
        return replace(self, particles=tuple(p.scaled(factor) for p in self.particles))

    def _plate_ops(self):
        p = self.particles[0]
        perp, axial = p.alpha_perp - p.beta_perp, p.alpha_z - p.beta_z
        if self.sector == "TE":
            return [(perp, _plate.PERP_TE)]
        perp_op = _plate.PERP if self.sector == "total" else _plate.PERP_TM
        return [(perp, perp_op), (axial, _plate.AXIAL)]

    def entropy(self, y):
        """Entropy at unit separation as a function of ``y`` (vectorised)."""
        if self.kind == "plate":
            return sum(w * op.derivative(y) for w, op in self._plate_ops()) / 4.0
        return _pair.pair_scaled_entropy(*self.particles, y)

    def series(self, nterms: int = 4) -> np.ndarray:
        """Small-y coefficients of the entropy for powers y^-1, y^1, y^3, ..."""
        if self.kind == "plate":
            return sum(w * op.series_coefficients(nterms, True) for w, op in self._plate_ops()) / 4.0
        return _pair.pair_scaled_series(*self.particles, nterms)


def _leading_series(config: SystemConfig) -> tuple[int, float]:
    """(power, coefficient) of the first non-negligible small-y term."""
    coeffs = config.series(6)
    norm = np.max(np.abs(coeffs))
    if norm == 0:
        return -1, 0.0
    for n, c in enumerate(coeffs):
        if abs(c) > SERIES_ZERO * norm:
            return 2 * n - 1, float(c)
    return -1, 0.0


def negativity_objective(config: SystemConfig, y_range=DEFAULT_Y_RANGE,
                         n_grid: int = DEFAULT_GRID) -> tuple[bool, float, float]:
    """Decide whether the entropy of ``config`` turns negative.

    Returns ``(negative, objective, y_at_min)`` where ``objective`` is the
    window minimum divided by the largest |S| on the grid.  Negativity
    below the window is read off the small-y series; the window itself is
    always checked by full minimisation.
    """
    curve = config.entropy
    ys = _grid(y_range, n_grid)
    vals = _evaluate(curve, ys)
    scale = float(np.max(vals)) if np.max(vals) > 0 else float(np.max(np.abs(vals)))
    y_min, s_min = min_entropy(curve, y_range, n_grid)
    if scale == 0.0:
        return False, 0.0, y_min
    objective = s_min / scale
    negative = s_min < -NOISE_FLOOR * scale
    power, lead = _leading_series(config)
    if lead < 0:
        lo = y_range[0]
        objective = min(objective, lead * lo**power / scale)
        negative = True
    return negative, objective, y_min


def has_negative_entropy(config: SystemConfig, y_range=DEFAULT_Y_RANGE, n_grid: int = DEFAULT_GRID) -> bool:
    return negativity_objective(config, y_range, n_grid)[0]


def critical_anisotropy(config: SystemConfig, gamma_range, tol: float = 1e-6,
                        y_range=DEFAULT_Y_RANGE, n_grid: int = DEFAULT_GRID) -> CriticalResult:
    """Bisect the swept parameter for the onset of negative entropy.

    Each evaluation minimises the entropy over y.  If both ends of
    ``gamma_range`` agree on whether negative entropy exists, the result has
    status ``"none-in-range"``.
    """
    if config.swept is None:
        raise ConfigurationError("critical search needs a swept parameter")
    lo, hi = map(float, gamma_range)
    if not lo < hi:
        raise ValueError(f"empty parameter range {gamma_range}")

    def probe(g):
        return negativity_objective(config.at(g), y_range, n_grid)

    neg_lo, obj_lo, _ = probe(lo)
    neg_hi, obj_hi, _ = probe(hi)
    if neg_lo == neg_hi:
        return CriticalResult("critical_gamma", None, None, None, 0, tol, "none-in-range", config.swept)
    it = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        neg_mid, _, _ = probe(mid)
        it += 1
        if neg_mid == neg_lo:
            lo = mid
        else:
            hi = mid
    value = 0.5 * (lo + hi)
    _, obj, _ = probe(value)
    side = "above" if neg_hi else "below"
    return CriticalResult("critical_gamma", value, (lo, hi), obj, it, tol, "ok", config.swept, side)


@dataclass(frozen=True)
class TableRow:
    """One row of the negative-entropy summary.

    ``expected`` is either ``"always"`` or a mapping from swept parameter to
    the printed threshold.
    """

    label: str
    printed: str
    configs: tuple[SystemConfig, ...]
    expected: object
    tolerance: float = 0.01
    search_range: tuple[float, float] = (0.1, 3.0)
    probe_values: tuple[float, ...] = field(default=(0.1, 0.25, 0.5, 1.0, 2.0, 4.0))


def table_one_rows() -> list[TableRow]:
    """The seven rows: pairs E/E, E/M, PC/PC, PC/D and E/TE, E/TM, E/PC plates."""
    E = Polarizability.isotropic(1.0, 0.0)
    M = Polarizability.isotropic(0.0, -1.0)  # diamagnetic, the sign a conductor carries
    PC = Polarizability.perfect_conductor(1.0)
    D = Polarizability.isotropic(1.0, 0.0)
    return [
        TableRow("E/E", "S<0 occurs for gamma_alpha>1",
                 (SystemConfig("pair", (E, E), "gamma_alpha_1", label="E/E"),),
                 {"gamma_alpha_1": 1.0}, 1e-3),
        TableRow("E/M", "S<0 always",
                 (SystemConfig("pair", (E, M), "gamma_alpha_1", label="E/M"),), "always"),
        TableRow("PC/PC", "S<0 for gamma_alpha>0.74 or gamma_beta>0.54",
                 (SystemConfig("pair", (PC, PC), "gamma_alpha", label="PC/PC"),
                  SystemConfig("pair", (PC, PC), "gamma_beta", label="PC/PC")),
                 {"gamma_alpha": 0.74, "gamma_beta": 0.54}, 0.01),
        TableRow("PC/D", "S<0 for gamma_alpha>0.91 or gamma_beta>0.66",
                 (SystemConfig("pair", (PC, D), "gamma_alpha", label="PC/D"),
                  SystemConfig("pair", (PC, D), "gamma_beta_1", label="PC/D")),
                 {"gamma_alpha": 0.91, "gamma_beta_1": 0.66}, 0.01),
        TableRow("E/TE plate", "S<0 always",
                 (SystemConfig("plate", (E,), "gamma_alpha", "TE", label="E/TE plate"),), "always"),
        TableRow("E/TM plate", "S<0 for gamma_alpha>2",
                 (SystemConfig("plate", (E,), "gamma_alpha", "TM", label="E/TM plate"),),
                 {"gamma_alpha": 2.0}, 1e-3),
        TableRow("E/PC or D plate", "S<0 for gamma_alpha>1/2",
                 (SystemConfig("plate", (E,), "gamma_alpha", "total", label="E/PC or D plate"),),
                 {"gamma_alpha": 0.5}, 1e-3),
    ]


def classify_table(rows: list[TableRow] | None = None, tol: float = 1e-6) -> list[dict]:
    """Recompute each row's verdict and compare with the printed one."""
    if rows is None:
        rows = table_one_rows()
    out = []
    for row in rows:
        if not isinstance(row, TableRow):
            raise ConfigurationError(f"unknown table row {row!r}")
        if row.expected == "always":
            verdicts = [has_negative_entropy(cfg.at(g)) for cfg in row.configs for g in row.probe_values]
            always = all(verdicts)
            out.append({
                "label": row.label,
                "printed": row.printed,
                "has_negative_entropy": any(verdicts),
                "verdict": "always" if always else ("sometimes" if any(verdicts) else "never"),
                "thresholds": {},
                "match": always,
            })
            continue
        if not isinstance(row.expected, dict):
            raise ConfigurationError(f"row {row.label!r}: expected must be 'always' or a dict")
        thresholds, match = {}, True
        for cfg in row.configs:
            res = critical_anisotropy(cfg, row.search_range, tol)
            thresholds[cfg.swept] = res.value
            want = row.expected[cfg.swept]
            ok = (res.status == "ok" and res.negative_side == "above"
                  and abs(res.value - want) <= row.tolerance)
            match = match and ok
        out.append({
            "label": row.label,
            "printed": row.printed,
            "has_negative_entropy": True,
            "verdict": "threshold",
            "thresholds": thresholds,
            "match": match,
        })
    return out
