"""Curve presets for the twelve entropy figures (plus the rescaled plate plot).

Each preset samples one or more scaled entropies on a uniform grid in
``ZT = y / (4 pi)``.  Pair presets plot ``s = Z^6 S / (alpha_z^1)^2``,
i.e. the pair entropy with ``alpha_z^1 = 1``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .pair import pair_scaled_entropy, s_pair_EE
from .plate import Polarizability, s_plate, s_plate_TE, s_plate_TM, s_tilde

__all__ = ["EntropyCurve", "FigurePreset", "PRESETS", "get_preset", "render_csv"]

N_ROWS = 401


@dataclass(frozen=True)
class EntropyCurve:
    label: str
    y: np.ndarray
    s: np.ndarray


@dataclass(frozen=True)
class FigurePreset:
    id: str
    caption: str
    x_column: str
    curves: tuple[tuple[str, Callable], ...]
    zt_max: float = 1.0
    n_rows: int = N_ROWS

    def grid(self) -> np.ndarray:
        return np.linspace(0.0, self.zt_max, self.n_rows)

    def evaluate(self) -> list[EntropyCurve]:
        zt = self.grid()
        y = 4.0 * math.pi * zt
        return [EntropyCurve(label, y, np.asarray(fn(y), dtype=float)) for label, fn in self.curves]


def _fmt(v: float) -> str:
    return repr(float(v))


def render_csv(preset: FigurePreset) -> str:
    """CSV text: x column then one column per curve, '.' decimal point."""
    curves = preset.evaluate()
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([preset.x_column] + [c.label for c in curves])
    for i, zt in enumerate(preset.grid()):
        writer.writerow([_fmt(zt)] + [_fmt(c.s[i]) for c in curves])
    return buf.getvalue()


def _num(g: float) -> str:
    return f"{g:g}"


def _pair_curve(p1: Polarizability, p2: Polarizability) -> Callable:
    return lambda y: pair_scaled_entropy(p1, p2, y)


def _identical(alpha_z, gamma_alpha, beta_z, gamma_beta):
    p = Polarizability.from_anisotropy(alpha_z, gamma_alpha, beta_z, gamma_beta)
    return _pair_curve(p, p)


def _plate_curves(gammas, parts=("s", "s_H", "s_E")):
    funcs = {"s": s_plate, "s_H": s_plate_TM, "s_E": s_plate_TE}
    out = []
    for g in gammas:
        for part in parts:
            out.append((f"{part} gamma={_num(g)}", (lambda f, g: lambda y: f(g, y))(funcs[part], g)))
    return tuple(out)


def _build() -> dict[str, FigurePreset]:
    presets = [
        FigurePreset("fig1", "plate, electric particle, total scaled entropy s", "ZT",
                     tuple((f"gamma={_num(g)}", (lambda g: lambda y: s_plate(g, y))(g))
                           for g in (0.0, 0.5, 1.0, 2.0))),
        FigurePreset("fig1a", "plate, isotropic electric particle, rescaled entropy s/y^3", "ZT",
                     (("gamma=1", lambda y: s_tilde(1.0, y)),)),
        FigurePreset("fig2", "plate, total / TM / TE entropies", "ZT", _plate_curves((0.0, 0.5, 1.0, 2.0))),
        FigurePreset("fig3", "plate, total / TM / TE entropies for strong anisotropy", "ZT",
                     _plate_curves((1.0, 10.0))),
        FigurePreset("fig4", "electric pair, s_EE(gamma, y)", "ZT",
                     tuple((f"gamma={_num(g)}", (lambda g: lambda y: s_pair_EE(g, y))(g))
                           for g in (0.0, 1.0, 2.0))),
        FigurePreset("fig5", "identical isotropic pair, r = beta/alpha", "ZT",
                     tuple((f"r={_num(r)}", _identical(1.0, 1.0, r, 1.0))
                           for r in (1.0, 0.0, -0.125, -0.5, -2.0))),
        FigurePreset("fig6", "identical pair, alpha_z = beta_z, gamma_beta = 1", "ZT",
                     tuple((f"gamma_alpha={_num(g)}", _identical(1.0, g, 1.0, 1.0)) for g in (0.0, 1.0, 2.0, 4.0))),
        FigurePreset("fig7", "identical pair, alpha = beta, equal anisotropies", "ZT",
                     tuple((f"gamma={_num(g)}", _identical(1.0, g, 1.0, g)) for g in (0.0, 1.0, 2.0, 4.0))),
        FigurePreset("fig8", "conducting spheres, electrically isotropic, magnetic anisotropy", "ZT",
                     tuple((f"gamma_beta={_num(g)}", _identical(1.0, 1.0, -0.5, g)) for g in (0.0, 1.0, 2.0))),
        FigurePreset("fig9", "conducting spheres, magnetically isotropic, electric anisotropy", "ZT",
                     tuple((f"gamma_alpha={_num(g)}", _identical(1.0, g, -0.5, 1.0)) for g in (0.0, 1.0, 2.0))),
        FigurePreset("fig10", "conducting spheres near the critical electric anisotropy", "ZT",
                     tuple((f"gamma_alpha={_num(g)}", _identical(1.0, g, -0.5, 1.0))
                           for g in (0.6, 0.743, 0.8, 1.0))),
        FigurePreset("fig11", "conducting / Drude pair, equal electric anisotropies", "ZT",
                     tuple((f"gamma_alpha={_num(g)}",
                            _pair_curve(Polarizability.from_anisotropy(1.0, g, -0.5, 1.0),
                                        Polarizability.from_anisotropy(1.0, g)))
                           for g in (0.8, 0.91, 0.95, 1.0, 1.1))),
        FigurePreset("fig12", "conducting / Drude pair, magnetic anisotropy of the conductor", "ZT",
                     tuple((f"gamma_beta1={_num(g)}",
                            _pair_curve(Polarizability.from_anisotropy(1.0, 1.0, -0.5, g),
                                        Polarizability.from_anisotropy(1.0, 1.0)))
                           for g in (0.5, 0.66, 0.8, 1.0, 1.1))),
    ]
    return {p.id: p for p in presets}


PRESETS = _build()


def get_preset(fig_id: str) -> FigurePreset:
    try:
        return PRESETS[fig_id]
    except KeyError:
        raise KeyError(f"unknown figure {fig_id!r}; choose from {', '.join(PRESETS)}") from None
