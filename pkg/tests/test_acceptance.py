"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line; the lines are printed in the terminal
summary (see conftest.py).  Run on its own with::

    pytest tests/test_acceptance.py
"""
import json
import math
import time

import numpy as np
import pytest

from cpentropy import cli
from cpentropy.analysis import SystemConfig, critical_anisotropy, zero_crossings
from cpentropy.figures import PRESETS, render_csv
from cpentropy.oracle import entropy_oracle, pair_free_energy_oracle, plate_free_energy_oracle
from cpentropy.pair import (
    ParticlePair,
    g_pair_EM,
    pair_entropy,
    pair_entropy_small_y,
    pair_free_energy,
    pair_scaled_entropy,
    s_pair_EE,
    s_pair_EM,
)
from cpentropy.plate import (
    Polarizability,
    ThermalGeometry,
    plate_entropy,
    plate_entropy_TE,
    plate_entropy_TM,
    plate_free_energy,
    s_plate,
    s_plate_TE,
)

pytestmark = pytest.mark.acceptance

RESULTS = []

GAMMAS = (0.0, 0.5, 1.0, 2.0)
YS = (0.2, 1.0, 5.0, 20.0)
PC = Polarizability.perfect_conductor(1.0)
D = Polarizability.isotropic(1.0, 0.0)
E = D


def record(n, ok, detail):
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def grid_systems():
    for ga in GAMMAS:
        for gb in GAMMAS:
            p = Polarizability.from_anisotropy(1.0, ga, -0.5, gb)
            q = Polarizability.from_anisotropy(0.7, gb, -0.3, ga)
            for y in YS:
                yield p, q, y


def test_c01_zero_crossing():
    t0 = time.perf_counter()
    roots = zero_crossings(lambda y: s_plate(1.0, y))
    dt = time.perf_counter() - t0
    ok = len(roots) == 1 and abs(roots[0].value - 2.97169) <= 1e-4 and dt < 1.0
    record(1, ok, f"y0 = {roots[0].value:.7f} (target 2.97169 +- 1e-4), {dt:.2f} s")


@pytest.mark.parametrize("sweep,target", [("gamma_alpha", 0.7427), ("gamma_beta", 0.5436)])
def test_c02_pc_pc(sweep, target):
    t0 = time.perf_counter()
    res = critical_anisotropy(SystemConfig("pair", (PC, PC), sweep), (0.1, 3.0))
    dt = time.perf_counter() - t0
    ok = res.status == "ok" and abs(res.value - target) <= 1e-3 and dt < 5.0
    record(2, ok, f"PC/PC {sweep}* = {res.value:.6f} (target {target} +- 1e-3), {dt:.2f} s")


@pytest.mark.parametrize("sweep,target", [("gamma_alpha", 0.91), ("gamma_beta_1", 0.66)])
def test_c03_pc_drude(sweep, target):
    t0 = time.perf_counter()
    res = critical_anisotropy(SystemConfig("pair", (PC, D), sweep), (0.1, 3.0))
    dt = time.perf_counter() - t0
    ok = res.status == "ok" and abs(res.value - target) <= 0.01 and dt < 5.0
    record(3, ok, f"PC/D {sweep}* = {res.value:.5f} (target {target} +- 0.01), {dt:.2f} s")


def test_c04_threshold_family():
    def scaled(cfg):
        c = cfg.series(4)
        return c / np.max(np.abs(c))

    plate_total = scaled(SystemConfig("plate", (Polarizability.from_anisotropy(1.0, 0.5),)))
    plate_tm = scaled(SystemConfig("plate", (Polarizability.from_anisotropy(1.0, 2.0),), sector="TM"))
    pair_ee = scaled(SystemConfig("pair", (Polarizability.from_anisotropy(1.0, 1.0), Polarizability.from_anisotropy(1.0, 1.0))))
    iso = Polarizability.isotropic(1.0, -0.125)
    ratio = scaled(SystemConfig("pair", (iso, iso)))
    # index 2 is the y^3 coefficient, index 3 the y^5 one
    worst = max(abs(v[k]) for v in (plate_total, plate_tm, pair_ee, ratio) for k in (0, 1, 2))
    ok = worst <= 1e-12 and ratio[3] > 0 and plate_total[3] != 0
    record(4, ok, f"max scaled y^-1..y^3 coefficient {worst:.1e}; r=-1/8 y^5 coefficient {ratio[3]:+.3f}")


def test_c05_asymptotes():
    checks = []
    for g in GAMMAS:
        checks.append(abs(s_plate(g, 50.0) - (1 + g) / 12) <= 1e-10)
        checks.append(abs(s_pair_EE(g, 50.0) - (2 + g) / 23) <= 1e-10)
    em = float(s_pair_EM(0.2))
    lead = -(0.2**5) / 7056
    checks.append(abs(em - lead) <= 0.05 * abs(lead))
    checks.append(abs(float(g_pair_EM(1e-3)) - 1.0) <= 1e-5)
    record(5, all(checks), f"{sum(checks)}/{len(checks)} asymptotes; s_EM(0.2)/lead = {em / lead:.4f}")


def test_c06_oracle_equivalence():
    worst = 0.0
    n = 0
    for p, q, y in grid_systems():
        g = ThermalGeometry.from_y(y, 1.3)
        a, b = plate_free_energy(p, g), plate_free_energy_oracle(p, g)
        worst = max(worst, abs(a - b) / abs(b))
        pair = ParticlePair(p, q, g)
        a, b = pair_free_energy(pair), pair_free_energy_oracle(pair)
        worst = max(worst, abs(a - b) / abs(b))
        n += 2
    record(6, worst <= 1e-10, f"{n} points, max relative deviation {worst:.1e} (tol 1e-10)")


def test_c07_thermodynamic_consistency():
    worst = 0.0
    n = 0
    Z = 1.3
    for p, q, y in grid_systems():
        T = y / (4 * math.pi * Z)
        Fp = lambda t, dps: plate_free_energy_oracle(p, ThermalGeometry(Z, t), 1e-25, dps=dps)
        S = plate_entropy(p, ThermalGeometry(Z, T))
        worst = max(worst, abs(entropy_oracle(Fp, T, dps=30) - S) / abs(S))
        Fq = lambda t, dps: pair_free_energy_oracle(ParticlePair(p, q, ThermalGeometry(Z, t)), 1e-25, dps=dps)
        S = pair_entropy(ParticlePair(p, q, ThermalGeometry(Z, T)))
        worst = max(worst, abs(entropy_oracle(Fq, T, dps=30) - S) / abs(S))
        n += 2
    zero = ThermalGeometry(Z, 0.0)
    at_zero = [plate_entropy(p, zero) for p, _, _ in grid_systems()]
    at_zero += [plate_entropy_TE(p, zero) + plate_entropy_TM(p, zero) for p, _, _ in grid_systems()]
    at_zero += [pair_entropy(ParticlePair(p, q, zero)) for p, q, _ in grid_systems()]
    exact = all(v == 0.0 for v in at_zero)
    ok = worst <= 1e-6 and exact
    record(7, ok, f"{n} points, max |S_fd - S|/|S| = {worst:.1e}; S(T=0) == 0 exactly: {exact}")


def test_c08_small_y_consistency():
    pairs = [
        (Polarizability.isotropic(1.0), Polarizability.isotropic(1.0)),
        (PC, Polarizability.from_anisotropy(1.0, 0.7)),
        (Polarizability(0.3, 1.2, -0.4, 0.9), Polarizability(1.5, -0.2, 0.6, 0.1)),
    ]
    ratios = []
    for p1, p2 in pairs:
        def resid(y):
            pr = ParticlePair(p1, p2, ThermalGeometry.from_y(y))
            return abs(pair_entropy(pr) - pair_entropy_small_y(pr))

        for y in (0.4, 0.2, 0.1):
            ratios.append(resid(y) / resid(y / 2))
    ok = all(64 <= r <= 256 for r in ratios)
    record(8, ok, f"residual ratios under halving in [{min(ratios):.2f}, {max(ratios):.2f}] (2^7 = 128)")


def test_c09_table(capsys):
    code = cli.main(["table", "--format", "json"])
    report = json.loads(capsys.readouterr().out)
    matched = sum(r["match"] for r in report["rows"])
    ok = code == 0 and len(report["rows"]) == 7 and matched == 7
    record(9, ok, f"cpentropy table exit code {code}; {matched}/{len(report['rows'])} rows match")


def test_c10_duality_and_symmetry():
    rng = np.random.default_rng(20240611)
    worst = 0.0
    for _ in range(1000):
        c = rng.uniform(-2, 2, size=8)
        p1, p2 = Polarizability(*c[:4]), Polarizability(*c[4:])
        y = float(rng.uniform(0.01, 40.0))
        Z = float(rng.uniform(0.2, 3.0))
        g = ThermalGeometry.from_y(y, Z)
        pair = ParticlePair(p1, p2, g)
        s = pair_entropy(pair)
        unit = abs(pair_scaled_entropy(Polarizability(1, 1, 1, 1), Polarizability(1, 1, 1, 1), y)) / Z**6
        scale = np.sum(np.abs(c[:4])) * np.sum(np.abs(c[4:])) * unit
        worst = max(worst, abs(pair_entropy(pair.dual()) - s) / scale, abs(pair_entropy(pair.swapped()) - s) / scale)
        q = Polarizability(-p1.beta_perp, -p1.beta_z, -p1.alpha_perp, -p1.alpha_z)
        sp = plate_entropy(p1, g)
        pscale = np.sum(np.abs(c[:4])) * max(abs(plate_entropy(Polarizability(1, 1), g)), 1e-300)
        worst = max(worst, abs(plate_entropy(q, g) - sp) / pscale)
    # thresholds are unchanged when every polarizability is scaled by the same positive factor
    base = [
        SystemConfig("pair", (PC, PC), "gamma_alpha"),
        SystemConfig("pair", (PC, PC), "gamma_beta"),
        SystemConfig("pair", (PC, D), "gamma_alpha"),
        SystemConfig("pair", (PC, D), "gamma_beta_1"),
        SystemConfig("plate", (E,), "gamma_alpha", "TM"),
        SystemConfig("plate", (E,), "gamma_alpha"),
    ]
    shift = 0.0
    for cfg in base:
        ref = critical_anisotropy(cfg, (0.1, 3.0), tol=1e-6).value
        for k in (1e-3, 17.0):
            shift = max(shift, abs(critical_anisotropy(cfg.scaled(k), (0.1, 3.0), tol=1e-6).value - ref))
    y0 = zero_crossings(lambda y: plate_entropy(E, ThermalGeometry.from_y(y)))[0].value
    y0k = zero_crossings(lambda y: plate_entropy(E.scaled(123.0), ThermalGeometry.from_y(y)))[0].value
    shift = max(shift, abs(y0 - y0k))
    ok = worst <= 1e-12 and shift <= 2e-6
    record(10, ok, f"1000 random cases, max scaled asymmetry {worst:.1e}; max threshold shift under scaling {shift:.1e}")


def test_c11_sign_properties():
    y = np.linspace(0.0, 60.0, 20001)
    te = all(np.all(s_plate_TE(g, y) <= 0) for g in (0.0, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0))
    em = bool(np.all(s_pair_EM(y) <= 0))
    dd = bool(np.all(pair_scaled_entropy(D, D, y) >= 0))
    pc = pair_scaled_entropy(PC, PC, y)
    window = bool(np.min(pc) < 0)
    record(11, te and em and dd and window,
           f"TE<=0 {te}; EM<=0 {em}; Drude/Drude>=0 {dd}; PC/PC min {np.min(pc):.3e} < 0 {window}")


def _curves(fig):
    text = render_csv(PRESETS[fig])
    lines = text.strip().split("\n")
    header = lines[0].split(",")
    data = np.array([line.split(",") for line in lines[1:]], dtype=float)
    return {h: data[:, i] for i, h in enumerate(header)}, len(lines) - 1


def _neg(s):
    return np.min(s) < -1e-12 * np.max(np.abs(s))


def test_c12_figures():
    checks = {}
    c, rows = _curves("fig1")
    checks["fig1"] = _neg(c["gamma=2"]) and _neg(c["gamma=1"]) and not _neg(c["gamma=0"]) and rows >= 400
    c, _ = _curves("fig2")
    checks["fig2"] = all(np.all(c[k] <= 0) for k in c if k.startswith("s_E"))
    c, _ = _curves("fig3")
    checks["fig3"] = _neg(c["s_H gamma=10"]) and not _neg(c["s_H gamma=1"])
    c, _ = _curves("fig4")
    checks["fig4"] = _neg(c["gamma=2"]) and c["gamma=2"][-1] > c["gamma=1"][-1] > c["gamma=0"][-1]
    c, _ = _curves("fig5")
    checks["fig5"] = _neg(c["r=-0.5"]) and _neg(c["r=-2"]) and not _neg(c["r=-0.125"]) and not _neg(c["r=0"])
    for fig in ("fig6", "fig7"):
        c, _ = _curves(fig)
        keys = [k for k in c if k != "ZT"]
        ends = [c[k][-1] for k in keys]
        checks[fig] = _neg(c[keys[2]]) and _neg(c[keys[3]]) and ends == sorted(ends)
    for fig in ("fig8", "fig9"):
        c, _ = _curves(fig)
        mid = [c[k][120] for k in c if k != "ZT"]
        checks[fig] = mid == sorted(mid, reverse=True)
    c, _ = _curves("fig10")
    crit = c["gamma_alpha=0.743"]
    checks["fig10"] = (abs(np.min(crit)) < 1e-3 * np.max(crit) and not _neg(c["gamma_alpha=0.6"])
                       and _neg(c["gamma_alpha=0.8"]))
    c, _ = _curves("fig11")
    checks["fig11"] = not _neg(c["gamma_alpha=0.8"]) and _neg(c["gamma_alpha=0.95"])
    c, _ = _curves("fig12")
    checks["fig12"] = not _neg(c["gamma_beta1=0.5"]) and _neg(c["gamma_beta1=0.8"])
    failed = [k for k, v in checks.items() if not v]
    record(12, not failed, f"{len(checks) - len(failed)}/{len(checks)} figure presets satisfy their captions"
           + (f"; failed {failed}" if failed else ""))
