import math

import numpy as np
import pytest

from cpentropy.analysis import (
    ConfigurationError,
    EvaluationError,
    SystemConfig,
    TableRow,
    classify_table,
    critical_anisotropy,
    has_negative_entropy,
    min_entropy,
    negativity_objective,
    table_one_rows,
    zero_crossings,
)
from cpentropy.plate import Polarizability, s_plate

PC = Polarizability.perfect_conductor(1.0)
D = Polarizability.isotropic(1.0, 0.0)
E = Polarizability.isotropic(1.0, 0.0)


def test_zero_crossing_isotropic_plate():
    roots = zero_crossings(lambda y: s_plate(1.0, y))
    assert len(roots) == 1
    r = roots[0]
    assert r.value == pytest.approx(2.97169, abs=1e-4)
    assert r.bracket[1] - r.bracket[0] <= 1e-10
    assert abs(r.objective_at_value) < 1e-12


def test_zero_crossing_none_and_many():
    assert zero_crossings(lambda y: s_plate(0.0, y)) == []
    roots = zero_crossings(np.sin, (0.5, 10.0))
    assert [round(r.value, 8) for r in roots] == [round(math.pi, 8), round(2 * math.pi, 8), round(3 * math.pi, 8)]


def test_exact_zero_on_grid():
    roots = zero_crossings(lambda y: y - 1.0, (0.5, 2.0), n_grid=3)
    assert len(roots) == 1 and roots[0].value == pytest.approx(1.0)


def test_non_finite_curve():
    with pytest.raises(EvaluationError):
        zero_crossings(lambda y: np.where(y > 1, np.nan, 1.0))
    with pytest.raises(ValueError):
        zero_crossings(np.sin, (0.0, 1.0))


def test_min_entropy():
    y, s = min_entropy(lambda t: (t - 2.345) ** 2 - 1.0, (0.1, 10.0))
    assert y == pytest.approx(2.345, abs=1e-7)
    assert s == pytest.approx(-1.0, abs=1e-12)
    y, s = min_entropy(lambda t: s_plate(1.0, t))
    assert s < 0 and 0.5 < y < 2.97


def test_pc_pc_thresholds():
    ra = critical_anisotropy(SystemConfig("pair", (PC, PC), "gamma_alpha"), (0.1, 3.0))
    rb = critical_anisotropy(SystemConfig("pair", (PC, PC), "gamma_beta"), (0.1, 3.0))
    assert ra.value == pytest.approx(0.7427, abs=1e-3)
    assert rb.value == pytest.approx(0.5436, abs=1e-3)
    assert ra.status == "ok" and ra.negative_side == "above"
    assert ra.bracket[1] - ra.bracket[0] <= 1e-6


def test_pc_drude_thresholds():
    ra = critical_anisotropy(SystemConfig("pair", (PC, D), "gamma_alpha"), (0.1, 3.0))
    rb = critical_anisotropy(SystemConfig("pair", (PC, D), "gamma_beta_1"), (0.1, 3.0))
    assert ra.value == pytest.approx(0.91, abs=0.01)
    assert rb.value == pytest.approx(0.66, abs=0.01)


def test_plate_thresholds_are_analytic():
    total = critical_anisotropy(SystemConfig("plate", (E,), "gamma_alpha"), (0.1, 3.0), tol=1e-8)
    tm = critical_anisotropy(SystemConfig("plate", (E,), "gamma_alpha", "TM"), (0.1, 5.0), tol=1e-8)
    assert total.value == pytest.approx(0.5, abs=1e-7)
    assert tm.value == pytest.approx(2.0, abs=1e-7)


def test_none_in_range():
    res = critical_anisotropy(SystemConfig("pair", (PC, PC), "gamma_alpha"), (1.0, 2.0))
    assert res.status == "none-in-range" and res.value is None
    assert res.to_dict()["value"] is None


def test_reproducible_under_grid_refinement():
    cfg = SystemConfig("pair", (PC, PC), "gamma_alpha")
    coarse = critical_anisotropy(cfg, (0.5, 1.0), tol=1e-5)
    fine = critical_anisotropy(cfg, (0.5, 1.0), tol=1e-5, n_grid=4000)
    assert fine.value == pytest.approx(coarse.value, abs=1e-4)


@pytest.mark.parametrize("factor", [1e-3, 0.37, 25.0])
def test_scale_invariance(factor):
    cfg = SystemConfig("pair", (PC, D), "gamma_beta_1")
    base = critical_anisotropy(cfg, (0.1, 3.0), tol=1e-5)
    scaled = critical_anisotropy(cfg.scaled(factor), (0.1, 3.0), tol=1e-5)
    assert scaled.value == pytest.approx(base.value, abs=2e-5)


def test_negativity_by_series():
    # the plate TE entropy is negative below any window
    neg, obj, _ = negativity_objective(SystemConfig("plate", (E,), sector="TE"))
    assert neg and obj < 0
    assert not has_negative_entropy(SystemConfig("pair", (D, D)))
    assert has_negative_entropy(SystemConfig("pair", (PC, PC)))


def test_system_config_sweeps():
    cfg = SystemConfig("pair", (PC, D), "gamma_alpha_2")
    p1, p2 = cfg.at(2.0).particles
    assert p1 == PC and p2.alpha_perp == 2.0
    r = SystemConfig("pair", (E, E), "ratio").at(-0.5).particles[0]
    assert r.beta_z == -0.5 and r.beta_perp == -0.5


@pytest.mark.parametrize("kwargs", [
    dict(kind="rod", particles=(E,)),
    dict(kind="plate", particles=(E, E)),
    dict(kind="pair", particles=(E, E), swept="gamma_x"),
    dict(kind="plate", particles=(E,), sector="XY"),
    dict(kind="pair", particles=(E, E), sector="TE"),
])
def test_configuration_errors(kwargs):
    with pytest.raises(ConfigurationError):
        SystemConfig(**kwargs)


def test_sweep_errors():
    with pytest.raises(ConfigurationError):
        SystemConfig("pair", (E, E)).at(1.0)
    with pytest.raises(ConfigurationError):
        SystemConfig("plate", (E,), "gamma_alpha_2").at(1.0)
    with pytest.raises(ConfigurationError):
        SystemConfig("pair", (E, E), "gamma_beta").at(1.0)  # beta_z = 0
    with pytest.raises(ConfigurationError):
        critical_anisotropy(SystemConfig("pair", (E, E)), (0.1, 1.0))
    with pytest.raises(ValueError):
        critical_anisotropy(SystemConfig("pair", (E, E), "gamma_alpha"), (1.0, 1.0))


def test_table_regeneration():
    rows = classify_table()
    assert len(rows) == 7
    assert all(r["match"] for r in rows), rows
    by = {r["label"]: r for r in rows}
    assert by["E/M"]["verdict"] == "always"
    assert by["E/TE plate"]["verdict"] == "always"
    assert by["E/E"]["thresholds"]["gamma_alpha_1"] == pytest.approx(1.0, abs=1e-5)


def test_table_rejects_bad_rows():
    with pytest.raises(ConfigurationError):
        classify_table(["E/E"])
    bad = TableRow("x", "x", table_one_rows()[0].configs, expected=3.0)
    with pytest.raises(ConfigurationError):
        classify_table([bad])


def test_paramagnetic_partner_is_not_always_negative():
    M = Polarizability.isotropic(0.0, 1.0)
    assert not has_negative_entropy(SystemConfig("pair", (E, M)))
