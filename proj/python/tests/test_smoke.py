import json
import math
import os
from pathlib import Path

import pytest

import smoothlab as sl

SCENARIOS = Path(os.environ.get("SMOOTHLAB_SCENARIOS", Path(__file__).resolve().parents[2] / "scenarios"))
BOX = ([0.0, 0.0], [100.0, 100.0])


def test_psi_ties_map_to_one():
    assert sl.psi(0.5) == 1
    assert sl.psi(0.49) == 0


def test_shifted_cdf_uniform_1d():
    # Window [x - 0.4, x + 0.4] against [-1, 1] at x = 1 covers half the window.
    assert sl.shifted_cdf("uniform", 0.4, 1.0, [1.0]) == pytest.approx(0.5)


def test_norm_inverse_round_trip():
    t = sl.norm_inverse("gaussian", 1.3, 2, 2.0, 0.4)
    assert sl.shifted_cdf("gaussian", 1.3, 2.0, [t, 0.0]) == pytest.approx(0.4, abs=1e-9)


def test_certified_radius_matches_normal_quantile():
    from statistics import NormalDist

    assert sl.certified_radius(0.5, 1.0)["radius"] == 0.0
    assert sl.certified_radius(0.9, 0.5)["radius"] == pytest.approx(0.5 * NormalDist().inv_cdf(0.9), rel=1e-10)


def test_alpha_shrink_power_form():
    assert sl.alpha_shrink_radius("uniform", 0.2, 1, 1.0, 0.1) == pytest.approx(13.0 / 15.0)


def test_exact_pipeline_matches_closed_form():
    balls = [([20.0, 20.0], 8.0), ([60.0, 55.0], 6.0)]
    for family in ("uniform", "gaussian"):
        exact = sl.excess_risk(balls, 0.2, *BOX, family=family, alpha=1.5, beta=1.0)
        closed = sl.closed_form_excess(balls, 0.2, *BOX, family=family, alpha=1.5, beta=1.0)
        assert exact["mode"] == "exact"
        assert exact["value"] == pytest.approx(closed, abs=1e-9)
        plain = sl.closed_form_excess(balls, 0.2, *BOX, family=family, alpha=0.0, beta=1.0)
        assert closed > plain


def test_main_upper_bound_is_a_probability():
    rep = sl.main_upper_bound([([50.0, 50.0], 10.0)], 0.1, *BOX, family="uniform", alpha=1.0)
    assert rep["bound"] == pytest.approx(1.0 - math.pi * (10.0 - math.sqrt(0.5 / 0.6)) ** 2 / 1e4, rel=1e-9)


def test_one_dimensional_construction():
    v = sl.verify_1d_construction(0.23, 0.1, 0.93)
    assert v["passed"]
    assert v["risk_unaugmented"] == pytest.approx(0.92, abs=1e-9)
    assert v["risk_augmented"] == pytest.approx(0.08, abs=1e-9)
    assert not sl.verify_1d_construction(0.23, 0.1, 0.5)["passed"]


def test_invalid_arguments_raise():
    with pytest.raises(ValueError):
        sl.verify_1d_construction(0.3, 0.1, 0.9)
    with pytest.raises(ValueError):
        sl.shifted_cdf("cauchy", 1.0, 1.0, [0.0])


def test_sample_spheres_are_separated():
    balls = sl.sample_spheres(10.0, 3)
    assert balls
    for i, (c1, r1) in enumerate(balls):
        for c2, r2 in balls[i + 1:]:
            assert math.dist(c1, c2) - r1 - r2 >= 10.0


def test_run_scenario_is_deterministic(tmp_path):
    cfg = json.loads((SCENARIOS / "sweep.json").read_text())
    cfg.update(zeta=[0, 20], alpha_grid=[0, 1], beta_grid=[0, 2], mc_points=1500, mc_votes=32)
    outs = []
    for jobs in (1, 4):
        code, _ = sl.run_scenario(json.dumps(cfg), str(tmp_path / f"j{jobs}"), jobs)
        assert code == 0
        outs.append((tmp_path / f"j{jobs}" / "sweep.csv").read_bytes())
    assert outs[0] == outs[1]
    with pytest.raises(ValueError):
        sl.run_scenario(json.dumps({"kind": "SphereSweep", "colour": 1}), str(tmp_path / "bad"))
