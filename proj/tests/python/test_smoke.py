import cmath
import math

import pytest

import radcal


def test_zero_frequency_target_is_all_ones():
    s = radcal.synthesize_ideal([1 + 0j], [0.0], 12)
    assert len(s) == 12
    assert all(abs(v - 1) < 1e-15 for v in s)


def test_angle_mapping():
    geom = radcal.ArrayGeometry(3, 4, 0.5)
    assert geom.k == 12
    assert radcal.angle_to_frequency(30.0, geom) == pytest.approx(0.25, abs=1e-12)
    with pytest.raises(radcal.Error):
        radcal.angle_to_frequency(91.0, geom)


def test_kronecker_round_trip():
    geom = radcal.ArrayGeometry(2, 2)
    xi_t = [1, cmath.exp(1j * math.pi / 6)]
    xi_r = [1, 1 + 0.1j]
    gpi = radcal.estimate_txrx_gpi(radcal.factor_to_va(xi_t, xi_r), geom)
    for a, b in zip(gpi["xi_t"], xi_t):
        assert abs(a - b) < 1e-9
    for a, b in zip(gpi["xi_r"], xi_r):
        assert abs(a - b) < 1e-9


def test_clean_recovers_on_grid_target():
    x = radcal.synthesize_ideal([1 + 0j], [64 / 1024], 12)
    t = radcal.clean_estimate(x)
    assert t["frequencies"] == [0.0625]
    assert abs(t["amplitudes"][0] - 1) < 1e-9


def test_estimator_converges_with_exact_reconstruction():
    k = 12
    psi = [cmath.exp(1j * 0.1 * i) * (1 + 0.01 * i) for i in range(k)]
    est = radcal.Estimator(k, [(1, 1.0)])
    for q in range(200):
        s = radcal.synthesize_ideal([1 + 0j, 0.5j], [0.1 + 0.001 * q, -0.3], k)
        x = [p * v for p, v in zip(psi, s)]
        assert est.step(x, s) == "updated"
    truth = radcal.normalize_and_detrend(psi)["xi_hat"]
    assert max(abs(a - b) for a, b in zip(est.xi_hat, truth)) < 1e-6
    assert est.step([0j] * k, [0j] * k) == "skipped"
    assert est.skipped == 1


def test_sbb_threshold_is_strict():
    assert radcal.sbb_check([0.0, 14.9, 0.0], [0.0] * 4) == []
    assert radcal.sbb_check([0.0] * 3, [0.0, 0.0, 30.0, 0.0]) == [("rx", 3)]


def test_doa_bias_fit():
    thetas = [-60 + 5 * i for i in range(25)]
    v = [15 * math.cos(math.radians(t - 3)) for t in thetas]
    v_s, theta_b = radcal.estimate_doa_bias(thetas, v)
    assert v_s == pytest.approx(15, abs=1e-9)
    assert theta_b == pytest.approx(3, abs=1e-9)


def test_scene_and_slls():
    scene = radcal.generate_scene({"scenario": {"snr_db": 20.0}}, seed=7)
    assert len(scene["measured"]) == 12
    ones = [1 + 0j] * 12
    r = radcal.compute_slls(scene["measured"], ones, scene["targets"]["amplitudes"],
                            scene["targets"]["frequencies"])
    assert r["slls_db"] == pytest.approx(0.0, abs=1e-12)


def test_small_experiment_is_deterministic():
    cfg = {"scenario": {"n_mcs": 2, "n_iterations": 50, "seed": 3}}
    a = radcal.run_experiment(cfg, "calibration")
    b = radcal.run_experiment(cfg, "calibration")
    assert a == b
    assert a["completed"] == 2
    assert len(a["pipelines"]["proposed"]["mae_phi_deg"]) == 50


def test_unknown_config_key_rejected():
    with pytest.raises(radcal.Error):
        radcal.run_experiment({"scenario": {"n_mcs": 1, "snr": 3}}, "calibration")
