import pytest

import rsl


def test_circle_sample_has_one_loop():
    pts = rsl.sample("circle", 40)
    assert len(pts) == 40 and len(pts[0]) == 2
    assert rsl.rips_betti(pts, 0.4) == [1, 1]
    assert rsl.nerve_betti(pts, 0.4) == [1, 1]
    assert rsl.raster_betti(pts, 0.4) == [1, 1]


def test_rips_is_strict():
    k = rsl.rips([[0.0, 0.0], [1.0, 0.0]], 1.0)
    assert rsl.rips_betti([[0.0, 0.0], [1.0, 0.0]], 1.0) == [2, 0]
    assert isinstance(k, dict)


def test_inverse_tower_report():
    r = rsl.inverse_system("circle", [0.5, 0.4, 0.3, 0.2], seed=7)
    assert r["verdict"] == "consistent"
    assert r["towers"][0]["plateau"][1]["rank"] == 1


def test_theta_inverse_tower_has_two_loops():
    r = rsl.inverse_system("theta", [0.45, 0.4, 0.35, 0.3])
    assert r["towers"][0]["plateau"][1]["rank"] == 2


def test_direct_tower_and_projection():
    assert rsl.direct_system("circle", 0.4, [20, 40, 80, 160])["verdict"] == "consistent"
    assert rsl.projection_check("circle", 0.4, 60)["details"]["iso"] is True


def test_fault_injection():
    name = rsl.known_hypotheses()[0]
    r = rsl.inverse_system("circle", [0.5, 0.4, 0.3], faults={name})
    assert r["verdict"] == "out-of-regime"


def test_reconstruct_noisy_circle():
    pts = rsl.sample("circle", 126, tau=0.02, seed=7)
    r = rsl.reconstruct("circle", pts, 0.2, 0.02, 0.05)
    assert r["verdict"] == "consistent"
    assert r["checks"]["simple"] and r["checks"]["closed"]
    assert r["checks"]["hausdorff_to_model"] <= 0.075


def test_conditions_and_errors():
    c = rsl.check_conditions({"kind": "circle", "params": {"radius": 1.0}}, 0.3)
    assert c["all_hold"] is True
    with pytest.raises(ValueError):
        rsl.sample({"kind": "sphere"}, 10)
