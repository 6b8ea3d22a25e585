import math

import pytest

import angiowave as aw


@pytest.fixture
def shock_params():
    return aw.ModelParams(0.4, 2.5, math.sqrt(2) / 2)


def test_params_validation():
    with pytest.raises(ValueError):
        aw.ModelParams(0.4, 0.9, 1.0)
    p = aw.ModelParams(0.4, 2.5, 1.0, eps=1e-3)
    assert p.alpha == 0.4
    assert p.eps == 1e-3


def test_wall_and_curves():
    p = aw.ModelParams(0.4, 2.5, 1.0)
    assert aw.wall_F(1.0, p) == pytest.approx(0.5)
    assert aw.wall_u_zero(p) == pytest.approx((1 + math.sqrt(5)) / 2)
    assert aw.curve_c1(2.5) == pytest.approx(math.sqrt(1.5) / 2.5, abs=1e-15)
    assert aw.curve_c2(0.4, 2.5) == pytest.approx(6 * math.sqrt(5) / 25, abs=1e-15)
    assert aw.fold_factor(1.0, aw.wall_F(1.0, p), p) == pytest.approx(0.0, abs=1e-14)


def test_census(shock_params):
    records = aw.census(shock_params)
    kinds = [r["kind"] for r in records]
    for k in ("T", "W", "H", "C0", "C0-"):
        assert k in kinds
    folded = [r for r in records if r["kind"] == "C"]
    assert len(folded) == 2
    focus, saddle = folded
    assert focus["folded_type"] == "folded-focus"
    assert focus["u"] == pytest.approx(0.97, abs=5e-3)
    assert saddle["folded_type"] == "folded-saddle"
    assert saddle["u"] == pytest.approx(0.62, abs=5e-3)


def test_classify_point(shock_params):
    lbl = aw.classify_point(shock_params)
    assert lbl["H_side"] == "S_a"
    assert lbl["real_quartic_roots"] == 2
    assert "folded-saddle" in lbl["census"]


def test_quartic_roots(shock_params):
    roots = aw.hole_roots(shock_params)
    assert len(roots) == 4
    real = sorted(r.real for r in roots if abs(r.imag) < 1e-9)
    assert real == pytest.approx([0.62, 0.97], abs=5e-3)


def test_smooth_wave():
    res = aw.smooth_wave(aw.ModelParams(0.4, 2.5, 1.0))
    assert res["ok"]
    assert res["kind"] == "smooth"
    assert len(res["z"]) == len(res["u"]) == len(res["w"])
    assert res["start_state"] == pytest.approx((0.4, 0.6), abs=1e-6)
    assert res["end_state"][0] == pytest.approx(1.0, abs=1e-6)
    assert res["jump"] is None


def test_shock_wave(shock_params):
    res = aw.shock_wave(shock_params)
    assert res["ok"]
    assert res["kind"] == "shock"
    j = res["jump"]
    F = aw.wall_F(j["u_star"], shock_params)
    assert j["w_depart"] + j["w_land"] == pytest.approx(2 * F, abs=1e-8)
    assert j["w_depart"] > F > j["w_land"]
    assert res["transversality"] != 0.0


def test_shock_fails_without_folded_saddle():
    res = aw.shock_wave(aw.ModelParams(0.4, 2.5, 1.0))
    assert not res["ok"]
    assert res["failure"] == "no-canard-connection"


def test_sr_jump_wave():
    res = aw.sr_jump_wave(aw.ModelParams(0.7, 10 / 7, 0.24))
    assert res["ok"]
    assert abs(res["jump"]["w_land"]) < 1e-2


def test_seeded_speed():
    speed = aw.measure_seeded_speed(
        aw.ModelParams(0.4, 2.5, 1.0, eps=1e-3), "smooth", t_end=6.0, n_grid=1024
    )
    assert speed == pytest.approx(1.0, rel=0.1)
