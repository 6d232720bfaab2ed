import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fluidlogic.actuator import BendState, TentacleParams, actuate_demo, bend_from_pressures


def test_single_chamber():
    b = bend_from_pressures([8e4, 0, 0])
    assert b.dominant == 0
    assert b.azimuth == pytest.approx(90.0)
    assert b.curvature == pytest.approx(1e-7 * 7.5e4)


def test_rest_state():
    b = bend_from_pressures([0, 0, 0])
    assert b == BendState(None, 0.0, None)


def test_equal_pair_bisects():
    b = bend_from_pressures([5e4, 5e4, 0])
    assert b.azimuth == pytest.approx(150.0)
    assert b.dominant is None


def test_balanced_chambers_stay_straight():
    assert bend_from_pressures([4e4, 4e4, 4e4]).curvature == 0.0


def test_params_validation():
    with pytest.raises(ValueError):
        TentacleParams(azimuths=(0.0, 360.0, 120.0))
    with pytest.raises(ValueError):
        TentacleParams(kappa_gain=0.0)
    with pytest.raises(ValueError):
        bend_from_pressures([-1.0, 0, 0])


@given(st.lists(st.floats(0, 1.5e5), min_size=3, max_size=3), st.floats(-720, 720))
def test_rotation_equivariance(p, delta):
    base = TentacleParams()
    rotated = TentacleParams(azimuths=tuple(a + delta for a in base.azimuths))
    b0, b1 = bend_from_pressures(p, base), bend_from_pressures(p, rotated)
    assert b1.curvature == pytest.approx(b0.curvature, rel=1e-9, abs=1e-15)
    if b0.curvature > 1e-9:
        diff = (b1.azimuth - b0.azimuth - delta) % 360.0
        assert min(diff, 360.0 - diff) == pytest.approx(0.0, abs=1e-6)


@pytest.mark.parametrize("variant", ["I", "II"])
def test_inputs_select_distinct_chambers(variant):
    chambers = {bits: actuate_demo(variant, *bits)[1].dominant_chamber for bits in ((1, 0), (0, 1), (1, 1))}
    assert chambers == {(1, 0): "L", (0, 1): "R", (1, 1): "M"}


def test_variant_one_rest():
    res, bend = actuate_demo("I", 0, 0)
    assert bend.curvature == 0.0


def test_variant_two_idle_inputs_bend_middle():
    # the always-on source feeds the middle chamber while the sum is low
    res, bend = actuate_demo("II", 0, 0)
    assert bend.dominant_chamber == "M"
    assert res.probe_pressures["M"] == pytest.approx(70215.2, rel=1e-5)
    assert math.isclose(bend.azimuth, 210.0)


def test_bad_bits():
    with pytest.raises(ValueError):
        actuate_demo("I", 2, 0)
