import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fluidlogic.components import (
    G_MIN,
    AndValveGeometry,
    CheckValveParams,
    FluidProps,
    HoseParams,
    MembraneModel,
    NotValveParams,
    OrificeParams,
    and_valve_drops,
    and_valve_state,
    check_valve_flow,
    hose_resistance,
    membrane_displacement,
    not_valve_conductance_factor,
    orifice_flow,
    orifice_resistance,
    plate_gap_resistance,
    series_gap_orifice,
    sqrt_law,
)


def test_hose_resistance_hand_value():
    # 128 * 0.894e-3 * 0.45 / (pi * 0.0025**4)
    r = hose_resistance(HoseParams(0.45, 2.5e-3, 0.894e-3))
    assert r == pytest.approx(128 * 0.894e-3 * 0.45 / (math.pi * 0.0025**4), rel=1e-15)
    assert r == pytest.approx(4.196e8, rel=1e-3)


def test_hose_resistance_scales_with_length_and_inverse_fourth_power():
    base = hose_resistance(HoseParams(0.1, 2e-3))
    assert hose_resistance(HoseParams(0.2, 2e-3)) == pytest.approx(2 * base)
    assert hose_resistance(HoseParams(0.1, 4e-3)) == pytest.approx(base / 16)


@pytest.mark.parametrize("length,diameter,mu", [(0, 1e-3, 1e-3), (1, -1e-3, 1e-3), (1, 1e-3, 0)])
def test_hose_rejects_nonpositive_geometry(length, diameter, mu):
    with pytest.raises(ValueError):
        HoseParams(length, diameter, mu)


def test_plate_gap_resistance_from_geometry():
    # width 1 mm, mean circumference pi*4 mm, gap 0.9 mm
    expected = 12 * 0.894e-3 * 1e-3 / (math.pi * 4e-3 * 0.9e-3**3)
    assert plate_gap_resistance(AndValveGeometry()) == pytest.approx(expected, rel=1e-12)
    assert expected == pytest.approx(1.1711e6, rel=1e-3)


def test_orifice_flow_and_resistance_relation():
    g = AndValveGeometry()
    dp = 4.5e4
    q = orifice_flow(dp, g)
    area = math.pi * (3e-3**2 - 1e-3**2) / 4
    assert q == pytest.approx(0.7 * area * math.sqrt(2 * dp / 997), rel=1e-12)
    # secant dp/q is the sqrt-form resistance divided by sqrt(2)
    assert dp / q == pytest.approx(orifice_resistance(dp, g) / math.sqrt(2), rel=1e-12)


def test_orifice_flow_domain():
    g = AndValveGeometry()
    assert orifice_flow(0.0, g) == 0.0
    with pytest.raises(ValueError):
        orifice_flow(-1.0, g)
    with pytest.raises(ValueError):
        orifice_resistance(0.0, g)


@pytest.mark.parametrize("cq", [0.5, 0.95])
def test_discharge_coefficient_range(cq):
    with pytest.raises(ValueError):
        AndValveGeometry(cq=cq)


def test_and_geometry_ordering():
    with pytest.raises(ValueError):
        AndValveGeometry(d0=3e-3, d1=3e-3)
    with pytest.raises(ValueError):
        AndValveGeometry(d1=6e-3, d2=5e-3)


def test_membrane_displacement_value_and_linearity():
    m = MembraneModel()
    assert membrane_displacement(400.0, m) == pytest.approx(1.56e-3, rel=1e-12)
    pts = [(p, membrane_displacement(p, m)) for p in (100.0, 250.0, 400.0)]
    (x0, y0), (x1, y1), (x2, y2) = pts
    assert (y1 - y0) * (x2 - x0) == pytest.approx((y2 - y0) * (x1 - x0), rel=1e-14)
    with pytest.raises(ValueError):
        membrane_displacement(-1.0, m)


def test_not_closing_pressure_from_membrane():
    p = NotValveParams.from_membrane(MembraneModel())
    assert p.p_hi == pytest.approx(1.5e-3 / 3.9e-6)
    assert p.p_lo == pytest.approx(0.75 * p.p_hi)
    assert p == NotValveParams()


def test_not_factor_ramp():
    p = NotValveParams()
    assert not_valve_conductance_factor(0.0, p) == 1.0
    assert not_valve_conductance_factor(p.p_lo, p) == 1.0
    assert not_valve_conductance_factor(p.p_hi, p) == 0.0
    mid = 0.5 * (p.p_lo + p.p_hi)
    assert not_valve_conductance_factor(mid, p) == pytest.approx(0.5)


@given(st.floats(0, 2e5), st.floats(0, 2e5))
def test_not_factor_nonincreasing(a, b):
    lo, hi = sorted((a, b))
    p = NotValveParams()
    assert not_valve_conductance_factor(hi, p) <= not_valve_conductance_factor(lo, p)


def test_and_state_gain_operating_point():
    g = AndValveGeometry()
    assert and_valve_state(8.0e4, 6.928e4, g) == "open"
    # lower control still opens a higher input
    assert and_valve_state(2.0e4, 6.928e4, g) == "open"
    assert and_valve_state(1.7e4, 6.928e4, g) == "closed"


def test_check_valve_flow():
    p = CheckValveParams(crack=1e4, rf=1e7)
    assert check_valve_flow(5e3, p) == 0.0
    assert check_valve_flow(-5e4, p) == 0.0
    assert check_valve_flow(3e4, p) == pytest.approx(2e-3)


@given(st.floats(-2e5, 2e5), st.floats(1e-8, 1e-5))
def test_sqrt_law_is_odd_and_monotone(dp, coeff):
    q, dq = sqrt_law(dp, coeff)
    q_neg, _ = sqrt_law(-dp, coeff)
    assert q == -q_neg
    assert dq > 0
    assert sqrt_law(dp + 1.0, coeff)[0] > q


def test_sqrt_law_blend_is_c1_at_one_pascal():
    c = 2e-7
    below, above = sqrt_law(1.0 - 1e-12, c), sqrt_law(1.0, c)
    assert below[0] == pytest.approx(above[0], rel=1e-9)
    assert below[1] == pytest.approx(above[1], rel=1e-9)


@given(st.floats(0, 2e5))
def test_series_gap_orifice_solves_its_equation(dp):
    g, fluid = AndValveGeometry(), FluidProps()
    r = plate_gap_resistance(g, fluid)
    coeff = 0.7 * g.orifice_area * math.sqrt(2 / fluid.rho)
    q, dq = series_gap_orifice(dp, r, coeff)
    gap, orifice = and_valve_drops(q, g, fluid)
    assert gap + orifice == pytest.approx(dp, rel=1e-9, abs=1e-9)
    eps = max(1e-6, dp * 1e-7)
    numeric = (series_gap_orifice(dp + eps, r, coeff)[0] - q) / eps
    assert dq == pytest.approx(numeric, rel=1e-3)


def test_orifice_params():
    assert OrificeParams(2e-3).area == pytest.approx(math.pi * 1e-6)
    with pytest.raises(ValueError):
        OrificeParams(1e-3, d0=1e-3)


def test_leak_constant_is_tiny():
    assert 0 < G_MIN <= 1e-12
