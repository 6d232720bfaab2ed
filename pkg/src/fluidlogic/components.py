"""Physical models of the branch elements of a hydraulic logic circuit.

All quantities are SI: pressures in Pa (gauge), lengths in m, flows in m^3/s,
hydraulic resistances in Pa*s/m^3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Leak conductance placed on every closed element, m^3/(s*Pa).
G_MIN = 1e-15

# Below this drop an orifice is blended to a finite slope (Pa).
ORIFICE_LINEAR_BELOW = 1.0


@dataclass(frozen=True)
class FluidProps:
    mu: float = 0.894e-3  # Pa*s, water at 24 degC
    rho: float = 997.0  # kg/m^3

    def __post_init__(self):
        if not (self.mu > 0 and self.rho > 0):
            raise ValueError("fluid viscosity and density must be positive")


@dataclass(frozen=True)
class HoseParams:
    length: float
    diameter: float
    mu: float = FluidProps.mu

    def __post_init__(self):
        if not (self.length > 0 and self.diameter > 0 and self.mu > 0):
            raise ValueError("hose length, diameter and viscosity must be positive")


@dataclass(frozen=True)
class CheckValveParams:
    crack: float = 1.0e4
    rf: float = 1.0e7

    def __post_init__(self):
        if self.crack < 0 or not self.rf > 0:
            raise ValueError("check valve needs crack >= 0 and rf > 0")


@dataclass(frozen=True)
class MembraneModel:
    compliance: float = 3.9e-6  # m/Pa
    gap: float = 1.5e-3  # m

    def __post_init__(self):
        if not (self.compliance > 0 and self.gap > 0):
            raise ValueError("membrane compliance and gap must be positive")

    @property
    def closing_pressure(self) -> float:
        return self.gap / self.compliance


DEFAULT_MEMBRANE = MembraneModel()


@dataclass(frozen=True)
class NotValveParams:
    r_open: float = 1.2e8
    p_lo: float = 0.75 * DEFAULT_MEMBRANE.closing_pressure
    p_hi: float = DEFAULT_MEMBRANE.closing_pressure

    def __post_init__(self):
        if not self.r_open > 0:
            raise ValueError("NOT valve r_open must be positive")
        if not 0 <= self.p_lo < self.p_hi:
            raise ValueError("NOT valve needs 0 <= p_lo < p_hi")

    @classmethod
    def from_membrane(cls, membrane: MembraneModel, r_open: float = 1.2e8) -> "NotValveParams":
        p_hi = membrane.closing_pressure
        return cls(r_open=r_open, p_lo=0.75 * p_hi, p_hi=p_hi)


@dataclass(frozen=True)
class AndValveGeometry:
    d0: float = 1e-3
    d1: float = 3e-3
    d2: float = 5e-3
    h1: float = 0.9e-3
    cq: float = 0.7
    alpha: float = 0.25
    beta: float = 0.0

    def __post_init__(self):
        if not 0 <= self.d0 < self.d1 <= self.d2:
            raise ValueError("AND valve needs 0 <= d0 < d1 <= d2")
        if not self.h1 > 0:
            raise ValueError("AND valve plate gap h1 must be positive")
        if not 0.6 <= self.cq <= 0.9:
            raise ValueError("discharge coefficient cq must lie in [0.6, 0.9]")
        if self.alpha < 0:
            raise ValueError("AND valve gain ratio alpha must be >= 0")

    @property
    def orifice_area(self) -> float:
        """Annular cross section between pole and orifice bore."""
        return math.pi * (self.d1**2 - self.d0**2) / 4


@dataclass(frozen=True)
class OrificeParams:
    d1: float
    d0: float = 0.0
    cq: float = 0.7

    def __post_init__(self):
        if not 0 <= self.d0 < self.d1:
            raise ValueError("orifice needs 0 <= d0 < d1")
        if not 0 < self.cq <= 1:
            raise ValueError("orifice cq must lie in (0, 1]")

    @property
    def area(self) -> float:
        return math.pi * (self.d1**2 - self.d0**2) / 4


def hose_resistance(p: HoseParams) -> float:
    """Poiseuille resistance of a circular tube."""
    return 128 * p.mu * p.length / (math.pi * p.diameter**4)


def plate_gap_resistance(g: AndValveGeometry, fluid: FluidProps = FluidProps()) -> float:
    """Laminar resistance of the annular gap under the lifted disc."""
    width = (g.d2 - g.d1) / 2
    mean_circumference = math.pi * (g.d1 + g.d2) / 2
    return 12 * fluid.mu * width / (mean_circumference * g.h1**3)


def orifice_flow(dp: float, g: AndValveGeometry, fluid: FluidProps = FluidProps()) -> float:
    """Thin-wall orifice law Q = Cq*A*sqrt(2*dp/rho) over the annular bore."""
    if dp < 0:
        raise ValueError("orifice_flow needs dp >= 0")
    return g.cq * g.orifice_area * math.sqrt(2 * dp / fluid.rho)


def orifice_resistance(dp: float, g: AndValveGeometry, fluid: FluidProps = FluidProps()) -> float:
    """Pressure-dependent orifice resistance sqrt(dp*rho)/(Cq*A).

    The secant ratio dp/orifice_flow(dp) equals this value divided by sqrt(2).
    """
    if not dp > 0:
        raise ValueError("orifice_resistance needs dp > 0")
    return math.sqrt(dp * fluid.rho) / (g.cq * g.orifice_area)


def membrane_displacement(load: float, m: MembraneModel = DEFAULT_MEMBRANE) -> float:
    if load < 0:
        raise ValueError("membrane load must be >= 0")
    return m.compliance * load


def not_valve_conductance_factor(p_ctrl: float, p: NotValveParams = NotValveParams()) -> float:
    """Fraction of the open conductance left at a given control pressure."""
    if p_ctrl <= p.p_lo:
        return 1.0
    if p_ctrl >= p.p_hi:
        return 0.0
    return (p.p_hi - p_ctrl) / (p.p_hi - p.p_lo)


def and_valve_state(p_ctrl: float, p_in: float, g: AndValveGeometry = AndValveGeometry()) -> str:
    return "open" if p_ctrl >= g.alpha * p_in + g.beta else "closed"


def check_valve_flow(dp: float, p: CheckValveParams = CheckValveParams()) -> float:
    """Forward flow of an ideal check valve (leak conductance not included)."""
    if dp <= p.crack:
        return 0.0
    return (dp - p.crack) / p.rf


# --- branch laws used by the network solver: (flow, d flow / d dp) ---


def sqrt_law(dp: float, coeff: float) -> tuple[float, float]:
    """Q = coeff*sign(dp)*sqrt(|dp|), blended to a C1 cubic below 1 Pa."""
    x = abs(dp)
    s = 1.0 if dp >= 0 else -1.0
    if x >= ORIFICE_LINEAR_BELOW:
        r = math.sqrt(x)
        return s * coeff * r, coeff / (2 * r)
    u = x / ORIFICE_LINEAR_BELOW
    c = coeff * math.sqrt(ORIFICE_LINEAR_BELOW)
    return s * c * (5 * u - u**3) / 4, c * (5 - 3 * u * u) / (4 * ORIFICE_LINEAR_BELOW)


def orifice_coefficient(area: float, cq: float, fluid: FluidProps) -> float:
    return cq * area * math.sqrt(2 / fluid.rho)


def series_gap_orifice(dp: float, r_gap: float, coeff: float) -> tuple[float, float]:
    """Flow through a linear resistance in series with a sqrt-law orifice.

    Solves dp = r_gap*Q + (Q/coeff)^2 in closed form; odd in dp.
    """
    if r_gap <= 0:
        return sqrt_law(dp, coeff)
    k = 1.0 / coeff**2
    x = abs(dp)
    root = math.sqrt(r_gap * r_gap + 4 * k * x)
    q = 2 * x / (r_gap + root)
    return (q if dp >= 0 else -q), 1.0 / root


def and_valve_drops(q: float, g: AndValveGeometry, fluid: FluidProps = FluidProps()) -> tuple[float, float]:
    """Split the drop across an open AND valve into (plate gap, orifice) parts."""
    coeff = orifice_coefficient(g.orifice_area, g.cq, fluid)
    return plate_gap_resistance(g, fluid) * q, q * abs(q) / coeff**2
