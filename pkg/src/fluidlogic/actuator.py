"""Three-chamber soft tentacle driven by half-adder outputs.

Each chamber pushes the tip toward its own azimuth with a weight equal to
its pressure above the actuation threshold. The constant-curvature bend is
the vector sum of those pushes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .graph import validate
from .logic.library import DEFAULT_LIBRARY, GateLibrary, actuator_template
from .logic.truthtable import LogicThresholds
from .solver import NoSteadyState, SolveConfig, SteadyState, solve_steady

CHAMBERS = ("L", "M", "R")


@dataclass(frozen=True)
class TentacleParams:
    azimuths: tuple[float, float, float] = (90.0, 210.0, 330.0)  # degrees, chambers L, M, R
    kappa_gain: float = 1e-7  # 1/(m*Pa)
    p_act: float = 5e3  # Pa

    def __post_init__(self):
        if len(self.azimuths) != 3:
            raise ValueError("a tentacle has three chambers")
        wrapped = [round(a % 360.0, 9) for a in self.azimuths]
        if len(set(wrapped)) != 3:
            raise ValueError("chamber azimuths must be distinct modulo 360 degrees")
        if not self.kappa_gain > 0:
            raise ValueError("curvature gain must be positive")
        if self.p_act < 0:
            raise ValueError("actuation threshold must be >= 0")


@dataclass(frozen=True)
class BendState:
    azimuth: Optional[float]  # degrees in [0, 360); None when straight
    curvature: float  # 1/m
    dominant: Optional[int]  # 0-based chamber index

    def __post_init__(self):
        if self.curvature < 0:
            raise ValueError("curvature must be >= 0")
        if (self.azimuth is None) != (self.curvature == 0):
            raise ValueError("azimuth is defined exactly when the tentacle bends")

    @property
    def dominant_chamber(self) -> Optional[str]:
        return None if self.dominant is None else CHAMBERS[self.dominant]


def bend_from_pressures(p: Sequence[float], t: TentacleParams = TentacleParams()) -> BendState:
    pressures = np.asarray(p, dtype=float)
    if pressures.shape != (3,):
        raise ValueError("need exactly three chamber pressures")
    if np.any(pressures < 0):
        raise ValueError("chamber pressures must be >= 0")
    weights = np.maximum(pressures - t.p_act, 0.0)
    angles = np.radians(t.azimuths)
    vx, vy = float(weights @ np.cos(angles)), float(weights @ np.sin(angles))
    norm = math.hypot(vx, vy)
    # cancellation below this fraction of the total push is treated as straight
    if norm <= 1e-12 * max(1.0, float(weights.sum())):
        curvature, azimuth = 0.0, None
    else:
        curvature = t.kappa_gain * norm
        azimuth = math.degrees(math.atan2(vy, vx)) % 360.0
    top = int(np.argmax(pressures))
    unique = int(np.sum(pressures == pressures[top])) == 1
    dominant = top if unique and pressures[top] > t.p_act else None
    return BendState(azimuth, curvature, dominant)


def actuate_demo(variant: str, in1: int, in2: int, cfg: SolveConfig = SolveConfig(),
                 t: TentacleParams = TentacleParams(), thresholds: LogicThresholds = LogicThresholds(),
                 lib: GateLibrary = DEFAULT_LIBRARY) -> tuple[SteadyState | NoSteadyState, Optional[BendState]]:
    """Solve the tentacle driver for one input pair and map it to a bend."""
    if in1 not in (0, 1) or in2 not in (0, 1):
        raise ValueError("inputs are bits")
    graph = validate(actuator_template(variant, lib=lib))
    res = solve_steady(graph, {"in1": thresholds.p_hi_in * in1, "in2": thresholds.p_hi_in * in2}, cfg)
    if isinstance(res, NoSteadyState):
        return res, None
    chamber_p = [max(res.probe_pressures[c], 0.0) for c in CHAMBERS]
    return res, bend_from_pressures(chamber_p, t)
