"""Steady-state solver for fluidic networks.

The solve has two levels. The outer level is a fixed point over the valve
states: check valves (conducting/blocked), AND valves (open/closed) and the
conductance factor of every NOT valve, all updated simultaneously from the
previous solve. The inner level is a damped Newton iteration on node
pressures with the valve states frozen, so the only smooth nonlinearities it
sees are the square-root orifice laws.

A valve-state sequence that revisits an earlier assignment is retried with
one-valve-at-a-time updates and, for small circuits, an exhaustive search;
if no self-consistent assignment exists the result is a ``NoSteadyState``
carrying the visited cycle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .components import G_MIN, not_valve_conductance_factor, series_gap_orifice
from .graph import CircuitGraph, validate
from .netlist import PARAMS, Quantity, parse_quantity

# Relative width of the tie band used when re-evaluating thresholds.
_TIE = 1e-9
# NOT conductance factors are compared at this many decimals.
_FACTOR_DIGITS = 9


class ConvergenceError(RuntimeError):
    """Newton iteration failed inside a fixed valve-state assignment."""

    def __init__(self, message: str, residual: float = math.nan):
        self.residual = residual
        super().__init__(f"{message} (last residual {residual:.3e} m^3/s)")


@dataclass(frozen=True)
class SolveConfig:
    max_newton: int = 100
    tol: float = 1e-12  # m^3/s, absolute node imbalance
    max_state_iter: int = 64
    damping: float = 1.0
    g_min: float = G_MIN
    enumerate_limit: int = 12  # exhaustive fallback only up to this many switching valves

    def __post_init__(self):
        if not (self.tol > 0 and self.g_min > 0 and 0 < self.damping <= 1):
            raise ValueError("tolerances and damping must be positive")
        if self.max_newton < 1 or self.max_state_iter < 1:
            raise ValueError("iteration caps must be >= 1")


@dataclass(frozen=True)
class SteadyState:
    pressures: dict[str, float]
    flows: dict[str, float]
    valve_states: dict[str, str]
    residual: float
    not_factors: dict[str, float] = field(default_factory=dict)
    source_pressures: dict[str, float] = field(default_factory=dict)
    probe_pressures: dict[str, float] = field(default_factory=dict)
    probe_flows: dict[str, float] = field(default_factory=dict)
    iterations: int = 0
    state_vector: tuple = field(default=(), compare=False, repr=False)

    converged = True


@dataclass(frozen=True)
class NoSteadyState:
    cycle: list[dict[str, str]]
    diagnosis: str

    converged = False


Outcome = Union[SteadyState, NoSteadyState]


@dataclass(frozen=True)
class SweepResult:
    parameter: str
    points: list[tuple[float, Outcome]]

    @property
    def values(self) -> list[float]:
        return [v for v, _ in self.points]


# --- valve states -----------------------------------------------------------


def _default_state(graph: CircuitGraph) -> tuple:
    state = []
    for i in graph.switches:
        kind = graph.branches[i].kind
        state.append(1.0 if kind == "not" else False)
    return tuple(state)


def _key(state: tuple) -> tuple:
    return tuple(round(s, _FACTOR_DIGITS) if isinstance(s, float) else s for s in state)


def _label(kind: str, s) -> str:
    if kind == "check":
        return "conducting" if s else "blocked"
    if kind == "and":
        return "open" if s else "closed"
    if s >= 1.0:
        return "open"
    if s <= 0.0:
        return "closed"
    return "partial"


def _labels(graph: CircuitGraph, state: tuple) -> dict[str, str]:
    return {graph.branches[i].name: _label(graph.branches[i].kind, s) for i, s in zip(graph.switches, state)}


def _rule(graph: CircuitGraph, i: int, p: np.ndarray, current):
    """State that branch ``i`` should take given pressures ``p``."""
    br = graph.branches[i]
    if br.kind == "not":
        return not_valve_conductance_factor(p[br.ctrl], br.model)
    if br.kind == "check":
        dp = p[br.a] - p[br.b]
        tie = _TIE * max(1.0, br.model.crack, abs(p[br.a]), abs(p[br.b]))
        return dp >= br.model.crack - tie if current else dp > br.model.crack + tie
    # AND valve
    g = br.model
    threshold = g.alpha * p[br.a] + g.beta
    tie = _TIE * max(1.0, abs(threshold), abs(p[br.ctrl]))
    # a valve keeps its state while the control pressure sits inside the tie band
    return p[br.ctrl] >= threshold - tie if current else p[br.ctrl] > threshold + tie


def _evaluate(graph: CircuitGraph, p: np.ndarray, state: tuple) -> tuple:
    return tuple(_rule(graph, i, p, s) for i, s in zip(graph.switches, state))


# --- inner Newton -----------------------------------------------------------


class _System:
    """Node-balance residual and Jacobian for one valve-state assignment."""

    def __init__(self, graph: CircuitGraph, state: tuple, g_min: float):
        self.graph = graph
        n = len(graph.node_names)
        self.n = n
        fixed = graph.fixed_nodes
        self.free = np.array([i for i in range(n) if i not in fixed], dtype=int)
        lin_a, lin_b, lin_g, lin_q0 = [], [], [], []
        self.nonlinear: list[tuple[int, int, int, float, float]] = []  # (branch, a, b, coeff, r_gap)
        state_of = dict(zip(graph.switches, state))
        for i, br in enumerate(graph.branches):
            if br.kind == "hose":
                g, q0 = br.conductance, 0.0
            elif br.kind == "check":
                if state_of[i]:
                    g, q0 = 1.0 / br.model.rf, -br.model.crack / br.model.rf
                else:
                    g, q0 = g_min, 0.0
            elif br.kind == "not":
                g, q0 = state_of[i] / br.model.r_open + g_min, 0.0
            elif br.kind == "and" and not state_of[i]:
                g, q0 = g_min, 0.0
            else:
                self.nonlinear.append((i, br.a, br.b, br.coeff, br.r_gap))
                continue
            lin_a.append(br.a)
            lin_b.append(br.b)
            lin_g.append(g)
            lin_q0.append(q0)
        self.lin_index = [i for i, br in enumerate(graph.branches) if i not in {t[0] for t in self.nonlinear}]
        self.a = np.array(lin_a, dtype=int)
        self.b = np.array(lin_b, dtype=int)
        self.g = np.array(lin_g, dtype=float)
        self.q0 = np.array(lin_q0, dtype=float)
        # constant part of the Jacobian
        G = np.zeros((n, n))
        np.add.at(G, (self.a, self.a), self.g)
        np.add.at(G, (self.b, self.b), self.g)
        np.add.at(G, (self.a, self.b), -self.g)
        np.add.at(G, (self.b, self.a), -self.g)
        self.G = G

    def branch_flows(self, p: np.ndarray) -> np.ndarray:
        q = np.empty(len(self.graph.branches))
        q[self.lin_index] = self.g * (p[self.a] - p[self.b]) + self.q0
        for i, a, b, coeff, r_gap in self.nonlinear:
            q[i] = series_gap_orifice(p[a] - p[b], r_gap, coeff)[0]
        return q

    def imbalance(self, p: np.ndarray, with_jacobian: bool = False):
        """Net inflow at every node (and d/dp if asked)."""
        q_lin = self.g * (p[self.a] - p[self.b]) + self.q0
        f = np.zeros(self.n)
        np.add.at(f, self.a, -q_lin)
        np.add.at(f, self.b, q_lin)
        J = -self.G.copy() if with_jacobian else None
        for _, a, b, coeff, r_gap in self.nonlinear:
            q, dq = series_gap_orifice(p[a] - p[b], r_gap, coeff)
            f[a] -= q
            f[b] += q
            if with_jacobian:
                J[a, a] -= dq
                J[b, b] -= dq
                J[a, b] += dq
                J[b, a] += dq
        return f, J

    def residual(self, p: np.ndarray) -> float:
        f, _ = self.imbalance(p)
        return float(np.max(np.abs(f[self.free]))) if len(self.free) else 0.0

    def solve(self, p: np.ndarray, cfg: SolveConfig) -> tuple[np.ndarray, float]:
        free = self.free
        if len(free) == 0:
            return p, 0.0
        p = p.copy()
        f, J = self.imbalance(p, True)
        res = float(np.max(np.abs(f[free])))
        # nodes held only by leak conductances need a pressure criterion too:
        # a tiny flow residual there can still hide a visible pressure error
        step_tol = 1e-12 * max(1.0, float(np.max(np.abs(p))))
        for _ in range(cfg.max_newton):
            J_free = J[np.ix_(free, free)]
            try:
                dx = np.linalg.solve(J_free, -f[free])
            except np.linalg.LinAlgError:
                if res <= cfg.tol:
                    return p, res
                raise ConvergenceError("singular nodal matrix", res) from None
            if res <= cfg.tol and float(np.max(np.abs(dx))) <= step_tol:
                return p, res
            norm_dx = float(np.linalg.norm(dx))
            lam = cfg.damping
            # natural monotonicity test: the next correction, measured with the
            # current Jacobian, must shrink; this rejects the +x/-x bounce of a
            # sqrt-law node that a residual test can accept
            while True:
                trial = p.copy()
                trial[free] += lam * dx
                f_t, J_t = self.imbalance(trial, True)
                res_t = float(np.max(np.abs(f_t[free])))
                if not np.isfinite(res_t):
                    raise ConvergenceError("Newton produced non-finite pressures", res)
                if res_t <= cfg.tol:
                    break
                dx_bar = np.linalg.solve(J_free, -f_t[free])
                if np.linalg.norm(dx_bar) <= (1 - lam / 4) * norm_dx:
                    break
                lam *= 0.5
                if lam < 1e-10:
                    raise ConvergenceError("Newton damping underflow", res)
            p, f, J, res = trial, f_t, J_t, res_t
        if res <= cfg.tol:
            return p, res
        raise ConvergenceError("Newton iteration did not converge", res)


# --- public API ---------------------------------------------------------------


def effective_source_pressures(graph: CircuitGraph, input_pressures: Optional[Mapping[str, float]] = None) -> dict[str, float]:
    """Declared source pressures with overrides and ``when=`` gating applied."""
    overrides = dict(input_pressures or {})
    known = {s.name for s in graph.sources}
    for name, value in overrides.items():
        if name not in known:
            raise ValueError(f"unknown source {name!r}")
        if not value >= 0:
            raise ValueError(f"source {name!r} pressure must be >= 0")
    raw = {s.name: float(overrides.get(s.name, s.pressure)) for s in graph.sources}
    eff = {}
    for s in graph.sources:
        active = not s.enable or any(raw[e] > 0 for e in s.enable)
        eff[s.name] = raw[s.name] if active else 0.0
    return eff


def _fixed_vector(graph: CircuitGraph, src: dict[str, float]) -> np.ndarray:
    p = np.zeros(len(graph.node_names))
    for s in graph.sources:
        p[s.node] = src[s.name]
    return p


def _package(graph: CircuitGraph, system: _System, p: np.ndarray, res: float, state: tuple,
             src: dict[str, float], iterations: int) -> SteadyState:
    q = system.branch_flows(p)
    flows = {br.name: float(q[i]) for i, br in enumerate(graph.branches)}
    out = {n: 0.0 for n in range(len(graph.node_names))}
    for i, br in enumerate(graph.branches):
        if q[i] > 0:
            out[br.a] += q[i]
        else:
            out[br.b] -= q[i]
    factors = {graph.branches[i].name: float(s) for i, s in zip(graph.switches, state)
               if graph.branches[i].kind == "not"}
    return SteadyState(
        pressures={name: float(p[i]) for i, name in enumerate(graph.node_names)},
        flows=flows,
        valve_states=_labels(graph, state),
        residual=res,
        not_factors=factors,
        source_pressures=dict(src),
        probe_pressures={k: float(p[n]) for k, n in graph.probes.items()},
        probe_flows={k: float(out[n]) for k, n in graph.probes.items()},
        iterations=iterations,
        state_vector=state,
    )


def solve_with_states(graph: CircuitGraph, state: Sequence, input_pressures=None, cfg: SolveConfig = SolveConfig(),
                      p0: Optional[np.ndarray] = None) -> tuple[np.ndarray, float]:
    """Solve node pressures with every valve state held fixed."""
    src = effective_source_pressures(graph, input_pressures)
    p = _fixed_vector(graph, src) if p0 is None else p0
    return _System(graph, tuple(state), cfg.g_min).solve(p, cfg)


def solve_steady(graph: CircuitGraph, input_pressures: Optional[Mapping[str, float]] = None,
                 cfg: SolveConfig = SolveConfig(), initial_state: Optional[Sequence] = None) -> Outcome:
    """Steady operating point of ``graph`` for the given source pressures.

    Sources not named in ``input_pressures`` keep their declared pressure.
    Raises ``ConvergenceError`` if Newton fails inside a state assignment.
    """
    src = effective_source_pressures(graph, input_pressures)
    fixed = _fixed_vector(graph, src)
    state = tuple(initial_state) if initial_state is not None else _default_state(graph)
    if len(state) != len(graph.switches):
        raise ValueError("initial_state does not match the circuit's switching valves")

    systems: dict[tuple, _System] = {}

    def run(st, p_start):
        k = _key(st)
        if k not in systems:
            systems[k] = _System(graph, st, cfg.g_min)
        p, res = systems[k].solve(p_start, cfg)
        return systems[k], p, res

    p = fixed.copy()
    visited = [_key(state)]
    trail = [state]
    for it in range(1, cfg.max_state_iter + 1):
        system, p, res = run(state, p)
        new = _evaluate(graph, p, state)
        if _key(new) == _key(state):
            return _package(graph, system, p, res, state, src, it)
        if _key(new) in visited:
            start = visited.index(_key(new))
            cycle = trail[start:] + [new]
            return _resolve_cycle(graph, cycle, fixed, src, cfg, run, it)
        visited.append(_key(new))
        trail.append(new)
        state = new
    raise ConvergenceError(f"valve states did not settle in {cfg.max_state_iter} iterations", res)


def _consistent(graph, p, state) -> bool:
    return _key(_evaluate(graph, p, state)) == _key(state)


def _resolve_cycle(graph, cycle, fixed, src, cfg, run, iterations) -> Outcome:
    # one valve at a time, declaration order
    state = cycle[0]
    seen = {_key(state)}
    p = fixed.copy()
    for _ in range(cfg.max_state_iter * max(1, len(state))):
        system, p, res = run(state, p)
        new = _evaluate(graph, p, state)
        diff = [j for j, (x, y) in enumerate(zip(_key(state), _key(new))) if x != y]
        if not diff:
            return _package(graph, system, p, res, state, src, iterations)
        nxt = list(state)
        nxt[diff[0]] = new[diff[0]]
        state = tuple(nxt)
        if _key(state) in seen:
            break
        seen.add(_key(state))

    labels = [_labels(graph, s) for s in cycle]
    n = len(graph.switches)
    if n <= cfg.enumerate_limit:
        kinds = [graph.branches[i].kind for i in graph.switches]
        choices = [(1.0, 0.0) if k == "not" else (True, False) for k in kinds]
        for cand in itertools.product(*choices):
            try:
                system, p, res = run(cand, fixed.copy())
            except ConvergenceError:
                continue
            if _consistent(graph, p, cand):
                return _package(graph, system, p, res, cand, src, iterations)
        diagnosis = (f"valve states cycle with period {len(cycle) - 1}; none of the "
                     f"{2 ** n} saturated assignments is self-consistent (oscillatory topology)")
    else:
        diagnosis = (f"valve states cycle with period {len(cycle) - 1}; exhaustive check skipped "
                     f"({n} switching valves > {cfg.enumerate_limit})")
    return NoSteadyState(cycle=labels, diagnosis=diagnosis)


def residual(graph: CircuitGraph, state: SteadyState, cfg: SolveConfig = SolveConfig()) -> float:
    """Largest flow imbalance (m^3/s) over the non-fixed nodes of ``state``."""
    p = np.array([state.pressures[n] for n in graph.node_names], dtype=float)
    vector = state.state_vector or _state_from_labels(graph, state)
    return _System(graph, vector, cfg.g_min).residual(p)


def _state_from_labels(graph: CircuitGraph, state: SteadyState) -> tuple:
    out = []
    for i in graph.switches:
        br = graph.branches[i]
        label = state.valve_states.get(br.name)
        if br.kind == "not":
            out.append(state.not_factors.get(br.name, 1.0 if label != "closed" else 0.0))
        else:
            out.append(label in ("open", "conducting"))
    return tuple(out)


def _with_param(graph: CircuitGraph, component: str, param: str, value: float) -> CircuitGraph:
    net = graph.netlist
    decl = net.component(component)
    if param not in PARAMS[decl.kind] or param == "pressure":
        raise ValueError(f"{decl.kind} {component!r} has no parameter {param!r}")
    params = dict(decl.params)
    params[param] = Quantity(value)
    comps = [replace(c, params=params) if c.name == component else c for c in net.components]
    return validate(replace(net, components=comps), graph.fluid)


def sweep(graph: CircuitGraph, param_path: str, start: float, stop: float, steps: int,
          cfg: SolveConfig = SolveConfig(), input_pressures: Optional[Mapping[str, float]] = None) -> SweepResult:
    """Quasi-static sweep of a source pressure or a ``component.param`` value.

    Each point is solved independently, warm-started from the previous
    point's valve states.
    """
    if steps < 2:
        raise ValueError("a sweep needs at least 2 steps")
    if start == stop:
        raise ValueError("sweep endpoints must differ")
    values = [float(v) for v in np.linspace(start, stop, steps)]
    base_inputs = dict(input_pressures or {})
    source_names = {s.name for s in graph.sources}
    if param_path in source_names:
        component, param = param_path, None
    elif "." in param_path:
        component, param = param_path.rsplit(".", 1)
        graph.netlist.component(component)
    else:
        raise ValueError(f"{param_path!r} is neither a source nor component.param")

    points: list[tuple[float, Outcome]] = []
    warm = None
    for v in values:
        if param is None:
            g = graph
            inputs = {**base_inputs, component: v}
        else:
            g = _with_param(graph, component, param, v)
            inputs = base_inputs
        outcome = solve_steady(g, inputs, cfg, initial_state=warm)
        if isinstance(outcome, SteadyState):
            warm = outcome.state_vector
        points.append((v, outcome))
    return SweepResult(param_path, points)


def parse_pressure(text: str) -> float:
    return parse_quantity(text, "pressure")[0].value
