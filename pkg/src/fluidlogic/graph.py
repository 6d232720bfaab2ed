"""Validation of a parsed netlist into a solver-ready circuit graph."""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Optional, Union

from .components import (
    AndValveGeometry,
    CheckValveParams,
    FluidProps,
    HoseParams,
    NotValveParams,
    OrificeParams,
    hose_resistance,
    orifice_coefficient,
    plate_gap_resistance,
)
from .netlist import ComponentDecl, Netlist, NetlistError

SWITCHING = ("check", "not", "and")


class ValidationError(NetlistError):
    pass


@dataclass(frozen=True)
class Source:
    name: str
    node: int
    pressure: float
    enable: tuple[str, ...] = ()


@dataclass(frozen=True)
class Branch:
    """A flow-carrying element between nodes ``a`` and ``b`` (positive flow a -> b)."""

    name: str
    kind: str  # hose | check | not | and | orifice
    a: int
    b: int
    model: Union[HoseParams, CheckValveParams, NotValveParams, AndValveGeometry, OrificeParams]
    ctrl: int = -1
    conductance: float = 0.0  # hose
    coeff: float = 0.0  # orifice / AND orifice sqrt-law coefficient
    r_gap: float = 0.0  # AND plate gap


@dataclass(frozen=True)
class CircuitGraph:
    node_names: tuple[str, ...]
    node_index: Mapping[str, int]
    sources: tuple[Source, ...]
    tanks: tuple[tuple[str, int], ...]
    branches: tuple[Branch, ...]
    probes: Mapping[str, int]
    inputs: tuple[str, ...]
    fluid: FluidProps
    netlist: Netlist = field(compare=False, repr=False)

    @property
    def switches(self) -> tuple[int, ...]:
        """Indices of the branches with a discrete (outer-loop) state."""
        return tuple(i for i, br in enumerate(self.branches) if br.kind in SWITCHING)

    @property
    def fixed_nodes(self) -> dict[int, str]:
        fixed = {n: name for name, n in self.tanks}
        fixed.update({s.node: s.name for s in self.sources})
        return fixed

    def source(self, name: str) -> Source:
        for s in self.sources:
            if s.name == name:
                return s
        raise KeyError(name)


class _UnionFind:
    def __init__(self):
        self.parent: dict[str, str] = {}

    def add(self, x: str):
        self.parent.setdefault(x, x)

    def find(self, x: str) -> str:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x: str, y: str):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx


def _fail(msg: str, decl: Optional[ComponentDecl] = None):
    if decl is None:
        raise ValidationError(msg)
    raise ValidationError(msg, decl.line, decl.col)


def _p(decl: ComponentDecl, key: str, default=None):
    q = decl.params.get(key)
    return default if q is None else q.value


def _model(decl: ComponentDecl, fluid: FluidProps):
    try:
        if decl.kind == "hose":
            return HoseParams(_p(decl, "length"), _p(decl, "diameter"), fluid.mu)
        if decl.kind == "check":
            d = CheckValveParams()
            return CheckValveParams(_p(decl, "crack", d.crack), _p(decl, "rf", d.rf))
        if decl.kind == "notgate":
            d = NotValveParams()
            p_hi = _p(decl, "p_hi", d.p_hi)
            p_lo = _p(decl, "p_lo", 0.75 * p_hi)
            return NotValveParams(_p(decl, "r_open", d.r_open), p_lo, p_hi)
        if decl.kind == "andgate":
            d = AndValveGeometry()
            return AndValveGeometry(
                **{k: _p(decl, k, getattr(d, k)) for k in ("d0", "d1", "d2", "h1", "cq", "alpha", "beta")}
            )
        if decl.kind == "orifice":
            d = OrificeParams(1.0)
            return OrificeParams(_p(decl, "d1"), _p(decl, "d0", d.d0), _p(decl, "cq", d.cq))
    except ValueError as exc:
        _fail(f"{decl.name}: {exc}", decl)
    raise AssertionError(decl.kind)


def validate(netlist: Netlist, fluid: FluidProps = FluidProps()) -> CircuitGraph:
    """Check a netlist and build its solver-ready graph.

    Tee junctions are ideal: their three terminals collapse into one node.
    """
    comps = netlist.components
    if not any(c.kind == "tank" for c in comps):
        _fail("no ambient reference: declare at least one tank")

    uf = _UnionFind()
    for c in comps:
        for n in c.terminals:
            uf.add(n)
    for c in comps:
        if c.kind == "tee":
            uf.union(c.terminals[0], c.terminals[1])
            uf.union(c.terminals[0], c.terminals[2])

    names: list[str] = []
    index: dict[str, int] = {}
    root_index: dict[str, int] = {}
    for n in netlist.nodes():
        r = uf.find(n)
        if r not in root_index:
            root_index[r] = len(names)
            names.append(n)
        index[n] = root_index[r]

    sources: list[Source] = []
    tanks: list[tuple[str, int]] = []
    fixed_by: dict[int, ComponentDecl] = {}
    for c in comps:
        if c.kind not in ("source", "tank"):
            continue
        node = index[c.terminals[0]]
        if node in fixed_by:
            other = fixed_by[node]
            _fail(f"source-source short: {other.name} and {c.name} both drive node {names[node]!r}", c)
        fixed_by[node] = c
        if c.kind == "tank":
            tanks.append((c.name, node))
        else:
            pressure = c.params["pressure"].value
            if pressure < 0:
                _fail(f"{c.name}: source pressure must be >= 0", c)
            sources.append(Source(c.name, node, pressure, c.enable))

    branches: list[Branch] = []
    kind_map = {"hose": "hose", "check": "check", "notgate": "not", "andgate": "and", "orifice": "orifice"}
    for c in comps:
        if c.kind not in kind_map:
            continue
        model = _model(c, fluid)
        a = index[c.terminals[0]]
        b = index[c.terminals[1]] if len(c.terminals) > 1 else tanks[0][1]
        ctrl = index[c.terminals[2]] if c.kind in ("notgate", "andgate") else -1
        extra = {}
        if c.kind == "hose":
            extra["conductance"] = 1.0 / hose_resistance(model)
        elif c.kind == "orifice":
            extra["coeff"] = orifice_coefficient(model.area, model.cq, fluid)
        elif c.kind == "andgate":
            extra["coeff"] = orifice_coefficient(model.orifice_area, model.cq, fluid)
            extra["r_gap"] = plate_gap_resistance(model, fluid)
        branches.append(Branch(c.name, kind_map[c.kind], a, b, model, ctrl, **extra))

    # every node must connect through flow-carrying branches to a fixed-pressure node
    adj: dict[int, set[int]] = {i: set() for i in range(len(names))}
    for br in branches:
        adj[br.a].add(br.b)
        adj[br.b].add(br.a)
    seen = set(fixed_by)
    stack = list(fixed_by)
    while stack:
        n = stack.pop()
        for m in adj[n]:
            if m not in seen:
                seen.add(m)
                stack.append(m)
    for i, n in enumerate(names):
        if i not in seen:
            culprit = next(c for c in comps if any(index[t] == i for t in c.terminals))
            _fail(f"disconnected node {n!r}: no flow path to a source or tank", culprit)

    probes = {p.name: index[p.node] for p in netlist.probes}
    return CircuitGraph(
        node_names=tuple(names),
        node_index=MappingProxyType(index),
        sources=tuple(sources),
        tanks=tuple(tanks),
        branches=tuple(branches),
        probes=MappingProxyType(probes),
        inputs=tuple(netlist.inputs),
        fluid=fluid,
        netlist=netlist,
    )
