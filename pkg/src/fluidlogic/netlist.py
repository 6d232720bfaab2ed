"""Text netlist format for fluidic circuits: parsing, units and serialization.

One declaration per line, ``#`` starts a comment::

    title half adder
    src a n_a 80kPa
    tank t0 amb
    hose h1 n_a n_b length=5cm diameter=2.5mm
    check c1 n_b n_c crack=10kPa
    not g1 in=n_b out=n_o ctrl=n_k
    probe Sum n_o
    input a

Quantities are written with a unit suffix (``80kPa``, ``45cm``, ``2.5ml/s``,
``419.6Pa*s/ml``); bare numbers are SI.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Optional

PRESSURE = "pressure"
LENGTH = "length"
FLOW = "flow"
VISCOSITY = "viscosity"
RESISTANCE = "resistance"
DIMENSIONLESS = "dimensionless"

# suffix -> (dimension, scale to SI)
UNITS: dict[str, tuple[str, Decimal]] = {
    "Pa": (PRESSURE, Decimal(1)),
    "kPa": (PRESSURE, Decimal(1000)),
    "m": (LENGTH, Decimal(1)),
    "cm": (LENGTH, Decimal("0.01")),
    "mm": (LENGTH, Decimal("0.001")),
    "m3/s": (FLOW, Decimal(1)),
    "ml/s": (FLOW, Decimal("1e-6")),
    "Pa*s": (VISCOSITY, Decimal(1)),
    "Pa*s/m3": (RESISTANCE, Decimal(1)),
    "Pa*s/ml": (RESISTANCE, Decimal("1e6")),
}
UNIT_ALIASES = {
    "m3_per_s": "m3/s",
    "ml_per_s": "ml/s",
    "Pa_s": "Pa*s",
    "Pa_s_per_m3": "Pa*s/m3",
    "Pa_s_per_ml": "Pa*s/ml",
}
CANONICAL_UNIT = {
    PRESSURE: "kPa",
    LENGTH: "mm",
    FLOW: "ml/s",
    VISCOSITY: "Pa*s",
    RESISTANCE: "Pa*s/ml",
    DIMENSIONLESS: "",
}
SI_UNIT = {
    PRESSURE: "Pa",
    LENGTH: "m",
    FLOW: "m3/s",
    VISCOSITY: "Pa*s",
    RESISTANCE: "Pa*s/m3",
    DIMENSIONLESS: "",
}

KINDS = ("source", "tank", "hose", "check", "tee", "notgate", "andgate", "orifice")
KEYWORD_KIND = {
    "src": "source",
    "tank": "tank",
    "hose": "hose",
    "check": "check",
    "tee": "tee",
    "orifice": "orifice",
    "not": "notgate",
    "and": "andgate",
}
KIND_KEYWORD = {v: k for k, v in KEYWORD_KIND.items()}

# kind -> {param: (dimension, required)}
PARAMS: dict[str, dict[str, tuple[str, bool]]] = {
    "source": {"pressure": (PRESSURE, True)},
    "tank": {},
    "hose": {"length": (LENGTH, True), "diameter": (LENGTH, True)},
    "check": {"crack": (PRESSURE, False), "rf": (RESISTANCE, False)},
    "tee": {},
    "orifice": {"d1": (LENGTH, True), "d0": (LENGTH, False), "cq": (DIMENSIONLESS, False)},
    "notgate": {
        "r_open": (RESISTANCE, False),
        "p_lo": (PRESSURE, False),
        "p_hi": (PRESSURE, False),
    },
    "andgate": {
        "alpha": (DIMENSIONLESS, False),
        "beta": (PRESSURE, False),
        "d0": (LENGTH, False),
        "d1": (LENGTH, False),
        "d2": (LENGTH, False),
        "h1": (LENGTH, False),
        "cq": (DIMENSIONLESS, False),
    },
}
POSITIONAL_NODES = {"source": 1, "tank": 1, "hose": 2, "check": 2, "tee": 3, "orifice": 2}
PORTS = ("in", "out", "ctrl")

_NAME = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_.:\-]*\Z")
_QUANTITY = re.compile(r"([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(.*)\Z")


class NetlistError(ValueError):
    """Malformed or inconsistent netlist; carries a 1-based source location."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(f"line {line}, col {col}: {message}")


@dataclass(frozen=True)
class Quantity:
    """A physical value stored in SI; ``unit`` only records how it was written."""

    value: float
    unit: str = field(default="", compare=False)

    def __post_init__(self):
        if self.value != self.value or self.value in (float("inf"), float("-inf")):
            raise ValueError("quantity must be finite")


def parse_quantity(text: str, dimension: Optional[str] = None) -> tuple[Quantity, str]:
    """Parse ``80kPa`` style text; returns the quantity and its dimension.

    With ``dimension`` given, a bare number is read in that dimension's SI unit
    and a suffix of another dimension is rejected.
    """
    m = _QUANTITY.match(text)
    if not m:
        raise ValueError(f"bad number {text!r}")
    number, suffix = m.group(1), m.group(2)
    suffix = UNIT_ALIASES.get(suffix, suffix)
    if suffix == "":
        dim = dimension or DIMENSIONLESS
        value = Decimal(number)
        unit = SI_UNIT[dim]
    else:
        if suffix not in UNITS:
            raise ValueError(f"unknown unit {suffix!r}")
        dim, scale = UNITS[suffix]
        if dimension is not None and dim != dimension:
            raise ValueError(f"unit {suffix!r} is a {dim}, expected a {dimension}")
        value = Decimal(number) * scale
        unit = suffix
    return Quantity(float(value), unit), dim


def format_quantity(value: float, dimension: str, unit: Optional[str] = None) -> str:
    """Exact decimal rendering of an SI value in ``unit`` (canonical by default)."""
    unit = CANONICAL_UNIT[dimension] if unit is None else unit
    scale = UNITS[unit][1] if unit else Decimal(1)
    d = (Decimal(repr(float(value))) / scale).normalize()
    text = format(d, "f")
    if text == "-0":
        text = "0"
    return text + unit


@dataclass(frozen=True)
class ComponentDecl:
    kind: str
    name: str
    terminals: tuple[str, ...]
    params: dict = field(default_factory=dict)
    enable: tuple[str, ...] = ()  # sources only: pressurized iff any listed source is
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)

    @property
    def nodes(self) -> tuple[str, ...]:
        return self.terminals


@dataclass(frozen=True)
class Probe:
    name: str
    node: str
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass
class Netlist:
    components: list[ComponentDecl] = field(default_factory=list)
    probes: list[Probe] = field(default_factory=list)
    inputs: list[str] = field(default_factory=list)
    title: str = ""

    def component(self, name: str) -> ComponentDecl:
        for c in self.components:
            if c.name == name:
                return c
        raise KeyError(name)

    def nodes(self) -> list[str]:
        seen: dict[str, None] = {}
        for c in self.components:
            for n in c.terminals:
                seen.setdefault(n)
        return list(seen)

    def structure(self) -> tuple:
        """Order-independent canonical form used for structural comparison."""
        comps = sorted(
            (c.kind, c.name, c.terminals, tuple(sorted((k, q.value) for k, q in c.params.items())), c.enable)
            for c in self.components
        )
        return (tuple(comps), tuple(sorted((p.name, p.node) for p in self.probes)), tuple(sorted(self.inputs)))


def _tokens(line: str) -> list[tuple[str, int]]:
    return [(m.group(0), m.start() + 1) for m in re.finditer(r"\S+", line)]


def _check_name(tok: str, lineno: int, col: int, what: str) -> str:
    if not _NAME.match(tok):
        raise NetlistError(f"invalid {what} name {tok!r}", lineno, col)
    return tok


def parse_netlist(text: str) -> Netlist:
    net = Netlist()
    names: set[str] = set()
    probe_names: set[str] = set()
    input_locs: list[tuple[str, int, int]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        head, hcol = toks[0]

        if head == "title":
            net.title = line[hcol - 1 + len("title"):].strip()
            continue
        if head == "probe":
            if len(toks) != 3:
                raise NetlistError("probe takes a name and a node", lineno, hcol)
            name = _check_name(toks[1][0], lineno, toks[1][1], "probe")
            if name in probe_names:
                raise NetlistError(f"duplicate probe {name!r}", lineno, toks[1][1])
            probe_names.add(name)
            node = _check_name(toks[2][0], lineno, toks[2][1], "node")
            net.probes.append(Probe(name, node, lineno, hcol))
            continue
        if head == "input":
            if len(toks) != 2:
                raise NetlistError("input takes one source name", lineno, hcol)
            input_locs.append((toks[1][0], lineno, toks[1][1]))
            continue
        if head not in KEYWORD_KIND:
            raise NetlistError(f"unknown component kind {head!r}", lineno, hcol)

        kind = KEYWORD_KIND[head]
        if len(toks) < 2:
            raise NetlistError(f"{head} needs a name", lineno, hcol)
        name = _check_name(toks[1][0], lineno, toks[1][1], "component")
        if name in names:
            raise NetlistError(f"duplicate component name {name!r}", lineno, toks[1][1])
        names.add(name)
        rest = toks[2:]
        positional = [(t, c) for t, c in rest if "=" not in t]
        keyed = [(t, c) for t, c in rest if "=" in t]

        params: dict[str, Quantity] = {}
        ports: dict[str, str] = {}
        enable: tuple[str, ...] = ()
        schema = PARAMS[kind]
        for tok, col in keyed:
            key, _, val = tok.partition("=")
            if kind in ("notgate", "andgate") and key in PORTS:
                if key in ports:
                    raise NetlistError(f"port {key!r} given twice", lineno, col)
                ports[key] = _check_name(val, lineno, col + len(key) + 1, "node")
                continue
            if kind == "source" and key == "when":
                enable = tuple(_check_name(v, lineno, col, "source") for v in val.split(","))
                continue
            if key not in schema or key == "pressure":
                raise NetlistError(f"unknown parameter {key!r} for {head}", lineno, col)
            if key in params:
                raise NetlistError(f"parameter {key!r} given twice", lineno, col)
            try:
                q, _ = parse_quantity(val, schema[key][0])
            except ValueError as exc:
                raise NetlistError(str(exc), lineno, col + len(key) + 1) from None
            params[key] = q

        if kind in ("notgate", "andgate"):
            if positional:
                raise NetlistError(f"{head} takes in=, out=, ctrl= ports", lineno, positional[0][1])
            missing = [p for p in PORTS if p not in ports]
            if missing:
                raise NetlistError(f"{head} {name} missing port(s) {', '.join(missing)}", lineno, hcol)
            terminals = tuple(ports[p] for p in PORTS)
        else:
            want = POSITIONAL_NODES[kind] + (1 if kind == "source" else 0)
            if kind == "orifice" and len(positional) == 1:
                want = 1  # single-terminal orifice vents to ambient
            if len(positional) != want:
                raise NetlistError(
                    f"{head} expects {want} positional field(s), got {len(positional)}", lineno, hcol
                )
            if kind == "source":
                ptok, pcol = positional[-1]
                try:
                    params["pressure"], _ = parse_quantity(ptok, PRESSURE)
                except ValueError as exc:
                    raise NetlistError(str(exc), lineno, pcol) from None
                positional = positional[:-1]
            terminals = tuple(_check_name(t, lineno, c, "node") for t, c in positional)

        for key, (_, required) in schema.items():
            if required and key not in params:
                raise NetlistError(f"{head} {name} requires {key}=", lineno, hcol)
        net.components.append(ComponentDecl(kind, name, terminals, params, enable, lineno, hcol))

    sources = {c.name for c in net.components if c.kind == "source"}
    for src, lineno, col in input_locs:
        if src not in sources:
            raise NetlistError(f"input {src!r} is not a declared source", lineno, col)
        if src in net.inputs:
            raise NetlistError(f"input {src!r} declared twice", lineno, col)
        net.inputs.append(src)
    for c in net.components:
        for e in c.enable:
            if e not in sources:
                raise NetlistError(f"when= names unknown source {e!r}", c.line, c.col)
    nodes = set(net.nodes())
    for p in net.probes:
        if p.node not in nodes:
            raise NetlistError(f"probe {p.name!r} on node {p.node!r} that no component uses", p.line, p.col)
    return net


def serialize(net: Netlist) -> str:
    """Canonical text: kPa for pressures, mm for lengths, Pa*s/ml for resistances."""
    lines = [f"title {net.title}".rstrip()]
    for c in net.components:
        kw = KIND_KEYWORD[c.kind]
        fields = [kw, c.name]
        if c.kind in ("notgate", "andgate"):
            fields += [f"{p}={n}" for p, n in zip(PORTS, c.terminals)]
        else:
            fields += list(c.terminals)
        schema = PARAMS[c.kind]
        if c.kind == "source":
            fields.append(format_quantity(c.params["pressure"].value, PRESSURE))
            if c.enable:
                fields.append("when=" + ",".join(c.enable))
        for key in schema:
            if key in c.params and key != "pressure":
                fields.append(f"{key}={format_quantity(c.params[key].value, schema[key][0])}")
        lines.append(" ".join(fields))
    for name in net.inputs:
        lines.append(f"input {name}")
    for p in net.probes:
        lines.append(f"probe {p.name} {p.node}")
    return "\n".join(lines) + "\n"
