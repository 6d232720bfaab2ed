"""Gate templates and the Boolean-expression compiler.

Every template is expanded flat into a ``Netlist``. Conventions shared by all
templates and by the compiler:

* one tank ``tank`` on node ``amb``;
* logic inputs are sources named after the variable, on a node of that name;
* NOT gates draw from the always-on supply ``vdd``;
* every gate input port is reached through one interconnect hose;
* every gate output node bleeds to ambient through an outlet orifice, the
  load a downstream port or chamber presents;
* component and node names inside a gate instance are prefixed ``<inst>.``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..netlist import ComponentDecl, Netlist, Probe, Quantity
from .boolexpr import And, BoolExpr, Not, Or, Var, Xor, parse_bool_expr, variables

TANK_NODE = "amb"
SUPPLY = "vdd"


@dataclass(frozen=True)
class GateLibrary:
    hose_length: float = 0.05  # m, one interconnect per gate port
    hose_diameter: float = 2.5e-3  # m
    outlet_diameter: float = 3e-3  # m
    outlet_cq: float = 0.7
    supply_pressure: float = 8.0e4  # Pa, always-on and auxiliary sources

    def __post_init__(self):
        if not (self.hose_length > 0 and self.hose_diameter > 0 and self.outlet_diameter > 0):
            raise ValueError("library dimensions must be positive")
        if not self.supply_pressure >= 0:
            raise ValueError("supply pressure must be >= 0")


DEFAULT_LIBRARY = GateLibrary()


@dataclass
class _Builder:
    lib: GateLibrary
    title: str = ""
    comps: list[ComponentDecl] = field(default_factory=list)
    probes: list[Probe] = field(default_factory=list)
    inputs: list[str] = field(default_factory=list)
    counters: dict[str, int] = field(default_factory=dict)
    has_supply: bool = False

    def __post_init__(self):
        self.add("tank", "tank", (TANK_NODE,))

    def add(self, kind, name, terminals, enable=(), **params):
        q = {k: v if isinstance(v, Quantity) else Quantity(float(v)) for k, v in params.items()}
        self.comps.append(ComponentDecl(kind, name, tuple(terminals), q, tuple(enable)))

    def instance(self, kind: str) -> str:
        self.counters[kind] = self.counters.get(kind, 0) + 1
        return f"{kind}{self.counters[kind]}"

    # primitives

    def input(self, name: str) -> str:
        if name not in self.inputs:
            self.add("source", name, (name,), pressure=0.0)
            self.inputs.append(name)
        return name

    def supply(self) -> str:
        if not self.has_supply:
            self.add("source", SUPPLY, (SUPPLY,), pressure=self.lib.supply_pressure)
            self.has_supply = True
        return SUPPLY

    def aux(self, name: str, enable: tuple[str, ...]) -> str:
        self.add("source", name, (name,), enable, pressure=self.lib.supply_pressure)
        return name

    def hose(self, name: str, a: str, b: str):
        self.add("hose", name, (a, b), length=self.lib.hose_length, diameter=self.lib.hose_diameter)

    def outlet(self, prefix: str, node: str):
        self.add("orifice", f"{prefix}.vent", (node, TANK_NODE), d1=self.lib.outlet_diameter, cq=self.lib.outlet_cq)

    def probe(self, name: str, node: str):
        self.probes.append(Probe(name, node))

    # gates: each takes signal nodes and returns its output node

    def not_gate(self, source: str, ctrl: str, inst: Optional[str] = None) -> str:
        p = inst or self.instance("not")
        self.hose(f"{p}.h_in", source, f"{p}.in")
        self.hose(f"{p}.h_ctrl", ctrl, f"{p}.ctrl")
        self.add("notgate", f"{p}.valve", (f"{p}.in", f"{p}.out", f"{p}.ctrl"))
        self.outlet(p, f"{p}.out")
        return f"{p}.out"

    def and_gate(self, source: str, ctrl: str, inst: Optional[str] = None) -> str:
        p = inst or self.instance("and")
        self.hose(f"{p}.h_in", source, f"{p}.in")
        self.hose(f"{p}.h_ctrl", ctrl, f"{p}.ctrl")
        self.add("andgate", f"{p}.valve", (f"{p}.in", f"{p}.out", f"{p}.ctrl"))
        self.outlet(p, f"{p}.out")
        return f"{p}.out"

    def or_gate(self, x: str, y: str, inst: Optional[str] = None) -> str:
        p = inst or self.instance("or")
        for k, sig in ((1, x), (2, y)):
            self.hose(f"{p}.h{k}", sig, f"{p}.in{k}")
            self.add("check", f"{p}.c{k}", (f"{p}.in{k}", f"{p}.j{k}"))
        self.add("tee", f"{p}.tee", (f"{p}.j1", f"{p}.j2", f"{p}.out"))
        self.outlet(p, f"{p}.out")
        return f"{p}.out"

    def dual_not(self, x: str, y: str, p: str) -> tuple[str, str]:
        """Cross-connected NOT pair: outputs carry x and not y, y and not x."""
        return self.not_gate(x, y, f"{p}.n1"), self.not_gate(y, x, f"{p}.n2")

    def xor_gate(self, x: str, y: str, inst: Optional[str] = None) -> str:
        p = inst or self.instance("xor")
        u, v = self.dual_not(x, y, p)
        return self.or_gate(u, v, f"{p}.or")

    def and_alt(self, x: str, y: str, feed: str, inst: Optional[str] = None) -> str:
        """AND built as NOT(x xor y) drawing from ``feed``."""
        p = inst or self.instance("andalt")
        s = self.xor_gate(x, y, f"{p}.xor")
        return self.not_gate(feed, s, f"{p}.not")

    def buffer(self, x: str) -> str:
        """Two NOT stages: restores a degraded level to a supply-fed one."""
        return self.not_gate(self.supply(), self.not_gate(self.supply(), x))

    def build(self) -> Netlist:
        return Netlist(list(self.comps), list(self.probes), list(self.inputs), self.title)


# --- templates --------------------------------------------------------------


def or_template(a: str = "in1", b: str = "in2", lib: GateLibrary = DEFAULT_LIBRARY) -> Netlist:
    """Tee junction behind two check valves."""
    bld = _Builder(lib, "OR gate")
    bld.probe("out", bld.or_gate(bld.input(a), bld.input(b)))
    return bld.build()


def not_template(a: str = "in1", lib: GateLibrary = DEFAULT_LIBRARY) -> Netlist:
    """NOT bench: supply on the input port, the logic input on the control port."""
    bld = _Builder(lib, "NOT gate")
    x = bld.input(a)
    bld.probe("out", bld.not_gate(bld.supply(), x))
    return bld.build()


def and_template(a: str = "in1", b: str = "in2", lib: GateLibrary = DEFAULT_LIBRARY) -> Netlist:
    """Disc-pole-disc AND: ``a`` on the input port, ``b`` on the control port."""
    bld = _Builder(lib, "AND gate")
    x, y = bld.input(a), bld.input(b)
    bld.probe("out", bld.and_gate(x, y))
    return bld.build()


def xor_template(a: str = "in1", b: str = "in2", lib: GateLibrary = DEFAULT_LIBRARY) -> Netlist:
    """Dual-NOT core whose two outlets are joined by an OR gate."""
    bld = _Builder(lib, "XOR gate")
    x, y = bld.input(a), bld.input(b)
    bld.probe("out", bld.xor_gate(x, y))
    return bld.build()


def and_alt_template(a: str = "in1", b: str = "in2", lib: GateLibrary = DEFAULT_LIBRARY) -> Netlist:
    """XOR followed by a NOT whose input has its own source."""
    bld = _Builder(lib, "AND from XOR and NOT")
    x, y = bld.input(a), bld.input(b)
    feed = bld.aux("aux1", (x, y))
    bld.probe("out", bld.and_alt(x, y, feed))
    return bld.build()


def half_adder_template(variant: str = "I", a: str = "in1", b: str = "in2",
                        lib: GateLibrary = DEFAULT_LIBRARY) -> Netlist:
    """Half adder with probes ``Sum`` and ``Carry``.

    Variant I takes the carry from an AND gate. Variant II takes it from a
    third NOT controlled by the sum and fed by an auxiliary source.
    """
    variant = variant.upper()
    if variant not in ("I", "II"):
        raise ValueError("half adder variant must be 'I' or 'II'")
    bld = _Builder(lib, f"half adder type {variant}")
    x, y = bld.input(a), bld.input(b)
    s = bld.xor_gate(x, y)
    bld.probe("Sum", s)
    if variant == "I":
        bld.probe("Carry", bld.and_gate(x, y))
    else:
        feed = bld.aux("aux1", (x, y))
        bld.probe("Carry", bld.not_gate(feed, s))
    return bld.build()


def oscillator_template(lib: GateLibrary = DEFAULT_LIBRARY) -> Netlist:
    """Two supplied NOT gates whose joined outlets drive both control ports.

    Any output pressure closes both valves and a closed pair vents the
    shared node, so no valve assignment is self-consistent.
    """
    bld = _Builder(lib, "dual NOT closed loop")
    s1 = bld.aux("s1", ())
    s2 = bld.aux("s2", ())
    z = "loop"
    for k, src in ((1, s1), (2, s2)):
        p = f"n{k}"
        bld.hose(f"{p}.h_in", src, f"{p}.in")
        bld.hose(f"{p}.h_ctrl", z, f"{p}.ctrl")
        bld.add("notgate", f"{p}.valve", (f"{p}.in", z, f"{p}.ctrl"))
    bld.outlet("loop", z)
    bld.probe("out", z)
    return bld.build()


def actuator_template(variant: str = "I", a: str = "in1", b: str = "in2",
                      lib: GateLibrary = DEFAULT_LIBRARY) -> Netlist:
    """Half adder modified to drive three tentacle chambers (probes L, M, R).

    Variant I drops the XOR's OR stage and probes the two NOT outlets plus
    the AND outlet. Variant II taps the NOT outlets ahead of the OR check
    valves and feeds the middle chamber from an always-on source through a
    NOT controlled by the sum.
    """
    variant = variant.upper()
    if variant not in ("I", "II"):
        raise ValueError("actuator variant must be 'I' or 'II'")
    bld = _Builder(lib, f"tentacle driver type {variant}")
    x, y = bld.input(a), bld.input(b)
    if variant == "I":
        left, right = bld.dual_not(x, y, "xor1")
        middle = bld.and_gate(x, y)
    else:
        left, right = bld.dual_not(x, y, "xor1")
        s = bld.or_gate(left, right, "xor1.or")
        middle = bld.not_gate(bld.aux("aux1", ()), s)
    bld.probe("L", left)
    bld.probe("M", middle)
    bld.probe("R", right)
    return bld.build()


TEMPLATES = {
    "or": or_template,
    "not": not_template,
    "and": and_template,
    "xor": xor_template,
    "and-alt": and_alt_template,
    "half-adder-1": lambda lib=DEFAULT_LIBRARY: half_adder_template("I", lib=lib),
    "half-adder-2": lambda lib=DEFAULT_LIBRARY: half_adder_template("II", lib=lib),
}


# --- compiler ---------------------------------------------------------------


def compile_to_netlist(expr, lib: GateLibrary = DEFAULT_LIBRARY, alt_and: bool = False) -> Netlist:
    """Map a Boolean expression (tree or text) onto the gate library.

    Variables become logic-input sources and the root output is probe
    ``out``. Operands of AND, OR and XOR that are not plain variables pass
    through a two-NOT buffer so that degraded levels do not accumulate.
    """
    if isinstance(expr, str):
        expr = parse_bool_expr(expr)
    bld = _Builder(lib, "compiled")
    for v in variables(expr):
        bld.input(v)

    def operand(e: BoolExpr) -> str:
        node = emit(e)
        return node if isinstance(e, Var) else bld.buffer(node)

    def emit(e: BoolExpr) -> str:
        if isinstance(e, Var):
            return e.name
        if isinstance(e, Not):
            return bld.not_gate(bld.supply(), emit(e.arg))
        x, y = operand(e.left), operand(e.right)
        if isinstance(e, Or):
            return bld.or_gate(x, y)
        if isinstance(e, Xor):
            return bld.xor_gate(x, y)
        if not alt_and:
            return bld.and_gate(x, y)
        p = bld.instance("andalt")
        if isinstance(e.left, Var) and isinstance(e.right, Var):
            feed = bld.aux(f"{p}.aux", tuple(dict.fromkeys((x, y))))
        else:
            feed = bld.or_gate(x, y, f"{p}.feed")
        return bld.and_alt(x, y, feed, p)

    if isinstance(expr, Var):
        bld.hose("pass.h", expr.name, "out")
        bld.outlet("pass", "out")
        bld.probe("out", "out")
    else:
        bld.probe("out", emit(expr))
    return bld.build()
