"""Logic levels, truth-table extraction and verification."""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from typing import Optional, Union

from ..graph import CircuitGraph, validate
from ..netlist import Netlist
from ..solver import NoSteadyState, SolveConfig, solve_steady

X = "X"
Level = Union[int, str]


@dataclass(frozen=True)
class LogicThresholds:
    theta_hi: float = 1.0e4  # Pa, at or above reads 1
    theta_lo: float = 2.0e3  # Pa, at or below reads 0
    p_hi_in: float = 8.0e4  # Pa, drive applied to a logic-1 input

    def __post_init__(self):
        if not 0 <= self.theta_lo < self.theta_hi < self.p_hi_in:
            raise ValueError("thresholds need 0 <= theta_lo < theta_hi < p_hi_in")


def quantize(pressure: float, t: LogicThresholds = LogicThresholds()) -> Level:
    if pressure < 0:
        raise ValueError("pressure must be >= 0")
    if pressure >= t.theta_hi:
        return 1
    if pressure <= t.theta_lo:
        return 0
    return X


@dataclass(frozen=True)
class TableRow:
    levels: tuple[Level, ...]
    pressures: Optional[tuple[float, ...]] = None  # Pa; None when read from text
    failure: str = ""  # set when the row has no steady state

    @property
    def ok(self) -> bool:
        return not self.failure and X not in self.levels


@dataclass
class TruthTable:
    inputs: list[str]
    outputs: list[str]
    rows: dict[tuple[int, ...], TableRow] = field(default_factory=dict)

    def __post_init__(self):
        if self.rows and len(self.rows) != 2 ** len(self.inputs):
            raise ValueError(f"{len(self.inputs)} inputs need {2 ** len(self.inputs)} rows, got {len(self.rows)}")

    def column(self, output: str) -> dict[tuple[int, ...], Level]:
        k = self.outputs.index(output)
        return {bits: row.levels[k] if not row.failure else X for bits, row in self.rows.items()}

    @property
    def indeterminate(self) -> bool:
        return any(not row.ok for row in self.rows.values())


def all_rows(n: int) -> list[tuple[int, ...]]:
    """Input vectors in counting order, first input most significant."""
    return list(itertools.product((0, 1), repeat=n))


def _graph(circuit: Union[CircuitGraph, Netlist]) -> CircuitGraph:
    return circuit if isinstance(circuit, CircuitGraph) else validate(circuit)


def enumerate_truth_table(circuit: Union[CircuitGraph, Netlist], inputs: Optional[list[str]] = None,
                          t: LogicThresholds = LogicThresholds(), cfg: SolveConfig = SolveConfig(),
                          outputs: Optional[list[str]] = None) -> TruthTable:
    """Solve every input assignment and quantize every probe.

    Logic 1 drives an input source at ``t.p_hi_in``; logic 0 holds it at
    0 Pa gauge. Other sources keep their declared pressure.
    """
    g = _graph(circuit)
    inputs = list(g.inputs) if inputs is None else list(inputs)
    outputs = list(g.probes) if outputs is None else list(outputs)
    if not outputs:
        raise ValueError("circuit has no probes")
    for name in inputs:
        g.source(name)
    for name in outputs:
        if name not in g.probes:
            raise ValueError(f"no probe named {name!r}")
    table = TruthTable(inputs, outputs)
    for bits in all_rows(len(inputs)):
        drive = {name: t.p_hi_in * b for name, b in zip(inputs, bits)}
        res = solve_steady(g, drive, cfg)
        if isinstance(res, NoSteadyState):
            table.rows[bits] = TableRow(tuple(X for _ in outputs), None, res.diagnosis)
            continue
        pressures = tuple(res.probe_pressures[o] for o in outputs)
        table.rows[bits] = TableRow(tuple(quantize(max(p, 0.0), t) for p in pressures), pressures)
    return table


def table_from_function(inputs: list[str], outputs: list[str], fn) -> TruthTable:
    """Expected table from ``fn(bits) -> tuple of output bits``."""
    t = TruthTable(list(inputs), list(outputs))
    for bits in all_rows(len(inputs)):
        t.rows[bits] = TableRow(tuple(int(v) for v in fn(bits)))
    return t


# --- text format ------------------------------------------------------------


def format_truth_table(t: TruthTable) -> str:
    lines = [f"inputs: {' '.join(t.inputs)}", f"outputs: {' '.join(t.outputs)}"]
    for bits, row in t.rows.items():
        lines.append(f"{''.join(map(str, bits))} -> {' '.join(str(v) for v in row.levels)}")
    return "\n".join(lines) + "\n"


def parse_truth_table(text: str) -> TruthTable:
    inputs = outputs = None
    rows: dict[tuple[int, ...], TableRow] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("inputs:"):
            inputs = line[len("inputs:"):].split()
            continue
        if line.startswith("outputs:"):
            outputs = line[len("outputs:"):].split()
            continue
        if inputs is None or outputs is None:
            raise ValueError(f"line {lineno}: rows must follow the inputs: and outputs: headers")
        lhs, sep, rhs = line.partition("->")
        bits_text, levels = lhs.strip(), rhs.split()
        if not sep or len(bits_text) != len(inputs) or set(bits_text) - {"0", "1"}:
            raise ValueError(f"line {lineno}: expected '{'0' * len(inputs)} -> ...'")
        if len(levels) != len(outputs) or set(levels) - {"0", "1", X}:
            raise ValueError(f"line {lineno}: expected {len(outputs)} output level(s) of 0, 1 or X")
        bits = tuple(int(c) for c in bits_text)
        if bits in rows:
            raise ValueError(f"line {lineno}: row {bits_text} repeated")
        rows[bits] = TableRow(tuple(X if v == X else int(v) for v in levels))
    if inputs is None or outputs is None:
        raise ValueError("missing inputs:/outputs: header")
    return TruthTable(inputs, outputs, {b: rows[b] for b in sorted(rows)})


def truth_table_csv(t: TruthTable) -> str:
    """CSV with one level column and one pressure column per output."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(t.inputs + t.outputs + [f"{o}_Pa" for o in t.outputs] + ["failure"])
    for bits, row in t.rows.items():
        pressures = [format(p, ".9g") for p in row.pressures] if row.pressures else [""] * len(t.outputs)
        w.writerow(list(bits) + [str(v) for v in row.levels] + pressures + [row.failure])
    return buf.getvalue()


# --- verification -----------------------------------------------------------


@dataclass(frozen=True)
class Mismatch:
    bits: tuple[int, ...]
    output: str
    expected: Level
    actual: Level
    pressure: Optional[float]


@dataclass
class VerifyReport:
    passed: bool
    mismatches: list[Mismatch] = field(default_factory=list)
    problems: list[str] = field(default_factory=list)
    actual: Optional[TruthTable] = None


def verify(circuit: Union[CircuitGraph, Netlist], expected: TruthTable, t: LogicThresholds = LogicThresholds(),
           cfg: SolveConfig = SolveConfig()) -> VerifyReport:
    """Compare the simulated table to ``expected`` row by row."""
    g = _graph(circuit)
    problems = []
    if list(expected.inputs) != list(g.inputs):
        problems.append(f"inputs differ: circuit has {list(g.inputs)}, table has {list(expected.inputs)}")
    missing = [o for o in expected.outputs if o not in g.probes]
    if missing:
        problems.append(f"outputs without a probe: {missing}")
    if len(expected.rows) != 2 ** len(expected.inputs):
        problems.append("table does not cover every input row")
    if problems:
        return VerifyReport(False, problems=problems)

    actual = enumerate_truth_table(g, expected.inputs, t, cfg, outputs=expected.outputs)
    mismatches = []
    for bits, want in expected.rows.items():
        got = actual.rows[bits]
        if got.failure:
            problems.append(f"row {''.join(map(str, bits))}: {got.failure}")
        for k, out in enumerate(expected.outputs):
            if got.levels[k] != want.levels[k] or got.levels[k] == X:
                p = got.pressures[k] if got.pressures else None
                mismatches.append(Mismatch(bits, out, want.levels[k], got.levels[k], p))
    return VerifyReport(not mismatches and not problems, mismatches, problems, actual)
