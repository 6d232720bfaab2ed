"""Command-line front end: ``fluidlogic <verb> ...``.

Exit codes: 0 ok, 1 input error, 2 solver divergence, 3 no steady state,
4 verification mismatch.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

from .actuator import CHAMBERS, TentacleParams, actuate_demo
from .components import FluidProps
from .graph import CircuitGraph, validate
from .logic.boolexpr import BoolSyntaxError, parse_bool_expr
from .logic.library import TEMPLATES, compile_to_netlist
from .logic.truthtable import (
    LogicThresholds,
    enumerate_truth_table,
    format_truth_table,
    parse_truth_table,
    verify,
)
from .netlist import PARAMS, PRESSURE, NetlistError, parse_netlist, parse_quantity, serialize
from .report import (
    EXIT_DIVERGED,
    EXIT_INPUT,
    EXIT_MISMATCH,
    EXIT_NO_STEADY_STATE,
    EXIT_OK,
    RunReport,
)
from .solver import ConvergenceError, NoSteadyState, SolveConfig, solve_steady, sweep

CONFIG_ENV = "FLUIDLOGIC_CONFIG"

# config key -> (dimension, section)
CONFIG_KEYS = {
    "mu": ("viscosity", "fluid"),
    "rho": ("dimensionless", "fluid"),
    "theta_hi": (PRESSURE, "logic"),
    "theta_lo": (PRESSURE, "logic"),
    "p_hi_in": (PRESSURE, "logic"),
}


class InputError(Exception):
    """Bad user input; maps to exit status 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def load_config(path: Optional[str]) -> tuple[FluidProps, LogicThresholds]:
    """Read ``key=value`` lines (units allowed) for fluid and logic defaults."""
    fluid, logic = {}, {}
    if path:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read config {path}: {exc.strerror}") from None
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = (s.strip() for s in line.partition("="))
            if not sep or key not in CONFIG_KEYS:
                raise InputError(f"{path}: line {lineno}: expected one of {', '.join(CONFIG_KEYS)} as key=value")
            dim, section = CONFIG_KEYS[key]
            try:
                q, _ = parse_quantity(val, dim)
            except ValueError as exc:
                raise InputError(f"{path}: line {lineno}: {exc}") from None
            (fluid if section == "fluid" else logic)[key] = q.value
    try:
        return FluidProps(**fluid), LogicThresholds(**logic)
    except ValueError as exc:
        raise InputError(f"config: {exc}") from None


def _read_graph(path: str, fluid: FluidProps) -> CircuitGraph:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return validate(parse_netlist(text), fluid)
    except NetlistError as exc:
        raise InputError(f"{path}: {exc}") from None


def _pressure(text: str, what: str) -> float:
    try:
        return parse_quantity(text, PRESSURE)[0].value
    except ValueError as exc:
        raise InputError(f"{what}: {exc}") from None


def _overrides(graph: CircuitGraph, items: Sequence[str]) -> dict[str, float]:
    known = {s.name for s in graph.sources}
    out = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep:
            raise InputError(f"--set expects name=pressure, got {item!r}")
        if name not in known:
            raise InputError(f"--set: no source named {name!r}")
        p = _pressure(value, f"--set {name}")
        if p < 0:
            raise InputError(f"--set {name}: pressure must be >= 0")
        out[name] = p
    return out


def _cycle_lines(res: NoSteadyState) -> list[str]:
    return [", ".join(f"{k}={v}" for k, v in step.items()) for step in res.cycle]


# --- verbs ------------------------------------------------------------------


def cmd_sim(args, report: RunReport, fluid, logic, cfg):
    graph = _read_graph(args.netlist, fluid)
    res = solve_steady(graph, _overrides(graph, args.set), cfg)
    if isinstance(res, NoSteadyState):
        report.data["diagnosis"] = res.diagnosis
        report.data["cycle"] = _cycle_lines(res)
        report.warnings.append("no steady state")
        report.status = EXIT_NO_STEADY_STATE
        return
    report.columns = ["name", "field", "value"]
    for name in graph.probes:
        report.rows.append([name, "pressure_Pa", res.probe_pressures[name]])
        report.rows.append([name, "flow_m3_s", res.probe_flows[name]])
    for name, state in res.valve_states.items():
        report.rows.append([name, "state", state])
    report.data["residual_m3_s"] = res.residual


def cmd_sweep(args, report: RunReport, fluid, logic, cfg):
    if args.steps < 2:
        raise InputError("--steps must be >= 2")
    graph = _read_graph(args.netlist, fluid)
    var = args.var
    if var in {s.name for s in graph.sources}:
        dim = PRESSURE
    else:
        comp, _, param = var.rpartition(".")
        try:
            decl = graph.netlist.component(comp)
        except KeyError:
            raise InputError(f"--var {var!r} is neither a source nor component.param") from None
        if param not in PARAMS[decl.kind] or param == "pressure":
            raise InputError(f"--var: {decl.kind} has no parameter {param!r}")
        dim = PARAMS[decl.kind][param][0]
    try:
        start = parse_quantity(args.start, dim)[0].value
        stop = parse_quantity(args.stop, dim)[0].value
    except ValueError as exc:
        raise InputError(f"sweep range: {exc}") from None
    if start == stop:
        raise InputError("--from and --to must differ")
    try:
        result = sweep(graph, var, start, stop, args.steps, cfg, _overrides(graph, args.set))
    except NetlistError as exc:
        raise InputError(f"sweep: {exc}") from None
    probes = list(graph.probes)
    report.columns = [var] + [f"{p}_Pa" for p in probes] + [f"{p}_flow_m3_s" for p in probes]
    for value, res in result.points:
        if isinstance(res, NoSteadyState):
            report.rows.append([value] + [None] * (2 * len(probes)))
            report.warnings.append(f"{var}={value:.9g}: {res.diagnosis}")
            report.status = EXIT_NO_STEADY_STATE
        else:
            report.rows.append([value] + [res.probe_pressures[p] for p in probes]
                               + [res.probe_flows[p] for p in probes])


def cmd_truth(args, report: RunReport, fluid, logic, cfg):
    graph = _read_graph(args.netlist, fluid)
    if args.high is not None:
        try:
            logic = replace(logic, p_hi_in=_pressure(args.high, "--high"))
        except ValueError as exc:
            raise InputError(f"--high: {exc}") from None
    if not graph.probes:
        raise InputError("netlist declares no probes")
    table = enumerate_truth_table(graph, None, logic, cfg)
    report.columns = table.inputs + table.outputs + [f"{o}_Pa" for o in table.outputs]
    for bits, row in table.rows.items():
        pressures = list(row.pressures) if row.pressures else [None] * len(table.outputs)
        report.rows.append(list(bits) + list(row.levels) + pressures)
        if row.failure:
            report.warnings.append(f"row {''.join(map(str, bits))}: {row.failure}")
            report.status = EXIT_NO_STEADY_STATE
        elif "X" in row.levels:
            report.warnings.append(f"row {''.join(map(str, bits))}: indeterminate level")
    report.data["table"] = format_truth_table(table)


def cmd_compile(args, report: RunReport, fluid, logic, cfg):
    try:
        expr = parse_bool_expr(args.expr)
    except BoolSyntaxError as exc:
        raise InputError(f"expression: {exc}") from None
    text = serialize(compile_to_netlist(expr, alt_and=args.alt_and))
    if args.output:
        try:
            Path(args.output).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot write {args.output}: {exc.strerror}") from None
        report.data["written"] = args.output
    else:
        report.data["netlist"] = text


def cmd_template(args, report: RunReport, fluid, logic, cfg):
    text = serialize(TEMPLATES[args.name]())
    if args.output:
        try:
            Path(args.output).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot write {args.output}: {exc.strerror}") from None
        report.data["written"] = args.output
    else:
        report.data["netlist"] = text


def cmd_check(args, report: RunReport, fluid, logic, cfg):
    graph = _read_graph(args.netlist, fluid)
    try:
        expected = parse_truth_table(Path(args.table).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read {args.table}: {exc.strerror}") from None
    except ValueError as exc:
        raise InputError(f"{args.table}: {exc}") from None
    rep = verify(graph, expected, logic, cfg)
    report.columns = ["row", "output", "expected", "actual", "pressure_Pa"]
    for m in rep.mismatches:
        report.rows.append(["".join(map(str, m.bits)), m.output, m.expected, m.actual, m.pressure])
    report.warnings.extend(rep.problems)
    report.data["result"] = "pass" if rep.passed else "mismatch"
    report.status = EXIT_OK if rep.passed else EXIT_MISMATCH


def cmd_actuate(args, report: RunReport, fluid, logic, cfg):
    res, bend = actuate_demo(args.half_adder, args.in1, args.in2, cfg, TentacleParams(), logic)
    if isinstance(res, NoSteadyState):
        report.data["diagnosis"] = res.diagnosis
        report.status = EXIT_NO_STEADY_STATE
        return
    report.columns = ["chamber", "pressure_Pa"]
    for c in CHAMBERS:
        report.rows.append([c, res.probe_pressures[c]])
    report.data["azimuth_deg"] = bend.azimuth
    report.data["curvature_1_m"] = bend.curvature
    report.data["dominant"] = bend.dominant_chamber or "none"


# --- parser -----------------------------------------------------------------


def _format_flags(p: argparse.ArgumentParser, csv_ok: bool = False, table_flag: bool = True):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON report (schema 1)")
    if table_flag:
        g.add_argument("--table", dest="fmt", action="store_const", const="table", help="aligned text table (default)")
    if csv_ok:
        g.add_argument("--csv", dest="fmt", action="store_const", const="csv", help="RFC 4180 CSV rows")
    p.set_defaults(fmt="table")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="fluidlogic", description="Steady-state simulator for hydraulic logic circuits.")
    ap.add_argument("--config", help=f"key=value defaults file (otherwise ${CONFIG_ENV})")
    sub = ap.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("sim", help="solve one operating point")
    p.add_argument("netlist")
    p.add_argument("--set", action="append", metavar="NAME=P", help="override a source pressure")
    _format_flags(p)
    p.set_defaults(func=cmd_sim)

    p = sub.add_parser("sweep", help="quasi-static parameter sweep")
    p.add_argument("netlist")
    p.add_argument("--var", required=True, help="source name or component.param")
    p.add_argument("--from", dest="start", required=True)
    p.add_argument("--to", dest="stop", required=True)
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--set", action="append", metavar="NAME=P")
    _format_flags(p, csv_ok=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("truth", help="enumerate the truth table over the declared inputs")
    p.add_argument("netlist")
    p.add_argument("--high", help="logic-1 drive pressure")
    _format_flags(p, csv_ok=True)
    p.set_defaults(func=cmd_truth)

    p = sub.add_parser("compile", help="compile a Boolean expression to a netlist")
    p.add_argument("expr")
    p.add_argument("-o", "--output")
    p.add_argument("--alt-and", action="store_true", help="build AND as XOR followed by NOT")
    _format_flags(p)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("template", help="emit a built-in gate template")
    p.add_argument("name", choices=sorted(TEMPLATES))
    p.add_argument("-o", "--output")
    _format_flags(p)
    p.set_defaults(func=cmd_template)

    p = sub.add_parser("check", help="verify a circuit against a truth-table file")
    p.add_argument("netlist")
    p.add_argument("--table", required=True, help="expected truth-table file")
    _format_flags(p, table_flag=False)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("actuate", help="tentacle bend for one input pair")
    p.add_argument("--half-adder", choices=["I", "II"], default="I")
    p.add_argument("--in1", type=int, choices=[0, 1], required=True)
    p.add_argument("--in2", type=int, choices=[0, 1], required=True)
    _format_flags(p)
    p.set_defaults(func=cmd_actuate)
    return ap


def render(report: RunReport, fmt: str) -> str:
    if fmt == "json":
        return report.to_json() + "\n"
    if fmt == "csv":
        return report.to_csv()
    if report.verb in ("compile", "template") and not report.warnings and "written" not in report.data:
        return report.data["netlist"]
    return report.to_table()


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    report = RunReport(args.verb, ["fluidlogic"] + argv)
    try:
        fluid, logic = load_config(args.config or os.environ.get(CONFIG_ENV))
        args.func(args, report, fluid, logic, SolveConfig())
    except InputError as exc:
        print(f"fluidlogic: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConvergenceError as exc:
        print(f"fluidlogic: solver diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    sys.stdout.write(render(report, args.fmt))
    return report.status


if __name__ == "__main__":
    sys.exit(main())
