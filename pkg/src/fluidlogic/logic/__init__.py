"""Digital view of fluidic circuits: levels, gate templates, compiler, truth tables."""

from .boolexpr import And, BoolExpr, BoolSyntaxError, Not, Or, Var, Xor, evaluate, parse_bool_expr, to_text, variables
from .library import (
    DEFAULT_LIBRARY,
    TEMPLATES,
    GateLibrary,
    actuator_template,
    and_alt_template,
    and_template,
    compile_to_netlist,
    half_adder_template,
    not_template,
    or_template,
    oscillator_template,
    xor_template,
)
from .truthtable import (
    X,
    LogicThresholds,
    TableRow,
    TruthTable,
    VerifyReport,
    enumerate_truth_table,
    format_truth_table,
    parse_truth_table,
    quantize,
    table_from_function,
    truth_table_csv,
    verify,
)

__all__ = [
    "And", "BoolExpr", "BoolSyntaxError", "Not", "Or", "Var", "Xor", "evaluate", "parse_bool_expr", "to_text",
    "variables", "DEFAULT_LIBRARY", "TEMPLATES", "GateLibrary", "actuator_template", "and_alt_template",
    "and_template", "compile_to_netlist", "half_adder_template", "not_template", "or_template",
    "oscillator_template", "xor_template", "X", "LogicThresholds", "TableRow", "TruthTable", "VerifyReport",
    "enumerate_truth_table", "format_truth_table", "parse_truth_table", "quantize", "table_from_function",
    "truth_table_csv", "verify",
]
