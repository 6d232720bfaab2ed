from decimal import Decimal

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import DATA
from fluidlogic.graph import ValidationError, validate
from fluidlogic.logic import half_adder_template, xor_template
from fluidlogic.netlist import (
    ComponentDecl,
    Netlist,
    NetlistError,
    Probe,
    Quantity,
    format_quantity,
    parse_netlist,
    parse_quantity,
    serialize,
)

OR_NET = """\
title OR gate
src a na 80kPa
src b nb 0
check c1 na x
check c2 nb y
tee t x y out
tank amb z
orifice vent out z d1=3mm
probe out out
input a
input b
"""


def test_source_unit_conversion():
    net = parse_netlist("src p1 n1 80kPa")
    (c,) = net.components
    assert (c.kind, c.name, c.terminals) == ("source", "p1", ("n1",))
    assert c.params["pressure"].value == 8.0e4


def test_hose_params():
    c = parse_netlist("hose h1 n1 n2 length=45cm diameter=2.5mm").components[0]
    assert c.params["length"].value == pytest.approx(0.45, rel=1e-15)
    assert c.params["diameter"].value == pytest.approx(2.5e-3, rel=1e-15)


@pytest.mark.parametrize(
    "text,fragment,line",
    [
        ("hose h1 n1", "positional", 1),
        ("\nfoo x a b", "unknown component kind", 2),
        ("src a n1 1kPa\nsrc a n2 1kPa", "duplicate component", 2),
        ("src a n1 1bar", "unknown unit", 1),
        ("hose h a b length=1m", "requires diameter", 1),
        ("hose h a b length=1m diameter=1mm color=3", "unknown parameter", 1),
        ("src a n1 1kPa\ninput q", "not a declared source", 2),
        ("not g in=a out=b", "missing port", 1),
        ("hose h a b length=1kPa diameter=1mm", "unit", 1),
        ("probe p1 n9\nsrc a n1 1kPa", "no component uses", 1),
    ],
)
def test_parse_errors_carry_location(text, fragment, line):
    with pytest.raises(NetlistError) as exc:
        parse_netlist(text)
    assert fragment in str(exc.value)
    assert exc.value.line == line
    assert exc.value.col >= 1


def test_comments_and_blank_lines():
    net = parse_netlist("# header\n\nsrc a n1 1kPa  # drive\n")
    assert len(net.components) == 1


def test_gate_ports_are_ordered_in_out_ctrl():
    c = parse_netlist("not g ctrl=c in=a out=b p_hi=500Pa").components[0]
    assert c.terminals == ("a", "b", "c")
    assert c.params["p_hi"].value == 500.0


def test_resistance_unit_round_trips_exactly():
    q, dimension = parse_quantity("419.6Pa*s/ml", "resistance")
    assert (q.unit, dimension) == ("Pa*s/ml", "resistance")
    assert q.value == 4.196e8
    assert format_quantity(q.value, "resistance") == "419.6Pa*s/ml"
    assert format_quantity(q.value, "resistance", "Pa*s/m3") == "419600000Pa*s/m3"
    assert parse_quantity("4.196e8Pa_s_per_m3", "resistance")[0].value == 4.196e8


def test_quantity_must_be_finite():
    with pytest.raises(ValueError):
        Quantity(float("nan"))


def test_or_graph_census():
    g = validate(parse_netlist(OR_NET.replace("orifice vent out z d1=3mm\n", "").replace("probe out out\n", "")))
    # the tee merges x, y and out into one node
    assert len(g.node_names) == 4
    assert len(g.branches) == 2 + 0
    g = validate(parse_netlist(OR_NET))
    assert len(g.node_names) == 4
    assert len(g.branches) == 3


def test_validate_errors():
    with pytest.raises(ValidationError, match="no ambient reference"):
        validate(parse_netlist("src a n1 1kPa\nhose h n1 n2 length=1m diameter=1mm"))
    with pytest.raises(ValidationError, match="source-source short"):
        validate(parse_netlist("src a n1 1kPa\nsrc b n1 2kPa\ntank t n2\nhose h n1 n2 length=1m diameter=1mm"))
    with pytest.raises(ValidationError, match="disconnected node"):
        validate(parse_netlist("src a n1 1kPa\ntank t n2\nhose h n1 n2 length=1m diameter=1mm\n"
                               "hose h2 n3 n4 length=1m diameter=1mm"))
    with pytest.raises(ValidationError, match="positive") as exc:
        validate(parse_netlist("src a n1 1kPa\ntank t n2\nhose h n1 n2 length=1m diameter=0mm"))
    assert exc.value.line == 3


def test_half_adder_validates_with_two_inputs_and_probes():
    g = validate(half_adder_template("I"))
    assert g.inputs == ("in1", "in2")
    assert set(g.probes) == {"Sum", "Carry"}


def test_serialize_golden_xor():
    assert serialize(xor_template()) == (DATA / "xor.net").read_text()


def test_round_trip_templates():
    for net in (xor_template(), half_adder_template("I"), half_adder_template("II"), parse_netlist(OR_NET)):
        assert parse_netlist(serialize(net)).structure() == net.structure()


def test_empty_netlist_serializes_to_title_line():
    assert serialize(Netlist()) == "title\n"
    assert parse_netlist(serialize(Netlist(title="blank"))).title == "blank"


names = st.from_regex(r"[a-z][a-z0-9_]{0,6}", fullmatch=True)
decimals = st.decimals(min_value=Decimal("0.001"), max_value=Decimal("1000"), places=3)


@st.composite
def netlists(draw):
    nodes = draw(st.lists(names, min_size=2, max_size=5, unique=True))
    comps = [ComponentDecl("tank", "t0", (nodes[0],))]
    n = draw(st.integers(1, 6))
    for i in range(n):
        kind = draw(st.sampled_from(["source", "hose", "check", "orifice", "notgate", "andgate"]))
        pick = lambda: draw(st.sampled_from(nodes))  # noqa: E731
        if kind == "source":
            params = {"pressure": Quantity(float(draw(decimals)) * 1000)}
            comps.append(ComponentDecl(kind, f"s{i}", (pick(),), params))
        elif kind == "hose":
            params = {"length": Quantity(float(draw(decimals)) / 1000), "diameter": Quantity(float(draw(decimals)) / 1000)}
            comps.append(ComponentDecl(kind, f"h{i}", (pick(), pick()), params))
        elif kind == "check":
            params = {"crack": Quantity(float(draw(decimals)))} if draw(st.booleans()) else {}
            comps.append(ComponentDecl(kind, f"c{i}", (pick(), pick()), params))
        elif kind == "orifice":
            comps.append(ComponentDecl(kind, f"o{i}", (pick(), pick()), {"d1": Quantity(float(draw(decimals)) / 1000)}))
        else:
            params = {"r_open": Quantity(float(draw(decimals)) * 1e6)} if kind == "notgate" else {"alpha": Quantity(0.5)}
            comps.append(ComponentDecl(kind, f"g{i}", (pick(), pick(), pick()), params))
    probes = [Probe("p0", nodes[0])]
    return Netlist(comps, probes, [], draw(st.sampled_from(["", "demo circuit"])))


@given(netlists())
def test_parse_serialize_identity(net):
    assert parse_netlist(serialize(net)).structure() == net.structure()
