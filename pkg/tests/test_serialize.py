from fractions import Fraction as F

import pytest

from lpbounds import families, serialize
from lpbounds.ccsynth import PLeaf, PNode
from lpbounds.errors import ParseError
from lpbounds.model import BitProductDistribution, ProductDistribution2P
from lpbounds.qcsynth import DLeaf, DNode


def test_function_round_trip_cc():
    f = families.gt(2)
    text = serialize.write_function(f)
    assert text.splitlines()[0] == "cc 4 4"
    assert serialize.parse_function(text) == f


def test_function_round_trip_qc():
    g = families.maj_q(3)
    text = serialize.write_function(g)
    assert text.splitlines()[0] == "qc 3"
    assert serialize.parse_function(text) == g


def test_function_hash_stable():
    f = families.eq(2)
    assert serialize.function_hash(f) == serialize.function_hash(families.eq(2))
    assert serialize.function_hash(f) != serialize.function_hash(families.gt(2))


def test_distribution_round_trip():
    mu = ProductDistribution2P((F(1), F(2, 3)), (F(0), F(5)))
    assert serialize.parse_distribution(serialize.write_distribution(mu)) == mu
    bits = BitProductDistribution((F(1, 2), F(1, 3)))
    assert serialize.parse_distribution(serialize.write_distribution(bits)) == bits


def test_protocol_tree_round_trip():
    tree = PNode("A", 0b0101, PNode("B", 0b0011, PLeaf(1), PLeaf(0)), PLeaf(0))
    text = serialize.write_protocol_tree(tree)
    assert text.splitlines()[0] == "ptree v1"
    assert serialize.parse_protocol_tree(text) == tree


def test_decision_tree_round_trip():
    tree = DNode(2, DLeaf(0), DNode(0, DLeaf(1), DLeaf(0)))
    text = serialize.write_decision_tree(tree)
    assert text.splitlines()[0] == "dtree v1"
    assert serialize.parse_decision_tree(text) == tree


def test_parse_errors():
    with pytest.raises(ParseError):
        serialize.parse_function("cc 4\n0000\n")
    with pytest.raises(ParseError):
        serialize.parse_function("qc 2\n012\n")
    with pytest.raises(ParseError):
        serialize.parse_distribution("rows: 1/2\n")
    with pytest.raises(ParseError):
        serialize.parse_protocol_tree("L 0\n")
    with pytest.raises(ParseError):
        serialize.parse_decision_tree("dtree v1\nQ 0\nL 1\n")  # truncated


def test_records_round_trip_and_order():
    recs = [{"record": "x", "b": 1, "a": 2}, {"record": "summary", "pass": True}]
    text = serialize.dump_records(recs)
    lines = text.splitlines()
    assert lines[0] == '{"a": 2, "b": 1, "record": "x"}'
    assert serialize.load_records(text) == recs
