import random
from pathlib import Path

import pytest

import gen
from oracles import type_order_violations
from termcert import cpf, xsd
from termcert.xsd import (
    Choice,
    Element,
    GroupRef,
    Item,
    ListOf,
    Optional,
    Product,
    Ref,
    Sequence,
    Sum,
    TextField,
)

FIXTURES = Path(__file__).parent / "fixtures"
XS = 'xmlns:xs="http://www.w3.org/2001/XMLSchema"'


def schema(body: str) -> str:
    return f"<xs:schema {XS}>{body}</xs:schema>"


def test_rule_element():
    s = xsd.parse_xsd_file(FIXTURES / "cpf_fragment.xsd")
    defs = dict(s.definitions)
    assert defs["rule"] == Sequence((Item(Element("lhs", GroupRef("term"))), Item(Element("rhs", GroupRef("term")))))


def test_symbol_group():
    defs = dict(xsd.parse_xsd_file(FIXTURES / "cpf_fragment.xsd").definitions)
    assert defs["symbol"] == Choice((
        GroupRef("name"),
        Element("sharp", Sequence((Item(GroupRef("symbol")),))),
        Element("labeledSymbol", Sequence((Item(GroupRef("symbol")), Item(GroupRef("label"))))),
    ))


def test_empty_schema():
    assert xsd.parse_xsd(schema("")).definitions == ()
    assert xsd.emit_ir(xsd.lower(xsd.parse_xsd_file(FIXTURES / "empty.xsd"))) == ""


def test_lower_examples():
    ir = xsd.lower(xsd.parse_xsd_file(FIXTURES / "cpf_fragment.xsd"))
    assert ir["symbol"] == Sum((
        ("Symbol_name", (Ref("name"),)),
        ("Symbol_sharp", (Ref("symbol"),)),
        ("Symbol_labeledSymbol", (Ref("symbol"), Ref("label"))),
    ))
    assert ir["rule"] == Product((Ref("term"), Ref("term")))
    assert ir["rules"] == Product((ListOf(Ref("rule")),))
    assert ir["name"] == Product((TextField("string"),))


def test_optional_mapping():
    doc = schema('<xs:element name="a"><xs:complexType><xs:sequence>'
                 '<xs:element ref="b" minOccurs="0"/><xs:element ref="b" minOccurs="2" maxOccurs="3"/>'
                 '</xs:sequence></xs:complexType></xs:element><xs:element name="b" type="xs:string"/>')
    ir = xsd.lower(xsd.parse_xsd(doc))
    assert ir["a"] == Product((Optional(Ref("b")), ListOf(Ref("b"))))


def test_compound_fields_get_aux_types():
    doc = schema('<xs:element name="a"><xs:complexType><xs:sequence>'
                 '<xs:element name="pair" maxOccurs="unbounded"><xs:complexType><xs:sequence>'
                 '<xs:element ref="b"/><xs:element ref="b"/></xs:sequence></xs:complexType></xs:element>'
                 '</xs:sequence></xs:complexType></xs:element><xs:element name="b" type="xs:string"/>')
    ir = xsd.lower(xsd.parse_xsd(doc))
    assert ir.names() == ["a", "a_pair", "b"]
    assert ir["a"] == Product((ListOf(Ref("a_pair")),))
    assert ir["a_pair"] == Product((Ref("b"), Ref("b")))


def test_order_examples():
    chain = schema('<xs:group name="A"><xs:sequence><xs:group ref="B"/></xs:sequence></xs:group>'
                   '<xs:group name="B"><xs:sequence><xs:group ref="C"/></xs:sequence></xs:group>'
                   '<xs:group name="C"><xs:sequence/></xs:group>')
    assert xsd.order_types(xsd.lower(xsd.parse_xsd(chain))) == [["C"], ["B"], ["A"]]
    mutual = schema('<xs:group name="A"><xs:sequence><xs:group ref="B"/></xs:sequence></xs:group>'
                    '<xs:group name="B"><xs:sequence><xs:group ref="A"/></xs:sequence></xs:group>')
    assert xsd.order_types(xsd.lower(xsd.parse_xsd(mutual))) == [["A", "B"]]


def test_fragment_ir_matches_frozen_output():
    ir = xsd.lower(xsd.parse_xsd_file(FIXTURES / "cpf_fragment.xsd"))
    order = xsd.order_types(ir)
    pos = {n: k for k, g in enumerate(order) for n in g}
    assert order[pos["symbol"]] == ["symbol"]
    assert pos["symbol"] > pos["name"] and pos["symbol"] > pos["label"]
    text = xsd.emit_ir(ir)
    assert text == (FIXTURES / "cpf_fragment.ir").read_text()
    assert text == xsd.emit_ir(xsd.lower(xsd.parse_xsd_file(FIXTURES / "cpf_fragment.xsd")))


@pytest.mark.parametrize("doc,err", [
    (schema('<xs:group name="A"><xs:sequence><xs:group ref="Z"/></xs:sequence></xs:group>'), xsd.UnresolvedRef),
    (schema('<xs:attribute name="x"/>'), cpf.Unsupported),
    (schema('<xs:group name="A"><xs:choice><xs:group ref="A" minOccurs="0"/></xs:choice></xs:group>'),
     cpf.Unsupported),
    (schema('<xs:group name="A"><xs:sequence/></xs:group><xs:group name="A"><xs:sequence/></xs:group>'),
     cpf.IllFormed),
    (schema('<xs:group name="A"><xs:sequence><xs:group ref="A" maxOccurs="x"/></xs:sequence></xs:group>'),
     cpf.BadInteger),
    ("<xs:schema", cpf.XmlMalformed),
], ids=["unresolved", "attribute", "occurs-on-choice", "duplicate", "bad-occurs", "malformed"])
def test_schema_errors(doc, err):
    with pytest.raises(err):
        xsd.parse_xsd(doc)


def test_attribute_fixture_unsupported():
    with pytest.raises(cpf.Unsupported):
        xsd.parse_xsd_file(FIXTURES / "attribute.xsd")


def test_random_schemas_respect_order():
    rng = random.Random(17)
    for _ in range(300):
        ir = xsd.lower(xsd.parse_xsd(gen.random_schema(rng)))
        assert type_order_violations(ir, xsd.order_types(ir)) == []
