import random
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

import gen
from termcert import cpf
from termcert.checker import Ko, Ok, Unsupported, check_certificate
from termcert.poly import Polynomial
from termcert.proof import DpTrans, PEmpty, RedPairProc, REmpty, RuleRemoval
from termcert.terms import Labeled, Name, Sharp, Var, fun

FIXTURES = Path(__file__).parent / "fixtures"
CERTS = sorted(FIXTURES.glob("*.cpf"))


def el(xml: str) -> cpf.Element:
    return cpf.parse_xml(xml.encode())


def wrap(proof: str, rules: str = "") -> str:
    return (f"<certificationProblem><input><trsInput><trs><rules>{rules}</rules></trs></trsInput></input>"
            f"<proof>{proof}</proof></certificationProblem>")


RULE_AB = "<rule><lhs><funapp><name>a</name></funapp></lhs><rhs><funapp><name>b</name></funapp></rhs></rule>"


def test_parse_term_example():
    t = cpf.parse_term(el("<funapp><name>add</name><arg><var>x</var></arg><arg><var>y</var></arg></funapp>"))
    assert t == fun("add", Var("x"), Var("y"))


def test_parse_symbol_examples():
    assert cpf.parse_symbol(el("<sharp><name>add</name></sharp>")) == Sharp(Name("add"))
    assert cpf.parse_symbol(el("<sharp><sharp><name>f</name></sharp></sharp>")) == Sharp(Sharp(Name("f")))
    lab = cpf.parse_symbol(el("<labeledSymbol><name>f</name><numberLabel><number>1</number></numberLabel></labeledSymbol>"))
    assert isinstance(lab, Labeled) and lab.base == Name("f")


def test_parse_polynomial_examples():
    assert cpf.parse_polynomial(el("<sum><coefficient><integer>2</integer></coefficient></sum>")) == Polynomial.const(2)
    assert cpf.parse_polynomial(el("<sum/>")) == Polynomial.const(0)
    assert cpf.parse_polynomial(el("<product/>")) == Polynomial.const(1)
    p = cpf.parse_polynomial(el(
        "<sum><product><coefficient><integer>2</integer></coefficient><variable>1</variable></product>"
        "<variable>2</variable></sum>"))
    assert p == 2 * Polynomial.var(1) + Polynomial.var(2)
    with pytest.raises(cpf.BadInteger):
        cpf.parse_polynomial(el("<variable>0</variable>"))
    with pytest.raises(cpf.BadInteger):
        cpf.parse_polynomial(el("<coefficient><integer>1.5</integer></coefficient>"))


def test_add_fixture_shape():
    cert = cpf.parse_cpf_file(FIXTURES / "add_polyint.cpf")
    assert len(cert.trs.rules) == 2
    assert isinstance(cert.proof, RuleRemoval) and cert.proof.remaining == ()
    assert isinstance(cert.proof.sub, REmpty)


def test_dp_fixture_shape():
    cert = cpf.parse_cpf_file(FIXTURES / "add_dp.cpf")
    assert isinstance(cert.proof, DpTrans)
    (comp,) = cert.proof.sub.components
    assert comp.real_scc and isinstance(comp.sub, RedPairProc) and isinstance(comp.sub.sub, PEmpty)


def test_missing_rhs():
    doc = wrap("<rIsEmpty/>", "<rule><lhs><funapp><name>a</name></funapp></lhs></rule>")
    with pytest.raises(cpf.MissingChild) as e:
        cpf.parse_cpf(doc)
    assert e.value.expected == "<rhs>"
    assert cpf.render_xpath(e.value.path).endswith("/rules/rule")


def test_unknown_proof_is_unsupported():
    with pytest.raises(cpf.Unsupported) as e:
        cpf.parse_cpf_file(FIXTURES / "semlab.cpf")
    assert e.value.element == "semanticLabelingProc"
    with pytest.raises(cpf.Unsupported):
        cpf.parse_cpf(wrap(f"<dpTrans><dps><rules/></dps><markedSymbols>true</markedSymbols><fooProc/></dpTrans>"))


def test_unmarked_dps_are_unsupported():
    with pytest.raises(cpf.Unsupported) as e:
        cpf.parse_cpf(wrap("<dpTrans><dps><rules/></dps><markedSymbols>false</markedSymbols><pIsEmpty/></dpTrans>"))
    assert e.value.element == "markedSymbols"


def test_wrong_proof_layer_is_malformed():
    with pytest.raises(cpf.UnexpectedElement):
        cpf.parse_cpf(wrap("<pIsEmpty/>"))


def test_doctype_rejected():
    doc = '<?xml version="1.0"?><!DOCTYPE x [<!ENTITY e SYSTEM "file:///etc/passwd">]>' + wrap("<rIsEmpty/>")
    with pytest.raises(cpf.XmlMalformed):
        cpf.parse_cpf(doc)


def test_namespaces_stripped():
    doc = wrap("<rIsEmpty/>", RULE_AB).replace("<certificationProblem>",
                                               '<c:certificationProblem xmlns:c="urn:x">', 1)
    doc = doc.replace("</certificationProblem>", "</c:certificationProblem>")
    assert len(cpf.parse_cpf(doc).trs.rules) == 1


def test_stray_text_and_bad_boolean():
    with pytest.raises(cpf.UnexpectedText):
        cpf.parse_cpf(wrap("<rIsEmpty>hi</rIsEmpty>"))
    comp = f"<component><dps><rules/></dps><realScc>maybe</realScc></component>"
    doc = wrap(f"<dpTrans><dps><rules/></dps><markedSymbols>true</markedSymbols><depGraphProc>{comp}</depGraphProc></dpTrans>")
    with pytest.raises(cpf.BadBoolean):
        cpf.parse_cpf(doc)


def test_real_scc_requires_subproof():
    comp = "<component><dps><rules/></dps><realScc>true</realScc></component>"
    doc = wrap(f"<dpTrans><dps><rules/></dps><markedSymbols>true</markedSymbols><depGraphProc>{comp}</depGraphProc></dpTrans>")
    with pytest.raises(cpf.MissingChild):
        cpf.parse_cpf(doc)


def test_arity_conflict_is_ill_formed():
    bad = "<rule><lhs><funapp><name>a</name><arg><var>x</var></arg></funapp></lhs><rhs><var>x</var></rhs></rule>"
    with pytest.raises(cpf.IllFormed):
        cpf.parse_cpf(wrap("<rIsEmpty/>", RULE_AB + bad))


def test_extra_rhs_variable_is_ill_formed():
    bad = "<rule><lhs><funapp><name>a</name></funapp></lhs><rhs><var>x</var></rhs></rule>"
    with pytest.raises(cpf.IllFormed):
        cpf.parse_cpf(wrap("<rIsEmpty/>", bad))


def test_depth_cap():
    deep = "<funapp><name>g</name><arg>" * 300 + "<var>x</var>" + "</arg></funapp>" * 300
    with pytest.raises(cpf.XmlMalformed):
        cpf.parse_cpf(wrap("<rIsEmpty/>", f"<rule><lhs>{deep}</lhs><rhs><var>x</var></rhs></rule>"))


@pytest.mark.parametrize("path", [p for p in CERTS if p.name != "semlab.cpf"], ids=lambda p: p.stem)
def test_round_trip(path):
    cert = cpf.parse_cpf_file(path)
    again = cpf.parse_cpf(cpf.serialize_cpf(cert))
    assert again == cert
    assert cpf.serialize_cpf(again) == cpf.serialize_cpf(cert)


def _strip(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def path_exists(doc: bytes, path) -> bool:
    """Collect element paths with an independent pull parser, up to the first syntax error."""
    seen = {()}
    pull = ET.XMLPullParser(events=("start", "end"))
    stack, counts = [()], [{}]
    try:
        pull.feed(doc)
        pull.close()
    except ET.ParseError:
        pass
    events = pull.read_events()
    while True:
        try:
            event, node = next(events)
        except (StopIteration, ET.ParseError):
            break
        if event == "start":
            tag = _strip(node.tag)
            k = counts[-1][tag] = counts[-1].get(tag, 0) + 1
            here = stack[-1] + ((tag, k),)
            seen.add(here)
            stack.append(here)
            counts.append({})
        else:
            stack.pop()
            counts.pop()
    return tuple(path) in seen


def parse_structured(doc: bytes):
    """Parse and, when that succeeds, check; any non-structured exception escapes."""
    try:
        cert = cpf.parse_cpf(doc)
    except cpf.ParseError as e:
        return e
    return check_certificate(cert)


def test_error_paths_name_existing_nodes():
    rng = random.Random(11)
    sources = [p.read_bytes() for p in CERTS]
    checked = 0
    for _ in range(1500):
        doc = gen.mutate_bytes(rng, rng.choice(sources))
        out = parse_structured(doc)
        if isinstance(out, cpf.ParseError) and not isinstance(out, cpf.XmlMalformed):
            assert path_exists(doc, out.path), (out, doc)
            checked += 1
    assert checked > 100


def test_fuzz_is_structured():
    rng = random.Random(12)
    sources = [p.read_bytes() for p in CERTS]
    for _ in range(2000):
        out = parse_structured(gen.mutate_bytes(rng, rng.choice(sources)))
        assert isinstance(out, (cpf.ParseError, Ok, Ko, Unsupported))


def test_arbitrary_bytes():
    rng = random.Random(13)
    for _ in range(300):
        data = bytes(rng.randrange(256) for _ in range(rng.randrange(200)))
        assert isinstance(parse_structured(data), cpf.ParseError)
