"""Parsing and serialization of CPF-style certification problems.

The XML layer is a small positioned DOM built with expat; the grammar is
then enforced by recursive descent over it.  Every error carries the
element path where it was detected, written XPath-style
(``/certificationProblem/proof/ruleRemoval/trs/rules/rule[2]/lhs``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional
from xml.etree import ElementTree as ET
from xml.parsers import expat

from .poly import Polynomial, PolyInterpretation
from .proof import (
    Certificate,
    Component,
    DepGraphProc,
    DpProof,
    DpTrans,
    PEmpty,
    Proof,
    RedPairProc,
    REmpty,
    RuleRemoval,
)
from .terms import (
    ArityConflict,
    Fun,
    InvalidRule,
    Labeled,
    Name,
    Rule,
    Sharp,
    Symbol,
    Term,
    Trs,
    Var,
    infer_signature,
)

MAX_DEPTH = 400

Step = tuple[str, int]


def render_xpath(path: tuple[Step, ...]) -> str:
    return "".join(f"/{tag}" if k == 1 else f"/{tag}[{k}]" for tag, k in path)


class ParseError(Exception):
    kind = "ParseError"

    def __init__(self, message: str, path: tuple[Step, ...] = (), line: int | None = None,
                 col: int | None = None):
        self.message = message
        self.path = path
        self.line = line
        self.col = col
        super().__init__(str(self))

    def __str__(self):
        where = render_xpath(self.path) or "/"
        pos = f" (line {self.line}, column {self.col})" if self.line is not None else ""
        return f"{where}{pos}: {self.message}"


class XmlMalformed(ParseError):
    kind = "XmlMalformed"


class UnexpectedElement(ParseError):
    kind = "UnexpectedElement"

    def __init__(self, path, got: str, expected: str, **pos):
        super().__init__(f"unexpected <{got}>, expected {expected}", path, **pos)
        self.got, self.expected = got, expected


class MissingChild(ParseError):
    kind = "MissingChild"

    def __init__(self, path, expected: str, **pos):
        super().__init__(f"missing {expected}", path, **pos)
        self.expected = expected


class UnexpectedText(ParseError):
    kind = "UnexpectedText"


class BadInteger(ParseError):
    kind = "BadInteger"


class BadBoolean(ParseError):
    kind = "BadBoolean"


class IllFormed(ParseError):
    """Syntactically valid but violates a structural invariant (rules, arities)."""

    kind = "IllFormed"


class Unsupported(ParseError):
    kind = "Unsupported"

    def __init__(self, path, element: str, **pos):
        super().__init__(f"unsupported element <{element}>", path, **pos)
        self.element = element


# --- positioned DOM ----------------------------------------------------------

@dataclass
class Element:
    tag: str
    path: tuple[Step, ...]
    line: int
    col: int
    attrs: dict[str, str] = field(default_factory=dict)
    children: list["Element"] = field(default_factory=list)
    text: str = ""

    @property
    def pos(self) -> dict:
        return {"line": self.line, "col": self.col}


def _local(name: str) -> str:
    return name.rsplit(":", 1)[-1]


def parse_xml(data: bytes) -> Element:
    """Build the positioned element tree; DOCTYPEs and entity declarations are refused."""
    parser = expat.ParserCreate()
    root: list[Element] = []
    stack: list[Element] = []
    counts: list[dict[str, int]] = [{}]

    def here():
        return {"line": parser.CurrentLineNumber, "col": parser.CurrentColumnNumber + 1}

    def start(name, attrs):
        tag = _local(name)
        if len(stack) >= MAX_DEPTH:
            raise XmlMalformed(f"nesting deeper than {MAX_DEPTH}", stack[-1].path, **here())
        if not stack and root:
            raise XmlMalformed("more than one root element", **here())
        k = counts[-1][tag] = counts[-1].get(tag, 0) + 1
        parent_path = stack[-1].path if stack else ()
        el = Element(tag, parent_path + ((tag, k),), **here(),
                     attrs={_local(a): v for a, v in attrs.items()})
        if stack:
            if stack[-1].text.strip():
                raise UnexpectedText("text mixed with elements", stack[-1].path, **stack[-1].pos)
            stack[-1].children.append(el)
        else:
            root.append(el)
        stack.append(el)
        counts.append({})

    def end(name):
        stack.pop()
        counts.pop()

    def chars(data):
        if stack:
            el = stack[-1]
            if el.children and data.strip():
                raise UnexpectedText("text mixed with elements", el.path, **here())
            el.text += data
        elif data.strip():
            raise XmlMalformed("text outside the root element", **here())

    def doctype(*args):
        raise XmlMalformed("DOCTYPE declarations are not accepted", **here())

    parser.StartElementHandler = start
    parser.EndElementHandler = end
    parser.CharacterDataHandler = chars
    parser.StartDoctypeDeclHandler = doctype
    parser.EntityDeclHandler = doctype
    try:
        parser.Parse(data, True)
    except expat.ExpatError as e:
        raise XmlMalformed(expat.ErrorString(e.code), line=e.lineno, col=e.offset + 1) from None
    except (LookupError, ValueError) as e:
        # unknown encoding names in the declaration, or undecodable input
        raise XmlMalformed(str(e), line=parser.CurrentLineNumber, col=parser.CurrentColumnNumber + 1) from None
    if not root:
        raise XmlMalformed("no root element", line=1, col=1)
    return root[0]


class Cursor:
    """Sequential reader over the element children of one node."""

    def __init__(self, el: Element):
        if el.text.strip() and el.children:
            raise UnexpectedText("text mixed with elements", el.path, **el.pos)
        if el.text.strip():
            raise UnexpectedText(f"unexpected text {el.text.strip()[:20]!r}", el.path, **el.pos)
        self.el = el
        self.i = 0

    def peek(self) -> Optional[Element]:
        return self.el.children[self.i] if self.i < len(self.el.children) else None

    def take(self, tag: str) -> Element:
        nxt = self.peek()
        if nxt is None:
            raise MissingChild(self.el.path, f"<{tag}>", **self.el.pos)
        if nxt.tag != tag:
            raise UnexpectedElement(nxt.path, nxt.tag, f"<{tag}>", **nxt.pos)
        self.i += 1
        return nxt

    def take_any(self, what: str) -> Element:
        nxt = self.peek()
        if nxt is None:
            raise MissingChild(self.el.path, what, **self.el.pos)
        self.i += 1
        return nxt

    def maybe(self, tag: str) -> Optional[Element]:
        nxt = self.peek()
        if nxt is not None and nxt.tag == tag:
            self.i += 1
            return nxt
        return None

    def many(self, tag: str) -> list[Element]:
        out = []
        while (el := self.maybe(tag)) is not None:
            out.append(el)
        return out

    def done(self):
        nxt = self.peek()
        if nxt is not None:
            raise UnexpectedElement(nxt.path, nxt.tag, f"end of <{self.el.tag}>", **nxt.pos)


def _leaf(el: Element) -> str:
    if el.children:
        c = el.children[0]
        raise UnexpectedElement(c.path, c.tag, f"text content of <{el.tag}>", **c.pos)
    return el.text.strip()


_INT = re.compile(r"[+-]?[0-9]+")
_NAT = re.compile(r"[0-9]+")


def _int(el: Element, nat: bool = False) -> int:
    text = _leaf(el)
    if not (_NAT if nat else _INT).fullmatch(text):
        kind = "natural number" if nat else "integer"
        raise BadInteger(f"expected {kind}, got {text[:20]!r}", el.path, **el.pos)
    try:
        return int(text)
    except ValueError:
        raise BadInteger("integer literal too long", el.path, **el.pos) from None


def _bool(el: Element) -> bool:
    text = _leaf(el)
    if text in ("true", "1"):
        return True
    if text in ("false", "0"):
        return False
    raise BadBoolean(f"expected boolean, got {text[:20]!r}", el.path, **el.pos)


# --- grammar -----------------------------------------------------------------

def _label_payload(el: Element):
    return (el.tag, el.text.strip(), tuple(_label_payload(c) for c in el.children))


def parse_symbol(el: Element) -> Symbol:
    if el.tag == "name":
        ident = _leaf(el)
        if not ident:
            raise IllFormed("empty symbol name", el.path, **el.pos)
        return Name(ident)
    if el.tag == "sharp":
        c = Cursor(el)
        sym = parse_symbol(c.take_any("symbol"))
        c.done()
        return Sharp(sym)
    if el.tag == "labeledSymbol":
        c = Cursor(el)
        sym = parse_symbol(c.take_any("symbol"))
        label = _label_payload(c.take_any("label"))
        c.done()
        return Labeled(sym, label)
    raise UnexpectedElement(el.path, el.tag, "<name>, <sharp> or <labeledSymbol>", **el.pos)


def parse_term(el: Element) -> Term:
    if el.tag == "var":
        name = _leaf(el)
        if not name:
            raise IllFormed("empty variable name", el.path, **el.pos)
        return Var(name)
    if el.tag == "funapp":
        c = Cursor(el)
        sym = parse_symbol(c.take_any("symbol"))
        args = []
        for a in c.many("arg"):
            ac = Cursor(a)
            args.append(parse_term(ac.take_any("term")))
            ac.done()
        c.done()
        return Fun(sym, tuple(args))
    raise UnexpectedElement(el.path, el.tag, "<var> or <funapp>", **el.pos)


def _single_term(el: Element) -> Term:
    c = Cursor(el)
    t = parse_term(c.take_any("term"))
    c.done()
    return t


def parse_rule(el: Element) -> Rule:
    c = Cursor(el)
    lhs = _single_term(c.take("lhs"))
    rhs = _single_term(c.take("rhs"))
    c.done()
    try:
        return Rule(lhs, rhs)
    except InvalidRule as e:
        raise IllFormed(str(e), el.path, **el.pos) from None


def parse_rules(el: Element) -> tuple[Rule, ...]:
    """``<rules> rule* </rules>``."""
    c = Cursor(el)
    out = tuple(parse_rule(r) for r in c.many("rule"))
    c.done()
    return out


def _wrapped_rules(el: Element) -> tuple[Rule, ...]:
    """``<trs>`` / ``<dps>`` holding a single ``<rules>``."""
    c = Cursor(el)
    rules = parse_rules(c.take("rules"))
    c.done()
    return rules


def parse_polynomial(el: Element) -> Polynomial:
    if el.tag == "coefficient":
        c = Cursor(el)
        value = _int(c.take("integer"))
        c.done()
        return Polynomial.const(value)
    if el.tag == "variable":
        i = _int(el, nat=True)
        if i < 1:
            raise BadInteger("variable indices start at 1", el.path, **el.pos)
        return Polynomial.var(i)
    if el.tag in ("sum", "product"):
        c = Cursor(el)
        acc = Polynomial.const(0 if el.tag == "sum" else 1)
        while (child := c.peek()) is not None:
            c.i += 1
            p = parse_polynomial(child)
            acc = acc + p if el.tag == "sum" else acc * p
        return acc
    raise UnexpectedElement(el.path, el.tag, "<coefficient>, <variable>, <sum> or <product>", **el.pos)


def parse_interpretation(el: Element) -> PolyInterpretation:
    c = Cursor(el)
    items = c.many("interpret")
    if not items:
        nxt = c.peek()
        if nxt is None:
            raise MissingChild(el.path, "<interpret>", **el.pos)
        raise UnexpectedElement(nxt.path, nxt.tag, "<interpret>", **nxt.pos)
    c.done()
    assign: dict[Symbol, tuple[int, Polynomial]] = {}
    for it in items:
        ic = Cursor(it)
        sym = parse_symbol(ic.take_any("symbol"))
        n = _int(ic.take("arity"), nat=True)
        pc = Cursor(ic.take("polynomial"))
        p = parse_polynomial(pc.take_any("polynomial expression"))
        pc.done()
        ic.done()
        if sym in assign:
            raise IllFormed(f"symbol {sym} interpreted twice", it.path, **it.pos)
        bad = [i for i in p.indices() if i > n]
        if bad:
            raise IllFormed(f"polynomial for {sym} mentions X{max(bad)} but arity is {n}",
                            it.path, **it.pos)
        assign[sym] = (n, p)
    return PolyInterpretation(assign)


_TRS_PROOFS = {"rIsEmpty", "ruleRemoval", "dpTrans"}
_DP_PROOFS = {"pIsEmpty", "depGraphProc", "redPairProc"}


def parse_trs_proof(el: Element) -> Proof:
    if el.tag == "rIsEmpty":
        Cursor(el).done()
        return REmpty()
    if el.tag == "ruleRemoval":
        c = Cursor(el)
        interp = parse_interpretation(c.take("interpretation"))
        remaining = _wrapped_rules(c.take("trs"))
        sub = parse_trs_proof(c.take_any("trs proof"))
        c.done()
        return RuleRemoval(interp, remaining, sub)
    if el.tag == "dpTrans":
        c = Cursor(el)
        dps = _wrapped_rules(c.take("dps"))
        marked = c.take("markedSymbols")
        if not _bool(marked):
            raise Unsupported(marked.path, "markedSymbols", **marked.pos)
        sub = parse_dp_proof(c.take_any("dp proof"))
        c.done()
        return DpTrans(dps, sub)
    if el.tag in _DP_PROOFS:
        raise UnexpectedElement(el.path, el.tag, "a trs proof", **el.pos)
    raise Unsupported(el.path, el.tag, **el.pos)


def parse_component(el: Element) -> Component:
    c = Cursor(el)
    dps = _wrapped_rules(c.take("dps"))
    real_el = c.take("realScc")
    real = _bool(real_el)
    sub_el = c.peek()
    if real and sub_el is None:
        raise MissingChild(el.path, "dp proof for a real SCC", **el.pos)
    if not real and sub_el is not None:
        raise UnexpectedElement(sub_el.path, sub_el.tag, f"end of <{el.tag}> (realScc is false)",
                                **sub_el.pos)
    sub = parse_dp_proof(c.take_any("dp proof")) if real else None
    c.done()
    return Component(dps, real, sub)


def parse_dp_proof(el: Element) -> DpProof:
    if el.tag == "pIsEmpty":
        Cursor(el).done()
        return PEmpty()
    if el.tag == "depGraphProc":
        c = Cursor(el)
        comps = tuple(parse_component(x) for x in c.many("component"))
        if not comps:
            raise MissingChild(el.path, "<component>", **el.pos)
        c.done()
        return DepGraphProc(comps)
    if el.tag == "redPairProc":
        c = Cursor(el)
        interp = parse_interpretation(c.take("interpretation"))
        remaining = _wrapped_rules(c.take("dps"))
        sub = parse_dp_proof(c.take_any("dp proof"))
        c.done()
        return RedPairProc(interp, remaining, sub)
    if el.tag in _TRS_PROOFS:
        raise UnexpectedElement(el.path, el.tag, "a dp proof", **el.pos)
    raise Unsupported(el.path, el.tag, **el.pos)


def _embedded_rules(proof) -> list[Rule]:
    out: list[Rule] = []
    if isinstance(proof, RuleRemoval):
        out += proof.remaining
        out += _embedded_rules(proof.sub)
    elif isinstance(proof, DpTrans):
        out += proof.dps
        out += _embedded_rules(proof.sub)
    elif isinstance(proof, RedPairProc):
        out += proof.remaining
        out += _embedded_rules(proof.sub)
    elif isinstance(proof, DepGraphProc):
        for comp in proof.components:
            out += comp.dps
            if comp.sub is not None:
                out += _embedded_rules(comp.sub)
    return out


def check_signature(cert: Certificate, path: tuple[Step, ...] = ()) -> dict[Symbol, int]:
    """Arity table over every rule of the certificate; marked symbols share their base arity."""
    try:
        arity = infer_signature(list(cert.trs.rules) + _embedded_rules(cert.proof))
    except ArityConflict as e:
        raise IllFormed(str(e), path) from None
    for f, n in arity.items():
        if isinstance(f, Sharp) and f.base in arity and arity[f.base] != n:
            raise IllFormed(f"marked symbol {f} has arity {n} but {f.base} has {arity[f.base]}", path)
    return arity


def parse_cpf(data: bytes | str) -> Certificate:
    if isinstance(data, str):
        data = data.encode("utf-8")
    root = parse_xml(data)
    if root.tag != "certificationProblem":
        raise UnexpectedElement(root.path, root.tag, "<certificationProblem>", **root.pos)
    c = Cursor(root)
    inp = Cursor(c.take("input"))
    trs_input = Cursor(inp.take("trsInput"))
    rules = _wrapped_rules(trs_input.take("trs"))
    trs_input.done()
    inp.done()
    pc = Cursor(c.take("proof"))
    proof = parse_trs_proof(pc.take_any("trs proof"))
    pc.done()
    c.done()
    try:
        trs = Trs.of(rules)
    except ArityConflict as e:
        raise IllFormed(str(e), root.path, **root.pos) from None
    cert = Certificate(trs, proof)
    check_signature(cert, root.path)
    return cert


def parse_cpf_file(path) -> Certificate:
    with open(path, "rb") as fh:
        return parse_cpf(fh.read())


# --- serialization -----------------------------------------------------------

def _sub(parent: ET.Element, tag: str, text: str | None = None) -> ET.Element:
    el = ET.SubElement(parent, tag)
    if text is not None:
        el.text = text
    return el


def _label_xml(parent: ET.Element, payload):
    tag, text, kids = payload
    el = _sub(parent, tag, text or None)
    for k in kids:
        _label_xml(el, k)


def symbol_xml(parent: ET.Element, f: Symbol):
    if isinstance(f, Name):
        _sub(parent, "name", f.ident)
    elif isinstance(f, Sharp):
        symbol_xml(_sub(parent, "sharp"), f.base)
    else:
        el = _sub(parent, "labeledSymbol")
        symbol_xml(el, f.base)
        _label_xml(el, f.label)


def term_xml(parent: ET.Element, t: Term):
    if isinstance(t, Var):
        _sub(parent, "var", t.name)
        return
    el = _sub(parent, "funapp")
    symbol_xml(el, t.symbol)
    for a in t.args:
        term_xml(_sub(el, "arg"), a)


def rules_xml(parent: ET.Element, wrapper: str, rules) -> None:
    rs = _sub(_sub(parent, wrapper), "rules")
    for r in rules:
        rule = _sub(rs, "rule")
        term_xml(_sub(rule, "lhs"), r.lhs)
        term_xml(_sub(rule, "rhs"), r.rhs)


def polynomial_xml(parent: ET.Element, p: Polynomial):
    s = _sub(parent, "sum")
    for m, coeff in sorted(p.terms.items()):
        prod = _sub(s, "product")
        _sub(_sub(prod, "coefficient"), "integer", str(coeff))
        for i, e in m:
            for _ in range(e):
                _sub(prod, "variable", str(i))


def interpretation_xml(parent: ET.Element, interp: PolyInterpretation):
    el = _sub(parent, "interpretation")
    for f, (n, p) in interp.assign.items():
        it = _sub(el, "interpret")
        symbol_xml(it, f)
        _sub(it, "arity", str(n))
        polynomial_xml(_sub(it, "polynomial"), p)


def proof_xml(parent: ET.Element, node) -> None:
    el = _sub(parent, node.tag)
    if isinstance(node, RuleRemoval):
        interpretation_xml(el, node.interp)
        rules_xml(el, "trs", node.remaining)
        proof_xml(el, node.sub)
    elif isinstance(node, DpTrans):
        rules_xml(el, "dps", node.dps)
        _sub(el, "markedSymbols", "true")
        proof_xml(el, node.sub)
    elif isinstance(node, DepGraphProc):
        for comp in node.components:
            c = _sub(el, "component")
            rules_xml(c, "dps", comp.dps)
            _sub(c, "realScc", "true" if comp.real_scc else "false")
            if comp.sub is not None:
                proof_xml(c, comp.sub)
    elif isinstance(node, RedPairProc):
        interpretation_xml(el, node.interp)
        rules_xml(el, "dps", node.remaining)
        proof_xml(el, node.sub)


def serialize_cpf(cert: Certificate) -> bytes:
    root = ET.Element("certificationProblem")
    rules_xml(_sub(_sub(root, "input"), "trsInput"), "trs", cert.trs.rules)
    proof_xml(_sub(root, "proof"), cert.proof)
    ET.indent(root)
    return ET.tostring(root, encoding="utf-8", xml_declaration=True) + b"\n"

