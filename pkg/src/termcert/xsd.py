"""XSD subset -> algebraic type IR, with dependency-ordered groups.

Only the schema constructs needed for CPF-like formats are understood:
``xs:element`` (``name``, ``ref`` or ``type``), ``xs:sequence``,
``xs:choice``, ``xs:group`` (``name`` or ``ref``) and ``xs:complexType`` as a
transparent wrapper.  Occurrence bounds are accepted on sequence items only.
Anything else is reported as unsupported.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional as Opt, Union

from .cpf import Element as XmlElement, IllFormed, ParseError, Unsupported, BadInteger, parse_xml
from .graph import ordered_components


class UnresolvedRef(ParseError):
    kind = "UnresolvedRef"

    def __init__(self, name: str, path=(), **pos):
        super().__init__(f"reference to undefined type {name!r}", path, **pos)
        self.name = name


# --- schema AST --------------------------------------------------------------

@dataclass(frozen=True)
class Element:
    name: str
    body: "XsdType"


@dataclass(frozen=True)
class Item:
    type: "XsdType"
    min: int = 1
    max: Opt[int] = 1  # None means unbounded


@dataclass(frozen=True)
class Sequence:
    items: tuple[Item, ...] = ()


@dataclass(frozen=True)
class Choice:
    alternatives: tuple["XsdType", ...]


@dataclass(frozen=True)
class GroupRef:
    name: str


@dataclass(frozen=True)
class Text:
    """Simple (text) content, e.g. ``type="xs:string"``."""

    type_name: str = "string"


XsdType = Union[Element, Sequence, Choice, GroupRef, Text]


@dataclass(frozen=True)
class XsdSchema:
    definitions: tuple[tuple[str, XsdType], ...] = ()


def _local(name: str) -> str:
    return name.rsplit(":", 1)[-1]


def _occurs(el: XmlElement) -> tuple[int, Opt[int]]:
    def nat(attr, default):
        raw = el.attrs.get(attr)
        if raw is None:
            return default
        raw = raw.strip()
        if attr == "maxOccurs" and raw == "unbounded":
            return None
        if not raw.isascii() or not raw.isdigit():
            raise BadInteger(f"bad {attr} value {raw[:20]!r}", el.path, **el.pos)
        return int(raw)

    lo, hi = nat("minOccurs", 1), nat("maxOccurs", 1)
    if hi == 0 or (hi is not None and lo > hi):
        raise IllFormed(f"occurrence bounds ({lo}, {hi}) are not supported", el.path, **el.pos)
    return lo, hi


def _no_occurs(el: XmlElement):
    for attr in ("minOccurs", "maxOccurs"):
        if attr in el.attrs:
            raise Unsupported(el.path, f"{attr} outside a sequence", **el.pos)


def _no_text(el: XmlElement):
    if el.text.strip():
        raise IllFormed("unexpected text in schema", el.path, **el.pos)


def _content(el: XmlElement) -> XsdType:
    """Body of an element or complexType: at most one particle child."""
    _no_text(el)
    if len(el.children) > 1:
        extra = el.children[1]
        raise Unsupported(extra.path, extra.tag, **extra.pos)
    if not el.children:
        return Sequence(())
    child = el.children[0]
    if child.tag == "complexType":
        if el.tag == "complexType":
            raise Unsupported(child.path, child.tag, **child.pos)
        return _content(child)
    _no_occurs(child)
    return _particle(child)


def _particle(el: XmlElement) -> XsdType:
    _no_text(el)
    if el.tag == "element":
        if "ref" in el.attrs:
            if el.children:
                raise Unsupported(el.children[0].path, el.children[0].tag, **el.children[0].pos)
            return GroupRef(_local(el.attrs["ref"]))
        name = el.attrs.get("name")
        if not name:
            raise IllFormed("element needs a name or ref", el.path, **el.pos)
        if "type" in el.attrs:
            if el.children:
                raise Unsupported(el.children[0].path, el.children[0].tag, **el.children[0].pos)
            return Element(name, Text(_local(el.attrs["type"])))
        return Element(name, _content(el))
    if el.tag == "group":
        if "ref" not in el.attrs or el.children:
            raise Unsupported(el.path, "inline group", **el.pos)
        return GroupRef(_local(el.attrs["ref"]))
    if el.tag == "sequence":
        items = []
        for c in el.children:
            lo, hi = _occurs(c)
            items.append(Item(_particle(c), lo, hi))
        return Sequence(tuple(items))
    if el.tag == "choice":
        alts = []
        for c in el.children:
            _no_occurs(c)
            alts.append(_particle(c))
        return Choice(tuple(alts))
    raise Unsupported(el.path, el.tag, **el.pos)


def _definition(el: XmlElement) -> tuple[str, XsdType]:
    _no_occurs(el)
    name = el.attrs.get("name")
    if el.tag not in ("element", "group"):
        raise Unsupported(el.path, el.tag, **el.pos)
    if not name or "ref" in el.attrs:
        raise IllFormed(f"top-level {el.tag} needs a name", el.path, **el.pos)
    if el.tag == "element":
        return name, _particle(el).body
    return name, _content(el)


def _refs(t: XsdType):
    if isinstance(t, GroupRef):
        yield t.name
    elif isinstance(t, Element):
        yield from _refs(t.body)
    elif isinstance(t, Sequence):
        for it in t.items:
            yield from _refs(it.type)
    elif isinstance(t, Choice):
        for a in t.alternatives:
            yield from _refs(a)


def parse_xsd(data: bytes | str) -> XsdSchema:
    if isinstance(data, str):
        data = data.encode("utf-8")
    root = parse_xml(data)
    if root.tag == "schema":
        _no_text(root)
        defs_xml = root.children
    else:
        defs_xml = [root]
    defs: dict[str, XsdType] = {}
    where: dict[str, XmlElement] = {}
    for el in defs_xml:
        name, body = _definition(el)
        if name in defs:
            raise IllFormed(f"type {name!r} defined twice", el.path, **el.pos)
        defs[name], where[name] = body, el
    for name, body in defs.items():
        for ref in _refs(body):
            if ref not in defs:
                el = where[name]
                raise UnresolvedRef(ref, el.path, **el.pos)
    return XsdSchema(tuple(defs.items()))


def parse_xsd_file(path) -> XsdSchema:
    with open(path, "rb") as fh:
        return parse_xsd(fh.read())


# --- type IR ---------------------------------------------------------------

@dataclass(frozen=True)
class Ref:
    name: str


@dataclass(frozen=True)
class Optional:
    field: "Field"


@dataclass(frozen=True)
class ListOf:
    field: "Field"


@dataclass(frozen=True)
class TextField:
    type_name: str = "string"


Field = Union[Ref, Optional, ListOf, TextField]


@dataclass(frozen=True)
class Product:
    fields: tuple[Field, ...] = ()


@dataclass(frozen=True)
class Sum:
    constructors: tuple[tuple[str, tuple[Field, ...]], ...]


TypeDef = Union[Product, Sum]


@dataclass(frozen=True)
class TypeIR:
    definitions: tuple[tuple[str, TypeDef], ...] = ()

    def names(self) -> list[str]:
        return [n for n, _ in self.definitions]

    def __getitem__(self, name: str) -> TypeDef:
        return dict(self.definitions)[name]


def _width(t: XsdType) -> int:
    """Number of fields ``t`` contributes when inlined into a product."""
    if isinstance(t, Sequence):
        return sum(_width(it.type) if (it.min, it.max) == (1, 1) else 1 for it in t.items)
    if isinstance(t, Element):
        return min(_width(t.body), 1)
    return 1


def _cap(name: str) -> str:
    return name[:1].upper() + name[1:]


class _Lowering:
    def __init__(self, schema: XsdSchema):
        self.taken = {n for n, _ in schema.definitions}
        self.out: list[tuple[str, TypeDef]] = []

    def fresh(self, base: str) -> str:
        name, k = base, 1
        while name in self.taken:
            k += 1
            name = f"{base}{k}"
        self.taken.add(name)
        return name

    def define(self, name: str, body: XsdType) -> None:
        slot = len(self.out)
        self.out.append((name, Product()))
        if isinstance(body, Choice):
            tags: set[str] = set()
            ctors = []
            for k, alt in enumerate(body.alternatives):
                label, fields = self.alternative(name, alt, k)
                tag, n = f"{_cap(name)}_{label}", 1
                while tag in tags:
                    n += 1
                    tag = f"{_cap(name)}_{label}{n}"
                tags.add(tag)
                ctors.append((tag, tuple(fields)))
            self.out[slot] = (name, Sum(tuple(ctors)))
        else:
            self.out[slot] = (name, Product(tuple(self.fields(name, body))))

    def alternative(self, owner: str, alt: XsdType, k: int) -> tuple[str, list[Field]]:
        if isinstance(alt, Element):
            return alt.name, self.fields(owner, alt.body)
        if isinstance(alt, GroupRef):
            return alt.name, [Ref(alt.name)]
        if isinstance(alt, Text):
            return alt.type_name, [TextField(alt.type_name)]
        return str(k), self.fields(owner, alt)

    def aux(self, owner: str, label: str, body: XsdType) -> Ref:
        name = self.fresh(f"{owner}_{label}")
        self.define(name, body)
        return Ref(name)

    def fields(self, owner: str, t: XsdType) -> list[Field]:
        if isinstance(t, Sequence):
            out: list[Field] = []
            for it in t.items:
                out += self.item(owner, it)
            return out
        if isinstance(t, GroupRef):
            return [Ref(t.name)]
        if isinstance(t, Text):
            return [TextField(t.type_name)]
        if isinstance(t, Element):
            if _width(t.body) <= 1:
                return self.fields(owner, t.body)
            return [self.aux(owner, t.name, t.body)]
        return [self.aux(owner, "choice", t)]

    def single(self, owner: str, t: XsdType) -> Field:
        if _width(t) == 1:
            return self.fields(owner, t)[0]
        if isinstance(t, Element):
            return self.aux(owner, t.name, t.body)
        return self.aux(owner, "seq", t)

    def item(self, owner: str, it: Item) -> list[Field]:
        if (it.min, it.max) == (1, 1):
            return self.fields(owner, it.type)
        f = self.single(owner, it.type)
        if (it.min, it.max) == (0, 1):
            return [Optional(f)]
        return [ListOf(f)]


def lower(schema: XsdSchema) -> TypeIR:
    """Choice becomes a sum with one constructor per alternative, sequence a product."""
    low = _Lowering(schema)
    for name, body in schema.definitions:
        low.define(name, body)
    # keep aux types right after their owner, owners in schema order
    return TypeIR(tuple(low.out))


def _field_refs(f: Field):
    if isinstance(f, Ref):
        yield f.name
    elif isinstance(f, (Optional, ListOf)):
        yield from _field_refs(f.field)


def references(td: TypeDef) -> set[str]:
    fields = td.fields if isinstance(td, Product) else tuple(x for _, fs in td.constructors for x in fs)
    return {r for f in fields for r in _field_refs(f)}


def dependency_edges(ir: TypeIR) -> set[tuple[str, str]]:
    """Edges ``U -> T`` meaning ``T`` has a constructor argument of type ``U``."""
    return {(u, t) for t, td in ir.definitions for u in references(td)}


def order_types(ir: TypeIR) -> list[list[str]]:
    names = ir.names()
    index = {n: i for i, n in enumerate(names)}
    edges = [(index[u], index[t]) for u, t in dependency_edges(ir)]
    return [[names[i] for i in comp] for comp in ordered_components(len(names), edges)]


def _render_field(f: Field) -> str:
    if isinstance(f, Ref):
        return f.name
    if isinstance(f, TextField):
        return f.type_name
    suffix = "option" if isinstance(f, Optional) else "list"
    return f"{_render_field(f.field)} {suffix}"


def _render_fields(fields) -> str:
    return " * ".join(_render_field(f) for f in fields) if fields else "unit"


def emit_ir(ir: TypeIR, order: list[list[str]] | None = None) -> str:
    if order is None:
        order = order_types(ir)
    defs = dict(ir.definitions)
    edges = dependency_edges(ir)
    blocks = []
    for k, group in enumerate(order, 1):
        recursive = len(group) > 1 or (group[0], group[0]) in edges
        lines = [f"group {k}: {' '.join(group)}" + (" (recursive)" if recursive else "")]
        for name in group:
            td = defs[name]
            if isinstance(td, Product):
                lines.append(f"  {name} = {_render_fields(td.fields)}")
            else:
                lines.append(f"  {name} =")
                for tag, fields in td.constructors:
                    lines.append(f"    | {tag} of {_render_fields(fields)}" if fields else f"    | {tag}")
        blocks.append("\n".join(lines) + "\n")
    return "\n".join(blocks)
