"""Certificate and proof-tree types."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .poly import PolyInterpretation
from .terms import Rule, Trs


@dataclass(frozen=True)
class REmpty:
    tag = "rIsEmpty"


@dataclass(frozen=True)
class RuleRemoval:
    interp: PolyInterpretation
    remaining: tuple[Rule, ...]
    sub: "Proof"
    tag = "ruleRemoval"


@dataclass(frozen=True)
class DpTrans:
    dps: tuple[Rule, ...]
    sub: "DpProof"
    tag = "dpTrans"


@dataclass(frozen=True)
class PEmpty:
    tag = "pIsEmpty"


@dataclass(frozen=True)
class Component:
    dps: tuple[Rule, ...]
    real_scc: bool
    sub: Optional["DpProof"] = None

    def __post_init__(self):
        if self.real_scc and self.sub is None:
            raise ValueError("a real SCC component needs a subproof")
        if not self.real_scc and self.sub is not None:
            raise ValueError("a trivial component carries no subproof")


@dataclass(frozen=True)
class DepGraphProc:
    components: tuple[Component, ...]
    tag = "depGraphProc"


@dataclass(frozen=True)
class RedPairProc:
    interp: PolyInterpretation
    remaining: tuple[Rule, ...]
    sub: "DpProof"
    tag = "redPairProc"


Proof = Union[REmpty, RuleRemoval, DpTrans]
DpProof = Union[PEmpty, DepGraphProc, RedPairProc]
Node = Union[Proof, DpProof]


@dataclass(frozen=True)
class Certificate:
    trs: Trs
    proof: Proof


def children(node: Node) -> list[tuple[int, Node]]:
    """Child proof nodes with the index used for them in proof paths.

    For a dependency-graph node the index is the component's position;
    trivial components have no child and are skipped.
    """
    if isinstance(node, (RuleRemoval, DpTrans, RedPairProc)):
        return [(0, node.sub)]
    if isinstance(node, DepGraphProc):
        return [(i, c.sub) for i, c in enumerate(node.components) if c.sub is not None]
    return []


def node_at(root: Node, path: tuple[int, ...]) -> Node:
    node = root
    for i in path:
        node = dict(children(node))[i]
    return node


def render_path(root: Node, path: tuple[int, ...]) -> str:
    """Human-readable path such as ``proof/dpTrans/depGraphProc/component[0]/redPairProc``."""
    parts = ["proof"]
    node = root
    parts.append(node.tag)
    for i in path:
        if isinstance(node, DepGraphProc):
            parts.append(f"component[{i}]")
        node = dict(children(node))[i]
        parts.append(node.tag)
    return "/".join(parts)


def walk(root: Node, path: tuple[int, ...] = ()) -> Iterator[tuple[tuple[int, ...], Node]]:
    yield path, root
    for i, child in children(root):
        yield from walk(child, path + (i,))
