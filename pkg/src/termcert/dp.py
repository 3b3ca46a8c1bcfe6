"""Dependency pairs, dependency-graph estimation and SCC decomposition."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .graph import ordered_components
from .terms import Fun, Name, Rule, Sharp, Symbol, Term, Trs, Var, subterms, symbols, unify


class MarkError(ValueError):
    pass


class RootIsVariable(MarkError):
    pass


class AlreadyMarked(MarkError):
    pass


class SharpInInput(ValueError):
    pass


def defined_symbols(trs: Trs) -> set[Symbol]:
    return {rule.lhs.symbol for rule in trs.rules}


def mark(t: Term) -> Fun:
    if isinstance(t, Var):
        raise RootIsVariable(f"cannot mark variable {t}")
    if isinstance(t.symbol, Sharp):
        raise AlreadyMarked(f"{t} is already marked")
    return Fun(Sharp(t.symbol), t.args)


def unmark(t: Term) -> Fun:
    if isinstance(t, Var) or not isinstance(t.symbol, Sharp):
        raise MarkError(f"{t} is not marked")
    return Fun(t.symbol.base, t.args)


def has_sharp(t: Term) -> bool:
    return any(_contains_sharp(f) for f, _ in symbols(t))


def _contains_sharp(f: Symbol) -> bool:
    while not isinstance(f, Name):
        if isinstance(f, Sharp):
            return True
        f = f.base
    return False


def is_dp_shaped(rule: Rule) -> bool:
    """Both sides sharp-rooted, with no sharp symbol below either root."""
    for side in (rule.lhs, rule.rhs):
        if isinstance(side, Var) or not isinstance(side.symbol, Sharp):
            return False
        if _contains_sharp(side.symbol.base) or any(has_sharp(a) for a in side.args):
            return False
    return True


def compute_dps(trs: Trs) -> tuple[tuple[Rule, ...], tuple[Rule, ...]]:
    """Return ``(refined, full)`` dependency pairs, deduplicated, in rule order.

    ``full`` takes every defined-rooted subterm of each right-hand side;
    ``refined`` drops those that also occur as a subterm of some argument of
    the left-hand side.
    """
    if any(has_sharp(r.lhs) or has_sharp(r.rhs) for r in trs.rules):
        raise SharpInInput("rules already contain marked symbols")
    defined = defined_symbols(trs)
    full: dict[Rule, None] = {}
    refined: dict[Rule, None] = {}
    for rule in trs.rules:
        lhs_sub = {u for a in rule.lhs.args for u in subterms(a)}
        for u in subterms(rule.rhs):
            if isinstance(u, Fun) and u.symbol in defined:
                dp = Rule(mark(rule.lhs), mark(u))
                full[dp] = None
                if u not in lhs_sub:
                    refined[dp] = None
    return tuple(refined), tuple(full)


@dataclass(frozen=True)
class DpProblem:
    dps: tuple[Rule, ...]
    trs: Trs

    def __post_init__(self):
        for dp in self.dps:
            if not is_dp_shaped(dp):
                raise ValueError(f"{dp} is not a marked pair")
        for rule in self.trs.rules:
            if has_sharp(rule.lhs) or has_sharp(rule.rhs):
                raise ValueError(f"rule {rule} contains a marked symbol")


@dataclass(frozen=True)
class DepGraph:
    n: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        for i, j in self.edges:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i},{j}) out of range")


def cap(t: Term, defined: set[Symbol], fresh) -> Term:
    """Replace each proper subterm with a defined root by a fresh variable."""
    if isinstance(t, Var):
        return t
    return Fun(t.symbol, tuple(_cap_arg(a, defined, fresh) for a in t.args))


def _cap_arg(t: Term, defined: set[Symbol], fresh) -> Term:
    if isinstance(t, Fun) and t.symbol in defined:
        return fresh()
    return cap(t, defined, fresh)


def ren(t: Term, fresh) -> Term:
    """Replace every variable occurrence by a distinct fresh variable."""
    if isinstance(t, Var):
        return fresh()
    return Fun(t.symbol, tuple(ren(a, fresh) for a in t.args))


def _rename(t: Term, prefix: str) -> Term:
    if isinstance(t, Var):
        return Var(prefix + t.name)
    return Fun(t.symbol, tuple(_rename(a, prefix) for a in t.args))


def estimate_graph(dps: Sequence[Rule], trs: Trs) -> DepGraph:
    defined = defined_symbols(trs)
    counter = itertools.count()

    def fresh() -> Var:
        # the "a" / "b" prefixes keep both unification sides variable-disjoint
        return Var(f"a{next(counter)}")

    capped = [ren(cap(dp.rhs, defined, fresh), fresh) for dp in dps]
    lhss = [_rename(dp.lhs, "b") for dp in dps]
    edges = set()
    for i, r in enumerate(capped):
        for j, l in enumerate(lhss):
            if unify(r, l) is not None:
                edges.add((i, j))
    return DepGraph(len(dps), frozenset(edges))


@dataclass(frozen=True)
class Scc:
    nodes: frozenset[int]
    trivial: bool


def sccs(g: DepGraph) -> list[Scc]:
    """SCCs in topological order of the condensation (sources first)."""
    out = []
    for comp in ordered_components(g.n, g.edges):
        trivial = len(comp) == 1 and (comp[0], comp[0]) not in g.edges
        out.append(Scc(frozenset(comp), trivial))
    return out
