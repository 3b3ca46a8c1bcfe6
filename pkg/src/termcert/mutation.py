"""Single-point corruptions of certificates, for rejection testing.

Every mutant produced here breaks a side condition that no valid proof can
satisfy (a negative coefficient, a missing interpretation, a dropped pair, a
wrong SCC flag, a tampered remaining set, an emptiness claim on a nonempty
problem), so a sound checker must reject all of them.
"""

from __future__ import annotations

import dataclasses
from typing import Callable, Iterator

from .dp import compute_dps
from .poly import Polynomial, PolyInterpretation
from .proof import (
    Certificate,
    Component,
    DepGraphProc,
    DpTrans,
    Node,
    PEmpty,
    RedPairProc,
    REmpty,
    RuleRemoval,
)
from .terms import Name, Rule, Sharp, fun, symbols

# rules that cannot occur in any fixture; arities are fresh so signatures stay consistent
FOREIGN_RULE = Rule(fun("zz_foreign"), fun("zz_foreign"))
FOREIGN_PAIR = Rule(fun(Sharp(Name("zz_foreign"))), fun(Sharp(Name("zz_foreign"))))


def _replace_at(root: Node, path: tuple[int, ...], fn: Callable[[Node], Node]) -> Node:
    if not path:
        return fn(root)
    i, rest = path[0], path[1:]
    if isinstance(root, DepGraphProc):
        comps = list(root.components)
        comp = comps[i]
        comps[i] = dataclasses.replace(comp, sub=_replace_at(comp.sub, rest, fn))
        return DepGraphProc(tuple(comps))
    return dataclasses.replace(root, sub=_replace_at(root.sub, rest, fn))


def _interp_mutants(interp: PolyInterpretation, strict: bool) -> Iterator[tuple[str, PolyInterpretation]]:
    for f, (n, p) in interp.assign.items():
        for m, c in sorted(p.terms.items()):
            if c > 0:
                assign = dict(interp.assign)
                assign[f] = (n, Polynomial({**p.terms, m: -c}))
                yield f"negate coefficient of {f} at {m or 'constant'}", PolyInterpretation(assign)
        if strict:
            for i in range(1, n + 1):
                assign = dict(interp.assign)
                assign[f] = (n, Polynomial({**p.terms, ((i, 1),): 0}))
                yield f"zero linear coefficient X{i} of {f}", PolyInterpretation(assign)
        assign = dict(interp.assign)
        del assign[f]
        yield f"drop interpretation of {f}", PolyInterpretation(assign)


def _problem_symbols(rules) -> set:
    return {f for r in rules for side in (r.lhs, r.rhs) for f, _ in symbols(side)}


def mutants(cert: Certificate) -> Iterator[tuple[str, Certificate]]:
    """Yield ``(description, corrupted certificate)`` pairs."""

    def at(path, fn):
        return Certificate(cert.trs, _replace_at(cert.proof, path, fn))

    # walk with the rules each node is responsible for
    stack = [((), cert.proof, cert.trs.rules, None)]
    while stack:
        path, node, rules, dps = stack.pop()
        where = "/".join(map(str, path)) or "root"
        if isinstance(node, RuleRemoval):
            used = _problem_symbols(rules)
            for desc, interp in _interp_mutants(node.interp, strict=True):
                if "drop interpretation" in desc and not any(s not in interp for s in used):
                    continue
                yield f"{where}: {desc}", at(path, lambda n, i=interp: dataclasses.replace(n, interp=i))
            yield f"{where}: keep every rule", at(path, lambda n, r=rules: dataclasses.replace(n, remaining=tuple(r)))
            yield f"{where}: keep a foreign rule", at(
                path, lambda n: dataclasses.replace(n, remaining=n.remaining + (FOREIGN_RULE,)))
            if node.remaining:
                yield f"{where}: claim remaining system empty", at(path, lambda n: dataclasses.replace(n, sub=REmpty()))
            stack.append((path + (0,), node.sub, node.remaining, None))
        elif isinstance(node, DpTrans):
            refined, _ = compute_dps(cert.trs)
            for k, d in enumerate(node.dps):
                if d in refined:
                    yield f"{where}: delete pair {k}", at(
                        path, lambda n, k=k: dataclasses.replace(n, dps=n.dps[:k] + n.dps[k + 1:]))
            if node.dps:
                yield f"{where}: claim pair set empty", at(path, lambda n: dataclasses.replace(n, sub=PEmpty()))
            stack.append((path + (0,), node.sub, rules, node.dps))
        elif isinstance(node, DepGraphProc):
            for i, comp in enumerate(node.components):
                flipped = (Component(comp.dps, False) if comp.real_scc
                           else Component(comp.dps, True, PEmpty()))
                yield f"{where}: flip realScc of component {i}", at(
                    path, lambda n, i=i, c=flipped: DepGraphProc(n.components[:i] + (c,) + n.components[i + 1:]))
                for k in range(len(comp.dps)):
                    shrunk = dataclasses.replace(comp, dps=comp.dps[:k] + comp.dps[k + 1:])
                    yield f"{where}: delete pair {k} of component {i}", at(
                        path, lambda n, i=i, c=shrunk: DepGraphProc(n.components[:i] + (c,) + n.components[i + 1:]))
                if comp.sub is not None:
                    stack.append((path + (i,), comp.sub, rules, comp.dps))
        elif isinstance(node, RedPairProc):
            used = _problem_symbols(tuple(rules) + tuple(dps))
            for desc, interp in _interp_mutants(node.interp, strict=False):
                if "drop interpretation" in desc and not any(s not in interp for s in used):
                    continue
                yield f"{where}: {desc}", at(path, lambda n, i=interp: dataclasses.replace(n, interp=i))
            yield f"{where}: keep every pair", at(path, lambda n, d=dps: dataclasses.replace(n, remaining=tuple(d)))
            yield f"{where}: keep a foreign pair", at(
                path, lambda n: dataclasses.replace(n, remaining=n.remaining + (FOREIGN_PAIR,)))
            if node.remaining:
                yield f"{where}: claim remaining pairs empty", at(path, lambda n: dataclasses.replace(n, sub=PEmpty()))
            stack.append((path + (0,), node.sub, rules, node.remaining))
