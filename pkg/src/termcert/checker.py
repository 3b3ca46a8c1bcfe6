"""Proof-tree verification.

``check_certificate`` walks the proof tree and validates the side conditions
of every step.  It never raises for a bad certificate: the outcome is an
``Ok``, a ``Ko`` naming the failing node (as a path of child indices) and the
reason, or an ``Unsupported`` for features outside the verified fragment.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from . import dp as dpmod
from .poly import (
    PolyInterpretation,
    check_ge,
    check_gt,
    check_monotone_strict,
    check_monotone_weak,
    interpret_term,
    rule_varmap,
)
from .proof import (
    Certificate,
    DepGraphProc,
    DpProof,
    DpTrans,
    Node,
    PEmpty,
    Proof,
    RedPairProc,
    REmpty,
    RuleRemoval,
    render_path,
)
from .terms import Rule, Symbol, Trs, is_labeled, sharp_depth, symbols


@dataclass(frozen=True)
class Ok:
    def __str__(self):
        return "CERTIFIED"


@dataclass(frozen=True)
class Ko:
    kind: str
    message: str
    path: tuple[int, ...] = ()
    where: str = ""
    detail: str = ""
    rule: Optional[Rule] = None

    def __str__(self):
        return f"REJECTED: {self.where}: {self.message}"


@dataclass(frozen=True)
class Unsupported:
    element: str
    path: tuple[int, ...] = ()
    where: str = ""

    def __str__(self):
        return f"UNSUPPORTED: {self.where}: {self.element}"


CheckResult = Union[Ok, Ko, Unsupported]


class _Stop(Exception):
    def __init__(self, result: Ko | Unsupported):
        self.result = result


def _ko(kind: str, message: str, path, detail: str = "", rule: Rule | None = None):
    raise _Stop(Ko(kind, message, path, detail=detail, rule=rule))


def _rules_symbols(rules: Iterable[Rule]) -> dict[Symbol, int]:
    out: dict[Symbol, int] = {}
    for r in rules:
        for side in (r.lhs, r.rhs):
            for f, n in symbols(side):
                out.setdefault(f, n)
    return out


def _count(n: int, noun: str) -> str:
    return f"{n} {noun}" if n == 1 else f"{n} {noun}s"


def _dedupe(rules: Iterable[Rule]) -> tuple[Rule, ...]:
    return tuple(dict.fromkeys(rules))


class Checker:
    """One verification run.  ``jobs > 1`` checks sibling SCC subproofs in threads."""

    def __init__(self, jobs: int = 1, trace: list[str] | None = None):
        self.jobs = max(1, jobs)
        self.trace = trace

    def _log(self, path, msg: str):
        if self.trace is not None:
            self.trace.append("  " * len(path) + msg)

    def _fork(self) -> "Checker":
        return Checker(self.jobs, [] if self.trace is not None else None)

    # -- shared side conditions ------------------------------------------------

    def _screen(self, path, rules: Iterable[Rule], interp: PolyInterpretation | None = None):
        syms = list(_rules_symbols(rules))
        if interp is not None:
            syms += list(interp.assign)
        for f in syms:
            if is_labeled(f):
                raise _Stop(Unsupported("labeledSymbol", path))
        for f in syms:
            if sharp_depth(f) > 1:
                _ko("NestedSharp", f"symbol {f} is marked more than once", path)

    def _coverage(self, path, interp: PolyInterpretation, rules: Iterable[Rule]):
        for f, n in _rules_symbols(rules).items():
            if f not in interp:
                _ko("UnassignedSymbol", f"no interpretation for symbol {f}", path)
            declared, _ = interp[f]
            if declared != n:
                _ko("ArityMismatch", f"symbol {f} interpreted with arity {declared} but has arity {n}", path)

    def _compare(self, path, interp, rule: Rule, strict: bool, what: str):
        vm = rule_varmap(rule.lhs, rule.rhs)
        left = interpret_term(interp, rule.lhs, vm)
        right = interpret_term(interp, rule.rhs, vm)
        ok = check_gt(left, right) if strict else check_ge(left, right)
        rel = ">" if strict else ">="
        self._log(path, f"{'ok' if ok else 'FAIL'}: {what}: [{rule.lhs}] = {left} {rel} {right} = [{rule.rhs}]")
        if not ok:
            adverb = "strictly" if strict else "weakly"
            _ko("NotStrict" if strict else "NotWeak", f"{what} not {adverb} decreasing", path,
                detail=f"{rule}: {left} {rel} {right} fails", rule=rule)

    # -- TRS proofs --------------------------------------------------------------

    def trs_proof(self, trs: Trs, proof: Proof, path=()):
        if isinstance(proof, REmpty):
            self._log(path, f"rIsEmpty ({_count(len(trs), 'rule')})")
            self._screen(path, trs.rules)
            if trs.rules:
                _ko("NonEmpty", f"system is not empty: {trs.rules[0]}", path, rule=trs.rules[0])
        elif isinstance(proof, RuleRemoval):
            self._log(path, f"ruleRemoval ({_count(len(trs), 'rule')}, {len(proof.remaining)} remaining)")
            self.rule_removal(trs, proof, path)
        elif isinstance(proof, DpTrans):
            self._log(path, f"dpTrans ({_count(len(proof.dps), 'pair')})")
            self.dp_trans(trs, proof, path)
        else:
            raise _Stop(Unsupported(type(proof).__name__, path))

    def rule_removal(self, trs: Trs, node: RuleRemoval, path):
        interp, remaining = node.interp, node.remaining
        self._screen(path, trs.rules + remaining, interp)
        for f, (n, p) in interp.assign.items():
            if not check_monotone_strict(p, n):
                _ko("NotMonotone", f"interpretation of {f} is not strictly monotone", path, detail=str(p))
        self._coverage(path, interp, trs.rules)
        self._log(path, "ok: interpretation strictly monotone and covers the system")
        current = set(trs.rules)
        for r in remaining:
            if r not in current:
                _ko("NotSubset", f"remaining rule {r} is not in the current system", path, rule=r)
        kept = set(remaining)
        for k, r in enumerate(trs.rules, 1):
            if r not in kept:
                self._compare(path, interp, r, True, f"rule {k}")
        for k, r in enumerate(trs.rules, 1):
            if r in kept:
                self._compare(path, interp, r, False, f"rule {k}")
        if kept >= current:
            _ko("NoProgress", "no rule removed", path)
        self.trs_proof(Trs.of(_dedupe(remaining)), node.sub, path + (0,))

    def dp_trans(self, trs: Trs, node: DpTrans, path):
        self._screen(path, trs.rules + node.dps)
        for r in trs.rules:
            if dpmod.has_sharp(r.lhs) or dpmod.has_sharp(r.rhs):
                _ko("SharpInTrs", f"rule {r} already contains marked symbols", path, rule=r)
        refined, full = dpmod.compute_dps(trs)
        given = set(node.dps)
        for d in refined:
            if d not in given:
                _ko("MissingDp", f"missing dependency pair {d}", path, rule=d)
        full_set = set(full)
        for d in node.dps:
            if d not in full_set:
                _ko("AlienDp", f"{d} is not a dependency pair", path, rule=d)
        self._log(path, f"ok: {_count(len(refined), 'required pair')} present, none foreign")
        problem = dpmod.DpProblem(_dedupe(node.dps), trs)
        self.dp_proof(problem, node.sub, path + (0,))

    # -- DP proofs ---------------------------------------------------------------

    def dp_proof(self, problem: dpmod.DpProblem, proof: DpProof, path):
        if isinstance(proof, PEmpty):
            self._log(path, f"pIsEmpty ({_count(len(problem.dps), 'pair')})")
            self._screen(path, problem.dps)
            if problem.dps:
                _ko("NonEmpty", f"pair set is not empty: {problem.dps[0]}", path, rule=problem.dps[0])
        elif isinstance(proof, DepGraphProc):
            self._log(path, f"depGraphProc ({_count(len(proof.components), 'component')})")
            self.dep_graph(problem, proof, path)
        elif isinstance(proof, RedPairProc):
            self._log(path, f"redPairProc ({_count(len(problem.dps), 'pair')}, {len(proof.remaining)} remaining)")
            self.red_pair(problem, proof, path)
        else:
            raise _Stop(Unsupported(type(proof).__name__, path))

    def dep_graph(self, problem: dpmod.DpProblem, node: DepGraphProc, path):
        self._screen(path, problem.dps + tuple(d for c in node.components for d in c.dps))
        graph = dpmod.estimate_graph(problem.dps, problem.trs)
        sccs = [(frozenset(problem.dps[i] for i in s.nodes), s.trivial) for s in dpmod.sccs(graph)]
        unused = dict(sccs)
        for i, comp in enumerate(node.components):
            dps = frozenset(comp.dps)
            if dps not in unused:
                _ko("ComponentMismatch", f"component {i} is not an SCC of the estimated graph", path,
                    detail=", ".join(map(str, comp.dps)))
            trivial = unused.pop(dps)
            if comp.real_scc == trivial:
                flag = "true" if comp.real_scc else "false"
                _ko("FlagMismatch", f"component {i} has realScc={flag} but is "
                    f"{'trivial' if trivial else 'a real SCC'}", path)
        if unused:
            missing = next(iter(unused))
            _ko("ComponentMismatch", "SCC not covered by any component", path,
                detail=", ".join(sorted(map(str, missing))))
        self._log(path, f"ok: components match the {_count(len(sccs), 'SCC')} of the estimated graph")
        jobs = [(i, dpmod.DpProblem(_dedupe(c.dps), problem.trs), c.sub)
                for i, c in enumerate(node.components) if c.sub is not None]
        if self.jobs > 1 and len(jobs) > 1:
            self._parallel(jobs, path)
        else:
            for i, sub_problem, sub in jobs:
                self.dp_proof(sub_problem, sub, path + (i,))

    def _parallel(self, jobs, path):
        forks = [self._fork() for _ in jobs]

        def run(fork, job):
            i, sub_problem, sub = job
            try:
                fork.dp_proof(sub_problem, sub, path + (i,))
            except _Stop as stop:
                return stop
            return None

        with ThreadPoolExecutor(max_workers=self.jobs) as pool:
            outcomes = list(pool.map(run, forks, jobs))
        for fork, stop in zip(forks, outcomes):
            if self.trace is not None:
                self.trace.extend(fork.trace)
            if stop is not None:
                raise stop

    def red_pair(self, problem: dpmod.DpProblem, node: RedPairProc, path):
        interp, remaining = node.interp, node.remaining
        self._screen(path, problem.trs.rules + problem.dps + remaining, interp)
        for f, (n, p) in interp.assign.items():
            if not check_monotone_weak(p):
                _ko("NotMonotone", f"interpretation of {f} is not weakly monotone", path, detail=str(p))
        self._coverage(path, interp, problem.trs.rules + problem.dps)
        self._log(path, "ok: interpretation weakly monotone and covers the problem")
        for k, r in enumerate(problem.trs.rules, 1):
            self._compare(path, interp, r, False, f"rule {k}")
        current = set(problem.dps)
        for r in remaining:
            if r not in current:
                _ko("NotSubset", f"remaining pair {r} is not in the current problem", path, rule=r)
        kept = set(remaining)
        for k, d in enumerate(problem.dps, 1):
            self._compare(path, interp, d, d not in kept, f"pair {k}")
        if kept >= current:
            _ko("NoProgress", "no pair removed", path)
        self.dp_proof(dpmod.DpProblem(_dedupe(remaining), problem.trs), node.sub, path + (0,))


def _finish(root: Node, run) -> CheckResult:
    try:
        run()
    except _Stop as stop:
        res = stop.result
        where = render_path(root, res.path)
        if isinstance(res, Ko):
            return Ko(res.kind, res.message, res.path, where, res.detail, res.rule)
        return Unsupported(res.element, res.path, where)
    return Ok()


def check_certificate(cert: Certificate, jobs: int = 1, trace: list[str] | None = None) -> CheckResult:
    checker = Checker(jobs, trace)
    return _finish(cert.proof, lambda: checker.trs_proof(cert.trs, cert.proof))


def check_empty(trs: Trs) -> CheckResult:
    return _finish(REmpty(), lambda: Checker().trs_proof(trs, REmpty()))


def check_rule_removal(trs: Trs, interp: PolyInterpretation, remaining: Sequence[Rule],
                       sub: Proof) -> CheckResult:
    node = RuleRemoval(interp, tuple(remaining), sub)
    return _finish(node, lambda: Checker().trs_proof(trs, node))


def check_dp_trans(trs: Trs, dps: Sequence[Rule], sub: DpProof) -> CheckResult:
    node = DpTrans(tuple(dps), sub)
    return _finish(node, lambda: Checker().trs_proof(trs, node))


def check_dp_proof(problem: dpmod.DpProblem, proof: DpProof) -> CheckResult:
    return _finish(proof, lambda: Checker().dp_proof(problem, proof, ()))
