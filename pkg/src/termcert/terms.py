"""First-order terms, rules, substitutions, matching, unification and rewriting."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterator, Mapping, Sequence, Union


# --- symbols -----------------------------------------------------------------

@dataclass(frozen=True)
class Name:
    ident: str

    def __str__(self) -> str:
        return self.ident


@dataclass(frozen=True)
class Sharp:
    base: "Symbol"

    def __str__(self) -> str:
        return f"{self.base}#"


@dataclass(frozen=True)
class Labeled:
    base: "Symbol"
    # opaque, hashable payload (the parser stores a canonical tuple tree)
    label: Any

    def __str__(self) -> str:
        return f"{self.base}{{{self.label!r}}}"


Symbol = Union[Name, Sharp, Labeled]


def sharp_depth(f: Symbol) -> int:
    depth = 0
    while not isinstance(f, Name):
        if isinstance(f, Sharp):
            depth += 1
        f = f.base
    return depth


def is_labeled(f: Symbol) -> bool:
    while not isinstance(f, Name):
        if isinstance(f, Labeled):
            return True
        f = f.base
    return False


# --- terms -------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("variable name must be nonempty")

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Fun:
    symbol: Symbol
    args: tuple["Term", ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return str(self.symbol)
        return f"{self.symbol}({','.join(map(str, self.args))})"


Term = Union[Var, Fun]
Position = tuple[int, ...]
Substitution = dict[Var, Term]


def fun(name: str | Symbol, *args: Term) -> Fun:
    """Convenience constructor: ``fun("add", x, y)``."""
    sym = Name(name) if isinstance(name, str) else name
    return Fun(sym, tuple(args))


def variables(t: Term) -> set[Var]:
    out: set[Var] = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Var):
            out.add(u)
        else:
            stack.extend(u.args)
    return out


def symbols(t: Term) -> Iterator[tuple[Symbol, int]]:
    """Yield ``(symbol, argument count)`` for every function occurrence."""
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Fun):
            yield u.symbol, len(u.args)
            stack.extend(u.args)


def subterms(t: Term) -> Iterator[Term]:
    """Pre-order enumeration of all subterms, ``t`` itself first."""
    yield t
    if isinstance(t, Fun):
        for a in t.args:
            yield from subterms(a)


def positions(t: Term) -> Iterator[Position]:
    yield ()
    if isinstance(t, Fun):
        for i, a in enumerate(t.args):
            for p in positions(a):
                yield (i,) + p


class InvalidPosition(ValueError):
    pass


def subterm_at(t: Term, p: Position) -> Term:
    for i in p:
        if isinstance(t, Var) or not 0 <= i < len(t.args):
            raise InvalidPosition(p)
        t = t.args[i]
    return t


def replace_at(t: Term, p: Position, u: Term) -> Term:
    if not p:
        return u
    if isinstance(t, Var) or not 0 <= p[0] < len(t.args):
        raise InvalidPosition(p)
    i = p[0]
    args = t.args[:i] + (replace_at(t.args[i], p[1:], u),) + t.args[i + 1:]
    return Fun(t.symbol, args)


# --- rules and systems -------------------------------------------------------

class InvalidRule(ValueError):
    pass


@dataclass(frozen=True)
class Rule:
    lhs: Term
    rhs: Term

    def __post_init__(self):
        if isinstance(self.lhs, Var):
            raise InvalidRule(f"left-hand side of {self} is a variable")
        extra = variables(self.rhs) - variables(self.lhs)
        if extra:
            names = ", ".join(sorted(v.name for v in extra))
            raise InvalidRule(f"right-hand side of {self} has extra variables {names}")

    def __str__(self) -> str:
        return f"{self.lhs} -> {self.rhs}"


class ArityConflict(ValueError):
    def __init__(self, symbol: Symbol, n1: int, n2: int):
        super().__init__(f"symbol {symbol} used with arities {n1} and {n2}")
        self.symbol, self.n1, self.n2 = symbol, n1, n2


def infer_signature(rules: Sequence[Rule]) -> dict[Symbol, int]:
    arity: dict[Symbol, int] = {}
    for rule in rules:
        for side in (rule.lhs, rule.rhs):
            for f, n in symbols(side):
                m = arity.setdefault(f, n)
                if m != n:
                    raise ArityConflict(f, m, n)
    return arity


@dataclass(frozen=True)
class Trs:
    rules: tuple[Rule, ...]
    arity: Mapping[Symbol, int] = field(compare=False, hash=False, repr=False)

    @classmethod
    def of(cls, rules: Sequence[Rule]) -> "Trs":
        rules = tuple(rules)
        return cls(rules, infer_signature(rules))

    def __len__(self) -> int:
        return len(self.rules)


# --- substitutions -----------------------------------------------------------

def apply_subst(s: Mapping[Var, Term], t: Term) -> Term:
    if isinstance(t, Var):
        return s.get(t, t)
    if not t.args:
        return t
    return Fun(t.symbol, tuple(apply_subst(s, a) for a in t.args))


def compose(r: Mapping[Var, Term], s: Mapping[Var, Term]) -> Substitution:
    """The substitution applying ``r`` first, then ``s``."""
    out = {x: apply_subst(s, t) for x, t in r.items()}
    for x, t in s.items():
        out.setdefault(x, t)
    return {x: t for x, t in out.items() if t != x}


def match_term(pattern: Term, subject: Term) -> Substitution | None:
    s: Substitution = {}
    todo = [(pattern, subject)]
    while todo:
        p, u = todo.pop()
        if isinstance(p, Var):
            bound = s.get(p)
            if bound is None:
                s[p] = u
            elif bound != u:
                return None
        elif isinstance(u, Var) or p.symbol != u.symbol or len(p.args) != len(u.args):
            return None
        else:
            todo.extend(zip(p.args, u.args))
    return s


def _occurs(x: Var, t: Term) -> bool:
    return x in variables(t)


def unify(t: Term, u: Term) -> Substitution | None:
    """Most general unifier with occurs check; the result is idempotent."""
    s: Substitution = {}
    todo = [(t, u)]
    while todo:
        a, b = todo.pop()
        a, b = apply_subst(s, a), apply_subst(s, b)
        if a == b:
            continue
        if isinstance(b, Var) and not isinstance(a, Var):
            a, b = b, a
        if isinstance(a, Var):
            if _occurs(a, b):
                return None
            single = {a: b}
            s = {x: apply_subst(single, v) for x, v in s.items()}
            s[a] = b
        elif a.symbol != b.symbol or len(a.args) != len(b.args):
            return None
        else:
            todo.extend(zip(a.args, b.args))
    return s


# --- rewriting ---------------------------------------------------------------

def rewrite_step(trs: Trs | Sequence[Rule], t: Term) -> set[Term]:
    rules = trs.rules if isinstance(trs, Trs) else tuple(trs)
    out: set[Term] = set()
    for rule in rules:
        s = match_term(rule.lhs, t)
        if s is not None:
            out.add(apply_subst(s, rule.rhs))
    if isinstance(t, Fun):
        for i, a in enumerate(t.args):
            for r in rewrite_step(rules, a):
                out.add(Fun(t.symbol, t.args[:i] + (r,) + t.args[i + 1:]))
    return out
