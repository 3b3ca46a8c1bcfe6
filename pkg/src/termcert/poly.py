"""Sparse multivariate integer polynomials and polynomial interpretations.

Polynomials are always kept in canonical expanded form: a mapping from
monomials to nonzero integer coefficients.  A monomial is a sorted tuple of
``(variable index, exponent)`` pairs with positive exponents; variable
indices are 1-based and the empty tuple is the constant monomial.

Orderings are decided by absolute positiveness, which is sound but
incomplete for valuations over the naturals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .terms import Symbol, Term, Var

Monomial = tuple[tuple[int, int], ...]

ONE: Monomial = ()


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    exps = dict(a)
    for i, e in b:
        exps[i] = exps.get(i, 0) + e
    return tuple(sorted(exps.items()))


class Polynomial:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        acc: dict[Monomial, int] = {}
        for m, c in (terms or {}).items():
            key = tuple(sorted((i, e) for i, e in m if e))
            acc[key] = acc.get(key, 0) + c
        self.terms: dict[Monomial, int] = {m: c for m, c in acc.items() if c}
        self._hash = None

    @classmethod
    def const(cls, c: int) -> "Polynomial":
        return cls({ONE: c})

    @classmethod
    def var(cls, i: int) -> "Polynomial":
        if i < 1:
            raise ValueError("variable indices are 1-based")
        return cls({((i, 1),): 1})

    def __eq__(self, other):
        if isinstance(other, int):
            other = Polynomial.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        return poly_add(self, _lift(other))

    __radd__ = __add__

    def __sub__(self, other):
        return poly_sub(self, _lift(other))

    def __rsub__(self, other):
        return poly_sub(_lift(other), self)

    def __mul__(self, other):
        return poly_mul(self, _lift(other))

    __rmul__ = __mul__

    def __neg__(self):
        return Polynomial({m: -c for m, c in self.terms.items()})

    def __pow__(self, k: int):
        out = Polynomial.const(1)
        for _ in range(k):
            out = out * self
        return out

    def coefficient(self, m: Monomial) -> int:
        return self.terms.get(m, 0)

    def indices(self) -> set[int]:
        return {i for m in self.terms for i, _ in m}

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (-sum(e for _, e in m), m)):
            c = self.terms[m]
            mono = "*".join(f"X{i}" if e == 1 else f"X{i}^{e}" for i, e in m)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def _lift(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, int):
        return Polynomial.const(x)
    raise TypeError(f"cannot use {type(x).__name__} as a polynomial")


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    out = dict(p.terms)
    for m, c in q.terms.items():
        out[m] = out.get(m, 0) + c
    return Polynomial(out)


def poly_sub(p: Polynomial, q: Polynomial) -> Polynomial:
    out = dict(p.terms)
    for m, c in q.terms.items():
        out[m] = out.get(m, 0) - c
    return Polynomial(out)


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    out: dict[Monomial, int] = {}
    for m1, c1 in p.terms.items():
        for m2, c2 in q.terms.items():
            m = _mono_mul(m1, m2)
            out[m] = out.get(m, 0) + c1 * c2
    return Polynomial(out)


def poly_compose(p: Polynomial, args: list[Polynomial] | tuple[Polynomial, ...]) -> Polynomial:
    """Substitute ``args[i-1]`` for ``X_i`` simultaneously and expand."""
    powers: dict[tuple[int, int], Polynomial] = {}
    result = Polynomial()
    for m, c in p.terms.items():
        acc = Polynomial.const(c)
        for i, e in m:
            if i > len(args):
                raise ValueError(f"X{i} has no argument to substitute")
            key = (i, e)
            if key not in powers:
                powers[key] = args[i - 1] ** e
            acc = acc * powers[key]
        result = result + acc
    return result


def poly_eval(p: Polynomial, alpha: Mapping[int, int]) -> int:
    total = 0
    for m, c in p.terms.items():
        v = c
        for i, e in m:
            v *= alpha[i] ** e
        total += v
    return total


# --- syntactic criteria --------------------------------------------------------

def check_monotone_weak(p: Polynomial) -> bool:
    return all(c >= 0 for c in p.terms.values())


def check_monotone_strict(p: Polynomial, n: int) -> bool:
    if not check_monotone_weak(p):
        return False
    return all(p.coefficient(((i, 1),)) >= 1 for i in range(1, n + 1))


def check_ge(p: Polynomial, q: Polynomial) -> bool:
    return check_monotone_weak(p - q)


def check_gt(p: Polynomial, q: Polynomial) -> bool:
    return check_monotone_weak(p - q - 1)


# --- interpretations ---------------------------------------------------------

class InterpretationError(Exception):
    pass


class UnassignedSymbol(InterpretationError):
    def __init__(self, symbol: Symbol):
        super().__init__(f"no interpretation for symbol {symbol}")
        self.symbol = symbol


class ArityMismatch(InterpretationError):
    def __init__(self, symbol: Symbol, declared: int, used: int):
        super().__init__(f"symbol {symbol} interpreted with arity {declared} but used with {used} arguments")
        self.symbol, self.declared, self.used = symbol, declared, used


@dataclass(frozen=True)
class PolyInterpretation:
    """Per-symbol ``(arity, polynomial over X1..Xn)`` assignment."""

    assign: Mapping[Symbol, tuple[int, Polynomial]]

    def __post_init__(self):
        for f, (n, p) in self.assign.items():
            if n < 0:
                raise ValueError(f"negative arity for {f}")
            bad = [i for i in p.indices() if i > n]
            if bad:
                raise ValueError(f"polynomial for {f} mentions X{max(bad)} but arity is {n}")

    @classmethod
    def of(cls, items: Iterable[tuple[Symbol, int, Polynomial]]) -> "PolyInterpretation":
        assign: dict[Symbol, tuple[int, Polynomial]] = {}
        for f, n, p in items:
            if f in assign:
                raise ValueError(f"symbol {f} interpreted twice")
            assign[f] = (n, p)
        return cls(assign)

    def __eq__(self, other):
        if not isinstance(other, PolyInterpretation):
            return NotImplemented
        return dict(self.assign) == dict(other.assign)

    def __hash__(self):
        return hash(frozenset(self.assign.items()))

    def __contains__(self, f: Symbol) -> bool:
        return f in self.assign

    def __getitem__(self, f: Symbol) -> tuple[int, Polynomial]:
        return self.assign[f]


def interpret_term(phi: PolyInterpretation, t: Term, varmap: Mapping[Var, int]) -> Polynomial:
    if isinstance(t, Var):
        return Polynomial.var(varmap[t])
    if t.symbol not in phi:
        raise UnassignedSymbol(t.symbol)
    n, p = phi[t.symbol]
    if n != len(t.args):
        raise ArityMismatch(t.symbol, n, len(t.args))
    return poly_compose(p, [interpret_term(phi, a, varmap) for a in t.args])


def rule_varmap(*terms: Term) -> dict[Var, int]:
    """Number the variables of the given terms 1, 2, ... in first-occurrence order."""
    varmap: dict[Var, int] = {}

    def walk(t: Term):
        if isinstance(t, Var):
            varmap.setdefault(t, len(varmap) + 1)
        else:
            for a in t.args:
                walk(a)

    for t in terms:
        walk(t)
    return varmap
