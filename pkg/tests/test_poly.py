import random

from hypothesis import given, settings, strategies as st

import gen
from oracles import direct_value, eval_terms
from termcert.poly import (
    ArityMismatch,
    Polynomial as P,
    PolyInterpretation,
    UnassignedSymbol,
    check_ge,
    check_gt,
    check_monotone_strict,
    check_monotone_weak,
    interpret_term,
    poly_compose,
    poly_eval,
    rule_varmap,
)
from termcert.terms import Name, Var, fun

import pytest

X1, X2 = P.var(1), P.var(2)
x, y = Var("x"), Var("y")

PAPER_PHI = PolyInterpretation.of([
    (Name("add"), 2, 2 * X1 + X2),
    (Name("succ"), 1, X1 + 1),
    (Name("zero"), 0, P.const(1)),
])

coeffs = st.integers(min_value=-5, max_value=5)
mono_st = st.lists(st.tuples(st.integers(1, 3), st.integers(1, 2)), max_size=2).map(
    lambda es: tuple(sorted(dict(es).items())))
poly_st = st.dictionaries(mono_st, coeffs, max_size=4).map(P)


def test_ring_examples():
    assert (2 * X1 + X2) + (X1 + 1) == 3 * X1 + X2 + 1
    assert (X1 + 1) * (X1 + 1) == X1 * X1 + 2 * X1 + 1
    p = 3 * X1 * X2 - 7
    assert (p - p).terms == {}


def test_compose_examples():
    assert poly_compose(2 * X1 + X2, [X1 + 1, X2]) == 2 * X1 + X2 + 2
    assert poly_compose(2 * X1 + X2, [P.const(1), X1]) == X1 + 2
    p = X1 * X2 + 3
    assert poly_compose(X1, [p]) == p


def test_interpret_examples():
    vm = rule_varmap(fun("add", fun("succ", x), y))
    t = fun("add", fun("succ", x), y)
    assert interpret_term(PAPER_PHI, t, vm) == 2 * X1 + X2 + 2
    assert interpret_term(PAPER_PHI, y, {y: 3}) == P.var(3)
    assert interpret_term(PAPER_PHI, fun("zero"), {}) == P.const(1)


def test_interpret_errors():
    with pytest.raises(UnassignedSymbol):
        interpret_term(PAPER_PHI, fun("mul", x, y), {x: 1, y: 2})
    with pytest.raises(ArityMismatch):
        interpret_term(PAPER_PHI, fun("succ", x, y), {x: 1, y: 2})


def test_eval_examples():
    # 2*3 + 1 + 2
    assert poly_eval(2 * X1 + X2 + 2, {1: 3, 2: 1}) == 9
    assert poly_eval(P(), {1: 5}) == 0
    assert poly_eval(P.const(1), {}) == 1


def test_monotone_examples():
    assert check_monotone_strict(2 * X1 + X2, 2)
    assert not check_monotone_strict(X1, 2)
    assert check_monotone_strict(P.const(1), 0)
    assert check_monotone_weak(X1)
    assert not check_monotone_weak(X1 - 1)
    assert check_monotone_weak(P())


def test_order_examples():
    assert check_gt(X1 + 2, X1)
    assert check_gt(2 * X1 + X2 + 2, 2 * X1 + X2 + 1)
    assert not check_gt(X1, X1)
    assert check_ge(X1, X1)


def test_canonical_form_has_no_zero_coefficients():
    p = P({((1, 1),): 0, (): 3, ((2, 0),): 1})
    assert p.terms == {(): 4}
    assert P({((1, 1),): 2}) - P({((1, 1),): 2}) == P()


def test_interpretation_rejects_out_of_range_variables():
    with pytest.raises(ValueError):
        PolyInterpretation.of([(Name("f"), 1, X2)])


@given(poly_st, poly_st, poly_st)
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert p + q == q + p
    assert (p * q) * r == p * (q * r)
    assert p * q == q * p
    assert p * (q + r) == p * q + p * r
    assert p - p == P()


@given(poly_st, st.lists(poly_st, min_size=3, max_size=3), st.lists(st.integers(0, 6), min_size=3, max_size=3))
def test_compose_is_homomorphism(p, args, vals):
    alpha = dict(enumerate(vals, 1))
    inner = {i: poly_eval(a, alpha) for i, a in enumerate(args, 1)}
    assert poly_eval(poly_compose(p, args), alpha) == poly_eval(p, inner)


@settings(max_examples=200)
@given(poly_st, poly_st, st.lists(st.integers(0, 10), min_size=3, max_size=3))
def test_absolute_positiveness_is_sound(p, q, vals):
    alpha = dict(enumerate(vals, 1))
    if check_gt(p, q):
        assert poly_eval(p, alpha) > poly_eval(q, alpha)
    if check_ge(p, q):
        assert poly_eval(p, alpha) >= poly_eval(q, alpha)


@given(poly_st, st.lists(st.integers(0, 10), min_size=3, max_size=3))
def test_strict_monotonicity_criterion(p, vals):
    if check_monotone_strict(p, 3):
        alpha = dict(enumerate(vals, 1))
        for i in range(1, 4):
            bumped = {**alpha, i: alpha[i] + 1}
            assert poly_eval(p, bumped) > poly_eval(p, alpha)


def test_interpretation_matches_direct_evaluation():
    rng = random.Random(11)
    sig = {"f": 2, "g": 1, "a": 0, "b": 0}
    for _ in range(200):
        polys = {f: gen.polynomial(rng, n, lo=0, hi=5) for f, n in sig.items()}
        phi = PolyInterpretation.of([(Name(f), n, polys[f]) for f, n in sig.items()])
        funcs = {Name(f): (lambda p: lambda *a: eval_terms(p.terms, a))(polys[f]) for f in sig}
        t = gen.term(rng, rng.randint(0, 4))
        vm = rule_varmap(t)
        env = {v: rng.randint(0, 10) for v in vm}
        alpha = {i: env[v] for v, i in vm.items()}
        assert poly_eval(interpret_term(phi, t, vm), alpha) == direct_value(funcs, t, env)
