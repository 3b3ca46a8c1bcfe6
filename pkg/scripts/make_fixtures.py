"""Regenerate the machine-built certificate fixtures under tests/fixtures/.

    python scripts/make_fixtures.py

The hand-written fixtures (add_polyint, add_dp, loop_ab, ...) are not touched.
"""

from pathlib import Path

from termcert.checker import check_certificate
from termcert.cpf import serialize_cpf
from termcert.dp import compute_dps
from termcert.poly import Polynomial as P, PolyInterpretation
from termcert.proof import Certificate, Component, DepGraphProc, DpTrans, PEmpty, RedPairProc, REmpty, RuleRemoval
from termcert.terms import Name, Rule, Sharp, Trs, Var, fun

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

x, y = Var("x"), Var("y")
X1, X2 = P.var(1), P.var(2)
zero = fun("zero")

ADD = [
    Rule(fun("add", zero, x), x),
    Rule(fun("add", fun("succ", x), y), fun("succ", fun("add", x, y))),
]
MUL = [
    Rule(fun("mul", zero, y), zero),
    Rule(fun("mul", fun("succ", x), y), fun("add", fun("mul", x, y), y)),
]


def interp(**polys):
    items = []
    for name, (n, p) in polys.items():
        sym = Sharp(Name(name[:-1])) if name.endswith("_") else Name(name)
        items.append((sym, n, p))
    return PolyInterpretation.of(items)


def add_two_step():
    # first [add] = X1 + X2 only removes the zero rule, the succ rule is kept weakly
    first = interp(add=(2, X1 + X2), succ=(1, X1 + 1), zero=(0, P.const(1)))
    second = interp(add=(2, 2 * X1 + X2), succ=(1, X1 + 1))
    proof = RuleRemoval(first, (ADD[1],), RuleRemoval(second, (), REmpty()))
    return Certificate(Trs.of(ADD), proof)


def mul_dp():
    trs = Trs.of(ADD + MUL)
    refined, _ = compute_dps(trs)
    by_root = {}
    for d in refined:
        by_root.setdefault((d.lhs.symbol, d.rhs.symbol), d)
    add_add = by_root[(Sharp(Name("add")), Sharp(Name("add")))]
    mul_add = by_root[(Sharp(Name("mul")), Sharp(Name("add")))]
    mul_mul = by_root[(Sharp(Name("mul")), Sharp(Name("mul")))]
    base = dict(add=(2, X1 + X2), succ=(1, X1 + 1), zero=(0, P.const(0)), mul=(2, X1 * X2 + X1 + X2))
    comps = (
        Component((mul_mul,), True,
                  RedPairProc(interp(mul_=(2, X1), **base), (), PEmpty())),
        Component((mul_add,), False),
        Component((add_add,), True,
                  RedPairProc(interp(add_=(2, X1), **base), (), PEmpty())),
    )
    proof = DpTrans(refined, DepGraphProc(comps))
    return Certificate(trs, proof)


def mul_redpair_first():
    """Remove the mul pairs first with one reduction pair, then decompose what is left."""
    trs = Trs.of(ADD + MUL)
    refined, _ = compute_dps(trs)
    add_add = next(d for d in refined if d.lhs.symbol == Sharp(Name("add")))
    base = dict(add=(2, X1 + X2), succ=(1, X1 + 1), zero=(0, P.const(0)), mul=(2, X1 * X2 + X1 + X2))
    # [add#] = 0 makes both mul pairs strict and keeps the add pair weakly
    first = interp(mul_=(2, X1 + 1), add_=(2, P.const(0)), **base)
    inner = DepGraphProc((Component((add_add,), True, RedPairProc(interp(add_=(2, X1), **base), (), PEmpty())),))
    return Certificate(trs, DpTrans(refined, RedPairProc(first, (add_add,), inner)))


def main():
    built = {
        "add_two_step": add_two_step(),
        "mul_dp": mul_dp(),
        "mul_redpair_first": mul_redpair_first(),
    }
    for name, cert in built.items():
        verdict = check_certificate(cert)
        print(f"{name}: {verdict}")
        (OUT / f"{name}.cpf").write_bytes(serialize_cpf(cert))


if __name__ == "__main__":
    main()
