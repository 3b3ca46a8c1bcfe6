"""Corrupt every certified fixture in every supported way and tabulate the verdicts.

    python scripts/mutation_sweep.py [FIXTURE.cpf ...]
"""

import argparse
from collections import Counter
from pathlib import Path

from termcert.checker import Ko, check_certificate
from termcert.cpf import parse_cpf_file
from termcert.mutation import mutants

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"
DEFAULT = ["add_polyint", "add_dp", "add_two_step", "mul_dp", "mul_redpair_first"]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("files", nargs="*", type=Path)
    ap.add_argument("-v", "--verbose", action="store_true", help="print every mutant")
    args = ap.parse_args()
    files = args.files or [FIXTURES / f"{n}.cpf" for n in DEFAULT]
    escaped = 0
    for path in files:
        kinds = Counter()
        n = 0
        for desc, bad in mutants(parse_cpf_file(path)):
            n += 1
            res = check_certificate(bad)
            kinds[res.kind if isinstance(res, Ko) else str(res)] += 1
            if not isinstance(res, Ko):
                escaped += 1
                print(f"  ESCAPED {path.stem}: {desc} -> {res}")
            elif args.verbose:
                print(f"  {desc} -> {res.kind} at {res.where}")
        summary = ", ".join(f"{k} {v}" for k, v in sorted(kinds.items()))
        print(f"{path.stem}: {n} mutants ({summary})")
    print(f"escaped: {escaped}")
    return 1 if escaped else 0


if __name__ == "__main__":
    raise SystemExit(main())
