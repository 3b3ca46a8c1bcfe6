"""Throw mutated fixtures at the parser and checker; report the outcome mix.

    python scripts/fuzz_parser.py --n 10000 --seed 0
"""

import argparse
import random
import sys
from collections import Counter
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

import gen  # noqa: E402
from termcert import cpf  # noqa: E402
from termcert.checker import check_certificate  # noqa: E402


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    sources = [p.read_bytes() for p in sorted((ROOT / "tests" / "fixtures").glob("*.cpf"))]
    outcomes = Counter()
    crashes = 0
    for _ in range(args.n):
        doc = gen.mutate_bytes(rng, rng.choice(sources))
        try:
            res = check_certificate(cpf.parse_cpf(doc))
            outcomes[type(res).__name__] += 1
        except cpf.ParseError as e:
            outcomes[e.kind] += 1
        except Exception as e:
            crashes += 1
            print(f"crash: {e!r}")
    for k, v in outcomes.most_common():
        print(f"{k:20} {v}")
    print(f"{'crashes':20} {crashes}")
    return 1 if crashes else 0


if __name__ == "__main__":
    raise SystemExit(main())
