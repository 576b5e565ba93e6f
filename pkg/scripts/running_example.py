"""Print every construction for one expression and write DOT files next to it.

    python3 scripts/running_example.py "(f(a,a)+g(b))*a.bf(g(a),b)" --out results/running
"""

import argparse
from pathlib import Path

from treeglushkov import export
from treeglushkov.automaton import is_isomorphic, quotient
from treeglushkov.compressed import is_isomorphic_compressed, quotient_compressed
from treeglushkov.constructions import ConstructionKind, construct, father_congruence
from treeglushkov.expr import linearize, parse
from treeglushkov.positions import position_table


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("expression", nargs="?", default="(f(a,a)+g(b))*a.bf(g(a),b)")
    ap.add_argument("--out", type=Path, default=Path("results/running"))
    args = ap.parse_args()

    lin = linearize(parse(args.expression))
    table = position_table(lin)
    print(f"linearized: {lin}\n")
    print(table.to_text(), "\n")

    autos = {k: construct(k, lin, table) for k in ConstructionKind}
    args.out.mkdir(parents=True, exist_ok=True)
    for kind, a in autos.items():
        print(f"== {kind.value} ==")
        print(export.to_text(a))
        (args.out / f"{kind.value}.dot").write_text(export.to_dot(a, name=kind.value))

    pi = father_congruence(lin, table)
    print("Father congruence blocks:", pi.sorted_blocks())
    P, F = autos[ConstructionKind.POSITION], autos[ConstructionKind.FATHER]
    CP, CF = autos[ConstructionKind.COMPRESSED_POSITION], autos[ConstructionKind.COMPRESSED_FATHER]
    print("F isomorphic to P/~:", is_isomorphic(F, quotient(P, pi)))
    print("CF isomorphic to CP/~:", is_isomorphic_compressed(CF, quotient_compressed(CP, pi)))
    print(f"DOT files in {args.out}/")


if __name__ == "__main__":
    main()
