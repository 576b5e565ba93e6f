"""Cross-validate the constructions on a range of random expressions.

    python3 scripts/sweep.py --seeds 200 --max-nodes 9 --out results/sweep.csv

Writes one CSV row per seed and prints aggregate numbers at the end.
"""

from __future__ import annotations

import argparse
import csv
import statistics
import time
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from treeglushkov.constructions import father_automaton, position_automaton
from treeglushkov.expr import linearize
from treeglushkov.oracle import EnumerationBound, cross_validate, random_expression
from treeglushkov.positions import position_table


@dataclass
class SweepConfig:
    seeds: int = 200
    seed_start: int = 0
    max_positions: int = 6
    max_nodes: int = 9
    exhaustive: bool = False
    out: Path = Path("results/sweep.csv")


@dataclass
class Row:
    seed: int
    positions: int
    position_states: int
    father_states: int
    language_size: int
    trees_checked: int
    ok: bool
    seconds: float
    expression: str


def run_seed(seed: int, cfg: SweepConfig) -> Row:
    e = random_expression(seed, cfg.max_positions)
    lin = linearize(e)
    table = position_table(lin)
    start = time.perf_counter()
    report = cross_validate(e, EnumerationBound(cfg.max_nodes), table, exhaustive=cfg.exhaustive)
    elapsed = time.perf_counter() - start
    return Row(
        seed=seed,
        positions=len(lin.positions),
        position_states=len(position_automaton(lin, table).states),
        father_states=len(father_automaton(lin, table).states),
        language_size=report.language_size,
        trees_checked=report.trees_checked,
        ok=report.ok,
        seconds=round(elapsed, 4),
        expression=str(e),
    )


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f in fields(SweepConfig):
        flag = "--" + f.name.replace("_", "-")
        if f.type == "bool":
            ap.add_argument(flag, action="store_true")
        else:
            ap.add_argument(flag, type=Path if f.type == "Path" else int, default=f.default)
    cfg = SweepConfig(**vars(ap.parse_args()))

    rows = [run_seed(s, cfg) for s in range(cfg.seed_start, cfg.seed_start + cfg.seeds)]
    cfg.out.parent.mkdir(parents=True, exist_ok=True)
    with cfg.out.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=[f.name for f in fields(Row)])
        w.writeheader()
        w.writerows(asdict(r) for r in rows)

    failures = [r.seed for r in rows if not r.ok]
    merged = [r.position_states - r.father_states for r in rows]
    print(f"config: {asdict(cfg)}")
    print(f"expressions: {len(rows)}  failures: {failures or 'none'}")
    print(f"trees checked: {sum(r.trees_checked for r in rows)}")
    print(f"states merged by the Father congruence: mean {statistics.mean(merged):.2f}, max {max(merged)}")
    print(f"expressions with at least one merge: {sum(m > 0 for m in merged)}")
    print(f"total time: {sum(r.seconds for r in rows):.1f}s, wrote {cfg.out}")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
