"""JSON, DOT and plain-text renderings of automata.

All collections are emitted in lexicographic order so output is byte-stable.
"""

from __future__ import annotations

import json

from .automaton import Transition, TreeAutomaton
from .compressed import CompressedTransition, CompressedTreeAutomaton
from .trees import RankedAlphabet, Symbol

Automaton = TreeAutomaton | CompressedTreeAutomaton


def to_json_dict(a: Automaton) -> dict:
    out = {
        "alphabet": a.alphabet.arities(),
        "states": sorted(a.states),
        "finals": sorted(a.finals),
    }
    if isinstance(a, CompressedTreeAutomaton):
        out["transitions"] = [
            {
                "originSets": [sorted(q) for q in t.origin_sets],
                "symbol": str(t.symbol),
                "targets": sorted(t.targets),
            }
            for t in a.sorted_transitions()
        ]
    else:
        out["transitions"] = [
            {"origins": list(t.origins), "symbol": str(t.symbol), "target": t.target}
            for t in a.sorted_transitions()
        ]
    return out


def to_json(a: Automaton) -> str:
    return json.dumps(to_json_dict(a), indent=2, sort_keys=True)


def from_json(data: str | dict) -> Automaton:
    """Inverse of :func:`to_json`; symbols come back unindexed, named by display name."""
    if isinstance(data, str):
        data = json.loads(data)
    alphabet = RankedAlphabet(Symbol(k, v) for k, v in data["alphabet"].items())
    trans = data["transitions"]
    if any("originSets" in t for t in trans):
        return CompressedTreeAutomaton(
            alphabet,
            frozenset(data["states"]),
            frozenset(data["finals"]),
            frozenset(
                CompressedTransition(
                    tuple(frozenset(q) for q in t["originSets"]),
                    alphabet[t["symbol"]],
                    frozenset(t["targets"]),
                )
                for t in trans
            ),
        )
    return TreeAutomaton(
        alphabet,
        frozenset(data["states"]),
        frozenset(data["finals"]),
        frozenset(Transition(tuple(t["origins"]), alphabet[t["symbol"]], t["target"]) for t in trans),
    )


def _q(s: str) -> str:
    return json.dumps(s)


def to_dot(a: Automaton, name: str = "automaton") -> str:
    """Hyperedges become a small junction node: dashed slot edges in, one edge out."""
    lines = [f"digraph {_q(name)} {{", "  rankdir=BT;", "  node [shape=circle];"]
    for s in sorted(a.states):
        shape = "doublecircle" if s in a.finals else "circle"
        lines.append(f"  {_q(s)} [shape={shape}];")
    for n, t in enumerate(a.sorted_transitions()):
        junction = f"t{n}"
        if isinstance(t, CompressedTransition):
            slots, targets = t.origin_sets, sorted(t.targets)
        else:
            slots, targets = [[o] for o in t.origins], [t.target]
        if not slots:
            lines.append(f'  {junction} [shape=none, label=""];')
        else:
            lines.append(f'  {junction} [shape=point, width=0.08];')
        for q in targets:
            lines.append(f"  {junction} -> {_q(q)} [label={_q(str(t.symbol))}];")
        for i, members in enumerate(slots, start=1):
            for s in sorted(members):
                lines.append(
                    f"  {_q(s)} -> {junction} [style=dashed, arrowhead=none, label={_q(str(i))}];"
                )
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_text(a: Automaton) -> str:
    lines = [
        "states: " + " ".join(sorted(a.states)),
        "finals: " + " ".join(sorted(a.finals)),
        f"transitions ({len(a.transitions)}):",
    ]
    lines += [f"  {t}" for t in a.sorted_transitions()]
    if isinstance(a, CompressedTreeAutomaton):
        dead = a.dead_transitions()
        if dead:
            lines.append(f"dead transitions ({len(dead)}):")
            lines += [f"  {t}" for t in dead]
    return "\n".join(lines) + "\n"
