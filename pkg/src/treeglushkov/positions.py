"""Root and Father position functions of a linear expression."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .expr import DOLLAR, Apply, LinearExpr, Product, Sum, is_linear, require_valid
from .trees import FatherPair, Symbol, Tree, sort_key

Fathers = dict[Symbol, frozenset[FatherPair]]


@dataclass(frozen=True)
class PositionTable:
    """Root set plus one Father set per position (nullary symbols included)."""

    root_set: frozenset[Symbol]
    father_sets: Mapping[Symbol, frozenset[FatherPair]]
    positions: frozenset[Symbol] = field(default=frozenset())

    def father(self, f: Symbol) -> frozenset[FatherPair]:
        if f not in self.positions:
            raise ValueError(f"{f} is not a position")
        return self.father_sets.get(f, frozenset())

    def augmented_father(self, f: Symbol) -> frozenset[FatherPair]:
        extra = {FatherPair(DOLLAR, 1)} if f in self.root_set else set()
        return self.father(f) | extra

    def origins(self, g: Symbol, i: int) -> frozenset[Symbol]:
        """Positions allowed as the i-th child of g: {f | (g, i) in Father(f)}."""
        pair = FatherPair(g, i)
        return frozenset(f for f in self.positions if pair in self.father(f))

    def to_json(self) -> dict:
        return {
            "root": sorted(map(str, self.root_set)),
            "father": {
                str(f): sorted([str(p.parent), p.index] for p in self.father(f))
                for f in sorted(self.positions, key=sort_key)
            },
        }

    def to_text(self) -> str:
        names = [str(f) for f in sorted(self.positions, key=sort_key)]
        width = max(len("Root"), *(len(n) + len("Father(,)") for n in names))
        lines = [f"{'Root':<{width}}  {{{','.join(sorted(map(str, self.root_set)))}}}"]
        for f in sorted(self.positions, key=sort_key):
            pairs = ",".join(map(str, sorted(self.father(f), key=_pair_key)))
            lines.append(f"{f'Father({f})':<{width}}  {{{pairs}}}")
        return "\n".join(lines)


def _pair_key(p: FatherPair) -> tuple:
    return (str(p.parent), p.index)


def _check(e: LinearExpr):
    require_valid(e.expr)
    if not is_linear(e.expr):
        raise ValueError("position functions need a linear expression")
    if DOLLAR in e.positions or any(p.name == DOLLAR.name for p in e.positions):
        raise ValueError("'$' must not occur in the expression")


def _walk(node) -> tuple[frozenset[Symbol], Fathers, frozenset[Symbol]]:
    """Returns (Root, Father, nullaries in the language) for a subexpression."""
    if isinstance(node, Apply):
        g = node.symbol
        fathers: dict[Symbol, set[FatherPair]] = {}
        for i, arg in enumerate(node.args, start=1):
            root, sub, _ = _walk(arg)
            for f, pairs in sub.items():
                fathers.setdefault(f, set()).update(pairs)
            for f in root:
                fathers.setdefault(f, set()).add(FatherPair(g, i))
        nulls = frozenset((g,)) if g.arity == 0 else frozenset()
        return frozenset((g,)), _freeze(fathers), nulls

    if isinstance(node, Sum):
        r1, f1, n1 = _walk(node.left)
        r2, f2, n2 = _walk(node.right)
        return r1 | r2, _union(f1, f2), n1 | n2

    if isinstance(node, Product):
        c = node.c
        r1, f1, n1 = _walk(node.left)
        r2, f2, n2 = _walk(node.right)
        c_in_left = c in n1
        root = (r1 - {c}) | r2 if c_in_left else r1
        empty = frozenset()
        above_c = f1.get(c, empty)
        fathers = {}
        for f in set(f1) | set(f2) | r2:
            pairs = set(f2.get(f, empty))
            if f != c:
                pairs |= f1.get(f, empty)
            if f in r2:
                pairs |= above_c
            fathers[f] = pairs
        nulls = {x for x in n1 if x != c} | (n2 if c_in_left else set())
        return root, _freeze(fathers), frozenset(nulls)

    # Star
    c = node.c
    r1, f1, n1 = _walk(node.inner)
    empty = frozenset()
    above_c = f1.get(c, empty)
    fathers = {}
    for f in set(f1) | r1:
        pairs = set(f1.get(f, empty))
        if f in r1:
            pairs |= above_c
        fathers[f] = pairs
    return r1 | {c}, _freeze(fathers), n1 | {c}


def _freeze(d) -> Fathers:
    return {k: frozenset(v) for k, v in d.items() if v}


def _union(a: Fathers, b: Fathers) -> Fathers:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, frozenset()) | v
    return out


def position_table(e: LinearExpr) -> PositionTable:
    """Compute Root and every Father set in one bottom-up pass over the AST."""
    _check(e)
    root, fathers, _ = _walk(e.expr)
    return PositionTable(root, fathers, e.positions)


def root_set(e: LinearExpr) -> frozenset[Symbol]:
    return position_table(e).root_set


def father_set(e: LinearExpr, f: Symbol) -> frozenset[FatherPair]:
    return position_table(e).father(f)


def augmented_father_set(e: LinearExpr, f: Symbol) -> frozenset[FatherPair]:
    """Father set of f in $(e): adds ($, 1) exactly when f is a root."""
    return position_table(e).augmented_father(f)


def satisfies_p(e: LinearExpr | PositionTable, t: Tree) -> bool:
    """Every parent/child edge (f, i) -> root(t_i) of t is allowed by Father."""
    table = e if isinstance(e, PositionTable) else position_table(e)
    foreign = t.symbols() - table.positions
    if foreign:
        raise ValueError(f"symbols {sorted(map(str, foreign))} are not positions")
    for s in t.subtrees():
        for i, child in enumerate(s.children, start=1):
            if FatherPair(s.label, i) not in table.father(child.label):
                return False
    return True


def membership_by_characterization(e: LinearExpr | PositionTable, t: Tree) -> bool:
    table = e if isinstance(e, PositionTable) else position_table(e)
    return satisfies_p(table, t) and t.label in table.root_set
