"""Ranked alphabets, finite ranked trees, and the tree-level father relation."""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Mapping, NamedTuple


@dataclass(frozen=True, order=True)
class Symbol:
    """A ranked symbol. ``index`` is set only on positions of a linearized expression."""

    name: str
    arity: int
    index: int | None = None

    def __post_init__(self):
        if not self.name:
            raise ValueError("symbol name must be non-empty")
        if self.arity < 0:
            raise ValueError(f"negative arity for {self.name!r}")

    def __str__(self) -> str:
        return self.name if self.index is None else f"{self.name}{self.index}"

    @property
    def base(self) -> Symbol:
        return self if self.index is None else Symbol(self.name, self.arity)


def sort_key(x) -> tuple:
    """Lexicographic key on display names, used for every serialized ordering."""
    return (str(x),)


class FatherPair(NamedTuple):
    parent: Symbol
    index: int  # 1-based child slot

    def __str__(self) -> str:
        return f"({self.parent},{self.index})"


class RankedAlphabet(Mapping[str, Symbol]):
    """Symbols keyed by display name. Names must be unique."""

    def __init__(self, symbols: Iterable[Symbol] = ()):
        table: dict[str, Symbol] = {}
        for s in symbols:
            key = str(s)
            if key in table and table[key] != s:
                raise ValueError(
                    f"symbol {key!r} declared with arities {table[key].arity} and {s.arity}"
                )
            table[key] = s
        self._table = dict(sorted(table.items()))

    @classmethod
    def from_arities(cls, arities: Mapping[str, int]) -> RankedAlphabet:
        return cls(Symbol(name, arity) for name, arity in arities.items())

    def __getitem__(self, name: str) -> Symbol:
        return self._table[name]

    def __iter__(self):
        return iter(self._table)

    def __len__(self) -> int:
        return len(self._table)

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}:{s.arity}" for k, s in self._table.items())
        return f"RankedAlphabet({inner})"

    @property
    def symbols(self) -> frozenset[Symbol]:
        return frozenset(self._table.values())

    def of_arity(self, n: int) -> list[Symbol]:
        return [s for s in self._table.values() if s.arity == n]

    def arities(self) -> dict[str, int]:
        return {k: s.arity for k, s in self._table.items()}


class Tree:
    """Immutable ordered ranked tree with structural equality.

    Hash and size are computed once; trees are meant to live in sets.
    """

    __slots__ = ("label", "children", "size", "_hash")

    def __init__(self, label: Symbol, children: Iterable[Tree] = ()):
        children = tuple(children)
        if len(children) != label.arity:
            raise ValueError(
                f"{label} has arity {label.arity} but got {len(children)} children"
            )
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "children", children)
        object.__setattr__(self, "size", 1 + sum(c.size for c in children))
        object.__setattr__(self, "_hash", hash((label, children)))

    def __setattr__(self, name, value):
        raise AttributeError("Tree is immutable")

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Tree) or self._hash != other._hash:
            return False
        return self.label == other.label and self.children == other.children

    def __repr__(self) -> str:
        return f"Tree({self})"

    def __str__(self) -> str:
        if not self.children:
            return str(self.label)
        return f"{self.label}({','.join(map(str, self.children))})"

    def subtrees(self) -> Iterator[Tree]:
        """Pre-order walk over all subtrees, the tree itself included."""
        stack = [self]
        while stack:
            t = stack.pop()
            yield t
            stack.extend(reversed(t.children))

    def symbols(self) -> set[Symbol]:
        return {s.label for s in self.subtrees()}

    def count(self, symbol: Symbol) -> int:
        return sum(1 for s in self.subtrees() if s.label == symbol)

    def relabel(self, phi: Mapping[Symbol, Symbol]) -> Tree:
        return Tree(phi[self.label], (c.relabel(phi) for c in self.children))


def leaf(symbol: Symbol) -> Tree:
    return Tree(symbol)


def root_of(t: Tree) -> Symbol:
    return t.label


def father_of_tree(t: Tree, f: Symbol) -> set[FatherPair]:
    """All (g, i) such that some g-node of ``t`` has an f-rooted i-th child."""
    return {
        FatherPair(s.label, i)
        for s in t.subtrees()
        for i, child in enumerate(s.children, start=1)
        if child.label == f
    }


def father_of_tree_recursive(t: Tree, f: Symbol) -> set[FatherPair]:
    """Same relation computed by decomposing on the root, child by child."""
    out: set[FatherPair] = set()
    for i, child in enumerate(t.children, start=1):
        out |= father_of_tree_recursive(child, f)
        if child.label == f:
            out.add(FatherPair(t.label, i))
    return out


def substitute_all(
    t: Tree, c: Symbol, candidates: Iterable[Tree], max_nodes: int | None = None
) -> set[Tree]:
    """Replace every occurrence of the nullary ``c`` independently by a candidate.

    With ``max_nodes`` set, only results of at most that many nodes are built.
    """
    if c.arity != 0:
        raise ValueError(f"substitution symbol {c} must be nullary")
    by_size = index_by_size(candidates)
    cap = max_nodes if max_nodes is not None else _unbounded(t, c, by_size)
    return substitute_indexed(t, c, by_size, cap)


def index_by_size(trees: Iterable[Tree]) -> dict[int, list[Tree]]:
    by_size: dict[int, list[Tree]] = {}
    for s in set(trees):
        by_size.setdefault(s.size, []).append(s)
    return by_size


def substitute_indexed(t: Tree, c: Symbol, by_size: dict[int, list[Tree]], cap: int) -> set[Tree]:
    """``substitute_all`` with candidates already grouped by size; for hot loops."""
    return {tree for _, tree in _substitute(t, c, by_size, cap, {})}


def _unbounded(t: Tree, c: Symbol, by_size: dict[int, list[Tree]]) -> int:
    biggest = max(by_size, default=1)
    return t.size + t.count(c) * biggest


def _min_size(t: Tree, c: Symbol, smallest: int | None, memo: dict) -> int | None:
    """Smallest result size reachable from ``t``; None when no result exists."""
    key = id(t)
    if key in memo:
        return memo[key]
    if t.label == c:
        out = smallest
    else:
        out = 1
        for child in t.children:
            m = _min_size(child, c, smallest, memo)
            if m is None:
                out = None
                break
            out += m
    memo[key] = out
    return out


def _substitute(t, c, by_size, cap, memo) -> list[tuple[int, Tree]]:
    smallest = min(by_size, default=None)
    mins: dict = {}

    def go(node: Tree, budget: int) -> list[tuple[int, Tree]]:
        if node.label == c:
            return [(n, s) for n, group in by_size.items() if n <= budget for s in group]
        if _min_size(node, c, smallest, mins) is None:
            return []
        if not node.children or c not in _leaf_labels(node, memo):
            return [(node.size, node)] if node.size <= budget else []
        child_mins = [_min_size(ch, c, smallest, mins) for ch in node.children]
        results: list[tuple[int, Tree]] = []

        def combine(i: int, used: int, acc: list[Tree]):
            if i == len(node.children):
                results.append((used + 1, Tree(node.label, acc)))
                return
            rest = sum(child_mins[i + 1 :])
            for n, sub in go(node.children[i], budget - 1 - used - rest):
                combine(i + 1, used + n, acc + [sub])

        combine(0, 0, [])
        return results

    return go(t, cap)


def _leaf_labels(t: Tree, memo: dict) -> frozenset[Symbol]:
    key = id(t)
    if key not in memo:
        if not t.children:
            memo[key] = frozenset((t.label,))
        else:
            memo[key] = frozenset().union(*(_leaf_labels(ch, memo) for ch in t.children))
    return memo[key]


def all_trees(symbols: Iterable[Symbol], max_nodes: int) -> Iterator[Tree]:
    """Every tree over ``symbols`` with at most ``max_nodes`` nodes, by increasing size."""
    symbols = sorted(set(symbols), key=sort_key)
    by_size: list[list[Tree]] = [[]]
    for n in range(1, max_nodes + 1):
        level: list[Tree] = []
        for s in symbols:
            for parts in compositions(n - 1, s.arity):
                for kids in product(*(by_size[p] for p in parts)):
                    level.append(Tree(s, kids))
        by_size.append(level)
        yield from level


def compositions(total: int, k: int) -> Iterator[tuple[int, ...]]:
    """Ordered ways of writing ``total`` as ``k`` positive parts."""
    if k == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - k + 2):
        for rest in compositions(total - first, k - 1):
            yield (first, *rest)


_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z$][A-Za-z0-9_]*)|(?P<punct>[(),]))")


class TreeSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        # 1-based: the first character of the input is at offset 1
        super().__init__(f"{message} at offset {offset + 1}")
        self.offset = offset + 1


def parse_tree(text: str, alphabet: Mapping[str, Symbol] | None = None) -> Tree:
    """Parse ``f(g(a),b)``. Without an alphabet, arities are read off the text."""
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise TreeSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start("name") if m.group("name") else m.start("punct")
        tokens.append((m.group("name") or m.group("punct"), start))
        pos = m.end()
    tokens.append(("", len(text)))
    i = 0

    def expect(tok: str):
        nonlocal i
        if tokens[i][0] != tok:
            raise TreeSyntaxError(f"expected {tok!r}", tokens[i][1])
        i += 1

    def node() -> Tree:
        nonlocal i
        name, at = tokens[i]
        if not name or name in "(),":
            raise TreeSyntaxError("expected a symbol", at)
        i += 1
        kids: list[Tree] = []
        if tokens[i][0] == "(":
            i += 1
            kids.append(node())
            while tokens[i][0] == ",":
                i += 1
                kids.append(node())
            expect(")")
        if alphabet is None:
            return Tree(Symbol(name, len(kids)), kids)
        if name not in alphabet:
            raise TreeSyntaxError(f"unknown symbol {name!r}", at)
        sym = alphabet[name]
        if sym.arity != len(kids):
            raise TreeSyntaxError(
                f"{name} expects {sym.arity} children, got {len(kids)}", at
            )
        return Tree(sym, kids)

    t = node()
    if tokens[i][0] != "":
        raise TreeSyntaxError("trailing input", tokens[i][1])
    return t
