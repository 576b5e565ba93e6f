"""Brute-force ground truth: bounded language enumeration and cross-validation."""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterator

from .automaton import delta_on_sets, run_tree
from .compressed import CompressedTreeAutomaton, compressed_step, run_compressed
from .constructions import ConstructionKind, construct, construct_general
from .expr import (
    Apply,
    Expr,
    LinearExpr,
    Product,
    Star,
    Sum,
    linearize,
    require_valid,
    symbols_of,
)
from .positions import PositionTable, membership_by_characterization, position_table
from .trees import (
    FatherPair,
    RankedAlphabet,
    Symbol,
    Tree,
    all_trees,
    compositions,
    father_of_tree,
    index_by_size,
    sort_key,
    substitute_indexed,
)


@dataclass(frozen=True)
class EnumerationBound:
    max_nodes: int
    max_star_iterations: int | None = None

    def __post_init__(self):
        if self.max_nodes < 1:
            raise ValueError("max_nodes must be at least 1")
        if self.max_star_iterations is None:
            # round k only adds trees of >= k nodes; one extra round confirms the fixpoint
            object.__setattr__(self, "max_star_iterations", self.max_nodes + 1)
        if self.max_star_iterations < 1:
            raise ValueError("max_star_iterations must be at least 1")


def calibrated_bound(e: LinearExpr) -> EnumerationBound:
    return EnumerationBound(max(9, 2 * len(e.positions)))


def _as_bound(b: EnumerationBound | int) -> EnumerationBound:
    return b if isinstance(b, EnumerationBound) else EnumerationBound(b)


def _expr(e: Expr | LinearExpr) -> Expr:
    return e.expr if isinstance(e, LinearExpr) else e


# --- enumeration -----------------------------------------------------------

def enumerate_language(e: Expr | LinearExpr, bound: EnumerationBound | int) -> frozenset[Tree]:
    """All trees of L(e) with at most ``bound.max_nodes`` nodes."""
    e = _expr(e)
    require_valid(e)
    bound = _as_bound(bound)
    return frozenset(_enum(e, bound))


def _enum(e: Expr, bound: EnumerationBound) -> set[Tree]:
    n = bound.max_nodes
    if isinstance(e, Apply):
        return _apply(e.symbol, [_enum(a, bound) for a in e.args], n)
    if isinstance(e, Sum):
        return _enum(e.left, bound) | _enum(e.right, bound)
    if isinstance(e, Product):
        right = index_by_size(_enum(e.right, bound))
        out: set[Tree] = set()
        for t in _enum(e.left, bound):
            out |= substitute_indexed(t, e.c, right, n)
        return out
    return _star(_enum(e.inner, bound), e.c, bound)


def _apply(f: Symbol, child_sets: list[set[Tree]], n: int) -> set[Tree]:
    by_size = []
    for s in child_sets:
        groups: dict[int, list[Tree]] = defaultdict(list)
        for t in s:
            groups[t.size].append(t)
        by_size.append(groups)
    out = set()
    for total in range(f.arity, n):
        for parts in compositions(total, f.arity):
            for kids in product(*(g.get(p, ()) for g, p in zip(by_size, parts))):
                out.add(Tree(f, kids))
    return out


def _star(inner: set[Tree], c: Symbol, bound: EnumerationBound) -> set[Tree]:
    """Least fixpoint of U = {c} | inner ._c U, truncated to the node bound."""
    base = Tree(c)
    current = {base}
    for _ in range(bound.max_star_iterations):
        nxt = {base}
        index = index_by_size(current)
        for t in inner:
            nxt |= substitute_indexed(t, c, index, bound.max_nodes)
        if nxt == current:
            return current
        current = nxt
    raise RuntimeError(
        f"star over {c} did not stabilise within {bound.max_star_iterations} rounds"
    )


def father_via_enumeration(
    e: Expr | LinearExpr, f: Symbol, bound: EnumerationBound | int
) -> frozenset[FatherPair]:
    out: set[FatherPair] = set()
    for t in enumerate_language(e, bound):
        out |= father_of_tree(t, f)
    return frozenset(out)


def root_via_enumeration(e: Expr | LinearExpr, bound: EnumerationBound | int) -> frozenset[Symbol]:
    return frozenset(t.label for t in enumerate_language(e, bound))


# --- semantic membership ---------------------------------------------------

def member(e: Expr | LinearExpr, t: Tree) -> bool:
    """Decide t in L(e) straight from the language equations, without enumeration."""
    memo: dict = {}
    return _member(_expr(e), t, memo)


def _member(e: Expr, t: Tree, memo: dict) -> bool:
    key = (id(e), t)
    if key in memo:
        return memo[key]
    memo[key] = False  # cycles cannot occur, but keep the entry well defined
    if isinstance(e, Apply):
        out = t.label == e.symbol and all(
            _member(a, ch, memo) for a, ch in zip(e.args, t.children)
        )
    elif isinstance(e, Sum):
        out = _member(e.left, t, memo) or _member(e.right, t, memo)
    elif isinstance(e, Product):
        out = any(
            all(_member(e.right, s, memo) for s in holes) and _member(e.left, top, memo)
            for top, holes in _cuts(t, e.c, allow_root=True)
        )
    else:
        c = e.c
        if t == Tree(c):
            out = True
        else:
            out = any(
                all(_member(e, s, memo) for s in holes) and _member(e.inner, top, memo)
                for top, holes in _cuts(t, c, allow_root=False)
            )
    memo[key] = out
    return out


def _cuts(t: Tree, c: Symbol, allow_root: bool) -> Iterator[tuple[Tree, list[Tree]]]:
    """Ways to write t as top[c <- holes]; every c in top marks a hole."""
    hole = Tree(c)
    if t == hole:
        yield hole, [t]
        return
    if allow_root:
        yield hole, [t]
    options = [list(_cuts(ch, c, allow_root=True)) for ch in t.children]
    for picks in product(*options):
        yield Tree(t.label, [p[0] for p in picks]), [s for p in picks for s in p[1]]


# --- random expressions ----------------------------------------------------

DEFAULT_ALPHABET = RankedAlphabet.from_arities({"a": 0, "b": 0, "g": 1, "f": 2, "h": 3})


def random_expression(
    seed: int,
    max_positions: int = 6,
    alphabet: RankedAlphabet = DEFAULT_ALPHABET,
    max_depth: int = 8,
) -> Expr:
    """Seed-reproducible valid expression with at most ``max_positions`` positions.

    A position budget is drawn first and split among the subexpressions, so
    every generated expression has at least one position when the alphabet
    allows it.
    """
    nullaries = sorted(alphabet.of_arity(0), key=sort_key)
    if not nullaries:
        raise ValueError("alphabet needs at least one nullary symbol")
    ranked = sorted((s for s in alphabet.symbols if s.arity >= 1), key=sort_key)
    rng = random.Random(seed)

    def split(k: int, parts: int) -> list[int]:
        cuts = sorted(rng.randint(0, k) for _ in range(parts - 1))
        return [b - a for a, b in zip([0, *cuts], [*cuts, k])]

    def subscript(e: Expr) -> Symbol:
        inside = sorted((s for s in symbols_of(e) if s.arity == 0), key=sort_key)
        return rng.choice(inside if inside and rng.random() < 0.8 else nullaries)

    def gen(k: int, depth: int) -> Expr:
        if k == 0 or depth >= max_depth:
            roll = rng.random()
            if k > 0:
                return Apply(ranked[0], tuple(Apply(nullaries[0]) for _ in range(ranked[0].arity)))
            if roll < 0.7 or depth >= max_depth:
                return Apply(rng.choice(nullaries))
            if roll < 0.85:
                return Sum(gen(0, depth + 1), gen(0, depth + 1))
            return Star(gen(0, depth + 1), rng.choice(nullaries))
        kind = rng.choices(["apply", "sum", "product", "star"], [5, 2, 2, 2])[0]
        if kind == "apply":
            f = rng.choice(ranked)
            return Apply(f, tuple(gen(n, depth + 1) for n in split(k - 1, f.arity)))
        if kind == "sum":
            left, right = split(k, 2)
            return Sum(gen(left, depth + 1), gen(right, depth + 1))
        if kind == "star":
            inner = gen(k, depth + 1)
            return Star(inner, subscript(inner))
        left_k, right_k = split(k, 2)
        left = gen(left_k, depth + 1)
        c = rng.choice(sorted((s for s in symbols_of(left) if s.arity == 0), key=sort_key))
        return Product(left, c, gen(right_k, depth + 1))

    e = gen(rng.randint(1, max_positions) if ranked else 0, 0)
    require_valid(e)
    return e


# --- cross-validation ------------------------------------------------------

@dataclass
class ValidationReport:
    expression: str
    bound: EnumerationBound
    trees_checked: int = 0
    language_size: int = 0
    per_construction: dict[str, bool] = field(
        default_factory=lambda: {k.value: True for k in ConstructionKind}
    )
    characterization: bool = True
    delta_equality: bool = True
    position_functions: bool = True
    position_functions_exact: bool = True
    first_counterexample: Tree | None = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return (
            all(self.per_construction.values())
            and self.characterization
            and self.delta_equality
            and self.position_functions
        )

    def fail(self, tree: Tree | None, detail: str):
        if self.first_counterexample is None and tree is not None:
            self.first_counterexample = tree
        if not self.detail:
            self.detail = detail

    def summary(self) -> str:
        flags = " ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in self.per_construction.items())
        status = "ok" if self.ok else "FAIL"
        extra = f" counterexample={self.first_counterexample}" if self.first_counterexample else ""
        return (
            f"{status:4} trees={self.trees_checked} lang={self.language_size} {flags} "
            f"char={'ok' if self.characterization else 'FAIL'} "
            f"delta={'ok' if self.delta_equality else 'FAIL'} "
            f"pos={'ok' if self.position_functions else 'FAIL'}{extra}  {self.expression}"
        )


class _Component:
    """One membership procedure seen as a bottom-up fold over trees."""

    def __init__(self, name: str, step: Callable, accept: Callable):
        self.name = name
        self.step = step
        self.accept = accept


def _automaton_component(name: str, a) -> _Component:
    if isinstance(a, CompressedTreeAutomaton):
        step = lambda f, kids: compressed_step(a, kids, f)  # noqa: E731
    else:
        step = lambda f, kids: delta_on_sets(a, kids, f)  # noqa: E731
    return _Component(name, step, lambda q: not q.isdisjoint(a.finals))


def _characterization_component(table: PositionTable) -> _Component:
    def step(f, kids):
        ok = all(k[1] for k in kids) and all(
            FatherPair(f, i) in table.father(k[0]) for i, k in enumerate(kids, start=1)
        )
        return (f, ok)

    return _Component("characterization", step, lambda v: v[1] and v[0] in table.root_set)


class _Universe:
    """All trees over ``symbols`` up to ``max_nodes``, grouped by component values.

    Two trees with the same tuple of component values are indistinguishable to
    every component, so checking one representative per (size, tuple) class and
    carrying class sizes covers every tree exactly.
    """

    def __init__(self, symbols, components: list[_Component], max_nodes: int):
        self.symbols = sorted(symbols, key=sort_key)
        self.components = components
        self.max_nodes = max_nodes
        self._steps: dict = {}
        # classes[n][signature] = [count, witness]
        self.classes: list[dict] = [{}]
        for n in range(1, max_nodes + 1):
            level: dict = {}
            for f in self.symbols:
                for parts in compositions(n - 1, f.arity):
                    pools = [list(self.classes[p].items()) for p in parts]
                    for picks in product(*pools):
                        sig = self.step(f, tuple(p[0] for p in picks))
                        count = 1
                        for p in picks:
                            count *= p[1][0]
                        slot = level.get(sig)
                        if slot is None:
                            level[sig] = [count, Tree(f, [p[1][1] for p in picks])]
                        else:
                            slot[0] += count
            self.classes.append(level)

    def step(self, f: Symbol, kids: tuple) -> tuple:
        key = (f, kids)
        sig = self._steps.get(key)
        if sig is None:
            sig = tuple(
                comp.step(f, [k[i] for k in kids]) for i, comp in enumerate(self.components)
            )
            self._steps[key] = sig
        return sig

    def signature(self, t: Tree, memo: dict) -> tuple:
        sig = memo.get(t)
        if sig is None:
            sig = self.step(t.label, tuple(self.signature(c, memo) for c in t.children))
            memo[t] = sig
        return sig

    def verdicts(self, sig: tuple) -> list[bool]:
        return [comp.accept(v) for comp, v in zip(self.components, sig)]

    @property
    def total(self) -> int:
        return sum(slot[0] for level in self.classes for slot in level.values())

    def trees_with(self, n: int, wanted: Callable[[tuple], bool]) -> Iterator[Tree]:
        """Lazily list the trees of size n whose signature satisfies ``wanted``."""
        for f in self.symbols:
            for parts in compositions(n - 1, f.arity):
                pools = [list(self.classes[p]) for p in parts]
                for sigs in product(*pools):
                    if wanted(self.step(f, tuple(sigs))):
                        subs = [
                            list(self.trees_with(p, lambda s, want=s: s == want))
                            for p, s in zip(parts, sigs)
                        ]
                        for kids in product(*subs):
                            yield Tree(f, kids)


def _check_universe(
    report: ValidationReport,
    universe: _Universe,
    language: frozenset[Tree],
    names: list[str],
    exact_pair: tuple[int, int] | None,
):
    """Compare every component with oracle membership over the whole universe."""
    memo: dict = {}
    agree = True
    for n, level in enumerate(universe.classes):
        for sig, (_, witness) in level.items():
            verdicts = universe.verdicts(sig)
            if exact_pair is not None and sig[exact_pair[0]] != sig[exact_pair[1]]:
                report.delta_equality = False
                report.fail(witness, f"run sets differ on {witness}")
            if len(set(verdicts)) > 1:
                agree = False
                truth = witness in language
                _blame(report, names, verdicts, truth)
                report.fail(witness, f"constructions disagree on {witness}")

    by_size: dict[int, int] = defaultdict(int)
    for t in language:
        by_size[t.size] += 1
        verdicts = universe.verdicts(universe.signature(t, memo))
        if not all(verdicts):
            _blame(report, names, verdicts, True)
            report.fail(t, f"{t} is in the language but rejected")
    if not agree:
        return
    for n, level in enumerate(universe.classes):
        accepted = sum(c for sig, (c, _) in level.items() if all(universe.verdicts(sig)))
        if accepted != by_size[n]:
            wanted = lambda s: all(universe.verdicts(s))  # noqa: E731
            for t in universe.trees_with(n, wanted):
                if t not in language:
                    _blame(report, names, [True] * len(names), False)
                    report.fail(t, f"{t} is accepted but not in the language")
                    break
            return


def _blame(report: ValidationReport, names: list[str], verdicts: list[bool], truth: bool):
    for name, v in zip(names, verdicts):
        if v != truth:
            if name == "characterization":
                report.characterization = False
            else:
                report.per_construction[name] = False


def cross_validate(
    e: Expr,
    bound: EnumerationBound | int,
    table: PositionTable | None = None,
    exhaustive: bool = False,
) -> ValidationReport:
    """Check every membership procedure against the enumerated language.

    Two universes are covered: all trees over the positions of the linearized
    expression (Root/Father characterization plus the four linear
    constructions) and all trees over the symbols of ``e`` (the four
    constructions after delinearization). ``exhaustive`` walks every tree
    one by one instead of grouping them into classes.
    """
    require_valid(e)
    bound = _as_bound(bound)
    lin = linearize(e)
    table = table if table is not None else position_table(lin)
    report = ValidationReport(str(e), bound)
    kinds = list(ConstructionKind)

    lin_lang = enumerate_language(lin, bound)
    gen_lang = enumerate_language(e, bound)
    report.language_size = len(gen_lang)

    linear_autos = {k.value: construct(k, lin, table) for k in kinds}
    general_autos = {k.value: construct_general(k, e, table) for k in kinds}

    _check_position_functions(report, lin, table, lin_lang)

    if exhaustive:
        _brute_force(report, lin.positions, lin_lang, linear_autos, table, bound)
        _brute_force(report, symbols_of(e), gen_lang, general_autos, None, bound)
        return report

    lin_names = [k.value for k in kinds] + ["characterization"]
    lin_components = [_automaton_component(k, a) for k, a in linear_autos.items()]
    lin_components.append(_characterization_component(table))
    universe = _Universe(lin.positions, lin_components, bound.max_nodes)
    p_idx = kinds.index(ConstructionKind.POSITION)
    cp_idx = kinds.index(ConstructionKind.COMPRESSED_POSITION)
    _check_universe(report, universe, lin_lang, lin_names, (p_idx, cp_idx))
    report.trees_checked += universe.total

    gen_names = [k.value for k in kinds]
    gen_components = [_automaton_component(k, a) for k, a in general_autos.items()]
    universe = _Universe(symbols_of(e), gen_components, bound.max_nodes)
    _check_universe(report, universe, gen_lang, gen_names, None)
    report.trees_checked += universe.total
    return report


def _check_position_functions(report, lin: LinearExpr, table: PositionTable, language):
    roots = frozenset(t.label for t in language)
    fathers: dict[Symbol, set[FatherPair]] = defaultdict(set)
    for t in language:
        for s in t.subtrees():
            for i, ch in enumerate(s.children, start=1):
                fathers[ch.label].add(FatherPair(s.label, i))
    sound = roots <= table.root_set and all(
        fathers[p] <= table.father(p) for p in lin.positions
    )
    exact = roots == table.root_set and all(
        fathers[p] == table.father(p) for p in lin.positions
    )
    report.position_functions = sound
    report.position_functions_exact = exact
    if not sound:
        report.fail(None, "enumerated Root/Father exceed the computed position functions")


def _brute_force(report, symbols, language, autos, table, bound):
    names = list(autos)
    caches = {name: {} for name in names}
    for t in all_trees(symbols, bound.max_nodes):
        report.trees_checked += 1
        truth = t in language
        runs = {}
        for name, a in autos.items():
            if isinstance(a, CompressedTreeAutomaton):
                runs[name] = run_compressed(a, t, caches[name])
            else:
                runs[name] = run_tree(a, t, caches[name])
            if (not runs[name].isdisjoint(a.finals)) != truth:
                report.per_construction[name] = False
                report.fail(t, f"{name} disagrees with the oracle on {t}")
        if table is not None:
            if membership_by_characterization(table, t) != truth:
                report.characterization = False
                report.fail(t, f"characterization disagrees with the oracle on {t}")
            p, cp = ConstructionKind.POSITION.value, ConstructionKind.COMPRESSED_POSITION.value
            if runs[p] != runs[cp]:
                report.delta_equality = False
                report.fail(t, f"run sets differ on {t}")


def mutate_father(table: PositionTable, position: Symbol, pair: FatherPair) -> PositionTable:
    """Copy of ``table`` with ``pair`` toggled in Father(position); for harness tests."""
    fathers = dict(table.father_sets)
    current = fathers.get(position, frozenset())
    fathers[position] = current - {pair} if pair in current else current | {pair}
    return PositionTable(table.root_set, fathers, table.positions)
