"""Bottom-up tree automata with tuple-origin transitions."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Callable, Hashable, Iterable, Mapping, NamedTuple

from .trees import RankedAlphabet, Symbol, Tree, sort_key

State = str


class Transition(NamedTuple):
    origins: tuple[State, ...]
    symbol: Symbol
    target: State

    def __str__(self) -> str:
        if not self.origins:
            return f"({self.symbol},{self.target})"
        if len(self.origins) == 1:
            return f"({self.origins[0]},{self.symbol},{self.target})"
        return f"(({','.join(self.origins)}),{self.symbol},{self.target})"


def transition_key(t: Transition) -> tuple:
    return (str(t.symbol), t.origins, t.target)


@dataclass(frozen=True)
class TreeAutomaton:
    alphabet: RankedAlphabet
    states: frozenset[State]
    finals: frozenset[State]
    transitions: frozenset[Transition]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if not self.finals <= self.states:
            raise ValueError(f"finals {sorted(self.finals - self.states)} are not states")
        index: dict[tuple[Symbol, tuple[State, ...]], set[State]] = defaultdict(set)
        for t in self.transitions:
            if len(t.origins) != t.symbol.arity:
                raise ValueError(f"transition {t} has the wrong number of origins")
            if str(t.symbol) not in self.alphabet:
                raise ValueError(f"transition {t} uses a symbol outside the alphabet")
            missing = (set(t.origins) | {t.target}) - self.states
            if missing:
                raise ValueError(f"transition {t} references unknown states {sorted(missing)}")
            index[t.symbol, t.origins].add(t.target)
        object.__setattr__(
            self, "_index", {k: frozenset(v) for k, v in index.items()}
        )

    @classmethod
    def build(
        cls,
        states: Iterable[State],
        finals: Iterable[State],
        transitions: Iterable[tuple],
        alphabet: RankedAlphabet | None = None,
    ) -> TreeAutomaton:
        trans = frozenset(Transition(tuple(o), s, q) for o, s, q in transitions)
        if alphabet is None:
            alphabet = RankedAlphabet(t.symbol for t in trans)
        return cls(alphabet, frozenset(states), frozenset(finals), trans)

    def delta(self, origins: tuple[State, ...], f: Symbol) -> frozenset[State]:
        return self._index.get((f, tuple(origins)), frozenset())

    def sorted_transitions(self) -> list[Transition]:
        return sorted(self.transitions, key=transition_key)


def _check_symbol(a, f: Symbol):
    if a.alphabet.get(str(f)) != f:
        raise ValueError(f"symbol {f} is not in the automaton's alphabet")


def delta_on_sets(
    a: TreeAutomaton, origin_sets: Iterable[Iterable[State]], f: Symbol
) -> frozenset[State]:
    """Union of delta(q1..qn, f) over the cartesian product of the origin sets."""
    origin_sets = [tuple(s) for s in origin_sets]
    if len(origin_sets) != f.arity:
        raise ValueError(f"{f} expects {f.arity} origin sets, got {len(origin_sets)}")
    out: set[State] = set()
    for combo in product(*origin_sets):
        out |= a.delta(combo, f)
    return frozenset(out)


def run_tree(a: TreeAutomaton, t: Tree, cache: dict | None = None) -> frozenset[State]:
    """The set of states reached at the root of ``t``, computed bottom-up."""
    if cache is not None and t in cache:
        return cache[t]
    _check_symbol(a, t.label)
    out = delta_on_sets(a, [run_tree(a, c, cache) for c in t.children], t.label)
    if cache is not None:
        cache[t] = out
    return out


def accepts(a: TreeAutomaton, t: Tree) -> bool:
    return not run_tree(a, t).isdisjoint(a.finals)


def is_deterministic(a: TreeAutomaton) -> bool:
    return all(len(targets) <= 1 for targets in a._index.values())


def _check_morphism(alphabet: Iterable[Symbol], phi: Mapping[Symbol, Symbol]):
    for s in alphabet:
        if s not in phi:
            raise ValueError(f"morphism is undefined on {s}")
        if phi[s].arity != s.arity:
            raise ValueError(f"morphism sends {s} to {phi[s]} of a different arity")


def alphabetical_image(a: TreeAutomaton, phi: Mapping[Symbol, Symbol]) -> TreeAutomaton:
    """Relabel transition symbols through phi; states and finals are kept."""
    _check_morphism(a.alphabet.symbols, phi)
    trans = frozenset(Transition(t.origins, phi[t.symbol], t.target) for t in a.transitions)
    alphabet = RankedAlphabet(phi[s] for s in a.alphabet.symbols)
    return TreeAutomaton(alphabet, a.states, a.finals, trans)


@dataclass(frozen=True)
class StatePartition:
    blocks: frozenset[frozenset[State]]

    @classmethod
    def of(cls, blocks: Iterable[Iterable[State]]) -> StatePartition:
        return cls(frozenset(frozenset(b) for b in blocks))

    @classmethod
    def identity(cls, states: Iterable[State]) -> StatePartition:
        return cls.of([s] for s in states)

    @classmethod
    def kernel(cls, states: Iterable[State], key: Callable[[State], Hashable]) -> StatePartition:
        groups: dict = defaultdict(set)
        for s in states:
            groups[key(s)].add(s)
        return cls.of(groups.values())

    def block_of(self, s: State) -> frozenset[State]:
        for b in self.blocks:
            if s in b:
                return b
        raise KeyError(s)

    def name(self, s: State) -> State:
        return block_name(self.block_of(s))

    def covers(self, states: frozenset[State]) -> bool:
        members = [s for b in self.blocks for s in b]
        return (
            all(self.blocks)
            and len(members) == len(set(members))
            and set(members) == set(states)
        )

    def sorted_blocks(self) -> list[list[State]]:
        return sorted(sorted(b) for b in self.blocks)


def block_name(block: Iterable[State]) -> State:
    return "{" + ",".join(sorted(block)) + "}"


def _check_partition(a, pi: StatePartition):
    if not pi.covers(a.states):
        raise ValueError("partition does not cover the state set exactly")


def is_bottom_up_congruence(a: TreeAutomaton, pi: StatePartition) -> bool:
    """Check that equivalent states are interchangeable in every transition context.

    Enumerates all contexts: O(|Sigma| * k * |Q|^k) for maximal arity k.
    """
    if not is_deterministic(a):
        raise ValueError("congruences are only defined for deterministic automata")
    _check_partition(a, pi)
    name = {s: block_name(b) for b in pi.blocks for s in b}
    states = sorted(a.states)

    def similar(x: frozenset[State], y: frozenset[State]) -> bool:
        return {name[s] for s in x} == {name[s] for s in y}

    for block in pi.blocks:
        members = sorted(block)
        if len({s in a.finals for s in members}) > 1:
            return False
        p = members[0]
        for q in members[1:]:
            for f in a.alphabet.symbols:
                for slot in range(f.arity):
                    for ctx in product(states, repeat=f.arity - 1):
                        left = ctx[:slot] + (p,) + ctx[slot:]
                        right = ctx[:slot] + (q,) + ctx[slot:]
                        if not similar(a.delta(left, f), a.delta(right, f)):
                            return False
    return True


def quotient(a: TreeAutomaton, pi: StatePartition) -> TreeAutomaton:
    """Merge each block into one state named ``{p,q,...}``."""
    if not is_bottom_up_congruence(a, pi):
        raise ValueError("partition is not a bottom-up congruence")
    name = {s: block_name(b) for b in pi.blocks for s in b}
    trans = frozenset(
        Transition(tuple(name[o] for o in t.origins), t.symbol, name[t.target])
        for t in a.transitions
    )
    return TreeAutomaton(
        a.alphabet,
        frozenset(name.values()),
        frozenset(name[s] for s in a.finals),
        trans,
    )


def _state_profile(states, finals, transitions, origin_members, target_members):
    """A renaming-invariant fingerprint per state, used to prune the bijection search."""
    counts: dict = defaultdict(lambda: defaultdict(int))
    for t in transitions:
        for i, members in enumerate(origin_members(t)):
            for s in members:
                counts[s][(str(t[1]), "in", i)] += 1
        for s in target_members(t):
            counts[s][(str(t[1]), "out")] += 1
    return {s: (s in finals, tuple(sorted(counts[s].items()))) for s in states}


def find_isomorphism(
    states_a, finals_a, trans_a, states_b, finals_b, trans_b, rename, origin_members, target_members
) -> dict | None:
    """Try every bijection that maps each state to one with the same profile.

    Exponential in the size of the largest profile class; fine at desk scale.
    """
    if len(states_a) != len(states_b) or len(trans_a) != len(trans_b):
        return None
    prof_a = _state_profile(states_a, finals_a, trans_a, origin_members, target_members)
    prof_b = _state_profile(states_b, finals_b, trans_b, origin_members, target_members)
    groups_a: dict = defaultdict(list)
    groups_b: dict = defaultdict(list)
    for s, p in prof_a.items():
        groups_a[p].append(s)
    for s, p in prof_b.items():
        groups_b[p].append(s)
    if {k: len(v) for k, v in groups_a.items()} != {k: len(v) for k, v in groups_b.items()}:
        return None
    keys = sorted(groups_a, key=repr)
    sources = [sorted(groups_a[k]) for k in keys]
    targets = [sorted(groups_b[k]) for k in keys]
    target_set = set(trans_b)
    for choice in product(*(permutations(t) for t in targets)):
        phi = {s: q for src, img in zip(sources, choice) for s, q in zip(src, img)}
        if all(rename(t, phi) in target_set for t in trans_a):
            return phi
    return None


def is_isomorphic(a: TreeAutomaton, b: TreeAutomaton) -> bool:
    """States may be renamed; symbols must match exactly."""
    if a.alphabet.symbols != b.alphabet.symbols:
        return False
    return (
        find_isomorphism(
            a.states, a.finals, a.transitions,
            b.states, b.finals, b.transitions,
            lambda t, phi: Transition(tuple(phi[o] for o in t.origins), t.symbol, phi[t.target]),
            lambda t: [[o] for o in t.origins],
            lambda t: [t.target],
        )
        is not None
    )


def state_sort(states: Iterable[State]) -> list[State]:
    return sorted(states, key=sort_key)
