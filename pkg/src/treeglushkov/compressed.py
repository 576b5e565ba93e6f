"""Compressed bottom-up tree automata: transitions carry a set of states per origin slot."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping, NamedTuple

from .automaton import (
    State,
    StatePartition,
    Transition,
    TreeAutomaton,
    _check_morphism,
    _check_partition,
    _check_symbol,
    block_name,
    find_isomorphism,
    is_bottom_up_congruence,
)
from .trees import RankedAlphabet, Symbol, Tree


class CompressedTransition(NamedTuple):
    origin_sets: tuple[frozenset[State], ...]
    symbol: Symbol
    targets: frozenset[State]

    def __str__(self) -> str:
        slots = ",".join("{" + ",".join(sorted(q)) + "}" for q in self.origin_sets)
        tgt = "{" + ",".join(sorted(self.targets)) + "}"
        if not self.origin_sets:
            return f"({self.symbol},{tgt})"
        return f"({slots},{self.symbol},{tgt})"

    @property
    def dead(self) -> bool:
        return any(not q for q in self.origin_sets)


def compressed_key(t: CompressedTransition) -> tuple:
    return (
        str(t.symbol),
        tuple(tuple(sorted(q)) for q in t.origin_sets),
        tuple(sorted(t.targets)),
    )


@dataclass(frozen=True)
class CompressedTreeAutomaton:
    alphabet: RankedAlphabet
    states: frozenset[State]
    finals: frozenset[State]
    transitions: frozenset[CompressedTransition]
    _by_symbol: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if not self.finals <= self.states:
            raise ValueError(f"finals {sorted(self.finals - self.states)} are not states")
        by_symbol: dict[Symbol, list[CompressedTransition]] = defaultdict(list)
        for t in self.transitions:
            if len(t.origin_sets) != t.symbol.arity:
                raise ValueError(f"transition {t} has the wrong number of origin sets")
            if str(t.symbol) not in self.alphabet:
                raise ValueError(f"transition {t} uses a symbol outside the alphabet")
            used = set(t.targets).union(*t.origin_sets)
            if not used <= self.states:
                raise ValueError(f"transition {t} references unknown states {sorted(used - self.states)}")
            by_symbol[t.symbol].append(t)
        object.__setattr__(self, "_by_symbol", dict(by_symbol))

    @classmethod
    def build(
        cls,
        states: Iterable[State],
        finals: Iterable[State],
        transitions: Iterable[tuple],
        alphabet: RankedAlphabet | None = None,
    ) -> CompressedTreeAutomaton:
        trans = frozenset(
            CompressedTransition(tuple(frozenset(q) for q in origins), s, frozenset(targets))
            for origins, s, targets in transitions
        )
        if alphabet is None:
            alphabet = RankedAlphabet(t.symbol for t in trans)
        return cls(alphabet, frozenset(states), frozenset(finals), trans)

    def transitions_for(self, f: Symbol) -> list[CompressedTransition]:
        return self._by_symbol.get(f, [])

    def sorted_transitions(self) -> list[CompressedTransition]:
        return sorted(self.transitions, key=compressed_key)

    def dead_transitions(self) -> list[CompressedTransition]:
        """Transitions with an empty origin slot; they can never fire."""
        return [t for t in self.sorted_transitions() if t.dead]


def restricted_delta(
    c: CompressedTreeAutomaton, origins: Iterable[State], f: Symbol
) -> frozenset[State]:
    """Targets of every transition whose i-th origin set contains the i-th state."""
    origins = tuple(origins)
    if len(origins) != f.arity:
        raise ValueError(f"{f} expects {f.arity} origins, got {len(origins)}")
    out: set[State] = set()
    for t in c.transitions_for(f):
        if all(q in qs for q, qs in zip(origins, t.origin_sets)):
            out |= t.targets
    return frozenset(out)


def compressed_step(
    c: CompressedTreeAutomaton, child_sets: Iterable[frozenset[State]], f: Symbol
) -> frozenset[State]:
    """One bottom-up step: fire transitions whose slots meet the children's state sets."""
    child_sets = tuple(child_sets)
    out: set[State] = set()
    for t in c.transitions_for(f):
        if all(not s.isdisjoint(qs) for s, qs in zip(child_sets, t.origin_sets)):
            out |= t.targets
    return frozenset(out)


def run_compressed(
    c: CompressedTreeAutomaton, t: Tree, cache: dict | None = None
) -> frozenset[State]:
    if cache is not None and t in cache:
        return cache[t]
    _check_symbol(c, t.label)
    out = compressed_step(c, [run_compressed(c, ch, cache) for ch in t.children], t.label)
    if cache is not None:
        cache[t] = out
    return out


def accepts_compressed(c: CompressedTreeAutomaton, t: Tree) -> bool:
    return not run_compressed(c, t).isdisjoint(c.finals)


def alphabetical_image_compressed(
    c: CompressedTreeAutomaton, phi: Mapping[Symbol, Symbol]
) -> CompressedTreeAutomaton:
    _check_morphism(c.alphabet.symbols, phi)
    trans = frozenset(t._replace(symbol=phi[t.symbol]) for t in c.transitions)
    alphabet = RankedAlphabet(phi[s] for s in c.alphabet.symbols)
    return CompressedTreeAutomaton(alphabet, c.states, c.finals, trans)


def expand(c: CompressedTreeAutomaton) -> TreeAutomaton:
    """The plain automaton with one tuple transition per product element and target."""
    trans = frozenset(
        Transition(origins, t.symbol, q)
        for t in c.transitions
        for origins in product(*(sorted(qs) for qs in t.origin_sets))
        for q in t.targets
    )
    return TreeAutomaton(c.alphabet, c.states, c.finals, trans)


def quotient_compressed(
    c: CompressedTreeAutomaton, pi: StatePartition
) -> CompressedTreeAutomaton:
    """Map origin sets and targets blockwise; identical transitions collapse.

    Origin blocks are kept even when unreachable.
    """
    _check_partition(c, pi)
    if not is_bottom_up_congruence(expand(c), pi):
        raise ValueError("partition is not a bottom-up congruence")
    name = {s: block_name(b) for b in pi.blocks for s in b}
    trans = frozenset(
        CompressedTransition(
            tuple(frozenset(name[q] for q in qs) for qs in t.origin_sets),
            t.symbol,
            frozenset(name[q] for q in t.targets),
        )
        for t in c.transitions
    )
    return CompressedTreeAutomaton(
        c.alphabet,
        frozenset(name.values()),
        frozenset(name[s] for s in c.finals),
        trans,
    )


def is_isomorphic_compressed(a: CompressedTreeAutomaton, b: CompressedTreeAutomaton) -> bool:
    if a.alphabet.symbols != b.alphabet.symbols:
        return False

    def rename(t: CompressedTransition, phi: dict) -> CompressedTransition:
        return CompressedTransition(
            tuple(frozenset(phi[q] for q in qs) for qs in t.origin_sets),
            t.symbol,
            frozenset(phi[q] for q in t.targets),
        )

    return (
        find_isomorphism(
            a.states, a.finals, a.transitions,
            b.states, b.finals, b.transitions,
            rename,
            lambda t: t.origin_sets,
            lambda t: t.targets,
        )
        is not None
    )
