"""Position, Father, and compressed automata built from the position functions."""

from __future__ import annotations

import enum
from itertools import product

from .automaton import StatePartition, Transition, TreeAutomaton, alphabetical_image, block_name
from .compressed import (
    CompressedTransition,
    CompressedTreeAutomaton,
    alphabetical_image_compressed,
)
from .expr import DOLLAR, Expr, LinearExpr, is_linear, linearize, require_valid
from .positions import PositionTable, position_table
from .trees import FatherPair, RankedAlphabet, Symbol, sort_key


class ConstructionKind(enum.Enum):
    POSITION = "position"
    FATHER = "father"
    COMPRESSED_POSITION = "cposition"
    COMPRESSED_FATHER = "cfather"

    @property
    def compressed(self) -> bool:
        return self in (ConstructionKind.COMPRESSED_POSITION, ConstructionKind.COMPRESSED_FATHER)


def _table(e: LinearExpr, table: PositionTable | None) -> PositionTable:
    if not is_linear(e.expr):
        raise ValueError("construction needs a linear expression")
    return table if table is not None else position_table(e)


def _positions(table: PositionTable) -> list[Symbol]:
    return sorted(table.positions, key=sort_key)


def position_automaton(e: LinearExpr, table: PositionTable | None = None) -> TreeAutomaton:
    """States are positions; ((f1..fn), g, g) whenever (g, i) is in Father(f_i) for all i."""
    table = _table(e, table)
    trans = set()
    for g in _positions(table):
        slots = [sorted(map(str, table.origins(g, i))) for i in range(1, g.arity + 1)]
        for origins in product(*slots):
            trans.add(Transition(origins, g, str(g)))
    return TreeAutomaton(
        RankedAlphabet(table.positions),
        frozenset(map(str, table.positions)),
        frozenset(map(str, table.root_set)),
        frozenset(trans),
    )


def compressed_position_automaton(
    e: LinearExpr, table: PositionTable | None = None
) -> CompressedTreeAutomaton:
    """One transition per position f, slot i holding {g | (f, i) in Father(g)}."""
    table = _table(e, table)
    trans = {
        CompressedTransition(
            tuple(frozenset(map(str, table.origins(f, i))) for i in range(1, f.arity + 1)),
            f,
            frozenset((str(f),)),
        )
        for f in _positions(table)
    }
    return CompressedTreeAutomaton(
        RankedAlphabet(table.positions),
        frozenset(map(str, table.positions)),
        frozenset(map(str, table.root_set)),
        frozenset(trans),
    )


def father_congruence(e: LinearExpr, table: PositionTable | None = None) -> StatePartition:
    """Positions are equivalent iff their Father sets in $(e) coincide."""
    table = _table(e, table)
    by_name = {str(p): p for p in table.positions}
    return StatePartition.kernel(by_name, lambda s: table.augmented_father(by_name[s]))


def _blocks(table: PositionTable) -> dict[Symbol, str]:
    groups: dict[frozenset[FatherPair], list[Symbol]] = {}
    for p in table.positions:
        groups.setdefault(table.augmented_father(p), []).append(p)
    return {p: block_name(map(str, ps)) for ps in groups.values() for p in ps}


def _father_finals(table: PositionTable, block: dict[Symbol, str]) -> frozenset[str]:
    dollar = FatherPair(DOLLAR, 1)
    return frozenset(block[p] for p in table.positions if dollar in table.augmented_father(p))


def father_automaton(e: LinearExpr, table: PositionTable | None = None) -> TreeAutomaton:
    """States are the distinct augmented Father sets, named by their position blocks."""
    table = _table(e, table)
    block = _blocks(table)
    trans = set()
    for g in _positions(table):
        slots = [
            sorted({block[f] for f in table.origins(g, i)}) for i in range(1, g.arity + 1)
        ]
        for origins in product(*slots):
            trans.add(Transition(origins, g, block[g]))
    return TreeAutomaton(
        RankedAlphabet(table.positions),
        frozenset(block.values()),
        _father_finals(table, block),
        frozenset(trans),
    )


def compressed_father_automaton(
    e: LinearExpr, table: PositionTable | None = None
) -> CompressedTreeAutomaton:
    """Like the compressed Position automaton, over Father-congruence blocks.

    States are blocks and finality is ($, 1) membership, so that the result
    is the compressed quotient rather than using Pos(e) and Root(e) verbatim.
    """
    table = _table(e, table)
    block = _blocks(table)
    trans = {
        CompressedTransition(
            tuple(
                frozenset(block[g] for g in table.origins(f, i)) for i in range(1, f.arity + 1)
            ),
            f,
            frozenset((block[f],)),
        )
        for f in _positions(table)
    }
    return CompressedTreeAutomaton(
        RankedAlphabet(table.positions),
        frozenset(block.values()),
        _father_finals(table, block),
        frozenset(trans),
    )


_LINEAR = {
    ConstructionKind.POSITION: position_automaton,
    ConstructionKind.FATHER: father_automaton,
    ConstructionKind.COMPRESSED_POSITION: compressed_position_automaton,
    ConstructionKind.COMPRESSED_FATHER: compressed_father_automaton,
}


def construct(
    kind: ConstructionKind, e: LinearExpr, table: PositionTable | None = None
) -> TreeAutomaton | CompressedTreeAutomaton:
    return _LINEAR[kind](e, table)


def construct_general(
    kind: ConstructionKind, e: Expr, table: PositionTable | None = None
) -> TreeAutomaton | CompressedTreeAutomaton:
    """Build on the linearized expression, then strip indices with h."""
    require_valid(e)
    lin = linearize(e)
    a = construct(kind, lin, table)
    if kind.compressed:
        return alphabetical_image_compressed(a, lin.delinearizer)
    return alphabetical_image(a, lin.delinearizer)


def position_automaton_general(e: Expr) -> TreeAutomaton:
    return construct_general(ConstructionKind.POSITION, e)


def father_automaton_general(e: Expr) -> TreeAutomaton:
    return construct_general(ConstructionKind.FATHER, e)


def compressed_position_automaton_general(e: Expr) -> CompressedTreeAutomaton:
    return construct_general(ConstructionKind.COMPRESSED_POSITION, e)


def compressed_father_automaton_general(e: Expr) -> CompressedTreeAutomaton:
    return construct_general(ConstructionKind.COMPRESSED_FATHER, e)
