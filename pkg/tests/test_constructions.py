import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treeglushkov.automaton import accepts, is_deterministic, is_isomorphic, quotient, run_tree
from treeglushkov.compressed import (
    accepts_compressed,
    expand,
    is_isomorphic_compressed,
    quotient_compressed,
)
from treeglushkov.constructions import (
    ConstructionKind,
    compressed_father_automaton,
    compressed_father_automaton_general,
    compressed_position_automaton,
    compressed_position_automaton_general,
    construct,
    construct_general,
    father_automaton,
    father_automaton_general,
    father_congruence,
    position_automaton,
    position_automaton_general,
)
from treeglushkov.expr import as_linear, linearize, parse
from treeglushkov.oracle import enumerate_language, random_expression
from treeglushkov.trees import all_trees, parse_tree

from conftest import COMPRESSED_POSITION_TRANSITIONS, FATHER_TRANSITIONS, POSITION_TRANSITIONS


def shown(a):
    return {str(t) for t in a.transitions}


def strip_symbol_index(text):
    if text.count(",") == 1:
        return text  # nullary symbols carry no index
    head, symbol, target = text[:-1].rsplit(",", 2)
    return f"{head},{symbol.rstrip('0123456789')},{target})"


def test_position_automaton_golden(lin):
    P = position_automaton(lin)
    assert P.states == {"a", "b", "f1", "g2", "f3", "g4"}
    assert P.finals == {"a", "f1", "g2"}
    assert shown(P) == POSITION_TRANSITIONS


def test_position_automaton_single_symbol():
    P = position_automaton(linearize(parse("a")))
    assert P.states == {"a"} and P.finals == {"a"}
    assert shown(P) == {"(a,a)"}


def test_general_position_automaton(running):
    image = position_automaton_general(running)
    assert image.states == {"a", "b", "f1", "g2", "f3", "g4"}
    assert shown(image) == {strip_symbol_index(s) for s in POSITION_TRANSITIONS}


def test_general_on_linear_input_matches_linear_construction():
    e = parse("f(g(a),b)*b")
    for kind in ConstructionKind:
        got = construct_general(kind, e)
        ref = construct(kind, as_linear(e))
        if kind.compressed:
            assert is_isomorphic_compressed(got, ref)
        else:
            assert is_isomorphic(got, ref)


def test_father_congruence(lin):
    pi = father_congruence(lin)
    assert pi.sorted_blocks() == [["a"], ["b"], ["f1", "g2"], ["f3"], ["g4"]]
    assert pi.block_of("a") != pi.block_of("f1")
    distinct = linearize(parse("f(a,b)"))
    assert all(len(block) == 1 for block in father_congruence(distinct).blocks)


def test_father_automaton_golden(lin):
    F = father_automaton(lin)
    assert F.states == {"{a}", "{b}", "{f1,g2}", "{f3}", "{g4}"}
    assert F.finals == {"{a}", "{f1,g2}"}
    assert shown(F) == FATHER_TRANSITIONS
    assert is_isomorphic(F, quotient(position_automaton(lin), father_congruence(lin)))


def test_father_automaton_single_symbol():
    lin = linearize(parse("a"))
    assert is_isomorphic(father_automaton(lin), position_automaton(lin))


def test_general_father_automaton(running):
    F = father_automaton_general(running)
    assert len(F.states) == 5
    assert {str(t.symbol) for t in F.transitions} == {"a", "b", "f", "g"}


def test_compressed_position_golden(lin):
    CP = compressed_position_automaton(lin)
    assert shown(CP) == COMPRESSED_POSITION_TRANSITIONS
    assert len(CP.transitions) == 6
    assert len(position_automaton(lin).transitions) == 14
    assert expand(CP) == position_automaton(lin)


def test_compressed_father_golden(lin):
    CF = compressed_father_automaton(lin)
    assert len(CF.states) == 5
    by_symbol = {str(t.symbol): t for t in CF.transitions}
    assert by_symbol["f1"].origin_sets == (frozenset({"{a}", "{f1,g2}"}),) * 2
    assert by_symbol["g2"].origin_sets == (frozenset({"{f3}"}),)
    assert by_symbol["g2"].targets == {"{f1,g2}"}
    quotiented = quotient_compressed(compressed_position_automaton(lin), father_congruence(lin))
    assert is_isomorphic_compressed(CF, quotiented)


def test_compressed_father_language(lin):
    F = father_automaton(lin)
    plain = expand(compressed_father_automaton(lin))
    for t in all_trees(lin.positions, 8):
        assert accepts(plain, t) == accepts(F, t)


def test_general_compressed_images(running):
    CP = compressed_position_automaton_general(running)
    f_targets = {next(iter(t.targets)) for t in CP.transitions if str(t.symbol) == "f"}
    assert f_targets == {"f1", "f3"}
    CF = compressed_father_automaton_general(running)
    assert len(CF.states) == 5


def test_general_constructions_recognize_language(running):
    lang = enumerate_language(running, 9)
    autos = [construct_general(k, running) for k in ConstructionKind]
    symbols = {s for t in lang for s in t.symbols()}
    for t in all_trees(symbols, 7):
        truth = t in lang
        assert accepts(autos[0], t) == truth
        assert accepts(autos[1], t) == truth
        assert accepts_compressed(autos[2], t) == truth
        assert accepts_compressed(autos[3], t) == truth
    assert accepts(autos[0], parse_tree("f(f(a,a),a)"))


def test_nonlinear_input_rejected(running):
    with pytest.raises(ValueError):
        position_automaton(as_linear(running))


@given(st.integers(0, 100_000))
@settings(max_examples=100, deadline=None)
def test_structural_invariants(seed):
    lin = linearize(random_expression(seed))
    P = position_automaton(lin)
    F = father_automaton(lin)
    CP = compressed_position_automaton(lin)
    pi = father_congruence(lin)
    assert is_deterministic(P) and is_deterministic(F)
    assert len(P.states) == len(lin.positions)
    assert len(F.states) <= len(lin.positions)
    assert len(CP.transitions) == len(lin.positions)
    assert expand(CP) == P
    assert is_isomorphic(F, quotient(P, pi))
    assert is_isomorphic_compressed(compressed_father_automaton(lin), quotient_compressed(CP, pi))


@given(st.integers(0, 100_000))
@settings(max_examples=40, deadline=None)
def test_quotient_runs_are_block_images(seed):
    lin = linearize(random_expression(seed, 5))
    P = position_automaton(lin)
    pi = father_congruence(lin)
    q = quotient(P, pi)
    for t in all_trees(lin.positions, 5):
        assert run_tree(q, t) == {pi.name(s) for s in run_tree(P, t)}
