import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treeglushkov.expr import Apply, Product, Star, Sum, linearize, parse, validate, walk
from treeglushkov.oracle import (
    EnumerationBound,
    calibrated_bound,
    cross_validate,
    enumerate_language,
    father_via_enumeration,
    member,
    mutate_father,
    random_expression,
    root_via_enumeration,
)
from treeglushkov.positions import position_table, root_set
from treeglushkov.trees import FatherPair, RankedAlphabet, Symbol, Tree, all_trees, parse_tree
from treeglushkov.oracle import _star

from conftest import POS

a, b, f1, g2, f3, g4 = (POS[k] for k in ["a", "b", "f1", "g2", "f3", "g4"])
seeds = st.integers(0, 1_000_000)


def test_bound_validation():
    with pytest.raises(ValueError):
        EnumerationBound(0)
    with pytest.raises(ValueError):
        EnumerationBound(3, 0)
    assert EnumerationBound(9).max_star_iterations >= 9


def test_enumerate_examples(lin):
    assert enumerate_language(parse("a"), 5) == {Tree(Symbol("a", 0))}
    star = Star(Apply(f1, (Apply(a), Apply(a))), a)
    assert enumerate_language(star, 3) == {Tree(a), parse_tree("f1(a,a)", POS)}
    assert parse_tree("g2(f3(g4(a),b))", POS) in enumerate_language(lin, 9)


def test_star_cap_is_an_assertion():
    inner = {Tree(f1, [Tree(a), Tree(a)])}
    with pytest.raises(RuntimeError):
        _star(inner, a, EnumerationBound(9, max_star_iterations=2))


def test_father_and_root_via_enumeration(lin):
    assert father_via_enumeration(lin, b, 9) == {FatherPair(f3, 2)}
    assert father_via_enumeration(lin, g4, 9) == {FatherPair(f3, 1)}
    assert father_via_enumeration(parse("a"), Symbol("a", 0), 4) == set()
    assert root_via_enumeration(lin, 9) == {a, f1, g2}
    assert root_via_enumeration(parse("f(a,a)"), 7) == {Symbol("f", 2)}


def test_random_expression_is_reproducible():
    assert random_expression(17) == random_expression(17)
    with pytest.raises(ValueError):
        random_expression(0, alphabet=RankedAlphabet.from_arities({"f": 2}))


def test_generator_validity_and_coverage():
    kinds = set()
    for seed in range(1000):
        e = random_expression(seed, 6)
        assert validate(e) == []
        lin = linearize(e)
        assert sum(1 for p in lin.positions if p.arity) <= 6
        kinds |= {type(node) for node in walk(e)}
    assert kinds == {Apply, Sum, Product, Star}


def test_cross_validate_running_example(running):
    report = cross_validate(running, 9)
    assert report.ok, report.summary()
    assert report.position_functions_exact
    assert report.first_counterexample is None


def test_cross_validate_trivial():
    report = cross_validate(parse("a"), 5)
    assert report.ok and report.language_size == 1


@pytest.mark.parametrize(
    "position, pair",
    [
        ("b", FatherPair(f3, 1)),  # off-by-one slot: b as first child of f3
        ("a", FatherPair(g4, 1)),  # drop a genuine pair
        ("g4", FatherPair(f3, 2)),
    ],
)
def test_harness_catches_mutations(running, lin, table, position, pair):
    broken = mutate_father(table, POS[position], pair)
    report = cross_validate(running, 7, table=broken)
    assert not report.ok
    assert report.first_counterexample is not None


def test_harness_modes_agree_on_mutation(running, table):
    broken = mutate_father(table, b, FatherPair(f3, 1))
    fast = cross_validate(running, 6, table=broken)
    slow = cross_validate(running, 6, table=broken, exhaustive=True)
    assert fast.ok == slow.ok == False  # noqa: E712
    assert fast.per_construction == slow.per_construction
    assert fast.characterization == slow.characterization


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_harness_modes_agree(seed):
    e = random_expression(seed, 4)
    fast = cross_validate(e, 6)
    slow = cross_validate(e, 6, exhaustive=True)
    assert fast.ok and slow.ok
    assert fast.trees_checked == slow.trees_checked


@given(seeds)
@settings(max_examples=60, deadline=None)
def test_enumeration_is_sound(seed):
    e = random_expression(seed, 5)
    lang = enumerate_language(e, 7)
    assert all(member(e, t) for t in lang)
    symbols = {s for s in linearize(e).delinearizer.values()}
    for t in all_trees(symbols, 5):
        assert member(e, t) == (t in lang)


@given(seeds, st.integers(1, 8))
@settings(max_examples=60, deadline=None)
def test_enumeration_is_monotone(seed, m):
    e = random_expression(seed, 5)
    small = enumerate_language(e, m)
    large = enumerate_language(e, m + 1)
    assert small <= large
    assert small == {t for t in large if t.size <= m}


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_extra_star_round_adds_nothing(seed):
    e = random_expression(seed, 5)
    assert enumerate_language(e, EnumerationBound(7)) == enumerate_language(
        e, EnumerationBound(7, max_star_iterations=20)
    )


@given(seeds)
@settings(max_examples=60, deadline=None)
def test_enumerated_fathers_are_sound(seed):
    lin = linearize(random_expression(seed, 5))
    table = position_table(lin)
    for n in (3, 6, 8):
        lang = enumerate_language(lin, n)
        assert {t.label for t in lang} <= table.root_set
        for p in lin.positions:
            assert father_via_enumeration(lin, p, n) <= table.father(p)


def test_roots_at_calibrated_bound():
    # three ranked positions keep the calibrated bound at ten nodes or fewer
    short = []
    for seed in range(200):
        lin = linearize(random_expression(seed, 3))
        found = root_via_enumeration(lin, calibrated_bound(lin))
        assert found <= root_set(lin), seed
        if found != root_set(lin):
            short.append(seed)
    # h1(a+a,h2(a,a,a).ah3(a,b,b),b): its smallest tree has 16 nodes
    assert short == [195]
    lin = linearize(random_expression(195, 3))
    assert root_via_enumeration(lin, 16) == root_set(lin)
