import pytest

from treeglushkov.expr import linearize, parse
from treeglushkov.positions import position_table
from treeglushkov.trees import Symbol

RUNNING = "(f(a,a)+g(b))*a.bf(g(a),b)"

a = Symbol("a", 0)
b = Symbol("b", 0)
f1 = Symbol("f", 2, 1)
g2 = Symbol("g", 1, 2)
f3 = Symbol("f", 2, 3)
g4 = Symbol("g", 1, 4)
POS = {"a": a, "b": b, "f1": f1, "g2": g2, "f3": f3, "g4": g4}


@pytest.fixture(scope="session")
def running():
    return parse(RUNNING)


@pytest.fixture(scope="session")
def lin(running):
    return linearize(running)


@pytest.fixture(scope="session")
def table(lin):
    return position_table(lin)


# Running-example transitions, printed in canonical form. f3's origins are
# (g4, b): its first child is g4(a) and its second is b.
POSITION_TRANSITIONS = {
    "(a,a)", "(b,b)",
    "((a,a),f1,f1)", "((a,f1),f1,f1)", "((a,g2),f1,f1)",
    "((f1,a),f1,f1)", "((f1,f1),f1,f1)", "((f1,g2),f1,f1)",
    "((g2,a),f1,f1)", "((g2,f1),f1,f1)", "((g2,g2),f1,f1)",
    "(f3,g2,g2)", "((g4,b),f3,f3)", "(a,g4,g4)",
}

FG = "{f1,g2}"
FATHER_TRANSITIONS = {
    "(a,{a})", "(b,{b})",
    f"(({{a}},{{a}}),f1,{FG})", f"(({{a}},{FG}),f1,{FG})",
    f"(({FG},{{a}}),f1,{FG})", f"(({FG},{FG}),f1,{FG})",
    f"({{f3}},g2,{FG})", "(({g4},{b}),f3,{f3})", "({a},g4,{g4})",
}

COMPRESSED_POSITION_TRANSITIONS = {
    "(a,{a})", "(b,{b})",
    "({a,f1,g2},{a,f1,g2},f1,{f1})",
    "({f3},g2,{g2})",
    "({g4},{b},f3,{f3})",
    "({a},g4,{g4})",
}


def sample_compressed():
    from treeglushkov.compressed import CompressedTreeAutomaton
    from treeglushkov.trees import Symbol

    f, g, a, b = Symbol("f", 2), Symbol("g", 1), Symbol("a", 0), Symbol("b", 0)
    trans = [
        (({"1", "2", "5"}, {"3", "4"}), f, {"1"}),
        (({"2", "3", "5"}, {"4", "6"}), f, {"2"}),
        (({"1", "2"}, {"3"}), f, {"5"}),
        (({"6"},), g, {"4"}),
        (({"6"},), g, {"5"}),
        ((), a, {"6"}),
        ((), a, {"4"}),
        ((), b, {"3"}),
    ]
    return CompressedTreeAutomaton.build("123456", {"1", "5"}, trans)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n].line)
