"""Bottom-up Glushkov (Position) and Father tree automata for regular tree expressions."""

from .automaton import (
    StatePartition,
    Transition,
    TreeAutomaton,
    accepts,
    alphabetical_image,
    delta_on_sets,
    is_bottom_up_congruence,
    is_deterministic,
    is_isomorphic,
    quotient,
    run_tree,
)
from .compressed import (
    CompressedTransition,
    CompressedTreeAutomaton,
    accepts_compressed,
    alphabetical_image_compressed,
    expand,
    is_isomorphic_compressed,
    quotient_compressed,
    restricted_delta,
    run_compressed,
)
from .constructions import (
    ConstructionKind,
    compressed_father_automaton,
    compressed_father_automaton_general,
    compressed_position_automaton,
    compressed_position_automaton_general,
    father_automaton,
    father_automaton_general,
    father_congruence,
    position_automaton,
    position_automaton_general,
)
from .expr import (
    Apply,
    LinearExpr,
    Product,
    Star,
    Sum,
    contains_nullary,
    delinearize,
    is_linear,
    linearize,
    parse,
    validate,
)
from .oracle import (
    EnumerationBound,
    ValidationReport,
    cross_validate,
    enumerate_language,
    father_via_enumeration,
    random_expression,
    root_via_enumeration,
)
from .positions import (
    PositionTable,
    augmented_father_set,
    father_set,
    membership_by_characterization,
    position_table,
    root_set,
    satisfies_p,
)
from .trees import FatherPair, RankedAlphabet, Symbol, Tree, father_of_tree, parse_tree, root_of, substitute_all
