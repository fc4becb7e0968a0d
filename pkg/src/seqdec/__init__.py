"""Sequential decomposition of input/output relations.

Decide and construct decompositions R = R1 o R2 through a size-constrained
intermediate domain, for relations given explicitly, as Boolean circuits, or
as length-preserving automatic relations, with hint-based procedures and a
strategy-synthesis variant.
"""

from .errors import (
    CapExceededError,
    DomainMismatchError,
    NoTrivialDecompositionError,
    SeqdecError,
    ValidationError,
)
from .relations import (
    ConditionReport,
    Domain,
    ExplicitInstance,
    ExplicitRelation,
    ExplicitWitness,
    Mode,
    SolveResult,
    brute_force_solve,
    check_conditions,
    compose,
    trivial_decompose,
)
from .explicit_solver import (
    CcbsInstance,
    CnfFormula,
    SetCoverInstance,
    encode_cnf,
    from_ccbs,
    from_set_cover,
    max_complement,
    solve_explicit,
    solve_with_hint,
    witness_to_biclique_cover,
    witness_to_cover,
)
from .circuits import (
    BoolCircuit,
    CircuitBuilder,
    SymbolicInstance,
    eval_circuit,
    expand_to_explicit,
    verify_hint_symbolic,
)
from .automata import (
    Dfa,
    Nfa,
    TrackAlphabet,
    accepts,
    complement,
    contains,
    determinize,
    enumerate_bounded,
    is_empty,
    product,
    project,
    shortest_word,
)
from .automatic import (
    AutomaticInstance,
    bounded_decomposition_check,
    check_hint_automatic,
    count_words,
    ebp_check,
    max_complement_dfa,
    reduce_to_binary,
    solve_unary,
    verify_joint_witness,
)
from .strategic import (
    MooreTransducer,
    StrategicWitness,
    solve_strategic,
    solve_strategic_hint,
    transduce,
    verify_witness_bounded,
)

__version__ = "0.1.0"
