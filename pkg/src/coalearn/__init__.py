"""Active learning of minimal reachable state-based systems with logical tests."""
from .estimator import CoalgebraLearner, LogicalQuotient
from .exceptions import (
    CoalearnError,
    InvariantViolation,
    MalformedTestError,
    ParseError,
    ProtocolError,
    SystemValidationError,
    UnclosedTableError,
    UnknownStateError,
)
from .io import export_dot, export_system, load_system, parse_system
from .learner import LearnConfig, RunTrace, Table, learn
from .logic import (
    TestSuite,
    eval_test,
    parse_formula,
    parse_test,
    parse_word,
    subformula_closure,
    suffix_closure,
    theory_row,
)
from .reachability import gamma, is_subcoalgebra, logical_quotient, reachable_part
from .systems import Kind, PointedSystem, check_system, retarget, successors, validate_system
from .teacher import EquivalenceAnswer, Teacher

__version__ = "0.1.0"
