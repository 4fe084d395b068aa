"""scikit-learn style wrappers around the learning loop and the quotient."""
from __future__ import annotations

from pathlib import Path

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .learner import LearnConfig, learn
from .logic import Evaluator, check_test, parse_test
from .reachability import logical_quotient, reachable_subsystem
from .systems import PointedSystem, check_system
from .teacher import Teacher

__all__ = ["CoalgebraLearner", "LogicalQuotient", "check_teacher"]


def check_teacher(X) -> Teacher:
    """Coerce a system, a path to a system document or a teacher to a :class:`Teacher`."""
    if isinstance(X, Teacher):
        return X
    if isinstance(X, (str, Path)):
        from .io import load_system

        X = load_system(X)
    return Teacher(check_system(X))


class CoalgebraLearner(BaseEstimator):
    """Learn a minimal reachable system from a teacher.

    Parameters
    ----------
    check_invariants : bool, default=False
        Verify table sharpness, initial state and prefix-closedness after
        every step; a failure raises ``InvariantViolation``.
    max_outer_iterations : int or None, default=None
        Bound on equivalence queries; ``None`` means number of teacher
        states plus one.

    Attributes
    ----------
    model_ : PointedSystem
        The learned system; its states are teacher states.
    trace_ : RunTrace
    counters_ : dict
        Query counters of the teacher after learning.
    n_states_ : int
    """

    def __init__(self, check_invariants=False, max_outer_iterations=None):
        self.check_invariants = check_invariants
        self.max_outer_iterations = max_outer_iterations

    def fit(self, X, y=None):
        """Run the learning loop against ``X`` (a system, a document path or a teacher)."""
        teacher = check_teacher(X)
        config = LearnConfig(
            check_invariants=self.check_invariants,
            max_outer_iterations=self.max_outer_iterations,
        )
        self.model_, self.trace_ = learn(teacher, config)
        self.counters_ = teacher.counters()
        self.n_states_ = len(self.model_.states)
        return self

    def _tests(self, X):
        sys = self.model_
        tests = []
        for t in X:
            if isinstance(t, str):
                t = parse_test(t, sys)
            elif isinstance(t, list):
                t = tuple(t)
            tests.append(check_test(t, sys.kind, sys.alphabet))
        return tests

    def predict(self, X):
        """Values of the tests ``X`` at the learned initial state.

        Tests may be given as words (tuples of letters), formulas, or text.
        """
        check_is_fitted(self, "model_")
        ev = Evaluator(self.model_)
        return [ev(self.model_.initial, t) for t in self._tests(X)]

    def score(self, X, y):
        """Fraction of tests whose predicted value equals ``y``."""
        pred = self.predict(X)
        y = list(y)
        if len(pred) != len(y):
            raise ValueError(f"got {len(pred)} tests but {len(y)} target values")
        return sum(p == t for p, t in zip(pred, y)) / len(y) if y else 1.0


class LogicalQuotient(TransformerMixin, BaseEstimator):
    """Stateless transformer: a system to its minimised reachable part.

    With ``reachable_only=False`` unreachable states take part in the
    partition, but the output is still the part reachable from the initial
    block.
    """

    def __init__(self, reachable_only=True):
        self.reachable_only = reachable_only

    def fit(self, X, y=None):
        check_system(X)
        return self

    def transform(self, X) -> PointedSystem:
        sys = check_system(X)
        if self.reachable_only:
            sys = reachable_subsystem(sys)
        self.partition_, quotient = logical_quotient(sys)
        return quotient
