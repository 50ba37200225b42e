"""Exception hierarchy.

Validation problems (bad input data) derive from :class:`ValidationError`;
numerical or combinatorial failures of the solvers derive from
:class:`SolverError`.  The CLI maps the first family to exit code 1 and the
second to exit code 2.
"""


class NctxError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(NctxError, ValueError):
    pass


class SolverError(NctxError, RuntimeError):
    pass


# scenario construction
class EmptyHyperedge(ValidationError):
    pass


class DanglingVertex(ValidationError):
    pass


class SpernerViolation(ValidationError):
    def __init__(self, smaller, larger):
        self.smaller = tuple(smaller)
        self.larger = tuple(larger)
        super().__init__(
            f"hyperedge {list(self.smaller)} is a strict subset of {list(self.larger)}"
        )


class DuplicateVertexId(ValidationError):
    pass


class DuplicateHyperedge(ValidationError):
    pass


class UnknownVertex(ValidationError):
    pass


class UnknownName(ValidationError):
    pass


class NonPositiveWeight(ValidationError):
    pass


# probabilistic models
class NegativeProbability(ValidationError):
    pass


class NormalizationFailure(ValidationError):
    def __init__(self, hyperedge, total):
        self.hyperedge = tuple(hyperedge)
        self.total = total
        super().__init__(f"hyperedge {list(self.hyperedge)} sums to {total}, expected 1")


class NotInCE1(ValidationError):
    pass


class EmptyClass(NctxError):
    """The requested model class is empty (e.g. C(Γ) for a KS-uncolourable Γ)."""


# quantum realizations
class BadParameter(ValidationError):
    pass


class InvariantViolation(ValidationError):
    def __init__(self, check, residual):
        self.check = check
        self.residual = residual
        super().__init__(f"{check} failed (residual {residual:.3e})")


class MissingPairing(ValidationError):
    pass


class MissingStarSource(ValidationError):
    pass


# solvers
class TooLarge(SolverError):
    pass


class Infeasible(SolverError):
    pass


class Unbounded(SolverError):
    pass


class NoConvergence(SolverError):
    pass


class DecompositionFailure(SolverError):
    pass


# invariants / inequalities
class NoIndeterministicVertices(NctxError):
    pass


class DegenerateInvariants(NctxError):
    pass
