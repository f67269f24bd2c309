"""Exception hierarchy.

Domain errors (bad input data) derive from :class:`DomainError`; broken
internal invariants derive from :class:`InternalInvariantError`.  The CLI maps
the former to exit code 2 and the latter to exit code 4.
"""


class SurfBundleError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SurfBundleError, ValueError):
    pass


class InternalInvariantError(SurfBundleError):
    pass


class NonIntegralQuotient(DomainError):
    pass


class QuotientGenusTooSmall(DomainError):
    pass


class InvalidGroup(DomainError):
    pass


class InvalidAction(DomainError):
    pass


class RelationViolated(DomainError):
    pass


class NotTransitive(DomainError):
    pass


class NotDeckTransformation(DomainError):
    pass


class GraphInvalid(DomainError):
    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"invalid labeled graph: {lines}")


class GenusTooSmall(DomainError):
    pass


class TooManyVertices(DomainError):
    pass


class NonIntegralFiberChi(DomainError):
    pass


class NoDifferingVertex(DomainError):
    pass


class UnsupportedGraph(DomainError):
    pass


class InvalidWord(DomainError):
    pass


class LagrangianNotVerified(DomainError):
    pass


class TorsionFound(InternalInvariantError):
    pass


class EulerMismatch(InternalInvariantError):
    pass


class WitnessVanishes(InternalInvariantError):
    pass


class NotSymplectic(InternalInvariantError):
    pass
