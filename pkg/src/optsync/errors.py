"""Exception hierarchy shared by all optsync modules."""


class OptSyncError(Exception):
    """Base class for every error raised by this package."""


class GraphError(OptSyncError, ValueError):
    pass


class SelfArc(GraphError):
    def __init__(self, vertex):
        super().__init__(f"self-arc at vertex {vertex}")
        self.vertex = vertex


class DuplicateArc(GraphError):
    def __init__(self, tail, head):
        super().__init__(f"duplicate arc ({tail}, {head})")
        self.arc = (tail, head)


class EndpointOutOfRange(GraphError):
    pass


class ZeroWeight(GraphError):
    pass


class WeightedUnsupported(GraphError):
    pass


class EmptyKeepSet(GraphError):
    pass


class NotAcyclic(GraphError):
    pass


class SpectralError(OptSyncError, ArithmeticError):
    pass


class NoZeroEigenvalue(SpectralError):
    pass


class ConvergenceFailure(SpectralError):
    pass


class RootFindingFailure(SpectralError):
    pass


class ConstructionError(OptSyncError, ValueError):
    pass


class InvalidTreeArcs(ConstructionError):
    pass


class RankOutOfRange(ConstructionError):
    pass


class NOutOfRange(ConstructionError):
    pass


class MOutOfRange(ConstructionError):
    pass


class DegreeInfeasible(ConstructionError):
    pass


class TraceMismatch(ConstructionError):
    pass


class InternalUNotFound(OptSyncError, RuntimeError):
    """Algorithm 1 found no free tail vertex; this is always a bug."""


class InstanceTooLarge(OptSyncError, ValueError):
    pass


class UnstableStepSize(OptSyncError, ValueError):
    pass
