"""Exception types shared across the package."""


class SpatNetError(Exception):
    """Base class for all spatnet errors."""


class ParseError(SpatNetError):
    """Input file could not be parsed into a valid network or scenario."""


class ScenarioParseError(ParseError):
    pass


class DuplicateIdError(SpatNetError):
    pass


class TopologyMismatchError(SpatNetError):
    pass


class DanglingEndpointError(SpatNetError):
    pass


class DuplicateDirectedPairError(SpatNetError):
    pass


class SelfLoopError(SpatNetError):
    pass


class FactorOutOfRangeError(SpatNetError):
    pass


class UnknownObjectError(SpatNetError):
    pass


class MissingGeometryError(SpatNetError):
    pass


class UnsupportedTopologyError(SpatNetError):
    pass


class MissingCategoryError(SpatNetError):
    pass


class MissingLinkCategoryError(SpatNetError):
    pass


class NegativeWeightError(SpatNetError):
    pass


class NegativeCycleError(SpatNetError):
    pass


class NegativeCapacityError(SpatNetError):
    pass


class SchemaMismatchError(SpatNetError):
    pass


class SplitFactorSumError(SpatNetError):
    """Sum of splitting factors q over an object's outgoing links exceeds 1."""


class ReceiveFactorSumError(SpatNetError):
    """Sum of receiving factors r over an object's incoming links exceeds 1."""


class ZeroCapacityError(SpatNetError):
    pass


class EmptyNetworkError(SpatNetError):
    pass


class DanglingCouplingReferenceError(SpatNetError):
    pass
