"""Exception hierarchy shared by every module of the package."""


class DynCCError(Exception):
    """Base class for all errors raised by dyncc."""


class DuplicateVertex(DynCCError, ValueError):
    pass


class VertexNotFound(DynCCError, KeyError):
    pass


class HasPositiveEdges(DynCCError, ValueError):
    pass


class SelfLoop(DynCCError, ValueError):
    pass


class NotPositiveAdjacent(DynCCError, ValueError):
    pass


class EdgeNotPositive(DynCCError, ValueError):
    pass


class EdgeNotNegative(DynCCError, ValueError):
    pass


class NotAPartition(DynCCError, ValueError):
    pass


class NotASingleton(DynCCError, ValueError):
    pass


class UnprocessedCluster(DynCCError, RuntimeError):
    """A cluster survived the marking phase unmarked (internal defect)."""


class TooLarge(DynCCError, ValueError):
    pass


class ParseError(DynCCError, ValueError):
    def __init__(self, line: int, reason: str) -> None:
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class UnknownVertex(ParseError):
    pass


class DuplicateEdge(ParseError):
    pass
