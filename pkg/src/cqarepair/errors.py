"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class CqaError(Exception):
    """Base class for all errors raised by cqarepair."""


class SchemaError(CqaError, ValueError):
    """An object does not conform to the schema it is used with."""


class QueryError(CqaError, ValueError):
    """A query is malformed or used outside the class an operation supports."""


class PreconditionError(CqaError, ValueError):
    """An operation's input precondition does not hold."""


class SolverLimitError(CqaError):
    """An exact computation exceeded its vertex cap or time budget.

    ``kind`` is one of ``"vertices"``, ``"time"``, ``"tuples"``, ``"search"``
    or ``"repairs"``; ``limit`` is the configured bound that was hit.
    """

    def __init__(self, kind: str, limit, detail: str = ""):
        self.kind = kind
        self.limit = limit
        msg = f"{kind} limit exceeded (limit={limit})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class InternalConsistencyError(CqaError, AssertionError):
    """A guarantee the library relies on was observed to be violated."""
