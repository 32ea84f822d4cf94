"""Update operations and their application to an instance."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import PreconditionError
from .relational import DatabaseInstance, DbTuple, Schema, Value, check_tuple, format_value

UPDATE_KINDS = ("insert", "delete", "change")


@dataclass(frozen=True)
class UpdateOp:
    kind: str
    target: DbTuple
    attribute: str | None = None
    value: Value | None = None

    def __post_init__(self):
        if self.kind not in UPDATE_KINDS:
            raise ValueError(f"unknown update kind {self.kind!r}")
        if (self.kind == "change") != (self.attribute is not None):
            raise ValueError("exactly the change operation carries an attribute")

    def check(self, schema: Schema) -> None:
        check_tuple(schema, self.target)
        if self.kind == "change":
            self.changed(schema)

    def changed(self, schema: Schema) -> DbTuple:
        """The tuple a change operation produces."""
        rel = schema[self.target.relation]
        t = self.target.replace(rel.position(self.attribute), self.value)
        check_tuple(schema, t)
        return t

    def __str__(self):
        s = f"{self.kind} {self.target}"
        if self.kind == "change":
            s += f" {self.attribute} = {format_value(self.value)}"
        return s


@dataclass(frozen=True)
class UpdateSequence:
    ops: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    @property
    def has_changes(self) -> bool:
        return any(op.kind == "change" for op in self.ops)

    def __str__(self):
        return "\n".join(str(op) for op in self.ops)


def apply_updates(d: DatabaseInstance, u: UpdateSequence | Iterable[UpdateOp]) -> DatabaseInstance:
    """Apply the operations in order.

    Inserting a present tuple or deleting an absent one is a no-op; changing
    an absent tuple is an error and aborts the whole sequence.
    """
    tuples = set(d.tuples)
    for op in u:
        op.check(d.schema)
        if op.kind == "insert":
            tuples.add(op.target)
        elif op.kind == "delete":
            tuples.discard(op.target)
        else:
            if op.target not in tuples:
                raise PreconditionError(f"change target {op.target} is not in the instance")
            tuples.discard(op.target)
            tuples.add(op.changed(d.schema))
    return d.with_tuples(tuples)
