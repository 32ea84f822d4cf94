"""Descriptors for the repair semantics an engine call should use."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import SchemaError
from .relational import DbTuple, Schema, value_kind, value_key

SEMANTICS_KINDS = ("S", "C", "wC", "A")
WEIGHT_RULES = ("unit", "squared")


@dataclass(frozen=True)
class ASpec:
    """Bounded-domain attribute-repair settings.

    ``fixable`` lists ``(relation, attribute)`` pairs that may change;
    ``candidates`` maps each of them to a finite tuple of replacement values.
    A tuple may always keep its original value.
    """

    fixable: tuple
    candidates: tuple
    rule: str = "unit"

    def __post_init__(self):
        cands = self.candidates.items() if isinstance(self.candidates, Mapping) else self.candidates
        norm = tuple(sorted(((tuple(k), tuple(sorted(set(v), key=value_key))) for k, v in cands)))
        object.__setattr__(self, "candidates", norm)
        object.__setattr__(self, "fixable", tuple(tuple(f) for f in self.fixable))
        if self.rule not in WEIGHT_RULES:
            raise SchemaError(f"unknown weight rule {self.rule!r}; expected unit or squared")
        keys = {k for k, _ in norm}
        for f in self.fixable:
            if f not in keys:
                raise SchemaError(f"fixable attribute {f[0]}.{f[1]} has no candidate set")
        for k, vs in norm:
            if k not in self.fixable:
                raise SchemaError(f"candidates given for non-fixable attribute {k[0]}.{k[1]}")
            if not vs:
                raise SchemaError(f"candidate set for {k[0]}.{k[1]} is empty")

    def candidates_for(self, relation: str, attribute: str) -> tuple:
        for k, vs in self.candidates:
            if k == (relation, attribute):
                return vs
        return ()

    def check(self, schema: Schema) -> None:
        for rel, attr in self.fixable:
            r = schema[rel]
            kind = r.kinds[r.position(attr)]
            for v in self.candidates_for(rel, attr):
                if value_kind(v) != kind:
                    raise SchemaError(f"candidate {v!r} for {rel}.{attr} is not of kind {kind}")
            if self.rule == "squared" and kind != "int":
                raise SchemaError(f"squared rule needs integer attribute, {rel}.{attr} is {kind}")


@dataclass(frozen=True)
class Semantics:
    kind: str
    weights: Mapping = field(default=None, hash=False)
    aspec: ASpec = None

    def __post_init__(self):
        if self.kind not in SEMANTICS_KINDS:
            raise ValueError(f"unknown semantics {self.kind!r}")
        if self.kind == "wC":
            if self.weights is None:
                raise ValueError("weighted C semantics needs a weight mapping")
            for t, w in self.weights.items():
                if not isinstance(w, int) or isinstance(w, bool) or w <= 0:
                    raise ValueError(f"weight of {t} must be a positive integer, got {w!r}")
        if self.kind == "A" and self.aspec is None:
            raise ValueError("attribute semantics needs an ASpec")

    def __str__(self):
        return self.kind


S = Semantics("S")
C = Semantics("C")


def weighted(weights: Mapping[DbTuple, int]) -> Semantics:
    return Semantics("wC", weights=dict(weights))


def attribute(aspec: ASpec) -> Semantics:
    return Semantics("A", aspec=aspec)


def uniform_weights(tuples: Iterable[DbTuple], w: int = 1) -> dict:
    return {t: w for t in tuples}
