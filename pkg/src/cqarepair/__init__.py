"""Repairs and consistent query answering for relational databases under denial constraints."""

from .cqa import AnswerSet, certain_answers, certain_c_fast, certain_s_atomic_fast, possible_answers
from .errors import (
    CqaError, InternalConsistencyError, PreconditionError, QueryError, SchemaError, SolverLimitError,
)
from .gadgets import GraphEncoding, c_to_a_reduction, decode_repair, encode_graph
from .hypergraph import ConflictHypergraph, SolverLimits, build_hypergraph
from .incremental import (
    control_wrap, fpt_min_deletions, hitting_set_bounded, incremental_c_repairs_naive,
    incremental_certain, minimized_updates,
)
from .kernels import BACKEND
from .parser import (
    ParseError, parse_aspec, parse_constraints, parse_facts, parse_instance, parse_query,
    parse_schema, parse_updates, parse_weights,
)
from .relational import (
    DatabaseInstance, DbTuple, DenialConstraint, Query, RelationDef, Schema, query_answers,
    satisfies, symmetric_difference,
)
from .repairs import (
    RepairSet, a_repairs_bounded, brute_force_repairs, c_repair_distance, c_repairs, is_c_repair,
    repairs, s_repairs, weighted_c_repairs,
)
from .semantics import ASpec, C, S, Semantics, attribute, weighted
from .updates import UpdateOp, UpdateSequence, apply_updates

__all__ = [
    "a_repairs_bounded",
    "AnswerSet",
    "apply_updates",
    "ASpec",
    "attribute",
    "BACKEND",
    "brute_force_repairs",
    "build_hypergraph",
    "C",
    "c_repair_distance",
    "c_repairs",
    "c_to_a_reduction",
    "certain_answers",
    "certain_c_fast",
    "certain_s_atomic_fast",
    "ConflictHypergraph",
    "control_wrap",
    "CqaError",
    "DatabaseInstance",
    "DbTuple",
    "decode_repair",
    "DenialConstraint",
    "encode_graph",
    "fpt_min_deletions",
    "GraphEncoding",
    "hitting_set_bounded",
    "incremental_c_repairs_naive",
    "incremental_certain",
    "InternalConsistencyError",
    "is_c_repair",
    "minimized_updates",
    "parse_aspec",
    "parse_constraints",
    "parse_facts",
    "parse_instance",
    "parse_query",
    "parse_schema",
    "parse_updates",
    "parse_weights",
    "ParseError",
    "possible_answers",
    "PreconditionError",
    "Query",
    "query_answers",
    "QueryError",
    "RelationDef",
    "repairs",
    "RepairSet",
    "S",
    "s_repairs",
    "satisfies",
    "Schema",
    "SchemaError",
    "Semantics",
    "SolverLimitError",
    "SolverLimits",
    "symmetric_difference",
    "UpdateOp",
    "UpdateSequence",
    "weighted",
    "weighted_c_repairs",
]

__version__ = "0.1.0"
