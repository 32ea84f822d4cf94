import random

import pytest
from hypothesis import given, strategies as st

import oracles
from cqarepair.errors import SchemaError
from cqarepair.parser import parse_facts, parse_query, parse_schema
from cqarepair.relational import (
    INT, SYM, Atom, Comparison, Const, DatabaseInstance, DbTuple, DenialConstraint, RelationDef, Schema, Var,
    check_tuple, query_answers, satisfies, symmetric_difference, violations,
)

seeds = st.integers(0, 2 ** 32 - 1)
RS = parse_schema("relation R(X: int)\nrelation S(X: int)")


def test_satisfies_examples(keyed):
    assert not satisfies(keyed.d, keyed.ic)
    assert satisfies(DatabaseInstance.of(keyed.schema), keyed.ic)
    assert satisfies(keyed.d2, keyed.ic)
    assert len(list(violations(keyed.d, keyed.ic[0]))) >= 2


def test_query_examples(keyed):
    assert sorted(query_answers(keyed.d2, parse_query("q(x,y,z) := P(x,y,z)", keyed.schema))) == [
        ("a", "c", "d"), ("a", "c", "e")]
    assert query_answers(keyed.d2, parse_query("q() := P(a,c,d)", keyed.schema)) == {()}
    assert query_answers(keyed.d2, parse_query("q() := P(a,b,c)", keyed.schema)) == frozenset()
    d = parse_facts("R(1)\nR(2)\nS(0)", RS)
    assert sorted(query_answers(d, parse_query("q(x) := R(x), not S(x)", RS))) == [(1,), (2,)]
    d = parse_facts("R(1)\nR(2)\nS(1)", RS)
    assert sorted(query_answers(d, parse_query("q(x) := R(x), not S(x)", RS))) == [(2,)]
    assert sorted(query_answers(d, parse_query("q(x) := R(x) where x >= 2", RS))) == [(2,)]


def test_symmetric_difference_examples(keyed):
    diff = symmetric_difference(keyed.d, keyed.d2)
    assert diff.removed == {DbTuple("P", ("a", "b", "c"))} and not diff.added and diff.cardinality == 1
    assert symmetric_difference(keyed.d, keyed.d).cardinality == 0
    diff = symmetric_difference(keyed.d, keyed.d1)
    assert diff.cardinality == 2 and len(diff.removed) == 2
    with pytest.raises(SchemaError):
        symmetric_difference(keyed.d, parse_facts("R(1)", RS))


def test_schema_invariants():
    with pytest.raises(SchemaError):
        RelationDef("R", ())
    with pytest.raises(SchemaError):
        RelationDef("R", (("A", INT), ("A", SYM)))
    with pytest.raises(SchemaError):
        Schema((RelationDef("R", (("A", INT),)), RelationDef("R", (("B", INT),))))


def test_tuple_conformance(keyed):
    with pytest.raises(SchemaError):
        check_tuple(keyed.schema, DbTuple("P", ("a", "b")))
    with pytest.raises(SchemaError):
        check_tuple(RS, DbTuple("R", ("one",)))
    with pytest.raises(SchemaError):
        DatabaseInstance.of(RS, [DbTuple("Q", (1,))])


def test_order_comparison_needs_integers(keyed):
    c = DenialConstraint((Atom("P", (Var("x"), Var("y"), Var("z"))),), (Comparison(Var("x"), "<", Var("y")),))
    with pytest.raises(SchemaError):
        satisfies(keyed.d, [c])
    eq = DenialConstraint((Atom("P", (Var("x"), Var("y"), Var("z"))),), (Comparison(Var("y"), "=", Const("b")),))
    assert not satisfies(keyed.d, [eq]) and satisfies(keyed.d2, [eq])


def test_unsafe_constraint_is_rejected():
    with pytest.raises(SchemaError):
        DenialConstraint((Atom("R", (Var("x"),)),), (Comparison(Var("y"), "=", Const(1)),))


def test_deterministic_order():
    d = parse_facts("S(0)\nR(10)\nR(2)", RS)
    assert [str(t) for t in d.sorted] == ["R(2)", "R(10)", "S(0)"]


@given(seeds)
def test_satisfaction_is_closed_under_deletion(seed):
    rng = random.Random(seed)
    _, d, ic = oracles.random_problem(rng, max_tuples=12)
    if satisfies(d, ic):
        ts = d.sorted
        for _ in range(5):
            sub = [t for t in ts if rng.random() < 0.5]
            assert satisfies(d.with_tuples(sub), ic)
    else:
        assert not satisfies(d.add(*oracles.random_tuples(rng, d.schema, 2)), ic)


@given(seeds)
def test_symmetric_difference_is_symmetric(seed):
    rng = random.Random(seed)
    schema = oracles.random_schema(rng)
    a = DatabaseInstance.of(schema, oracles.random_tuples(rng, schema, 8))
    b = DatabaseInstance.of(schema, oracles.random_tuples(rng, schema, 8))
    ab, ba = symmetric_difference(a, b), symmetric_difference(b, a)
    assert ab.added == ba.removed and ab.removed == ba.added
    assert ab.cardinality == ba.cardinality == len(a.tuples ^ b.tuples)
    assert not ab.added & ab.removed


@given(seeds)
def test_positive_queries_are_monotone(seed):
    rng = random.Random(seed)
    schema = oracles.random_schema(rng)
    small = DatabaseInstance.of(schema, oracles.random_tuples(rng, schema, 6))
    big = small.add(*oracles.random_tuples(rng, schema, 6))
    q = oracles.random_conjunctive_query(rng, schema)
    assert query_answers(small, q) <= query_answers(big, q)
