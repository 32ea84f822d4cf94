import random

import pytest
from hypothesis import given, strategies as st

import oracles
from cqarepair import gadgets as gd
from cqarepair.cqa import certain_answers
from cqarepair.errors import InternalConsistencyError, QueryError
from cqarepair.graphlab import SimpleGraph
from cqarepair.parser import parse_query
from cqarepair.relational import Atom, DbTuple, Literal, Query, satisfies
from cqarepair.repairs import c_repairs
from cqarepair.semantics import C, attribute

seeds = st.integers(0, 2 ** 32 - 1)


def test_triangle_encoding():
    enc = gd.encode_graph(SimpleGraph.complete(3))
    assert len(enc.instance) == 21
    assert len(enc.instance.relation("Edges")) == 9 and len(enc.instance.relation("N")) == 9
    assert sorted(t.values[2] for t in enc.instance.relation("Edges")) == list(range(1, 10))
    rs = c_repairs(enc.instance, enc.constraints)
    assert len(rs) == 3 and rs.distance == 2
    assert sorted(sorted(gd.decode_repair(enc, r)) for r in rs) == [["v0"], ["v1"], ["v2"]]


def test_single_vertex_and_single_edge():
    one = gd.encode_graph(SimpleGraph.of(["a"]))
    assert satisfies(one.instance, one.constraints)
    rs = c_repairs(one.instance, one.constraints)
    assert len(rs) == 1 and rs.distance == 0 and gd.decode_repair(one, rs[0]) == {"a"}
    edge = gd.encode_graph(SimpleGraph.of("ab", [("a", "b")]))
    rs = c_repairs(edge.instance, edge.constraints)
    assert len(rs) == 2 and rs.distance == 1
    assert sorted(sorted(gd.decode_repair(edge, r)) for r in rs) == [["a"], ["b"]]


def test_edgeless_graph_keeps_everything():
    enc = gd.encode_graph(SimpleGraph.edgeless(4))
    assert gd.decode_repair(enc, enc.instance) == set(enc.vertex_tuples)
    with pytest.raises(ValueError):
        gd.encode_graph(SimpleGraph.of([]))


def test_decode_rejects_edge_deletions():
    enc = gd.encode_graph(SimpleGraph.of("ab", [("a", "b")]))
    with pytest.raises(InternalConsistencyError):
        gd.decode_repair(enc, enc.instance.remove(DbTuple("N", (1,))))


def test_flag_image_examples(keyed):
    for text, expected in (("q() := P(a,c,d)", True), ("q() := P(a,b,c)", False)):
        q = parse_query(text, keyed.schema)
        im = gd.c_to_a_reduction(keyed.schema, keyed.ic, q, keyed.d)
        assert certain_answers(im.query, im.instance, im.constraints, attribute(im.aspec)).yes is expected
        assert certain_answers(q, keyed.d, keyed.ic, C).yes is expected
    im = gd.c_to_a_reduction(keyed.schema, keyed.ic, parse_query("q() := P(a,c,d)", keyed.schema), keyed.d2)
    assert satisfies(im.instance, im.constraints)
    assert im.flags == {"P": "E"} and im.aspec.rule == "squared"
    assert im.query.literals[0].atom.ground() == DbTuple("P", ("a", "c", "d", 1))


def test_flag_name_avoids_clashes():
    from cqarepair.parser import parse_constraints, parse_facts, parse_schema

    s = parse_schema("relation R(E: int)")
    ic = parse_constraints("deny R(x) where x > 1", s)
    im = gd.c_to_a_reduction(s, ic, parse_query("q() := R(1)", s), parse_facts("R(1)\nR(2)", s))
    assert im.flags == {"R": "E2"}
    with pytest.raises(QueryError):
        gd.c_to_a_reduction(s, ic, parse_query("q(x) := R(x)", s), parse_facts("R(1)", s))


@given(seeds)
def test_encoding_is_a_bijection(seed):
    rng = random.Random(seed)
    g = oracles.random_graph(rng, 7)
    enc = gd.encode_graph(g)
    rs = c_repairs(enc.instance, enc.constraints)
    images = [gd.decode_repair(enc, r) for r in rs]
    size, maxis = oracles.maximum_independent_sets(g)
    assert sorted(map(sorted, images)) == sorted(map(sorted, maxis))
    assert rs.distance == len(g.vertices) - size


@given(seeds)
def test_flag_image_preserves_certainty(seed):
    rng = random.Random(seed)
    schema, d, ic = oracles.random_problem(rng, max_tuples=8, max_atoms=2)
    for t in oracles.ground_atoms(rng, d, extra=1):
        q = Query((), [Literal(Atom.of_tuple(t))])
        im = gd.c_to_a_reduction(schema, ic, q, d)
        image = certain_answers(im.query, im.instance, im.constraints, attribute(im.aspec)).yes
        assert image == certain_answers(q, d, ic, C).yes
