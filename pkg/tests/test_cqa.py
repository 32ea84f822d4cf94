import random

import pytest
from hypothesis import given, strategies as st

import oracles
from cqarepair import graphlab as gl
from cqarepair.cqa import certain_answers, certain_c_fast, certain_s_atomic_fast, possible_answers
from cqarepair.errors import PreconditionError, QueryError
from cqarepair.gadgets import encode_graph
from cqarepair.parser import parse_constraints, parse_facts, parse_query, parse_schema
from cqarepair.repairs import c_repairs, s_repairs
from cqarepair.relational import Atom, DatabaseInstance, Literal, Query, query_answers
from cqarepair.semantics import ASpec, C, S, attribute

seeds = st.integers(0, 2 ** 32 - 1)
ALL3 = [("a", "b", "c"), ("a", "c", "d"), ("a", "c", "e")]


def q_of(text, ex):
    return parse_query(text, ex.schema)


def ground(t, positive=True):
    return Query((), [Literal(Atom.of_tuple(t), positive)])


def test_keyed_certain_answers(keyed):
    q = q_of("q(x,y,z) := P(x,y,z)", keyed)
    assert certain_answers(q, keyed.d, keyed.ic, C).rows() == ALL3[1:]
    assert certain_answers(q, keyed.d, keyed.ic, S).rows() == []
    assert certain_answers(q, keyed.d2, keyed.ic, S).rows() == ALL3[1:]


def test_keyed_possible_answers(keyed):
    q = q_of("q(x,y,z) := P(x,y,z)", keyed)
    assert possible_answers(q, keyed.d, keyed.ic, S).rows() == ALL3
    assert possible_answers(q, keyed.d, keyed.ic, C).rows() == ALL3[1:]
    empty = DatabaseInstance.of(keyed.schema)
    assert possible_answers(q, empty, keyed.ic, S).rows() == []


def test_boolean_queries(keyed):
    yes = certain_answers(q_of("q() := P(a,c,d)", keyed), keyed.d, keyed.ic, C)
    assert yes.boolean and yes.yes and yes.rows() == [()]
    no = certain_answers(q_of("q() := P(a,b,c)", keyed), keyed.d, keyed.ic, C)
    assert not no.yes and no.mode == "certain" and no.semantics == "C"
    some = possible_answers(q_of("q() := exists y, z P(a,y,z)", keyed), keyed.d, keyed.ic, S)
    assert some.yes and () in some


def test_fast_c_examples(keyed):
    assert certain_c_fast(q_of("q() := P(a,c,d)", keyed), keyed.d, keyed.ic)
    assert not certain_c_fast(q_of("q() := P(a,b,c)", keyed), keyed.d, keyed.ic)
    assert certain_c_fast(q_of("q() := not P(q,q,q)", keyed), keyed.d, keyed.ic)
    assert certain_c_fast(q_of("q() := not P(a,b,c), P(a,c,e)", keyed), keyed.d, keyed.ic)
    assert not certain_c_fast(q_of("q() := P(a,c,d) where a != a", keyed), keyed.d, keyed.ic)


def test_fast_s_examples(keyed, star):
    assert not certain_s_atomic_fast(q_of("q() := P(a,c,d)", keyed), keyed.d, keyed.ic)
    assert certain_s_atomic_fast(q_of("q() := P(a,c,d)", keyed), keyed.d2, keyed.ic)
    assert not certain_s_atomic_fast(q_of("q() := S(0)", star), star.updated, star.ic)
    assert not certain_s_atomic_fast(q_of("q() := P(z,z,z)", keyed), keyed.d2, keyed.ic)


def test_fast_paths_reject_other_queries(keyed):
    with pytest.raises(QueryError):
        certain_c_fast(q_of("q(x) := P(x,c,d)", keyed), keyed.d, keyed.ic)
    with pytest.raises(QueryError):
        certain_s_atomic_fast(q_of("q() := P(a,c,d), P(a,c,e)", keyed), keyed.d, keyed.ic)
    with pytest.raises(QueryError):
        certain_s_atomic_fast(q_of("q() := not P(a,c,d)", keyed), keyed.d, keyed.ic)


def test_no_repair_is_a_precondition_error():
    s = parse_schema("relation T(X: int)")
    spec = ASpec((("T", "X"),), {("T", "X"): (7,)})
    d = parse_facts("T(9)", s)
    ic = parse_constraints("deny T(x) where x > 3", s)
    with pytest.raises(PreconditionError):
        certain_answers(parse_query("q() := T(9)", s), d, ic, attribute(spec))


@given(seeds)
def test_certain_within_possible_and_semantics_monotone(seed):
    rng = random.Random(seed)
    _, d, ic = oracles.random_problem(rng, max_tuples=12)
    q = oracles.random_conjunctive_query(rng, d.schema)
    cs = certain_answers(q, d, ic, S).answers
    cc = certain_answers(q, d, ic, C).answers
    assert cc <= possible_answers(q, d, ic, C).answers
    assert cs <= possible_answers(q, d, ic, S).answers
    assert cs <= cc


@given(seeds)
def test_consistent_instance_gives_classical_answers(seed):
    rng = random.Random(seed)
    ic = oracles.fd_schema_constraints()
    d = oracles.random_consistent_instance(rng, rng.randint(0, 10), 4, ic)
    q = oracles.random_conjunctive_query(rng, d.schema)
    classical = query_answers(d, q)
    for sem in (S, C):
        assert certain_answers(q, d, ic, sem).answers == classical == possible_answers(q, d, ic, sem).answers


@given(seeds)
def test_fast_paths_match_enumeration(seed):
    rng = random.Random(seed)
    _, d, ic = oracles.random_problem(rng, max_tuples=12)
    crep, srep = c_repairs(d, ic), s_repairs(d, ic)
    atoms = oracles.ground_atoms(rng, d)
    for t in atoms:
        pos, neg = ground(t), ground(t, False)
        fast = certain_c_fast(pos, d, ic)
        assert fast == certain_answers(pos, d, ic, C, rep=crep).yes
        assert certain_c_fast(neg, d, ic) == certain_answers(neg, d, ic, C, rep=crep).yes
        assert fast == (not possible_answers(neg, d, ic, C, rep=crep).yes)
        assert certain_s_atomic_fast(pos, d, ic) == certain_answers(pos, d, ic, S, rep=srep).yes
    for _ in range(3):
        picks = rng.sample(atoms, min(len(atoms), rng.randint(1, 3)))
        q = Query((), [Literal(Atom.of_tuple(t), rng.random() < 0.5) for t in picks])
        assert certain_c_fast(q, d, ic) == certain_answers(q, d, ic, C, rep=crep).yes


def _membership(g, v, question):
    """One of the four C-semantics questions about Vertex(v), answered by repair enumeration."""
    enc = encode_graph(g)
    t = enc.vertex_tuples[v]
    if question == "certain":
        return certain_answers(ground(t), enc.instance, enc.constraints, C).yes
    if question == "certain_neg":
        return certain_answers(ground(t, False), enc.instance, enc.constraints, C).yes
    if question == "possible_neg":
        return possible_answers(ground(t, False), enc.instance, enc.constraints, C).yes
    return possible_answers(ground(t), enc.instance, enc.constraints, C).yes


@given(seeds)
def test_membership_reductions_agree_with_enumeration(seed):
    rng = random.Random(seed)
    g = oracles.random_graph(rng, 5)
    v = rng.choice(g.vertices)
    _, maxis = oracles.maximum_independent_sets(g)
    truth = all(v in m for m in maxis)
    assert _membership(g, v, "certain") == truth
    g1, s1 = gl.reduce_certain_to_certain_neg(g, v)
    assert _membership(g1, s1, "certain_neg") == truth
    g2, s2 = gl.reduce_certain_neg_to_possible_neg(g1, s1)
    assert _membership(g2, s2, "possible_neg") == truth
    g3, s3 = gl.reduce_possible_neg_to_possible_pos(g2, s2)
    assert _membership(g3, s3, "possible") == truth
