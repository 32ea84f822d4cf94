import random

import pytest
from hypothesis import given, strategies as st

import oracles
from cqarepair import hypergraph as hg
from cqarepair import incremental as inc
from cqarepair.cqa import certain_answers, possible_answers
from cqarepair.errors import PreconditionError, QueryError
from cqarepair.parser import parse_facts, parse_query, parse_updates
from cqarepair.relational import Atom, DbTuple, Literal, Query
from cqarepair.repairs import c_repair_distance, c_repairs
from cqarepair.semantics import C, S
from cqarepair.updates import UpdateSequence, apply_updates

seeds = st.integers(0, 2 ** 32 - 1)


def shown(rs):
    return sorted(sorted(map(str, r.sorted)) for r in rs)


def upd(text, ex):
    return parse_updates(text, ex.schema)


def test_apply_updates_examples(keyed):
    u = upd("insert P(a,f,d)", keyed)
    assert sorted(map(str, apply_updates(keyed.d2, u))) == ["P(a,c,d)", "P(a,c,e)", "P(a,f,d)"]
    assert apply_updates(keyed.d2, UpdateSequence()) == keyed.d2
    assert apply_updates(keyed.d2, upd("insert P(a,f,d)\ndelete P(a,f,d)", keyed)) == keyed.d2
    assert apply_updates(keyed.d2, upd("delete P(z,z,z)\ninsert P(a,c,d)", keyed)) == keyed.d2


def test_change_matches_delete_then_insert(keyed):
    changed = apply_updates(keyed.d, upd("change P(a,b,c) Y = q", keyed))
    by_hand = apply_updates(keyed.d, upd("delete P(a,b,c)\ninsert P(a,q,c)", keyed))
    assert changed == by_hand
    with pytest.raises(PreconditionError):
        apply_updates(keyed.d2, upd("change P(a,b,c) Y = q", keyed))


def test_minimized_updates(keyed):
    u = upd("insert P(a,f,d)\ndelete P(a,c,d)", keyed)
    assert str(inc.minimized_updates(u, keyed.schema)) == "insert P(a,f,d)"
    assert len(inc.minimized_updates(upd("delete P(a,c,d)\ndelete P(a,c,e)", keyed), keyed.schema)) == 0
    pair = inc.minimized_updates(upd("change P(a,c,d) Y = q", keyed), keyed.schema)
    assert str(pair) == "delete P(a,c,d)\ninsert P(a,q,d)"
    assert apply_updates(keyed.d2, pair) == apply_updates(keyed.d2, upd("change P(a,c,d) Y = q", keyed))


def test_parameter_bound(keyed):
    assert inc.parameter_bound(upd("insert P(a,f,d)\ninsert P(b,f,d)", keyed), keyed.schema) == 2
    assert inc.parameter_bound(upd("change P(a,c,d) Y = q", keyed), keyed.schema) == 3


def test_naive_examples(keyed):
    rs = inc.incremental_c_repairs_naive(keyed.d2, upd("insert P(a,f,d)", keyed), keyed.ic)
    assert shown(rs) == [["P(a,c,d)", "P(a,c,e)"]] and rs.distance == 1
    d_prime = parse_facts("P(a,c,d)", keyed.schema)
    rs = inc.incremental_c_repairs_naive(d_prime, upd("insert P(a,f,d)", keyed), keyed.ic)
    assert shown(rs) == [["P(a,c,d)"], ["P(a,f,d)"]] and rs.distance == 1
    rs = inc.incremental_c_repairs_naive(keyed.d2, upd("insert P(b,b,b)", keyed), keyed.ic)
    assert len(rs) == 1 and rs.distance == 0


def test_naive_needs_consistent_start(keyed):
    with pytest.raises(PreconditionError):
        inc.incremental_c_repairs_naive(keyed.d, UpdateSequence(), keyed.ic)
    with pytest.raises(PreconditionError):
        inc.fpt_min_deletions(keyed.d, UpdateSequence(), keyed.ic)


def test_bounded_hitting_set_examples(star):
    h = hg.build_hypergraph(star.updated, star.ic)
    hub = inc.hitting_set_bounded(h, 1)
    assert h.label_set(hub) == {DbTuple("S", (0,))}
    assert inc.hitting_set_bounded(hg.from_edges("ab", []), 0) == set()
    tri = hg.from_edges("abc", [("a", "b"), ("b", "c"), ("a", "c")])
    assert inc.hitting_set_bounded(tri, 1) is None
    assert len(inc.hitting_set_bounded(tri, 2)) == 2


def test_fpt_examples(keyed, star):
    opt, witness = inc.fpt_min_deletions(keyed.d2, upd("insert P(a,f,d)", keyed), keyed.ic)
    assert opt == 1 and witness == {DbTuple("P", ("a", "f", "d"))}
    assert inc.fpt_min_deletions(keyed.d2, upd("insert P(b,b,b)", keyed), keyed.ic) == (0, frozenset())
    opt, witness = inc.fpt_min_deletions(star.d, upd("insert S(0)", star), star.ic)
    assert opt == 1 and witness == {DbTuple("S", (0,))}


def test_incremental_certain_examples(keyed):
    u = upd("insert P(a,f,d)", keyed)
    q = parse_query("q() := P(a,c,d)", keyed.schema)
    assert inc.incremental_certain(q, keyed.d2, u, keyed.ic)
    d_prime = parse_facts("P(a,c,d)", keyed.schema)
    assert not inc.incremental_certain(q, d_prime, u, keyed.ic)
    untouched = parse_query("q() := P(a,c,e), not P(z,z,z)", keyed.schema)
    assert inc.incremental_certain(untouched, keyed.d2, u, keyed.ic)
    assert inc.incremental_certain(parse_query("q() := not P(a,f,d)", keyed.schema), keyed.d2, u, keyed.ic)
    with pytest.raises(QueryError):
        inc.incremental_certain(parse_query("q(x) := P(x,c,d)", keyed.schema), keyed.d2, u, keyed.ic)


def test_control_wrap_keyed_problem(keyed):
    q = parse_query("q(x,y,z) := P(x,y,z)", keyed.schema)
    w = inc.control_wrap(keyed.d, keyed.ic, q)
    assert "Controler" in w.schema and w.controlled == {"P": "Control"}
    assert all(t.values[-1] == 1 for t in w.instance)
    assert not hg.build_hypergraph(w.instance, w.constraints).edges
    ud = apply_updates(w.instance, w.update)
    assert certain_answers(w.query, ud, w.constraints, S).rows() == []
    assert possible_answers(w.query, ud, w.constraints, S).rows() == \
        possible_answers(q, keyed.d, keyed.ic, S).rows()


def test_control_wrap_star(star):
    q = parse_query("q(x) := R(x)", star.schema)
    w = inc.control_wrap(star.updated, star.ic, q)
    ud = apply_updates(w.instance, w.update)
    assert certain_answers(w.query, ud, w.constraints, S).rows() == \
        certain_answers(q, star.updated, star.ic, S).rows() == []


def test_control_wrap_rejects_negation(keyed):
    with pytest.raises(QueryError):
        inc.control_wrap(keyed.d, keyed.ic, parse_query("q() := not P(a,b,c)", keyed.schema))


@given(seeds)
def test_three_distances_agree(seed):
    rng = random.Random(seed)
    ic = oracles.fd_schema_constraints()
    d = oracles.random_consistent_instance(rng, rng.randint(0, 25), 4, ic)
    u = oracles.random_update(rng, d, rng.randint(0, 4), 4)
    opt, witness = inc.fpt_min_deletions(d, u, ic)
    naive = inc.incremental_c_repairs_naive(d, u, ic)
    ud = apply_updates(d, u)
    assert opt == naive.distance == c_repair_distance(ud, ic) == len(witness)
    assert naive.as_sets() == c_repairs(ud, ic).as_sets()
    h = hg.build_hypergraph(ud, ic)
    assert witness == h.label_set(hg.lex_least_min_hitting_set(h))


@given(seeds)
def test_every_conflict_uses_an_updated_tuple(seed):
    rng = random.Random(seed)
    ic = oracles.fd_schema_constraints()
    d = oracles.random_consistent_instance(rng, rng.randint(0, 25), 4, ic)
    u = oracles.random_update(rng, d, rng.randint(0, 4), 4)
    p = inc.prepare(d, u, ic)
    new = {p.hypergraph.vertex_id(t) for t in p.new_tuples}
    assert all(e & new for e in p.hypergraph.edges)
    assert p.hypergraph.edges == hg.build_hypergraph(p.updated, ic).edges


@given(seeds)
def test_incremental_certain_matches_enumeration(seed):
    rng = random.Random(seed)
    ic = oracles.fd_schema_constraints()
    d = oracles.random_consistent_instance(rng, rng.randint(0, 9), 3, ic)
    u = oracles.random_update(rng, d, rng.randint(0, 3), 3)
    ud = apply_updates(d, u)
    crep = c_repairs(ud, ic)
    atoms = sorted(set(ud.tuples) | oracles.random_tuples(rng, d.schema, 2, domain=3))
    for t in atoms:
        for positive in (True, False):
            q = Query((), [Literal(Atom.of_tuple(t), positive)])
            assert inc.incremental_certain(q, d, u, ic) == certain_answers(q, ud, ic, C, rep=crep).yes
    picks = rng.sample(atoms, min(len(atoms), 3))
    q = Query((), [Literal(Atom.of_tuple(t), rng.random() < 0.5) for t in picks])
    assert inc.incremental_certain(q, d, u, ic) == certain_answers(q, ud, ic, C, rep=crep).yes


@given(seeds)
def test_control_wrap_preserves_s_answers(seed):
    rng = random.Random(seed)
    _, d, ic = oracles.random_problem(rng, max_tuples=9)
    q = oracles.random_conjunctive_query(rng, d.schema)
    w = inc.control_wrap(d, ic, q)
    assert not hg.build_hypergraph(w.instance, w.constraints).edges
    ud = apply_updates(w.instance, w.update)
    assert certain_answers(w.query, ud, w.constraints, S).answers == certain_answers(q, d, ic, S).answers
